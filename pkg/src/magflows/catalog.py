"""Worked example systems: metrics, magnetic coefficients, first integrals
and level parametrizations, transcribed in closed form.

Each entry couples a MagneticSystem with its known first integrals and a
few sample phase points on the reference energy level.  Entries generated
by the rational-integral machinery (ex5, ex6) are deliberately transcribed
here as explicit formulas rather than built through
:mod:`magflows.rational`; tests compare the two routes against each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import UnknownExample
from .geometry import (
    ChartDomain,
    MagneticSystem,
    Metric,
    conformal_metric,
    momentum_on_level,
)
from .hodograph import example3_system
from .integrals import FirstIntegral

__all__ = [
    "CatalogEntry",
    "EXAMPLE_NAMES",
    "get_example",
    "list_examples",
    "larmor_orbit",
]


@dataclass(frozen=True)
class CatalogEntry:
    """One worked example with everything its checks need."""

    name: str
    description: str
    system: MagneticSystem
    integrals: tuple
    sample_phases: np.ndarray
    curvature_kind: str  # "flat" or "curved"
    curvature_probes: tuple
    momentum_parametrization: Optional[Callable] = None
    independent_count: Optional[int] = None
    bundle_descriptor: Optional[dict] = field(default=None)

    def integral_named(self, name: str) -> FirstIntegral:
        for f in self.integrals:
            if f.name == name:
                return f
        raise UnknownExample(f"{self.name} has no integral named {name!r}")


def _phases(system: MagneticSystem, points_angles) -> np.ndarray:
    rows = []
    for x, y, phi in points_angles:
        p = momentum_on_level(system, x, y, phi)
        rows.append([x, y, p[0], p[1]])
    return np.array(rows)


# ---------------------------------------------------------------------------
# ex1: uniform field on the Euclidean plane
# ---------------------------------------------------------------------------

_EX1_B = 1.0


def larmor_orbit(phase0, t: float, b: float = _EX1_B) -> np.ndarray:
    """Exact trajectory of the uniform-field flat system.

    Momenta rotate with angular velocity -b; positions integrate them.
    Serves as the reference solution in integrator convergence checks.
    """
    x0, y0, p10, p20 = (float(v) for v in phase0)
    cb, sb = math.cos(b * t), math.sin(b * t)
    p1 = p10 * cb + p20 * sb
    p2 = -p10 * sb + p20 * cb
    x = x0 + (p10 * sb + p20 * (1.0 - cb)) / b
    y = y0 + (-p10 * (1.0 - cb) + p20 * sb) / b
    return np.array([x, y, p1, p2])


def _make_ex1() -> CatalogEntry:
    b = _EX1_B
    metric = Metric(
        components=lambda x, y: (1.0, 0.0, 1.0),
        partials=lambda x, y: ((0.0, 0.0, 0.0), (0.0, 0.0, 0.0)),
    )
    system = MagneticSystem(
        metric=metric,
        field=lambda x, y: b,
        domain=ChartDomain(bbox=(-8.0, 8.0, -8.0, 8.0)),
        energy=1.0,
        name="uniform field, flat plane",
    )

    def func(state):
        return math.cos(state[2] / b - state[1])

    def grad(state):
        s = math.sin(state[2] / b - state[1])
        return np.array([0.0, s, -s / b, 0.0])

    integral = FirstIntegral(name="F", kind="transcendental", func=func, grad=grad)
    return CatalogEntry(
        name="ex1",
        description="Euclidean plane with a uniform magnetic field and a "
        "transcendental integral of a shifted momentum phase.",
        system=system,
        integrals=(integral,),
        sample_phases=_phases(system, [(0.0, 0.0, 0.3), (1.0, -0.5, 2.0), (-2.0, 1.5, 4.4)]),
        curvature_kind="flat",
        curvature_probes=((0.0, 0.0), (1.5, -1.0)),
    )


# ---------------------------------------------------------------------------
# ex2 and ex2b: conformal factor depending on one coordinate
# ---------------------------------------------------------------------------


def _channel_entry(
    name: str,
    description: str,
    lam: Callable[[float], float],
    lam_prime: Callable[[float], float],
    potential: Callable[[float], float],
    potential_prime: Callable[[float], float],
) -> CatalogEntry:
    """Conformal metric lam(y)(dx^2+dy^2) with field -potential'(y) and the
    linear integral p1 + potential(y), conserved on every level."""
    metric = conformal_metric(
        lambda x, y: lam(y), lambda x, y: (0.0, lam_prime(y))
    )
    system = MagneticSystem(
        metric=metric,
        field=lambda x, y: -potential_prime(y),
        domain=ChartDomain(bbox=(-8.0, 8.0, -8.0, 8.0)),
        energy=1.0,
        name=name,
    )

    def func(state):
        return state[2] + potential(state[1])

    def grad(state):
        return np.array([0.0, potential_prime(state[1]), 1.0, 0.0])

    integral = FirstIntegral(name="F1", kind="linear", func=func, grad=grad)
    return CatalogEntry(
        name=name,
        description=description,
        system=system,
        integrals=(integral,),
        sample_phases=_phases(
            system, [(0.3, -0.4, 0.9), (-1.2, 0.8, 2.7), (2.0, 1.7, 5.1)]
        ),
        curvature_kind="curved",
        curvature_probes=((0.0, 0.0), (0.5, 0.4)),
    )


def _make_ex2() -> CatalogEntry:
    return _channel_entry(
        "ex2",
        "Conformal channel metric with a cosine profile; linear integral "
        "from translational symmetry.",
        lam=lambda y: 2.0 + math.cos(y),
        lam_prime=lambda y: -math.sin(y),
        potential=math.sin,
        potential_prime=math.cos,
    )


def _make_ex2b() -> CatalogEntry:
    return _channel_entry(
        "ex2b",
        "Second translational-symmetry instance with a rational conformal "
        "factor and arctangent potential.",
        lam=lambda y: 1.0 / (1.0 + y * y),
        lam_prime=lambda y: -2.0 * y / (1.0 + y * y) ** 2,
        potential=math.atan,
        potential_prime=lambda y: 1.0 / (1.0 + y * y),
    )


# ---------------------------------------------------------------------------
# ex3: curved chart with a quadratic integral on its level
# ---------------------------------------------------------------------------


def _make_ex3() -> CatalogEntry:
    system, integral = example3_system()
    return CatalogEntry(
        name="ex3",
        description="Curved polynomial metric in a transformed chart "
        "carrying a quadratic integral on the level {H = 1/2}.",
        system=system,
        integrals=(integral,),
        sample_phases=_phases(
            system, [(4.0, 0.0, 0.4), (3.8, 0.2, 2.2), (4.25, -0.15, 4.6)]
        ),
        curvature_kind="curved",
        curvature_probes=((4.0, 0.0), (4.9, -0.65)),
    )


# ---------------------------------------------------------------------------
# ex4: inverse-radius conformal factor, flat and superintegrable
# ---------------------------------------------------------------------------


def _make_ex4() -> CatalogEntry:
    gamma = 1.0

    def lam(x, y):
        return 1.0 / math.hypot(x, y)

    def lam_partials(x, y):
        r3 = math.hypot(x, y) ** 3
        return -x / r3, -y / r3

    metric = conformal_metric(lam, lam_partials)

    def predicate(x, y):
        r = math.hypot(x, y)
        return 0.05 < r < 40.0

    system = MagneticSystem(
        metric=metric,
        field=lambda x, y: -gamma / (2.0 * math.hypot(x, y)),
        domain=ChartDomain(bbox=(0.5, 2.5, 0.5, 2.5), predicate=predicate),
        energy=1.0,
        name="inverse-radius conformal chart",
    )

    def f_num_den(state):
        x, y, p1, p2 = state
        r = math.hypot(x, y)
        num = (r - x) * p1 - y * p2 + gamma * y
        den = y * p1 + (r - x) * p2 + gamma * (r - x)
        return r, num, den

    def f_func(state):
        _, num, den = f_num_den(state)
        return num / den

    def f_guard(state):
        _, _, den = f_num_den(state)
        return abs(den) >= 1e-8

    def f_grad(state):
        x, y, p1, p2 = state
        r = math.hypot(x, y)
        num = (r - x) * p1 - y * p2 + gamma * y
        den = y * p1 + (r - x) * p2 + gamma * (r - x)
        rx, ry = x / r, y / r
        n_x = (rx - 1.0) * p1
        n_y = ry * p1 - p2 + gamma
        n_p1, n_p2 = r - x, -y
        d_x = (rx - 1.0) * p2 + gamma * (rx - 1.0)
        d_y = p1 + ry * p2 + gamma * ry
        d_p1, d_p2 = y, r - x
        inv2 = 1.0 / (den * den)
        return np.array(
            [
                (n_x * den - num * d_x) * inv2,
                (n_y * den - num * d_y) * inv2,
                (n_p1 * den - num * d_p1) * inv2,
                (n_p2 * den - num * d_p2) * inv2,
            ]
        )

    f_rational = FirstIntegral(
        name="F", kind="rational", func=f_func, grad=f_grad, guard=f_guard
    )

    def f1_func(state):
        x, y, p1, p2 = state
        return -y * p1 + x * p2 - 0.5 * gamma * math.hypot(x, y)

    def f1_grad(state):
        x, y, p1, p2 = state
        r = math.hypot(x, y)
        return np.array(
            [p2 - 0.5 * gamma * x / r, -p1 - 0.5 * gamma * y / r, -y, x]
        )

    f1_linear = FirstIntegral(name="F1", kind="linear", func=f1_func, grad=f1_grad)
    return CatalogEntry(
        name="ex4",
        description="Flat inverse-radius conformal chart, superintegrable: "
        "a rotational linear integral and a rational one, all levels.",
        system=system,
        integrals=(f_rational, f1_linear),
        sample_phases=_phases(
            system, [(1.0, 1.0, 0.5), (1.5, 0.8, 2.4), (0.8, 1.6, 4.0)]
        ),
        curvature_kind="flat",
        curvature_probes=((1.0, 1.0), (1.4, 0.7)),
        independent_count=3,
    )


# ---------------------------------------------------------------------------
# ex5: rational-integral flow with the degree-two polynomial profile
# ---------------------------------------------------------------------------


def _make_ex5() -> CatalogEntry:
    gamma, c = 1.0, 1.0
    g2 = gamma * gamma

    def pref(rho):
        return 2.0 * g2 * (rho + 1.0) / c

    def components(rho, psi):
        p = pref(rho)
        c4, s4 = math.cos(4.0 * psi), math.sin(4.0 * psi)
        g11 = 2.0 * p
        g12 = p * s4
        g22 = p * (1.0 + 2.0 * rho + 2.0 * rho * rho + (1.0 + 2.0 * rho) * c4)
        return g11, g12, g22

    def partials(rho, psi):
        p = pref(rho)
        dp = 2.0 * g2 / c
        c4, s4 = math.cos(4.0 * psi), math.sin(4.0 * psi)
        a22 = 1.0 + 2.0 * rho + 2.0 * rho * rho + (1.0 + 2.0 * rho) * c4
        d11_r, d11_p = 2.0 * dp, 0.0
        d12_r, d12_p = dp * s4, 4.0 * p * c4
        d22_r = dp * a22 + p * (2.0 + 4.0 * rho + 2.0 * c4)
        d22_p = -4.0 * p * (1.0 + 2.0 * rho) * s4
        return (d11_r, d12_r, d22_r), (d11_p, d12_p, d22_p)

    def predicate(rho, psi):
        cc = math.cos(2.0 * psi)
        return (-cc * cc + 0.02) < rho < 50.0

    system = MagneticSystem(
        metric=Metric(components=components, partials=partials),
        field=lambda rho, psi: gamma * math.cos(2.0 * psi),
        domain=ChartDomain(
            bbox=(0.05, 5.0, 0.0, 2.0 * math.pi),
            predicate=predicate,
            periods=(None, 2.0 * math.pi),
        ),
        energy=c,
        name="rational flow, quadratic radial profile",
        coords=("rho", "psi"),
    )

    def num_den_parts(state):
        rho, psi, p_r, p_p = state
        ch, sh = math.cos(0.5 * psi), math.sin(0.5 * psi)
        cp, sp = math.cos(psi), math.sin(psi)
        c2 = math.cos(2.0 * psi)
        s2 = math.sin(2.0 * psi)
        c4, s4 = math.cos(4.0 * psi), math.sin(4.0 * psi)
        c15, s15 = math.cos(1.5 * psi), math.sin(1.5 * psi)
        a = rho - 2.0 * rho * cp - c2
        b = rho + 2.0 * rho * cp - c2
        disc = 1.0 + 2.0 * rho + c4
        num = ch * a * p_r + s15 * p_p + gamma * disc * sh
        den = -sh * b * p_r - c15 * p_p + gamma * disc * ch
        num_grad = np.array(
            [
                ch * (1.0 - 2.0 * cp) * p_r + 2.0 * gamma * sh,
                (-0.5 * sh * a + ch * (2.0 * rho * sp + 2.0 * s2)) * p_r
                + 1.5 * c15 * p_p
                + gamma * (-4.0 * s4 * sh + 0.5 * disc * ch),
                ch * a,
                s15,
            ]
        )
        den_grad = np.array(
            [
                -sh * (1.0 + 2.0 * cp) * p_r + 2.0 * gamma * ch,
                (-0.5 * ch * b - sh * (-2.0 * rho * sp + 2.0 * s2)) * p_r
                + 1.5 * s15 * p_p
                + gamma * (-4.0 * s4 * ch - 0.5 * disc * sh),
                -sh * b,
                -c15,
            ]
        )
        return num, den, num_grad, den_grad

    def func(state):
        num, den, _, _ = num_den_parts(state)
        return num / den

    def grad(state):
        num, den, ng, dg = num_den_parts(state)
        return (ng * den - num * dg) / (den * den)

    def guard(state):
        _, den, _, _ = num_den_parts(state)
        return abs(den) >= 1e-8

    integral = FirstIntegral(
        name="F", kind="rational", func=func, grad=grad, level=c, guard=guard
    )

    def parametrize(rho, psi, phi):
        s = math.sqrt(g2 * (1.0 + rho))
        p_r = -2.0 * s * math.cos(phi - psi)
        p_p = -s * (math.sin(phi + 3.0 * psi) + (1.0 + 2.0 * rho) * math.sin(phi - psi))
        return p_r, p_p

    return CatalogEntry(
        name="ex5",
        description="Rational-integral flow generated by the degree-two "
        "polynomial profile, conserved on {H = 1/2}.",
        system=system,
        integrals=(integral,),
        sample_phases=_phases(
            system, [(1.0, 0.7, 0.8), (2.0, 2.0, 2.9), (0.8, 4.3, 5.3)]
        ),
        curvature_kind="curved",
        curvature_probes=((1.0, 0.7), (1.5, 2.4)),
        momentum_parametrization=parametrize,
        bundle_descriptor={
            "family": "poly-cos",
            "parameters": {"k": 2, "psi0": 0.0},
            "gamma": gamma,
            "c_energy": c,
        },
    )


# ---------------------------------------------------------------------------
# ex6: rational-integral flow with the logarithmic profile
# ---------------------------------------------------------------------------


def _make_ex6() -> CatalogEntry:
    gamma, c = 1.0, 1.0
    g2 = gamma * gamma

    def pref(rho):
        return g2 / (2.0 * c * rho ** 4 * (rho + 1.0) ** 3)

    def pref_prime(rho):
        return -g2 * (7.0 * rho + 4.0) / (2.0 * c * rho ** 5 * (rho + 1.0) ** 4)

    def components(rho, psi):
        p = pref(rho)
        c2, s2 = math.cos(2.0 * psi), math.sin(2.0 * psi)
        a11 = 1.0 + 2.0 * rho * (rho + 1.0) - (1.0 + 2.0 * rho) * c2
        a12 = -rho * (rho + 1.0) * s2
        a22 = 2.0 * rho * rho * (rho + 1.0) ** 2
        return p * a11, p * a12, p * a22

    def partials(rho, psi):
        p = pref(rho)
        dp = pref_prime(rho)
        c2, s2 = math.cos(2.0 * psi), math.sin(2.0 * psi)
        a11 = 1.0 + 2.0 * rho * (rho + 1.0) - (1.0 + 2.0 * rho) * c2
        a11_r = 2.0 * (2.0 * rho + 1.0) - 2.0 * c2
        a11_p = 2.0 * (1.0 + 2.0 * rho) * s2
        a12 = -rho * (rho + 1.0) * s2
        a12_r = -(2.0 * rho + 1.0) * s2
        a12_p = -2.0 * rho * (rho + 1.0) * c2
        a22 = 2.0 * rho * rho * (rho + 1.0) ** 2
        a22_r = 4.0 * rho * (rho + 1.0) * (2.0 * rho + 1.0)
        return (
            (dp * a11 + p * a11_r, dp * a12 + p * a12_r, dp * a22 + p * a22_r),
            (p * a11_p, p * a12_p, 0.0),
        )

    def predicate(rho, psi):
        return 0.02 < rho < 40.0

    system = MagneticSystem(
        metric=Metric(components=components, partials=partials),
        field=lambda rho, psi: -gamma * math.cos(psi) / (2.0 * rho * (rho + 1.0) ** 2),
        domain=ChartDomain(
            bbox=(0.1, 3.0, 0.0, 2.0 * math.pi),
            predicate=predicate,
            periods=(None, 2.0 * math.pi),
        ),
        energy=c,
        name="rational flow, logarithmic profile",
        coords=("rho", "psi"),
    )

    def num_den_parts(state):
        rho, psi, p_r, p_p = state
        ch, sh = math.cos(0.5 * psi), math.sin(0.5 * psi)
        cp, sp = math.cos(psi), math.sin(psi)
        c2, s2 = math.cos(2.0 * psi), math.sin(2.0 * psi)
        c15, s15 = math.cos(1.5 * psi), math.sin(1.5 * psi)
        q = rho * (rho + 1.0)
        dq = 2.0 * rho + 1.0
        pfac = 1.0 + rho + (1.0 + 2.0 * rho) * cp
        mfac = 1.0 + rho - (1.0 + 2.0 * rho) * cp
        disc = 1.0 + 2.0 * rho - c2
        num = 2.0 * q * (p_r * q * c15 + p_p * pfac * sh) + gamma * disc * sh
        den = 2.0 * q * (-p_r * q * s15 - p_p * mfac * ch) + gamma * disc * ch
        pfac_r, pfac_p = 1.0 + 2.0 * cp, -(1.0 + 2.0 * rho) * sp
        mfac_r, mfac_p = 1.0 - 2.0 * cp, (1.0 + 2.0 * rho) * sp
        num_grad = np.array(
            [
                2.0 * dq * (p_r * q * c15 + p_p * pfac * sh)
                + 2.0 * q * (p_r * dq * c15 + p_p * pfac_r * sh)
                + 2.0 * gamma * sh,
                2.0 * q * (
                    -1.5 * p_r * q * s15 + p_p * (pfac_p * sh + 0.5 * pfac * ch)
                )
                + gamma * (2.0 * s2 * sh + 0.5 * disc * ch),
                2.0 * q * q * c15,
                2.0 * q * pfac * sh,
            ]
        )
        den_grad = np.array(
            [
                2.0 * dq * (-p_r * q * s15 - p_p * mfac * ch)
                + 2.0 * q * (-p_r * dq * s15 - p_p * mfac_r * ch)
                + 2.0 * gamma * ch,
                2.0 * q * (
                    -1.5 * p_r * q * c15 - p_p * (mfac_p * ch - 0.5 * mfac * sh)
                )
                + gamma * (2.0 * s2 * ch - 0.5 * disc * sh),
                -2.0 * q * q * s15,
                -2.0 * q * mfac * ch,
            ]
        )
        return num, den, num_grad, den_grad

    def func(state):
        num, den, _, _ = num_den_parts(state)
        return num / den

    def grad(state):
        num, den, ng, dg = num_den_parts(state)
        return (ng * den - num * dg) / (den * den)

    def guard(state):
        _, den, _, _ = num_den_parts(state)
        return abs(den) >= 1e-8

    integral = FirstIntegral(
        name="F", kind="rational", func=func, grad=grad, level=c, guard=guard
    )

    def parametrize(rho, psi, phi):
        p_r = gamma * (
            -math.cos(phi) + (1.0 + 2.0 * rho) * math.cos(phi + 2.0 * psi)
        ) / (2.0 * rho * rho * (1.0 + rho) ** 1.5)
        p_p = gamma * math.sin(phi + 2.0 * psi) / (rho * math.sqrt(1.0 + rho))
        return p_r, p_p

    return CatalogEntry(
        name="ex6",
        description="Rational-integral flow generated by the logarithmic "
        "profile on rho > 0, conserved on {H = 1/2}.",
        system=system,
        integrals=(integral,),
        sample_phases=_phases(
            system, [(1.0, 0.6, 1.6), (1.4, 2.8, 4.7), (0.7, 4.4, 2.4)]
        ),
        curvature_kind="curved",
        curvature_probes=((1.0, 0.6), (1.3, 2.0)),
        momentum_parametrization=parametrize,
        bundle_descriptor={
            "family": "log-nu1",
            "parameters": {},
            "gamma": gamma,
            "c_energy": c,
        },
    )


_FACTORIES = {
    "ex1": _make_ex1,
    "ex2": _make_ex2,
    "ex2b": _make_ex2b,
    "ex3": _make_ex3,
    "ex4": _make_ex4,
    "ex5": _make_ex5,
    "ex6": _make_ex6,
}

EXAMPLE_NAMES = tuple(_FACTORIES)


def get_example(name: str) -> CatalogEntry:
    try:
        factory = _FACTORIES[name]
    except KeyError:
        raise UnknownExample(
            f"unknown example {name!r}; available: {', '.join(EXAMPLE_NAMES)}"
        ) from None
    return factory()


def list_examples() -> list:
    return [get_example(n) for n in EXAMPLE_NAMES]
