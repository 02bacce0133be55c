"""Heat, torque and force for the rotation axis along the pair axis (z).

Geometry and conventions.  Particle 1 sits at the origin, particle 2 at
(0, 0, d); particle 2 rotates with angular velocity Omega >= 0 about the
z axis.  Torque is the z component acting on particle 1, positive along
+z (the rotation sense of particle 2).  Force is the z component on
particle 1, positive toward particle 2, so a positive static value means
attraction.  Heat is the power absorbed by particle 1.

Each observable is a frequency integral over products of the two
polarizabilities, Doppler-shifted by +-Omega for the transverse dipole
channels and weighted by coth occupation differences.  The integrals are
folded onto (0, omega_max) using the conjugate symmetry of alpha; the
quantum (T=0) parts reduce to the anomalous-Doppler window (0, Omega)
where the shifted frequency omega - Omega is negative.

The mutual-polarization denominators 1 - alpha1*alpha2/d^6 can approach
zero on the anomalous-Doppler window once d drops below the critical
separation.  Before integrating, the denominator modulus is scanned on a
coarse grid plus refined windows around the resonance hints; scenarios
whose minimum falls below the pole guard threshold raise
SingularScenario rather than returning a meaningless number.  Exactly
singular rotation rates that slip between scan points are still caught:
the integrator runs out of budget there and raises QuadratureFailure.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .constants import HBAR, KB
from .materials import NoRootError, Particle, polarizability, resonance_params
from .quadrature import IntegralResult, QuadratureConfig, integrate, integrate_oracle
from .spectral import ThermalPair, coth_difference, coth_factor

# Denominator-modulus floor below which a scenario is declared singular.
POLE_GUARD_Z = 1e-6
# Coarse guard scan resolution over the full integration range.
GUARD_SCAN_POINTS = 2048
# Refined scan points per pole hint window.
GUARD_REFINE_POINTS = 257
# Frequencies with |w| below this floor are nudged onto it before coth
# factors are formed.  The physical integrands are continuous there (the
# Im alpha zeros cancel the coth poles); the nudge only dodges the exact
# 0*inf at isolated sample points.  1e-3 rad/s is ~17 orders below any
# physical scale in play.
OMEGA_FLOOR = 1e-3


class SingularScenario(Exception):
    """The scenario sits on a mutual-polarization pole (d at/below critical)."""


class Axis(enum.Enum):
    Z = "z"
    XPRIME = "xprime"


@dataclass(frozen=True)
class Scenario:
    """Pair geometry and kinematics.

    d is the center separation (m), Omega the rotation rate (rad/s) of
    particle 2 about the given axis.
    """

    p1: Particle
    p2: Particle
    d: float
    Omega: float
    axis: Axis = Axis.Z

    def __post_init__(self):
        if self.d <= self.p1.radius + self.p2.radius:
            raise ValueError(
                f"particles overlap: d={self.d} <= R1+R2="
                f"{self.p1.radius + self.p2.radius}"
            )
        if self.Omega < 0.0:
            raise ValueError("Omega must be >= 0")

    @property
    def dipole_ratio(self) -> float:
        """Multipole expansion parameter 2*max(R)/d (dipole model needs << 1)."""
        return 2.0 * max(self.p1.radius, self.p2.radius) / self.d

    @property
    def thermal(self) -> ThermalPair:
        return ThermalPair(self.p1.temperature, self.p2.temperature)


@dataclass(frozen=True)
class ObservableResult:
    """Value, quadrature error estimate and T=0 part of one observable."""

    value: float
    abs_error: float
    quantum_part: float

    def __post_init__(self):
        if self.abs_error < 0.0:
            raise ValueError("abs_error must be >= 0")


def _require_axis(s: Scenario, axis: Axis):
    if s.axis is not axis:
        raise ValueError(f"scenario axis is {s.axis}, operation needs {axis}")


def _floor0(w):
    """Nudge exact zeros (and subnormal magnitudes) onto OMEGA_FLOOR."""
    w = np.asarray(w, dtype=float)
    return np.where(np.abs(w) < OMEGA_FLOOR, OMEGA_FLOOR, w)


def omega_max(s: Scenario, thermal: ThermalPair) -> float:
    """Truncation frequency: resonances, Doppler shift and thermal tail."""
    w_l = max(s.p1.material.omega_L, s.p2.material.omega_L)
    return max(s.Omega + 5.0 * w_l, 20.0 * KB * thermal.t_max / HBAR)


def _resonance_hints(s: Scenario, upper: float):
    """Peak positions of the integrands on (0, upper), with +-{1,3,10}
    linewidth expansions, for quadrature pre-splitting and guard scans."""
    hints = []
    for particle, shifts in ((s.p1, (0.0,)), (s.p2, (0.0, s.Omega, -s.Omega))):
        try:
            res = resonance_params(particle.material)
        except NoRootError:
            continue
        for shift in shifts:
            for center in (shift + res.omega0, shift - res.omega0):
                for k in (0.0, 1.0, -1.0, 3.0, -3.0, 10.0, -10.0):
                    h = center + k * res.gamma_res
                    if 0.0 < h < upper:
                        hints.append(h)
    if 0.0 < s.Omega < upper:
        hints.append(s.Omega)  # occupation kink at the window edge
    return tuple(sorted(set(hints)))


def _guard_grid(lo, hi, hints):
    grid = [np.linspace(lo, hi, GUARD_SCAN_POINTS)]
    for h in hints:
        half = max(1e-4 * (hi - lo), 1e-6 * h)
        a = max(lo, h - half)
        b = min(hi, h + half)
        if a < b:
            grid.append(np.linspace(a, b, GUARD_REFINE_POINTS))
    return np.concatenate(grid)


def _check_poles_z(s: Scenario, upper: float, cfg: QuadratureConfig):
    """Scan the Doppler denominator minimum; raise SingularScenario below
    the guard threshold."""
    threshold = cfg.pole_guard if cfg.pole_guard is not None else POLE_GUARD_Z
    w = _guard_grid(0.0, upper, _resonance_hints(s, upper))
    a1 = polarizability(s.p1, w)
    a2m = polarizability(s.p2, w - s.Omega)
    dmin = np.min(np.abs(1.0 - a1 * a2m / s.d**6))
    if dmin < threshold:
        raise SingularScenario(
            f"Doppler denominator minimum {dmin:.3e} below pole guard "
            f"{threshold:.1e}: d is at/below the critical separation for "
            f"this rotation rate"
        )


def _run(f, a, b, cfg: QuadratureConfig) -> IntegralResult:
    if cfg.oracle_mode:
        return integrate_oracle(f, a, b, cfg.oracle_points)
    return integrate(f, a, b, cfg)


def _prepare(s: Scenario, thermal: ThermalPair, cfg):
    cfg = cfg if cfg is not None else QuadratureConfig()
    upper = omega_max(s, thermal)
    cfg = cfg.with_hints(_resonance_hints(s, upper))
    _check_poles_z(s, upper, cfg)
    return cfg, upper


# --- integrand builders ----------------------------------------------------


def _doppler_heat_integrand(s: Scenario, thermal: ThermalPair):
    d6 = s.d**6
    Om = s.Omega
    t1, t2 = thermal.t1, thermal.t2

    def f(w):
        w = _floor0(w)
        wm = _floor0(w - Om)
        wp = w + Om
        a1 = polarizability(s.p1, w)
        a2m = polarizability(s.p2, wm)
        a2p = polarizability(s.p2, wp)
        km = (
            a1.imag * a2m.imag / np.abs(1.0 - a1 * a2m / d6) ** 2
            * coth_difference(wm, t2, w, t1)
        )
        kp = (
            a1.imag * a2p.imag / np.abs(1.0 - a1 * a2p / d6) ** 2
            * coth_difference(wp, t2, w, t1)
        )
        return w * (km + kp)

    return f


def _static_heat_integrand(s: Scenario, thermal: ThermalPair):
    d6 = s.d**6
    t1, t2 = thermal.t1, thermal.t2

    def f(w):
        w = _floor0(w)
        a1 = polarizability(s.p1, w)
        a2 = polarizability(s.p2, w)
        num = 2.0 * a1.imag * a2.imag / np.abs(1.0 - 4.0 * a1 * a2 / d6) ** 2
        return w * num * coth_difference(w, t2, w, t1)

    return f


def _quantum_heat_integrand(s: Scenario):
    d6 = s.d**6
    Om = s.Omega

    def f(w):
        w = _floor0(w)
        a1 = polarizability(s.p1, w)
        a2m = polarizability(s.p2, w - Om)
        return w * a1.imag * a2m.imag / np.abs(1.0 - a1 * a2m / d6) ** 2

    return f


def _torque_integrand(s: Scenario, thermal: ThermalPair):
    d6 = s.d**6
    Om = s.Omega
    t1, t2 = thermal.t1, thermal.t2

    def f(w):
        w = _floor0(w)
        wm = _floor0(w - Om)
        wp = w + Om
        a1 = polarizability(s.p1, w)
        a2m = polarizability(s.p2, wm)
        a2p = polarizability(s.p2, wp)
        km = (
            a1.imag * a2m.imag / np.abs(1.0 - a1 * a2m / d6) ** 2
            * coth_difference(wm, t2, w, t1)
        )
        kp = (
            a1.imag * a2p.imag / np.abs(1.0 - a1 * a2p / d6) ** 2
            * coth_difference(wp, t2, w, t1)
        )
        return km - kp

    return f


def _quantum_torque_integrand(s: Scenario):
    d6 = s.d**6
    Om = s.Omega

    def f(w):
        w = _floor0(w)
        a1 = polarizability(s.p1, w)
        a2m = polarizability(s.p2, w - Om)
        return a1.imag * a2m.imag / np.abs(1.0 - a1 * a2m / d6) ** 2

    return f


def _static_force_integrand(s: Scenario, thermal: ThermalPair):
    d6 = s.d**6
    t1, t2 = thermal.t1, thermal.t2

    def f(w):
        w = _floor0(w)
        a1 = polarizability(s.p1, w)
        a2 = polarizability(s.p2, w)
        den = np.abs(1.0 - 4.0 * a1 * a2 / d6) ** 2
        return (6.0 / den) * (
            a1.imag * a2.real * coth_factor(w, t1)
            + a1.real * a2.imag * coth_factor(w, t2)
        )

    return f


def _doppler_force_integrand(s: Scenario, thermal: ThermalPair):
    d6 = s.d**6
    Om = s.Omega
    t1, t2 = thermal.t1, thermal.t2

    def f(w):
        w = _floor0(w)
        wm = _floor0(w - Om)
        wp = w + Om
        a1 = polarizability(s.p1, w)
        a2m = polarizability(s.p2, wm)
        a2p = polarizability(s.p2, wp)
        cth1 = coth_factor(w, t1)
        km = (3.0 / np.abs(1.0 - a1 * a2m / d6) ** 2) * (
            a1.real * a2m.imag * coth_factor(wm, t2) + a1.imag * a2m.real * cth1
        )
        kp = (3.0 / np.abs(1.0 - a1 * a2p / d6) ** 2) * (
            a1.real * a2p.imag * coth_factor(wp, t2) + a1.imag * a2p.real * cth1
        )
        return km + kp

    return f


def _anomalous_force_integrand(s: Scenario):
    d6 = s.d**6
    Om = s.Omega

    def f(w):
        w = _floor0(w)
        a1 = polarizability(s.p1, w)
        a2m = polarizability(s.p2, w - Om)
        den = np.abs(1.0 - a1 * a2m / d6) ** 2
        return (3.0 / den) * (a1.imag * a2m.real - a1.real * a2m.imag)

    return f


# --- observables -----------------------------------------------------------


def heat_z_quantum(s: Scenario, cfg: QuadratureConfig | None = None) -> ObservableResult:
    """Quantum-fluctuation (T=0) heating of particle 1, in W.

    Integral of -2 hbar/(pi d^6) * w Im a1(w) Im a2(w-Omega) / |1 - a1 a2/d^6|^2
    over the anomalous-Doppler window (0, Omega).  Strictly positive for
    Omega > 0: the rotating particle pumps energy into both particles.
    """
    _require_axis(s, Axis.Z)
    if s.Omega == 0.0:
        return ObservableResult(0.0, 0.0, 0.0)
    cfg = cfg if cfg is not None else QuadratureConfig()
    cfg = cfg.with_hints(_resonance_hints(s, s.Omega))
    _check_poles_z(s, s.Omega, cfg)
    pref = -2.0 * HBAR / (math.pi * s.d**6)
    r = _run(_quantum_heat_integrand(s), 0.0, s.Omega, cfg)
    return ObservableResult(pref * r.value, abs(pref) * r.abs_error_estimate, pref * r.value)


def heat_z(s: Scenario, thermal: ThermalPair, cfg: QuadratureConfig | None = None) -> ObservableResult:
    """Heat absorbed by particle 1 (W) at finite temperatures.

    Sum of the axial-dipole exchange term (coupling 4 a1 a2/d^6, weight 2)
    and the Doppler-shifted transverse term (coupling a1 a2/d^6), both with
    their coth occupation differences, folded onto (0, omega_max).
    """
    _require_axis(s, Axis.Z)
    cfg, upper = _prepare(s, thermal, cfg)
    pref = HBAR / (math.pi * s.d**6)
    r_static = _run(_static_heat_integrand(s, thermal), 0.0, upper, cfg)
    r_dopp = _run(_doppler_heat_integrand(s, thermal), 0.0, upper, cfg)
    value = pref * (2.0 * r_static.value + r_dopp.value)
    err = pref * (2.0 * r_static.abs_error_estimate + r_dopp.abs_error_estimate)
    return ObservableResult(value, err, heat_z_quantum(s, cfg).value)


def torque_z_quantum(s: Scenario, cfg: QuadratureConfig | None = None) -> ObservableResult:
    """Quantum-friction torque (N m) on particle 1 about z, at T=0."""
    _require_axis(s, Axis.Z)
    if s.Omega == 0.0:
        return ObservableResult(0.0, 0.0, 0.0)
    cfg = cfg if cfg is not None else QuadratureConfig()
    cfg = cfg.with_hints(_resonance_hints(s, s.Omega))
    _check_poles_z(s, s.Omega, cfg)
    pref = -2.0 * HBAR / (math.pi * s.d**6)
    r = _run(_quantum_torque_integrand(s), 0.0, s.Omega, cfg)
    return ObservableResult(pref * r.value, abs(pref) * r.abs_error_estimate, pref * r.value)


def torque_z(s: Scenario, thermal: ThermalPair, cfg: QuadratureConfig | None = None) -> ObservableResult:
    """Torque (N m) on particle 1 about z at finite temperatures."""
    _require_axis(s, Axis.Z)
    cfg, upper = _prepare(s, thermal, cfg)
    pref = HBAR / (math.pi * s.d**6)
    r = _run(_torque_integrand(s, thermal), 0.0, upper, cfg)
    return ObservableResult(
        pref * r.value, pref * r.abs_error_estimate, torque_z_quantum(s, cfg).value
    )


def force_z_anomalous(s: Scenario, cfg: QuadratureConfig | None = None) -> ObservableResult:
    """Anomalous-Doppler (T=0) part of the z force on particle 1, in N."""
    _require_axis(s, Axis.Z)
    if s.Omega == 0.0:
        return ObservableResult(0.0, 0.0, 0.0)
    cfg = cfg if cfg is not None else QuadratureConfig()
    cfg = cfg.with_hints(_resonance_hints(s, s.Omega))
    _check_poles_z(s, s.Omega, cfg)
    pref = HBAR / (math.pi * s.d**7)
    r = _run(_anomalous_force_integrand(s), 0.0, s.Omega, cfg)
    return ObservableResult(pref * r.value, pref * r.abs_error_estimate, pref * r.value)


def force_z(s: Scenario, thermal: ThermalPair, cfg: QuadratureConfig | None = None) -> ObservableResult:
    """Force (N) on particle 1 along +z; positive pulls it toward particle 2.

    The static part carries the zero-point and thermal Re*Im cross terms of
    the axial channel; the Doppler part the transverse channels.  The
    quantum_part field reports the anomalous-Doppler window contribution.
    """
    _require_axis(s, Axis.Z)
    cfg, upper = _prepare(s, thermal, cfg)
    pref = HBAR / (math.pi * s.d**7)
    r_static = _run(_static_force_integrand(s, thermal), 0.0, upper, cfg)
    r_dopp = _run(_doppler_force_integrand(s, thermal), 0.0, upper, cfg)
    value = pref * (2.0 * r_static.value + r_dopp.value)
    err = pref * (2.0 * r_static.abs_error_estimate + r_dopp.abs_error_estimate)
    return ObservableResult(value, err, force_z_anomalous(s, cfg).value)


def emission_rate_exact(s: Scenario, omega: float) -> float:
    """Dimensionless photon emission rate at w inside (0, Omega).

    4 Im a1(w) Im a2(Omega-w) / d^6 / |1 - a1(w) a2(w-Omega)/d^6|^2, which is
    >= 0 on the anomalous-Doppler window.  Returns +inf at an exact pole of
    the mutual-polarization denominator (possible only for lossless
    materials).
    """
    if not 0.0 < omega < s.Omega:
        raise ValueError(f"need 0 < omega < Omega, got omega={omega}, Omega={s.Omega}")
    a1 = complex(polarizability(s.p1, omega))
    a2m = complex(polarizability(s.p2, omega - s.Omega))
    d6 = s.d**6
    den = abs(1.0 - a1 * a2m / d6) ** 2
    num = -4.0 * a1.imag * a2m.imag / d6
    if den == 0.0:
        return math.inf
    return num / den
