"""Thermal occupation factors and Doppler-shifted frequency bookkeeping.

Every spectral integral in this package weighs the exchanged quanta with
coth(hbar*w / 2 kB T) factors, or with differences of two of them.  The
difference is provided as a first-class operation because the lone factor
has a 1/w pole at w = 0 (for T > 0) that the physical integrands always
cancel against Im alpha ~ w; computing the difference in one place keeps
that cancellation correct and the overflow handling uniform.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import HBAR, KB

# Below this |hbar w / 2 kB T| the Laurent series replaces the direct form.
_SERIES_CUTOFF = 1e-3


class CothPoleError(ZeroDivisionError):
    """coth evaluated exactly at w = 0 with T > 0; use coth_difference."""


@dataclass(frozen=True)
class ThermalPair:
    """Temperatures (K) of particle 1 and particle 2."""

    t1: float
    t2: float

    def __post_init__(self):
        if self.t1 < 0.0 or self.t2 < 0.0:
            raise ValueError("temperatures must be >= 0")

    @property
    def t_max(self) -> float:
        return max(self.t1, self.t2)


@dataclass(frozen=True)
class DopplerFrame:
    """Doppler-shifted frequencies w -+ Omega for one integration point."""

    omega: float
    Omega: float

    def __post_init__(self):
        if self.Omega < 0.0:
            raise ValueError("Omega must be >= 0")

    @property
    def omega_minus(self) -> float:
        return self.omega - self.Omega

    @property
    def omega_plus(self) -> float:
        return self.omega + self.Omega


def coth_factor(omega, temperature: float):
    """coth(hbar w / 2 kB T); sign(w) at T = 0.

    Near w = 0 (|x| < 1e-3 with x = hbar w/2 kB T) the Laurent series
    1/x + x/3 is used, which keeps the relative error below ~1e-13 while
    avoiding the inaccurate direct quotient.  Scalar w = 0 with T > 0
    raises CothPoleError: the lone factor is a pole there and callers must
    go through coth_difference (or keep the Im alpha zero that cancels it).
    """
    w = np.asarray(omega, dtype=float)
    if temperature == 0.0:
        out = np.sign(w)
        return float(out) if np.ndim(omega) == 0 else out
    if np.any(w == 0.0):
        raise CothPoleError("coth factor diverges at omega=0 for T>0")
    x = HBAR * w / (2.0 * KB * temperature)
    small = np.abs(x) < _SERIES_CUTOFF
    out = np.where(small, 1.0 / x + x / 3.0, 1.0 / np.tanh(x))
    if np.ndim(omega) == 0:
        return float(out)
    return out


def coth_difference(omega_a, t_a: float, omega_b, t_b: float):
    """coth(hbar w_a/2 kB t_a) - coth(hbar w_b/2 kB t_b).

    When both arguments and temperatures coincide the result is exactly 0,
    with the 1/w poles cancelled analytically rather than numerically.
    For distinct arguments each factor is evaluated on its own; the poles
    at w_a = 0 or w_b = 0 then survive, as they must (the physical
    integrands multiply them by Im alpha factors vanishing linearly there).
    """
    if t_a == t_b and np.ndim(omega_a) == 0 and np.ndim(omega_b) == 0:
        if omega_a == omega_b:
            return 0.0
    a = coth_factor(omega_a, t_a)
    b = coth_factor(omega_b, t_b)
    diff = a - b
    if t_a == t_b:
        same = np.asarray(omega_a) == np.asarray(omega_b)
        diff = np.where(same, 0.0, diff)
        if np.ndim(diff) == 0:
            return float(diff)
    return diff


def bose(omega: float, temperature: float) -> float:
    """Bose-Einstein occupation [exp(hbar w / kB T) - 1]^-1 for w > 0."""
    if omega <= 0.0:
        raise ValueError(f"bose requires omega > 0, got {omega}")
    if temperature == 0.0:
        return 0.0
    return 1.0 / np.expm1(HBAR * omega / (KB * temperature))
