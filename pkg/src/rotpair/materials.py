"""Dielectric and polarizability models for polar-dielectric nanospheres.

The dielectric function is a single-phonon Lorentz oscillator

    eps(w) = eps_inf * (1 + (omega_L^2 - omega_T^2) /
                            (omega_T^2 - w^2 - i*gamma*w))

and a sphere of radius R carries the quasistatic (Clausius-Mossotti,
Gaussian convention) polarizability alpha(w) = R^3 (eps - 1)/(eps + 2),
so alpha/d^3 is the dimensionless coupling between two spheres at center
separation d.  The surface-mode resonance sits at the frequency omega0
where Re eps(omega0) = -2; close to it the polarizability is a Lorentzian
with strength ``a`` and linewidth ``gamma_res`` derived from the slope of
Re eps.

Negative frequencies are always evaluated through the reality condition
eps(-w) = conj(eps(w)), which guarantees the odd/even symmetries the
spectral integrals rely on.

All quantities are strict SI (rad/s, meters, kelvin; alpha in m^3).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np
from scipy.optimize import brentq


class NoRootError(Exception):
    """No surface-mode frequency exists inside the (omega_T, omega_L) band."""


class MaterialFileError(Exception):
    """Malformed material definition file.

    Carries ``line`` (1-based line number) when the offending line is known.
    """

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line


# Relative margin keeping the root bracket strictly inside the phonon band.
_BRACKET_DELTA = 1e-6
# Grid used to locate the sign change of Re eps + 2 before refining.
_SCAN_POINTS = 4096
_ROOT_RTOL = 1e-10


@dataclass(frozen=True)
class OscillatorMaterial:
    """Lorentz-oscillator dielectric parameters (all rad/s except eps_inf)."""

    eps_inf: float
    omega_L: float
    omega_T: float
    gamma: float

    def __post_init__(self):
        if self.eps_inf < 1.0:
            raise ValueError(f"eps_inf must be >= 1, got {self.eps_inf}")
        if self.omega_T <= 0.0 or self.omega_L <= 0.0:
            raise ValueError("omega_T and omega_L must be positive")
        if self.omega_L <= self.omega_T:
            raise ValueError("omega_L must exceed omega_T")
        if self.gamma <= 0.0:
            raise ValueError("gamma must be positive")


@dataclass(frozen=True)
class Particle:
    """A spherical particle: material, radius (m) and temperature (K)."""

    material: OscillatorMaterial
    radius: float
    temperature: float = 0.0

    def __post_init__(self):
        if self.radius <= 0.0:
            raise ValueError(f"radius must be positive, got {self.radius}")
        if self.temperature < 0.0:
            raise ValueError("temperature must be >= 0")


@dataclass(frozen=True)
class PolaritonResonance:
    """Lorentzian line parameters of the surface-mode resonance.

    ``gamma_res`` is the polariton linewidth Im eps(omega0) / (d Re eps/dw),
    which is distinct from (and much smaller than) the oscillator damping.
    """

    omega0: float
    a: float
    gamma_res: float

    def __post_init__(self):
        if self.a <= 0.0 or self.gamma_res <= 0.0:
            raise ValueError("oscillator strength and linewidth must be positive")


def dielectric(material: OscillatorMaterial, omega):
    """Complex dielectric function at (possibly negative) frequency omega.

    Accepts scalars or numpy arrays.  Negative frequencies are mapped through
    eps(-w) = conj(eps(w)).
    """
    w = np.asarray(omega, dtype=float)
    aw = np.abs(w)
    m = material
    band = (m.omega_L**2 - m.omega_T**2) / (
        m.omega_T**2 - aw * aw - 1j * m.gamma * aw
    )
    eps = m.eps_inf * (1.0 + band)
    eps = np.where(w < 0.0, np.conj(eps), eps)
    if np.ndim(omega) == 0:
        return complex(eps)
    return eps


def polarizability(particle: Particle, omega):
    """Quasistatic sphere polarizability R^3 (eps-1)/(eps+2), in m^3."""
    eps = dielectric(particle.material, omega)
    return particle.radius**3 * (eps - 1.0) / (eps + 2.0)


def _re_eps_plus_2(material, w):
    return np.real(dielectric(material, w)) + 2.0


@lru_cache(maxsize=256)
def polariton_frequency(material: OscillatorMaterial) -> float:
    """Solve Re eps(omega0) = -2 for the surface-mode frequency.

    Re eps + 2 starts positive at omega_T, dives below -2 inside the band and
    rises back through -2 near omega_L.  The physical surface mode is the
    rising crossing (positive slope of Re eps, hence positive oscillator
    strength); the falling crossing just above omega_T sits in the
    overdamped absorption region.  We locate the last sign change on a dense
    grid and refine it with Brent's method.

    Raises NoRootError when Re eps + 2 never changes sign on the band.
    """
    lo = material.omega_T * (1.0 + _BRACKET_DELTA)
    hi = material.omega_L * (1.0 - _BRACKET_DELTA)
    grid = np.linspace(lo, hi, _SCAN_POINTS)
    vals = _re_eps_plus_2(material, grid)
    signs = np.sign(vals)
    crossings = np.nonzero(signs[:-1] * signs[1:] < 0)[0]
    if crossings.size == 0:
        raise NoRootError(
            "Re eps + 2 does not change sign on (omega_T, omega_L); "
            "the oscillator is too weak to support a surface mode"
        )
    i = crossings[-1]
    return brentq(
        lambda w: _re_eps_plus_2(material, w),
        grid[i],
        grid[i + 1],
        rtol=_ROOT_RTOL,
    )


def dielectric_derivative(material: OscillatorMaterial, omega: float) -> complex:
    """Closed-form d eps / d omega of the oscillator model (s units)."""
    m = material
    den = m.omega_T**2 - omega * omega - 1j * m.gamma * omega
    return (
        m.eps_inf
        * (m.omega_L**2 - m.omega_T**2)
        * (2.0 * omega + 1j * m.gamma)
        / (den * den)
    )


def resonance_params(material: OscillatorMaterial) -> PolaritonResonance:
    """Lorentzian strength and linewidth at the surface-mode frequency.

    a = 3 / (d Re eps/dw) and gamma_res = Im eps / (d Re eps/dw), both
    evaluated at omega0 with the analytic derivative of the oscillator model.
    Propagates NoRootError from the root find.
    """
    omega0 = polariton_frequency(material)
    slope = dielectric_derivative(material, omega0).real
    eps2 = dielectric(material, omega0).imag
    return PolaritonResonance(omega0=omega0, a=3.0 / slope, gamma_res=eps2 / slope)


def lorentzian_polarizability(res: PolaritonResonance, radius: float, omega):
    """Lorentzian approximation -R^3 a / (w - omega0 + i*gamma_res).

    Valid within a few linewidths of the resonance (not enforced).  Negative
    frequencies use the mirrored (anti-resonant) form, i.e. the conjugate of
    the positive-frequency line, so conjugate symmetry holds exactly.
    """
    w = np.asarray(omega, dtype=float)
    aw = np.abs(w)
    line = -(radius**3) * res.a / (aw - res.omega0 + 1j * res.gamma_res)
    out = np.where(w < 0.0, np.conj(line), line)
    if np.ndim(omega) == 0:
        return complex(out)
    return out


# --- material definitions -------------------------------------------------

#: SiC single-phonon oscillator parameters (Palik), SI rad/s.
SIC = OscillatorMaterial(eps_inf=6.7, omega_L=1.8e14, omega_T=1.49e14, gamma=8.9e11)

PRESETS = {"SiC": SIC}

_FILE_KEYS = ("eps_inf", "omega_L", "omega_T", "gamma")


def parse_material_text(text: str) -> OscillatorMaterial:
    """Parse a plain key=value material definition (SI units).

    Required keys: eps_inf, omega_L, omega_T, gamma.  Blank lines and lines
    starting with '#' are ignored.  Raises MaterialFileError with the
    offending line number on bad input.
    """
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise MaterialFileError(
                f"line {lineno}: expected key=value, got {line!r}", line=lineno
            )
        key, _, val = line.partition("=")
        key = key.strip()
        if key not in _FILE_KEYS:
            raise MaterialFileError(
                f"line {lineno}: unknown key {key!r} (expected one of {_FILE_KEYS})",
                line=lineno,
            )
        try:
            values[key] = float(val)
        except ValueError:
            raise MaterialFileError(
                f"line {lineno}: cannot parse {val.strip()!r} as a number",
                line=lineno,
            ) from None
    missing = [k for k in _FILE_KEYS if k not in values]
    if missing:
        raise MaterialFileError(f"missing keys: {', '.join(missing)}")
    try:
        return OscillatorMaterial(**values)
    except ValueError as exc:
        raise MaterialFileError(str(exc)) from None


def load_material(path) -> OscillatorMaterial:
    """Load an OscillatorMaterial from a key=value text file."""
    return parse_material_text(Path(path).read_text())


def get_material(name_or_path: str) -> OscillatorMaterial:
    """Resolve a preset name or a file path to a material."""
    if name_or_path in PRESETS:
        return PRESETS[name_or_path]
    p = Path(name_or_path)
    if p.exists():
        return load_material(p)
    raise MaterialFileError(
        f"unknown material {name_or_path!r}; presets: {', '.join(sorted(PRESETS))}"
    )
