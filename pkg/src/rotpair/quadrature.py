"""Adaptive integration tuned for narrow Lorentzian peaks.

The spectra integrated here are smooth except for resonance peaks whose
width can be many orders of magnitude below the integration range (the
polariton linewidth against the thermal/Doppler span, and far narrower
still close to the mutual-polarization pole).  A plain adaptive scheme
wastes its budget discovering those peaks; here the caller passes the peak
positions as *pole hints* and the integrator seeds its panel list with
splits at every hint, then bisects the worst panel of an embedded
7/15-point Gauss pair until the summed error estimate meets tolerance.

``integrate_oracle`` is a deliberately naive uniform trapezoid rule kept
free of any shared machinery; it exists so every adaptive result can be
checked against an independent route.

Integrands must be vectorized: f(ndarray) -> ndarray.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np

# Embedded pair: low-order Gauss for the error reference, high-order for the
# value.  Nodes/weights from numpy's Legendre module are exact to double
# precision; the pair is not nested, which costs 22 evaluations per panel but
# avoids hand-copied Kronrod tables.
_XL, _WL = np.polynomial.legendre.leggauss(7)
_XH, _WH = np.polynomial.legendre.leggauss(15)


class QuadratureFailure(Exception):
    """Subdivision budget exhausted before reaching tolerance.

    The partial result is available as the ``result`` attribute.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances, budget and peak hints for one integration.

    ``pole_hints`` are frequencies (rad/s) where the integrand may peak;
    hints outside the integration interval are ignored.  ``pole_guard``
    overrides the observable modules' denominator-minimum threshold when
    set.  With ``oracle_mode`` the observables bypass the adaptive scheme
    and use the ``oracle_points``-point trapezoid rule instead.
    """

    rel_tol: float = 1e-8
    abs_tol: float = 0.0
    max_subdivisions: int = 40_000
    pole_hints: tuple = field(default_factory=tuple)
    oracle_mode: bool = False
    oracle_points: int = 1_000_000
    pole_guard: float | None = None

    def __post_init__(self):
        if self.rel_tol <= 0.0:
            raise ValueError("rel_tol must be positive")
        if self.abs_tol < 0.0:
            raise ValueError("abs_tol must be >= 0")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        if not np.all(np.isfinite(self.pole_hints)):
            raise ValueError("pole hints must be finite")

    def with_hints(self, hints) -> "QuadratureConfig":
        """Copy of this config with ``hints`` merged into pole_hints."""
        merged = tuple(sorted(set(self.pole_hints) | set(float(h) for h in hints)))
        return QuadratureConfig(
            rel_tol=self.rel_tol,
            abs_tol=self.abs_tol,
            max_subdivisions=self.max_subdivisions,
            pole_hints=merged,
            oracle_mode=self.oracle_mode,
            oracle_points=self.oracle_points,
            pole_guard=self.pole_guard,
        )


@dataclass(frozen=True)
class IntegralResult:
    value: float
    abs_error_estimate: float
    subdivisions_used: int
    converged: bool

    def __post_init__(self):
        if self.abs_error_estimate < 0.0:
            raise ValueError("error estimate must be >= 0")


def _panel(f, a: float, b: float):
    """Return (value, error) of the embedded pair on [a, b]."""
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    fh = f(mid + half * _XH)
    high = half * float(np.dot(_WH, fh))
    fl = f(mid + half * _XL)
    low = half * float(np.dot(_WL, fl))
    return high, abs(high - low)


def integrate(f, a: float, b: float, cfg: QuadratureConfig | None = None) -> IntegralResult:
    """Adaptively integrate f on [a, b].

    Initial panels are split at every pole hint lying inside (a, b); the
    panel with the worst error estimate is then bisected until the summed
    estimate satisfies max(rel_tol*|value|, abs_tol) or the subdivision
    budget runs out (QuadratureFailure, carrying the partial result).
    Summation order is fixed by panel position, so the result does not
    depend on the order in which panels were produced.
    """
    if cfg is None:
        cfg = QuadratureConfig()
    if not a < b:
        if a == b:
            return IntegralResult(0.0, 0.0, 0, True)
        raise ValueError(f"need a < b, got ({a}, {b})")

    width = b - a
    edges = {a, b}
    for h in cfg.pole_hints:
        if a < h < b:
            edges.add(float(h))
    edges = sorted(edges)
    # Drop split points closer than the relative resolution of the interval.
    kept = [edges[0]]
    for e in edges[1:]:
        if e - kept[-1] > 1e-14 * width:
            kept.append(e)
    if kept[-1] != b:
        kept[-1] = b

    heap = []
    frozen = []  # panels at floating-point resolution that cannot be split
    counter = 0  # tie-breaker keeping heap comparisons away from float payloads
    run_val = 0.0
    run_err = 0.0
    for lo, hi in zip(kept[:-1], kept[1:]):
        val, err = _panel(f, lo, hi)
        heapq.heappush(heap, (-err, counter, lo, hi, val))
        run_val += val
        run_err += err
        counter += 1

    subdivisions = 0

    def final(converged):
        # Deterministic position-ordered summation, independent of the order
        # in which panels were produced.
        panels = sorted(
            [(lo, hi, val, -neg) for neg, _, lo, hi, val in heap]
            + [(lo, hi, val, err) for lo, hi, val, err in frozen]
        )
        value = sum(p[2] for p in panels)
        error = sum(p[3] for p in panels)
        return IntegralResult(value, error, subdivisions, converged)

    while True:
        if run_err <= max(cfg.rel_tol * abs(run_val), cfg.abs_tol):
            return final(True)
        if subdivisions >= cfg.max_subdivisions or not heap:
            res = final(False)
            raise QuadratureFailure(
                f"no convergence after {subdivisions} subdivisions "
                f"(error {res.abs_error_estimate:.3e}, value {res.value:.3e})",
                result=res,
            )
        neg_err, _, lo, hi, val = heapq.heappop(heap)
        subdivisions += 1
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            # Cannot split further; keep its (honest) error on the books.
            frozen.append((lo, hi, val, -neg_err))
            continue
        run_val -= val
        run_err -= -neg_err
        for lo2, hi2 in ((lo, mid), (mid, hi)):
            val2, err2 = _panel(f, lo2, hi2)
            heapq.heappush(heap, (-err2, counter, lo2, hi2, val2))
            run_val += val2
            run_err += err2
            counter += 1


def integrate_oracle(f, a: float, b: float, n_points: int = 1_000_000) -> IntegralResult:
    """Uniform trapezoid rule with n_points samples (independent oracle)."""
    if n_points < 2:
        raise ValueError("need at least 2 points")
    if a == b:
        return IntegralResult(0.0, 0.0, 0, True)
    x = np.linspace(a, b, n_points)
    y = f(x)
    value = float(np.trapezoid(y, x))
    return IntegralResult(value, 0.0, 0, True)
