"""Shared numerical kernels: adaptive quadrature on the real energy axis for
complex integrands, small dense matrix exponentials, and closed-form 2x2
eigendecompositions.

All integrands handled here decay (exponentially or algebraically) inside a
finite truncation window chosen by the caller; slowly decaying Fermi-sea
tails are removed analytically before this module is invoked (see
``fermisea``).
"""

from __future__ import annotations

import heapq
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

__all__ = [
    "NumericsError",
    "NonConvergence",
    "NonFinite",
    "DegenerateSpectrum",
    "DimensionMismatch",
    "TruncationWarning",
    "QuadratureSpec",
    "DEFAULT_QUAD_SPEC",
    "integrate_real_line",
    "expm",
    "eig2x2",
]

MAX_DIM = 64


class NumericsError(Exception):
    """Base class for numerical-kernel failures."""


class NonConvergence(NumericsError):
    """Subdivision budget exhausted before reaching the requested tolerance."""


class NonFinite(NumericsError):
    """An integrand or matrix evaluation produced NaN/Inf."""


class DegenerateSpectrum(NumericsError):
    """2x2 eigendecomposition rejected: eigenvalues (numerically) coincide."""


class DimensionMismatch(NumericsError):
    """Operator dimensions are inconsistent."""


class TruncationWarning(UserWarning):
    """The integrand is not negligible at the truncated window endpoints."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and truncation policy for the adaptive quadrature.

    ``window_halfwidth`` is a dimensionless multiplier: the integration
    window is ``center +- window_halfwidth * scale`` where the caller supplies
    the characteristic scale (largest of the coupling width and the
    Fermi-edge distances).
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-9
    max_subdivisions: int = 2000
    window_halfwidth: float = 10.0

    def __post_init__(self):
        if self.abs_tol < 0 or self.rel_tol < 0:
            raise ValueError("tolerances must be nonnegative")
        if self.abs_tol == 0 and self.rel_tol == 0:
            raise ValueError("abs_tol and rel_tol must not both be zero")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be a positive integer")
        if self.window_halfwidth < 10:
            raise ValueError("window_halfwidth must be >= 10")


DEFAULT_QUAD_SPEC = QuadratureSpec()

# Gauss-Kronrod 15/7 nodes and weights on [-1, 1] (QUADPACK dqk15).
_XGK = np.array([
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0,
])
_WGK = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
])
_WG = np.array([
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469,
])

_NODES = np.concatenate((-_XGK[:-1], _XGK[::-1]))          # 15 ascending nodes
_WK = np.concatenate((_WGK[:-1], _WGK[::-1]))              # Kronrod weights
_WG_FULL = np.zeros(15)
_WG_FULL[1:14:2] = np.concatenate((_WG[:-1], _WG[::-1]))   # Gauss-7 weights


def _panel_eval(f, a, b):
    """One GK15 pass on [a, b]: returns (integral, error_estimate)."""
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = mid + half * _NODES
    y = np.asarray(f(x), dtype=complex)
    if y.shape != x.shape:
        raise NonFinite("integrand must return an array matching its input")
    if not np.all(np.isfinite(y)):
        raise NonFinite(f"integrand non-finite inside [{a!r}, {b!r}]")
    k15 = half * np.sum(_WK * y)
    g7 = half * np.sum(_WG_FULL * y)
    return k15, abs(k15 - g7)


def _initial_edges(lo, hi, breakpoints, oscillation):
    edges = {lo, hi}
    for b in breakpoints:
        if lo < b < hi:
            edges.add(float(b))
    edges = sorted(edges)
    if oscillation > 0:
        period = 2.0 * np.pi / oscillation
        refined = []
        for a, b in zip(edges[:-1], edges[1:]):
            n_per = (b - a) / period
            if n_per > 50.0:
                # long oscillatory stretch: one panel per period, GK15
                # resolves a single period to machine accuracy
                n = int(np.ceil(n_per))
                refined.extend(np.linspace(a, b, n + 1)[:-1])
            else:
                refined.append(a)
        refined.append(edges[-1])
        edges = refined
    return edges


def integrate_real_line(integrand, center, spec=DEFAULT_QUAD_SPEC, *,
                        scale=1.0, breakpoints=(), oscillation=0.0):
    """Adaptive Gauss-Kronrod integral of a complex integrand over the
    truncated window ``center +- window_halfwidth * scale``.

    Parameters
    ----------
    integrand : callable
        Vectorized map from a float array of energies to complex values.
    center : float
        Center of the truncation window (the integrand's structure center).
    spec : QuadratureSpec
        Tolerances, subdivision budget and window multiplier.
    scale : float
        Characteristic decay/structure scale; the window half-width is
        ``spec.window_halfwidth * scale``.
    breakpoints : sequence of float
        Known kinks/edges (e.g. chemical potentials); panels are split there.
    oscillation : float
        Largest phase rate ``a`` of ``exp(i a energy)`` factors; stretches
        longer than 50 periods are pre-split into per-period panels.

    Returns
    -------
    complex
        The integral estimate with error <= max(abs_tol, rel_tol*|result|).
    """
    if not (np.isfinite(center) and np.isfinite(scale) and scale > 0):
        raise ValueError("center must be finite and scale positive")
    w = spec.window_halfwidth * scale
    lo, hi = center - w, center + w

    edges = _initial_edges(lo, hi, breakpoints, oscillation)

    end_vals = np.asarray(integrand(np.array([lo, hi])), dtype=complex)
    if not np.all(np.isfinite(end_vals)):
        raise NonFinite("integrand non-finite at the window endpoints")
    edge_cap = spec.abs_tol / w if spec.abs_tol > 0 else spec.rel_tol
    if np.max(np.abs(end_vals)) >= edge_cap:
        warnings.warn(
            "integrand magnitude at the truncation endpoints is "
            f"{np.max(np.abs(end_vals)):.3e} >= {edge_cap:.3e}; "
            "window may be too narrow",
            TruncationWarning, stacklevel=2)

    heap = []   # (-error, order, a, b, value)
    order = 0
    total = 0.0 + 0.0j
    err_sum = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        val, err = _panel_eval(integrand, a, b)
        total += val
        err_sum += err
        heapq.heappush(heap, (-err, order, a, b, val))
        order += 1

    splits = 0
    while err_sum > max(spec.abs_tol, spec.rel_tol * abs(total)):
        if splits >= spec.max_subdivisions:
            raise NonConvergence(
                f"quadrature error {err_sum:.3e} above tolerance after "
                f"{splits} subdivisions on [{lo:.6g}, {hi:.6g}]")
        neg_err, _, a, b, val = heapq.heappop(heap)
        mid = 0.5 * (a + b)
        v1, e1 = _panel_eval(integrand, a, mid)
        v2, e2 = _panel_eval(integrand, mid, b)
        total += v1 + v2 - val
        err_sum += e1 + e2 - (-neg_err)
        heapq.heappush(heap, (-e1, order, a, mid, v1))
        order += 1
        heapq.heappush(heap, (-e2, order, mid, b, v2))
        order += 1
        splits += 1

    return total


def expm(a, t=1.0):
    """Matrix exponential ``exp(a*t)`` for small dense complex matrices.

    Scaling-and-squaring Pade (scipy) behind the module contract; raises
    NonFinite on overflow and DimensionMismatch above the supported size.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got {a.shape}")
    if a.shape[0] > MAX_DIM:
        raise DimensionMismatch(f"dimension {a.shape[0]} exceeds {MAX_DIM}")
    if not np.isfinite(t):
        raise ValueError("t must be finite")
    result = sla.expm(a * t)
    if not np.all(np.isfinite(result)):
        raise NonFinite("matrix exponential overflowed")
    return result


def eig2x2(a):
    """Closed-form eigendecomposition of a diagonalizable 2x2 matrix.

    Returns ``(eigvals, s, s_inv)`` with ``a = s @ diag(eigvals) @ s_inv``.
    Ordering: the first eigenvalue has the larger real part, ties broken by
    the larger imaginary part.
    """
    a = np.asarray(a, dtype=complex)
    if a.shape != (2, 2):
        raise DimensionMismatch(f"expected a 2x2 matrix, got {a.shape}")
    norm = np.linalg.norm(a)
    tr = a[0, 0] + a[1, 1]
    disc = np.sqrt((a[0, 0] - a[1, 1]) ** 2 / 4.0 + a[0, 1] * a[1, 0])
    lam1 = tr / 2.0 + disc
    lam2 = tr / 2.0 - disc
    if (lam1.real, lam1.imag) < (lam2.real, lam2.imag):
        lam1, lam2 = lam2, lam1
    if abs(lam1 - lam2) < 1e-10 * max(norm, 1e-300):
        raise DegenerateSpectrum(
            f"eigenvalue splitting {abs(lam1 - lam2):.3e} below threshold")

    def eigvec(lam):
        # pick the better-conditioned of the two row-based constructions
        v1 = np.array([a[0, 1], lam - a[0, 0]])
        v2 = np.array([lam - a[1, 1], a[1, 0]])
        v = v1 if np.linalg.norm(v1) >= np.linalg.norm(v2) else v2
        n = np.linalg.norm(v)
        if n == 0.0:
            # diagonal matrix: canonical basis vector
            v = np.array([1.0, 0.0]) if abs(lam - a[0, 0]) <= abs(lam - a[1, 1]) \
                else np.array([0.0, 1.0])
            n = 1.0
        return v / n

    s = np.column_stack([eigvec(lam1), eigvec(lam2)])
    det = s[0, 0] * s[1, 1] - s[0, 1] * s[1, 0]
    if abs(det) < 1e-12:
        raise DegenerateSpectrum("eigenvector matrix is numerically singular")
    s_inv = np.array([[s[1, 1], -s[0, 1]], [-s[1, 0], s[0, 0]]]) / det

    residual = np.linalg.norm(a @ s - s * np.array([lam1, lam2]))
    if residual > 1e-12 * max(norm, 1e-300):
        raise NonFinite(f"eigendecomposition residual {residual:.3e} too large")
    return np.array([lam1, lam2]), s, s_inv
