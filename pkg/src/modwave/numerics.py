"""Shared numerical kernels.

Bracketed root finding, companion-matrix polynomial roots, a dense
eigensolver wrapper, and cosine-series convolution helpers used by the
wave solver and the Bloch operator assembly.  All routines are pure and
deterministic; property tests draw samples from a fixed-seed generator.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import EigenFailure, LeadingZero, NoBracket

# Fixed seed for every randomized property test in the suite.
PROPERTY_TEST_SEED = 0x5EED_0D15_9E45_0001


def property_rng() -> np.random.Generator:
    """Generator used by randomized tests; documented fixed seed."""
    return np.random.default_rng(PROPERTY_TEST_SEED)


@dataclass(frozen=True)
class Bracket:
    """Sign-change interval for root finding."""

    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self):
        if not (self.f_lo * self.f_hi < 0.0):
            raise NoBracket(
                f"f({self.lo})={self.f_lo:.3e} and f({self.hi})={self.f_hi:.3e} "
                "do not bracket a root"
            )

    @classmethod
    def scan(cls, f: Callable[[float], float], lo: float, hi: float) -> "Bracket":
        return cls(lo, hi, f(lo), f(hi))


def find_root(f: Callable[[float], float], bracket: Bracket, tol: float = 1e-12) -> float:
    """Bisection/secant hybrid; the iterate never leaves the bracket.

    Stops when |f| <= tol or the interval shrinks below tol*max(1, |x|).
    """
    lo, hi = bracket.lo, bracket.hi
    f_lo, f_hi = bracket.f_lo, bracket.f_hi
    x = 0.5 * (lo + hi)
    prev_width = hi - lo
    for _ in range(200):
        if hi - lo <= tol * max(1.0, abs(x)):
            break
        # secant proposal from the current bracket endpoints
        denom = f_hi - f_lo
        if denom != 0.0:
            x = hi - f_hi * (hi - lo) / denom
        if denom == 0.0 or not (lo < x < hi):
            x = 0.5 * (lo + hi)
        fx = f(x)
        if abs(fx) <= tol:
            return x
        if f_lo * fx < 0.0:
            hi, f_hi = x, fx
        else:
            lo, f_lo = x, fx
        # force a bisection step whenever the secant stops contracting
        if (hi - lo) > 0.5 * prev_width:
            mid = 0.5 * (lo + hi)
            fm = f(mid)
            if abs(fm) <= tol:
                return mid
            if f_lo * fm < 0.0:
                hi, f_hi = mid, fm
            else:
                lo, f_lo = mid, fm
        prev_width = hi - lo
    return 0.5 * (lo + hi)


def poly_roots(coeffs: Sequence[complex]) -> np.ndarray:
    """All roots of sum(coeffs[i] * x^(n-i)) via the companion matrix.

    Coefficients are highest degree first.  The leading coefficient must be
    nonzero.
    """
    c = np.asarray(coeffs, dtype=complex)
    if c.ndim != 1 or c.size < 2:
        raise LeadingZero("need a polynomial of degree >= 1")
    if c[0] == 0:
        raise LeadingZero("leading coefficient is zero")
    n = c.size - 1
    companion = np.zeros((n, n), dtype=complex)
    companion[0, :] = -c[1:] / c[0]
    if n > 1:
        companion[1:, :-1] = np.eye(n - 1)
    return eig_dense(companion)


def cluster_roots(roots: np.ndarray, tol: float = 1e-8) -> list[tuple[complex, int]]:
    """Group near-coincident roots; returns (representative, multiplicity)."""
    remaining = list(np.asarray(roots, dtype=complex))
    clusters: list[tuple[complex, int]] = []
    while remaining:
        seed = remaining.pop(0)
        members = [seed]
        rest = []
        for r in remaining:
            if abs(r - seed) <= tol * max(1.0, abs(seed)):
                members.append(r)
            else:
                rest.append(r)
        remaining = rest
        clusters.append((complex(np.mean(members)), len(members)))
    return clusters


def eig_dense(matrix: np.ndarray) -> np.ndarray:
    """Full spectrum of a dense complex matrix, sorted by (Re, Im)."""
    a = np.asarray(matrix, dtype=complex)
    if not np.all(np.isfinite(a)):
        raise EigenFailure("matrix has non-finite entries")
    try:
        vals = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise EigenFailure(str(exc)) from exc
    order = np.lexsort((vals.imag, vals.real))
    return vals[order]


# ---------------------------------------------------------------------------
# Cosine-series arithmetic.
#
# A real even 2*pi-periodic function is stored as cosine coefficients
# u[0..N] with u(z) = sum_n u[n] cos(n z).  The equivalent full (complex
# exponential) line has coefficients f[j] = u[|j|]/2 for j != 0 and
# f[0] = u[0].  Products are convolutions on the full line; coefficients
# produced outside the requested window are dropped (no aliasing wrap).
# ---------------------------------------------------------------------------


def cos_to_full(u: np.ndarray) -> np.ndarray:
    """Full-line coefficients f[-N..N] (offset N) of a cosine series."""
    u = np.asarray(u, dtype=float)
    n = u.size - 1
    f = np.zeros(2 * n + 1)
    f[n] = u[0]
    for j in range(1, n + 1):
        f[n + j] = f[n - j] = 0.5 * u[j]
    return f


def full_to_cos(f: np.ndarray, n_out: int) -> np.ndarray:
    """Cosine coefficients 0..n_out of a symmetric full-line array."""
    f = np.asarray(f)
    mid = (f.size - 1) // 2
    out = np.zeros(n_out + 1)
    out[0] = f[mid].real if np.iscomplexobj(f) else f[mid]
    hi = min(n_out, mid)
    for j in range(1, hi + 1):
        out[j] = 2.0 * (f[mid + j].real if np.iscomplexobj(f) else f[mid + j])
    return out


def cos_product(u: np.ndarray, v: np.ndarray, n_out: int) -> np.ndarray:
    """Cosine coefficients of the pointwise product u(z)*v(z)."""
    g = np.convolve(cos_to_full(u), cos_to_full(v))
    return full_to_cos(g, n_out)


def cos_square(u: np.ndarray, n_out: int) -> np.ndarray:
    """Cosine coefficients of u(z)^2."""
    return cos_product(u, u, n_out)


def cos_product_matrix(u: np.ndarray, n_out: int) -> np.ndarray:
    """Toeplitz-type table T with (T v)[n] = cosine coefficient n of u*v.

    Explicit (n_out+1) x (n_out+1) matrix.  Used for multiplication
    operators in Newton Jacobians; exact within the mode window.
    """
    size = n_out + 1
    t = np.zeros((size, size))
    for m in range(size):
        basis = np.zeros(size)
        basis[m] = 1.0
        t[:, m] = cos_product(u, basis, n_out)
    return t
