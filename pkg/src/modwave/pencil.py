"""Reduced spectral pencils near the origin and their discriminants.

The action of the linearized operator on its near-zero spectral subspace
is represented by a pair of small matrices (B, I): 3x3 for the
unidirectional equation, 4x4 for the bidirectional system.  After the
substitution lambda -> -i*xi*lambda the characteristic polynomial has
real coefficients; its cubic/quartic discriminants decide modulational
stability for small Floquet exponent and amplitude.

The matrices are exact finite formulas in (xi, a); the asymptotic
remainders are dropped by construction, so their validity domain is
small (xi, a) only.  One entry of the 4x4 pencil, position (1,4), is
taken from the projection inner products rather than the assembled
matrix display because only that value reproduces the instability index
threshold against the independent Floquet-Bloch oracle (the two
candidate transcriptions differ by a factor of two on one term).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .dispersion import DispersionSymbol, d1_m, d2_m, eval_m
from .errors import (
    DegenerateResonance,
    DegreeMismatch,
    LeadingZero,
    NotRescalable,
    UnsupportedKind,
)
from .indices import Verdict, ind
from .stokes import RESONANCE_TOL, EquationKind

#: admissible relative imaginary residue when realifying coefficients
IMAG_RESIDUE_TOL = 1e-10


@dataclass(frozen=True)
class ReducedPencil:
    kind: EquationKind
    k: float
    xi: float
    a: float
    b_matrix: np.ndarray
    i_matrix: np.ndarray

    @property
    def size(self) -> int:
        return self.b_matrix.shape[0]

    def eigenvalues(self) -> np.ndarray:
        """Roots of det(B - lambda I); approximate near-origin spectrum."""
        vals = np.linalg.eigvals(np.linalg.solve(self.i_matrix, self.b_matrix))
        order = np.lexsort((vals.imag, vals.real))
        return vals[order]

    def to_json(self) -> dict:
        """Debug dump: row-major entries as [re, im] pairs."""

        def dump(mat: np.ndarray) -> list[list[list[float]]]:
            return [[[float(z.real), float(z.imag)] for z in row] for row in mat]

        return {
            "kind": self.kind.value,
            "k": self.k,
            "xi": self.xi,
            "a": self.a,
            "B": dump(self.b_matrix),
            "I": dump(self.i_matrix),
        }


def build_bbm_pencil(sym: DispersionSymbol, k: float, xi: float, a: float) -> ReducedPencil:
    """3x3 pencil for the unidirectional equation."""
    if k <= 0:
        raise ValueError("k must be positive")
    m = eval_m(sym, k)
    mp = d1_m(sym, k)
    mpp = d2_m(sym, k)
    m2 = eval_m(sym, 2 * k)
    if abs(m - 1.0) <= RESONANCE_TOL or abs(m - m2) <= RESONANCE_TOL:
        raise DegenerateResonance(f"resonant denominators at k={k}")
    e = k * mp + 0.5 * k * k * mpp
    ratio = m2 * (m - 1.0) / (m - m2)

    b = np.zeros((3, 3), dtype=complex)
    b[2, 1] = a * m
    b += 1j * xi * np.diag([-k * mp, -k * mp, m - 1.0])
    b[0, 2] += -1j * xi * a * (2.0 + ratio)
    b[2, 0] += -1j * xi * a * (m + k * mp + 0.5 * ratio)
    b[0, 1] += xi * xi * e
    b[1, 0] += -xi * xi * e

    i_mat = np.eye(3, dtype=complex)
    s = m2 / (2.0 * (m - m2))
    i_mat[0, 2] -= 2.0 * a * s
    i_mat[2, 0] -= a * s
    return ReducedPencil(EquationKind.BBM, k, xi, a, b, i_mat)


def build_bnesq_pencil(sym: DispersionSymbol, k: float, xi: float, a: float) -> ReducedPencil:
    """4x4 pencil for the bidirectional system."""
    if k <= 0:
        raise ValueError("k must be positive")
    m = eval_m(sym, k)
    mp = d1_m(sym, k)
    mpp = d2_m(sym, k)
    m2 = eval_m(sym, 2 * k)
    msq, m2sq = m * m, m2 * m2
    if abs(msq - 1.0) <= RESONANCE_TOL or abs(msq - m2sq) <= RESONANCE_TOL:
        raise DegenerateResonance(f"resonant denominators at k={k}")
    u2 = 0.5 * msq * m2sq / (msq - m2sq)
    e = k * mp + 0.5 * k * k * mpp

    b = np.zeros((4, 4), dtype=complex)
    b[3, 1] = -0.5 * a * m * (msq + 1.0)
    b += 1j * xi * np.array([
        [-k * mp, 0.0, 0.0, 0.0],
        [0.0, -k * mp, 0.0, 0.0],
        [0.0, 0.0, m, 1.0],
        [0.0, 0.0, 1.0, m],
    ])
    b[0, 2] += 2j * xi * a / (msq + 1.0) * (u2 - msq)
    # (1,4): m*U2 + k m'(m^2+2)/2, from the projection inner products
    b[0, 3] += 2j * xi * a / (msq + 1.0) * (m * u2 + 0.5 * k * mp * (msq + 2.0))
    b[2, 0] += 1j * xi * a * u2
    b[3, 0] += 1j * xi * a * m * (0.5 * (msq + 3.0) + 2.0 * u2 + 2.0 * k * m * mp)
    b[0, 1] += xi * xi * e
    b[1, 0] += -xi * xi * e

    i_mat = np.eye(4, dtype=complex)
    w = 0.5 * a * (2.0 * u2 - msq - 2.0) / (msq + 1.0)
    i_mat[0, 3] += 2.0 * w
    i_mat[3, 0] += w * (msq + 1.0)
    v = 0.5 * k * m * mp / (msq + 1.0) ** 2
    i_mat[1, 3] += -1j * xi * a * 2.0 * v
    i_mat[3, 1] += -1j * xi * a * v * (msq + 1.0)
    return ReducedPencil(EquationKind.BOUSSINESQ, k, xi, a, b, i_mat)


def build_pencil(kind: EquationKind, sym: DispersionSymbol, k: float, xi: float, a: float) -> ReducedPencil:
    if kind is EquationKind.BBM:
        return build_bbm_pencil(sym, k, xi, a)
    if kind is EquationKind.BOUSSINESQ:
        return build_bnesq_pencil(sym, k, xi, a)
    raise UnsupportedKind(
        "no reduced pencil for the KdV-type nonlinearity; use the index or "
        "the Floquet-Bloch spectrum directly"
    )


def _charpoly_monic(m: np.ndarray) -> np.ndarray:
    """Coefficients (ascending powers, monic) of det(lambda I - M) by the
    Faddeev-LeVerrier recursion."""
    n = m.shape[0]
    coeffs = np.zeros(n + 1, dtype=complex)
    coeffs[n] = 1.0
    mk = np.array(m, dtype=complex)
    ck = -np.trace(mk)
    coeffs[n - 1] = ck
    for j in range(2, n + 1):
        mk = m @ (mk + ck * np.eye(n, dtype=complex))
        ck = -np.trace(mk) / j
        coeffs[n - j] = ck
    return coeffs


@dataclass(frozen=True)
class RescaledCharPoly:
    """Real coefficients d_0..d_deg of the rescaled characteristic polynomial.

    Sign convention: degree 3 encodes  d3 L^3 - d2 L^2 - d1 L + d0,
    degree 4 encodes  d4 L^4 - d3 L^3 - d2 L^2 + d1 L + d0, where
    L = lambda/(-i xi) and lambda runs over det(B - lambda I) = 0.
    """

    degree: int
    d: np.ndarray  # ascending: d[0]..d[degree]

    def standard_coefficients(self) -> np.ndarray:
        """Descending coefficients of the actual real polynomial in L."""
        d = self.d
        if self.degree == 3:
            return np.array([d[3], -d[2], -d[1], d[0]])
        return np.array([d[4], -d[3], -d[2], d[1], d[0]])

    def roots(self) -> np.ndarray:
        from .numerics import poly_roots

        return poly_roots(self.standard_coefficients())


def rescaled_charpoly(pencil: ReducedPencil) -> RescaledCharPoly:
    """Extract the real rescaled coefficients from the pencil.

    Requires xi > 0.  Imaginary residues up to IMAG_RESIDUE_TOL (relative
    to the coefficient scale) are zeroed; larger residues indicate a
    transcription or conditioning problem and raise.
    """
    xi = pencil.xi
    if xi == 0.0:
        raise NotRescalable("rescaling requires xi > 0")
    size = pencil.size
    g = np.linalg.solve(pencil.i_matrix, pencil.b_matrix) / (-1j * xi)
    monic = _charpoly_monic(g)  # ascending, monic in L
    det_i = np.linalg.det(pencil.i_matrix)
    coeffs = det_i * monic
    if size == 3:
        # d3 = -det(I); (d3,-d2,-d1,d0) = -det(I)*(monic descending)
        d = np.array([-coeffs[0], coeffs[1], coeffs[2], -coeffs[3]])
    else:
        d = np.array([coeffs[0], coeffs[1], -coeffs[2], -coeffs[3], coeffs[4]])
    scale = float(np.max(np.abs(d))) or 1.0
    if float(np.max(np.abs(d.imag))) > IMAG_RESIDUE_TOL * scale:
        raise NotRescalable(
            f"imaginary residue {np.max(np.abs(d.imag)):.3e} exceeds "
            f"{IMAG_RESIDUE_TOL:.0e} * scale"
        )
    return RescaledCharPoly(degree=size, d=d.real.copy())


def disc_cubic(poly: RescaledCharPoly) -> float:
    """Cubic discriminant in the d-coefficient convention.

    18 d3 d2 d1 d0 + d2^2 d1^2 + 4 d2^3 d0 + 4 d3 d1^3 - 27 d3^2 d0^2;
    negative means a complex pair, i.e. modulational instability.
    """
    if poly.degree != 3:
        raise DegreeMismatch(f"expected degree 3, got {poly.degree}")
    d0, d1, d2, d3 = poly.d
    return float(
        18.0 * d3 * d2 * d1 * d0
        + d2 * d2 * d1 * d1
        + 4.0 * d2**3 * d0
        + 4.0 * d3 * d1**3
        - 27.0 * d3 * d3 * d0 * d0
    )


def _quartic_standard(poly: RescaledCharPoly) -> np.ndarray:
    if poly.degree != 4:
        raise DegreeMismatch(f"expected degree 4, got {poly.degree}")
    p = poly.standard_coefficients()
    if p[0] == 0.0:
        raise LeadingZero("quartic leading coefficient is zero")
    return p


def quartic_disc(p4: float, p3: float, p2: float, p1: float, p0: float) -> float:
    """Discriminant of p4 x^4 + p3 x^3 + p2 x^2 + p1 x + p0."""
    return float(
        256 * p4**3 * p0**3
        - 192 * p4**2 * p3 * p1 * p0**2
        - 128 * p4**2 * p2**2 * p0**2
        + 144 * p4**2 * p2 * p1**2 * p0
        - 27 * p4**2 * p1**4
        + 144 * p4 * p3**2 * p2 * p0**2
        - 6 * p4 * p3**2 * p1**2 * p0
        - 80 * p4 * p3 * p2**2 * p1 * p0
        + 18 * p4 * p3 * p2 * p1**3
        + 16 * p4 * p2**4 * p0
        - 4 * p4 * p2**3 * p1**2
        - 27 * p3**4 * p0**2
        + 18 * p3**3 * p2 * p1 * p0
        - 4 * p3**3 * p1**3
        - 4 * p3**2 * p2**3 * p0
        + p3**2 * p2**2 * p1**2
    )


def quartic_disc1(p4: float, p3: float, p2: float, p1: float, p0: float) -> float:
    """8 p4 p2 - 3 p3^2."""
    return float(8.0 * p4 * p2 - 3.0 * p3 * p3)


def quartic_disc2(p4: float, p3: float, p2: float, p1: float, p0: float) -> float:
    """64 p4^3 p0 - 16 p4^2 p2^2 + 16 p4 p3^2 p2 - 16 p4^2 p3 p1 - 3 p3^4."""
    return float(
        64.0 * p4**3 * p0
        - 16.0 * p4**2 * p2**2
        + 16.0 * p4 * p3**2 * p2
        - 16.0 * p4**2 * p3 * p1
        - 3.0 * p3**4
    )


def disc_quartic(poly: RescaledCharPoly) -> float:
    """Quartic discriminant of the rescaled polynomial (standard form)."""
    return quartic_disc(*_quartic_standard(poly))


def disc1(poly: RescaledCharPoly) -> float:
    return quartic_disc1(*_quartic_standard(poly))


def disc2(poly: RescaledCharPoly) -> float:
    return quartic_disc2(*_quartic_standard(poly))


class QuarticClass(enum.Enum):
    TWO_REAL_ONE_PAIR = "TwoRealOnePair"
    FOUR_REAL = "FourReal"
    TWO_PAIRS = "TwoPairs"
    DEGENERATE = "Degenerate"


@dataclass(frozen=True)
class QuarticClassification:
    category: QuarticClass
    disc: float
    disc1: float
    disc2: float


def default_disc_tolerance(coeffs, power: int = 4) -> float:
    """1e-12 times the coefficient scale raised to the stated power."""
    scale = max(1e-300, float(np.max(np.abs(coeffs))))
    return 1e-12 * scale**power


def classify_quartic(
    p4: float, p3: float, p2: float, p1: float, p0: float, tol: float | None = None
) -> QuarticClassification:
    """Root-type classification of a real quartic by discriminant signs.

    disc<0: two real roots and one conjugate pair; disc>0 with disc1<0 and
    disc2<0: four real roots; disc>0 with disc1>0 or disc2>0: two
    conjugate pairs.  |disc|<=tol (or a boundary sign pattern) returns
    Degenerate rather than guessing.
    """
    if p4 == 0.0:
        raise LeadingZero("quartic leading coefficient is zero")
    p = (p4, p3, p2, p1, p0)
    if tol is None:
        tol = default_disc_tolerance(p)
    d = quartic_disc(*p)
    d1 = quartic_disc1(*p)
    d2 = quartic_disc2(*p)
    if abs(d) <= tol:
        cat = QuarticClass.DEGENERATE
    elif d < 0.0:
        cat = QuarticClass.TWO_REAL_ONE_PAIR
    elif d1 < 0.0 and d2 < 0.0:
        cat = QuarticClass.FOUR_REAL
    elif d1 > 0.0 or d2 > 0.0:
        cat = QuarticClass.TWO_PAIRS
    else:
        cat = QuarticClass.DEGENERATE
    return QuarticClassification(category=cat, disc=d, disc1=d1, disc2=d2)


def classify_rescaled(poly: RescaledCharPoly, tol: float | None = None) -> QuarticClassification:
    return classify_quartic(*_quartic_standard(poly), tol=tol)


def bnesq_leading_quartic(sym: DispersionSymbol, k: float) -> np.ndarray:
    """Standard coefficients of the bidirectional rescaled polynomial in
    the joint limit xi -> 0, a = 0.

    The four limiting roots are the group speed (double) and -m(k) -/+ 1,
    so the polynomial is (L - k m')^2 ((L + m)^2 - 1); expanding it in
    closed form avoids any small-parameter cancellation.
    """
    gs = k * d1_m(sym, k)
    m = eval_m(sym, k)
    left = np.array([1.0, -2.0 * gs, gs * gs])  # (L - km')^2
    right = np.array([1.0, 2.0 * m, m * m - 1.0])  # (L + m)^2 - 1
    return np.convolve(left, right)


def bnesq_leading_discs(sym: DispersionSymbol, k: float) -> tuple[float, float]:
    """Leading-order (disc1, disc2) of the bidirectional pencil quartic."""
    p = bnesq_leading_quartic(sym, k)
    return quartic_disc1(*p), quartic_disc2(*p)


class PencilVerdict(enum.Enum):
    UNSTABLE = "Unstable"
    STABLE = "Stable"
    DEGENERATE = "Degenerate"


def pencil_verdict(
    kind: EquationKind,
    sym: DispersionSymbol,
    k: float,
    xi: float = 1e-2,
    a: float = 1e-2,
) -> PencilVerdict:
    """Stability verdict from the reduced pencil discriminants.

    Unidirectional: sign of the cubic discriminant.  Bidirectional:
    negative quartic discriminant means unstable; positive goes through
    the root classification (four real roots: stable; two conjugate
    pairs: unstable).  A degenerate index (threshold wave number) is
    reported as Degenerate without consulting the discriminant.
    """
    report = ind(kind, sym, k)
    if report.verdict is Verdict.DEGENERATE:
        return PencilVerdict.DEGENERATE
    pencil = build_pencil(kind, sym, k, xi, a)
    poly = rescaled_charpoly(pencil)
    if kind is EquationKind.BBM:
        disc = disc_cubic(poly)
        tol = default_disc_tolerance(poly.d)
        if abs(disc) <= tol:
            return PencilVerdict.DEGENERATE
        return PencilVerdict.UNSTABLE if disc < 0 else PencilVerdict.STABLE
    cls = classify_rescaled(poly)
    if cls.category is QuarticClass.DEGENERATE:
        return PencilVerdict.DEGENERATE
    if cls.category is QuarticClass.FOUR_REAL:
        return PencilVerdict.STABLE
    return PencilVerdict.UNSTABLE
