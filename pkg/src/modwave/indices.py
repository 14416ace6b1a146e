"""Modulational instability indices and resonance location.

The resonance quantities i1, i2-, i2+, i3-, i3+ combine with an
equation-specific factor into a single index whose sign decides spectral
stability or instability near the origin of the spectral plane for
small-amplitude waves.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .dispersion import DispersionSymbol, d1_m, d2_m, eval_m
from .errors import UnsupportedKind
from .numerics import Bracket, find_root
from .stokes import EquationKind

#: |value| below this counts as a degenerate zero of an index
DEGENERACY_TOL = 1e-12


class Verdict(enum.Enum):
    MODULATIONALLY_UNSTABLE = "ModulationallyUnstable"
    STABLE_NEAR_ORIGIN = "ModulationallyStableNearOrigin"
    INCONCLUSIVE = "Inconclusive"
    DEGENERATE = "Degenerate"


@dataclass(frozen=True)
class IndexReport:
    k: float
    i1: float
    i2m: float
    i2p: float
    i3m: float
    i3p: float
    i_eq: float
    ind: float
    verdict: Verdict
    resonance_flags: frozenset[str]


def base_indices(sym: DispersionSymbol, k: float) -> tuple[float, float, float, float, float]:
    """(i1, i2-, i2+, i3-, i3+) from exact derivative formulas.

    i1 = (k m)'' = 2m' + k m'';  i2∓ = (k m)' ∓ 1;  i3∓ = m(k) ∓ m(2k).
    """
    if k <= 0:
        raise ValueError("k must be positive")
    m = eval_m(sym, k)
    mp = d1_m(sym, k)
    mpp = d2_m(sym, k)
    m2 = eval_m(sym, 2 * k)
    i1 = 2.0 * mp + k * mpp
    gs = m + k * mp
    return i1, gs - 1.0, gs + 1.0, m - m2, m + m2


def i_kdv(sym: DispersionSymbol, k: float) -> float:
    """2 i3- + i2-."""
    _, i2m, _, i3m, _ = base_indices(sym, k)
    return 2.0 * i3m + i2m


def i_bbm(sym: DispersionSymbol, k: float) -> float:
    """2 i3- + m(2k) i2-."""
    _, i2m, _, i3m, _ = base_indices(sym, k)
    return 2.0 * i3m + eval_m(sym, 2 * k) * i2m


def i_bnesq(sym: DispersionSymbol, k: float) -> float:
    """2 i3- i3+ + m^2(2k) i2- i2+."""
    _, i2m, i2p, i3m, i3p = base_indices(sym, k)
    return 2.0 * i3m * i3p + eval_m(sym, 2 * k) ** 2 * i2m * i2p


def equation_index(kind: EquationKind, sym: DispersionSymbol, k: float) -> float:
    if kind is EquationKind.KDV:
        return i_kdv(sym, k)
    if kind is EquationKind.BBM:
        return i_bbm(sym, k)
    if kind is EquationKind.BOUSSINESQ:
        return i_bnesq(sym, k)
    raise UnsupportedKind(str(kind))


def ind(kind: EquationKind, sym: DispersionSymbol, k: float) -> IndexReport:
    """Full index evaluation with verdict and active resonance flags.

    The instability index is the quotient i1*i2-*i_eq/i3- (unidirectional)
    or i1*i2-*i2+*i_eq/(i3-*i3+) (bidirectional); a negative value means
    modulational instability, a positive one stability near the spectral
    origin -- except for the bidirectional system, where positivity is
    inconclusive and the quartic classification of the reduced pencil
    settles the verdict.
    """
    i1, i2m, i2p, i3m, i3p = base_indices(sym, k)
    i_eq = equation_index(kind, sym, k)

    flags = set()
    if abs(i1) <= DEGENERACY_TOL:
        flags.add("R1")
    if abs(i2m) <= DEGENERACY_TOL or (
        kind is EquationKind.BOUSSINESQ and abs(i2p) <= DEGENERACY_TOL
    ):
        flags.add("R2")
    if abs(i3m) <= DEGENERACY_TOL or (
        kind is EquationKind.BOUSSINESQ and abs(i3p) <= DEGENERACY_TOL
    ):
        flags.add("R3")
    if abs(i_eq) <= DEGENERACY_TOL:
        flags.add("R4")

    if kind is EquationKind.BOUSSINESQ:
        denom = i3m * i3p
        numer = i1 * i2m * i2p * i_eq
    else:
        denom = i3m
        numer = i1 * i2m * i_eq

    if abs(denom) <= DEGENERACY_TOL:
        value = math.nan
        verdict = Verdict.DEGENERATE
    else:
        value = numer / denom
        if abs(value) <= DEGENERACY_TOL:
            verdict = Verdict.DEGENERATE
        elif value < 0:
            verdict = Verdict.MODULATIONALLY_UNSTABLE
        elif kind is EquationKind.BOUSSINESQ:
            verdict = Verdict.INCONCLUSIVE
        else:
            verdict = Verdict.STABLE_NEAR_ORIGIN

    return IndexReport(
        k=k, i1=i1, i2m=i2m, i2p=i2p, i3m=i3m, i3p=i3p, i_eq=i_eq,
        ind=value, verdict=verdict, resonance_flags=frozenset(flags),
    )


@dataclass(frozen=True)
class ResonancePoint:
    k: float
    kind: str  # R1..R4


@dataclass(frozen=True)
class ResonanceScan:
    points: tuple[ResonancePoint, ...]
    degenerate_everywhere: frozenset[str]  # indices that vanish on the whole grid


def find_resonances(
    sym: DispersionSymbol,
    kind: EquationKind,
    k_range: tuple[float, float],
    samples: int = 400,
) -> ResonanceScan:
    """Locate sign changes of the resonance quantities by bisection.

    R1: i1; R2: i2- (and i2+ for the bidirectional system); R3: i3-
    (and i3+); R4: the equation index.  A quantity that vanishes
    identically on the grid is reported as degenerate everywhere.
    """
    k_lo, k_hi = k_range
    if not (0 < k_lo < k_hi):
        raise ValueError("need 0 < k_lo < k_hi")
    grid = np.linspace(k_lo, k_hi, samples)

    def fns():
        yield "R1", lambda k: base_indices(sym, k)[0]
        yield "R2", lambda k: base_indices(sym, k)[1]
        if kind is EquationKind.BOUSSINESQ:
            yield "R2", lambda k: base_indices(sym, k)[2]
        yield "R3", lambda k: base_indices(sym, k)[3]
        if kind is EquationKind.BOUSSINESQ:
            yield "R3", lambda k: base_indices(sym, k)[4]
        yield "R4", lambda k: equation_index(kind, sym, k)

    points: list[ResonancePoint] = []
    degenerate: set[str] = set()
    for label, f in fns():
        vals = np.array([f(float(kk)) for kk in grid])
        if np.max(np.abs(vals)) <= DEGENERACY_TOL:
            degenerate.add(label)
            continue
        for i in range(grid.size - 1):
            if vals[i] == 0.0:
                points.append(ResonancePoint(float(grid[i]), label))
            elif vals[i] * vals[i + 1] < 0.0:
                root = find_root(
                    f, Bracket(float(grid[i]), float(grid[i + 1]), vals[i], vals[i + 1]),
                    tol=1e-10,
                )
                points.append(ResonancePoint(root, label))
    points.sort(key=lambda p: (p.k, p.kind))
    return ResonanceScan(points=tuple(points), degenerate_everywhere=frozenset(degenerate))


def critical_wavenumber(
    kind: EquationKind,
    sym: DispersionSymbol,
    k_range: tuple[float, float],
    samples: int = 400,
) -> float | None:
    """Smallest sign change of the instability index in the range, if any."""
    k_lo, k_hi = k_range
    if not (0 < k_lo < k_hi):
        raise ValueError("need 0 < k_lo < k_hi")
    grid = np.linspace(k_lo, k_hi, samples)

    def f(k: float) -> float:
        return ind(kind, sym, float(k)).ind

    vals = np.array([f(float(kk)) for kk in grid])
    for i in range(grid.size - 1):
        if vals[i] == 0.0:
            return float(grid[i])
        if vals[i] * vals[i + 1] < 0.0:
            return find_root(
                f, Bracket(float(grid[i]), float(grid[i + 1]), vals[i], vals[i + 1]),
                tol=1e-12,
            )
    return None
