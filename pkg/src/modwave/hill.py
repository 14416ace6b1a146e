"""Truncated Floquet-Bloch operators and their spectra.

The linearization about a periodic wave decomposes into a family of
operators indexed by the Floquet exponent xi in [0, 1/2]; each is
discretized in the Fourier basis over a symmetric mode window -N..N
(Hill's method) and handed to a dense eigensolver.  The module also
tracks eigenvalue collisions of the flat-state frequencies and
cross-validates the reduced pencils against the discrete spectra.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .dispersion import DispersionSymbol, eval_m, group_speed
from .errors import MatchFailure, TruncationTooSmall, UnsupportedKind
from .numerics import Bracket, cos_to_full, eig_dense, find_root
from .pencil import build_pencil
from .stokes import EquationKind, WaveSolution, newton_wave

#: eigenvalues below this modulus are snapped to zero for multiplicity counts
ZERO_SNAP = 1e-12


@dataclass(frozen=True)
class BlochOperator:
    kind: EquationKind
    k: float
    xi: float
    a: float
    n_modes: int
    matrix: np.ndarray
    wave: WaveSolution


@dataclass(frozen=True)
class SpectrumSlice:
    xi: float
    eigenvalues: np.ndarray
    max_re: float
    near_origin: np.ndarray


def _full_wave_coeffs(wave_hat: np.ndarray, n_modes: int) -> np.ndarray:
    """Full-line coefficients of the wave over the window -n_modes..n_modes."""
    src = cos_to_full(wave_hat)
    mid_src = wave_hat.size - 1
    out = np.zeros(2 * n_modes + 1)
    mid = n_modes
    reach = min(mid_src, n_modes)
    out[mid - reach : mid + reach + 1] = src[mid_src - reach : mid_src + reach + 1]
    return out


def assemble_scalar(
    kind: EquationKind,
    sym: DispersionSymbol,
    wave: WaveSolution,
    xi: float,
    n_modes: int,
) -> BlochOperator:
    """Bloch matrix of the scalar linearization at Floquet exponent xi.

    Row n, column m entries (n, m in -N..N, w = full wave coefficients):
    BBM:  i(n+xi) [c d_nm - m(k(n+xi)) (d_nm + 2 w_{n-m})],
    KdV:  i(n+xi) [(m(k(n+xi)) - c) d_nm + 2 w_{n-m}].
    """
    if kind not in (EquationKind.BBM, EquationKind.KDV):
        raise UnsupportedKind("scalar assembly is for the BBM- and KdV-type equations")
    if wave.kind is not kind:
        raise ValueError(f"wave solves {wave.kind}, requested {kind}")
    if n_modes < wave.n_modes:
        raise TruncationTooSmall(
            f"operator truncation {n_modes} below the wave's {wave.n_modes}"
        )
    k, c = wave.k, wave.c
    dim = 2 * n_modes + 1
    modes = np.arange(-n_modes, n_modes + 1)
    shifted = modes + xi
    mvals = np.array([eval_m(sym, k * s) for s in shifted])
    # coefficients over the doubled window so every difference n-m resolves;
    # entries beyond the wave's truncation are zero (no aliasing wrap)
    w = _full_wave_coeffs(wave.u_hat, 2 * n_modes)
    diff = np.subtract.outer(modes, modes) + 2 * n_modes
    conv = 2.0 * w[diff]
    if kind is EquationKind.BBM:
        core = c * np.eye(dim) - mvals[:, None] * (np.eye(dim) + conv)
    else:
        core = (mvals - c)[:, None] * np.eye(dim) + conv
    matrix = 1j * shifted[:, None] * core
    return BlochOperator(kind, k, xi, wave.a, n_modes, matrix, wave)


def assemble_bnesq(
    sym: DispersionSymbol,
    wave: WaveSolution,
    xi: float,
    n_modes: int,
) -> BlochOperator:
    """Bloch matrix of the two-channel linearization (u over q blocks)."""
    if wave.kind is not EquationKind.BOUSSINESQ:
        raise ValueError(f"wave solves {wave.kind}, expected the bidirectional system")
    if n_modes < wave.n_modes:
        raise TruncationTooSmall(
            f"operator truncation {n_modes} below the wave's {wave.n_modes}"
        )
    k, c = wave.k, wave.c
    dim = 2 * n_modes + 1
    modes = np.arange(-n_modes, n_modes + 1)
    shifted = modes + xi
    m2vals = np.array([eval_m(sym, k * s) ** 2 for s in shifted])
    w = _full_wave_coeffs(wave.u_hat, 2 * n_modes)
    diff = np.subtract.outer(modes, modes) + 2 * n_modes
    conv = 2.0 * w[diff]
    pref = 1j * shifted[:, None]
    matrix = np.zeros((2 * dim, 2 * dim), dtype=complex)
    matrix[:dim, :dim] = pref * (c * np.eye(dim))
    matrix[:dim, dim:] = pref * (m2vals[:, None] * np.eye(dim))
    matrix[dim:, :dim] = pref * (np.eye(dim) + conv)
    matrix[dim:, dim:] = pref * (c * np.eye(dim))
    return BlochOperator(EquationKind.BOUSSINESQ, k, xi, wave.a, n_modes, matrix, wave)


def assemble(
    kind: EquationKind,
    sym: DispersionSymbol,
    wave: WaveSolution,
    xi: float,
    n_modes: int,
) -> BlochOperator:
    if kind is EquationKind.BOUSSINESQ:
        return assemble_bnesq(sym, wave, xi, n_modes)
    return assemble_scalar(kind, sym, wave, xi, n_modes)


def near_origin_radius(sym: DispersionSymbol, k: float, xi: float) -> float:
    """Matching radius 10 xi (1 + max group speed over the first modes)."""
    gmax = max(abs(group_speed(sym, k * (n + xi))) for n in (-1, 0, 1))
    return 10.0 * xi * (1.0 + gmax)


def spectrum(op: BlochOperator, sym: DispersionSymbol | None = None) -> SpectrumSlice:
    """Full spectrum of the truncated operator, sorted by (Re, Im)."""
    vals = eig_dense(op.matrix)
    vals = np.where(np.abs(vals) <= ZERO_SNAP, 0.0, vals)
    r0 = near_origin_radius(sym if sym is not None else op.wave.sym, op.k, op.xi)
    near = vals[np.abs(vals) <= r0]
    return SpectrumSlice(
        xi=op.xi,
        eigenvalues=vals,
        max_re=float(vals.real.max()),
        near_origin=near,
    )


def zero_multiplicity(op: BlochOperator, radius: float = 1e-8) -> int:
    """Number of eigenvalues within the given modulus of the origin."""
    vals = eig_dense(op.matrix)
    return int(np.sum(np.abs(vals) <= radius))


# ---------------------------------------------------------------------------
# Flat-state eigenvalue collisions
# ---------------------------------------------------------------------------


def omega_scalar(sym: DispersionSymbol, k: float, n: int, xi: float) -> float:
    """Flat-state frequency (xi+n)(m(k) - m(k(xi+n))) of the scalar family."""
    return (xi + n) * (eval_m(sym, k) - eval_m(sym, k * (xi + n)))


def omega_pm(sym: DispersionSymbol, k: float, n: int, xi: float, branch: int) -> float:
    """Flat-state frequency (xi+n)(m(k) +/- m(k(xi+n))) of the two branches."""
    return (xi + n) * (eval_m(sym, k) + branch * eval_m(sym, k * (xi + n)))


@dataclass(frozen=True)
class CollisionPoint:
    xi: float
    n1: int
    n2: int
    branch1: int = -1  # +1/-1 for the bidirectional branches; -1 for scalar
    branch2: int = -1


def _scan_pair(f, xi_grid) -> list[float]:
    # transversal crossings via sign change; an exact zero is only accepted
    # at the right endpoint xi = 1/2 (interior samples sit on the trivial
    # common zero tail of all branches as xi -> 0)
    vals = np.array([f(float(x)) for x in xi_grid])
    scale = max(1.0, float(np.max(np.abs(vals))))
    hits: list[float] = []
    for i in range(xi_grid.size - 1):
        if vals[i] * vals[i + 1] < 0.0:
            hits.append(
                find_root(
                    f,
                    Bracket(float(xi_grid[i]), float(xi_grid[i + 1]), vals[i], vals[i + 1]),
                    tol=1e-12,
                )
            )
    if abs(vals[-1]) <= 1e-12 * scale:
        hits.append(float(xi_grid[-1]))
    hits.sort()
    merged: list[float] = []
    for x in hits:
        if not merged or x - merged[-1] > 1e-9:
            merged.append(x)
    return merged


def collision_scan(
    kind: EquationKind,
    sym: DispersionSymbol,
    k: float,
    n_range,
    xi_steps: int = 512,
    pairs=None,
) -> tuple[CollisionPoint, ...]:
    """All xi in (0, 1/2] where two flat-state frequencies coincide.

    Scans every pair of mode indices from n_range (and both frequency
    branches for the bidirectional system) by sign-change bisection of
    the difference; exact zeros at grid points count as collisions.
    The trivial common zero of all branches at xi -> 0 is excluded by
    starting the grid strictly inside the interval.
    """
    ns = sorted(set(int(n) for n in n_range))
    xi_grid = np.linspace(1e-6, 0.5, xi_steps)
    found: list[CollisionPoint] = []
    if kind is EquationKind.BOUSSINESQ:
        branches = [(n, s) for n in ns for s in (+1, -1)]
        wanted = pairs
        for (n1, s1), (n2, s2) in itertools.combinations(branches, 2):
            if wanted is not None and ((n1, n2) not in wanted and (n2, n1) not in wanted):
                continue

            def f(x, n1=n1, s1=s1, n2=n2, s2=s2):
                return omega_pm(sym, k, n1, x, s1) - omega_pm(sym, k, n2, x, s2)

            for x in _scan_pair(f, xi_grid):
                found.append(CollisionPoint(x, n1, n2, s1, s2))
    elif kind is EquationKind.BBM:
        pair_list = pairs if pairs is not None else list(itertools.combinations(ns, 2))
        for n1, n2 in pair_list:
            def f(x, n1=n1, n2=n2):
                return omega_scalar(sym, k, n1, x) - omega_scalar(sym, k, n2, x)

            for x in _scan_pair(f, xi_grid):
                found.append(CollisionPoint(x, n1, n2))
    else:
        raise UnsupportedKind("collision scan supports the BBM-type and bidirectional kinds")
    found.sort(key=lambda p: (p.xi, p.n1, p.n2))
    return tuple(found)


def min_collision_k(
    sym: DispersionSymbol,
    pairs,
    k_range: tuple[float, float],
    kind: EquationKind = EquationKind.BBM,
    xi_steps: int = 512,
    tol: float = 1e-9,
) -> float | None:
    """Smallest k in k_range at which any of the given mode pairs collide.

    Bisection on the collision indicator; assumes the collision set of
    each pair is an up-set in k (true for monotone symbol families).
    """
    ns = sorted({n for p in pairs for n in p})

    def has(k_val: float) -> bool:
        return bool(collision_scan(kind, sym, k_val, ns, xi_steps, pairs=pairs))

    lo, hi = k_range
    if has(lo):
        return lo
    if not has(hi):
        return None
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if has(mid):
            hi = mid
        else:
            lo = mid
    return hi


# ---------------------------------------------------------------------------
# Pencil cross-validation and growth curves
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PencilMatchRow:
    xi: float
    a: float
    mismatch: float
    mismatch_over_xi: float


@dataclass(frozen=True)
class PencilValidation:
    kind: EquationKind
    k: float
    rows: tuple[PencilMatchRow, ...]
    decay_factors: tuple[float, ...]


def _best_assignment(hill_vals: np.ndarray, pencil_vals: np.ndarray) -> float:
    best = math.inf
    for perm in itertools.permutations(range(pencil_vals.size)):
        worst = max(
            abs(hill_vals[i] - pencil_vals[j]) for i, j in enumerate(perm)
        )
        best = min(best, worst)
    return best


def match_pencil_once(
    kind: EquationKind,
    sym: DispersionSymbol,
    k: float,
    xi: float,
    a: float,
    n_modes: int = 32,
) -> float:
    """Max distance between near-origin Bloch eigenvalues and pencil roots."""
    wave = newton_wave(kind, sym, k, a, n_modes)
    op = assemble(kind, sym, wave, xi, n_modes)
    vals = eig_dense(op.matrix)
    pencil = build_pencil(kind, sym, k, xi, a)
    proots = pencil.eigenvalues()
    count = proots.size
    order = np.argsort(np.abs(vals))
    near = vals[order[:count]]
    mismatch = _best_assignment(near, proots)
    # the assignment is trustworthy only while the matched cluster stays
    # separated from the rest of the spectrum (near-double roots inside the
    # cluster are harmless: swapping them does not change the metric)
    if vals.size > count:
        gap = float(np.abs(vals[order[count]]) - np.max(np.abs(near)))
        if mismatch > 0.5 * max(gap, 0.0):
            raise MatchFailure(
                f"assignment residual {mismatch:.3e} exceeds half the cluster "
                f"gap {gap:.3e} at (k={k}, xi={xi}, a={a})"
            )
    return mismatch


def validate_pencil(
    kind: EquationKind,
    sym: DispersionSymbol,
    k: float,
    a_list,
    xi_list,
    n_modes: int = 32,
) -> PencilValidation:
    """Match pencil roots to Bloch eigenvalues along a shrinking sequence.

    Reports mismatch/xi per point and the successive decay factors; the
    pencil is validated when the relative mismatch decays superlinearly
    along (xi, a) -> 0.
    """
    rows = []
    for xi, a in zip(xi_list, a_list):
        mm = match_pencil_once(kind, sym, k, float(xi), float(a), n_modes)
        rows.append(PencilMatchRow(float(xi), float(a), mm, mm / float(xi)))
    factors = tuple(
        rows[i].mismatch_over_xi / rows[i + 1].mismatch_over_xi
        for i in range(len(rows) - 1)
        if rows[i + 1].mismatch_over_xi > 0
    )
    return PencilValidation(kind=kind, k=k, rows=tuple(rows), decay_factors=factors)


@dataclass(frozen=True)
class GrowthPoint:
    xi: float
    max_re: float
    refined_ok: bool


def growth_curve(
    kind: EquationKind,
    sym: DispersionSymbol,
    k: float,
    a: float,
    xi_grid,
    n_modes: int = 32,
    refine_tol: float = 1e-6,
) -> tuple[GrowthPoint, ...]:
    """Largest spectral real part per Floquet exponent.

    Each point is recomputed at doubled truncation; refined_ok records
    whether the value moved by less than refine_tol.
    """
    wave = newton_wave(kind, sym, k, a, n_modes)
    wave2 = newton_wave(kind, sym, k, a, 2 * n_modes)
    out = []
    for xi in xi_grid:
        op = assemble(kind, sym, wave, float(xi), n_modes)
        re1 = float(eig_dense(op.matrix).real.max())
        op2 = assemble(kind, sym, wave2, float(xi), 2 * n_modes)
        re2 = float(eig_dense(op2.matrix).real.max())
        out.append(GrowthPoint(float(xi), re1, abs(re1 - re2) <= refine_tol))
    return tuple(out)
