"""Acceptance checks runnable from the CLI and from the test suite.

Each check computes a measured quantity, compares it against its pinned
reference at a fixed tolerance, and reports one pass/fail line.  Two
checks (collision-floor, cubic-discriminant-identity) encode reference
values that the computation itself contradicts; they are implemented
exactly as pinned and fail honestly, with the measured value and the
verified corrected statement recorded in the detail field.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import hill, pencil
from .dispersion import bbm_symbol, boussinesq_symbol, fractional_symbol
from .indices import base_indices, critical_wavenumber, ind
from .numerics import Bracket, find_root, poly_roots, property_rng
from .pencil import (
    QuarticClass,
    build_bbm_pencil,
    classify_quartic,
    disc_cubic,
    quartic_disc,
    rescaled_charpoly,
)
from .stokes import EquationKind, expansion_error, newton_wave


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: str
    expected: str
    runtime: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"[{status}] {self.name}: measured {self.measured}, expected {self.expected}"
        if self.detail:
            text += f"\n       note: {self.detail}"
        return text


def _timed(fn: Callable[[], CheckResult]) -> CheckResult:
    start = time.perf_counter()
    result = fn()
    elapsed = time.perf_counter() - start
    return CheckResult(
        name=result.name,
        passed=result.passed,
        measured=result.measured,
        expected=result.expected,
        runtime=elapsed,
        detail=result.detail,
    )


def check_bbm_threshold() -> CheckResult:
    sym = bbm_symbol()
    k_star = critical_wavenumber(EquationKind.BBM, sym, (1.0, 3.0))
    target = math.sqrt(3.0)
    ok = (
        k_star is not None
        and abs(k_star - target) <= 1e-9
        and ind(EquationKind.BBM, sym, 1.7).ind > 0
        and ind(EquationKind.BBM, sym, 1.8).ind < 0
    )
    return CheckResult(
        "bbm-threshold", ok,
        f"k* = {k_star}", f"sqrt(3) = {target} within 1e-9; sign flip across 1.7/1.8",
        0.0,
    )


def check_collision_floor() -> CheckResult:
    sym = bbm_symbol()
    pairs = [(0, n) for n in range(-8, -1)]
    measured = hill.min_collision_k(sym, pairs, (1.0, 3.0))
    target = 2.0 * math.sqrt(3.0 / 5.0)
    ok = measured is not None and abs(measured - target) <= 1e-6
    bound_holds = measured is not None and measured >= target - 1e-6
    return CheckResult(
        "bbm-collision-floor", ok,
        f"min collision k = {measured}", f"{target} within 1e-6",
        0.0,
        detail=(
            "the pinned constant is a lower bound for this collision family, "
            "attained nowhere: the measured minimum is 2.0 (modes 0 and -2 "
            f"colliding at xi=1/2); the bound itself {'holds' if bound_holds else 'fails'}"
        ),
    )


def check_boussinesq_stability() -> CheckResult:
    sym = boussinesq_symbol()
    failures = []
    for k in (0.25, 0.5, 1.0, 2.0, 4.0, 8.0):
        report = ind(EquationKind.BOUSSINESQ, sym, k)
        if not report.i_eq > 0 or not report.ind > 0:
            failures.append(f"ind({k}) = {report.ind}")
            continue
        gs = report.i2m + 1.0  # (k m)' = i2- + 1
        ref1 = -4.0 * (2.0 + gs * gs)
        ref2 = -16.0 * (1.0 + 2.0 * gs * gs)
        d1, d2 = pencil.bnesq_leading_discs(sym, k)
        if abs(d1 - ref1) > 1e-10 * abs(ref1) or d1 >= 0:
            failures.append(f"disc1({k}) = {d1} vs {ref1}")
        if abs(d2 - ref2) > 1e-10 * abs(ref2) or d2 >= 0:
            failures.append(f"disc2({k}) = {d2} vs {ref2}")
        poly = rescaled_charpoly(pencil.build_bnesq_pencil(sym, k, 1e-3, 1e-3))
        cls = pencil.classify_rescaled(poly)
        if cls.category is not QuarticClass.FOUR_REAL:
            failures.append(f"class({k}) = {cls.category.value}")
    return CheckResult(
        "boussinesq-stability", not failures,
        "all six wave numbers positive-index, leading discs match, FourReal"
        if not failures else "; ".join(failures),
        "ind>0, closed-form disc1/disc2 to 1e-10, FourReal at xi=a=1e-3",
        0.0,
    )


def check_fractional_threshold() -> CheckResult:
    def f(alpha: float) -> float:
        return 3.0 - 2.0 ** (1.0 + alpha) + alpha

    root = find_root(f, Bracket.scan(f, 0.5, 1.5), tol=1e-14)
    sym3 = fractional_symbol(3.0)
    k_bbm = critical_wavenumber(EquationKind.BBM, sym3, (0.05, 3.0), samples=600)
    k_bq = critical_wavenumber(EquationKind.BOUSSINESQ, sym3, (0.05, 3.0), samples=600)
    ok = (
        abs(root - 1.0) <= 1e-10
        and k_bbm is not None
        and k_bq is not None
        and k_bbm > k_bq
    )
    return CheckResult(
        "fractional-threshold", ok,
        f"alpha* = {root}, k*_bbm = {k_bbm}, k*_bnesq = {k_bq}",
        "alpha* = 1 within 1e-10 and k*_bbm > k*_bnesq at alpha=3",
        0.0,
    )


def check_cubic_disc_identity() -> CheckResult:
    sym = bbm_symbol()
    worst = 0.0
    worst_fixed = 0.0
    for k in (0.5, 1.0, 2.0, 4.0):
        i1, i2m, _, _, _ = base_indices(sym, k)
        for xi in (1e-3, 1e-2):
            poly = rescaled_charpoly(build_bbm_pencil(sym, k, xi, 0.0))
            disc = disc_cubic(poly)
            ki1 = k * i1

            def closed_form(factor: float) -> float:
                return (
                    xi**2 / 16.0
                    * (ki1 * (ki1 * xi - factor * i2m) * (ki1 * xi + factor * i2m)) ** 2
                )

            ref4 = closed_form(4.0)
            ref2 = closed_form(2.0)
            worst = max(worst, abs(disc - ref4) / abs(ref4))
            worst_fixed = max(worst_fixed, abs(disc - ref2) / abs(ref2))
    ok = worst <= 1e-8
    return CheckResult(
        "cubic-disc-identity", ok,
        f"max relative deviation {worst:.3e} from the pinned form",
        "<= 1e-8 relative",
        0.0,
        detail=(
            "the pinned closed form carries coefficient 4 on the linear index "
            "term; the discriminant actually satisfies the same identity with "
            f"coefficient 2 (max relative deviation {worst_fixed:.3e}), which "
            "is asserted in the pencil test module"
        ),
    )


def check_hill_cross_validation() -> CheckResult:
    steps = (4e-2, 2e-2, 1e-2)
    scenarios = (
        (EquationKind.BBM, bbm_symbol(), 1.0, False),
        (EquationKind.BBM, bbm_symbol(), 2.0, True),
        (EquationKind.BOUSSINESQ, boussinesq_symbol(), 1.0, False),
    )
    failures = []
    details = []
    for kind, sym, k, expect_unstable in scenarios:
        val = hill.validate_pencil(kind, sym, k, steps, steps, n_modes=32)
        if not all(f >= 3.0 for f in val.decay_factors):
            failures.append(f"{kind.value} k={k}: decay factors {val.decay_factors}")
        wave = newton_wave(kind, sym, k, 1e-2, 32)
        op = hill.assemble(kind, sym, wave, 1e-2, 32)
        max_re = hill.spectrum(op, sym).max_re
        unstable = max_re > 1e-8
        if unstable != expect_unstable:
            failures.append(f"{kind.value} k={k}: max_re = {max_re}")
        details.append(
            f"{kind.value} k={k}: decay {tuple(round(float(f), 2) for f in val.decay_factors)}, "
            f"max_re {max_re:.2e}"
        )
    return CheckResult(
        "hill-cross-validation", not failures,
        "; ".join(details) if not failures else "; ".join(failures),
        "mismatch/xi decay factor >= 3 per halving; instability signs match the index",
        0.0,
    )


def check_stokes_vs_newton() -> CheckResult:
    amplitudes = (0.02, 0.01, 0.005)
    failures = []
    details = []
    for kind, sym in (
        (EquationKind.BBM, bbm_symbol()),
        (EquationKind.BOUSSINESQ, boussinesq_symbol()),
    ):
        table = expansion_error(kind, sym, 1.0, amplitudes, 32)
        if not (2.5 <= table.slope <= 3.5):
            failures.append(f"{kind.value}: slope {table.slope}")
        details.append(f"{kind.value}: slope {table.slope:.3f}")
    wave = newton_wave(EquationKind.BBM, bbm_symbol(), 1.0, 0.01, 32)
    ratio = wave.u_hat[2] / 0.01**2
    target = (1.0 + 1.0) / 6.0  # (1+k^2)/(6k^2) at k=1
    if abs(ratio - target) > 2e-3 * abs(target):
        failures.append(f"second harmonic ratio {ratio} vs {target}")
    details.append(f"u_hat[2]/a^2 = {ratio:.6f}")
    return CheckResult(
        "stokes-vs-newton", not failures,
        "; ".join(details) if not failures else "; ".join(failures),
        "slopes in [2.5, 3.5]; second-harmonic ratio 1/3 within 2e-3 relative",
        0.0,
    )


def _root_classification(coeffs: np.ndarray) -> QuarticClass:
    roots = poly_roots(coeffs)
    real = int(np.sum(np.abs(roots.imag) <= 1e-7 * (1.0 + np.abs(roots))))
    if real == 4:
        return QuarticClass.FOUR_REAL
    if real == 2:
        return QuarticClass.TWO_REAL_ONE_PAIR
    return QuarticClass.TWO_PAIRS


def check_quartic_classifier() -> CheckResult:
    rng = property_rng()
    total = 10_000
    tested = 0
    disagreements = 0
    for _ in range(total):
        coeffs = rng.normal(0.0, 1.0, size=5)
        if abs(coeffs[0]) < 1e-3:
            coeffs[0] = 1.0
        scale = float(np.max(np.abs(coeffs)))
        disc = quartic_disc(*coeffs)
        if abs(disc) <= 1e-8 * scale:
            continue
        tested += 1
        cls = classify_quartic(*coeffs, tol=0.0)
        oracle = _root_classification(coeffs)
        if cls.category is not oracle:
            disagreements += 1
    ok = disagreements == 0
    return CheckResult(
        "quartic-classifier", ok,
        f"{disagreements} disagreements over {tested} decisive samples of {total}",
        "zero disagreements with the companion-matrix oracle",
        0.0,
    )


def check_zero_state_spectra() -> CheckResult:
    failures = []
    for kind, sym, expected_mult in (
        (EquationKind.BBM, bbm_symbol(), 3),
        (EquationKind.BOUSSINESQ, boussinesq_symbol(), 4),
    ):
        wave = newton_wave(kind, sym, 1.0, 0.0, 32)
        for xi in (0.0, 0.25):
            op = hill.assemble(kind, sym, wave, xi, 32)
            vals = np.linalg.eigvals(op.matrix)
            if float(np.max(np.abs(vals.real))) > 1e-10:
                failures.append(f"{kind.value} xi={xi}: max |Re| = {np.max(np.abs(vals.real))}")
        op0 = hill.assemble(kind, sym, wave, 0.0, 32)
        mult = hill.zero_multiplicity(op0)
        if mult != expected_mult:
            failures.append(f"{kind.value}: multiplicity {mult} != {expected_mult}")
    return CheckResult(
        "zero-state-spectra", not failures,
        "purely imaginary, multiplicities 3/4" if not failures else "; ".join(failures),
        "max |Re| <= 1e-10 at a=0; origin multiplicity 3 (scalar) / 4 (system)",
        0.0,
    )


ALL_CHECKS: tuple[tuple[str, Callable[[], CheckResult]], ...] = (
    ("bbm-threshold", check_bbm_threshold),
    ("bbm-collision-floor", check_collision_floor),
    ("boussinesq-stability", check_boussinesq_stability),
    ("fractional-threshold", check_fractional_threshold),
    ("cubic-disc-identity", check_cubic_disc_identity),
    ("hill-cross-validation", check_hill_cross_validation),
    ("stokes-vs-newton", check_stokes_vs_newton),
    ("quartic-classifier", check_quartic_classifier),
    ("zero-state-spectra", check_zero_state_spectra),
)


def run_checks(only: str | None = None) -> list[CheckResult]:
    results = []
    for name, fn in ALL_CHECKS:
        if only and only not in name:
            continue
        results.append(_timed(fn))
    return results
