import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from modwave.dispersion import d1_m, d2_m, eval_m
from modwave.errors import (
    DegenerateResonance,
    DegreeMismatch,
    LeadingZero,
    NotRescalable,
    UnsupportedKind,
)
from modwave.indices import base_indices, ind
from modwave.numerics import poly_roots, property_rng
from modwave.pencil import (
    PencilVerdict,
    QuarticClass,
    bnesq_leading_discs,
    bnesq_leading_quartic,
    build_bbm_pencil,
    build_bnesq_pencil,
    build_pencil,
    classify_quartic,
    classify_rescaled,
    disc1,
    disc2,
    disc_cubic,
    disc_quartic,
    pencil_verdict,
    quartic_disc,
    rescaled_charpoly,
)
from modwave.stokes import EquationKind


def test_pencils_vanish_at_origin(bbm, boussinesq):
    p = build_bbm_pencil(bbm, 1.0, 0.0, 0.0)
    assert_allclose(p.b_matrix, 0.0, atol=0.0)
    assert_allclose(p.i_matrix, np.eye(3), atol=0.0)
    q = build_bnesq_pencil(boussinesq, 1.0, 0.0, 0.0)
    assert_allclose(q.b_matrix, 0.0, atol=0.0)
    assert_allclose(q.i_matrix, np.eye(4), atol=0.0)


def test_zero_xi_eigenvalues_stay_at_origin(bbm, boussinesq):
    # at xi = 0 the pencil spectrum is exactly {0} for small a
    p = build_bbm_pencil(bbm, 1.0, 0.0, 0.02)
    assert_allclose(np.abs(p.eigenvalues()), 0.0, atol=1e-14)
    q = build_bnesq_pencil(boussinesq, 1.0, 0.0, 0.02)
    assert_allclose(np.abs(q.eigenvalues()), 0.0, atol=1e-14)


def test_bbm_flat_state_roots(bbm):
    # rescaled roots at a=0 are {km' +/- xi*e, 1-m} with e = km' + k^2 m''/2
    for k in (0.7, 1.0, 2.0):
        for xi in (1e-3, 1e-2):
            m, mp, mpp = eval_m(bbm, k), d1_m(bbm, k), d2_m(bbm, k)
            e = k * mp + 0.5 * k * k * mpp
            expected = sorted([k * mp + xi * e, k * mp - xi * e, 1.0 - m])
            poly = rescaled_charpoly(build_bbm_pencil(bbm, k, xi, 0.0))
            got = sorted(poly.roots().real)
            assert_allclose(got, expected, atol=1e-12)


def test_bnesq_flat_state_quartic_coefficients(boussinesq):
    # a=0 rescaled polynomial equals ((L-km')^2 - xi^2 e^2)((L+m)^2 - 1)
    for k in (0.5, 1.0, 2.0):
        for xi in (1e-3, 1e-2):
            m, mp, mpp = eval_m(boussinesq, k), d1_m(boussinesq, k), d2_m(boussinesq, k)
            e = k * mp + 0.5 * k * k * mpp
            gs = k * mp
            left = np.array([1.0, -2.0 * gs, gs * gs - xi * xi * e * e])
            right = np.array([1.0, 2.0 * m, m * m - 1.0])
            expected = np.convolve(left, right)
            poly = rescaled_charpoly(build_bnesq_pencil(boussinesq, k, xi, 0.0))
            assert_allclose(poly.standard_coefficients(), expected, atol=1e-13)


def test_rescaled_coefficients_are_real(bbm, boussinesq):
    # exercised through the IMAG_RESIDUE_TOL gate inside rescaled_charpoly
    for k in (0.5, 1.0, 2.0, 4.0):
        for xi in (1e-3, 1e-2):
            for a in (0.0, 1e-2):
                rescaled_charpoly(build_bbm_pencil(bbm, k, xi, a))
                rescaled_charpoly(build_bnesq_pencil(boussinesq, k, xi, a))


def test_cubic_disc_closed_form_corrected(bbm):
    # disc = (1/16) xi^2 (k i1 (k i1 xi - 2 i2m)(k i1 xi + 2 i2m))^2; the
    # same expression with coefficient 4 instead of 2 misses by a factor
    # of about 16 and is therefore not the computed discriminant
    for k in (0.5, 1.0, 2.0, 4.0):
        i1, i2m, _, _, _ = base_indices(bbm, k)
        ki1 = k * i1
        for xi in (1e-3, 1e-2):
            disc = disc_cubic(rescaled_charpoly(build_bbm_pencil(bbm, k, xi, 0.0)))
            ref2 = xi**2 / 16.0 * (ki1 * (ki1 * xi - 2 * i2m) * (ki1 * xi + 2 * i2m)) ** 2
            ref4 = xi**2 / 16.0 * (ki1 * (ki1 * xi - 4 * i2m) * (ki1 * xi + 4 * i2m)) ** 2
            assert disc == pytest.approx(ref2, rel=1e-10)
            assert not math.isclose(disc, ref4, rel_tol=1e-2)
            assert ref4 / disc == pytest.approx(16.0, rel=0.05)


def test_disc_cubic_signs(bbm):
    neg = disc_cubic(rescaled_charpoly(build_bbm_pencil(bbm, 2.0, 0.01, 0.005)))
    pos = disc_cubic(rescaled_charpoly(build_bbm_pencil(bbm, 1.0, 0.01, 0.005)))
    assert neg < 0 < pos


def test_bnesq_leading_discs_closed_form(boussinesq):
    for k in (0.25, 0.5, 1.0, 2.0, 4.0, 8.0):
        gs = eval_m(boussinesq, k) + k * d1_m(boussinesq, k)
        d1v, d2v = bnesq_leading_discs(boussinesq, k)
        assert d1v == pytest.approx(-4.0 * (2.0 + gs * gs), rel=1e-12)
        assert d2v == pytest.approx(-16.0 * (1.0 + 2.0 * gs * gs), rel=1e-12)
        assert d1v < 0 and d2v < 0


def test_leading_quartic_roots_are_flat_state_limits(boussinesq):
    k = 1.0
    p = bnesq_leading_quartic(boussinesq, k)
    roots = sorted(poly_roots(p).real)
    m = eval_m(boussinesq, k)
    gs = k * d1_m(boussinesq, k)
    assert_allclose(roots, sorted([gs, gs, -m - 1.0, -m + 1.0]), atol=1e-8)


def test_classify_examples():
    assert classify_quartic(1, 0, -5, 0, 4).category is QuarticClass.FOUR_REAL
    assert classify_quartic(1, 0, 2, 0, 0.99).category is QuarticClass.TWO_PAIRS
    assert classify_quartic(1, 0, -1, 0, -1).category is QuarticClass.TWO_REAL_ONE_PAIR
    # double pair (x^2+1)^2 has disc = 0
    assert classify_quartic(1, 0, 2, 0, 1).category is QuarticClass.DEGENERATE
    with pytest.raises(LeadingZero):
        classify_quartic(0, 1, 2, 3, 4)


def test_classifier_agrees_with_root_oracle():
    rng = property_rng()
    checked = 0
    for _ in range(2000):
        coeffs = rng.normal(0.0, 1.0, size=5)
        if abs(coeffs[0]) < 1e-3:
            coeffs[0] = 1.0
        disc = quartic_disc(*coeffs)
        if abs(disc) <= 1e-8 * np.max(np.abs(coeffs)):
            continue
        cls = classify_quartic(*coeffs, tol=0.0)
        roots = poly_roots(coeffs)
        n_real = int(np.sum(np.abs(roots.imag) <= 1e-7 * (1.0 + np.abs(roots))))
        expected = {4: QuarticClass.FOUR_REAL, 2: QuarticClass.TWO_REAL_ONE_PAIR,
                    0: QuarticClass.TWO_PAIRS}[n_real]
        assert cls.category is expected, f"{coeffs} -> {cls} vs {n_real} real roots"
        checked += 1
    assert checked > 1500


def test_rescaled_requires_positive_xi(bbm):
    with pytest.raises(NotRescalable):
        rescaled_charpoly(build_bbm_pencil(bbm, 1.0, 0.0, 0.01))


def test_degree_mismatch(bbm, boussinesq):
    cubic = rescaled_charpoly(build_bbm_pencil(bbm, 1.0, 0.01, 0.0))
    with pytest.raises(DegreeMismatch):
        disc_quartic(cubic)
    quartic = rescaled_charpoly(build_bnesq_pencil(boussinesq, 1.0, 0.01, 0.0))
    with pytest.raises(DegreeMismatch):
        disc_cubic(quartic)
    assert disc1(quartic) < 0 and disc2(quartic) < 0


def test_resonant_denominators_raise():
    from modwave.dispersion import parse_symbol

    sym = parse_symbol("cos(k)")
    with pytest.raises(DegenerateResonance):
        build_bbm_pencil(sym, 2.0 * math.pi / 3.0, 0.01, 0.01)


def test_kdv_pencil_unsupported(bbm):
    with pytest.raises(UnsupportedKind):
        build_pencil(EquationKind.KDV, bbm, 1.0, 0.01, 0.01)


def test_pencil_json_dump(bbm):
    import json

    p = build_bbm_pencil(bbm, 1.0, 0.01, 0.01)
    payload = json.loads(json.dumps(p.to_json()))
    assert payload["kind"] == "bbm"
    assert len(payload["B"]) == 3 and len(payload["B"][0]) == 3
    re, im = payload["B"][2][1]
    assert re == pytest.approx(0.01 * 0.5) and im == 0.0  # a m(k) entry
    assert payload["I"][0][0] == [1.0, 0.0]


def test_sign_agreement_bbm(bbm):
    rng = property_rng()
    hits = 0
    for _ in range(500):
        k = float(rng.uniform(0.1, 10.0))
        report = ind(EquationKind.BBM, bbm, k)
        if abs(report.ind) <= 1e-10:
            continue
        disc = disc_cubic(rescaled_charpoly(build_bbm_pencil(bbm, k, 1e-2, 1e-2)))
        assert math.copysign(1.0, disc) == math.copysign(1.0, report.ind), k
        hits += 1
    assert hits >= 490


def test_four_real_agreement_bnesq(boussinesq, whitham):
    rng = property_rng()
    for sym in (boussinesq, whitham):
        for _ in range(250):
            k = float(rng.uniform(0.1, 10.0))
            report = ind(EquationKind.BOUSSINESQ, sym, k)
            d1v, d2v = bnesq_leading_discs(sym, k)
            if not (report.ind > 0 and d1v < 0 and d2v < 0):
                continue
            poly = rescaled_charpoly(build_bnesq_pencil(sym, k, 1e-2, 1e-2))
            assert disc_quartic(poly) > 0
            assert classify_rescaled(poly).category is QuarticClass.FOUR_REAL


def test_pencil_verdicts(bbm, boussinesq):
    assert pencil_verdict(EquationKind.BBM, bbm, 2.0) is PencilVerdict.UNSTABLE
    assert pencil_verdict(EquationKind.BBM, bbm, 1.0) is PencilVerdict.STABLE
    for k in (0.5, 1.0, 2.0, 5.0):
        assert pencil_verdict(EquationKind.BOUSSINESQ, boussinesq, k) is PencilVerdict.STABLE
    assert pencil_verdict(EquationKind.BBM, bbm, math.sqrt(3.0)) is PencilVerdict.DEGENERATE


def test_bbm_fractional_disc_threshold_matches_index(frac3):
    # at small xi << a the discriminant changes sign where the index does
    from modwave.indices import critical_wavenumber

    k_star = critical_wavenumber(EquationKind.BBM, frac3, (0.3, 1.2))
    assert k_star is not None
    below = disc_cubic(rescaled_charpoly(build_bbm_pencil(frac3, k_star - 0.05, 1e-4, 1e-2)))
    above = disc_cubic(rescaled_charpoly(build_bbm_pencil(frac3, k_star + 0.05, 1e-4, 1e-2)))
    assert below > 0 > above
