import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from modwave.errors import LeadingZero, NoBracket
from modwave.indices import ind
from modwave.numerics import (
    Bracket,
    cluster_roots,
    cos_product,
    cos_product_matrix,
    cos_square,
    eig_dense,
    find_root,
    poly_roots,
    property_rng,
)
from modwave.stokes import EquationKind


def test_find_root_identity():
    assert find_root(lambda x: x, Bracket.scan(lambda x: x, -1.0, 1.0)) == pytest.approx(0.0, abs=1e-12)


def test_find_root_bbm_index_threshold(bbm):
    f = lambda k: ind(EquationKind.BBM, bbm, k).ind
    root = find_root(f, Bracket.scan(f, 1.5, 2.0), tol=1e-13)
    assert abs(root - math.sqrt(3.0)) <= 1e-10


def test_find_root_fractional_alpha():
    f = lambda a: 3.0 - 2.0 ** (1.0 + a) + a
    root = find_root(f, Bracket.scan(f, 0.5, 1.5), tol=1e-14)
    assert abs(root - 1.0) <= 1e-12


def test_find_root_stays_in_bracket():
    rng = property_rng()
    for _ in range(50):
        shift = rng.uniform(-2.0, 2.0)
        f = lambda x: math.tanh(x - shift)
        lo, hi = shift - rng.uniform(0.1, 3.0), shift + rng.uniform(0.1, 3.0)
        root = find_root(f, Bracket.scan(f, lo, hi))
        assert lo <= root <= hi
        assert abs(root - shift) <= 1e-9


def test_no_bracket():
    with pytest.raises(NoBracket):
        Bracket.scan(lambda x: x * x + 1.0, -1.0, 1.0)


def test_poly_roots_quartic():
    roots = sorted(poly_roots([1.0, 0.0, -5.0, 0.0, 4.0]).real)
    assert_allclose(roots, [-2.0, -1.0, 1.0, 2.0], atol=1e-10)


def test_poly_roots_residuals():
    rng = property_rng()
    for _ in range(100):
        coeffs = np.concatenate([[1.0], rng.normal(0.0, 1.0, 4)])
        scale = np.max(np.abs(coeffs))
        for r in poly_roots(coeffs):
            val = np.polyval(coeffs, r)
            assert abs(val) <= 1e-8 * scale * max(1.0, abs(r)) ** 4


def test_poly_roots_leading_zero():
    with pytest.raises(LeadingZero):
        poly_roots([0.0, 1.0, 2.0])


def test_cluster_roots():
    clusters = cluster_roots(np.array([1.0, 1.0 + 1e-10, 2.0]), tol=1e-8)
    mults = sorted(m for _, m in clusters)
    assert mults == [1, 2]


def test_eig_dense_diagonal():
    vals = eig_dense(np.diag([3.0, 1.0, 2.0]))
    assert_allclose(vals.real, [1.0, 2.0, 3.0], atol=1e-14)


def test_eig_dense_rotation():
    vals = eig_dense(np.array([[0.0, 1.0], [-1.0, 0.0]]))
    assert_allclose(sorted(vals.imag), [-1.0, 1.0], atol=1e-14)
    assert_allclose(vals.real, 0.0, atol=1e-14)


def test_eig_dense_hermitian_real():
    rng = property_rng()
    for _ in range(20):
        a = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        h = a + a.conj().T
        vals = eig_dense(h)
        assert np.max(np.abs(vals.imag)) <= 1e-10


def test_eig_vs_poly_roots_on_pencil(bbm):
    from modwave.pencil import build_bbm_pencil, rescaled_charpoly

    pencil = build_bbm_pencil(bbm, 1.0, 1e-2, 1e-2)
    lam_direct = np.linalg.eigvals(np.linalg.solve(pencil.i_matrix, pencil.b_matrix))
    poly = rescaled_charpoly(pencil)
    lam_poly = -1j * pencil.xi * poly.roots()
    assert_allclose(sorted(lam_direct, key=lambda z: (z.real, z.imag)),
                    sorted(lam_poly, key=lambda z: (z.real, z.imag)), atol=1e-12)


def test_convolution_zero():
    u = np.zeros(5)
    v = np.array([1.0, 0.5, 0.25, 0.0, 0.0])
    assert_allclose(cos_product(u, v, 8), 0.0, atol=0.0)


def test_cos_squared_identity():
    # cos(z)^2 = 1/2 + cos(2z)/2
    u = np.array([0.0, 1.0, 0.0])
    out = cos_square(u, 4)
    assert_allclose(out, [0.5, 0.0, 0.5, 0.0, 0.0], atol=1e-15)


def test_convolution_matches_grid_oracle():
    rng = property_rng()
    n = 10
    z = np.linspace(0.0, 2.0 * np.pi, 512, endpoint=False)
    modes = np.arange(2 * n + 1)
    basis = np.cos(np.outer(z, modes))
    for _ in range(25):
        u = rng.normal(size=n + 1)
        v = rng.normal(size=n + 1)
        product = (basis[:, : n + 1] @ u) * (basis[:, : n + 1] @ v)
        # recover cosine coefficients from the grid
        expected = basis.T @ product / z.size * 2.0
        expected[0] /= 2.0
        got = cos_product(u, v, 2 * n)
        assert_allclose(got, expected, atol=1e-12)


def test_product_matrix_is_multiplication():
    rng = property_rng()
    u = rng.normal(size=9)
    v = rng.normal(size=9)
    table = cos_product_matrix(u, 8)
    assert_allclose(table @ v, cos_product(u, v, 8), atol=1e-13)
