import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bergshift.coefficients import (
    DiscretePlanarMeasure,
    JacobiSequence,
    VerblunskySequence,
    constant_jacobi,
    constant_verblunsky,
    periodic_jacobi,
)
from bergshift.errors import BoundsError, ModelError, PoleError
from bergshift.hessenberg import HessenbergTruncation, arnoldi_truncation, ggt_truncation, jacobi_truncation
from bergshift.polynomials import (
    circle_grid,
    eval_monic,
    kappa,
    log_kappa,
    monic_coefficients,
    monic_values,
    ratio,
    ratio_table,
    resolvent_diagonal,
)

from conftest import disk_values, random_alpha
from oracles import chebyshev_ratio_limit, dense_det, szego_monic, three_term_monic


def _sources(rng, N=12):
    pts = rng.normal(size=N + 4) + 1j * rng.normal(size=N + 4)
    return [
        ggt_truncation(VerblunskySequence(values=random_alpha(rng, N)), N),
        jacobi_truncation(JacobiSequence(a=rng.random(N) + 0.2, b=rng.normal(size=N)), N),
        arnoldi_truncation(DiscretePlanarMeasure(pts, rng.random(N + 4) + 0.1), N),
    ]


def test_free_case_monic_is_power():
    T = ggt_truncation(constant_verblunsky(0.0), 10)
    z = np.array([0.3 + 0.1j, 2.0, -1.5j])
    assert np.allclose(eval_monic(T, 7, z), z**7, rtol=1e-15)


def test_chebyshev_p2():
    J = jacobi_truncation(constant_jacobi(0.5, 0.0), 5)
    assert eval_monic(J, 2, 1.0) == pytest.approx(0.75)
    assert np.allclose(monic_coefficients(J, 2), [1, 0, -0.25])


@given(disk_values(0.8, min_size=1, max_size=12))
def test_monic_coefficients_match_szego_recursion(values):
    n = len(values)
    T = ggt_truncation(VerblunskySequence(values=values), n)
    ref = szego_monic(values, n)
    assert np.max(np.abs(monic_coefficients(T, n) - ref)) <= 1e-10 * max(1, np.max(np.abs(ref)))


@given(st.lists(st.floats(0.2, 2), min_size=2, max_size=12), st.data())
def test_monic_coefficients_match_three_term(a, data):
    b = data.draw(st.lists(st.floats(-2, 2), min_size=len(a), max_size=len(a)))
    n = len(a)
    J = jacobi_truncation(JacobiSequence(a=a, b=b), n)
    ref = three_term_monic(a, b, n)
    assert np.max(np.abs(monic_coefficients(J, n) - ref)) <= 1e-10 * max(1, np.max(np.abs(ref)))


def test_determinant_identity_all_sources(rng):
    z = np.array([0.7 + 0.2j, -1.3, 2.5j])
    for T in _sources(rng):
        for n in range(1, 13):
            H = T.corner(n)
            ref = np.array([dense_det(H, zz) for zz in z])
            got = eval_monic(T, n, z)
            assert np.max(np.abs(got - ref) / np.abs(ref)) <= 1e-9
            assert np.max(np.abs(monic_coefficients(T, n) - np.poly(H))) <= 1e-9 * max(1, np.max(np.abs(np.poly(H))))


def test_large_degree_does_not_overflow():
    J = jacobi_truncation(constant_jacobi(0.5, 0.0), 3000)
    Q, s = monic_values(J, 3000, np.array([5.0]))
    assert np.all(np.isfinite(Q)) and s[0] > 700
    assert ratio(J, 3000, 5.0) == pytest.approx(chebyshev_ratio_limit(5.0), rel=1e-12)


def test_derivative_recurrence(rng):
    T = _sources(rng)[0]
    z = np.array([1.5 + 0.5j])
    Q, s, D = monic_values(T, 8, z, derivative=True)
    deriv = np.polyval(np.polyder(np.poly(T.corner(8))), z)
    assert np.allclose(D[8] * np.exp(s), deriv, rtol=1e-10)


def test_kappa_examples():
    assert kappa(ggt_truncation(constant_verblunsky(0.0), 6), 4) == 1
    assert kappa(ggt_truncation(VerblunskySequence(values=[0.6, 0.0]), 2), 1) == pytest.approx(1.25)
    assert kappa(jacobi_truncation(constant_jacobi(0.5, 0.0), 12), 7) == pytest.approx(2**7)
    assert kappa(jacobi_truncation(constant_jacobi(0.5, 0.0), 12), 0) == 1


def test_kappa_times_subdiagonal_product(rng):
    for T in _sources(rng):
        sub = np.diag(T.entries, -1).real
        for n in range(1, 10):
            assert kappa(T, n) * np.prod(sub[:n]) == pytest.approx(1, abs=1e-12)


def test_kappa_rejects_non_real_subdiagonal():
    H = np.array([[0, 1], [1j, 0]], dtype=complex)
    T = HessenbergTruncation(2, "arnoldi", dense=H)
    with pytest.raises(ModelError):
        log_kappa(T, 1)


def test_ratio_examples():
    T = ggt_truncation(constant_verblunsky(0.0), 20)
    for normalized in (False, True):
        assert ratio(T, 10, 2 + 1j, normalized) == pytest.approx(1 / (2 + 1j), abs=1e-15)
    J = jacobi_truncation(constant_jacobi(0.5, 0.0), 200)
    assert abs(ratio(J, 200, 2.0) - (4 - 2 * np.sqrt(3))) <= 1e-8


def test_ratio_equals_resolvent_entry(rng):
    for T in _sources(rng, 30):
        z = 2 * T.R_est * np.exp(0.7j)
        for n in (1, 5, 17, 30):
            assert abs(ratio(T, n, z) - resolvent_diagonal(T, n, z)) <= 1e-10


def test_normalized_ratio_scales_by_kappa(rng):
    for T in _sources(rng, 20):
        z = 2.5 * T.R_est
        for n in (3, 12):
            scaled = ratio(T, n, z) * kappa(T, n - 1) / kappa(T, n)
            assert ratio(T, n, z, normalized=True) == pytest.approx(scaled, rel=1e-12)


def test_ratio_table_fast_path_matches_generic(rng):
    alpha = random_alpha(rng, 60, 0.9)
    T = ggt_truncation(VerblunskySequence(values=alpha), 60)
    generic = HessenbergTruncation(60, "arnoldi", dense=T.entries, next_subdiagonal=T.next_subdiagonal)
    z = circle_grid(1.5, 16)
    for normalized in (False, True):
        a = ratio_table(T, 60, z, normalized)
        b = ratio_table(generic, 60, z, normalized)
        assert np.max(np.abs(a - b)) <= 1e-12


def test_ratio_bounded_on_circle(rng):
    for T in _sources(rng, 40):
        r = 2 * T.R_est
        table = ratio_table(T, 39, circle_grid(r, 64))
        assert np.max(np.abs(table)) <= 1 / (r - T.R_est) + 0.1


def test_pole_and_radius_warning():
    J = jacobi_truncation(constant_jacobi(0.5, 0.0), 5)
    with pytest.warns(RuntimeWarning):
        with pytest.raises(PoleError):
            ratio(J, 2, 0.5)


def test_degree_bounds():
    J = jacobi_truncation(constant_jacobi(0.5, 0.0), 5)
    with pytest.raises(BoundsError):
        eval_monic(J, 6, 1.0)
    with pytest.raises(BoundsError):
        ratio(J, 0, 3.0)


def test_periodic_ratio_converges_along_residues():
    J = jacobi_truncation(periodic_jacobi([1.0, 2.0], [0.0, 0.0]), 402)
    z = 4 * J.R_est
    even = [ratio(J, n, z) for n in (300, 302, 400)]
    odd = [ratio(J, n, z) for n in (301, 303, 401)]
    assert np.ptp(even) < 1e-12 and np.ptp(odd) < 1e-12
    assert abs(even[0] - odd[0]) > 1e-3
