import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gyrostab.models import BrouwerParams, build_brouwer
from gyrostab.spectral import (QuarticPoly, Stability, SystemMatrices, characteristic_coefficients,
                               characteristic_poly, classify, classify_batch, conjugate_symmetrize,
                               matching_distance, poly_eval, quartic_discriminant,
                               quartic_roots_closed_form, quartic_roots_companion, residual_scale,
                               root_set_scale, solve_quartic_closed_form, solve_quartic_companion)

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
mat = st.lists(finite, min_size=4, max_size=4).map(lambda v: np.array(v).reshape(2, 2))


def _np_roots(coeffs):
    return np.roots(np.concatenate([[1.0], coeffs]))


# ---------------------------------------------------------------- types


def test_system_matrices_rejects_non_finite():
    with pytest.raises(ValueError):
        SystemMatrices(np.array([[np.nan, 0], [0, 1]]), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        SystemMatrices(np.eye(3), np.zeros((2, 2)))


def test_system_matrices_are_read_only():
    s = SystemMatrices(np.eye(2), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        s.a[0, 0] = 5.0


@given(mat, mat)
def test_symmetric_skew_split_is_exact(a, b):
    s = SystemMatrices(a, b)
    assert np.allclose(s.a_sym + s.a_skew, s.a, rtol=0, atol=4e-16 * (1 + np.abs(a).max()))
    assert np.array_equal(s.a_sym, s.a_sym.T)
    assert np.array_equal(s.b_skew, -s.b_skew.T)


def test_quartic_poly_rejects_non_finite():
    with pytest.raises(ValueError):
        QuarticPoly(0.0, np.inf, 0.0, 0.0)


# ---------------------------------------------------------------- characteristic polynomial


def test_char_poly_decoupled_oscillators():
    p = characteristic_poly(build_brouwer(BrouwerParams(1, 1, 0)))
    assert np.array_equal(p.coefficients, [0, 2, 0, 1])


def test_char_poly_brouwer_k1_1_k2_m1_omega_1():
    p = characteristic_poly(build_brouwer(BrouwerParams(1, -1, 1)))
    assert p.c3 == 0 and p.c2 == 2 and p.c0 == 0


@given(mat, mat)
def test_char_poly_identities_and_determinant_oracle(a, b):
    c = characteristic_coefficients(a, b)
    assert c[0] == np.trace(b)
    assert c[3] == pytest.approx(np.linalg.det(a), abs=1e-12 * (1 + np.abs(a).max() ** 2))
    # oracle: det(l^2 I + l B + A) at five sample points pins the monic quartic
    for lam in (0.3, -1.1, 2.0, 0.5j, 1 + 1j):
        direct = np.linalg.det(lam**2 * np.eye(2) + lam * b + a)
        scale = (1 + np.abs(a).max() + np.abs(b).max()) ** 2 * max(1, abs(lam)) ** 4
        assert abs(poly_eval(c, lam) - direct) <= 1e-12 * scale


def test_char_poly_vectorised_shape():
    a = np.random.default_rng(1).normal(size=(3, 5, 2, 2))
    b = np.random.default_rng(2).normal(size=(3, 5, 2, 2))
    c = characteristic_coefficients(a, b)
    assert c.shape == (3, 5, 4)
    assert np.allclose(c[1, 2], characteristic_coefficients(a[1, 2], b[1, 2]))


# ---------------------------------------------------------------- solvers


@pytest.mark.parametrize("solve", [quartic_roots_closed_form, quartic_roots_companion])
def test_perfect_square(solve):
    r = solve(np.array([0.0, 2.0, 0.0, 1.0]))
    assert matching_distance(r, np.array([1j, 1j, -1j, -1j])) <= 1e-12


@pytest.mark.parametrize("solve", [quartic_roots_closed_form, quartic_roots_companion])
def test_saddle_biquadratic(solve):
    r = solve(np.array([0.0, 0.6, 0.0, 0.0175]))
    # oracle: quadratic formula in mu = l**2
    mu = np.roots([1, 0.6, 0.0175])
    assert np.allclose(sorted(mu), [-0.56926, -0.03074], atol=1e-5)
    expected = np.concatenate([np.sqrt(mu.astype(complex)), -np.sqrt(mu.astype(complex))])
    assert matching_distance(r, expected) <= 1e-13
    assert np.all(np.abs(r.real) <= 1e-15)


@pytest.mark.parametrize("solve", [quartic_roots_closed_form, quartic_roots_companion])
def test_prandtl_smith_point(solve):
    r = solve(np.array([0.0, 4.0, 0.0, -0.04]))
    real = np.sort(r[np.abs(r.imag) < 1e-12].real)
    imag = np.sort(r[np.abs(r.real) < 1e-12].imag)
    s = np.sqrt(4.04)  # mu**2 + 4 mu - 0.04 = 0 with mu = l**2
    assert real == pytest.approx([-np.sqrt(s - 2), np.sqrt(s - 2)], rel=1e-13)
    assert imag == pytest.approx([-np.sqrt(s + 2), np.sqrt(s + 2)], rel=1e-13)
    assert abs(real[1] - 0.0999) < 1e-4 and abs(imag[1] - 2.0025) < 1e-4


@pytest.mark.parametrize("coeffs", [
    [0.0, 0.0, 0.0, 0.0],                 # quadruple zero
    [-4.0, 6.0, -4.0, 1.0],               # (l - 1)**4
    [2.0, 0.0, -2.0, -1.0],               # (l - 1)(l + 1)**3
    [0.0, -2.0, 0.0, 1.0],                # (l**2 - 1)**2
    [1e-9, 2.0, 1e-9, 1.0],               # nearly perfect square
])
def test_multiple_roots_residual_bound(coeffs):
    coeffs = np.array(coeffs)
    for solve in (quartic_roots_closed_form, quartic_roots_companion):
        r = solve(coeffs)
        assert np.all(np.abs(poly_eval(coeffs, r)) <= 1e-9 * residual_scale(coeffs, r))
        # oracle: numpy's independent companion path (unpolished)
        assert matching_distance(r, _np_roots(coeffs)) <= 1e-3


@settings(max_examples=300, deadline=None)
@given(st.lists(finite, min_size=4, max_size=4))
def test_residual_bound_and_solver_equivalence(c):
    c = np.array(c)
    r1 = quartic_roots_closed_form(c)
    r2 = quartic_roots_companion(c)
    assert np.all(np.abs(poly_eval(c, r1)) <= 1e-9 * residual_scale(c, r1))
    assert np.all(np.abs(poly_eval(c, r2)) <= 1e-9 * residual_scale(c, r2))
    _, size = quartic_discriminant(c)
    disc, _ = quartic_discriminant(c)
    if abs(disc) > 1e-6 * size:  # well separated roots
        assert matching_distance(r1, r2) <= 1e-10 * root_set_scale(c, r1)


@settings(max_examples=200, deadline=None)
@given(st.lists(finite, min_size=4, max_size=4))
def test_conjugate_symmetry(c):
    r = quartic_roots_closed_form(np.array(c))
    scale = 1 + np.abs(r).max()
    assert matching_distance(r, np.conj(r)) <= 1e-12 * scale


def test_conjugate_symmetrize_pairs_exactly():
    r = np.array([1 + 2j, 1 - 2j + 1e-14j, 3 + 1e-15j, -3])
    s = conjugate_symmetrize(r)
    assert matching_distance(s, np.conj(s)) == 0


@settings(max_examples=200, deadline=None)
@given(mat, st.floats(-5, 5), st.floats(-5, 5))
def test_trace_conditions_give_real_part_symmetry(a_seed, g, s):
    # A a multiple of I, B traceless: tr B = 0 and tr AB = 0
    a = float(a_seed[0, 0]) * np.eye(2)
    b = np.array([[s, g], [g, -s]]) + np.array([[0, -1], [1, 0]]) * float(a_seed[1, 1])
    assert abs(np.trace(b)) == 0 and abs(np.trace(a @ b)) <= 1e-12
    r = quartic_roots_closed_form(characteristic_coefficients(a, b))
    assert matching_distance(r, -np.conj(r)) <= 1e-9 * root_set_scale(characteristic_coefficients(a, b), r)


def test_spectrum_wrappers():
    p = QuarticPoly(0.0, 0.6, 0.0, 0.0175)
    s1, s2 = solve_quartic_closed_form(p), solve_quartic_companion(p)
    assert len(s1.roots) == 4 and s1.clusters == ()
    assert matching_distance(s1.roots, s2.roots) <= 1e-10
    assert s1.max_real_part == 0


def test_matching_distance_is_permutation_invariant():
    r = np.array([1, 2j, -3, 4 + 1j])
    assert matching_distance(r, r[[3, 1, 0, 2]]) == 0
    assert matching_distance(r, r + 0.5) == pytest.approx(0.5)


# ---------------------------------------------------------------- classification


def test_quadruple_zero_is_non_semisimple():
    v = classify(build_brouwer(BrouwerParams(0, 0, 0)))
    assert v.klass is Stability.NonSemisimpleAxisUnstable
    [cl] = v.spectrum.clusters
    assert cl.algebraic == 4 and cl.geometric == 2


def test_identical_oscillators_are_marginal():
    v = classify(build_brouwer(BrouwerParams(1, 1, 0)))
    assert v.klass is Stability.MarginallyStable
    assert sorted((c.algebraic, c.geometric) for c in v.spectrum.clusters) == [(2, 2), (2, 2)]


def test_saddle_is_marginal():
    v = classify(build_brouwer(BrouwerParams(-0.1, 0.2, 0.5)))
    assert v.klass is Stability.MarginallyStable
    assert all(c.algebraic == 1 for c in v.spectrum.clusters)
    assert not v.borderline


def test_divergence_flutter_and_asymptotic():
    assert classify(SystemMatrices(-np.eye(2), np.zeros((2, 2)))).klass is Stability.DivergenceUnstable
    # negative damping on an oscillator: complex roots on the right
    assert classify(SystemMatrices(np.eye(2), -0.1 * np.eye(2))).klass is Stability.FlutterUnstable
    assert classify(SystemMatrices(np.eye(2), 0.1 * np.eye(2))).klass is Stability.AsymptoticallyStable


@settings(max_examples=200, deadline=None)
@given(mat, mat)
def test_verdict_invariants(a, b):
    v = classify(SystemMatrices(a, b))
    tol = v.diagnostics["tol_re"]
    assert (v.klass is Stability.AsymptoticallyStable) == (v.max_real_part < -tol)
    axis = [c for c in v.spectrum.clusters if abs(c.center.real) <= tol]
    marginal = abs(v.max_real_part) <= tol and all(c.semisimple for c in axis)
    assert (v.klass is Stability.MarginallyStable) == marginal
    for c in v.spectrum.clusters:
        assert 1 <= c.geometric <= c.algebraic
    assert sum(c.algebraic for c in v.spectrum.clusters) == 4


def test_batch_matches_single():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(50, 2, 2))
    b = rng.normal(size=(50, 2, 2))
    res = classify_batch(a, b)
    for i in range(50):
        assert res.codes[i] == int(classify(SystemMatrices(a[i], b[i])).klass)
