import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gyrostab import models as M
from gyrostab.spectral import J, Stability, characteristic_poly, classify

real = st.floats(-3, 3, allow_nan=False)


def _direct_quartic(k1, k2, om, d1, d2, nu):
    """Shieh-Masur quartic written out term by term."""
    return np.array([
        d1 + d2,
        d1 * d2 + k1 + k2 + 2 * om**2,
        k1 * d2 + d1 * k2 + 4 * om * nu - (d1 + d2) * om**2,
        (om**2 - k1) * (om**2 - k2) + nu**2,
    ])


def test_brouwer_examples():
    s = M.build_brouwer(M.BrouwerParams(1, 1, 0))
    assert np.array_equal(s.a, np.eye(2)) and np.array_equal(s.b, np.zeros((2, 2)))
    s = M.build_brouwer(M.BrouwerParams(1, -1, 1))
    assert np.array_equal(s.a, np.diag([0.0, -2.0])) and np.array_equal(s.b, 2 * J)
    p = M.BrouwerParams.from_radii(9.81, 9.81, 9.81, 0.3)
    assert (p.k1, p.k2) == (1.0, 1.0)
    assert "tau=t" in s.label


def test_negative_speed_is_folded_with_note():
    p = M.BrouwerParams(1, 2, -0.4)
    assert p.omega == 0.4 and p.notes
    with pytest.raises(ValueError):
        M.BrouwerParams(np.nan, 1, 0)


def test_shieh_masur_example():
    p = M.ShiehMasurParams(1, 1, 0.03, 0, 0, 0.03)
    c = characteristic_poly(M.build_shieh_masur(p)).coefficients
    assert c[0] == 0
    assert c[2] == pytest.approx(4 * 0.03 * 0.03, rel=1e-14)
    assert c[3] == pytest.approx((0.03**2 - 1) ** 2 + 0.03**2, rel=1e-14)
    assert abs(c[3] - 0.99910) < 1e-5
    assert p.kappa == 0


@settings(max_examples=200)
@given(real, real, real)
def test_shieh_masur_reduces_to_brouwer(k1, k2, om):
    a = M.build_shieh_masur(M.ShiehMasurParams(k1, k2, om, 0, 0, 0))
    b = M.build_brouwer(M.BrouwerParams(k1, k2, abs(om))) if om >= 0 else None
    if b is not None:
        assert np.array_equal(a.a, b.a) and np.array_equal(a.b, b.b)


@settings(max_examples=300)
@given(real, real, real, real, real, real)
def test_shieh_masur_matches_direct_quartic(k1, k2, om, d1, d2, nu):
    c = characteristic_poly(M.build_shieh_masur(M.ShiehMasurParams(k1, k2, om, d1, d2, nu)))
    ref = _direct_quartic(k1, k2, om, d1, d2, nu)
    scale = 1 + np.abs(ref).max() + 100
    assert np.all(np.abs(c.coefficients - ref) <= 1e-12 * scale)


def test_bottema_example_and_equivalence():
    s = M.build_bottema(M.BottemaParams(1, 1, 1, 0, 0.1))
    assert np.allclose(s.a, 0.1 * J, atol=1e-16)
    assert np.allclose(s.b, 0.1 * np.eye(2) + 2 * J)
    assert np.linalg.det(s.a) == pytest.approx(0.01)
    p = M.BottemaParams(0.7, 1.3, 0.4, 0.05, 0.02)
    a = M.build_bottema(p)
    b = M.build_shieh_masur(p.as_shieh_masur())
    assert np.allclose(a.a, b.a, rtol=0, atol=1e-16) and np.allclose(a.b, b.b, rtol=0, atol=1e-16)
    z = M.build_bottema(M.BottemaParams(0.7, 1.3, 0.4, 0, 0))
    br = M.build_brouwer(M.BrouwerParams(0.7, 1.3, 0.4))
    assert np.array_equal(z.a, br.a) and np.array_equal(z.b, br.b)


def test_helical_quad():
    s = M.build_helical_quad(M.HelicalQuadParams(a=0.0))
    assert np.array_equal(s.a, -np.eye(2) / 4) and np.array_equal(s.b, J)
    assert classify(M.build_helical_quad(M.HelicalQuadParams(a=0.1))).klass is Stability.MarginallyStable
    assert classify(M.build_helical_quad(M.HelicalQuadParams(a=0.3))).klass in (
        Stability.DivergenceUnstable, Stability.FlutterUnstable)
    p = M.HelicalQuadParams(lambda_pitch=2.0, kSq=0.5)
    assert p.a == pytest.approx(-4 * 0.5 / (16 * math.pi**2))
    with pytest.raises(ValueError):
        M.HelicalQuadParams(lambda_pitch=2.0)
    assert "tau=z" in s.label


@given(st.floats(-1, 1))
def test_reduction_chain_bit_identical(a):
    h = M.build_helical_quad(M.HelicalQuadParams(a=a))
    b = M.build_brouwer(M.BrouwerParams(-a, a, 0.5))
    assert np.array_equal(h.a, b.a) and np.array_equal(h.b, b.b)


@given(st.floats(0, 3), st.floats(0, 3), st.floats(0, 3), st.floats(0, 3))
def test_cholesteric_is_brouwer(alpha, ksq, e1, e2):
    c = M.build_cholesteric(M.CholestericParams(alpha, ksq, e1, e2))
    b = M.build_brouwer(M.BrouwerParams(ksq * e1, ksq * e2, alpha))
    assert np.array_equal(c.a, b.a) and np.array_equal(c.b, b.b)


def test_cholesteric_example():
    s = M.build_cholesteric(M.CholestericParams(1, 1, 2.25, 2.31))
    assert np.allclose(s.a, np.diag([1.25, 1.31]), rtol=0, atol=1e-15) and np.array_equal(s.b, 2 * J)
    assert classify(s).klass is Stability.MarginallyStable
    for alpha in (0.0, 0.5, 2.0):
        iso = M.build_cholesteric(M.CholestericParams(alpha, 1.0, 1.5, 1.5))
        assert classify(iso).klass is Stability.MarginallyStable
    assert classify(M.build_cholesteric(M.CholestericParams(0, 0, 1, 1))).klass is \
        Stability.NonSemisimpleAxisUnstable


def test_benjamin_feir_example():
    p = M.BenjaminFeirParams(1, 1, 1, 0.5, (1, 0))
    s = M.build_benjamin_feir(p)
    assert p.q == -0.75
    d = M.benjamin_feir_damping((1, 0))
    assert np.array_equal(d, [[0, -1], [-1, 0]])
    assert np.allclose(np.linalg.eigvalsh(d), [-1, 1])
    assert np.allclose(s.a, 1.4375 * np.eye(2))
    assert np.allclose(s.b, 2 * -0.75 * J + 2 * d)
    z = M.build_benjamin_feir(M.BenjaminFeirParams(1, 1, 1, 0.5, (0, 0)))
    assert np.allclose(z.b, 2 * 0.25 * J)
    with pytest.raises(ValueError):
        M.BenjaminFeirParams(-1, 1, 1, 1, (0, 0))


@given(st.floats(-2, 2), st.floats(-2, 2))
def test_benjamin_feir_vectorised_damping_matches_definition(u1, u2):
    a, b = M.benjamin_feir_matrices(1.3, 0.7, 0.9, 0.4, u1, u2)
    q = 0.4**2 * 1.3 - 0.7 * (u1 * u1 + u2 * u2)
    assert np.allclose(b, 2 * q * J + 2 * 0.7 * M.benjamin_feir_damping((u1, u2)), atol=1e-14)


@settings(max_examples=200)
@given(st.floats(0.1, 3), st.floats(0.1, 3), st.floats(-3, 3), st.floats(-3, 3),
       st.floats(-2, 2), st.floats(-2, 2))
def test_benjamin_feir_trace_conditions(al, ga, k, sg, u1, u2):
    s = M.build_benjamin_feir(M.BenjaminFeirParams(al, ga, k, sg, (u1, u2)))
    scale = 1 + np.linalg.norm(s.a) * np.linalg.norm(s.b)
    assert abs(np.trace(s.b)) <= 1e-12 * scale
    assert abs(np.trace(s.a @ s.b)) <= 1e-12 * scale
    ev = np.linalg.eigvalsh(M.benjamin_feir_damping((u1, u2)))
    assert np.allclose(ev, [-(u1 * u1 + u2 * u2), u1 * u1 + u2 * u2], atol=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.1, 2), st.floats(0.1, 2), st.floats(0.1, 2), st.floats(0.1, 2),
       st.floats(0, 1.5), st.floats(0, 2 * math.pi))
def test_benjamin_feir_rotational_invariance(al, ga, k, sg, r, th):
    v1 = classify(M.build_benjamin_feir(M.BenjaminFeirParams(al, ga, k, sg, (r, 0))))
    v2 = classify(M.build_benjamin_feir(M.BenjaminFeirParams(al, ga, k, sg,
                                                              (r * math.cos(th), r * math.sin(th)))))
    c1 = characteristic_poly(M.build_benjamin_feir(M.BenjaminFeirParams(al, ga, k, sg, (r, 0))))
    c2 = characteristic_poly(M.build_benjamin_feir(
        M.BenjaminFeirParams(al, ga, k, sg, (r * math.cos(th), r * math.sin(th)))))
    assert np.allclose(c1.coefficients, c2.coefficients, rtol=1e-10, atol=1e-10)
    if not (v1.borderline or v2.borderline):
        assert abs(v1.max_real_part - v2.max_real_part) <= 1e-6 * (1 + abs(v1.max_real_part))


def test_corotating_transform_examples():
    assert np.array_equal(M.corotating_transform([1.0, 2.0], 0.0), [1.0, 2.0])
    assert np.allclose(M.corotating_transform([1.0, 0.0], math.pi / 2), [0.0, -1.0], atol=1e-16)


@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(-10, 10))
def test_corotating_round_trip(x, y, th):
    z = M.corotating_inverse(M.corotating_transform([x, y], th), th)
    assert np.allclose(z, [x, y], rtol=0, atol=1e-14 * (1 + abs(x) + abs(y)))


@given(st.lists(st.floats(-5, 5), min_size=4, max_size=4), st.floats(-10, 10), st.floats(-2, 2))
def test_state_round_trip_includes_rate_term(s, th, rate):
    s = np.array(s)
    rot = M.lab_to_corotating_state(s, th, rate)
    assert np.allclose(M.corotating_to_lab_state(rot, th, rate), s, rtol=0, atol=1e-12)
    # velocity of v = R(-th) x picks up -rate R(-th) J x
    expect = M.corotating_transform(s[2:], th) - rate * M.corotating_transform(J @ s[:2], th)
    assert np.allclose(rot[2:], expect, atol=1e-12)
