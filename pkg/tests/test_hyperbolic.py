import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trispectrum import (
    DomainError,
    HPoint,
    Isometry,
    IsometryClass,
    apply,
    canonical_key,
    classify,
    hyp_distance,
    rotation_about,
    translation_length,
)
from trispectrum.hyperbolic import I, axis_distance

coords = st.floats(-5, 5, allow_nan=False)
heights = st.floats(0.05, 20, allow_nan=False)


def test_distance_examples():
    assert hyp_distance(I, I) == 0.0
    assert hyp_distance(I, HPoint(0, 2)) == pytest.approx(math.log(2), abs=1e-15)
    assert hyp_distance(I, HPoint(1, 1)) == pytest.approx(math.acosh(1.5), abs=1e-15)


def test_boundary_point_rejected():
    with pytest.raises(DomainError):
        HPoint(0.0, 0.0)
    with pytest.raises(DomainError):
        HPoint(1.0, -1.0)


@settings(max_examples=200, deadline=None)
@given(coords, heights, coords, heights)
def test_distance_symmetric_and_nonnegative(a, b, c, d):
    x, y = HPoint(a, b), HPoint(c, d)
    assert hyp_distance(x, y) >= 0.0
    assert hyp_distance(x, y) == pytest.approx(hyp_distance(y, x), rel=1e-12, abs=1e-15)


def test_apply_examples():
    assert apply(Isometry.identity(), I) == I
    w = apply(Isometry.from_matrix([[1, 1], [0, 1]]), I)
    assert (w.re, w.im) == pytest.approx((1.0, 1.0))


def test_orientation_reversing_conjugates_first():
    refl = Isometry.from_matrix([[-1, 0], [0, 1]])  # z -> -conj(z)
    w = apply(refl, HPoint(2.0, 3.0))
    assert (w.re, w.im) == pytest.approx((-2.0, 3.0))
    assert classify(refl) is IsometryClass.REVERSING


def test_point_on_axis_moves_by_translation_length():
    m = Isometry.from_matrix([[2.0, 0.0], [0.0, 0.5]])
    x = HPoint(0.0, 3.7)
    assert hyp_distance(x, apply(m, x)) == pytest.approx(translation_length(m), abs=1e-14)
    # acosh near 1 only resolves to about sqrt(eps)
    assert axis_distance(m, x) == pytest.approx(0.0, abs=1e-7)


@pytest.mark.parametrize(
    "matrix, kind",
    [
        ([[1, 0], [0, 1]], IsometryClass.IDENTITY),
        ([[2, 1], [1, 1]], IsometryClass.HYPERBOLIC),
        ([[1, 1], [0, 1]], IsometryClass.PARABOLIC),
    ],
)
def test_classify(matrix, kind):
    assert classify(Isometry.from_matrix(matrix)) is kind


def test_rotation_is_elliptic():
    assert classify(rotation_about(I, 2 * math.pi / 7)) is IsometryClass.ELLIPTIC


def test_translation_length_examples():
    e = math.e
    assert translation_length(Isometry.from_matrix([[e, 0], [0, 1 / e]])) == pytest.approx(2.0, abs=1e-14)
    assert translation_length(Isometry.from_matrix([[2, 0], [0, 0.5]])) == pytest.approx(2 * math.log(2), abs=1e-14)
    with pytest.raises(DomainError):
        translation_length(rotation_about(I, 1.0))


def test_rotation_examples():
    assert rotation_about(I, 0.0).projective_residual(Isometry.identity()) < 1e-15
    half = rotation_about(I, math.pi)
    assert half.projective_residual(Isometry.from_matrix([[0, 1], [-1, 0]])) < 1e-15
    fifth = rotation_about(I, 2 * math.pi / 5)
    assert (fifth ** 5).projective_residual(Isometry.identity()) < 1e-14


def test_rotation_turns_counterclockwise():
    # a quarter turn about i sends the upward tangent to the left
    w = apply(rotation_about(I, math.pi / 2), HPoint(0.0, 2.0))
    assert w.re < 0.0


def test_canonical_key_examples():
    assert canonical_key(Isometry.identity()) == (10**9, 0, 0, 10**9)
    m = Isometry.from_matrix([[2, 1], [1, 1]])
    neg = Isometry.from_matrix(-m.matrix)
    assert canonical_key(m) == canonical_key(neg)


def test_canonical_key_absorbs_tiny_perturbation():
    # entries picked away from cell edges
    m = Isometry(1.2, 0.3, 0.1, 0.8583333332)
    eps = 1e-9 / 8
    nudged = Isometry(m.a + eps, m.b - eps, m.c + eps, m.d)
    assert canonical_key(m) == canonical_key(nudged)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.1, 3.0), st.floats(-2, 2), st.floats(0.2, 5))
def test_isometry_preserves_distance(t, a, b):
    m = Isometry.from_matrix(np.array([[math.cosh(t), math.sinh(t)], [math.sinh(t), math.cosh(t)]]))
    x, y = HPoint(a, b), I
    assert hyp_distance(apply(m, x), apply(m, y)) == pytest.approx(hyp_distance(x, y), rel=1e-9, abs=1e-12)
