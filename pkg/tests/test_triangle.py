import math

import numpy as np
import pytest

from trispectrum import (
    NonHyperbolicError,
    OrderingError,
    ParameterError,
    apply,
    build_generators,
    evaluate_word,
    hyp_distance,
    validate_params,
)
from trispectrum.errors import DomainError
from trispectrum.hyperbolic import Isometry
from trispectrum.triangle import ALPHABET, dd_words, format_word, parse_word

GROUPS = [(3, 7), (4, 5), (5, 5), (3, 10), (6, 7), (11, 12), (7, 40)]


def test_validate_example():
    g = validate_params(3, 7)
    assert g.cosh_c == pytest.approx(0.5 / math.sin(math.pi / 7), rel=1e-15)
    assert g.cosh_c == pytest.approx(1.152382, abs=1e-6)


@pytest.mark.parametrize(
    "p, q, exc",
    [(3, 6, NonHyperbolicError), (4, 4, NonHyperbolicError), (7, 3, OrderingError), (1, 9, ParameterError), (3.0, 7, ParameterError)],
)
def test_validate_rejects(p, q, exc):
    with pytest.raises(exc):
        validate_params(p, q)


def test_cosh_2c_is_double_angle():
    for p, q in GROUPS:
        g = validate_params(p, q)
        assert g.cosh_2c == pytest.approx(2 * g.cosh_c**2 - 1, rel=1e-13)


@pytest.mark.parametrize("p, q", GROUPS)
def test_generator_relations(p, q):
    gens = build_generators((p, q))
    assert gens.relation_residual < 1e-30
    r2, rp, rq = gens.r2, gens.rp, gens.rq
    ident = Isometry.identity()
    assert (r2 @ r2).projective_residual(ident) < 1e-13
    assert (rp**p).projective_residual(ident) < 1e-12
    assert (rq**q).projective_residual(ident) < 1e-12
    assert (rq @ rp @ r2).projective_residual(ident) < 1e-13


@pytest.mark.parametrize("p, q", GROUPS)
def test_rotation_centres_and_triangle_sides(p, q):
    gens = build_generators((p, q))
    g = gens.params
    for m, z in ((gens.rq, gens.base_vertex), (gens.r2, gens.order2_vertex), (gens.rp, gens.orderp_vertex)):
        assert hyp_distance(apply(m, z), z) < 1e-12
    assert gens.order2_vertex.re == 0.0
    assert hyp_distance(gens.base_vertex, gens.order2_vertex) == pytest.approx(g.c, rel=1e-13)
    assert math.cosh(hyp_distance(gens.base_vertex, gens.orderp_vertex)) == pytest.approx(g.cosh_circumradius, rel=1e-12)
    assert math.cosh(hyp_distance(gens.order2_vertex, gens.orderp_vertex)) == pytest.approx(g.cosh_b, rel=1e-12)


def test_generators_are_rotations_of_the_right_angle():
    gens = build_generators((4, 9))
    for m, n in ((gens.r2, 2), (gens.rp, 4), (gens.rq, 9)):
        assert abs(m.trace) == pytest.approx(2 * math.cos(math.pi / n), abs=1e-14)


def test_word_round_trip():
    word = parse_word("rq·r2 * rp^-1 rq^-1")
    assert word == ("rq", "r2", "rp^-1", "rq^-1")
    assert parse_word(format_word(word)) == word
    assert format_word(()) == "1"
    with pytest.raises(DomainError):
        parse_word("rx")


def test_inverse_letters():
    for a, b in (("rp", "rp^-1"), ("rq", "rq^-1"), ("r2", "r2")):
        assert evaluate_word((3, 7), (a, b)).projective_residual(Isometry.identity()) < 1e-15


def test_dd_words_agree_with_float_evaluation():
    words = [(), ("rq", "r2"), ("r2", "rq", "r2", "rq^-1", "rp"), tuple(ALPHABET)]
    hi, lo = dd_words((3, 8), words)
    assert np.all(np.abs(lo) <= np.abs(hi) * 2**-52 + 1e-300)
    for row, w in enumerate(words):
        m = evaluate_word((3, 8), w)
        assert Isometry.from_matrix(hi[row].reshape(2, 2)).projective_residual(m) < 1e-15


def test_dd_conjugation():
    n = Isometry.from_matrix([[2.0, 1.0], [0.0, 0.5]])
    hi, _ = dd_words((3, 7), [("rq",)], conjugator=n)
    expect = n @ evaluate_word((3, 7), ("rq",)) @ n.inverse()
    assert Isometry.from_matrix(hi[0].reshape(2, 2)).projective_residual(expect) < 1e-14
