import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trispectrum import DomainError, d1, d2, l1, l2, merged_low_levels, spectrum_begin, systole, validate_params
from trispectrum.closed_form import format_label, parse_label

cos, sin, pi = math.cos, math.sin, math.pi


@st.composite
def groups(draw, q_max=40):
    p = draw(st.integers(3, q_max))
    q = draw(st.integers(p, q_max))
    if 2 * (p + q) >= p * q:
        q = max(q, 7 if p == 3 else 5 if p == 4 else p)
        if 2 * (p + q) >= p * q:
            q += 1
    return validate_params(p, q)


def test_labels():
    assert format_label(2, (1, 6), 7) == "l2(1,q-1)"
    assert format_label(1, (2,), 7) == "l1(2)"
    assert parse_label("l2(1,q-1)", 9) == (2, (1, 8))
    assert parse_label("l2(3,2)", 9) == (2, (3, 2))


def test_d1_examples():
    # D1(1) reduces to cos(pi/p)
    assert d1((4, 5), 1) == pytest.approx(cos(pi / 4), abs=1e-15)
    assert d1((4, 6), 2) == pytest.approx(2 * cos(pi / 4) * cos(pi / 6), abs=1e-15)
    assert d1((3, 8), 4) == pytest.approx(0.5 / sin(pi / 8), abs=1e-15)
    assert d1((3, 8), 4) == pytest.approx(1.306563, abs=1e-6)


@pytest.mark.parametrize("k", [0, 7, 2.0, True])
def test_index_out_of_range(k):
    with pytest.raises(DomainError):
        d1((3, 7), k)


def test_l1_examples():
    assert l1((3, 7), 2) is None
    lv = l1((4, 6), 2)
    assert lv.value == pytest.approx(2 * math.acosh(math.sqrt(1.5)), abs=1e-14)
    assert lv.value == pytest.approx(1.316958, abs=1e-6)
    assert l1((5, 5), 2).value == pytest.approx(2 * math.acosh(2 * cos(pi / 5) ** 2), abs=1e-14)


def test_d2_examples():
    assert d2((3, 8), 1, 7) == pytest.approx(2 * cos(pi / 8) ** 2 - 0.5, abs=1e-14)
    assert d2((5, 6), 1, 2) == pytest.approx(cos(pi / 6) * (4 * cos(pi / 5) ** 2 - 1), abs=1e-14)
    assert d2((5, 6), 1, 2) == pytest.approx(1.401259, abs=1e-6)
    assert d2((3, 8), 7, 2) == pytest.approx(d2((3, 8), 1, 6), abs=1e-14)
    assert d2((3, 8), 7, 2) == pytest.approx(1.306563, abs=1e-6)


def test_l2_examples():
    assert l2((4, 7), 1, 1) is None
    x, y = cos(pi / 4), cos(pi / 8)
    assert l2((4, 8), 1, 7).value == pytest.approx(2 * math.acosh(2 * x * x + 2 * y * y - 1), abs=1e-14)
    assert l2((3, 7), 1, 6).value == pytest.approx(0.983987, abs=1e-6)


def test_length_value_rejects_elliptic_trace():
    from trispectrum import LengthValue

    with pytest.raises(DomainError):
        LengthValue("l1(1)", 0.0, 0.9, (1,))


def test_systole_examples():
    assert systole((3, 7)).value == pytest.approx(2 * math.acosh(2 * cos(pi / 7) ** 2 - 0.5), abs=1e-15)
    assert systole((3, 7)).label == "l2(1,q-1)"
    assert systole((4, 5)).value == pytest.approx(2 * math.acosh(2 * cos(pi / 4) * cos(pi / 5)), abs=1e-15)
    assert systole((4, 5)).value == pytest.approx(1.061275, abs=1e-6)
    assert systole((5, 5)).value == pytest.approx(systole((3, 10)).value, abs=1e-12)


@pytest.mark.parametrize(
    "pq, labels",
    [
        ((3, 7), ["l2(1,q-1)"]),
        ((3, 8), ["l2(1,q-1)", "l1(4)"]),
        ((3, 25), ["l2(1,q-1)", "l1(4)"]),
        ((4, 5), ["l1(2)", "l2(1,q-1)"]),
        ((4, 6), ["l1(2)", "l1(3)", "l2(1,q-1)"]),
        ((4, 7), ["l1(2)", "l1(3)", "l2(1,q-1)"]),
        ((4, 12), ["l1(2)", "l2(1,q-1)"]),
        ((5, 5), ["l1(2)", "l2(1,q-1)"]),
        ((5, 9), ["l1(2)"]),
        ((6, 6), ["l1(2)"]),
        ((10, 30), ["l1(2)"]),
        ((11, 11), ["l1(2)", "l2(1,2)"]),
        ((20, 21), ["l1(2)", "l2(1,2)"]),
    ],
)
def test_spectrum_rows(pq, labels):
    prefix = spectrum_begin(pq)
    assert [e.label for e in prefix.entries] == labels
    assert prefix.cutoff == prefix.entries[-1].value
    assert all(a < b for a, b in zip(prefix.values, prefix.values[1:]))


def test_p5_folds_coincident_labels():
    prefix = spectrum_begin((5, 9))
    assert prefix.entries[0].aliases == ("l2(1,2)",)
    assert prefix.cutoff_label == "l2(1,2)"


def test_spectrum_37_example():
    prefix = spectrum_begin((3, 7))
    assert prefix.to_dict()["entries"][0]["indices"] == [1, 6]
    assert prefix.cutoff == pytest.approx(0.9839865622075833, abs=1e-15)


def test_merge_examples():
    m = merged_low_levels((3, 8), spectrum_begin((3, 8)).cutoff)
    assert len(m) == 2
    assert "l2(1,q-1)" in m[0].labels and m[1].label == "l1(4)"
    assert m[0].value < m[1].value
    m = merged_low_levels((4, 12), spectrum_begin((4, 12)).cutoff)
    assert len(m) == 2 and m[0].label == "l1(2)" and "l2(1,q-1)" in m[1].labels
    first = merged_low_levels((5, 5), spectrum_begin((5, 5)).cutoff)[0]
    assert first.label == "l1(2)" and "l1(3)" in first.aliases


def _grid():
    for q in range(5, 41):
        for p in range(3, q + 1):
            if 2 * (p + q) < p * q:
                yield p, q


@pytest.mark.parametrize("pq", list(_grid()), ids=str)
def test_certified_row_equals_exhaustive_merge(pq):
    prefix = spectrum_begin(pq)
    merged = merged_low_levels(pq, prefix.cutoff)
    assert [m.value for m in merged] == pytest.approx(prefix.values, abs=1e-12)
    assert systole(pq).value == pytest.approx(prefix.values[0], abs=1e-14)


@settings(max_examples=300, deadline=None)
@given(groups(), st.data())
def test_d2_reflection(g, data):
    k = data.draw(st.integers(1, g.q - 1))
    assert d2(g, g.q - 1, k) == pytest.approx(d2(g, 1, g.q - k), abs=1e-12)
    assert d2(g, k, 1) == pytest.approx(d2(g, 1, k), abs=1e-15)


@settings(max_examples=200, deadline=None)
@given(groups())
def test_d1_unimodal(g):
    vals = [d1(g, k) for k in range(1, g.q // 2 + 1)]
    assert all(a <= b + 1e-15 for a, b in zip(vals, vals[1:]))


@settings(max_examples=200, deadline=None)
@given(groups())
def test_systole_is_the_minimum_of_levels_one_and_two(g):
    vals = [lv.value for k in range(1, g.q) if (lv := l1(g, k)) is not None]
    vals += [lv.value for k in range(1, g.q) for k2 in range(1, g.q) if (lv := l2(g, k, k2)) is not None]
    assert min(vals) == pytest.approx(systole(g).value, abs=1e-12)
