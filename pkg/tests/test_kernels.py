import os
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trispectrum.kernels import BACKEND_NAME, get_backend, numba_available
from trispectrum.kernels.dd import dd_add, dd_mul, two_prod, two_sum
from trispectrum.oracle import enumerate_elements

NP = get_backend("numpy")
needs_numba = pytest.mark.skipif(not numba_available(), reason="numba not installed")


@pytest.fixture(scope="module")
def batch():
    es = enumerate_elements((4, 7), 7)
    gens = enumerate_elements((4, 7), 1)
    return es.hi, es.lo, gens.hi[1:], gens.lo[1:]


# error-free transforms need the product to stay out of the subnormal range
finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False).filter(lambda x: x == 0 or abs(x) > 1e-100)


@settings(max_examples=300, deadline=None)
@given(finite, finite)
def test_two_sum_exact(a, b):
    s, e = two_sum(a, b)
    assert Fraction(s) + Fraction(e) == Fraction(a) + Fraction(b)


@settings(max_examples=300, deadline=None)
@given(finite, finite)
def test_two_prod_exact(a, b):
    p, e = two_prod(a, b)
    assert Fraction(p) + Fraction(e) == Fraction(a) * Fraction(b)


def test_dd_arithmetic_beats_double():
    third_h = 1.0 / 3.0
    third_l = float(Fraction(1, 3) - Fraction(third_h))
    h, l = dd_mul(third_h, third_l, 3.0, 0.0)
    assert abs(Fraction(h) + Fraction(l) - 1) < Fraction(1, 10**30)
    h, l = dd_add(1.0, 1e-20, -1.0, 0.0)
    assert h == pytest.approx(1e-20, rel=1e-15)


def test_env_flag_selects_numpy():
    env = dict(os.environ, TRISPECTRUM_DISABLE_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c", "from trispectrum.kernels import BACKEND_NAME; print(BACKEND_NAME)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "numpy"


def test_default_backend():
    expected = "numba" if numba_available() and not os.environ.get("TRISPECTRUM_DISABLE_NUMBA") else "numpy"
    assert BACKEND_NAME == expected


def test_unknown_backend():
    with pytest.raises(ValueError):
        get_backend("cuda")


@needs_numba
def test_parity_expand_quantize_trace(batch):
    NB = get_backend("numba")
    hi, lo, ghi, glo = batch
    a = NP.expand(hi, lo, ghi, glo, 1e-12)
    b = NB.expand(hi, lo, ghi, glo, 1e-12)
    np.testing.assert_array_equal(a[0], b[0])
    np.testing.assert_array_equal(a[1], b[1])
    ka = NP.quantize(a[0], a[1], 1e9, 1e-6)
    kb = NB.quantize(b[0], b[1], 1e9, 1e-6)
    for x, y in zip(ka, kb):
        np.testing.assert_array_equal(x, y)
    np.testing.assert_array_equal(NP.abs_trace(hi, lo), NB.abs_trace(hi, lo))


@needs_numba
def test_parity_matmul(batch):
    NB = get_backend("numba")
    hi, lo, _, _ = batch
    a = NP.matmul(hi, lo, hi[::-1], lo[::-1])
    b = NB.matmul(np.ascontiguousarray(hi), np.ascontiguousarray(lo),
                  np.ascontiguousarray(hi[::-1]), np.ascontiguousarray(lo[::-1]))
    np.testing.assert_array_equal(a[0], b[0])
    np.testing.assert_array_equal(a[1], b[1])


@needs_numba
def test_parity_distances(batch):
    NB = get_backend("numba")
    hi, lo, _, _ = batch
    np.testing.assert_allclose(NP.base_distance(hi, lo), NB.base_distance(hi, lo), rtol=1e-15, atol=1e-15)
    h2, l2 = np.ascontiguousarray(hi[::-1]), np.ascontiguousarray(lo[::-1])
    np.testing.assert_allclose(NP.pair_distance(hi, lo, h2, l2), NB.pair_distance(hi, lo, h2, l2), rtol=1e-14, atol=1e-14)


def test_expand_is_n_major(batch):
    hi, lo, ghi, glo = batch
    out, _ = NP.expand(hi[:3], lo[:3], ghi, glo, 1e-12)
    assert out.shape == (3 * len(ghi), 4)
    first = NP.normalize_sign(*NP.matmul(hi[1:2], lo[1:2], ghi[:1], glo[:1]), 1e-12)[0]
    np.testing.assert_array_equal(out[len(ghi)], first[0])


def test_quantize_flags_band():
    hi = np.array([[0.4999999999, 1.0, 2.0, 3.0]])
    keys, flags, overflow = NP.quantize(hi, np.zeros_like(hi), 1.0, 1e-6)
    assert flags[0, 0] and not flags[0, 1]
    assert not overflow[0]
    _, _, overflow = NP.quantize(np.array([[1e60, 0, 0, 1e-60]]), np.zeros((1, 4)), 1e9, 1e-6)
    assert overflow[0]


def test_oracle_identical_across_backends():
    env = dict(os.environ, TRISPECTRUM_DISABLE_NUMBA="1")
    code = "from trispectrum import oracle_spectrum; print(oracle_spectrum((5, 6), 10).to_json())"
    slow = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True).stdout
    from trispectrum import oracle_spectrum

    assert slow.strip() == oracle_spectrum((5, 6), 10).to_json().strip()
