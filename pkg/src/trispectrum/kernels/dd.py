"""Double-double arithmetic primitives.

Each value is an unevaluated sum ``hi + lo`` with ``|lo| <= ulp(hi)/2``,
giving roughly 106 bits of mantissa.  The functions are written so they run
unchanged on Python floats, on numpy arrays (elementwise) and inside numba
kernels, which keeps both backends bit-for-bit identical.
"""

from __future__ import annotations

try:  # pragma: no cover - exercised implicitly by the backend choice
    from numba.extending import register_jitable as _jitable
except ImportError:  # pragma: no cover
    def _jitable(fn):
        return fn

SPLITTER = 134217729.0  # 2**27 + 1


@_jitable
def two_sum(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


@_jitable
def quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


@_jitable
def split(a):
    t = SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


@_jitable
def two_prod(a, b):
    p = a * b
    ah, al = split(a)
    bh, bl = split(b)
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


@_jitable
def dd_add(ah, al, bh, bl):
    s, e = two_sum(ah, bh)
    t, f = two_sum(al, bl)
    e = e + t
    s, e = quick_two_sum(s, e)
    e = e + f
    return quick_two_sum(s, e)


@_jitable
def dd_sub(ah, al, bh, bl):
    return dd_add(ah, al, -bh, -bl)


@_jitable
def dd_mul(ah, al, bh, bl):
    p, e = two_prod(ah, bh)
    e = e + (ah * bl + al * bh)
    return quick_two_sum(p, e)


@_jitable
def dd_mul_add(ah, al, bh, bl, ch, cl, dh, dl):
    """``a*b + c*d`` in double-double."""
    xh, xl = dd_mul(ah, al, bh, bl)
    yh, yl = dd_mul(ch, cl, dh, dl)
    return dd_add(xh, xl, yh, yl)
