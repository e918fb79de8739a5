"""numba kernels mirroring :mod:`numpy_impl` entry for entry."""

from __future__ import annotations

import math

import numpy as np
from numba import config, njit, prange

from .dd import dd_add, dd_mul_add, dd_sub, two_prod

name = "numba"

# the bundled TBB is too old for numba and only produces a warning
if config.THREADING_LAYER == "default":
    config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]


@njit(cache=True, inline="always")
def _mul_into(a, al, b, bl, out_hi, out_lo, row):
    h, l = dd_mul_add(a[0], al[0], b[0], bl[0], a[1], al[1], b[2], bl[2])
    out_hi[row, 0] = h
    out_lo[row, 0] = l
    h, l = dd_mul_add(a[0], al[0], b[1], bl[1], a[1], al[1], b[3], bl[3])
    out_hi[row, 1] = h
    out_lo[row, 1] = l
    h, l = dd_mul_add(a[2], al[2], b[0], bl[0], a[3], al[3], b[2], bl[2])
    out_hi[row, 2] = h
    out_lo[row, 2] = l
    h, l = dd_mul_add(a[2], al[2], b[1], bl[1], a[3], al[3], b[3], bl[3])
    out_hi[row, 3] = h
    out_lo[row, 3] = l


@njit(cache=True, inline="always")
def _flip_row(hi, lo, row, sign_tol):
    for j in range(4):
        x = hi[row, j]
        if abs(x) > sign_tol:
            if x < 0.0:
                for k in range(4):
                    hi[row, k] = -hi[row, k]
                    lo[row, k] = -lo[row, k]
            return


@njit(cache=True, parallel=True)
def _matmul(ahi, alo, bhi, blo):
    n = max(ahi.shape[0], bhi.shape[0])
    sa = 0 if ahi.shape[0] == 1 else 1
    sb = 0 if bhi.shape[0] == 1 else 1
    out_hi = np.empty((n, 4))
    out_lo = np.empty((n, 4))
    for r in prange(n):
        _mul_into(ahi[r * sa], alo[r * sa], bhi[r * sb], blo[r * sb], out_hi, out_lo, r)
    return out_hi, out_lo


def matmul(ahi, alo, bhi, blo):
    return _matmul(np.atleast_2d(ahi), np.atleast_2d(alo), np.atleast_2d(bhi), np.atleast_2d(blo))


@njit(cache=True, parallel=True)
def _normalize_sign(hi, lo, sign_tol):
    hi = hi.copy()
    lo = lo.copy()
    for r in prange(hi.shape[0]):
        _flip_row(hi, lo, r, sign_tol)
    return hi, lo


def normalize_sign(hi, lo, sign_tol):
    return _normalize_sign(hi, lo, sign_tol)


@njit(cache=True, parallel=True)
def expand(hi, lo, ghi, glo, sign_tol):
    n = hi.shape[0]
    g = ghi.shape[0]
    out_hi = np.empty((n * g, 4))
    out_lo = np.empty((n * g, 4))
    for r in prange(n):
        for j in range(g):
            row = r * g + j
            _mul_into(hi[r], lo[r], ghi[j], glo[j], out_hi, out_lo, row)
            _flip_row(out_hi, out_lo, row, sign_tol)
    return out_hi, out_lo


@njit(cache=True, parallel=True)
def quantize(hi, lo, scale, band):
    n = hi.shape[0]
    keys = np.empty((n, 4), dtype=np.int64)
    flags = np.empty((n, 4), dtype=np.bool_)
    overflow = np.zeros(n, dtype=np.bool_)
    lim = 2.0**62
    for r in prange(n):
        for j in range(4):
            ph, pl = two_prod(hi[r, j], scale)
            pl = pl + lo[r, j] * scale
            k = np.rint(ph)
            res = (ph - k) + pl
            adj = np.rint(res)
            k = k + adj
            res = res - adj
            flags[r, j] = abs(res) > 0.5 - band
            if abs(ph) >= lim:
                overflow[r] = True
            keys[r, j] = np.int64(k) if abs(k) < lim else 0
    return keys, flags, overflow


@njit(cache=True, parallel=True)
def abs_trace(hi, lo):
    n = hi.shape[0]
    out = np.empty(n)
    for r in prange(n):
        th, tl = dd_add(hi[r, 0], lo[r, 0], hi[r, 3], lo[r, 3])
        out[r] = abs(th + tl)
    return out


@njit(cache=True, parallel=True)
def base_distance(hi, lo):
    n = hi.shape[0]
    out = np.empty(n)
    for r in prange(n):
        uh, ul = dd_sub(hi[r, 0], lo[r, 0], hi[r, 3], lo[r, 3])
        vh, vl = dd_add(hi[r, 1], lo[r, 1], hi[r, 2], lo[r, 2])
        out[r] = 2.0 * math.asinh(0.5 * math.hypot(uh + ul, vh + vl))
    return out


@njit(cache=True, parallel=True)
def _pair_distance(ghi, glo, hhi, hlo):
    n = max(ghi.shape[0], hhi.shape[0])
    sg = 0 if ghi.shape[0] == 1 else 1
    sh = 0 if hhi.shape[0] == 1 else 1
    out = np.empty(n)
    inv = np.empty((n, 4))
    invl = np.empty((n, 4))
    mh = np.empty((n, 4))
    ml = np.empty((n, 4))
    for r in prange(n):
        h = hhi[r * sh]
        l = hlo[r * sh]
        inv[r, 0] = h[3]
        inv[r, 1] = -h[1]
        inv[r, 2] = -h[2]
        inv[r, 3] = h[0]
        invl[r, 0] = l[3]
        invl[r, 1] = -l[1]
        invl[r, 2] = -l[2]
        invl[r, 3] = l[0]
        _mul_into(inv[r], invl[r], ghi[r * sg], glo[r * sg], mh, ml, r)
        uh, ul = dd_sub(mh[r, 0], ml[r, 0], mh[r, 3], ml[r, 3])
        vh, vl = dd_add(mh[r, 1], ml[r, 1], mh[r, 2], ml[r, 2])
        out[r] = 2.0 * math.asinh(0.5 * math.hypot(uh + ul, vh + vl))
    return out


def pair_distance(ghi, glo, hhi, hlo):
    return _pair_distance(np.atleast_2d(ghi), np.atleast_2d(glo), np.atleast_2d(hhi), np.atleast_2d(hlo))
