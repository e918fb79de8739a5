"""Vectorised numpy kernels over batches of double-double 2x2 matrices.

A batch is a pair of ``(N, 4)`` float64 arrays ``hi``/``lo`` holding the
entries ``a, b, c, d`` of each matrix in row-major order.
"""

from __future__ import annotations

import numpy as np

from .dd import dd_add, dd_mul_add, dd_sub, two_prod

name = "numpy"


def matmul(ahi, alo, bhi, blo):
    """Rowwise products ``A[n] @ B[n]`` (either side may broadcast)."""
    a0, a1, a2, a3 = (ahi[..., i] for i in range(4))
    l0, l1, l2, l3 = (alo[..., i] for i in range(4))
    b0, b1, b2, b3 = (bhi[..., i] for i in range(4))
    m0, m1, m2, m3 = (blo[..., i] for i in range(4))
    c00 = dd_mul_add(a0, l0, b0, m0, a1, l1, b2, m2)
    c01 = dd_mul_add(a0, l0, b1, m1, a1, l1, b3, m3)
    c10 = dd_mul_add(a2, l2, b0, m0, a3, l3, b2, m2)
    c11 = dd_mul_add(a2, l2, b1, m1, a3, l3, b3, m3)
    hi = np.stack([c00[0], c01[0], c10[0], c11[0]], axis=-1)
    lo = np.stack([c00[1], c01[1], c10[1], c11[1]], axis=-1)
    return hi, lo


def normalize_sign(hi, lo, sign_tol):
    """Flip rows so the first entry above ``sign_tol`` in magnitude is positive."""
    mask = np.abs(hi) > sign_tol
    idx = np.argmax(mask, axis=1)
    lead = hi[np.arange(hi.shape[0]), idx]
    s = np.where(lead < 0.0, -1.0, 1.0)[:, None]
    return hi * s, lo * s


def expand(hi, lo, ghi, glo, sign_tol):
    """All products ``F[n] @ G[g]``, flattened n-major to ``(N*G, 4)``."""
    n, g = hi.shape[0], ghi.shape[0]
    phi, plo = matmul(hi[:, None, :], lo[:, None, :], ghi[None, :, :], glo[None, :, :])
    return normalize_sign(phi.reshape(n * g, 4), plo.reshape(n * g, 4), sign_tol)


def quantize(hi, lo, scale, band):
    """Round ``(hi + lo) * scale`` to integers.

    Returns ``(keys, flags, overflow)``; ``flags`` marks entries whose
    residual lies within ``band`` of a rounding boundary and ``overflow`` rows
    whose keys would not fit in int64.
    """
    ph, pl = two_prod(hi, scale)
    pl = pl + lo * scale
    k = np.rint(ph)
    r = (ph - k) + pl
    adj = np.rint(r)
    k = k + adj
    r = r - adj
    flags = np.abs(r) > 0.5 - band
    overflow = np.any(np.abs(ph) >= 2.0**62, axis=1)
    keys = np.where(np.abs(k) < 2.0**62, k, 0.0).astype(np.int64)
    return keys, flags, overflow


def abs_trace(hi, lo):
    th, tl = dd_add(hi[:, 0], lo[:, 0], hi[:, 3], lo[:, 3])
    return np.abs(th + tl)


def _half_chord(hi, lo):
    # For unit determinant: (a-d)^2 + (b+c)^2 = 4 sinh^2(d(i, M i) / 2).
    uh, ul = dd_sub(hi[:, 0], lo[:, 0], hi[:, 3], lo[:, 3])
    vh, vl = dd_add(hi[:, 1], lo[:, 1], hi[:, 2], lo[:, 2])
    u = uh + ul
    v = vh + vl
    return 0.5 * np.hypot(u, v)


def base_distance(hi, lo):
    """Hyperbolic distance from ``i`` to ``M i`` for each row."""
    return 2.0 * np.arcsinh(_half_chord(hi, lo))


def pair_distance(ghi, glo, hhi, hlo):
    """Hyperbolic distance between ``G[n] i`` and ``H[n] i``."""
    inv_hi = np.stack([hhi[..., 3], -hhi[..., 1], -hhi[..., 2], hhi[..., 0]], axis=-1)
    inv_lo = np.stack([hlo[..., 3], -hlo[..., 1], -hlo[..., 2], hlo[..., 0]], axis=-1)
    mhi, mlo = matmul(inv_hi, inv_lo, ghi, glo)
    mhi = np.atleast_2d(mhi)
    mlo = np.atleast_2d(mlo)
    return base_distance(mhi, mlo)
