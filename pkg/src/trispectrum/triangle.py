"""Parameters and generators of the rotation triangle group Γ(2, p, q).

The triangle with angles π/2, π/p, π/q is placed with its order-q vertex at
``i``, its right-angle vertex above it on the imaginary axis and its order-p
vertex in the right half-plane.  The group is generated by the
counterclockwise rotations ``r2``, ``rp``, ``rq`` through twice the angle at
each vertex.  Matrices are first built with mpmath at 40 significant digits
so that the double-double enumeration kernels start from generators whose
relations hold far below double precision.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import mpmath
import numpy as np

from .config import DEFAULT, Tolerances
from .errors import ConstructionError, DomainError, NonHyperbolicError, OrderingError, ParameterError
from .hyperbolic import HPoint, Isometry

__all__ = [
    "GroupParams",
    "GeneratorTriple",
    "validate_params",
    "build_generators",
    "ALPHABET",
    "parse_word",
    "format_word",
    "evaluate_word",
    "dd_words",
]

_DPS = 40


@dataclass(frozen=True)
class GroupParams:
    p: int
    q: int
    X: float
    Y: float
    cosh_c: float
    cosh_2c: float
    cosh_b: float

    @property
    def c(self) -> float:
        """Half the edge length of the valence-q tiling."""
        return math.acosh(self.cosh_c)

    @property
    def edge_length(self) -> float:
        return 2.0 * self.c

    @property
    def cosh_circumradius(self) -> float:
        """cosh of the distance from a p-gon centre to its vertices."""
        return 1.0 / (math.tan(math.pi / self.p) * math.tan(math.pi / self.q))

    def __str__(self) -> str:
        return f"Γ(2,{self.p},{self.q})"


def validate_params(p: int, q: int) -> GroupParams:
    for name, v in (("p", p), ("q", q)):
        if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
            raise ParameterError(f"{name} must be an integer, got {v!r}")
    p, q = int(p), int(q)
    if p < 2:
        raise ParameterError(f"p must be at least 2, got {p}")
    if p > q:
        raise OrderingError(f"need p <= q, got p={p} > q={q}")
    # 1/p + 1/q < 1/2 in exact integer arithmetic
    if 2 * (p + q) >= p * q:
        raise NonHyperbolicError(f"1/{p} + 1/{q} >= 1/2: the triangle is not hyperbolic")
    X, Y = math.cos(math.pi / p), math.cos(math.pi / q)
    s_q = math.sin(math.pi / q)
    cosh_c = X / s_q
    cosh_2c = (2.0 * X * X + Y * Y - 1.0) / (s_q * s_q)
    cosh_b = Y / math.sin(math.pi / p)
    return GroupParams(p, q, X, Y, cosh_c, cosh_2c, cosh_b)


def _as_params(params) -> GroupParams:
    if isinstance(params, GroupParams):
        return params
    p, q = params
    return validate_params(p, q)


# -- exact (mpmath) construction -------------------------------------------


def _mp_rotation(center, angle):
    c, s = mpmath.cos(angle / 2), mpmath.sin(angle / 2)
    x, y = mpmath.re(center), mpmath.im(center)
    r = mpmath.sqrt(y)
    t = mpmath.matrix([[r, x / r], [0, 1 / r]])
    t_inv = mpmath.matrix([[1 / r, -x / r], [0, r]])
    return t * mpmath.matrix([[c, s], [-s, c]]) * t_inv


def _mp_act(m, z):
    return (m[0, 0] * z + m[0, 1]) / (m[1, 0] * z + m[1, 1])


@functools.lru_cache(maxsize=64)
def _exact(p: int, q: int) -> dict:
    with mpmath.workdps(_DPS):
        pi = mpmath.pi
        c = mpmath.acosh(mpmath.cos(pi / p) / mpmath.sin(pi / q))
        hyp = mpmath.acosh(mpmath.cot(pi / p) * mpmath.cot(pi / q))
        base = mpmath.mpc(0, 1)
        order2 = mpmath.mpc(0, mpmath.e**c)
        # turn the upward direction at i clockwise by π/q to reach the
        # right half-plane, then walk the hypotenuse
        turn = _mp_rotation(base, -pi / q)
        orderp = _mp_act(turn, mpmath.mpc(0, mpmath.e**hyp))
        mats = {
            "r2": _mp_rotation(order2, pi),
            "rp": _mp_rotation(orderp, 2 * pi / p),
            "rq": _mp_rotation(base, 2 * pi / q),
        }
        mats["rp^-1"] = mats["rp"] ** -1
        mats["rq^-1"] = mats["rq"] ** -1
        return {"mats": mats, "order2": order2, "orderp": orderp}


def _mp_residual(m) -> float:
    with mpmath.workdps(_DPS):
        eye = mpmath.eye(2)
        plus = max(abs(x) for x in (m - eye))
        minus = max(abs(x) for x in (m + eye))
        return float(min(plus, minus))


def _to_isometry(m) -> Isometry:
    return Isometry.from_matrix([[float(m[0, 0]), float(m[0, 1])], [float(m[1, 0]), float(m[1, 1])]])


ALPHABET: tuple[str, ...] = ("r2", "rp", "rp^-1", "rq", "rq^-1")


def parse_word(text: str) -> tuple[str, ...]:
    """Parse ``"rq·r2·rp^-1"`` (``*`` or spaces also accepted)."""
    cleaned = text.replace("·", " ").replace("*", " ").split()
    for tok in cleaned:
        if tok not in ALPHABET:
            raise DomainError(f"unknown generator {tok!r}")
    return tuple(cleaned)


def format_word(word: Sequence[str]) -> str:
    return "·".join(word) if word else "1"


def _mp_word(p: int, q: int, word: Iterable[str]):
    mats = _exact(p, q)["mats"]
    with mpmath.workdps(_DPS):
        out = mpmath.eye(2)
        for tok in word:
            out = out * mats[tok]
        return out


def evaluate_word(params, word: Sequence[str]) -> Isometry:
    """Matrix product of the generators in ``word``, left to right."""
    params = _as_params(params)
    return _to_isometry(_mp_word(params.p, params.q, word))


def dd_words(params, words: Sequence[Sequence[str]], conjugator: Isometry | None = None):
    """Double-double ``(hi, lo)`` arrays of shape ``(len(words), 4)``.

    With ``conjugator`` N the matrices returned are ``N W N^-1`` (N itself is
    taken as exact).
    """
    params = _as_params(params)
    hi = np.empty((len(words), 4))
    lo = np.empty((len(words), 4))
    with mpmath.workdps(_DPS):
        conj = conj_inv = None
        if conjugator is not None:
            conj = mpmath.matrix(conjugator.matrix.tolist())
            conj_inv = conj**-1
        for row, word in enumerate(words):
            m = _mp_word(params.p, params.q, word)
            if conj is not None:
                m = conj * m * conj_inv
            flat = [m[0, 0], m[0, 1], m[1, 0], m[1, 1]]
            # projective sign: first significant entry positive
            lead = next(x for x in flat if abs(x) > DEFAULT.sign)
            if lead < 0:
                flat = [-x for x in flat]
            for j, x in enumerate(flat):
                h = float(x)
                hi[row, j] = h
                lo[row, j] = float(x - h)
    return hi, lo


@dataclass(frozen=True)
class GeneratorTriple:
    """Rotations of orders 2, p, q about the triangle's vertices.

    Read as maps applied in the order ``r2``, then ``rp``, then ``rq``, the
    three compose to the identity: the matrix product ``rq @ rp @ r2`` is
    ``-I``.
    """

    params: GroupParams
    r2: Isometry
    rp: Isometry
    rq: Isometry
    base_vertex: HPoint
    order2_vertex: HPoint
    orderp_vertex: HPoint
    relation_residual: float

    def as_dict(self) -> dict:
        return {"r2": self.r2, "rp": self.rp, "rp^-1": self.rp.inverse(), "rq": self.rq, "rq^-1": self.rq.inverse()}


def build_generators(params, tol: Tolerances = DEFAULT) -> GeneratorTriple:
    params = _as_params(params)
    p, q = params.p, params.q
    ex = _exact(p, q)
    mats = ex["mats"]
    with mpmath.workdps(_DPS):
        residuals = [
            _mp_residual(mats["r2"] ** 2),
            _mp_residual(mats["rp"] ** p),
            _mp_residual(mats["rq"] ** q),
            _mp_residual(mats["rq"] * mats["rp"] * mats["r2"]),
        ]
    worst = max(residuals)
    if worst > tol.relation:
        raise ConstructionError(f"generator relations fail for {params}: residual {worst:.3g}")
    return GeneratorTriple(
        params=params,
        r2=_to_isometry(mats["r2"]),
        rp=_to_isometry(mats["rp"]),
        rq=_to_isometry(mats["rq"]),
        base_vertex=HPoint(0.0, 1.0),
        order2_vertex=HPoint(0.0, float(mpmath.im(ex["order2"]))),
        orderp_vertex=HPoint(float(mpmath.re(ex["orderp"])), float(mpmath.im(ex["orderp"]))),
        relation_residual=worst,
    )
