"""Finite balls of the valence-q tiling and the level machinery built on them.

Tiling vertices are the orbit of ``i``.  A vertex is stored through one group
element ``g`` (in double-double form) with ``g i`` equal to the vertex; its
neighbours, in counterclockwise order, are ``g N_j i`` with
``N_j = rq^j r2`` for ``j = 0 .. q-1``.

Orbit points are bucketed on the hyperboloid coordinates
``x1 = (|z|^2 - 1) / (2 Im z)``, ``x2 = Re z / Im z`` over a coarse grid.
Distinct vertices sit at least ``2 sinh c > 1.1`` apart in these coordinates,
so each bucket holds at most one vertex and equality is then settled by an
exact double-double distance.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import mpmath
import numpy as np

from .closed_form import l1, l2, systole
from .config import DEFAULT, Tolerances
from .errors import BallTooSmallError, DomainError, PrecisionError
from .hyperbolic import HPoint, Isometry, IsometryClass, apply, classify, hyp_distance
from .kernels import backend as _kernels
from .triangle import GroupParams, _as_params, _mp_word, dd_words

__all__ = [
    "PathClass",
    "TilingBall",
    "LevelReport",
    "Level3Verdict",
    "build_tiling_ball",
    "combinatorial_distance",
    "rho_empirical",
    "rho_argmin_class",
    "cosh_d_general",
    "cosh_d_geometric",
    "cosh_d_closed",
    "rho3",
    "big_c",
    "verify_level3_bound",
    "level_of",
    "level_bound",
    "MAX_RADIUS",
    "CLOSED_CLASS",
]

MAX_RADIUS = 6
_CELL = 0.5
_SCHEMA = "tiling-ball/1"


@dataclass(frozen=True)
class PathClass:
    k1: int
    k2: int

    def check(self, q: int) -> None:
        if not (1 <= self.k1 <= q - 1 and 1 <= self.k2 <= q - 1):
            raise DomainError(f"path class ({self.k1},{self.k2}) outside 1..{q - 1}")

    def equivalents(self, q: int) -> frozenset[tuple[int, int]]:
        """Classes giving the same endpoint distance (mirror and reversal)."""
        a, b = self.k1, self.k2
        return frozenset({(a, b), (q - a, q - b), (b, a), (q - b, q - a)})


def _hyperboloid(hi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a, b, c, d = hi[:, 0], hi[:, 1], hi[:, 2], hi[:, 3]
    return 0.5 * (a * a + b * b - c * c - d * d), a * c + b * d


def _point_coords(z: HPoint) -> tuple[float, float]:
    return (z.re * z.re + z.im * z.im - 1.0) / (2.0 * z.im), z.re / z.im


class TilingBall:
    """Vertices within combinatorial distance ``radius`` of ``i``.

    ``neighbors[v, j]`` is the index of the ``j``-th neighbour of ``v`` in
    counterclockwise order, or ``-1`` when that neighbour lies outside.
    """

    def __init__(self, params: GroupParams, radius: int, hi, lo, radii, neighbors, tol: Tolerances):
        self.params = params
        self.radius = radius
        self.base = HPoint(0.0, 1.0)
        self.hi = hi
        self.lo = lo
        self.radii = radii
        self.neighbors = neighbors
        self.tol = tol
        self._cells: dict[tuple[int, int], int] = {}
        x1, x2 = _hyperboloid(hi)
        for v, key in enumerate(zip(np.floor(x1 / _CELL).astype(np.int64), np.floor(x2 / _CELL).astype(np.int64))):
            self._cells[(int(key[0]), int(key[1]))] = v
        self._bfs_cache: dict[int, np.ndarray] = {}
        self._base_dist: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.radii)

    @property
    def positions(self) -> list[HPoint]:
        a, b, c, d = (self.hi[:, j] for j in range(4))
        den = c * c + d * d
        return [HPoint(float(x), float(y)) for x, y in zip((a * c + b * d) / den, 1.0 / den)]

    @property
    def vertices(self) -> list[tuple[HPoint, int]]:
        return list(zip(self.positions, (int(r) for r in self.radii)))

    @property
    def edges(self) -> list[tuple[int, int]]:
        out = set()
        for v, row in enumerate(self.neighbors):
            for w in row:
                if w >= 0:
                    out.add((min(v, int(w)), max(v, int(w))))
        return sorted(out)

    def sphere(self, n: int) -> np.ndarray:
        return np.flatnonzero(self.radii == n)

    def base_distances(self) -> np.ndarray:
        if self._base_dist is None:
            self._base_dist = _kernels.base_distance(self.hi, self.lo)
        return self._base_dist

    def find(self, z: HPoint) -> int | None:
        """Index of the vertex at ``z`` (within ``vertex_merge``), else None."""
        x1, x2 = _point_coords(z)
        cx, cy = math.floor(x1 / _CELL), math.floor(x2 / _CELL)
        positions = None
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                v = self._cells.get((cx + dx, cy + dy))
                if v is None:
                    continue
                positions = positions or self.positions
                dist = hyp_distance(z, positions[v])
                if dist <= self.tol.vertex_merge:
                    return v
                if dist <= self.tol.vertex_ambiguity:
                    raise PrecisionError(f"point within {dist:.3g} of vertex {v}: cannot decide identity")
        return None

    def path_class(self, s0: int, s1: int, s2: int) -> int:
        """Turning index at ``s1`` of the path ``s0 -> s1 -> s2``."""
        row = list(self.neighbors[s1])
        if -1 in row:
            raise BallTooSmallError(f"vertex {s1} lies on the ball boundary")
        try:
            j0, j2 = row.index(s0), row.index(s2)
        except ValueError as exc:
            raise DomainError("consecutive path vertices must be adjacent") from exc
        return (j2 - j0) % self.params.q

    def to_dict(self) -> dict:
        return {
            "schema": _SCHEMA,
            "p": self.params.p,
            "q": self.params.q,
            "radius": self.radius,
            "vertices": [
                {"re": pt.re, "im": pt.im, "radius": r} for pt, r in self.vertices
            ],
            "edges": [list(e) for e in self.edges],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _neighbor_gens(params: GroupParams):
    words = [("rq",) * j + ("r2",) for j in range(params.q)]
    return dd_words(params, words)


def build_tiling_ball(params, n: int, tol: Tolerances = DEFAULT) -> TilingBall:
    params = _as_params(params)
    if isinstance(n, bool) or not isinstance(n, int) or not 1 <= n <= MAX_RADIUS:
        raise DomainError(f"radius must be an integer in 1..{MAX_RADIUS}, got {n!r}")
    q = params.q
    ghi, glo = _neighbor_gens(params)

    hi_blocks = [np.array([[1.0, 0.0, 0.0, 1.0]])]
    lo_blocks = [np.zeros((1, 4))]
    radii = [0]
    nbr_rows: list[np.ndarray] = []
    cells: dict[tuple[int, int], int] = {(0, 0): 0}
    # flat views kept in sync with the blocks for distance checks
    all_hi, all_lo = hi_blocks[0], lo_blocks[0]
    frontier = np.array([0])

    for layer in range(1, n + 2):
        fhi, flo = all_hi[frontier], all_lo[frontier]
        chi, clo = _kernels.expand(fhi, flo, ghi, glo, tol.sign)
        x1, x2 = _hyperboloid(chi)
        kx = np.floor(x1 / _CELL).astype(np.int64)
        ky = np.floor(x2 / _CELL).astype(np.int64)
        keys = np.stack([kx, ky], axis=1)
        uniq, first, inverse = np.unique(keys, axis=0, return_index=True, return_inverse=True)
        inverse = inverse.reshape(-1)
        group_vertex = np.empty(len(uniq), dtype=np.int64)
        new_hi, new_lo = [], []
        start = len(radii)
        for g, (key, row) in enumerate(zip(uniq, first)):
            cx, cy = int(key[0]), int(key[1])
            match = -1
            for dx in (-1, 0, 1):
                for dy in (-1, 0, 1):
                    v = cells.get((cx + dx, cy + dy))
                    if v is None:
                        continue
                    vh = all_hi[v] if v < start else new_hi[v - start]
                    vl = all_lo[v] if v < start else new_lo[v - start]
                    dist = float(_kernels.pair_distance(chi[row : row + 1], clo[row : row + 1], vh[None, :], vl[None, :])[0])
                    if dist <= tol.vertex_merge:
                        match = v
                    elif dist <= tol.vertex_ambiguity:
                        raise PrecisionError(f"orbit points {dist:.3g} apart at layer {layer}")
            if match < 0:
                if layer > n:
                    group_vertex[g] = -1
                    continue
                match = start + len(new_hi)
                new_hi.append(chi[row])
                new_lo.append(clo[row])
                radii.append(layer)
                cells[(cx, cy)] = match
            group_vertex[g] = match
        # every candidate in a bucket must be the bucket's vertex
        cand_vertex = group_vertex[inverse]
        if new_hi:
            all_hi = np.vstack([all_hi, np.array(new_hi)])
            all_lo = np.vstack([all_lo, np.array(new_lo)])
        inside = cand_vertex >= 0
        if np.any(inside):
            idx = np.flatnonzero(inside)
            d = _kernels.pair_distance(chi[idx], clo[idx], all_hi[cand_vertex[idx]], all_lo[cand_vertex[idx]])
            worst = float(np.max(d))
            if worst > tol.vertex_merge:
                raise PrecisionError(f"bucket holds points {worst:.3g} apart at layer {layer}")
        nbr_rows.append(cand_vertex.reshape(len(frontier), q))
        frontier = np.arange(start, len(radii))
        if layer > n or len(frontier) == 0:
            break

    neighbors = np.full((len(radii), q), -1, dtype=np.int64)
    expanded = 0
    for block in nbr_rows:
        neighbors[expanded : expanded + len(block)] = block
        expanded += len(block)
    return TilingBall(params, n, all_hi, all_lo, np.array(radii), neighbors, tol)


def _bfs(ball: TilingBall, source: int) -> np.ndarray:
    cached = ball._bfs_cache.get(source)
    if cached is not None:
        return cached
    dist = np.full(len(ball), -1, dtype=np.int64)
    dist[source] = 0
    queue = deque([source])
    nbrs = ball.neighbors
    while queue:
        v = queue.popleft()
        for w in nbrs[v]:
            if w >= 0 and dist[w] < 0:
                dist[w] = dist[v] + 1
                queue.append(w)
    ball._bfs_cache[source] = dist
    return dist


def combinatorial_distance(ball: TilingBall, u: int, v: int) -> int:
    for x in (u, v):
        if not 0 <= x < len(ball):
            raise DomainError(f"vertex index {x} out of range")
    d = int(_bfs(ball, u)[v])
    if d < 0:
        raise BallTooSmallError(f"vertices {u} and {v} are not connected inside the ball")
    return d


def _check_margin(ball: TilingBall, n: int) -> None:
    if not 1 <= n <= ball.radius - 1:
        raise DomainError(f"rho({n}) needs a ball of radius at least {n + 1}, have {ball.radius}")


def rho_empirical(ball: TilingBall, n: int) -> float:
    """Smallest hyperbolic distance from ``i`` to a vertex at combinatorial distance ``n``."""
    _check_margin(ball, n)
    return float(np.min(ball.base_distances()[ball.sphere(n)]))


def rho_argmin_class(ball: TilingBall) -> set[tuple[int, int]]:
    """Turning indices of the 3-paths reaching the vertices that realise ρ(3)."""
    _check_margin(ball, 3)
    dists = ball.base_distances()
    sphere = ball.sphere(3)
    best = float(np.min(dists[sphere]))
    targets = [int(v) for v in sphere if dists[v] <= best + 1e-9]
    r = ball.radii
    out: set[tuple[int, int]] = set()
    for s3 in targets:
        for s2 in ball.neighbors[s3]:
            if s2 < 0 or r[s2] != 2:
                continue
            for s1 in ball.neighbors[s2]:
                if s1 < 0 or r[s1] != 1:
                    continue
                k1 = ball.path_class(0, int(s1), int(s2))
                k2 = ball.path_class(int(s1), int(s2), s3)
                out.add((k1, k2))
    return out


# -- distances along explicit 3-paths ---------------------------------------


def cosh_d_geometric(params, pc: PathClass) -> float:
    """cosh of the distance from ``i`` to the end of the 3-path of class ``pc``."""
    params = _as_params(params)
    pc.check(params.q)
    word = ("r2",) + ("rq",) * pc.k1 + ("r2",) + ("rq",) * pc.k2 + ("r2",)
    with mpmath.workdps(40):
        m = _mp_word(params.p, params.q, word)
        # cosh d(i, M i) = (a^2 + b^2 + c^2 + d^2) / 2
        return float(sum(x * x for x in m) / 2)


def cosh_d_general(params, pc: PathClass) -> float:
    params = _as_params(params)
    pc.check(params.q)
    q = params.q
    if 2 * pc.k1 >= q or 2 * pc.k2 >= q:
        return cosh_d_geometric(params, pc)
    ch = params.cosh_2c
    sh2 = ch * ch - 1.0
    a1, a2 = 2.0 * pc.k1 * math.pi / q, 2.0 * pc.k2 * math.pi / q
    return ch * sh2 * (1.0 - math.cos(a1)) * (1.0 - math.cos(a2)) - sh2 * math.sin(a1) * math.sin(a2) + ch


_CLOSED = ("d11", "d12", "d1qm1", "d22", "d2qm2")

# path class realising each closed form
CLOSED_CLASS = {
    "d11": lambda q: PathClass(1, 1),
    "d12": lambda q: PathClass(1, 2),
    "d1qm1": lambda q: PathClass(1, q - 1),
    "d22": lambda q: PathClass(2, 2),
    "d2qm2": lambda q: PathClass(2, q - 2),
}


def cosh_d_closed(params, which: str) -> float:
    """Rational expressions in ``X = cos(π/p)``, ``Y = cos(π/q)``.

    ``d1qm1`` uses ``16X²(X²+Y²-1)(2X²+2Y²-1)`` in its numerator; the
    geometric oracle confirms this form.  ``d2qm2`` specialises the general
    formula at turning angles ``4π/q`` and ``2π - 4π/q``.
    """
    params = _as_params(params)
    X2, Y2 = params.X**2, params.Y**2
    den = 1.0 - Y2
    base = 2.0 * X2 + Y2 - 1.0
    s = X2 + Y2 - 1.0
    if which == "d11":
        num = 16.0 * X2 * s * (2.0 * X2 - 1.0)
    elif which == "d12":
        num = 32.0 * X2 * Y2 * s * (4.0 * X2 - 1.0)
    elif which == "d1qm1":
        num = 16.0 * X2 * s * (2.0 * X2 + 2.0 * Y2 - 1.0)
    elif which == "d22":
        num = 64.0 * X2 * Y2 * s * (8.0 * X2 * Y2 - 1.0)
    elif which == "d2qm2":
        ch = base / den
        sh2 = ch * ch - 1.0
        one_minus_cos = 8.0 * Y2 * den
        sin_sq = 16.0 * Y2 * den * (2.0 * Y2 - 1.0) ** 2
        return ch * sh2 * one_minus_cos**2 + sh2 * sin_sq + ch
    else:
        raise DomainError(f"unknown closed form {which!r}; expected one of {_CLOSED}")
    return (num + base) / den


def _rho3_case(p: int) -> str:
    # for p = 3 the vertex s(2,2) is only two steps from s0
    if p == 3:
        return "d2qm2"
    if p == 4:
        return "d12"
    if p == 5:
        return "d1qm1"
    return "d11"


def rho3(params) -> tuple[str, float]:
    params = _as_params(params)
    case = _rho3_case(params.p)
    return case, math.acosh(cosh_d_closed(params, case))


def big_c(params, l0: float) -> float:
    """Displacement of ``i`` by a translation of length ``l0`` whose axis passes within ``c``."""
    params = _as_params(params)
    if not l0 >= 0:
        raise DomainError("l0 must be non-negative")
    # cosh C - 1 = cosh^2 c (cosh l0 - 1); use 2 sinh^2 halves to keep accuracy near 0
    t = params.cosh_c * math.sinh(l0 / 2.0)
    return 2.0 * math.asinh(t)


@dataclass(frozen=True)
class Level3Verdict:
    holds: bool
    margin: float
    rho3: float
    bound: float
    case: str
    l0_label: str

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _l0(params: GroupParams):
    p = params.p
    if p == 3:
        return l1(params, 4)
    if 6 <= p <= 10:
        return l1(params, 2)
    return l2(params, 1, params.q - 1)


def verify_level3_bound(params) -> Level3Verdict:
    params = _as_params(params)
    l0 = _l0(params)
    case, value = rho3(params)
    bound = big_c(params, l0.value)
    return Level3Verdict(value > bound, value - bound, value, bound, case, l0.label)


@dataclass(frozen=True)
class LevelReport:
    """``level`` is exact when ``conclusive``; otherwise ``lower_bound`` holds."""

    conclusive: bool
    level: int | None
    lower_bound: int
    witness: int | None

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def level_of(ball: TilingBall, M: Isometry) -> LevelReport:
    kind = classify(M, ball.tol)
    if kind is not IsometryClass.HYPERBOLIC:
        raise DomainError(f"level needs a hyperbolic element, got {kind.value}")
    best, witness = None, None
    positions = ball.positions
    # only vertices whose BFS distances are trustworthy
    for v in range(len(ball)):
        try:
            img = apply(M, positions[v])
            w = ball.find(img)
        except PrecisionError:
            continue
        if w is None:
            continue
        d = int(_bfs(ball, v)[w])
        if d >= 0 and (best is None or d < best):
            best, witness = d, v
    if best is None:
        return LevelReport(False, None, 1, None)
    return LevelReport(True, best, best, witness)


def level_bound(params, l0: float, max_radius: int = 5) -> int | None:
    """Largest level a hyperbolic element of length at most ``l0`` can have.

    Returns ``None`` when ρ has not overtaken ``big_c(l0)`` within
    ``max_radius - 1`` steps.
    """
    params = _as_params(params)
    if not l0 > 0:
        raise DomainError("l0 must be positive")
    target = big_c(params, l0)
    radius = min(3, max_radius)
    while radius <= min(max_radius, MAX_RADIUS):
        ball = build_tiling_ball(params, radius)
        for n in range(1, radius):
            if rho_empirical(ball, n) > target:
                return n - 1
        radius += 1
    return None
