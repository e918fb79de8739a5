"""Distinguishing triangle groups by the bottom of their length spectra.

Three tools live here: inversion of the first two lengths back to ``(p, q)``
when both orders are at least 11, a systole collision scan, and a numeric
replay of the finite candidate sets that rule out isospectral pairs for
smaller ``p``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import mpmath

from .closed_form import SpectrumPrefix, spectrum_begin, systole
from .config import DEFAULT, Tolerances
from .errors import DomainError, InconsistencyError
from .triangle import GroupParams, _as_params, validate_params

__all__ = [
    "TwoLengths",
    "Inversion",
    "CollisionRecord",
    "PrefixComparison",
    "CaseReplay",
    "RigidityReport",
    "two_lengths",
    "invert_two_lengths",
    "snap_order",
    "valid_groups",
    "systole_collision_scan",
    "isospectral_prefix_equal",
    "replay_cases",
    "rigidity_scan",
    "MAX_BOUND",
]

MAX_BOUND = 60
_SNAP_MAX = 10_000
_SNAP_TOL = 1e-6
_SCHEMA = "scan/1"


@dataclass(frozen=True)
class TwoLengths:
    L1: float
    L2: float

    def __post_init__(self):
        if not 1.0 < self.L1 < self.L2:
            raise DomainError(f"need 1 < L1 < L2, got L1={self.L1!r}, L2={self.L2!r}")

    @classmethod
    def from_lengths(cls, l1: float, l2: float) -> "TwoLengths":
        return cls(math.cosh(l1 / 2.0), math.cosh(l2 / 2.0))


def two_lengths(params) -> TwoLengths:
    """``cosh`` of half the first two distinct lengths, for ``p >= 11``."""
    params = _as_params(params)
    if params.p < 11:
        raise DomainError("the two-length inversion applies to p >= 11")
    e = spectrum_begin(params).entries
    return TwoLengths(e[0].cosh_half, e[1].cosh_half)


def snap_order(x: float) -> tuple[int | None, float]:
    """Integer ``n`` with ``cos(π/n)`` closest to ``x`` and the residual.

    Returns ``(None, residual)`` when no ``n`` in ``2..10^4`` comes within
    ``1e-6``.
    """
    if not -1.0 < x < 1.0:
        return None, math.inf
    approx = math.pi / math.acos(x)
    best, res = None, math.inf
    for n in (math.floor(approx), math.ceil(approx)):
        if 2 <= n <= _SNAP_MAX:
            r = abs(math.cos(math.pi / n) - x)
            if r < res:
                best, res = n, r
    if best is None or res >= _SNAP_TOL:
        return None, res
    return best, res


@dataclass(frozen=True)
class Inversion:
    X: float
    Y: float
    p: int | None
    q: int | None
    residual_p: float
    residual_q: float

    @property
    def snapped(self) -> bool:
        return self.p is not None and self.q is not None


def invert_two_lengths(tl: TwoLengths, tol: Tolerances = DEFAULT) -> Inversion:
    """Solve ``2XY = L1``, ``Y(4X² - 1) = L2`` for ``X, Y`` in ``[0, 1]``.

    ``X`` is the positive root of ``4 L1 u² - 2 L2 u - L1``.
    """
    L1, L2 = tl.L1, tl.L2
    X = (L2 + math.sqrt(L2 * L2 + 4.0 * L1 * L1)) / (4.0 * L1)
    if X > 1.0 + tol.sign:
        raise InconsistencyError(f"root X={X!r} lies outside [0, 1]")
    Y = L1 / (2.0 * X)
    if Y > 1.0 + tol.sign:
        raise InconsistencyError(f"Y={Y!r} lies outside [0, 1]")
    p, rp = snap_order(min(X, 1.0))
    q, rq = snap_order(min(Y, 1.0))
    return Inversion(X, Y, p, q, rp, rq)


def _check_bounds(p_max: int, q_max: int) -> None:
    for v in (p_max, q_max):
        if isinstance(v, bool) or not isinstance(v, int) or not 3 <= v <= MAX_BOUND:
            raise DomainError(f"scan bounds must be integers in 3..{MAX_BOUND}, got {v!r}")


def valid_groups(p_max: int, q_max: int) -> list[GroupParams]:
    return [
        validate_params(p, q)
        for p in range(3, p_max + 1)
        for q in range(p, q_max + 1)
        if 2 * (p + q) < p * q
    ]


@dataclass(frozen=True)
class CollisionRecord:
    groupA: GroupParams
    groupB: GroupParams
    systole_delta: float
    second_value_delta: float | None

    def to_dict(self) -> dict:
        return {
            "groupA": [self.groupA.p, self.groupA.q],
            "groupB": [self.groupB.p, self.groupB.q],
            "systole_delta": self.systole_delta,
            "second_value_delta": self.second_value_delta,
        }


def _second(prefix: SpectrumPrefix) -> float | None:
    return prefix.entries[1].value if len(prefix.entries) > 1 else None


def _systole_pairs(groups: list[GroupParams], window: float):
    """Pairs of groups whose systoles differ by at most ``window``."""
    vals = sorted((systole(g).value, g.p, g.q, g) for g in groups)
    for i, (a, *_, ga) in enumerate(vals):
        for b, *_, gb in vals[i + 1 :]:
            if b - a > window:
                break
            yield ga, gb, b - a


def systole_collision_scan(p_max: int, q_max: int, tol: Tolerances = DEFAULT) -> list[CollisionRecord]:
    _check_bounds(p_max, q_max)
    out = []
    for ga, gb, delta in _systole_pairs(valid_groups(p_max, q_max), tol.systole_equal):
        sa, sb = _second(spectrum_begin(ga)), _second(spectrum_begin(gb))
        second = abs(sa - sb) if sa is not None and sb is not None else None
        a, b = sorted((ga, gb), key=lambda g: (g.p, g.q))
        out.append(CollisionRecord(a, b, delta, second))
    return sorted(out, key=lambda r: (r.groupA.p, r.groupA.q, r.groupB.p, r.groupB.q))


@dataclass(frozen=True)
class PrefixComparison:
    equal: bool
    compared: int
    first_divergence: tuple[int, float, float] | None
    flagged: bool = False

    def __bool__(self) -> bool:
        return self.equal

    def describe(self) -> str:
        if self.equal:
            return "equal prefix"
        i, a, b = self.first_divergence
        return f"value {i} differs: {a!r} vs {b!r}"


def isospectral_prefix_equal(a, b, tol: Tolerances = DEFAULT) -> PrefixComparison:
    """Compare certified prefixes up to the smaller cutoff.

    Entries below the common cutoff are compared pairwise.  When one side has
    more of them, the other side's next certified value (which lies above
    the cutoff) is reported as the divergence.
    """
    pa, pb = spectrum_begin(_as_params(a)), spectrum_begin(_as_params(b))
    cut = min(pa.cutoff, pb.cutoff) + tol.value_merge
    na = sum(e.value <= cut for e in pa.entries)
    nb = sum(e.value <= cut for e in pb.entries)
    flagged = False
    for i in range(max(na, nb)):
        if i >= len(pa.entries) or i >= len(pb.entries):
            break
        va, vb = pa.entries[i].value, pb.entries[i].value
        delta = abs(va - vb)
        if delta <= tol.value_merge:
            continue
        if delta <= tol.distinct_margin:
            flagged = True
        return PrefixComparison(False, i + 1, (i, va, vb), flagged)
    return PrefixComparison(True, min(na, nb), None, flagged)


# -- finite candidate sets ---------------------------------------------------


def _sys_half(p: int, q: int) -> float:
    """``cosh`` of half the systole, without validation."""
    X, Y = math.cos(math.pi / p), math.cos(math.pi / q)
    return 2.0 * Y * Y - 0.5 if p == 3 else 2.0 * X * Y


_MP_DPS = 50
_MP_ZERO = 1e-40


def _sys_half_gap_mp(a: tuple[int, int], b: tuple[int, int]) -> float:
    """The same systole gap at 50 significant digits."""
    with mpmath.workdps(_MP_DPS):
        def half(p, q):
            X, Y = mpmath.cos(mpmath.pi / p), mpmath.cos(mpmath.pi / q)
            return 2 * Y * Y - mpmath.mpf(1) / 2 if p == 3 else 2 * X * Y
        return float(abs(half(*a) - half(*b)))


def _solve_q(p: int, target: float, q_min: int) -> int | None:
    """Nearest admissible integer ``q >= q_min`` for a systole half-cosh ``target``."""
    if p == 3:
        y2 = (target + 0.5) / 2.0
        if not 0.0 < y2 < 1.0:
            return None
        y = math.sqrt(y2)
    else:
        y = target / (2.0 * math.cos(math.pi / p))
    if not -1.0 < y < 1.0:
        return None
    approx = math.pi / math.acos(y)
    best = None
    for n in (math.floor(approx), math.ceil(approx)):
        if q_min <= n <= _SNAP_MAX and 2 * (p + n) < p * n:
            if best is None or abs(_sys_half(p, n) - target) < abs(_sys_half(p, best) - target):
                best = n
    return best


@dataclass
class CaseReplay:
    """One finite candidate set.

    Candidates whose double-precision gap falls between the equality and
    distinctness tolerances are recomputed at 50 digits; those that stay
    apart are kept under ``reviewed`` and do not count as solutions.
    """

    name: str
    candidates: int = 0
    solutions: list[tuple[tuple[int, int], tuple[int, int]]] = field(default_factory=list)
    reviewed: list[tuple[tuple[int, int], tuple[int, int], float, float]] = field(default_factory=list)
    expected: list[tuple[tuple[int, int], tuple[int, int]]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return sorted(self.solutions) == sorted(self.expected)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "candidates": self.candidates,
            "solutions": [list(map(list, s)) for s in self.solutions],
            "expected": [list(map(list, s)) for s in self.expected],
            "reviewed": [[list(a), list(b), d, dmp] for a, b, d, dmp in self.reviewed],
            "ok": self.ok,
        }


def _record(case: CaseReplay, a: tuple[int, int], b: tuple[int, int], tol: Tolerances) -> None:
    case.candidates += 1
    delta = abs(_sys_half(*a) - _sys_half(*b))
    if delta <= tol.systole_equal:
        case.solutions.append((a, b))
    elif delta <= tol.distinct_margin:
        precise = _sys_half_gap_mp(a, b)
        if precise <= _MP_ZERO:
            case.solutions.append((a, b))
        else:
            case.reviewed.append((a, b, delta, precise))


def _pair_case(name, fixed_p, q_range, other_ps, other_q_range, tol, expected=()):
    """Both sides enumerated over explicit finite ranges."""
    case = CaseReplay(name, expected=list(expected))
    for q in q_range:
        if 2 * (fixed_p + q) >= fixed_p * q:
            continue
        for p2 in other_ps:
            for q2 in other_q_range(p2):
                if 2 * (p2 + q2) < p2 * q2:
                    _record(case, (fixed_p, q), (p2, q2), tol)
    return case


def _solve_case(name, fixed_ps, q_range, other_ps, tol, expected=()):
    """The other side's ``q'`` is unbounded; solve for it."""
    case = CaseReplay(name, expected=list(expected))
    for p in fixed_ps:
        for q in q_range(p):
            if 2 * (p + q) >= p * q:
                continue
            for p2 in other_ps:
                q2 = _solve_q(p2, _sys_half(p, q), p2)
                if q2 is None:
                    case.candidates += 1
                else:
                    _record(case, (p, q), (p2, q2), tol)
    return case


def _inverse_solve_case(name, fixed_p, other_pairs, q_min, tol, expected=()):
    """``q`` on the fixed side is unbounded; solve for it from each ``(p', q')``."""
    case = CaseReplay(name, expected=list(expected))
    for p2, q2 in other_pairs:
        if 2 * (p2 + q2) >= p2 * q2:
            continue
        q = _solve_q(fixed_p, _sys_half(p2, q2), q_min)
        if q is None:
            case.candidates += 1
        else:
            _record(case, (fixed_p, q), (p2, q2), tol)
    return case


def replay_cases(tol: Tolerances = DEFAULT, inversion_bound: int = 50) -> list[CaseReplay]:
    cases = []
    # orders 9..11 against p' <= 8
    cases.append(_solve_case("9 <= p <= 11, q <= 17 vs 4 <= p' <= 8", range(9, 12),
                             lambda p: range(p, 18), range(4, 9), tol))

    # a (3, q') systole stays below 3/2, every p >= 6 systole reaches it
    cases.append(_pair_case(
        f"p' = 3 vs p >= 6 (orders <= {MAX_BOUND})", 3, range(7, MAX_BOUND + 1),
        range(6, MAX_BOUND + 1), lambda p2: range(p2, MAX_BOUND + 1), tol))

    cases.append(_inverse_solve_case(
        "p = 10 vs 11 <= p' <= 14, q' <= 23", 10,
        [(p2, q2) for p2 in range(11, 15) for q2 in range(p2, 24)], 10, tol))
    cases.append(_inverse_solve_case(
        "p = 9 vs 10 <= p' <= 12, q' <= 20", 9,
        [(p2, q2) for p2 in range(10, 13) for q2 in range(p2, 21)], 9, tol))
    cases.append(_solve_case("p = 8, 8 <= q <= 14 vs 4 <= p' <= 7", [8], lambda p: range(8, 15), range(4, 8), tol))
    cases.append(_solve_case("p = 7, 7 <= q <= 11 vs 4 <= p' <= 6", [7], lambda p: range(7, 12), range(4, 7), tol))
    cases.append(_solve_case("p = 6, 6 <= q <= 8 vs p' in {4, 5}", [6], lambda p: range(6, 9), range(4, 6), tol))
    cases.append(_solve_case("p = 5, 5 <= q <= 6 vs p' = 4", [5], lambda p: range(5, 7), [4], tol))
    cases.append(_solve_case("p = 5, 5 <= q <= 8 vs p' = 3", [5], lambda p: range(5, 9), [3], tol,
                             expected=[((5, 5), (3, 10))]))
    cases.append(_inverse_solve_case("p = 4 vs p' = 3, 7 <= q' <= 15", 4,
                                     [(3, q2) for q2 in range(7, 16)], 5, tol,
                                     expected=[((4, 12), (3, 12))]))

    case = CaseReplay(f"p, p' >= 11 by inversion (q <= {inversion_bound})")
    for p in range(11, inversion_bound + 1):
        for q in range(p, inversion_bound + 1):
            case.candidates += 1
            inv = invert_two_lengths(two_lengths((p, q)), tol)
            if (inv.p, inv.q) != (p, q):
                case.solutions.append(((p, q), (inv.p or -1, inv.q or -1)))
    cases.append(case)
    return cases


@dataclass
class RigidityReport:
    p_max: int
    q_max: int
    groups: int
    pairs_compared: int
    isospectral_pairs: list[tuple[GroupParams, GroupParams]]
    reviewed_pairs: list[tuple[GroupParams, GroupParams, float, float]]
    collisions: list[CollisionRecord]
    cases: list[CaseReplay]
    rows: list = field(default_factory=list, repr=False)

    @property
    def ok(self) -> bool:
        return not self.isospectral_pairs and all(c.ok for c in self.cases)

    def to_dict(self) -> dict:
        return {
            "schema": _SCHEMA,
            "p_max": self.p_max,
            "q_max": self.q_max,
            "groups": self.groups,
            "pairs_compared": self.pairs_compared,
            "isospectral_pairs": [[[a.p, a.q], [b.p, b.q]] for a, b in self.isospectral_pairs],
            "reviewed_pairs": [[[a.p, a.q], [b.p, b.q], d, dmp] for a, b, d, dmp in self.reviewed_pairs],
            "collisions": [c.to_dict() for c in self.collisions],
            "cases": [c.to_dict() for c in self.cases],
            "ok": self.ok,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_csv(self) -> str:
        """One row per pair whose systoles agree within the distinctness margin."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["pA", "qA", "pB", "qB", "systoleA", "systoleB", "systole_delta", "second_value_delta", "verdict"])
        for a, b, delta, second, verdict in self.rows:
            w.writerow([a.p, a.q, b.p, b.q, repr(systole(a).value), repr(systole(b).value), repr(delta),
                        "" if second is None else repr(second), verdict])
        return buf.getvalue()


def rigidity_scan(p_max: int, q_max: int, tol: Tolerances = DEFAULT, inversion_bound: int = 50) -> RigidityReport:
    """Check every pair in range for equal certified prefixes and replay the candidate sets.

    Equal prefixes need equal systoles, so only pairs whose systoles are
    within ``tol.distinct_margin`` are compared; pairs in the gray zone above
    ``tol.systole_equal`` are settled at 50 digits.
    """
    _check_bounds(p_max, q_max)
    groups = valid_groups(p_max, q_max)
    iso, reviewed, rows = [], [], []
    compared = 0
    for ga, gb, delta in _systole_pairs(groups, tol.distinct_margin):
        compared += 1
        a, b = sorted((ga, gb), key=lambda g: (g.p, g.q))
        sa, sb = _second(spectrum_begin(a)), _second(spectrum_begin(b))
        second = abs(sa - sb) if sa is not None and sb is not None else None
        precise = _sys_half_gap_mp((a.p, a.q), (b.p, b.q)) if delta > tol.systole_equal else 0.0
        if precise > _MP_ZERO:
            reviewed.append((a, b, delta, precise))
            verdict = "distinct-reviewed"
        elif isospectral_prefix_equal(a, b, tol).equal:
            iso.append((a, b))
            verdict = "isospectral-prefix"
        else:
            verdict = "distinct"
        rows.append((a, b, delta, second, verdict))
    rows.sort(key=lambda r: (r[0].p, r[0].q, r[1].p, r[1].q))
    return RigidityReport(
        p_max,
        q_max,
        len(groups),
        compared,
        iso,
        reviewed,
        systole_collision_scan(p_max, q_max, tol),
        replay_cases(tol, inversion_bound),
        rows,
    )
