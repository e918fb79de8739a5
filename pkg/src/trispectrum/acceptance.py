"""End-to-end acceptance checks shared by the test suite and ``trispectrum verify``.

Each check returns a :class:`CriterionResult`; :func:`run_all` runs them in
order and :func:`format_line` renders the one-line summary.
"""

from __future__ import annotations

import functools
import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .closed_form import d2, spectrum_begin, systole
from .config import DEFAULT
from .hyperbolic import I, axis_distance, translation_length
from .oracle import Verdict, enumerate_elements, oracle_spectrum
from .rigidity import invert_two_lengths, rigidity_scan, two_lengths, valid_groups
from .tiling import (
    CLOSED_CLASS,
    big_c,
    build_tiling_ball,
    rho3,
    rho_argmin_class,
    rho_empirical,
    verify_level3_bound,
)

__all__ = ["CriterionResult", "CRITERIA", "run_all", "format_line", "LEVEL3_GRID"]

ORACLE_GROUPS = [(3, 7), (3, 8), (4, 5), (4, 6), (4, 7), (4, 12), (5, 5), (5, 6), (6, 7), (11, 11)]
RHO_GROUPS = [(3, 7), (3, 9), (4, 7), (5, 8), (6, 7), (7, 9), (11, 12)]
DISPLACEMENT_GROUPS = [(3, 7), (4, 6), (6, 8)]
LEVEL3_GRID = (
    [(3, q) for q in (7, 8, 10, 13, 17, 21, 25)]
    + [(4, q) for q in (5, 6, 7, 9, 12, 18, 25)]
    + [(5, q) for q in (5, 6, 8, 11, 15, 20, 24)]
    + [(6, 6), (6, 9), (7, 7), (7, 12), (8, 8), (8, 16), (9, 10), (9, 20), (10, 10), (10, 25)]
    + [(11, 11), (11, 17), (12, 13), (13, 22), (15, 15), (16, 21), (18, 24), (19, 19), (20, 25)]
)


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float


def format_line(r: CriterionResult) -> str:
    status = "PASS" if r.passed else "FAIL"
    return f"[{status}] {r.number}. {r.name}: {r.detail} ({r.seconds:.1f} s)"


@functools.lru_cache(maxsize=16)
def _ball(p: int, q: int, radius: int):
    return build_tiling_ball((p, q), radius)


def oracle_agreement(budget: int = 14) -> tuple[bool, str]:
    start = time.perf_counter()
    bad = []
    worst = 0.0
    for pq in ORACLE_GROUPS:
        rep = oracle_spectrum(pq, budget)
        worst = max([worst] + [d for _, _, d in rep.matched])
        if rep.verdict != Verdict.MATCH:
            bad.append(f"{pq}:{rep.verdict}")
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 600.0
    return ok, f"{len(ORACLE_GROUPS) - len(bad)}/{len(ORACLE_GROUPS)} groups match at budget {budget}, max |Δ| {worst:.1e}, {elapsed:.0f} s" + (f"; {bad}" if bad else "")


def systole_values() -> tuple[bool, str]:
    out = []
    ok = True
    expected = {
        (3, 7): 2.0 * math.acosh(2.0 * math.cos(math.pi / 7) ** 2 - 0.5),
        (4, 5): 2.0 * math.acosh(2.0 * math.cos(math.pi / 4) * math.cos(math.pi / 5)),
    }
    for pq, value in expected.items():
        rep = oracle_spectrum(pq, 12)
        found = rep.found_lengths[0] if rep.found_lengths else math.nan
        d_formula = abs(systole(pq).value - value)
        d_oracle = abs(found - value)
        ok &= d_formula <= 1e-12 and d_oracle <= 1e-9
        out.append(f"{pq} Δ={d_oracle:.1e}")
    return ok, ", ".join(out)


def documented_collisions() -> tuple[bool, str]:
    ok = True
    out = []
    for a, b in (((5, 5), (3, 10)), ((4, 12), (3, 12))):
        ds = abs(systole(a).value - systole(b).value)
        sa, sb = spectrum_begin(a).entries[1].value, spectrum_begin(b).entries[1].value
        ok &= ds <= 1e-12 and abs(sa - sb) > 1e-3
        out.append(f"{a}~{b}: systole Δ={ds:.1e}, second Δ={abs(sa - sb):.3f}")
    return ok, "; ".join(out)


def rigidity_desk_scale() -> tuple[bool, str]:
    start = time.perf_counter()
    rep = rigidity_scan(30, 30)
    elapsed = time.perf_counter() - start
    failed = [c.name for c in rep.cases if not c.ok]
    ok = rep.ok and elapsed < 60.0
    return ok, (
        f"{rep.groups} groups, {len(rep.isospectral_pairs)} isospectral pairs, "
        f"{len(rep.cases) - len(failed)}/{len(rep.cases)} candidate sets as expected, {elapsed:.1f} s"
    )


def inversion_round_trip() -> tuple[bool, str]:
    total, bad, worst = 0, 0, 0.0
    for p in range(11, 51):
        for q in range(p, 51):
            total += 1
            inv = invert_two_lengths(two_lengths((p, q)))
            worst = max(worst, inv.residual_p, inv.residual_q)
            if (inv.p, inv.q) != (p, q) or max(inv.residual_p, inv.residual_q) >= 1e-9:
                bad += 1
    return bad == 0, f"{total - bad}/{total} pairs recovered, max residual {worst:.1e}"


def rho3_consistency() -> tuple[bool, str]:
    bad = []
    worst = 0.0
    for p, q in RHO_GROUPS:
        ball = _ball(p, q, 5)
        case, value = rho3((p, q))
        delta = abs(rho_empirical(ball, 3) - value)
        worst = max(worst, delta)
        cls = CLOSED_CLASS[case](q).equivalents(q)
        if delta > 1e-9 or not (cls & rho_argmin_class(ball)):
            bad.append((p, q))
    return not bad, f"{len(RHO_GROUPS) - len(bad)}/{len(RHO_GROUPS)} groups, max |Δ| {worst:.1e}" + (f"; failing {bad}" if bad else "")


def level3_bounds() -> tuple[bool, str]:
    verdicts = [verify_level3_bound(pq) for pq in LEVEL3_GRID]
    branches = {"p=3", "p=4", "p=5", "6<=p<=10", "p>=11"}
    seen = set()
    for p, _ in LEVEL3_GRID:
        seen.add("p=3" if p == 3 else "p=4" if p == 4 else "p=5" if p == 5 else "6<=p<=10" if p <= 10 else "p>=11")
    ok = len(LEVEL3_GRID) == 40 and all(v.holds and v.margin > 0 for v in verdicts) and seen == branches
    return ok, f"{sum(v.holds for v in verdicts)}/{len(verdicts)} hold, min margin {min(v.margin for v in verdicts):.3f}, {len(seen)} branches"


def _min_displacement(m, z: np.ndarray) -> float:
    w = (m.a * z + m.b) / (m.c * z + m.d)
    d = 2.0 * np.arcsinh(np.abs(z - w) / (2.0 * np.sqrt(z.imag * w.imag)))
    return float(d.min())


def displacement_bound(samples: int = 50, seed: int = 20240601) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    out = []
    ok = True
    for p, q in DISPLACEMENT_GROUPS:
        cutoff = spectrum_begin((p, q)).cutoff
        ball = _ball(p, q, 5)
        z = np.array([complex(s) for s in ball.positions])
        # keep axes that pass well inside the ball
        reach = rho_empirical(ball, 3)
        es = enumerate_elements((p, q), 12)
        pool = []
        for i in range(len(es)):
            m = es.isometry(i)
            t = abs(m.trace)
            if t <= 2.0 + DEFAULT.classify or 2.0 * math.acosh(t / 2.0) > cutoff + 1e-9:
                continue
            if axis_distance(m, I) <= reach:
                pool.append(m)
        picks = rng.choice(len(pool), size=min(samples, len(pool)), replace=False)
        worst = -math.inf
        for k in picks:
            m = pool[int(k)]
            worst = max(worst, _min_displacement(m, z) - big_c((p, q), translation_length(m)))
        ok &= len(picks) == samples and worst <= 1e-9
        out.append(f"{(p, q)}: {len(picks)} elements, max excess {worst:.2e}")
    return ok, "; ".join(out)


def _corner_minimum_violations(q_max: int = 20) -> int:
    # sin sin cosh2c - cos cos over K..q-K x K'..q-K' is smallest at (K, K')
    violations = 0
    for g in valid_groups(q_max, q_max):
        q = g.q
        k = np.arange(1, q)
        s, c = np.sin(k * np.pi / q), np.cos(k * np.pi / q)
        f = np.outer(s, s) * g.cosh_2c - np.outer(c, c)
        for K in range(1, q // 2 + 1):
            for K2 in range(1, q // 2 + 1):
                block = f[K - 1 : q - K, K2 - 1 : q - K2]
                if block.size and block.min() < f[K - 1, K2 - 1] - 1e-12:
                    violations += 1
    return violations


def monotonicity_suite() -> tuple[bool, str]:
    rho_bad = []
    for p, q in RHO_GROUPS:
        ball = _ball(p, q, 5)
        rho = [rho_empirical(ball, n) for n in range(1, 5)]
        if any(b < a - 1e-10 for a, b in zip(rho, rho[1:])):
            rho_bad.append((p, q))
    refl = 0.0
    for g in valid_groups(30, 30):
        for k in range(1, g.q):
            refl = max(refl, abs(d2(g, g.q - 1, k) - d2(g, 1, g.q - k)))
    l4 = _corner_minimum_violations(20)
    ok = not rho_bad and refl <= 1e-12 and l4 == 0
    return ok, f"ρ monotone on {len(RHO_GROUPS) - len(rho_bad)}/{len(RHO_GROUPS)}, D2 reflection max {refl:.1e}, corner-minimum violations {l4}"


CRITERIA: list[tuple[int, str, Callable[[], tuple[bool, str]]]] = [
    (1, "oracle-formula agreement", oracle_agreement),
    (2, "systole values", systole_values),
    (3, "documented systole collisions", documented_collisions),
    (4, "rigidity at desk scale", rigidity_desk_scale),
    (5, "inversion round trip", inversion_round_trip),
    (6, "rho(3) consistency", rho3_consistency),
    (7, "level-3 bounds", level3_bounds),
    (8, "displacement bound", displacement_bound),
    (9, "monotonicity suite", monotonicity_suite),
]


def run_one(number: int) -> CriterionResult:
    for n, name, fn in CRITERIA:
        if n == number:
            start = time.perf_counter()
            ok, detail = fn()
            return CriterionResult(n, name, bool(ok), detail, time.perf_counter() - start)
    raise KeyError(number)


def run_all() -> list[CriterionResult]:
    return [run_one(n) for n, _, _ in CRITERIA]
