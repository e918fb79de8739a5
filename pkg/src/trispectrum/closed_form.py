"""Explicit low translation lengths of Γ(2, p, q).

Two families of hyperbolic elements are covered.  Level one elements turn
``k`` steps around a single tiling vertex; their half-trace is
``D1(k) = sin(kπ/q) cos(π/p) / sin(π/q)``.  Level two elements turn ``k``
then ``k'`` steps around two adjacent vertices, with half-trace
``D2(k, k') = |sin(kπ/q) sin(k'π/q) cosh 2c - cos(kπ/q) cos(k'π/q)|``.
Lengths are ``2 arccosh`` of those values whenever they exceed one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .config import DEFAULT, Tolerances
from .errors import DomainError
from .triangle import GroupParams, _as_params

__all__ = [
    "LengthValue",
    "SpectrumPrefix",
    "d1",
    "l1",
    "d2",
    "l2",
    "systole",
    "spectrum_begin",
    "merged_low_levels",
    "format_label",
    "parse_label",
]


def format_label(kind: int, indices: tuple[int, ...], q: int) -> str:
    """``l1(k)`` or ``l2(k,k')``; the index ``q-1`` is written symbolically."""
    parts = ["q-1" if k == q - 1 else str(k) for k in indices]
    return f"l{kind}({','.join(parts)})"


@dataclass(frozen=True)
class LengthValue:
    label: str
    value: float
    cosh_half: float
    indices: tuple[int, ...]
    aliases: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.cosh_half > 1.0:
            raise DomainError(f"{self.label}: cosh_half {self.cosh_half!r} is not above 1")

    @property
    def labels(self) -> tuple[str, ...]:
        return (self.label, *self.aliases)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "value": self.value,
            "cosh_half": self.cosh_half,
            "indices": list(self.indices),
            "aliases": list(self.aliases),
        }


@dataclass(frozen=True)
class SpectrumPrefix:
    params: GroupParams
    entries: tuple[LengthValue, ...]
    cutoff: float
    cutoff_label: str

    @property
    def values(self) -> list[float]:
        return [e.value for e in self.entries]

    def to_dict(self) -> dict:
        return {
            "p": self.params.p,
            "q": self.params.q,
            "entries": [e.to_dict() for e in self.entries],
            "cutoff": self.cutoff,
            "cutoff_label": self.cutoff_label,
        }


def _check_index(params: GroupParams, *ks: int) -> None:
    for k in ks:
        if isinstance(k, bool) or not isinstance(k, int) or not 1 <= k <= params.q - 1:
            raise DomainError(f"index {k!r} outside 1..{params.q - 1}")


def d1(params, k: int) -> float:
    params = _as_params(params)
    _check_index(params, k)
    return math.sin(k * math.pi / params.q) * params.cosh_c


def d2(params, k: int, k2: int) -> float:
    params = _as_params(params)
    _check_index(params, k, k2)
    a, b = k * math.pi / params.q, k2 * math.pi / params.q
    return abs(math.sin(a) * math.sin(b) * params.cosh_2c - math.cos(a) * math.cos(b))


def _length(label: str, indices: tuple[int, ...], D: float, tol: Tolerances) -> LengthValue | None:
    if D <= 1.0 + tol.classify:
        return None
    return LengthValue(label, 2.0 * math.acosh(D), D, indices)


def l1(params, k: int, tol: Tolerances = DEFAULT) -> LengthValue | None:
    params = _as_params(params)
    return _length(format_label(1, (k,), params.q), (k,), d1(params, k), tol)


def l2(params, k: int, k2: int, tol: Tolerances = DEFAULT) -> LengthValue | None:
    params = _as_params(params)
    return _length(format_label(2, (k, k2), params.q), (k, k2), d2(params, k, k2), tol)


def systole(params) -> LengthValue:
    params = _as_params(params)
    X, Y = params.X, params.Y
    if params.p == 3:
        D = 2.0 * Y * Y - 0.5
        idx = (1, params.q - 1)
        return LengthValue(format_label(2, idx, params.q), 2.0 * math.acosh(D), D, idx)
    D = 2.0 * X * Y
    return LengthValue("l1(2)", 2.0 * math.acosh(D), D, (2,))


def _row(p: int, q: int) -> list[tuple[int, tuple[int, ...]]]:
    """Labels of the certified spectrum beginning, in increasing order."""
    top = (2, (1, q - 1))
    if p == 3:
        return [top] if q == 7 else [top, (1, (4,))]
    if p == 4:
        if q in (6, 7):
            return [(1, (2,)), (1, (3,)), top]
        return [(1, (2,)), top]
    if p == 5:
        return [(1, (2,)), top] if q == 5 else [(1, (2,)), (2, (1, 2))]
    if p <= 10:
        return [(1, (2,))]
    return [(1, (2,)), (2, (1, 2))]


def _evaluate(params: GroupParams, kind: int, idx: tuple[int, ...], tol: Tolerances) -> LengthValue:
    out = l1(params, *idx, tol=tol) if kind == 1 else l2(params, *idx, tol=tol)
    if out is None:
        raise DomainError(f"{format_label(kind, idx, params.q)} is not hyperbolic for {params}")
    return out


def spectrum_begin(params, tol: Tolerances = DEFAULT) -> SpectrumPrefix:
    """Certified distinct lengths at the bottom of the spectrum.

    The last entry doubles as the certification cutoff.  Labels whose values
    coincide by a trigonometric identity are folded into one entry and kept
    as aliases; for ``p = 5`` this happens to ``l1(2)`` and ``l2(1,2)``.
    """
    params = _as_params(params)
    raw = [_evaluate(params, kind, idx, tol) for kind, idx in _row(params.p, params.q)]
    entries: list[LengthValue] = []
    for lv in raw:
        if entries and abs(lv.value - entries[-1].value) <= tol.value_merge:
            prev = entries[-1]
            entries[-1] = LengthValue(prev.label, prev.value, prev.cosh_half, prev.indices, prev.aliases + (lv.label,))
        else:
            entries.append(lv)
    last = raw[-1]
    return SpectrumPrefix(params, tuple(entries), entries[-1].value, last.label)


def merged_low_levels(params, cutoff: float, tol: Tolerances = DEFAULT) -> list[LengthValue]:
    """All level one and two lengths up to ``cutoff``, merged by value.

    Every label landing within ``tol.value_merge`` of an earlier value is kept
    as an alias of that entry.
    """
    params = _as_params(params)
    if not cutoff > 0:
        raise DomainError("cutoff must be positive")
    q = params.q
    found: list[LengthValue] = []
    for k in range(1, q):
        lv = l1(params, k, tol)
        if lv is not None and lv.value <= cutoff + tol.value_merge:
            found.append(lv)
    for k in range(1, q):
        for k2 in range(1, q):
            lv = l2(params, k, k2, tol)
            if lv is not None and lv.value <= cutoff + tol.value_merge:
                found.append(lv)
    found.sort(key=lambda lv: lv.value)
    merged: list[LengthValue] = []
    for lv in found:
        if merged and lv.value - merged[-1].value <= tol.value_merge:
            prev = merged[-1]
            merged[-1] = LengthValue(prev.label, prev.value, prev.cosh_half, prev.indices, prev.aliases + (lv.label,))
        else:
            merged.append(lv)
    return [_canonical(lv, q) for lv in merged]


def parse_label(label: str, q: int) -> tuple[int, tuple[int, ...]]:
    """Inverse of :func:`format_label`."""
    kind, rest = int(label[1]), label[3:-1]
    return kind, tuple(q - 1 if x == "q-1" else int(x) for x in rest.split(","))


def _canonical(lv: LengthValue, q: int) -> LengthValue:
    # primary label: lowest level, then smallest indices
    if not lv.aliases:
        return lv
    labels = sorted(lv.labels, key=lambda lab: parse_label(lab, q))
    _, idx = parse_label(labels[0], q)
    return LengthValue(labels[0], lv.value, lv.cosh_half, idx, tuple(labels[1:]))
