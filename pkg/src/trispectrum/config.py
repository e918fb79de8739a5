"""Central tolerance record.

Every comparison threshold used by the library lives here so that a run can
be reproduced (and overridden from the command line) in one place.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields, replace
from typing import Mapping

__all__ = ["Tolerances", "DEFAULT"]


@dataclass(frozen=True)
class Tolerances:
    classify: float = 1e-9
    sign: float = 1e-12
    dedupe_grid: float = 1e-9
    # fraction of a grid cell; residuals closer than this to a cell edge are
    # probed on both sides
    dedupe_band: float = 1e-6
    relation: float = 1e-8
    length_merge: float = 1e-9
    value_merge: float = 1e-10
    vertex_merge: float = 1e-8
    vertex_ambiguity: float = 1e-6
    systole_equal: float = 1e-12
    distinct_margin: float = 1e-6

    def with_overrides(self, overrides: Mapping[str, float]) -> "Tolerances":
        """Return a copy with some fields replaced.

        Overrides must name existing fields and lie in the open interval
        (0, 1e-3); anything looser would swamp the smallest spectral gaps.
        """
        known = {f.name for f in fields(self)}
        clean = {}
        for name, value in overrides.items():
            if name not in known:
                raise KeyError(f"unknown tolerance {name!r}; expected one of {sorted(known)}")
            value = float(value)
            if not 0.0 < value < 1e-3:
                raise ValueError(f"tolerance {name}={value!r} outside (0, 1e-3)")
            clean[name] = value
        return replace(self, **clean)

    def as_dict(self) -> dict:
        return asdict(self)


DEFAULT = Tolerances()
