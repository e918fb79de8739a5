"""Upper half-plane geometry: points, isometries and their classification.

Isometries are stored as real 2x2 matrices scaled to determinant +-1 and
sign-normalised so that the first significant entry is positive; this picks
one representative of each element of PGL(2, R).  A determinant of -1
encodes an orientation-reversing map ``z -> (a conj(z) + b) / (c conj(z) + d)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import DomainError, PrecisionError

__all__ = [
    "HPoint",
    "Isometry",
    "IsometryClass",
    "hyp_distance",
    "apply",
    "classify",
    "translation_length",
    "rotation_about",
    "canonical_key",
    "fixed_point",
    "axis_distance",
    "I",
]

_UNDERFLOW = 1e-300


@dataclass(frozen=True)
class HPoint:
    re: float
    im: float

    def __post_init__(self):
        if not (self.im > 0.0) or not math.isfinite(self.re) or not math.isfinite(self.im):
            raise DomainError(f"point ({self.re!r}, {self.im!r}) is not in the upper half-plane")

    @classmethod
    def from_complex(cls, z: complex) -> "HPoint":
        return cls(float(z.real), float(z.imag))

    def __complex__(self) -> complex:
        return complex(self.re, self.im)


I = HPoint(0.0, 1.0)


class IsometryClass(str, Enum):
    IDENTITY = "identity"
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"
    REVERSING = "orientation-reversing"


@dataclass(frozen=True)
class Isometry:
    """Normalised 2x2 matrix; build through :meth:`from_matrix`."""

    a: float
    b: float
    c: float
    d: float
    det_sign: int = 1

    @classmethod
    def from_matrix(cls, m, tol: Tolerances = DEFAULT) -> "Isometry":
        a, b, c, d = (float(x) for x in np.asarray(m, dtype=float).reshape(4))
        det = a * d - b * c
        if not math.isfinite(det) or abs(det) < 1e-300:
            raise DomainError("matrix is singular")
        s = 1.0 / math.sqrt(abs(det))
        entries = [a * s, b * s, c * s, d * s]
        for x in entries:
            if abs(x) > tol.sign:
                if x < 0.0:
                    entries = [-y for y in entries]
                break
        return cls(*entries, det_sign=1 if det > 0 else -1)

    @classmethod
    def identity(cls) -> "Isometry":
        return cls(1.0, 0.0, 0.0, 1.0)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])

    @property
    def trace(self) -> float:
        return self.a + self.d

    def __matmul__(self, other: "Isometry") -> "Isometry":
        if not isinstance(other, Isometry):
            return NotImplemented
        return Isometry.from_matrix(self.matrix @ other.matrix)

    def inverse(self) -> "Isometry":
        # adjugate; the determinant is already +-1
        return Isometry.from_matrix([[self.d, -self.b], [-self.c, self.a]])

    def __pow__(self, n: int) -> "Isometry":
        base = self if n >= 0 else self.inverse()
        out = Isometry.identity()
        for _ in range(abs(n)):
            out = out @ base
        return out

    def projective_residual(self, other: "Isometry") -> float:
        """Largest entry difference between the two matrices up to sign."""
        m, n = self.matrix, other.matrix
        return float(min(np.max(np.abs(m - n)), np.max(np.abs(m + n))))


def hyp_distance(x: HPoint, y: HPoint) -> float:
    """Hyperbolic distance; ``cosh d = 1 + |x - y|^2 / (2 Im x Im y)``.

    Evaluated through the equivalent ``2 asinh(|x - y| / (2 sqrt(Im x Im y)))``,
    which keeps full relative accuracy for nearby points.
    """
    for pt in (x, y):
        if not pt.im > 0.0:
            raise DomainError("boundary point")
    chord = abs(complex(x) - complex(y))
    return 2.0 * math.asinh(chord / (2.0 * math.sqrt(x.im * y.im)))


def apply(m: Isometry, x: HPoint) -> HPoint:
    z = complex(x)
    if m.det_sign < 0:
        z = z.conjugate()
    den = m.c * z + m.d
    w = (m.a * z + m.b) / den
    if not w.imag > _UNDERFLOW:
        raise PrecisionError(f"image {w!r} fell to the boundary numerically")
    return HPoint(w.real, w.imag)


def _is_identity(m: Isometry, tol: Tolerances) -> bool:
    return m.det_sign > 0 and max(abs(m.a - 1.0), abs(m.b), abs(m.c), abs(m.d - 1.0)) <= tol.classify


def classify(m: Isometry, tol: Tolerances = DEFAULT) -> IsometryClass:
    if m.det_sign < 0:
        return IsometryClass.REVERSING
    if _is_identity(m, tol):
        return IsometryClass.IDENTITY
    t = abs(m.trace)
    if t > 2.0 + tol.classify:
        return IsometryClass.HYPERBOLIC
    if t < 2.0 - tol.classify:
        return IsometryClass.ELLIPTIC
    return IsometryClass.PARABOLIC


def translation_length(m: Isometry, tol: Tolerances = DEFAULT) -> float:
    kind = classify(m, tol)
    if kind is not IsometryClass.HYPERBOLIC:
        raise DomainError(f"translation length needs a hyperbolic element, got {kind.value}")
    return 2.0 * math.acosh(abs(m.trace) / 2.0)


def rotation_about(center: HPoint, angle: float) -> Isometry:
    """Counterclockwise rotation by ``angle`` radians about ``center``."""
    if not -2.0 * math.pi < angle < 2.0 * math.pi:
        raise DomainError(f"rotation angle {angle!r} outside (-2pi, 2pi)")
    c, s = math.cos(angle / 2.0), math.sin(angle / 2.0)
    x, y = center.re, center.im
    r = math.sqrt(y)
    # conjugate the rotation about i by z -> y z + x
    t = np.array([[r, x / r], [0.0, 1.0 / r]])
    t_inv = np.array([[1.0 / r, -x / r], [0.0, r]])
    return Isometry.from_matrix(t @ np.array([[c, s], [-s, c]]) @ t_inv)


def canonical_key(m: Isometry, grid: float = DEFAULT.dedupe_grid) -> tuple[int, int, int, int]:
    """Quantise the normalised entries to multiples of ``grid``."""
    return tuple(int(round(x / grid)) for x in (m.a, m.b, m.c, m.d))


def fixed_point(m: Isometry, tol: Tolerances = DEFAULT) -> HPoint:
    """Interior fixed point of an elliptic element."""
    if classify(m, tol) is not IsometryClass.ELLIPTIC:
        raise DomainError("only elliptic elements fix an interior point")
    # c z^2 + (d - a) z - b = 0, root with positive imaginary part
    disc = cmath.sqrt(complex((m.d - m.a) ** 2 + 4.0 * m.b * m.c))
    if abs(m.c) < 1e-300:
        raise DomainError("degenerate elliptic matrix")
    z1 = (m.a - m.d + disc) / (2.0 * m.c)
    z2 = (m.a - m.d - disc) / (2.0 * m.c)
    return HPoint.from_complex(z1 if z1.imag > 0 else z2)


def axis_distance(m: Isometry, x: HPoint, tol: Tolerances = DEFAULT) -> float:
    """Distance from ``x`` to the axis of a hyperbolic element.

    Uses ``cosh d(x, Mx) = cosh^2(r) (cosh l - 1) + 1`` with ``r`` the
    distance from ``x`` to the axis and ``l`` the translation length.
    """
    length = translation_length(m, tol)
    disp = hyp_distance(x, apply(m, x))
    # ratio of sinh^2 halves avoids cancellation in cosh - 1
    ratio = math.sinh(disp / 2.0) / math.sinh(length / 2.0)
    return math.acosh(max(ratio, 1.0))
