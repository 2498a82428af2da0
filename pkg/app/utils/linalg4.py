"""Vector algebra in R^4.

Vectors are immutable values; every operation returns a new one. The ternary
vector product is expanded by explicit cofactors so that its sign convention is
fixed: ``triple_product(e1, e2, e3) == -e4``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Tuple

import numpy as np

AXES: Tuple[str, str, str, str] = ("x", "y", "z", "w")


@dataclass(frozen=True, slots=True)
class Vec4:
    x1: float
    x2: float
    x3: float
    x4: float

    def __post_init__(self) -> None:
        for name in ("x1", "x2", "x3", "x4"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"Vec4.{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)

    @classmethod
    def of(cls, values: Iterable[float]) -> "Vec4":
        items = tuple(values)
        if len(items) != 4:
            raise ValueError(f"Vec4 needs 4 coordinates, got {len(items)}")
        return cls(*items)

    @classmethod
    def zero(cls) -> "Vec4":
        return cls(0.0, 0.0, 0.0, 0.0)

    @classmethod
    def basis(cls, index: int) -> "Vec4":
        """Standard basis vector e_index, 1-based."""
        if index not in (1, 2, 3, 4):
            raise ValueError(f"basis index must be 1..4, got {index}")
        coords = [0.0, 0.0, 0.0, 0.0]
        coords[index - 1] = 1.0
        return cls(*coords)

    def __iter__(self) -> Iterator[float]:
        yield self.x1
        yield self.x2
        yield self.x3
        yield self.x4

    def __add__(self, other: "Vec4") -> "Vec4":
        return Vec4(self.x1 + other.x1, self.x2 + other.x2, self.x3 + other.x3, self.x4 + other.x4)

    def __sub__(self, other: "Vec4") -> "Vec4":
        return Vec4(self.x1 - other.x1, self.x2 - other.x2, self.x3 - other.x3, self.x4 - other.x4)

    def __neg__(self) -> "Vec4":
        return Vec4(-self.x1, -self.x2, -self.x3, -self.x4)

    def __mul__(self, scalar: float) -> "Vec4":
        return Vec4(self.x1 * scalar, self.x2 * scalar, self.x3 * scalar, self.x4 * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar: float) -> "Vec4":
        if scalar == 0.0:
            raise ZeroDivisionError("Vec4 division by zero")
        return Vec4(self.x1 / scalar, self.x2 / scalar, self.x3 / scalar, self.x4 / scalar)

    def dot(self, other: "Vec4") -> float:
        return dot(self, other)

    def norm(self) -> float:
        return norm(self)

    def normalized(self) -> "Vec4":
        length = norm(self)
        if length == 0.0:
            raise ZeroDivisionError("cannot normalize the zero vector")
        return self / length

    def as_array(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.x3, self.x4], dtype=float)

    def max_abs(self) -> float:
        return max(abs(self.x1), abs(self.x2), abs(self.x3), abs(self.x4))


@dataclass(frozen=True, slots=True)
class Frame4:
    """Ordered 4-frame: tangent, principal normal, first binormal, second binormal."""

    t: Vec4
    n: Vec4
    b1: Vec4
    b2: Vec4

    @classmethod
    def identity(cls) -> "Frame4":
        return cls(Vec4.basis(1), Vec4.basis(2), Vec4.basis(3), Vec4.basis(4))

    def vectors(self) -> Tuple[Vec4, Vec4, Vec4, Vec4]:
        return (self.t, self.n, self.b1, self.b2)

    def combine(self, a: float, b: float, c: float, d: float) -> Vec4:
        """a*T + b*N + c*B1 + d*B2."""
        t, n, b1, b2 = self.t, self.n, self.b1, self.b2
        return Vec4(
            a * t.x1 + b * n.x1 + c * b1.x1 + d * b2.x1,
            a * t.x2 + b * n.x2 + c * b1.x2 + d * b2.x2,
            a * t.x3 + b * n.x3 + c * b1.x3 + d * b2.x3,
            a * t.x4 + b * n.x4 + c * b1.x4 + d * b2.x4,
        )

    def coordinates(self, v: Vec4) -> Tuple[float, float, float, float]:
        """Components of v along T, N, B1, B2."""
        return (dot(v, self.t), dot(v, self.n), dot(v, self.b1), dot(v, self.b2))


def dot(a: Vec4, b: Vec4) -> float:
    return a.x1 * b.x1 + a.x2 * b.x2 + a.x3 * b.x3 + a.x4 * b.x4


def norm(a: Vec4) -> float:
    return math.sqrt(dot(a, a))


def triple_product(u: Vec4, v: Vec4, w: Vec4) -> Vec4:
    """Vector product u x v x w in R^4.

    Formal determinant with the basis row e1..e4 on top and rows u, v, w below,
    expanded along the basis row. Each 3x3 cofactor is expanded along its w row
    using the 2x2 minors of (u, v), so swapping u and v negates the result
    bit-for-bit. Degenerate inputs give the zero vector.
    """
    p12 = u.x1 * v.x2 - u.x2 * v.x1
    p13 = u.x1 * v.x3 - u.x3 * v.x1
    p14 = u.x1 * v.x4 - u.x4 * v.x1
    p23 = u.x2 * v.x3 - u.x3 * v.x2
    p24 = u.x2 * v.x4 - u.x4 * v.x2
    p34 = u.x3 * v.x4 - u.x4 * v.x3

    c1 = w.x2 * p34 - w.x3 * p24 + w.x4 * p23
    c2 = w.x1 * p34 - w.x3 * p14 + w.x4 * p13
    c3 = w.x1 * p24 - w.x2 * p14 + w.x4 * p12
    c4 = w.x1 * p23 - w.x2 * p13 + w.x3 * p12
    return Vec4(c1, -c2, c3, -c4)


def gram_matrix(*vectors: Vec4) -> np.ndarray:
    rows = np.array([v.as_array() for v in vectors], dtype=float)
    return rows @ rows.T


def gram_norm_identity_check(u: Vec4, v: Vec4, w: Vec4) -> float:
    """||u x v x w||^2 - det Gram(u, v, w); zero in exact arithmetic."""
    product = triple_product(u, v, w)
    return dot(product, product) - float(np.linalg.det(gram_matrix(u, v, w)))


def frame_residual(f: Frame4) -> float:
    """Largest deviation of the frame's 10 inner products from the identity."""
    vectors = f.vectors()
    worst = 0.0
    for i in range(4):
        for j in range(i, 4):
            target = 1.0 if i == j else 0.0
            worst = max(worst, abs(dot(vectors[i], vectors[j]) - target))
    return worst


def is_orthonormal_frame(f: Frame4, tol: float = 1e-10) -> bool:
    if tol <= 0:
        raise ValueError("tol must be positive")
    return frame_residual(f) <= tol
