"""Forward-mode differentiation values used by the expression evaluators.

``Jet4`` carries a univariate function and its first four derivatives at a
point. It stores derivative *values* f, f', f'', f''', f''''; the composition
rules convert to Taylor coefficients internally (c_k = f^(k) / k!) and back.

``Grad3`` is a dual number with three tangents: the value plus the first
partials in s, t and q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Tuple, Union

from app.utils.errors import DomainError

ORDER = 4
_FACTORIALS = tuple(float(math.factorial(k)) for k in range(ORDER + 1))

Number = Union[int, float]


def _checked(values: Sequence[float], what: str) -> Tuple[float, ...]:
    out = tuple(float(v) for v in values)
    for v in out:
        if not math.isfinite(v):
            raise DomainError(f"{what} produced a non-finite value")
    return out


def _integer_exponent(p: float) -> int | None:
    if float(p).is_integer() and abs(p) <= 1 << 20:
        return int(p)
    return None


# ---------------------------------------------------------------------------
# Taylor coefficient recurrences (truncated at ORDER)
# ---------------------------------------------------------------------------
def _t_mul(a: Sequence[float], b: Sequence[float]) -> list[float]:
    return [sum(a[j] * b[k - j] for j in range(k + 1)) for k in range(ORDER + 1)]


def _t_div(a: Sequence[float], b: Sequence[float]) -> list[float]:
    if b[0] == 0.0:
        raise DomainError("division by zero")
    c: list[float] = []
    for k in range(ORDER + 1):
        acc = a[k] - sum(b[j] * c[k - j] for j in range(1, k + 1))
        c.append(acc / b[0])
    return c


def _t_exp(a: Sequence[float]) -> list[float]:
    try:
        e = [math.exp(a[0])]
    except OverflowError as exc:
        raise DomainError("exp overflow") from exc
    for k in range(1, ORDER + 1):
        e.append(sum(j * a[j] * e[k - j] for j in range(1, k + 1)) / k)
    return e


def _t_log(a: Sequence[float]) -> list[float]:
    if a[0] <= 0.0:
        raise DomainError(f"log of non-positive value {a[0]!r}")
    out = [math.log(a[0])]
    for k in range(1, ORDER + 1):
        acc = a[k] - sum(j * out[j] * a[k - j] for j in range(1, k)) / k
        out.append(acc / a[0])
    return out


def _t_sincos(a: Sequence[float]) -> tuple[list[float], list[float]]:
    s = [math.sin(a[0])]
    c = [math.cos(a[0])]
    for k in range(1, ORDER + 1):
        s.append(sum(j * a[j] * c[k - j] for j in range(1, k + 1)) / k)
        c.append(-sum(j * a[j] * s[k - j] for j in range(1, k + 1)) / k)
    return s, c


def _t_sqrt(a: Sequence[float]) -> list[float]:
    if a[0] < 0.0:
        raise DomainError(f"sqrt of negative value {a[0]!r}")
    if a[0] == 0.0:
        raise DomainError("sqrt is not differentiable at 0")
    r = [math.sqrt(a[0])]
    for k in range(1, ORDER + 1):
        acc = a[k] - sum(r[j] * r[k - j] for j in range(1, k))
        r.append(acc / (2.0 * r[0]))
    return r


def _t_pow_real(a: Sequence[float], p: float) -> list[float]:
    if a[0] < 0.0:
        raise DomainError(f"non-integer power {p!r} of negative value {a[0]!r}")
    if a[0] == 0.0:
        raise DomainError(f"non-integer power {p!r} is not differentiable at 0")
    y = [a[0] ** p]
    for k in range(1, ORDER + 1):
        acc = sum(((p + 1.0) * j - k) * a[j] * y[k - j] for j in range(1, k + 1))
        y.append(acc / (k * a[0]))
    return y


# ---------------------------------------------------------------------------
# Jet4
# ---------------------------------------------------------------------------
@dataclass(frozen=True, slots=True)
class Jet4:
    """Value and first four derivatives, stored as derivative values."""

    d: Tuple[float, float, float, float, float]

    def __post_init__(self) -> None:
        if len(self.d) != ORDER + 1:
            raise ValueError(f"Jet4 needs {ORDER + 1} entries, got {len(self.d)}")
        object.__setattr__(self, "d", _checked(self.d, "jet"))

    @classmethod
    def constant(cls, value: float) -> "Jet4":
        return cls((float(value), 0.0, 0.0, 0.0, 0.0))

    @classmethod
    def variable(cls, value: float) -> "Jet4":
        return cls((float(value), 1.0, 0.0, 0.0, 0.0))

    @classmethod
    def _from_taylor(cls, coeffs: Sequence[float]) -> "Jet4":
        return cls(tuple(c * f for c, f in zip(coeffs, _FACTORIALS)))

    def _taylor(self) -> list[float]:
        return [v / f for v, f in zip(self.d, _FACTORIALS)]

    @property
    def value(self) -> float:
        return self.d[0]

    def derivative(self, k: int) -> float:
        return self.d[k]

    @staticmethod
    def _lift(other: "Jet4 | Number") -> "Jet4":
        return other if isinstance(other, Jet4) else Jet4.constant(other)

    def __add__(self, other: "Jet4 | Number") -> "Jet4":
        o = Jet4._lift(other)
        return Jet4(tuple(a + b for a, b in zip(self.d, o.d)))

    __radd__ = __add__

    def __sub__(self, other: "Jet4 | Number") -> "Jet4":
        o = Jet4._lift(other)
        return Jet4(tuple(a - b for a, b in zip(self.d, o.d)))

    def __rsub__(self, other: Number) -> "Jet4":
        return Jet4._lift(other) - self

    def __neg__(self) -> "Jet4":
        return Jet4(tuple(-a for a in self.d))

    def __mul__(self, other: "Jet4 | Number") -> "Jet4":
        if not isinstance(other, Jet4):
            return Jet4(tuple(a * other for a in self.d))
        return Jet4._from_taylor(_t_mul(self._taylor(), other._taylor()))

    __rmul__ = __mul__

    def __truediv__(self, other: "Jet4 | Number") -> "Jet4":
        o = Jet4._lift(other)
        return Jet4._from_taylor(_t_div(self._taylor(), o._taylor()))

    def __rtruediv__(self, other: Number) -> "Jet4":
        return Jet4._lift(other) / self

    def power(self, p: float) -> "Jet4":
        n = _integer_exponent(p)
        if n is None:
            return Jet4._from_taylor(_t_pow_real(self._taylor(), p))
        if n < 0:
            return Jet4.constant(1.0) / self.power(-n)
        result = Jet4.constant(1.0)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def sin(self) -> "Jet4":
        s, _ = _t_sincos(self._taylor())
        return Jet4._from_taylor(s)

    def cos(self) -> "Jet4":
        _, c = _t_sincos(self._taylor())
        return Jet4._from_taylor(c)

    def tan(self) -> "Jet4":
        s, c = _t_sincos(self._taylor())
        if c[0] == 0.0:
            raise DomainError("tan pole")
        return Jet4._from_taylor(_t_div(s, c))

    def exp(self) -> "Jet4":
        return Jet4._from_taylor(_t_exp(self._taylor()))

    def log(self) -> "Jet4":
        return Jet4._from_taylor(_t_log(self._taylor()))

    def sqrt(self) -> "Jet4":
        return Jet4._from_taylor(_t_sqrt(self._taylor()))


# ---------------------------------------------------------------------------
# Grad3
# ---------------------------------------------------------------------------
@dataclass(frozen=True, slots=True)
class Grad3:
    value: float
    d_s: float = 0.0
    d_t: float = 0.0
    d_q: float = 0.0

    def __post_init__(self) -> None:
        v, ds, dt, dq = _checked((self.value, self.d_s, self.d_t, self.d_q), "gradient")
        object.__setattr__(self, "value", v)
        object.__setattr__(self, "d_s", ds)
        object.__setattr__(self, "d_t", dt)
        object.__setattr__(self, "d_q", dq)

    @classmethod
    def constant(cls, value: float) -> "Grad3":
        return cls(float(value))

    @property
    def partials(self) -> Tuple[float, float, float]:
        return (self.d_s, self.d_t, self.d_q)

    def _chain(self, value: float, slope: float) -> "Grad3":
        return Grad3(value, slope * self.d_s, slope * self.d_t, slope * self.d_q)

    @staticmethod
    def _lift(other: "Grad3 | Number") -> "Grad3":
        return other if isinstance(other, Grad3) else Grad3.constant(other)

    def __add__(self, other: "Grad3 | Number") -> "Grad3":
        o = Grad3._lift(other)
        return Grad3(self.value + o.value, self.d_s + o.d_s, self.d_t + o.d_t, self.d_q + o.d_q)

    __radd__ = __add__

    def __sub__(self, other: "Grad3 | Number") -> "Grad3":
        o = Grad3._lift(other)
        return Grad3(self.value - o.value, self.d_s - o.d_s, self.d_t - o.d_t, self.d_q - o.d_q)

    def __rsub__(self, other: Number) -> "Grad3":
        return Grad3._lift(other) - self

    def __neg__(self) -> "Grad3":
        return Grad3(-self.value, -self.d_s, -self.d_t, -self.d_q)

    def __mul__(self, other: "Grad3 | Number") -> "Grad3":
        o = Grad3._lift(other)
        a, b = self.value, o.value
        return Grad3(
            a * b,
            self.d_s * b + a * o.d_s,
            self.d_t * b + a * o.d_t,
            self.d_q * b + a * o.d_q,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: "Grad3 | Number") -> "Grad3":
        o = Grad3._lift(other)
        if o.value == 0.0:
            raise DomainError("division by zero")
        inv = 1.0 / o.value
        quotient = self.value * inv
        return Grad3(
            quotient,
            (self.d_s - quotient * o.d_s) * inv,
            (self.d_t - quotient * o.d_t) * inv,
            (self.d_q - quotient * o.d_q) * inv,
        )

    def __rtruediv__(self, other: Number) -> "Grad3":
        return Grad3._lift(other) / self

    def power(self, p: float) -> "Grad3":
        n = _integer_exponent(p)
        if n is not None:
            if n == 0:
                return Grad3.constant(1.0)
            if self.value == 0.0 and n < 0:
                raise DomainError("division by zero")
            try:
                return self._chain(self.value**n, n * self.value ** (n - 1))
            except OverflowError as exc:
                raise DomainError(f"power {n} overflows at {self.value!r}") from exc
        if self.value < 0.0:
            raise DomainError(f"non-integer power {p!r} of negative value {self.value!r}")
        if self.value == 0.0:
            if p > 1.0:
                return Grad3.constant(0.0)
            raise DomainError(f"power {p!r} is not differentiable at 0")
        try:
            return self._chain(self.value**p, p * self.value ** (p - 1.0))
        except OverflowError as exc:
            raise DomainError(f"power {p!r} overflows at {self.value!r}") from exc

    def sin(self) -> "Grad3":
        return self._chain(math.sin(self.value), math.cos(self.value))

    def cos(self) -> "Grad3":
        return self._chain(math.cos(self.value), -math.sin(self.value))

    def tan(self) -> "Grad3":
        c = math.cos(self.value)
        if c == 0.0:
            raise DomainError("tan pole")
        return self._chain(math.tan(self.value), 1.0 / (c * c))

    def exp(self) -> "Grad3":
        try:
            e = math.exp(self.value)
        except OverflowError as exc:
            raise DomainError("exp overflow") from exc
        return self._chain(e, e)

    def log(self) -> "Grad3":
        if self.value <= 0.0:
            raise DomainError(f"log of non-positive value {self.value!r}")
        return self._chain(math.log(self.value), 1.0 / self.value)

    def sqrt(self) -> "Grad3":
        if self.value < 0.0:
            raise DomainError(f"sqrt of negative value {self.value!r}")
        if self.value == 0.0:
            raise DomainError("sqrt is not differentiable at 0")
        r = math.sqrt(self.value)
        return self._chain(r, 0.5 / r)


UNARY: dict[str, Callable] = {
    "sin": lambda x: x.sin(),
    "cos": lambda x: x.cos(),
    "tan": lambda x: x.tan(),
    "exp": lambda x: x.exp(),
    "log": lambda x: x.log(),
    "sqrt": lambda x: x.sqrt(),
}
