from __future__ import annotations

from typing import List, Optional, Sequence, Tuple


class IsogeoError(Exception):
    """Base class for every error raised by the library."""


class ExprSyntaxError(IsogeoError, ValueError):
    """Malformed expression text.

    ``offset`` is the byte offset into the UTF-8 encoded source where parsing
    stopped; ``expected`` describes what the parser wanted to see there.
    """

    def __init__(
        self,
        message: str,
        *,
        offset: int,
        expected: str = "",
        text: str = "",
        key_path: Optional[str] = None,
    ) -> None:
        self.message = message
        self.offset = offset
        self.expected = expected
        self.text = text
        self.key_path = key_path
        super().__init__(self._render())

    def _render(self) -> str:
        where = f"{self.key_path}: " if self.key_path else ""
        detail = f"{where}{self.message} at offset {self.offset}"
        if self.expected:
            detail += f" (expected {self.expected})"
        return detail

    def with_key_path(self, key_path: str) -> "ExprSyntaxError":
        clone = self.__class__.__new__(self.__class__)
        clone.__dict__.update(self.__dict__)
        clone.key_path = key_path
        Exception.__init__(clone, clone._render())
        return clone


class UnknownIdentifier(ExprSyntaxError):
    def __init__(self, name: str, *, offset: int, text: str = "", allowed: Sequence[str] = ()) -> None:
        self.name = name
        expected = ", ".join(allowed) if allowed else ""
        super().__init__(f"unknown identifier '{name}'", offset=offset, expected=expected, text=text)


class DomainError(IsogeoError, ArithmeticError):
    """Evaluation left the real domain (log/sqrt of a bad argument, division by zero, overflow)."""


class DegenerateFrame(IsogeoError, ArithmeticError):
    """The Frenet frame is undefined at the requested point."""

    def __init__(self, message: str, *, s: Optional[float] = None) -> None:
        self.s = s
        super().__init__(message)


class SingularTangentSpace(IsogeoError, ArithmeticError):
    """The partial derivatives of a hypersurface do not span a 3-space."""


class WrongVariant(IsogeoError, TypeError):
    """A marching scale of the wrong type was handed to a type-specific checker."""


class MarchingHypothesisError(IsogeoError, ValueError):
    """A hypothesis that a type-specific condition is stated under does not hold."""


class SchemaError(IsogeoError, ValueError):
    """A scene document does not match the schema. Carries ``(key_path, message)`` pairs."""

    def __init__(self, errors: Sequence[Tuple[str, str]]) -> None:
        self.errors: List[Tuple[str, str]] = list(errors)
        lines = [f"{path}: {message}" if path else message for path, message in self.errors]
        super().__init__("; ".join(lines) or "invalid scene")
