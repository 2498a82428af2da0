"""Scalar expression language over the variables s, t and q.

Grammar (whitespace-insensitive)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | power
    power  := atom ('^' factor)?
    atom   := number | 'pi' | var | param | func '(' expr ')' | '(' expr ')'

``var`` is one of the variables declared for the expression (a subset of
s, t, q). ``param`` is a declared anchor parameter (``t0``, ``q0``) that is
substituted with :meth:`Expr.bind` before evaluation. The exponent of ``^``
may not depend on any variable. Names are resolved while parsing, so an
undeclared identifier is an error at parse time.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from app.utils.autodiff import UNARY, Grad3, Jet4
from app.utils.errors import DomainError, ExprSyntaxError, UnknownIdentifier

VARIABLES: Tuple[str, str, str] = ("s", "t", "q")
ANCHOR_PARAMETERS: Tuple[str, str] = ("t0", "q0")
FUNCTIONS: Tuple[str, ...] = ("sin", "cos", "tan", "exp", "log", "sqrt")
NAMED_CONSTANTS: Dict[str, float] = {"pi": math.pi}


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------
class Expr:
    """Base class of the immutable expression tree."""

    __slots__ = ()

    def children(self) -> Tuple["Expr", ...]:
        return ()

    @property
    def variables(self) -> FrozenSet[str]:
        names: set[str] = set()
        for node in self.walk():
            if isinstance(node, Var):
                names.add(node.name)
        return frozenset(names)

    @property
    def parameters(self) -> FrozenSet[str]:
        return frozenset(node.name for node in self.walk() if isinstance(node, Param))

    def walk(self) -> Iterable["Expr"]:
        stack: List[Expr] = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(node.children())

    def bind(self, values: Mapping[str, float]) -> "Expr":
        """Replace anchor parameters by constants; unknown names stay symbolic."""
        return _bind(self, values)

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True, slots=True)
class Const(Expr):
    value: float
    name: Optional[str] = None

    def __post_init__(self) -> None:
        value = float(self.value)
        if not math.isfinite(value):
            raise ValueError(f"constant must be finite, got {value!r}")
        object.__setattr__(self, "value", value)


@dataclass(frozen=True, slots=True)
class Var(Expr):
    name: str


@dataclass(frozen=True, slots=True)
class Param(Expr):
    name: str


@dataclass(frozen=True, slots=True)
class Neg(Expr):
    operand: Expr

    def children(self) -> Tuple[Expr, ...]:
        return (self.operand,)


@dataclass(frozen=True, slots=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr

    def children(self) -> Tuple[Expr, ...]:
        return (self.left, self.right)


@dataclass(frozen=True, slots=True)
class Call(Expr):
    func: str
    arg: Expr

    def children(self) -> Tuple[Expr, ...]:
        return (self.arg,)


def product(left: Expr, right: Expr) -> Expr:
    """left * right, folding the unit constant away."""
    if isinstance(left, Const) and left.value == 1.0 and left.name is None:
        return right
    if isinstance(right, Const) and right.value == 1.0 and right.name is None:
        return left
    return BinOp("*", left, right)


def _bind(node: Expr, values: Mapping[str, float]) -> Expr:
    if isinstance(node, Param):
        if node.name in values:
            return Const(values[node.name])
        return node
    if isinstance(node, Neg):
        return Neg(_bind(node.operand, values))
    if isinstance(node, BinOp):
        return BinOp(node.op, _bind(node.left, values), _bind(node.right, values))
    if isinstance(node, Call):
        return Call(node.func, _bind(node.arg, values))
    return node


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------
_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True, slots=True)
class Token:
    kind: str  # "number" | "name" | "op" | "end"
    text: str
    offset: int  # byte offset into the UTF-8 source


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    pos = 0
    byte_pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise ExprSyntaxError(
                f"unexpected character {text[pos]!r}",
                offset=byte_pos,
                expected="number, name, operator or parenthesis",
                text=text,
            )
        lexeme = match.group(0)
        if match.lastgroup != "ws":
            tokens.append(Token(match.lastgroup or "op", lexeme, byte_pos))
        pos = match.end()
        byte_pos += len(lexeme.encode("utf-8"))
    tokens.append(Token("end", "", byte_pos))
    return tokens


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------
class _Parser:
    def __init__(self, text: str, variables: Sequence[str], parameters: Sequence[str]) -> None:
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0
        self.variables = tuple(variables)
        self.parameters = tuple(parameters)

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def _fail(self, expected: str) -> ExprSyntaxError:
        token = self.current
        found = "end of input" if token.kind == "end" else repr(token.text)
        return ExprSyntaxError(f"unexpected {found}", offset=token.offset, expected=expected, text=self.text)

    def _expect(self, op: str) -> Token:
        if self.current.kind == "op" and self.current.text == op:
            return self._advance()
        raise self._fail(f'"{op}"')

    def _at(self, *ops: str) -> bool:
        return self.current.kind == "op" and self.current.text in ops

    def parse(self) -> Expr:
        node = self.expr()
        if self.current.kind != "end":
            raise self._fail("operator or end of input")
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self._at("+", "-"):
            op = self._advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self._at("*", "/"):
            op = self._advance().text
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Expr:
        if self._at("-"):
            self._advance()
            return Neg(self.factor())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self._at("^"):
            caret = self._advance()
            exponent = self.factor()
            if exponent.variables:
                raise ExprSyntaxError(
                    "exponent must not depend on " + ", ".join(sorted(exponent.variables)),
                    offset=caret.offset + 1,
                    expected="constant exponent",
                    text=self.text,
                )
            return BinOp("^", base, exponent)
        return base

    def atom(self) -> Expr:
        token = self.current
        if token.kind == "number":
            value = float(token.text)
            if not math.isfinite(value):
                raise ExprSyntaxError(
                    f"number {token.text!r} overflows", offset=token.offset, expected="finite number", text=self.text
                )
            self._advance()
            return Const(value)
        if token.kind == "name":
            return self._name()
        if self._at("("):
            self._advance()
            node = self.expr()
            self._expect(")")
            return node
        raise self._fail("number, name or '('")

    def _name(self) -> Expr:
        token = self._advance()
        name = token.text
        if name in FUNCTIONS:
            self._expect("(")
            arg = self.expr()
            self._expect(")")
            return Call(name, arg)
        if name in NAMED_CONSTANTS:
            return Const(NAMED_CONSTANTS[name], name)
        if name in self.variables:
            return Var(name)
        if name in self.parameters:
            return Param(name)
        allowed = list(self.variables) + list(self.parameters) + list(NAMED_CONSTANTS) + list(FUNCTIONS)
        raise UnknownIdentifier(name, offset=token.offset, text=self.text, allowed=allowed)


def parse(
    text: str,
    variables: Sequence[str] = VARIABLES,
    parameters: Sequence[str] = ANCHOR_PARAMETERS,
) -> Expr:
    """Parse ``text`` into an expression tree, resolving every name."""
    unknown = [v for v in variables if v not in VARIABLES]
    if unknown:
        raise ValueError(f"undeclarable variables: {unknown}")
    return _Parser(text, variables, parameters).parse()


def parse_constant(text: str | float | int) -> float:
    """Evaluate a variable-free expression such as ``"2*pi"``."""
    if isinstance(text, (int, float)):
        if not math.isfinite(text):
            raise DomainError(f"constant {text!r} is not finite")
        return float(text)
    return evaluate(parse(text, variables=(), parameters=()), 0.0, 0.0, 0.0)


# ---------------------------------------------------------------------------
# Printer
# ---------------------------------------------------------------------------
def to_text(node: Expr) -> str:
    """Canonical, fully parenthesised form; ``parse(to_text(e)) == e`` for parsed trees."""
    if isinstance(node, Const):
        if node.name is not None:
            return node.name
        if node.value < 0 or (node.value == 0.0 and math.copysign(1.0, node.value) < 0):
            return f"(-{-node.value!r})"
        return repr(node.value)
    if isinstance(node, (Var, Param)):
        return node.name
    if isinstance(node, Neg):
        return f"(-{to_text(node.operand)})"
    if isinstance(node, BinOp):
        return f"({to_text(node.left)} {node.op} {to_text(node.right)})"
    if isinstance(node, Call):
        return f"{node.func}({to_text(node.arg)})"
    raise TypeError(f"not an expression node: {node!r}")


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------
Value = Union[float, Jet4, Grad3]


def _float_call(name: str, x: float) -> float:
    try:
        if name == "log" and x <= 0.0:
            raise DomainError(f"log of non-positive value {x!r}")
        if name == "sqrt" and x < 0.0:
            raise DomainError(f"sqrt of negative value {x!r}")
        result = getattr(math, name)(x)
    except (OverflowError, ValueError) as exc:
        raise DomainError(f"{name}({x!r}) is undefined") from exc
    return result


def _float_power(base: float, exponent: float) -> float:
    if base == 0.0 and exponent < 0:
        raise DomainError("division by zero in power")
    if base < 0.0 and not float(exponent).is_integer():
        raise DomainError(f"non-integer power {exponent!r} of negative value {base!r}")
    try:
        return math.pow(base, exponent)
    except (OverflowError, ValueError) as exc:
        raise DomainError(f"{base!r}^{exponent!r} is undefined") from exc


def _evaluate(node: Expr, env: Mapping[str, Value], params: Mapping[str, float], lift: Callable[[float], Value]) -> Value:
    if isinstance(node, Const):
        return lift(node.value)
    if isinstance(node, Var):
        return env[node.name]
    if isinstance(node, Param):
        if node.name not in params:
            raise UnknownIdentifier(node.name, offset=0, allowed=sorted(params))
        return lift(params[node.name])
    if isinstance(node, Neg):
        return -_evaluate(node.operand, env, params, lift)
    if isinstance(node, BinOp):
        left = _evaluate(node.left, env, params, lift)
        if node.op == "^":
            exponent = _evaluate(node.right, _FLOAT_ENV, params, float)
            if isinstance(left, float):
                return _float_power(left, exponent)
            return left.power(exponent)
        right = _evaluate(node.right, env, params, lift)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        if node.op == "/":
            if isinstance(right, float):
                if right == 0.0:
                    raise DomainError("division by zero")
                return left / right
            return left / right
        raise ValueError(f"unknown operator {node.op!r}")
    if isinstance(node, Call):
        arg = _evaluate(node.arg, env, params, lift)
        if isinstance(arg, float):
            return _float_call(node.func, arg)
        return UNARY[node.func](arg)
    raise TypeError(f"not an expression node: {node!r}")


_FLOAT_ENV: Dict[str, float] = {}


def _finite(value: float) -> float:
    if not math.isfinite(value):
        raise DomainError("expression evaluated to a non-finite value")
    return value


def evaluate(e: Expr, s: float, t: float, q: float, params: Optional[Mapping[str, float]] = None) -> float:
    """Real value of ``e`` at (s, t, q)."""
    env = {"s": float(s), "t": float(t), "q": float(q)}
    return _finite(float(_evaluate(e, env, params or {}, float)))


# ``eval`` is the name the rest of the library documents; keep both spellings.
eval = evaluate  # noqa: A001


def eval_jet_s(e: Expr, s: float, t: float, q: float, params: Optional[Mapping[str, float]] = None) -> Jet4:
    """Value and first four s-derivatives of ``e``; t and q are held constant."""
    env: Dict[str, Value] = {
        "s": Jet4.variable(s),
        "t": Jet4.constant(t),
        "q": Jet4.constant(q),
    }
    return _as_jet(_evaluate(e, env, params or {}, Jet4.constant))


def eval_grad3(e: Expr, s: float, t: float, q: float, params: Optional[Mapping[str, float]] = None) -> Grad3:
    """Value and the three first partials of ``e`` in one forward pass."""
    env: Dict[str, Value] = {
        "s": Grad3(float(s), 1.0, 0.0, 0.0),
        "t": Grad3(float(t), 0.0, 1.0, 0.0),
        "q": Grad3(float(q), 0.0, 0.0, 1.0),
    }
    return _as_grad(_evaluate(e, env, params or {}, Grad3.constant))


def _as_jet(value: Value) -> Jet4:
    return value if isinstance(value, Jet4) else Jet4.constant(_finite(float(value)))


def _as_grad(value: Value) -> Grad3:
    return value if isinstance(value, Grad3) else Grad3.constant(_finite(float(value)))
