"""Arithmetic expressions in the single variable ``t``.

Grammar, loosest binding first::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := ('-' | '+') unary | power
    power   := primary ('^' unary)?          # right associative
    primary := NUMBER | 't' | 'pi' | 'e' | NAME '(' args ')' | '(' expr ')'

so ``-t^2`` is ``-(t^2)`` and ``2^-1`` is ``0.5``. Positions are byte
offsets into the UTF-8 source. Expressions evaluate on floats or numpy
arrays and can be differentiated symbolically.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from ..core import RealFn
from ..errors import DomainError

Number = Union[float, np.ndarray]


class ParseError(DomainError):
    """Syntax error or unknown identifier at byte offset ``pos``."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at offset {pos}")
        self.pos = pos


class EvalError(DomainError):
    """Domain violation while evaluating the node that starts at ``pos``."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (expression offset {pos})")
        self.pos = pos


# -- AST --------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: float
    pos: int = 0

    def __str__(self):
        v = self.value
        return str(int(v)) if v == int(v) and abs(v) < 1e15 else repr(v)


@dataclass(frozen=True)
class Var:
    pos: int = 0

    def __str__(self):
        return "t"


@dataclass(frozen=True)
class Const:
    name: str
    pos: int = 0

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Neg:
    operand: "Expr"
    pos: int = 0

    def __str__(self):
        return f"Neg({self.operand})"


_BIN_NAMES = {"+": "Add", "-": "Sub", "*": "Mul", "/": "Div", "^": "Pow"}


@dataclass(frozen=True)
class Bin:
    op: str
    left: "Expr"
    right: "Expr"
    pos: int = 0

    def __str__(self):
        return f"{_BIN_NAMES[self.op]}({self.left}, {self.right})"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple
    pos: int = 0

    def __str__(self):
        return f"{self.name}({', '.join(str(a) for a in self.args)})"


Expr = Union[Num, Var, Const, Neg, Bin, Call]

CONSTANTS = {"pi": math.pi, "e": math.e}
#: name -> arity
FUNCTIONS = {
    "sin": 1, "cos": 1, "exp": 1, "ln": 1, "sqrt": 1, "abs": 1, "pow": 2,
    "fexp": 3, "fsin": 3, "fcos": 3,
}


# -- parsing ----------------------------------------------------------------

_TOKEN = re.compile(rb"""
    (?P<ws>[ \t\r\n]+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
""", re.VERBOSE)


def _tokenize(src: bytes):
    pos, out = 0, []
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            shown = chr(src[pos]) if src[pos] < 128 else f"byte 0x{src[pos]:02x}"
            raise ParseError(f"unexpected character {shown!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group().decode("ascii"), pos))
        pos = m.end()
    out.append(("end", "", len(src)))
    return out


class _Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    @property
    def cur(self):
        return self.toks[self.i]

    def advance(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, text):
        kind, val, pos = self.cur
        if val != text or kind != "op":
            found = "end of input" if kind == "end" else repr(val)
            raise ParseError(f"expected {text!r}, found {found}", pos)
        return self.advance()

    def expr(self):
        left = self.term()
        while self.cur[0] == "op" and self.cur[1] in "+-":
            _, op, pos = self.advance()
            left = Bin(op, left, self.term(), pos)
        return left

    def term(self):
        left = self.unary()
        while self.cur[0] == "op" and self.cur[1] in "*/":
            _, op, pos = self.advance()
            left = Bin(op, left, self.unary(), pos)
        return left

    def unary(self):
        kind, val, pos = self.cur
        if kind == "op" and val in "+-":
            self.advance()
            operand = self.unary()
            return Neg(operand, pos) if val == "-" else operand
        return self.power()

    def power(self):
        base = self.primary()
        if self.cur[0] == "op" and self.cur[1] == "^":
            _, _, pos = self.advance()
            return Bin("^", base, self.unary(), pos)
        return base

    def primary(self):
        kind, val, pos = self.advance()
        if kind == "num":
            return Num(float(val), pos)
        if kind == "name":
            if val == "t":
                return Var(pos)
            if val in CONSTANTS:
                return Const(val, pos)
            if val not in FUNCTIONS:
                raise ParseError(f"unknown identifier {val!r}", pos)
            self.expect("(")
            args = [self.expr()]
            while self.cur[0] == "op" and self.cur[1] == ",":
                self.advance()
                args.append(self.expr())
            self.expect(")")
            if len(args) != FUNCTIONS[val]:
                raise ParseError(
                    f"{val} takes {FUNCTIONS[val]} argument(s), got {len(args)}", pos)
            return Call(val, tuple(args), pos)
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        found = "end of input" if kind == "end" else repr(val)
        raise ParseError(f"unexpected {found}", pos)


def parse_expr(src: Union[str, bytes]) -> Expr:
    """Parse ``src`` into an expression tree; raises :class:`ParseError`."""
    if isinstance(src, str):
        src = src.encode("utf-8", errors="surrogatepass")
    p = _Parser(_tokenize(bytes(src)))
    tree = p.expr()
    if p.cur[0] != "end":
        raise ParseError(f"unexpected {p.cur[1]!r}", p.cur[2])
    return tree


# -- evaluation -------------------------------------------------------------

def _is_t_free(e: Expr) -> bool:
    if isinstance(e, Var):
        return False
    if isinstance(e, Neg):
        return _is_t_free(e.operand)
    if isinstance(e, Bin):
        return _is_t_free(e.left) and _is_t_free(e.right)
    if isinstance(e, Call):
        return all(_is_t_free(a) for a in e.args) and e.name not in ("fexp", "fsin", "fcos")
    return True


def _scaled(e: Call, t, pos):
    """``(t - base)^alpha / alpha`` for the fractional builtins."""
    alpha = _scalar_arg(e.args[1], t, "alpha")
    base = _scalar_arg(e.args[2], t, "base")
    if not alpha > 0:
        raise EvalError(f"{e.name} needs alpha > 0, got {alpha}", pos)
    d = np.asarray(t - base, dtype=float)
    if np.any(d < 0):
        raise EvalError(f"{e.name} is defined for t >= base = {base}", pos)
    return d ** alpha / alpha


def _scalar_arg(e: Expr, t, what):
    v = np.asarray(_eval(e, t), dtype=float)
    if v.ndim and np.ptp(v) != 0:
        raise EvalError(f"{what} argument must not depend on t", e.pos)
    return float(v.flat[0]) if v.ndim else float(v)


def _power(x, y, pos):
    xa, ya = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if np.any((xa == 0) & (ya < 0)):
        raise EvalError("zero raised to a negative power", pos)
    if np.any((xa < 0) & (ya != np.round(ya))):
        raise EvalError("negative base with a non-integer exponent", pos)
    with np.errstate(over="ignore"):
        return np.power(xa, ya)


def _eval(e: Expr, t):
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        return t
    if isinstance(e, Const):
        return CONSTANTS[e.name]
    if isinstance(e, Neg):
        return -_eval(e.operand, t)
    if isinstance(e, Bin):
        x, y = _eval(e.left, t), _eval(e.right, t)
        if e.op == "+":
            return x + y
        if e.op == "-":
            return x - y
        if e.op == "*":
            return x * y
        if e.op == "/":
            if np.any(np.asarray(y) == 0):
                raise EvalError("division by zero", e.pos)
            return np.asarray(x, dtype=float) / y
        return _power(x, y, e.pos)
    # calls
    name, pos = e.name, e.pos
    if name in ("fexp", "fsin", "fcos"):
        lam = _scalar_arg(e.args[0], t, "lambda")
        u = lam * _scaled(e, t, pos)
        return {"fexp": np.exp, "fsin": np.sin, "fcos": np.cos}[name](u)
    args = [np.asarray(_eval(a, t), dtype=float) for a in e.args]
    if name == "pow":
        return _power(args[0], args[1], pos)
    x = args[0]
    if name == "ln":
        if np.any(x <= 0):
            raise EvalError("logarithm of a nonpositive number", pos)
        return np.log(x)
    if name == "sqrt":
        if np.any(x < 0):
            raise EvalError("square root of a negative number", pos)
        return np.sqrt(x)
    with np.errstate(over="ignore"):
        return {"sin": np.sin, "cos": np.cos, "exp": np.exp, "abs": np.abs}[name](x)


def eval_expr(e: Expr, t: Number) -> Number:
    """Value of ``e`` at ``t`` (a float or an array of floats).

    Raises :class:`EvalError` on domain violations and on non-finite results.
    """
    scalar = np.ndim(t) == 0
    ta = np.asarray(t, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        v = np.asarray(_eval(e, ta), dtype=float)
    v = np.broadcast_to(v, ta.shape) if v.shape != ta.shape else v
    if not np.all(np.isfinite(v)):
        raise EvalError("expression value is not finite", e.pos)
    return float(v) if scalar else np.array(v)


# -- symbolic derivative ----------------------------------------------------

def _zero(e):
    return isinstance(e, Num) and e.value == 0.0


def _one(e):
    return isinstance(e, Num) and e.value == 1.0


def _add(a, b, pos):
    if _zero(a):
        return b
    if _zero(b):
        return a
    return Bin("+", a, b, pos)


def _mul(a, b, pos):
    if _zero(a) or _zero(b):
        return Num(0.0, pos)
    if _one(a):
        return b
    if _one(b):
        return a
    return Bin("*", a, b, pos)


def differentiate(e: Expr) -> Expr:
    """Classical derivative ``d e / d t`` as a new tree.

    Raises :class:`DomainError` when an argument that must be constant
    (fractional builtins' ``lambda``, ``alpha``, ``base``) involves ``t``.
    """
    p = getattr(e, "pos", 0)
    if isinstance(e, (Num, Const)):
        return Num(0.0, p)
    if isinstance(e, Var):
        return Num(1.0, p)
    if isinstance(e, Neg):
        d = differentiate(e.operand)
        return Num(0.0, p) if _zero(d) else Neg(d, p)
    if isinstance(e, Bin):
        dl, dr = differentiate(e.left), differentiate(e.right)
        if e.op in "+-":
            if _zero(dr):
                return dl
            return Bin(e.op, dl, dr, p) if not _zero(dl) else (dr if e.op == "+" else Neg(dr, p))
        if e.op == "*":
            return _add(_mul(dl, e.right, p), _mul(e.left, dr, p), p)
        if e.op == "/":
            num = Bin("-", _mul(dl, e.right, p), _mul(e.left, dr, p), p)
            return Bin("/", num, Bin("^", e.right, Num(2.0, p), p), p)
        return _diff_pow(e.left, e.right, dl, dr, p)
    # calls
    a0 = e.args[0]
    if e.name == "pow":
        return _diff_pow(a0, e.args[1], differentiate(a0), differentiate(e.args[1]), p)
    if e.name in ("fexp", "fsin", "fcos"):
        if not all(_is_t_free(a) for a in e.args):
            raise DomainError(f"{e.name} arguments must be free of t to differentiate")
        lam, alpha, base = e.args
        # d/dt g(lam u) = lam (t-base)^(alpha-1) g'(lam u)
        inner = _mul(lam, Bin("^", Bin("-", Var(p), base, p), Bin("-", alpha, Num(1.0, p), p), p), p)
        outer = {"fexp": e, "fsin": Call("fcos", e.args, p),
                 "fcos": Neg(Call("fsin", e.args, p), p)}[e.name]
        return _mul(inner, outer, p)
    da = differentiate(a0)
    if _zero(da):
        return Num(0.0, p)
    if e.name == "sin":
        outer = Call("cos", (a0,), p)
    elif e.name == "cos":
        outer = Neg(Call("sin", (a0,), p), p)
    elif e.name == "exp":
        outer = e
    elif e.name == "ln":
        outer = Bin("/", Num(1.0, p), a0, p)
    elif e.name == "sqrt":
        outer = Bin("/", Num(0.5, p), e, p)
    else:  # abs
        outer = Bin("/", a0, e, p)
    return _mul(outer, da, p)


def _diff_pow(base, expo, db, de, p):
    if _zero(de):
        if _zero(db):
            return Num(0.0, p)
        # n u^(n-1) u'
        lowered = Bin("^", base, Bin("-", expo, Num(1.0, p), p), p)
        if isinstance(expo, Num):
            if expo.value == 1.0:
                return db
            lowered = base if expo.value == 2.0 else Bin("^", base, Num(expo.value - 1.0, p), p)
        return _mul(_mul(expo, lowered, p), db, p)
    # u^v (v' ln u + v u'/u)
    whole = Bin("^", base, expo, p)
    term = _mul(de, Call("ln", (base,), p), p)
    if not _zero(db):
        term = _add(term, Bin("/", _mul(expo, db, p), base, p), p)
    return _mul(whole, term, p)


def to_realfn(e: Expr, hooks: int = 3) -> RealFn:
    """Wrap an expression as a vectorised :class:`RealFn` with derivative hooks.

    Up to ``hooks`` classical derivatives are attached when symbolic
    differentiation succeeds; otherwise the function carries none and declares
    smoothness 2 so numeric differencing stays available.
    """
    derivs = []
    cur = e
    try:
        for _ in range(hooks):
            cur = differentiate(cur)
            derivs.append(cur)
    except DomainError:
        derivs = []
    fns = tuple((lambda t, d=d: eval_expr(d, t)) for d in derivs)
    return RealFn(lambda t: eval_expr(e, t), smoothness=max(len(fns), 2),
                  exact_derivs=fns, vectorized=True)


def compile_expr(src: Union[str, bytes], hooks: int = 3) -> RealFn:
    """Parse and wrap in one step."""
    return to_realfn(parse_expr(src), hooks)
