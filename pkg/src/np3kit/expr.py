r"""Symbolic scalar expressions in three coordinates plus named parameters.

This is a deliberately small expression language: enough to write frame
components such as ``exp(2*x3)`` or ``1/x3 + x3^2/2``, differentiate them
exactly, and evaluate them fast at many points.  There is no equation
solving and no trig rewriting; downstream correctness checks are numeric,
so aggressive simplification buys nothing.

Grammar accepted by :func:`parse` (binary operators with the usual
precedence, ``^`` binds tightest and associates right)::

    expr    := term (('+' | '-') term)*
    term    := factor (('*' | '/') factor)*
    factor  := '-' factor | power
    power   := atom ('^' factor)?
    atom    := NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')'

``x1``, ``x2``, ``x3`` are the coordinates (documents may declare aliases);
``sin cos tan exp log sqrt`` are the known functions; any other bare
identifier is a parameter, bound at evaluation time.

Construction goes through the smart constructors (:func:`add`, :func:`mul`,
...), which fold constants and apply the 0/1 identities.  In particular a
symbolic zero annihilates products outright, even when the other factor is
singular somewhere; every downstream evaluation is restricted to a
manifold's domain, where both sides agree.

Exponents: an integer exponent differentiates by the power rule (the
collected form of differentiating the repeated product), a non-integer
exponent via ``a^b = exp(b*log(a))``.

Expressions are immutable, hashable and freely shared.  All construction
paths intern nodes (hash-consing), so structurally equal subterms are the
*same* object; repeated differentiation then produces compact DAGs, and
the evaluators memoize on node identity so each distinct subterm is
computed once per point set.  The caches only ever deduplicate work; under
concurrent use they may recompute, never corrupt.
"""

from __future__ import annotations

import math
import weakref
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Expr", "Const", "Coord", "Param", "Unary", "Binary",
    "ParseError", "DomainError", "UnboundParameter",
    "add", "sub", "mul", "div", "power", "neg", "func",
    "sin", "cos", "tan", "exp", "log", "sqrt",
    "const", "coord", "param", "as_expr",
    "parse", "unparse", "differentiate", "evaluate", "evaluate_many",
    "eval_batch", "simplify", "parameters_of",
]

FUNCTIONS = ("neg", "sin", "cos", "tan", "exp", "log", "sqrt")
BINOPS = ("add", "sub", "mul", "div", "pow")


class DomainError(ArithmeticError):
    """Evaluation hit a singularity (division by zero, log<=0, sqrt<0, ...)."""


class UnboundParameter(KeyError):
    """Expression references a parameter that was not supplied."""


@dataclass(frozen=True)
class ParseError(Exception):
    offset: int
    message: str
    expected: str = ""

    def __str__(self):
        hint = f" (expected {self.expected})" if self.expected else ""
        return f"parse error at offset {self.offset}: {self.message}{hint}"


class Expr:
    """Base class for AST nodes. Use the smart constructors, not subclasses."""

    __slots__ = ()

    def __add__(self, other):
        return add(self, other)

    def __radd__(self, other):
        return add(other, self)

    def __sub__(self, other):
        return sub(self, other)

    def __rsub__(self, other):
        return sub(other, self)

    def __mul__(self, other):
        return mul(self, other)

    def __rmul__(self, other):
        return mul(other, self)

    def __truediv__(self, other):
        return div(self, other)

    def __rtruediv__(self, other):
        return div(other, self)

    def __pow__(self, other):
        return power(self, other)

    def __neg__(self):
        return neg(self)

    def __repr__(self):
        return f"<Expr {unparse(self)!r}>"


@dataclass(frozen=True, repr=False)
class Const(Expr):
    value: float


@dataclass(frozen=True, repr=False)
class Coord(Expr):
    index: int  # 1..3


@dataclass(frozen=True, repr=False)
class Param(Expr):
    name: str


@dataclass(frozen=True, repr=False)
class Unary(Expr):
    op: str
    arg: Expr


@dataclass(frozen=True, repr=False)
class Binary(Expr):
    op: str
    left: Expr
    right: Expr


# --------------------------------------------------------------------------
# interning: one object per distinct structure

_INTERN: dict = {}


def _mk_const(v: float) -> Const:
    key = ("C", v)
    node = _INTERN.get(key)
    if node is None:
        node = _INTERN[key] = Const(v)
    return node


def _mk_coord(i: int) -> Coord:
    key = ("X", i)
    node = _INTERN.get(key)
    if node is None:
        node = _INTERN[key] = Coord(i)
    return node


def _mk_param(name: str) -> Param:
    key = ("P", name)
    node = _INTERN.get(key)
    if node is None:
        node = _INTERN[key] = Param(name)
    return node


def _mk_unary(op: str, arg: Expr) -> Unary:
    key = (op, id(arg))
    node = _INTERN.get(key)
    if node is None:
        node = _INTERN[key] = Unary(op, arg)
    return node


def _mk_binary(op: str, left: Expr, right: Expr) -> Binary:
    key = (op, id(left), id(right))
    node = _INTERN.get(key)
    if node is None:
        node = _INTERN[key] = Binary(op, left, right)
    return node


_ZERO = _mk_const(0.0)
_ONE = _mk_const(1.0)


def const(v) -> Const:
    return _mk_const(float(v))


def coord(i: int) -> Coord:
    if i not in (1, 2, 3):
        raise ValueError(f"coordinate index must be 1..3, got {i}")
    return _mk_coord(i)


def param(name: str) -> Param:
    return _mk_param(name)


def as_expr(v) -> Expr:
    if isinstance(v, Expr):
        return v
    if isinstance(v, (int, float)):
        return _mk_const(float(v))
    raise TypeError(f"cannot coerce {type(v).__name__} to Expr")


def _is_const(e: Expr, v=None) -> bool:
    return isinstance(e, Const) and (v is None or e.value == v)


def add(a, b) -> Expr:
    a, b = as_expr(a), as_expr(b)
    if isinstance(a, Const) and isinstance(b, Const):
        return _mk_const(a.value + b.value)
    if _is_const(a, 0.0):
        return b
    if _is_const(b, 0.0):
        return a
    return _mk_binary("add", a, b)


def sub(a, b) -> Expr:
    a, b = as_expr(a), as_expr(b)
    if isinstance(a, Const) and isinstance(b, Const):
        return _mk_const(a.value - b.value)
    if _is_const(b, 0.0):
        return a
    if _is_const(a, 0.0):
        return neg(b)
    return _mk_binary("sub", a, b)


def mul(a, b) -> Expr:
    a, b = as_expr(a), as_expr(b)
    if isinstance(a, Const) and isinstance(b, Const):
        return _mk_const(a.value * b.value)
    if _is_const(a, 0.0) or _is_const(b, 0.0):
        return _ZERO  # symbolic zero annihilates, by convention
    if _is_const(a, 1.0):
        return b
    if _is_const(b, 1.0):
        return a
    if _is_const(a, -1.0):
        return neg(b)
    if _is_const(b, -1.0):
        return neg(a)
    return _mk_binary("mul", a, b)


def div(a, b) -> Expr:
    a, b = as_expr(a), as_expr(b)
    if isinstance(a, Const) and isinstance(b, Const) and b.value != 0.0:
        return _mk_const(a.value / b.value)
    if _is_const(a, 0.0):
        return _ZERO
    if _is_const(b, 1.0):
        return a
    return _mk_binary("div", a, b)


def power(a, b) -> Expr:
    a, b = as_expr(a), as_expr(b)
    if _is_const(b, 1.0):
        return a
    if _is_const(b, 0.0):
        return _ONE
    if isinstance(a, Const) and isinstance(b, Const):
        try:
            v = math.pow(a.value, b.value)
        except (ValueError, OverflowError):
            return _mk_binary("pow", a, b)
        return _mk_const(v)
    return _mk_binary("pow", a, b)


def neg(a) -> Expr:
    a = as_expr(a)
    if isinstance(a, Const):
        return _mk_const(-a.value)
    if isinstance(a, Unary) and a.op == "neg":
        return a.arg
    return _mk_unary("neg", a)


def func(name: str, arg) -> Expr:
    if name not in FUNCTIONS:
        raise ValueError(f"unknown function {name!r}")
    if name == "neg":
        return neg(arg)
    arg = as_expr(arg)
    if isinstance(arg, Const):
        try:
            return _mk_const(getattr(math, name)(arg.value))
        except (ValueError, OverflowError):
            pass  # e.g. log(-1) or exp(huge): keep symbolic
    return _mk_unary(name, arg)


def sin(a) -> Expr:
    return func("sin", a)


def cos(a) -> Expr:
    return func("cos", a)


def tan(a) -> Expr:
    return func("tan", a)


def exp(a) -> Expr:
    return func("exp", a)


def log(a) -> Expr:
    return func("log", a)


def sqrt(a) -> Expr:
    return func("sqrt", a)


# --------------------------------------------------------------------------
# differentiation

# derivative cache across calls: the geometry pipeline differentiates many
# expressions sharing the same subterms.  Keys pin their node so ids stay valid.
_DIFF_CACHE: dict = {}


def differentiate(f: Expr, coord_index: int) -> Expr:
    """Exact symbolic d f / d x_i for i in {1,2,3}.

    Iterative post-order walk: derived curvature expressions form deep DAGs
    and must not be limited by the interpreter recursion limit.
    """
    if coord_index not in (1, 2, 3):
        raise ValueError(f"coordinate index must be 1..3, got {coord_index}")
    cache = _DIFF_CACHE

    def lookup(e):
        hit = cache.get((id(e), coord_index))
        return hit[1] if hit is not None else None

    stack = [f]
    while stack:
        e = stack[-1]
        if lookup(e) is not None:
            stack.pop()
            continue
        pending = [k for k in _children(e) if lookup(k) is None]
        if pending:
            stack.extend(pending)
            continue
        stack.pop()
        cache[(id(e), coord_index)] = (e, _diff_node(e, coord_index, lookup))
    return lookup(f)


def _children(e: Expr):
    if isinstance(e, Unary):
        return (e.arg,)
    if isinstance(e, Binary):
        return (e.left, e.right)
    return ()


def _diff_node(e: Expr, i: int, d) -> Expr:
    if isinstance(e, Const) or isinstance(e, Param):
        return _ZERO
    if isinstance(e, Coord):
        return _ONE if e.index == i else _ZERO
    if isinstance(e, Unary):
        u, du = e.arg, d(e.arg)
        if e.op == "neg":
            return neg(du)
        if e.op == "sin":
            return mul(cos(u), du)
        if e.op == "cos":
            return neg(mul(sin(u), du))
        if e.op == "tan":
            return div(du, power(cos(u), 2))
        if e.op == "exp":
            return mul(e, du)
        if e.op == "log":
            return div(du, u)
        if e.op == "sqrt":
            return div(du, mul(2.0, e))
        raise AssertionError(e.op)
    assert isinstance(e, Binary)
    a, b = e.left, e.right
    if e.op == "add":
        return add(d(a), d(b))
    if e.op == "sub":
        return sub(d(a), d(b))
    if e.op == "mul":
        return add(mul(d(a), b), mul(a, d(b)))
    if e.op == "div":
        return div(sub(mul(d(a), b), mul(a, d(b))), power(b, 2))
    if e.op == "pow":
        if isinstance(b, Const) and float(b.value).is_integer():
            n = b.value
            return mul(mul(n, power(a, n - 1.0)), d(a))
        # general exponent: a^b = exp(b log a)
        return mul(e, add(mul(d(b), log(a)), mul(b, div(d(a), a))))
    raise AssertionError(e.op)


# --------------------------------------------------------------------------
# evaluation

def evaluate(f: Expr, point, params=None) -> float:
    """IEEE double value of f at a 3-point, with domain checking."""
    out = evaluate_many(f, np.asarray([point], dtype=float), params)
    return float(out[0])


def evaluate_many(f: Expr, points: np.ndarray, params=None) -> np.ndarray:
    """Vectorized evaluation at an (N,3) array of points.

    Raises DomainError if *any* point hits a singularity; residual sweeps
    are expected to sample inside the manifold's domain.
    """
    return eval_batch([f], points, params)[0]


# evaluation sessions: node values are cached per points-array so that the
# many residual sweeps over one sample set share work.  Arrays are not
# hashable, so sessions are keyed by id with a weakref guard: an entry is
# only reused while its array is alive and identical, and it is dropped
# when the array dies.  The memo pins every node it has seen (entries keep
# a strong reference), so node ids stay valid for the session's lifetime.
_EVAL_SESSIONS: dict = {}


def _session_memo(pts: np.ndarray, params: dict) -> dict:
    key = id(pts)
    entry = _EVAL_SESSIONS.get(key)
    if entry is None or entry[0]() is not pts:
        def _drop(ref, key=key):
            cur = _EVAL_SESSIONS.get(key)
            if cur is not None and cur[0] is ref:
                del _EVAL_SESSIONS[key]
        try:
            entry = (weakref.ref(pts, _drop), {})
        except TypeError:
            return {}
        _EVAL_SESSIONS[key] = entry
    per_params = entry[1]
    pkey = tuple(sorted(params.items()))
    memo = per_params.get(pkey)
    if memo is None:
        memo = per_params[pkey] = {}
    return memo


def eval_batch(exprs, points, params=None) -> list[np.ndarray]:
    """Evaluate many expressions over the same points with a shared memo.

    Derived tables (connection, curvature, spin coefficients) share most of
    their subtrees; the shared memo makes sweeps over them linear in the
    number of distinct nodes rather than in the number of table entries,
    and persists for the lifetime of the points array.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise ValueError("points must have shape (N, 3)")
    params = params or {}
    n = pts.shape[0]
    memo = _session_memo(pts, params)

    def lookup(e):
        hit = memo.get(id(e))
        return hit[1] if hit is not None else None

    with np.errstate(over="ignore", invalid="ignore"):
        for f in exprs:
            stack = [f]
            while stack:
                e = stack[-1]
                if id(e) in memo:
                    stack.pop()
                    continue
                pending = [k for k in _children(e) if id(k) not in memo]
                if pending:
                    stack.extend(pending)
                    continue
                stack.pop()
                memo[id(e)] = (e, _eval_node(e, pts, params, n, lookup))
    return [memo[id(f)][1] for f in exprs]


def _eval_node(e, pts, params, n, ev) -> np.ndarray:
    if isinstance(e, Const):
        return np.full(n, e.value)
    if isinstance(e, Coord):
        return pts[:, e.index - 1]
    if isinstance(e, Param):
        try:
            return np.full(n, float(params[e.name]))
        except KeyError:
            raise UnboundParameter(e.name) from None
    if isinstance(e, Unary):
        u = ev(e.arg)
        if e.op == "neg":
            return -u
        if e.op == "sin":
            return np.sin(u)
        if e.op == "cos":
            return np.cos(u)
        if e.op == "tan":
            return np.tan(u)
        if e.op == "exp":
            return np.exp(u)
        if e.op == "log":
            if np.any(u <= 0.0):
                raise DomainError("log of non-positive value")
            return np.log(u)
        if e.op == "sqrt":
            if np.any(u < 0.0):
                raise DomainError("sqrt of negative value")
            return np.sqrt(u)
        raise AssertionError(e.op)
    a, b = ev(e.left), ev(e.right)
    if e.op == "add":
        return a + b
    if e.op == "sub":
        return a - b
    if e.op == "mul":
        return a * b
    if e.op == "div":
        if np.any(b == 0.0):
            raise DomainError("division by zero")
        return a / b
    if e.op == "pow":
        frac = b != np.floor(b)
        if np.any((a < 0.0) & frac):
            raise DomainError("negative base with non-integer exponent")
        if np.any((a == 0.0) & (b < 0.0)):
            raise DomainError("zero base with negative exponent")
        return np.power(a, b)
    raise AssertionError(e.op)


# --------------------------------------------------------------------------
# simplification / traversal

def simplify(f: Expr) -> Expr:
    """Rebuild bottom-up through the smart constructors.

    Constant folding plus the 0/1 identities only: semantics are preserved
    at every point where both sides are defined.
    """
    memo: dict[int, Expr] = {}

    def s(e: Expr) -> Expr:
        key = id(e)
        hit = memo.get(key)
        if hit is not None:
            return hit
        if isinstance(e, Unary):
            r = func(e.op, s(e.arg)) if e.op != "neg" else neg(s(e.arg))
        elif isinstance(e, Binary):
            ctor = {"add": add, "sub": sub, "mul": mul, "div": div, "pow": power}[e.op]
            r = ctor(s(e.left), s(e.right))
        else:
            r = e
        memo[key] = r
        return r

    return s(f)


def parameters_of(f: Expr) -> set[str]:
    seen: set[int] = set()
    out: set[str] = set()
    stack = [f]
    while stack:
        e = stack.pop()
        if id(e) in seen:
            continue
        seen.add(id(e))
        if isinstance(e, Param):
            out.add(e.name)
        elif isinstance(e, Unary):
            stack.append(e.arg)
        elif isinstance(e, Binary):
            stack.append(e.left)
            stack.append(e.right)
    return out


# --------------------------------------------------------------------------
# parser

_COORD_TOKENS = {"x1": 1, "x2": 2, "x3": 3}
_FUNC_TOKENS = {"sin", "cos", "tan", "exp", "log", "sqrt"}


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.tok = None  # (kind, value, offset)
        self._advance()

    def _advance(self):
        t, i = self.text, self.pos
        while i < len(t) and t[i].isspace():
            i += 1
        if i >= len(t):
            self.tok = ("eof", "", i)
            self.pos = i
            return
        c = t[i]
        if c.isdigit() or (c == "." and i + 1 < len(t) and t[i + 1].isdigit()):
            j = i
            while j < len(t) and (t[j].isdigit() or t[j] == "."):
                j += 1
            if j < len(t) and t[j] in "eE":
                k = j + 1
                if k < len(t) and t[k] in "+-":
                    k += 1
                if k < len(t) and t[k].isdigit():
                    j = k
                    while j < len(t) and t[j].isdigit():
                        j += 1
            lit = t[i:j]
            try:
                v = float(lit)
            except ValueError:
                raise ParseError(i, f"bad number literal {lit!r}", "number") from None
            self.tok = ("number", v, i)
            self.pos = j
            return
        if c.isalpha() or c == "_":
            j = i
            while j < len(t) and (t[j].isalnum() or t[j] == "_"):
                j += 1
            self.tok = ("ident", t[i:j], i)
            self.pos = j
            return
        if c in "+-*/^()":
            self.tok = (c, c, i)
            self.pos = i + 1
            return
        raise ParseError(i, f"unexpected character {c!r}")


class _Parser:
    def __init__(self, text: str, coord_names):
        self.lex = _Lexer(text)
        self.coords = dict(_COORD_TOKENS)
        if coord_names:
            for idx, name in enumerate(coord_names, start=1):
                self.coords[name] = idx

    def _eat(self, kind):
        tok = self.lex.tok
        if tok[0] != kind:
            raise ParseError(tok[2], f"unexpected {tok[0]} {tok[1]!r}", kind)
        self.lex._advance()
        return tok

    def parse(self) -> Expr:
        e = self.expr()
        tok = self.lex.tok
        if tok[0] != "eof":
            raise ParseError(tok[2], f"trailing input {tok[1]!r}", "end of input")
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.lex.tok[0] in ("+", "-"):
            op = self.lex.tok[0]
            self.lex._advance()
            rhs = self.term()
            e = _mk_binary("add" if op == "+" else "sub", e, rhs)
        return e

    def term(self) -> Expr:
        e = self.factor()
        while self.lex.tok[0] in ("*", "/"):
            op = self.lex.tok[0]
            self.lex._advance()
            rhs = self.factor()
            e = _mk_binary("mul" if op == "*" else "div", e, rhs)
        return e

    def factor(self) -> Expr:
        if self.lex.tok[0] == "-":
            self.lex._advance()
            # fold '-NUMBER' (immediately adjacent literal) into a constant
            if self.lex.tok[0] == "number":
                v = self.lex.tok[1]
                self.lex._advance()
                if self.lex.tok[0] == "^":  # exponent binds tighter: -2^x = -(2^x)
                    self.lex._advance()
                    return _mk_unary("neg", _mk_binary("pow", _mk_const(v), self.factor()))
                return _mk_const(-v)
            return _mk_unary("neg", self.factor())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.lex.tok[0] == "^":
            self.lex._advance()
            expo = self.factor()
            return _mk_binary("pow", base, expo)
        return base

    def atom(self) -> Expr:
        kind, value, offset = self.lex.tok
        if kind == "number":
            self.lex._advance()
            return _mk_const(value)
        if kind == "(":
            self.lex._advance()
            e = self.expr()
            self._eat(")")
            return e
        if kind == "ident":
            self.lex._advance()
            if self.lex.tok[0] == "(":
                if value not in _FUNC_TOKENS:
                    raise ParseError(offset, f"unknown function {value!r}",
                                     "one of " + ",".join(sorted(_FUNC_TOKENS)))
                self.lex._advance()
                arg = self.expr()
                self._eat(")")
                return _mk_unary(value, arg)
            if value in _FUNC_TOKENS:
                raise ParseError(offset, f"function {value!r} used without arguments", "'('")
            if value in self.coords:
                return _mk_coord(self.coords[value])
            return _mk_param(value)
        raise ParseError(offset, f"unexpected {kind} {value!r}", "number, identifier or '('")


def parse(text: str, coord_names=None) -> Expr:
    """Parse an expression string; raises ParseError with a byte offset."""
    if not text or not text.strip():
        raise ParseError(0, "empty input", "expression")
    return _Parser(text, coord_names).parse()


# --------------------------------------------------------------------------
# unparser

_PREC = {"add": 1, "sub": 1, "mul": 2, "div": 2, "neg": 3, "pow": 4}
_SYM = {"add": "+", "sub": "-", "mul": "*", "div": "/", "pow": "^"}


def _fmt_const(v: float) -> str:
    if float(v).is_integer() and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def unparse(e: Expr) -> str:
    """Render back to the grammar; parse(unparse(e)) is structurally e."""
    s, _ = _unparse(e)
    return s


def _unparse(e: Expr):
    """Returns (text, precedence-of-root)."""
    if isinstance(e, Const):
        return _fmt_const(e.value), (3 if e.value < 0 else 5)
    if isinstance(e, Coord):
        return f"x{e.index}", 5
    if isinstance(e, Param):
        return e.name, 5
    if isinstance(e, Unary):
        if e.op == "neg":
            s, p = _unparse(e.arg)
            # parens keep an explicit neg node distinct from a negative literal
            if p < _PREC["neg"] or isinstance(e.arg, Const):
                s = f"({s})"
            return f"-{s}", _PREC["neg"]
        s, _ = _unparse(e.arg)
        return f"{e.op}({s})", 5
    assert isinstance(e, Binary)
    p = _PREC[e.op]
    ls, lp = _unparse(e.left)
    rs, rp = _unparse(e.right)
    if e.op == "pow":
        # right-associative; left operand must be an atom-level item
        if lp < 5:
            ls = f"({ls})"
        if rp < _PREC["pow"] and rp != 3:  # unary minus is fine on the right
            rs = f"({rs})"
    else:
        if lp < p:
            ls = f"({ls})"
        # left-associative: a right child of equal precedence needs parens to
        # survive the round trip structurally (x1*(x2/x3) vs x1*x2/x3)
        if rp <= p:
            rs = f"({rs})"
    return f"{ls} {_SYM[e.op]} {rs}" if e.op in ("add", "sub") else f"{ls}{_SYM[e.op]}{rs}", p
