"""Symbolic expressions over a signature.

An expression is a tree of operation calls.  Concrete-typed arguments are
literals, abstract-typed arguments are subexpressions, and function-typed
arguments are small arithmetic ASTs over one variable.  ``seq`` nodes chain
two expressions for effect on mutable signatures, returning the second's
value.

Expressions serialize to s-expressions, e.g.::

    (mem 3 (insert 3 (empty)))
    (seq (incr) (get))
    (map (fn (add var 2)) (empty))
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .sigdsl import (
    ABSTRACT,
    AbstractTy,
    BoolTy,
    CharTy,
    FunTy,
    IntTy,
    ListTy,
    OptionTy,
    ParseError,
    Signature,
    StrTy,
    Ty,
    UnitTy,
    render_ty,
)

_U64 = 1 << 64
_I64_MAX = (1 << 63) - 1


def wrap_i64(n: int) -> int:
    """Reduce to a 64-bit two's-complement value (wrap-around semantics)."""
    n &= _U64 - 1
    return n - _U64 if n > _I64_MAX else n


class ExprTypeError(Exception):
    """Raised when an expression does not type-check against a signature."""


# --------------------------------------------------------------------------
# Literals


class Literal:
    __slots__ = ()


@dataclass(frozen=True)
class LInt(Literal):
    value: int


@dataclass(frozen=True)
class LBool(Literal):
    value: bool


@dataclass(frozen=True)
class LChar(Literal):
    value: str  # exactly one character


@dataclass(frozen=True)
class LStr(Literal):
    value: str


@dataclass(frozen=True)
class LUnit(Literal):
    pass


@dataclass(frozen=True)
class LList(Literal):
    elems: tuple[Literal, ...]


@dataclass(frozen=True)
class LNone(Literal):
    pass


@dataclass(frozen=True)
class LSome(Literal):
    value: Literal


# --------------------------------------------------------------------------
# Function ASTs (unary int -> int arguments)


class FnAst:
    __slots__ = ()


@dataclass(frozen=True)
class Var(FnAst):
    """The single function parameter."""


@dataclass(frozen=True)
class Const(FnAst):
    value: int


@dataclass(frozen=True)
class Add(FnAst):
    left: FnAst
    right: FnAst


@dataclass(frozen=True)
class Sub(FnAst):
    left: FnAst
    right: FnAst


@dataclass(frozen=True)
class Mul(FnAst):
    left: FnAst
    right: FnAst


def eval_fn(f: FnAst, x: int) -> int:
    """Evaluate at x with 64-bit wrap-around; total and deterministic."""
    if isinstance(f, Var):
        return wrap_i64(x)
    if isinstance(f, Const):
        return wrap_i64(f.value)
    l = eval_fn(f.left, x)
    r = eval_fn(f.right, x)
    if isinstance(f, Add):
        return wrap_i64(l + r)
    if isinstance(f, Sub):
        return wrap_i64(l - r)
    if isinstance(f, Mul):
        return wrap_i64(l * r)
    raise AssertionError(f"unhandled node {f!r}")


def fn_depth(f: FnAst) -> int:
    if isinstance(f, (Var, Const)):
        return 1
    return 1 + max(fn_depth(f.left), fn_depth(f.right))


# --------------------------------------------------------------------------
# Expressions


class Expr:
    __slots__ = ()


class Arg:
    __slots__ = ()


@dataclass(frozen=True)
class Call(Expr):
    op: str
    args: tuple[Arg, ...]


@dataclass(frozen=True)
class Seq(Expr):
    """Evaluate first for effect, discard its value, return second's."""

    first: Expr
    second: Expr


@dataclass(frozen=True)
class LitArg(Arg):
    value: Literal


@dataclass(frozen=True)
class ExprArg(Arg):
    """An abstract-typed argument position, filled by a subexpression."""

    expr: Expr


@dataclass(frozen=True)
class FnArg(Arg):
    fn: FnAst


def _literal_matches(lit: Literal, ty: Ty) -> bool:
    if isinstance(ty, IntTy):
        return isinstance(lit, LInt)
    if isinstance(ty, BoolTy):
        return isinstance(lit, LBool)
    if isinstance(ty, CharTy):
        return isinstance(lit, LChar) and len(lit.value) == 1
    if isinstance(ty, StrTy):
        return isinstance(lit, LStr)
    if isinstance(ty, UnitTy):
        return isinstance(lit, LUnit)
    if isinstance(ty, ListTy):
        return isinstance(lit, LList) and all(
            _literal_matches(e, ty.elem) for e in lit.elems
        )
    if isinstance(ty, OptionTy):
        if isinstance(lit, LNone):
            return True
        return isinstance(lit, LSome) and _literal_matches(lit.value, ty.elem)
    return False


def type_of(e: Expr, sig: Signature) -> Ty:
    """Return the expression's type under sig, or raise ExprTypeError."""
    return _type_of(e, sig, {op.name: op for op in sig.ops})


def _type_of(e: Expr, sig: Signature, ops: dict) -> Ty:
    if isinstance(e, Seq):
        if not sig.mutable:
            raise ExprTypeError("seq is only allowed for mutable signatures")
        _type_of(e.first, sig, ops)
        return _type_of(e.second, sig, ops)
    if not isinstance(e, Call):
        raise ExprTypeError(f"not an expression: {e!r}")
    decl = ops.get(e.op)
    if decl is None:
        raise ExprTypeError(f"unknown op {e.op!r}")
    if len(e.args) != len(decl.args):
        raise ExprTypeError(
            f"op {e.op!r} expects {len(decl.args)} arguments, got {len(e.args)}"
        )
    for i, (arg, want) in enumerate(zip(e.args, decl.args)):
        if isinstance(want, AbstractTy):
            if not isinstance(arg, ExprArg):
                raise ExprTypeError(
                    f"op {e.op!r} argument {i}: expected a subexpression of type t"
                )
            got = _type_of(arg.expr, sig, ops)
            if not isinstance(got, AbstractTy):
                raise ExprTypeError(
                    f"op {e.op!r} argument {i}: expected type t, got {render_ty(got)}"
                )
        elif isinstance(want, FunTy):
            if not isinstance(arg, FnArg):
                raise ExprTypeError(
                    f"op {e.op!r} argument {i}: expected a function argument"
                )
        else:
            if not isinstance(arg, LitArg):
                raise ExprTypeError(
                    f"op {e.op!r} argument {i}: expected a {render_ty(want)} literal"
                )
            if not _literal_matches(arg.value, want):
                raise ExprTypeError(
                    f"op {e.op!r} argument {i}: literal does not match "
                    f"{render_ty(want)}"
                )
    return decl.ret


def depth(e: Expr) -> int:
    """1 + max depth over child expressions; a lone call has depth 1."""
    if isinstance(e, Seq):
        return 1 + max(depth(e.first), depth(e.second))
    best = 0
    for a in e.args:
        if isinstance(a, ExprArg):
            d = depth(a.expr)
            if d > best:
                best = d
    return 1 + best


def size_of(e: Expr) -> int:
    """Total count of call and seq nodes."""
    if isinstance(e, Seq):
        return 1 + size_of(e.first) + size_of(e.second)
    return 1 + sum(size_of(a.expr) for a in e.args if isinstance(a, ExprArg))


def num_seq(e: Expr) -> int:
    if isinstance(e, Seq):
        return 1 + num_seq(e.first) + num_seq(e.second)
    return sum(num_seq(a.expr) for a in e.args if isinstance(a, ExprArg))


# --------------------------------------------------------------------------
# Serialization

_STR_ESCAPES = {"\\": "\\\\", '"': '\\"'}
_CHAR_ESCAPES = {"\\": "\\\\", "'": "\\'"}


def _lit_text(lit: Literal) -> str:
    if isinstance(lit, LInt):
        return str(lit.value)
    if isinstance(lit, LBool):
        return "true" if lit.value else "false"
    if isinstance(lit, LChar):
        return f"'{_CHAR_ESCAPES.get(lit.value, lit.value)}'"
    if isinstance(lit, LStr):
        body = "".join(_STR_ESCAPES.get(c, c) for c in lit.value)
        return f'"{body}"'
    if isinstance(lit, LUnit):
        return "unit"
    if isinstance(lit, LList):
        return "(list" + "".join(" " + _lit_text(e) for e in lit.elems) + ")"
    if isinstance(lit, LNone):
        return "none"
    if isinstance(lit, LSome):
        return f"(some {_lit_text(lit.value)})"
    raise AssertionError(f"unhandled literal {lit!r}")


def _fn_text(f: FnAst) -> str:
    if isinstance(f, Var):
        return "var"
    if isinstance(f, Const):
        return str(f.value)
    op = {Add: "add", Sub: "sub", Mul: "mul"}[type(f)]
    return f"({op} {_fn_text(f.left)} {_fn_text(f.right)})"


def to_text(e: Expr) -> str:
    """Canonical s-expression form."""
    if isinstance(e, Seq):
        return f"(seq {to_text(e.first)} {to_text(e.second)})"
    parts = [e.op]
    for a in e.args:
        if isinstance(a, LitArg):
            parts.append(_lit_text(a.value))
        elif isinstance(a, ExprArg):
            parts.append(to_text(a.expr))
        else:
            parts.append(f"(fn {_fn_text(a.fn)})")
    return "(" + " ".join(parts) + ")"


_TOKEN_RE = re.compile(
    r"""\s*(?:
        (?P<lparen>\() | (?P<rparen>\)) |
        (?P<int>-?[0-9]+) |
        (?P<char>'(?:\\.|[^'\\])') |
        (?P<str>"(?:\\.|[^"\\])*") |
        (?P<atom>[A-Za-z_][A-Za-z0-9_]*)
    )""",
    re.VERBOSE,
)


def _sexp_tokens(s: str) -> list[str]:
    tokens = []
    pos = 0
    while pos < len(s):
        m = _TOKEN_RE.match(s, pos)
        if not m:
            rest = s[pos:].lstrip()
            if not rest:
                break
            raise ParseError(f"bad token near {rest[:10]!r}", 1, pos + 1)
        tokens.append(m.group().strip())
        pos = m.end()
    return tokens


_LIT_HEADS = {"some", "list"}


class _SexpParser:
    def __init__(self, tokens: list[str]):
        self.tokens = tokens
        self.pos = 0

    def error(self, message: str):
        raise ParseError(message, 1, self.pos + 1)

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> str:
        tok = self.peek()
        if tok is None:
            self.error("unexpected end of input")
        self.pos += 1
        return tok

    def expect(self, tok: str):
        got = self.next()
        if got != tok:
            self.error(f"expected {tok!r}, got {got!r}")

    def parse_expr(self) -> Expr:
        self.expect("(")
        head = self.next()
        if head == "seq":
            first = self.parse_expr()
            second = self.parse_expr()
            self.expect(")")
            return Seq(first, second)
        if not _IDENT_OK.match(head):
            self.error(f"expected an op name, got {head!r}")
        args: list[Arg] = []
        while self.peek() != ")":
            args.append(self.parse_arg())
        self.expect(")")
        return Call(head, tuple(args))

    def parse_arg(self) -> Arg:
        tok = self.peek()
        if tok is None:
            self.error("unexpected end of input")
        if tok != "(":
            lit = self.parse_simple_literal()
            if lit is not None:
                return LitArg(lit)
            self.error(f"unexpected token {tok!r}")
        head = self.tokens[self.pos + 1] if self.pos + 1 < len(self.tokens) else None
        if head in _LIT_HEADS:
            return LitArg(self.parse_literal())
        if head == "fn":
            self.next()  # (
            self.next()  # fn
            fn = self.parse_fn()
            self.expect(")")
            return FnArg(fn)
        return ExprArg(self.parse_expr())

    def parse_simple_literal(self) -> Literal | None:
        tok = self.peek()
        assert tok is not None
        if tok == "true":
            self.next()
            return LBool(True)
        if tok == "false":
            self.next()
            return LBool(False)
        if tok == "none":
            self.next()
            return LNone()
        if tok == "unit":
            self.next()
            return LUnit()
        if _INT_OK.match(tok):
            self.next()
            return LInt(wrap_i64(int(tok)))
        if tok.startswith("'"):
            self.next()
            return LChar(_unescape(tok[1:-1]))
        if tok.startswith('"'):
            self.next()
            return LStr(_unescape(tok[1:-1]))
        return None

    def parse_literal(self) -> Literal:
        tok = self.peek()
        if tok != "(":
            lit = self.parse_simple_literal()
            if lit is None:
                self.error(f"expected a literal, got {tok!r}")
            return lit
        self.next()
        head = self.next()
        if head == "some":
            inner = self.parse_literal()
            self.expect(")")
            return LSome(inner)
        if head == "list":
            elems = []
            while self.peek() != ")":
                elems.append(self.parse_literal())
            self.expect(")")
            return LList(tuple(elems))
        self.error(f"expected a literal form, got {head!r}")
        raise AssertionError  # unreachable

    def parse_fn(self) -> FnAst:
        tok = self.next()
        if tok == "var":
            return Var()
        if _INT_OK.match(tok):
            return Const(wrap_i64(int(tok)))
        if tok == "(":
            head = self.next()
            ctor = {"add": Add, "sub": Sub, "mul": Mul}.get(head)
            if ctor is None:
                self.error(f"expected add/sub/mul, got {head!r}")
            left = self.parse_fn()
            right = self.parse_fn()
            self.expect(")")
            return ctor(left, right)
        self.error(f"expected a function body, got {tok!r}")
        raise AssertionError  # unreachable


_IDENT_OK = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_INT_OK = re.compile(r"-?[0-9]+\Z")


def _unescape(body: str) -> str:
    return body.replace("\\\\", "\0").replace("\\'", "'").replace('\\"', '"').replace(
        "\0", "\\"
    )


def from_text(s: str, sig: Signature) -> Expr:
    """Parse an s-expression and type-check it against sig.

    Raises ParseError on malformed input and ExprTypeError on a well-formed
    but ill-typed expression.
    """
    parser = _SexpParser(_sexp_tokens(s))
    e = parser.parse_expr()
    if parser.peek() is not None:
        parser.error(f"trailing input {parser.peek()!r}")
    type_of(e, sig)
    return e
