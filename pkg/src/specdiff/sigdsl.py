"""Signature IDL: parsing, validation and pretty-printing.

A signature file declares one abstract type ``t`` and a list of operations
over it, e.g.::

    signature finite_set
    abstract t
    op empty : t
    op mem : int -> t -> bool
    end

Arrow types are curried: ``a -> b -> c`` declares arguments ``[a, b]`` and
return type ``c``.  A parenthesized arrow in argument position, such as
``(int -> int)``, is a function-valued argument.
"""

from __future__ import annotations

import re
from dataclasses import dataclass


class ParseError(Exception):
    """Raised on malformed signature source; carries a 1-based position."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class ValidationError(Exception):
    """Raised when a parsed signature violates a structural invariant."""


# --------------------------------------------------------------------------
# Types


class Ty:
    """Base class for types appearing in operation declarations."""

    __slots__ = ()


@dataclass(frozen=True)
class IntTy(Ty):
    pass


@dataclass(frozen=True)
class BoolTy(Ty):
    pass


@dataclass(frozen=True)
class CharTy(Ty):
    pass


@dataclass(frozen=True)
class StrTy(Ty):
    pass


@dataclass(frozen=True)
class UnitTy(Ty):
    pass


@dataclass(frozen=True)
class AbstractTy(Ty):
    """The signature's single opaque type ``t``."""


@dataclass(frozen=True)
class ListTy(Ty):
    elem: Ty


@dataclass(frozen=True)
class OptionTy(Ty):
    elem: Ty


@dataclass(frozen=True)
class FunTy(Ty):
    """A function-valued argument type; only ``(int -> int)`` is accepted."""

    arg: Ty
    ret: Ty


INT = IntTy()
BOOL = BoolTy()
CHAR = CharTy()
STR = StrTy()
UNIT = UnitTy()
ABSTRACT = AbstractTy()


@dataclass(frozen=True)
class OpDecl:
    name: str
    args: tuple[Ty, ...]
    ret: Ty


@dataclass(frozen=True)
class Signature:
    name: str
    mutable: bool
    ops: tuple[OpDecl, ...]


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of a successful validation.

    ``observable_types`` are the distinct concrete return types, in first
    occurrence order.  These are the types at which two implementations can
    be compared.
    """

    observable_types: tuple[Ty, ...]


def render_ty(ty: Ty) -> str:
    if isinstance(ty, IntTy):
        return "int"
    if isinstance(ty, BoolTy):
        return "bool"
    if isinstance(ty, CharTy):
        return "char"
    if isinstance(ty, StrTy):
        return "string"
    if isinstance(ty, UnitTy):
        return "unit"
    if isinstance(ty, AbstractTy):
        return "t"
    if isinstance(ty, ListTy):
        return f"{render_ty(ty.elem)} list"
    if isinstance(ty, OptionTy):
        return f"{render_ty(ty.elem)} option"
    if isinstance(ty, FunTy):
        return f"({render_ty(ty.arg)} -> {render_ty(ty.ret)})"
    raise AssertionError(f"unhandled type {ty!r}")


def render_signature(sig: Signature) -> str:
    """Pretty-print back to the IDL; re-parsing yields an equal Signature."""
    lines = [f"signature {sig.name}"]
    if sig.mutable:
        lines.append("mutable")
    lines.append("abstract t")
    for op in sig.ops:
        parts = [render_ty(a) for a in op.args] + [render_ty(op.ret)]
        lines.append(f"op {op.name} : {' -> '.join(parts)}")
    lines.append("end")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# Parsing

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")

_TYPE_ATOMS: dict[str, Ty] = {
    "int": INT,
    "bool": BOOL,
    "char": CHAR,
    "string": STR,
    "unit": UNIT,
    "t": ABSTRACT,
}

_POSTFIX = ("list", "option")

_DECL_KEYWORDS = {"signature", "mutable", "abstract", "op", "end"}

# Atoms with a fixed meaning in expression or argument position of the
# serialization; allowing them as operation names would make the expression
# round-trip ambiguous.  Function-body heads (add/sub/mul) never clash: they
# only appear inside a (fn ...) context.
_RESERVED_OP_NAMES = (
    _DECL_KEYWORDS
    | set(_TYPE_ATOMS)
    | set(_POSTFIX)
    | {"seq", "fn", "some", "none", "var", "true", "false"}
)


@dataclass(frozen=True)
class _Token:
    kind: str  # "ident" | "arrow" | "lparen" | "rparen" | "colon" | "eof"
    text: str
    line: int
    col: int


def _tokenize(source: str) -> list[_Token]:
    tokens: list[_Token] = []
    line = 1
    col = 1
    i = 0
    n = len(source)
    while i < n:
        c = source[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
        elif c in " \t\r":
            i += 1
            col += 1
        elif c == "#":
            while i < n and source[i] != "\n":
                i += 1
        elif c == "(":
            tokens.append(_Token("lparen", "(", line, col))
            i += 1
            col += 1
        elif c == ")":
            tokens.append(_Token("rparen", ")", line, col))
            i += 1
            col += 1
        elif c == ":":
            tokens.append(_Token("colon", ":", line, col))
            i += 1
            col += 1
        elif source.startswith("->", i):
            tokens.append(_Token("arrow", "->", line, col))
            i += 2
            col += 2
        else:
            m = _IDENT_RE.match(source, i)
            if not m:
                raise ParseError(f"unexpected character {c!r}", line, col)
            tokens.append(_Token("ident", m.group(), line, col))
            col += len(m.group())
            i = m.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def fail(self, message: str, tok: _Token | None = None):
        tok = tok or self.peek()
        raise ParseError(message, tok.line, tok.col)

    def expect_ident(self, what: str) -> _Token:
        tok = self.advance()
        if tok.kind != "ident":
            self.fail(f"expected {what}, got {tok.text or 'end of input'!r}", tok)
        return tok

    def expect_keyword(self, word: str):
        tok = self.advance()
        if tok.kind != "ident" or tok.text != word:
            self.fail(f"expected {word!r}, got {tok.text or 'end of input'!r}", tok)

    def parse_sigfile(self) -> Signature:
        self.expect_keyword("signature")
        name = self.expect_ident("signature name")
        mutable = False
        abstract_decls = 0
        ops: list[OpDecl] = []
        seen: set[str] = set()
        while True:
            tok = self.peek()
            if tok.kind == "eof":
                self.fail("missing 'end'", tok)
            if tok.kind != "ident":
                self.fail(f"expected a declaration, got {tok.text!r}", tok)
            if tok.text == "end":
                self.advance()
                break
            if tok.text == "mutable":
                self.advance()
                mutable = True
            elif tok.text == "abstract":
                self.advance()
                self.expect_keyword("t")
                abstract_decls += 1
                if abstract_decls > 1:
                    self.fail("duplicate 'abstract t' declaration", tok)
            elif tok.text == "op":
                self.advance()
                ops.append(self.parse_op(seen))
            else:
                self.fail(f"expected a declaration, got {tok.text!r}", tok)
        trailing = self.peek()
        if trailing.kind != "eof":
            self.fail(f"unexpected input after 'end': {trailing.text!r}", trailing)
        if abstract_decls == 0:
            raise ParseError("no 'abstract t' declaration", 1, 1)
        return Signature(name=name.text, mutable=mutable, ops=tuple(ops))

    def parse_op(self, seen: set[str]) -> OpDecl:
        name = self.expect_ident("operation name")
        if name.text in _RESERVED_OP_NAMES:
            self.fail(f"reserved word {name.text!r} cannot name an operation", name)
        if name.text in seen:
            self.fail(f"duplicate op name {name.text!r}", name)
        seen.add(name.text)
        tok = self.advance()
        if tok.kind != "colon":
            self.fail(f"expected ':', got {tok.text or 'end of input'!r}", tok)
        atoms, positions = self.parse_arrow_chain()
        ret = atoms[-1]
        if isinstance(ret, FunTy):
            line, col = positions[-1]
            raise ParseError("function type in return position", line, col)
        return OpDecl(name=name.text, args=tuple(atoms[:-1]), ret=ret)

    def parse_arrow_chain(self) -> tuple[list[Ty], list[tuple[int, int]]]:
        atoms = []
        positions = []
        while True:
            tok = self.peek()
            atoms.append(self.parse_atom())
            positions.append((tok.line, tok.col))
            if self.peek().kind == "arrow":
                self.advance()
            else:
                return atoms, positions

    def parse_atom(self) -> Ty:
        tok = self.advance()
        if tok.kind == "lparen":
            inner, _ = self.parse_arrow_chain()
            close = self.advance()
            if close.kind != "rparen":
                self.fail(f"expected ')', got {close.text or 'end of input'!r}", close)
            ty = inner[-1]
            for a in reversed(inner[:-1]):  # right-associative arrow
                ty = FunTy(a, ty)
        elif tok.kind == "ident" and tok.text in _TYPE_ATOMS:
            ty = _TYPE_ATOMS[tok.text]
        elif tok.kind == "ident" and tok.text not in _DECL_KEYWORDS:
            self.fail(f"unknown type name {tok.text!r}", tok)
            raise AssertionError  # unreachable
        else:
            self.fail(f"expected a type, got {tok.text or 'end of input'!r}", tok)
            raise AssertionError  # unreachable
        while self.peek().kind == "ident" and self.peek().text in _POSTFIX:
            word = self.advance()
            ty = ListTy(ty) if word.text == "list" else OptionTy(ty)
        return ty


def parse_signature(source: str) -> Signature:
    """Parse IDL source into a Signature, or raise ParseError."""
    return _Parser(_tokenize(source)).parse_sigfile()


def parse_ty(source: str) -> Ty:
    """Parse a standalone type, e.g. ``bool`` or ``int list``."""
    parser = _Parser(_tokenize(source))
    atoms, _ = parser.parse_arrow_chain()
    trailing = parser.peek()
    if trailing.kind != "eof":
        parser.fail(f"unexpected input after type: {trailing.text!r}", trailing)
    ty = atoms[-1]
    for a in reversed(atoms[:-1]):
        ty = FunTy(a, ty)
    return ty


# --------------------------------------------------------------------------
# Validation


def _contains_abstract(ty: Ty) -> bool:
    if isinstance(ty, AbstractTy):
        return True
    if isinstance(ty, (ListTy, OptionTy)):
        return _contains_abstract(ty.elem)
    if isinstance(ty, FunTy):
        return _contains_abstract(ty.arg) or _contains_abstract(ty.ret)
    return False


def _contains_fun(ty: Ty) -> bool:
    if isinstance(ty, FunTy):
        return True
    if isinstance(ty, (ListTy, OptionTy)):
        return _contains_fun(ty.elem)
    return False


def _check_arg_ty(op: OpDecl, ty: Ty):
    if isinstance(ty, FunTy):
        if ty != FunTy(INT, INT):
            raise ValidationError(
                f"op {op.name!r}: function arguments must be (int -> int), "
                f"got {render_ty(ty)}"
            )
        return
    if isinstance(ty, (ListTy, OptionTy)):
        if _contains_abstract(ty):
            raise ValidationError(
                f"op {op.name!r}: abstract type nested under a type "
                f"constructor in {render_ty(ty)}"
            )
        if _contains_fun(ty):
            raise ValidationError(
                f"op {op.name!r}: function type nested under a type "
                f"constructor in {render_ty(ty)}"
            )
        return
    # base types and bare t are always fine


def is_leaf_op(op: OpDecl) -> bool:
    """An op with no abstract-typed argument; anchors generator recursion."""
    return all(not isinstance(a, AbstractTy) for a in op.args)


def validate_signature(sig: Signature) -> ValidationReport:
    """Check structural invariants; return the observable (concrete) types.

    Raises ValidationError naming the violated invariant.  The
    leaf-constructor requirement applies only when some op mentions the
    abstract type: signatures whose ops never touch ``t`` (global-state
    style) have nothing to construct.
    """
    for op in sig.ops:
        for a in op.args:
            _check_arg_ty(op, a)
        if isinstance(op.ret, FunTy):
            raise ValidationError(f"op {op.name!r}: function type in return position")
        if isinstance(op.ret, (ListTy, OptionTy)) and _contains_abstract(op.ret):
            raise ValidationError(
                f"op {op.name!r}: abstract type nested under a type "
                f"constructor in {render_ty(op.ret)}"
            )

    uses_abstract = any(
        isinstance(op.ret, AbstractTy)
        or any(isinstance(a, AbstractTy) for a in op.args)
        for op in sig.ops
    )
    if uses_abstract:
        has_leaf = any(
            isinstance(op.ret, AbstractTy) and is_leaf_op(op) for op in sig.ops
        )
        if not has_leaf:
            raise ValidationError("no leaf constructor for the abstract type")

    observable: list[Ty] = []
    for op in sig.ops:
        if not isinstance(op.ret, AbstractTy) and op.ret not in observable:
            observable.append(op.ret)
    if not observable:
        raise ValidationError("no concrete return type")
    return ValidationReport(observable_types=tuple(observable))
