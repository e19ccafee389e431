"""Formulas of the comparative plausibility language.

The core syntax has four constructors: atoms, ``Bot``, implication ``Imp`` and
comparative plausibility ``CmpPl`` (``A <= B``, read "A is at least as
plausible as B").  Truth, negation, conjunction and disjunction are
abbreviations and are expanded by the parser:

    top   = bot -> bot
    ~A    = A -> bot
    A | B = ~A -> B
    A & B = ~(A -> ~B)

ASCII grammar, loosest binding first::

    imp  ::= cmp ( "->" imp )?          right associative
    cmp  ::= or ( "<=" or )?            non associative
    or   ::= and ( "|" and )*           left associative
    and  ::= un ( "&" un )*             left associative
    un   ::= "~" un | atom | "bot" | "top" | "(" imp ")"

The unicode forms (``→ ≼ ∨ ∧ ¬ ⊥ ⊤``) are accepted as synonyms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator

__all__ = [
    "Formula",
    "Atom",
    "Bot",
    "Imp",
    "CmpPl",
    "BOT",
    "TOP",
    "ParseError",
    "parse",
    "render",
    "complexity",
    "block_complexity",
    "subformulas",
    "atoms",
    "neg",
    "conj",
    "disj",
    "big_disj",
    "big_conj",
]

KEYWORDS = frozenset({"bot", "top"})
ATOM_RE = re.compile(r"[a-z][a-z0-9_]*\Z")


class Formula:
    """Base class of the formula AST.  Instances are immutable and hashable."""

    __slots__ = ()

    @property
    def key(self) -> str:
        """Canonical sort key (the plain ascii rendering)."""
        k = self._key
        if k is None:
            k = render(self)
            object.__setattr__(self, "_key", k)
        return k

    def __lt__(self, other: Formula) -> bool:
        return self.key < other.key

    def __str__(self) -> str:
        return render(self, resugar=True)


@dataclass(frozen=True, eq=True, repr=False)
class Atom(Formula):
    name: str
    _hash: int = field(init=False, compare=False, repr=False)
    _key: str | None = field(init=False, compare=False, repr=False, default=None)

    def __post_init__(self) -> None:
        if not ATOM_RE.match(self.name) or self.name in KEYWORDS:
            raise ValueError(f"invalid atom name {self.name!r}")
        object.__setattr__(self, "_hash", hash(("atom", self.name)))

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Atom({self.name!r})"


@dataclass(frozen=True, eq=True, repr=False)
class Bot(Formula):
    _hash: int = field(init=False, compare=False, repr=False)
    _key: str | None = field(init=False, compare=False, repr=False, default=None)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash("bot"))

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return "Bot()"


@dataclass(frozen=True, eq=True, repr=False)
class Imp(Formula):
    left: Formula
    right: Formula
    _hash: int = field(init=False, compare=False, repr=False)
    _key: str | None = field(init=False, compare=False, repr=False, default=None)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash(("imp", self.left, self.right)))

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Imp({self.left!r}, {self.right!r})"


@dataclass(frozen=True, eq=True, repr=False)
class CmpPl(Formula):
    left: Formula
    right: Formula
    _hash: int = field(init=False, compare=False, repr=False)
    _key: str | None = field(init=False, compare=False, repr=False, default=None)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash(("cmp", self.left, self.right)))

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"CmpPl({self.left!r}, {self.right!r})"


BOT = Bot()
TOP = Imp(BOT, BOT)


def neg(a: Formula) -> Formula:
    return Imp(a, BOT)


def conj(a: Formula, b: Formula) -> Formula:
    return neg(Imp(a, neg(b)))


def disj(a: Formula, b: Formula) -> Formula:
    return Imp(neg(a), b)


def big_disj(items: Iterable[Formula]) -> Formula:
    """Right-nested disjunction; the empty disjunction is ``bot``."""
    items = list(items)
    if not items:
        return BOT
    out = items[-1]
    for a in reversed(items[:-1]):
        out = disj(a, out)
    return out


def big_conj(items: Iterable[Formula]) -> Formula:
    """Right-nested conjunction; the empty conjunction is ``top``."""
    items = list(items)
    if not items:
        return TOP
    out = items[-1]
    for a in reversed(items[:-1]):
        out = conj(a, out)
    return out


# ---------------------------------------------------------------------------
# parsing


class ParseError(ValueError):
    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<imp>->|→)
  | (?P<cmp><=|≼)
  | (?P<or>\||∨)
  | (?P<and>&|∧)
  | (?P<not>~|¬)
  | (?P<lp>\()
  | (?P<rp>\))
  | (?P<bot>⊥)
  | (?P<top>⊤)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        val = m.group()
        if kind == "name":
            if val == "bot":
                kind = "bot"
            elif val == "top":
                kind = "top"
            elif not ATOM_RE.match(val):
                raise ParseError(f"invalid atom name {val!r}", pos, text)
        if kind != "ws":
            out.append((kind, val, pos))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.toks[self.i][0]

    def pos(self) -> int:
        return self.toks[self.i][2]

    def take(self, kind: str) -> None:
        if self.peek() != kind:
            tok = self.toks[self.i]
            what = repr(tok[1]) if tok[0] != "eof" else "end of input"
            raise ParseError(f"expected {kind}, found {what}", tok[2], self.text)
        self.i += 1

    def parse(self) -> Formula:
        f = self.imp()
        if self.peek() != "eof":
            tok = self.toks[self.i]
            raise ParseError(f"unexpected {tok[1]!r}", tok[2], self.text)
        return f

    def imp(self) -> Formula:
        left = self.cmp()
        if self.peek() == "imp":
            self.i += 1
            return Imp(left, self.imp())
        return left

    def cmp(self) -> Formula:
        left = self.disj()
        if self.peek() == "cmp":
            self.i += 1
            right = self.disj()
            if self.peek() == "cmp":
                raise ParseError(
                    "'<=' is non-associative; add parentheses", self.pos(), self.text
                )
            return CmpPl(left, right)
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek() == "or":
            self.i += 1
            f = disj(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek() == "and":
            self.i += 1
            f = conj(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind, val, pos = self.toks[self.i]
        if kind == "not":
            self.i += 1
            return neg(self.unary())
        if kind == "name":
            self.i += 1
            return Atom(val)
        if kind == "bot":
            self.i += 1
            return BOT
        if kind == "top":
            self.i += 1
            return TOP
        if kind == "lp":
            self.i += 1
            f = self.imp()
            self.take("rp")
            return f
        what = repr(val) if kind != "eof" else "end of input"
        raise ParseError(f"expected a formula, found {what}", pos, self.text)


def parse(text: str) -> Formula:
    """Parse ``text`` into a desugared formula.

    >>> parse("p <= q")
    CmpPl(Atom('p'), Atom('q'))
    >>> parse("top")
    Imp(Bot(), Bot())
    """
    if not text or not text.strip():
        raise ParseError("empty formula", 0, text)
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# rendering

_SYMBOLS = {
    "ascii": {"imp": "->", "cmp": "<=", "or": "|", "and": "&", "not": "~",
              "bot": "bot", "top": "top"},
    "unicode": {"imp": "→", "cmp": "≼", "or": "∨", "and": "∧", "not": "¬",
                "bot": "⊥", "top": "⊤"},
    "latex": {"imp": r"\to", "cmp": r"\preccurlyeq", "or": r"\lor",
              "and": r"\land", "not": r"\neg", "bot": r"\bot", "top": r"\top"},
}

# binding strength; higher binds tighter
_PREC = {"imp": 1, "cmp": 2, "or": 3, "and": 4, "not": 5, "atom": 6}


def _view(f: Formula, resugar: bool):
    """Return (operator, operands) for printing, recognising sugar if asked."""
    if isinstance(f, Atom):
        return "atom", f.name
    if isinstance(f, Bot):
        return "bot", None
    if isinstance(f, CmpPl):
        return "cmp", (f.left, f.right)
    assert isinstance(f, Imp)
    if resugar:
        if f == TOP:
            return "top", None
        a, b = f.left, f.right
        if isinstance(b, Bot):
            # ~(x -> ~y) is x & y
            if isinstance(a, Imp) and isinstance(a.right, Imp) and isinstance(a.right.right, Bot):
                return "and", (a.left, a.right.left)
            return "not", (a,)
        if isinstance(a, Imp) and isinstance(a.right, Bot):
            inner = a.left
            # (x & y) -> b reads better than (x -> ~y) | b
            if not (isinstance(inner, Imp) and isinstance(inner.right, Imp)
                    and isinstance(inner.right.right, Bot)):
                return "or", (a.left, b)
    return "imp", (f.left, f.right)


def _render(f: Formula, sym: dict, resugar: bool) -> tuple[str, int]:
    op, args = _view(f, resugar)
    if op == "atom":
        return args, _PREC["atom"]
    if op in ("bot", "top"):
        return sym[op], _PREC["atom"]
    if op == "not":
        s, p = _render(args[0], sym, resugar)
        if p < _PREC["not"]:
            s = f"({s})"
        space = " " if sym is _SYMBOLS["latex"] else ""
        return f"{sym['not']}{space}{s}", _PREC["not"]
    prec = _PREC[op]
    ls, lp = _render(args[0], sym, resugar)
    rs, rp = _render(args[1], sym, resugar)
    if op == "imp":  # right associative
        lneed, rneed = lp <= prec, rp < prec
    elif op == "cmp":  # non associative
        lneed, rneed = lp <= prec, rp <= prec
    else:  # left associative
        lneed, rneed = lp < prec, rp <= prec
    if lneed:
        ls = f"({ls})"
    if rneed:
        rs = f"({rs})"
    return f"{ls} {sym[op]} {rs}", prec


def render(f: Formula, style: str = "ascii", resugar: bool = False) -> str:
    """Print ``f`` with minimal parentheses.

    The ascii output is accepted by :func:`parse`; with ``resugar`` the
    abbreviations for top, negation, conjunction and disjunction are restored.
    """
    if style not in _SYMBOLS:
        raise ValueError(f"unknown style {style!r}")
    return _render(f, _SYMBOLS[style], resugar)[0]


# ---------------------------------------------------------------------------
# measures


def complexity(f: Formula) -> int:
    """c(p) = c(bot) = 1 and c(A -> B) = c(A <= B) = c(A) + c(B) + 1."""
    if isinstance(f, (Imp, CmpPl)):
        return complexity(f.left) + complexity(f.right) + 1
    return 1


def block_complexity(sigma: Iterable[Formula], head: Formula) -> int:
    return sum(complexity(b) for b in sigma) + complexity(head)


def _walk(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        if isinstance(g, (Imp, CmpPl)):
            stack.append(g.right)
            stack.append(g.left)


def subformulas(f: Formula) -> set[Formula]:
    return set(_walk(f))


def atoms(f: Formula) -> set[str]:
    return {g.name for g in _walk(f) if isinstance(g, Atom)}
