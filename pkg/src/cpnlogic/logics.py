"""Registry of the logics, their frame conditions, rule sets and axioms."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .formula import BOT, TOP, Atom, CmpPl, Formula, Imp, conj, disj, neg
from .semantics import FrameCondition as FC

__all__ = [
    "LogicId",
    "AxiomSchema",
    "NoCalculusError",
    "frame_conditions",
    "g_rules",
    "h_rules",
    "axioms_of",
    "instantiate",
    "axiom_corpus",
    "cpr_instances",
    "separation_suite",
    "CALCULUS_LOGICS",
    "LATTICE_EDGES",
]


class LogicId(enum.Enum):
    N = "n"
    NN = "nn"
    NT = "nt"
    NW = "nw"
    NC = "nc"
    NA = "na"
    NNA = "nna"
    # semantic only: no calculus is known for uniformity, and the absolute
    # extensions of NT, NW, NC have no calculus either
    NU = "nu"
    NNU = "nnu"
    NTU = "ntu"
    NWU = "nwu"
    NCU = "ncu"
    NTA = "nta"
    NWA = "nwa"
    NCA = "nca"

    @classmethod
    def parse(cls, name: str) -> LogicId:
        try:
            return cls(name.lower())
        except ValueError:
            raise ValueError(f"unknown logic {name!r}") from None

    @property
    def has_calculus(self) -> bool:
        return self in CALCULUS_LOGICS

    def __str__(self) -> str:
        return self.name


class NoCalculusError(ValueError):
    def __init__(self, logic: LogicId, kind: str = ""):
        self.logic = logic
        super().__init__(f"logic {logic.name} has no {kind + ' ' if kind else ''}calculus")


CALCULUS_LOGICS = (LogicId.N, LogicId.NN, LogicId.NT, LogicId.NW, LogicId.NC, LogicId.NA, LogicId.NNA)

# lower layer of the lattice: (weaker, stronger)
LATTICE_EDGES = (
    (LogicId.N, LogicId.NN),
    (LogicId.NN, LogicId.NT),
    (LogicId.NT, LogicId.NW),
    (LogicId.NW, LogicId.NC),
    (LogicId.N, LogicId.NA),
    (LogicId.NA, LogicId.NNA),
    (LogicId.NN, LogicId.NNA),
)

_BASE_CONDITIONS = {
    "N": {FC.NonEmptiness},
    "NN": {FC.NonEmptiness, FC.N},
    "NT": {FC.NonEmptiness, FC.T},
    "NW": {FC.NonEmptiness, FC.W},
    "NC": {FC.NonEmptiness, FC.C},
}


def frame_conditions(logic: LogicId) -> frozenset[FC]:
    name = logic.name
    if name in _BASE_CONDITIONS:
        return frozenset(_BASE_CONDITIONS[name])
    extra = FC.APlus if name.endswith("A") else FC.U
    return frozenset(_BASE_CONDITIONS[name[:-1]] | {extra})


_G_PROP = ("init", "botL", "impL", "impR")
_G_RULES = {
    LogicId.N: _G_PROP + ("CP",),
    LogicId.NN: _G_PROP + ("CP", "N"),
    LogicId.NT: _G_PROP + ("CP", "T"),
    LogicId.NW: _G_PROP + ("CP", "W", "T"),
    LogicId.NC: _G_PROP + ("CP", "W0", "C0"),
    LogicId.NA: _G_PROP + ("A",),
    LogicId.NNA: _G_PROP + ("A", "NA"),
}

_H_BASE = ("init", "botL", "impL", "impR", "cmpL", "cmpR", "jp")
_H_RULES = {
    LogicId.N: _H_BASE,
    LogicId.NN: _H_BASE + ("N",),
    LogicId.NT: _H_BASE + ("T",),
    LogicId.NW: _H_BASE + ("T", "W"),
    LogicId.NC: _H_BASE + ("W", "C"),
    LogicId.NA: _H_BASE + ("AL", "AR"),
    LogicId.NNA: _H_BASE + ("N", "AL", "AR"),
}


def g_rules(logic: LogicId) -> tuple[str, ...]:
    """Rule families of the multi-premiss sequent calculus for ``logic``.

    ``CP``, ``N``, ``T``, ``A`` and ``NA`` are indexed families: ``CP``, ``W``
    and ``A`` admit n >= 0 principal left formulas, the others n >= 1.
    """
    try:
        return _G_RULES[logic]
    except KeyError:
        raise NoCalculusError(logic, "sequent") from None


def h_rules(logic: LogicId) -> tuple[str, ...]:
    try:
        return _H_RULES[logic]
    except KeyError:
        raise NoCalculusError(logic, "hypersequent") from None


# ---------------------------------------------------------------------------
# axioms


class AxiomSchema(enum.Enum):
    cpr = "cpr"
    tr = "tr"
    or_ = "or"
    n = "n"
    t = "t"
    w = "w"
    c = "c"
    uMinus = "u-"
    u = "u"
    aMinus = "a-"
    a = "a"
    co = "co"

    @property
    def arity(self) -> int:
        return _ARITY[self]


_ARITY = {
    AxiomSchema.cpr: 2,
    AxiomSchema.tr: 3,
    AxiomSchema.or_: 3,
    AxiomSchema.n: 0,
    AxiomSchema.t: 1,
    AxiomSchema.w: 1,
    AxiomSchema.c: 1,
    AxiomSchema.uMinus: 1,
    AxiomSchema.u: 1,
    AxiomSchema.aMinus: 2,
    AxiomSchema.a: 2,
    AxiomSchema.co: 2,
}


def _cp(a: Formula, b: Formula) -> Formula:
    return CmpPl(a, b)


def instantiate(schema: AxiomSchema, args: Sequence[Formula]) -> Formula:
    """Substitute ``args`` for the metavariables of ``schema``.

    ``cpr`` is a rule (from A -> B infer B <= A); for it the conclusion
    ``B <= A`` is returned and the caller is responsible for the premiss.
    """
    if len(args) != schema.arity:
        raise ValueError(f"schema {schema.value} takes {schema.arity} arguments, got {len(args)}")
    S = AxiomSchema
    if schema is S.cpr:
        a, b = args
        return _cp(b, a)
    if schema is S.tr:
        a, b, c = args
        return Imp(conj(_cp(a, b), _cp(b, c)), _cp(a, c))
    if schema is S.or_:
        a, b, c = args
        return Imp(conj(_cp(a, b), _cp(a, c)), _cp(a, disj(b, c)))
    if schema is S.n:
        return neg(_cp(BOT, TOP))
    if schema is S.t:
        (a,) = args
        return Imp(_cp(BOT, a), neg(a))
    if schema is S.w:
        (a,) = args
        return Imp(a, _cp(a, TOP))
    if schema is S.c:
        (a,) = args
        return Imp(_cp(a, TOP), a)
    if schema is S.uMinus:
        (a,) = args
        return Imp(neg(_cp(BOT, a)), _cp(BOT, _cp(BOT, a)))
    if schema is S.u:
        (a,) = args
        return Imp(_cp(BOT, a), _cp(BOT, neg(_cp(BOT, a))))
    if schema is S.aMinus:
        a, b = args
        return Imp(_cp(a, b), _cp(BOT, neg(_cp(a, b))))
    if schema is S.a:
        a, b = args
        return Imp(neg(_cp(a, b)), _cp(BOT, _cp(a, b)))
    if schema is S.co:
        a, b = args
        return disj(_cp(a, b), _cp(b, a))
    raise ValueError(schema)


_AX = AxiomSchema
_BASE_AXIOMS = {
    "N": (_AX.tr, _AX.or_),
    "NN": (_AX.tr, _AX.or_, _AX.n),
    "NT": (_AX.tr, _AX.or_, _AX.t),
    "NW": (_AX.tr, _AX.or_, _AX.t, _AX.w),
    "NC": (_AX.tr, _AX.or_, _AX.t, _AX.w, _AX.c),
}


def axioms_of(logic: LogicId) -> tuple[AxiomSchema, ...]:
    """Axiom schemas of ``logic``; the rule ``cpr`` is common to all and omitted."""
    name = logic.name
    if name in _BASE_AXIOMS:
        return _BASE_AXIOMS[name]
    base = name[:-1]
    extra = (_AX.aMinus, _AX.a) if name.endswith("A") else (_AX.uMinus, _AX.u)
    return _BASE_AXIOMS[base] + extra


def _arguments(atom_names: Iterable[str]) -> list[Formula]:
    return [Atom(a) for a in atom_names] + [BOT, TOP]


def axiom_corpus(logic: LogicId, atom_names: Iterable[str] = ("p", "q", "r")) -> list[Formula]:
    """Every instance of the axioms of ``logic`` over the atoms, bot and top."""
    args = _arguments(atom_names)
    out: dict[Formula, None] = {}
    for schema in axioms_of(logic):
        for combo in itertools.product(args, repeat=schema.arity):
            out[instantiate(schema, combo)] = None
    return list(out)


def cpr_instances(atom_names: Iterable[str] = ("a", "b", "c")) -> list[tuple[Formula, Formula]]:
    """Instances of the plausibility rule with a classically valid premiss.

    Each item is ``(premiss A -> B, conclusion B <= A)``.
    """
    xs = [Atom(a) for a in atom_names]
    pairs = []
    for x, y in itertools.permutations(xs, 2):
        pairs.append((conj(x, y), x))  # A & B -> A
        pairs.append((x, disj(x, y)))  # A -> A | B
    for x in xs:
        pairs.append((x, x))
        pairs.append((BOT, x))
        pairs.append((x, TOP))
    return [(Imp(a, b), instantiate(AxiomSchema.cpr, (a, b))) for a, b in pairs]


@dataclass(frozen=True)
class SeparationItem:
    """A formula valid in ``stronger`` but not derivable in ``weaker``."""

    weaker: LogicId
    stronger: LogicId | None
    schema: AxiomSchema
    formula: Formula


def separation_suite() -> list[SeparationItem]:
    p, q = Atom("p"), Atom("q")
    t_inst = instantiate(_AX.t, (p,))
    w_inst = instantiate(_AX.w, (p,))
    c_inst = instantiate(_AX.c, (p,))
    n_inst = instantiate(_AX.n, ())
    am_inst = instantiate(_AX.aMinus, (p, q))
    a_inst = instantiate(_AX.a, (p, q))
    L = LogicId
    items = [
        SeparationItem(L.N, L.NN, _AX.n, n_inst),
        SeparationItem(L.NN, L.NT, _AX.t, t_inst),
        SeparationItem(L.NT, L.NW, _AX.w, w_inst),
        SeparationItem(L.NW, L.NC, _AX.c, c_inst),
        SeparationItem(L.N, L.NA, _AX.aMinus, am_inst),
        SeparationItem(L.N, L.NA, _AX.a, a_inst),
        SeparationItem(L.NA, L.NNA, _AX.n, n_inst),
        SeparationItem(L.NN, L.NNA, _AX.aMinus, am_inst),
        SeparationItem(L.NN, L.NNA, _AX.a, a_inst),
    ]
    # absoluteness is independent of the centering family
    for weak in (L.NT, L.NW, L.NC):
        items.append(SeparationItem(weak, None, _AX.aMinus, am_inst))
        items.append(SeparationItem(weak, None, _AX.a, a_inst))
    co = instantiate(_AX.co, (p, q))
    for logic in CALCULUS_LOGICS:
        items.append(SeparationItem(logic, None, _AX.co, co))
    return items
