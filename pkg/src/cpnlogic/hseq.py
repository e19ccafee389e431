"""Hypersequent calculi H.N* with blocks and saturation-driven proof search.

All rules are cumulative and invertible, so the search never backtracks: it
repeatedly applies the first rule instance whose saturation condition fails
(in a fixed global order) until every branch is either initial or saturated.
A saturated leaf is returned as a refutation and feeds countermodel
extraction.

Components keep their formulas and blocks as sorted, duplicate-free tuples.
Contraction is height-preserving admissible, and every saturation condition
only looks at set projections, so nothing is lost by never adding an element
that is already present.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator

from .formula import BOT, TOP, Atom, CmpPl, Formula, Imp, big_conj, big_disj, render
from .logics import LogicId, NoCalculusError, h_rules

__all__ = [
    "Block",
    "Component",
    "Hypersequent",
    "HRuleInstance",
    "HDerivation",
    "Proof",
    "Refuted",
    "HCeilingExceeded",
    "HDerivationError",
    "premisses_of",
    "h_applicable",
    "unsatisfied_instances",
    "is_saturated",
    "h_prove",
    "check_h_derivation",
    "DEFAULT_CEILING",
]

DEFAULT_CEILING = 10**6
RULE_ORDER = ("impR", "impL", "cmpR", "W", "N", "T", "C", "cmpL", "jp", "AL", "AR")


def _fset(fs: Iterable[Formula]) -> tuple[Formula, ...]:
    return tuple(sorted(set(fs), key=lambda f: f.key))


@dataclass(frozen=True)
class Block:
    """``<sigma | head>``, read as ``(B1 | ... | Bn) <= head``."""

    sigma: tuple[Formula, ...]
    head: Formula

    def __init__(self, sigma: Iterable[Formula], head: Formula):
        object.__setattr__(self, "sigma", _fset(sigma))
        object.__setattr__(self, "head", head)

    @cached_property
    def sigma_set(self) -> frozenset[Formula]:
        return frozenset(self.sigma)

    @property
    def sort_key(self) -> tuple:
        return (tuple(f.key for f in self.sigma), self.head.key)

    def formula(self) -> Formula:
        return CmpPl(big_disj(self.sigma), self.head)

    def render(self, style: str = "ascii", resugar: bool = True) -> str:
        inner = ", ".join(render(f, style, resugar) for f in self.sigma)
        head = render(self.head, style, resugar)
        if style == "latex":
            return rf"\langle {inner} \lhd {head} \rangle"
        if style == "unicode":
            return f"⟨{inner} ◁ {head}⟩"
        return f"<{inner} | {head}>"

    def __str__(self) -> str:
        return self.render()


def _bset(bs: Iterable[Block]) -> tuple[Block, ...]:
    return tuple(sorted(set(bs), key=lambda b: b.sort_key))


@dataclass(frozen=True)
class Component:
    """A sequent with blocks ``ante => succ, blocks``."""

    ante: tuple[Formula, ...]
    succ: tuple[Formula, ...]
    blocks: tuple[Block, ...]

    def __init__(self, ante: Iterable[Formula] = (), succ: Iterable[Formula] = (), blocks: Iterable[Block] = ()):
        object.__setattr__(self, "ante", _fset(ante))
        object.__setattr__(self, "succ", _fset(succ))
        object.__setattr__(self, "blocks", _bset(blocks))

    @cached_property
    def ante_set(self) -> frozenset[Formula]:
        return frozenset(self.ante)

    @cached_property
    def succ_set(self) -> frozenset[Formula]:
        return frozenset(self.succ)

    def add(self, ante: Iterable[Formula] = (), succ: Iterable[Formula] = (), blocks: Iterable[Block] = ()) -> Component:
        return Component((*self.ante, *ante), (*self.succ, *succ), (*self.blocks, *blocks))

    def formula(self) -> Formula:
        right = [*self.succ, *(b.formula() for b in self.blocks)]
        return Imp(big_conj(self.ante), big_disj(right))

    def render(self, style: str = "ascii", resugar: bool = True) -> str:
        arrow = {"ascii": "=>", "unicode": "⇒", "latex": r"\Rightarrow"}[style]
        left = ", ".join(render(f, style, resugar) for f in self.ante)
        right = ", ".join([*(b.render(style, resugar) for b in self.blocks), *(render(f, style, resugar) for f in self.succ)])
        return " ".join(x for x in (left, arrow, right) if x)

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class Hypersequent:
    components: tuple[Component, ...]

    def __init__(self, components: Iterable[Component]):
        comps = tuple(components)
        if not comps:
            raise ValueError("a hypersequent has at least one component")
        object.__setattr__(self, "components", comps)

    @classmethod
    def of(cls, f: Formula) -> Hypersequent:
        return cls([Component((), (f,))])

    def __len__(self) -> int:
        return len(self.components)

    def __getitem__(self, k: int) -> Component:
        return self.components[k]

    def with_component(self, k: int, c: Component) -> Hypersequent:
        comps = list(self.components)
        comps[k] = c
        return Hypersequent(comps)

    def multiset_key(self) -> tuple:
        return tuple(sorted(str(c) for c in self.components))

    def render(self, style: str = "ascii", resugar: bool = True) -> str:
        sep = r" \mid " if style == "latex" else " | "
        return sep.join(c.render(style, resugar) for c in self.components)

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class HRuleInstance:
    """``rule`` applied in component ``k``.

    ``principal`` is the principal formula (or block for ``jp`` and ``W``);
    ``block`` is the block of ``cmpL``; ``target`` is the receiving component
    of ``AL``/``AR``.
    """

    rule: str
    k: int
    principal: Formula | Block | None = None
    block: Block | None = None
    target: int | None = None

    @property
    def label(self) -> str:
        return self.rule

    def describe(self) -> str:
        parts = [f"{self.rule} @{self.k}"]
        if self.principal is not None:
            parts.append(str(self.principal))
        if self.block is not None:
            parts.append(f"on {self.block}")
        if self.target is not None:
            parts.append(f"-> @{self.target}")
        return " ".join(parts)


@dataclass
class HDerivation:
    conclusion: Hypersequent
    rule: HRuleInstance
    premisses: list[HDerivation] = field(default_factory=list)

    def size(self) -> int:
        n, stack = 0, [self]
        while stack:
            d = stack.pop()
            n += 1
            stack.extend(d.premisses)
        return n

    def height(self) -> int:
        best, stack = 0, [(self, 1)]
        while stack:
            d, h = stack.pop()
            best = max(best, h)
            stack.extend((p, h + 1) for p in d.premisses)
        return best


@dataclass
class Proof:
    derivation: HDerivation
    steps: int = 0

    proved = True


@dataclass
class Refuted:
    """A saturated leaf and the rule applications on the branch leading to it."""

    hypersequent: Hypersequent
    trace: list[str]
    steps: int = 0

    proved = False


class HCeilingExceeded(RuntimeError):
    def __init__(self, ceiling: int):
        self.ceiling = ceiling
        super().__init__(f"hypersequent search exceeded the safety ceiling of {ceiling} rule applications")


class HDerivationError(ValueError):
    pass


# ---------------------------------------------------------------------------
# rules


def _check_k(h: Hypersequent, k: int) -> Component:
    if not 0 <= k < len(h):
        raise HDerivationError(f"no component {k}")
    return h[k]


def premisses_of(h: Hypersequent, inst: HRuleInstance, logic: LogicId) -> list[Hypersequent]:
    """Premisses of ``inst`` applied to ``h``; raises if it does not apply."""
    if inst.rule not in h_rules(logic):
        raise HDerivationError(f"rule {inst.rule} is not part of H.{logic.name}")
    c = _check_k(h, inst.k)
    r, a = inst.rule, inst.principal

    def need(cond: bool, msg: str) -> None:
        if not cond:
            raise HDerivationError(f"{inst.describe()}: {msg}")

    if r == "init":
        need(isinstance(a, Atom) and a in c.ante_set and a in c.succ_set, "needs an atom on both sides")
        return []
    if r == "botL":
        need(BOT in c.ante_set, "needs bot on the left")
        return []
    if r == "impL":
        need(isinstance(a, Imp) and a in c.ante_set, "needs a left implication")
        return [h.with_component(inst.k, c.add(ante=[a.right])), h.with_component(inst.k, c.add(succ=[a.left]))]
    if r == "impR":
        need(isinstance(a, Imp) and a in c.succ_set, "needs a right implication")
        return [h.with_component(inst.k, c.add(ante=[a.left], succ=[a.right]))]
    if r == "cmpR":
        need(isinstance(a, CmpPl) and a in c.succ_set, "needs a right plausibility formula")
        return [h.with_component(inst.k, c.add(blocks=[Block([a.left], a.right)]))]
    if r == "cmpL":
        b = inst.block
        need(isinstance(a, CmpPl) and a in c.ante_set, "needs a left plausibility formula")
        need(b is not None and b in c.blocks, "needs a block of the component")
        grown = Component(c.ante, c.succ, [x for x in c.blocks if x != b] + [Block([a.right, *b.sigma], b.head)])
        return [h.with_component(inst.k, grown), h.with_component(inst.k, c.add(blocks=[Block(b.sigma, a.left)]))]
    if r == "jp":
        need(isinstance(a, Block) and a in c.blocks, "needs a block of the component")
        return [Hypersequent([*h.components, Component([a.head], a.sigma)])]
    if r == "N":
        return [h.with_component(inst.k, c.add(blocks=[Block([BOT], TOP)]))]
    if r == "T":
        need(isinstance(a, CmpPl) and a in c.ante_set, "needs a left plausibility formula")
        return [h.with_component(inst.k, c.add(succ=[a.right])), h.with_component(inst.k, c.add(blocks=[Block([BOT], a.left)]))]
    if r == "W":
        need(isinstance(a, Block) and a in c.blocks, "needs a block of the component")
        return [h.with_component(inst.k, c.add(succ=a.sigma))]
    if r == "C":
        need(isinstance(a, CmpPl) and a in c.ante_set, "needs a left plausibility formula")
        return [h.with_component(inst.k, c.add(succ=[a.right])), h.with_component(inst.k, c.add(ante=[a.left]))]
    if r in ("AL", "AR"):
        need(isinstance(a, CmpPl), "needs a plausibility formula")
        j = inst.target
        need(j is not None and 0 <= j < len(h) and j != inst.k, "needs another component")
        if r == "AL":
            need(a in c.ante_set, "principal must be on the left")
            return [h.with_component(j, h[j].add(ante=[a]))]
        need(a in c.succ_set, "principal must be on the right")
        return [h.with_component(j, h[j].add(succ=[a]))]
    raise HDerivationError(f"unknown rule {r}")


def _cmps(fs: Iterable[Formula]) -> list[CmpPl]:
    return [f for f in fs if isinstance(f, CmpPl)]


def _instances(h: Hypersequent, rule: str) -> Iterator[HRuleInstance]:
    """All schema instances of ``rule`` in canonical order."""
    for k, c in enumerate(h.components):
        if rule == "init":
            for a in c.ante:
                if isinstance(a, Atom) and a in c.succ_set:
                    yield HRuleInstance("init", k, a)
        elif rule == "botL":
            if BOT in c.ante_set:
                yield HRuleInstance("botL", k)
        elif rule == "impL":
            for a in c.ante:
                if isinstance(a, Imp):
                    yield HRuleInstance("impL", k, a)
        elif rule == "impR":
            for a in c.succ:
                if isinstance(a, Imp):
                    yield HRuleInstance("impR", k, a)
        elif rule == "cmpR":
            for a in _cmps(c.succ):
                yield HRuleInstance("cmpR", k, a)
        elif rule in ("T", "C"):
            for a in _cmps(c.ante):
                yield HRuleInstance(rule, k, a)
        elif rule == "cmpL":
            for a in _cmps(c.ante):
                for b in c.blocks:
                    yield HRuleInstance("cmpL", k, a, b)
        elif rule in ("jp", "W"):
            for b in c.blocks:
                yield HRuleInstance(rule, k, b)
        elif rule == "N":
            yield HRuleInstance("N", k)
        elif rule in ("AL", "AR"):
            side = c.ante if rule == "AL" else c.succ
            for a in _cmps(side):
                for j in range(len(h)):
                    if j != k:
                        yield HRuleInstance(rule, k, a, target=j)


def h_applicable(h: Hypersequent, logic: LogicId) -> list[tuple[HRuleInstance, list[Hypersequent]]]:
    """Every instance of the rules of H.``logic`` with its premisses."""
    out = []
    for rule in h_rules(logic):
        for inst in _instances(h, rule):
            out.append((inst, premisses_of(h, inst, logic)))
    return out


def _saturated_wrt(h: Hypersequent, inst: HRuleInstance) -> bool:
    c = h[inst.k]
    a, r = inst.principal, inst.rule
    if r == "init":
        return not (c.ante_set & c.succ_set)
    if r == "botL":
        return BOT not in c.ante_set
    if r == "impL":
        return a.left in c.succ_set or a.right in c.ante_set
    if r == "impR":
        return a.left in c.ante_set and a.right in c.succ_set
    if r == "cmpL":
        b = inst.block
        return a.right in b.sigma_set or any(p.head == a.left and b.sigma_set <= p.sigma_set for p in c.blocks)
    if r == "cmpR":
        return any(b.head == a.right and a.left in b.sigma_set for b in c.blocks)
    if r == "jp":
        return any(a.head in d.ante_set and a.sigma_set <= d.succ_set for d in h.components)
    if r == "N":
        return any(b.head == TOP and BOT in b.sigma_set for b in c.blocks)
    if r == "T":
        return a.right in c.succ_set or any(b.head == a.left and BOT in b.sigma_set for b in c.blocks)
    if r == "W":
        return a.sigma_set <= c.succ_set
    if r == "C":
        return a.right in c.succ_set or a.left in c.ante_set
    if r == "AL":
        return a in h[inst.target].ante_set
    if r == "AR":
        return a in h[inst.target].succ_set
    raise ValueError(r)


def unsatisfied_instances(h: Hypersequent, logic: LogicId) -> list[HRuleInstance]:
    """Rule instances of H.``logic`` whose saturation condition fails on ``h``.

    ``init`` is reported once per component whose two sides share any formula.
    """
    rules = h_rules(logic)
    out = []
    for k, c in enumerate(h.components):
        common = sorted(c.ante_set & c.succ_set, key=lambda f: f.key)
        if common:
            out.append(HRuleInstance("init", k, common[0]))
        if BOT in c.ante_set:
            out.append(HRuleInstance("botL", k))
    for rule in RULE_ORDER:
        if rule in rules:
            out.extend(i for i in _instances(h, rule) if not _saturated_wrt(h, i))
    return out


def is_saturated(h: Hypersequent, logic: LogicId) -> bool:
    return not unsatisfied_instances(h, logic)


# ---------------------------------------------------------------------------
# search


def _closing(h: Hypersequent) -> HRuleInstance | None:
    for k, c in enumerate(h.components):
        if BOT in c.ante_set:
            return HRuleInstance("botL", k)
        for a in c.ante:
            if isinstance(a, Atom) and a in c.succ_set:
                return HRuleInstance("init", k, a)
    return None


class _Saturated(Exception):
    def __init__(self, h: Hypersequent, trace: list[str]):
        self.h = h
        self.trace = trace


class _HSearch:
    def __init__(self, logic: LogicId, ceiling: int):
        self.logic = logic
        self.rules = tuple(r for r in RULE_ORDER if r in h_rules(logic))
        self.ceiling = ceiling
        self.steps = 0
        self.trace: list[str] = []

    def next_instance(self, h: Hypersequent) -> HRuleInstance | None:
        for rule in self.rules:
            for inst in _instances(h, rule):
                if not _saturated_wrt(h, inst):
                    return inst
        return None

    def search(self, h: Hypersequent) -> HDerivation:
        # single-premiss steps are unrolled into a loop to keep recursion shallow
        chain: list[tuple[Hypersequent, HRuleInstance]] = []
        depth = len(self.trace)
        while True:
            close = _closing(h)
            if close is not None:
                d = HDerivation(h, close)
                break
            inst = self.next_instance(h)
            if inst is None:
                raise _Saturated(h, list(self.trace))
            self.steps += 1
            if self.steps > self.ceiling:
                raise HCeilingExceeded(self.ceiling)
            prems = premisses_of(h, inst, self.logic)
            if len(prems) == 1:
                self.trace.append(inst.describe())
                chain.append((h, inst))
                h = prems[0]
                continue
            subs = []
            for i, p in enumerate(prems):
                self.trace.append(f"{inst.describe()} [{i + 1}/{len(prems)}]")
                subs.append(self.search(p))
                self.trace.pop()
            d = HDerivation(h, inst, subs)
            break
        for g, inst in reversed(chain):
            d = HDerivation(g, inst, [d])
        del self.trace[depth:]
        return d


def h_prove(x: Formula | Hypersequent, logic: LogicId, ceiling: int = DEFAULT_CEILING) -> Proof | Refuted:
    """Run the saturation strategy on ``x`` (a formula is read as ``=> x``).

    Deterministic: the result is a function of the input and the logic.
    Raises :class:`HCeilingExceeded` if more than ``ceiling`` rule
    applications are made, which would indicate a defect since the strategy
    terminates.
    """
    if not logic.has_calculus:
        raise NoCalculusError(logic, "hypersequent")
    h = x if isinstance(x, Hypersequent) else Hypersequent.of(x)
    s = _HSearch(logic, ceiling)
    try:
        d = s.search(h)
    except _Saturated as e:
        return Refuted(e.h, e.trace, s.steps)
    return Proof(d, s.steps)


def check_h_derivation(d: HDerivation, logic: LogicId) -> None:
    """Replay ``d``; raises :class:`HDerivationError` on the first mismatch."""
    stack = [d]
    while stack:
        node = stack.pop()
        expected = premisses_of(node.conclusion, node.rule, logic)
        got = [p.conclusion for p in node.premisses]
        if expected != got:
            raise HDerivationError(f"{node.rule.describe()}: premisses do not match the rule")
        stack.extend(node.premisses)
