"""Multi-premiss sequent calculi G.N* and backtracking proof search.

Sequents are pairs of formula multisets.  The propositional rules are
invertible and applied eagerly; the plausibility rules (CP_n, N_n, T_n, W_n,
W_0, C_0, A_n, N^A_n) are not, so the search backtracks over them.

For the indexed rules the instance is an ordered selection
``C_1 <= D_1, ..., C_n <= D_n`` of left plausibility formulas, and premiss
``k`` exposes ``D_1, ..., D_{k-1}`` on the right.  Since weakening is
admissible, adding a further ``D`` to the right of a premiss never hurts, so
instead of trying every ordered selection the default search grows the
selection greedily: it keeps adding any unused ``C <= D`` whose chain premiss
is derivable and re-tests the closing premiss after each addition.  The
exhaustive enumeration is available as ``strategy="exhaustive"`` and is used
to cross-check the greedy search.

Termination: once no propositional rule applies, a sequent whose set
projection is contained in that of an earlier such sequent on the branch is
blocked.  Weakening and contraction are height-preserving admissible and the
propositional rules height-preserving invertible, so along a minimal-height
derivation these sequents strictly decrease in height and are never
blocked.  The search itself runs on duplicate-free sequents (contraction is
admissible) and the derivation of the given multiset sequent is built from
the resulting plan.  A failure that depended on blocks is cached together
with the sequents it was blocked against and reused only while the branch
still holds sequents containing each of them, so the same blocks fire again.
"""

from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass, field
from functools import cached_property
from operator import attrgetter
from typing import Iterable, Iterator, Sequence

from .formula import Atom, Bot, CmpPl, Formula, Imp, render
from .logics import LogicId, NoCalculusError, g_rules

__all__ = [
    "Sequent",
    "GRuleInstance",
    "GDerivation",
    "BudgetExceeded",
    "DerivationError",
    "premisses_of",
    "g_applicable",
    "g_prove",
    "g_derivable",
    "check_derivation",
    "g_cut_test",
    "DEFAULT_BUDGET",
]

DEFAULT_BUDGET = 10**6


_KEY = attrgetter("key")


def _sorted(fs: Iterable[Formula]) -> tuple[Formula, ...]:
    return tuple(sorted(fs, key=_KEY))


@dataclass(frozen=True, eq=False)
class Sequent:
    """``ante => succ`` with both sides stored as sorted tuples (multisets)."""

    ante: tuple[Formula, ...]
    succ: tuple[Formula, ...]

    def __init__(self, ante: Iterable[Formula] = (), succ: Iterable[Formula] = ()):
        object.__setattr__(self, "ante", _sorted(ante))
        object.__setattr__(self, "succ", _sorted(succ))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Sequent):
            return NotImplemented
        return self.ante == other.ante and self.succ == other.succ

    @cached_property
    def _hash(self) -> int:
        return hash((self.ante, self.succ))

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def ante_set(self) -> frozenset[Formula]:
        return frozenset(self.ante)

    @cached_property
    def succ_set(self) -> frozenset[Formula]:
        return frozenset(self.succ)

    def subsumed_by(self, ante: frozenset, succ: frozenset) -> bool:
        return self.ante_set <= ante and self.succ_set <= succ

    def formula(self) -> Formula:
        """The formula reading: conjunction of the antecedent implies disjunction of the succedent."""
        from .formula import big_conj, big_disj

        return Imp(big_conj(self.ante), big_disj(self.succ))

    def render(self, style: str = "ascii", resugar: bool = True) -> str:
        arrow = {"ascii": "=>", "unicode": "⇒", "latex": r"\Rightarrow"}[style]
        left = ", ".join(render(f, style, resugar) for f in self.ante)
        right = ", ".join(render(f, style, resugar) for f in self.succ)
        return f"{left} {arrow} {right}".strip() if left else f"{arrow} {right}".rstrip()

    def __str__(self) -> str:
        return self.render()

    def normal(self) -> Sequent:
        """The duplicate-free sequent with the same set projection."""
        if len(self.ante_set) == len(self.ante) and len(self.succ_set) == len(self.succ):
            return self
        return Sequent(self.ante_set, self.succ_set)


@dataclass(frozen=True)
class GRuleInstance:
    """A rule name plus the data fixing its premisses.

    ``principal`` is the principal formula of the propositional rules, of
    ``init`` (the atom), of ``C0`` (the left ``A <= B``) and of the rules with
    a right ``A <= B`` (``CP``, ``W``, ``W0``, ``A``).  ``selection`` is the
    ordered list of left ``C <= D`` formulas of the indexed rules.
    """

    rule: str
    principal: Formula | None = None
    selection: tuple[CmpPl, ...] = ()

    @property
    def n(self) -> int:
        return len(self.selection)

    @property
    def label(self) -> str:
        if self.rule in ("CP", "N", "T", "W", "A", "NA"):
            return f"{self.rule}_{self.n}"
        return self.rule


@dataclass
class GDerivation:
    conclusion: Sequent
    rule: GRuleInstance
    premisses: list[GDerivation] = field(default_factory=list)

    def height(self) -> int:
        return 1 + max((p.height() for p in self.premisses), default=0)

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premisses)

    def rules_used(self) -> set[str]:
        out = {self.rule.label}
        for p in self.premisses:
            out |= p.rules_used()
        return out


class BudgetExceeded(RuntimeError):
    def __init__(self, budget: int):
        self.budget = budget
        super().__init__(f"proof search budget of {budget} expansions exhausted")


class DerivationError(ValueError):
    pass


# ---------------------------------------------------------------------------
# rules


def _remove_one(xs: Sequence[Formula], f: Formula) -> list[Formula]:
    out = list(xs)
    try:
        out.remove(f)
    except ValueError:
        raise DerivationError(f"{render(f)} does not occur") from None
    return out


def _remove_all(xs: Sequence[Formula], fs: Iterable[Formula]) -> list[Formula]:
    out = list(xs)
    for f in fs:
        try:
            out.remove(f)
        except ValueError:
            raise DerivationError(f"{render(f)} does not occur") from None
    return out


def _cmps(xs: Iterable[Formula]) -> list[Formula]:
    return [f for f in xs if isinstance(f, CmpPl)]


_FAMILY_OF = {
    "init": "init", "botL": "botL", "impL": "impL", "impR": "impR",
    "CP": "CP", "N": "N", "T": "T", "W": "W", "W0": "W0", "C0": "C0",
    "A": "A", "NA": "NA",
}


def premisses_of(s: Sequent, inst: GRuleInstance, logic: LogicId) -> list[Sequent]:
    """The premisses of ``inst`` applied to ``s``; raises if it does not apply."""
    rules = g_rules(logic)
    r = inst.rule
    if r not in rules:
        raise DerivationError(f"rule {r} is not part of G.{logic.name}")
    a = inst.principal
    sel = inst.selection
    if any(not isinstance(c, CmpPl) for c in sel):
        raise DerivationError("selected formulas must be plausibility formulas")
    if r == "init":
        if not isinstance(a, Atom) or a not in s.ante_set or a not in s.succ_set:
            raise DerivationError("init needs an atom on both sides")
        return []
    if r == "botL":
        if Bot() not in s.ante_set:
            raise DerivationError("botL needs bot on the left")
        return []
    if r == "impL":
        if not isinstance(a, Imp):
            raise DerivationError("impL needs an implication")
        gamma = _remove_one(s.ante, a)
        return [Sequent(gamma, [a.left, *s.succ]), Sequent([*gamma, a.right], s.succ)]
    if r == "impR":
        if not isinstance(a, Imp):
            raise DerivationError("impR needs an implication")
        delta = _remove_one(s.succ, a)
        return [Sequent([*s.ante, a.left], [a.right, *delta])]

    # plausibility rules
    _remove_all(s.ante, sel)  # the selection must occur in the antecedent
    ds = [c.right for c in sel]
    if r in ("N", "T", "NA") and not sel:
        raise DerivationError(f"{r}_n needs n >= 1")
    if r in ("CP", "W", "W0", "A"):
        if not isinstance(a, CmpPl):
            raise DerivationError(f"{r} needs a plausibility formula on the right")
        _remove_one(s.succ, a)
    if r == "CP":
        chain = [Sequent([c.left], [a.left, *ds[:k]]) for k, c in enumerate(sel)]
        return chain + [Sequent([a.right], [a.left, *ds])]
    if r == "N":
        chain = [Sequent([c.left], ds[:k]) for k, c in enumerate(sel)]
        return chain + [Sequent([], ds)]
    if r == "T":
        chain = [Sequent([c.left], ds[:k]) for k, c in enumerate(sel)]
        return chain + [Sequent(s.ante, [*ds, *s.succ])]
    if r == "W":
        chain = [Sequent([c.left], [a.left, *ds[:k]]) for k, c in enumerate(sel)]
        return chain + [Sequent(s.ante, [a.left, *ds, *s.succ])]
    if r == "W0":
        if sel:
            raise DerivationError("W0 has no left principal formulas")
        return [Sequent(s.ante, [a.left, *s.succ])]
    if r == "C0":
        if sel or not isinstance(a, CmpPl):
            raise DerivationError("C0 needs exactly one left plausibility formula")
        _remove_one(s.ante, a)
        return [Sequent([*s.ante, a.left], s.succ), Sequent(s.ante, [a.right, *s.succ])]
    gl, dl = _cmps(s.ante), _cmps(s.succ)
    if r == "A":
        chain = [Sequent([*gl, c.left], [*dl, a.left, *ds[:k]]) for k, c in enumerate(sel)]
        return chain + [Sequent([*gl, a.right], [*dl, a.left, *ds])]
    if r == "NA":
        chain = [Sequent([*gl, c.left], [*dl, *ds[:k]]) for k, c in enumerate(sel)]
        return chain + [Sequent(gl, [*dl, *ds])]
    raise DerivationError(f"unknown rule {r}")


def _selections(cands: Sequence[CmpPl], min_n: int) -> Iterator[tuple[CmpPl, ...]]:
    for k in range(min_n, len(cands) + 1):
        yield from itertools.permutations(cands, k)


def _modal_instances(s: Sequent, logic: LogicId) -> Iterator[GRuleInstance]:
    rules = g_rules(logic)
    left = list(dict.fromkeys(_cmps(s.ante)))
    right = list(dict.fromkeys(_cmps(s.succ)))
    for b in right:
        if "CP" in rules:
            for sel in _selections(left, 0):
                yield GRuleInstance("CP", b, sel)
        if "A" in rules:
            for sel in _selections(left, 0):
                yield GRuleInstance("A", b, sel)
    for name in ("N", "NA"):
        if name in rules:
            for sel in _selections(left, 1):
                yield GRuleInstance(name, None, sel)
    for b in right:
        if "W" in rules:
            for sel in _selections(left, 0):
                yield GRuleInstance("W", b, sel)
        if "W0" in rules:
            yield GRuleInstance("W0", b)
    if "T" in rules:
        for sel in _selections(left, 1):
            yield GRuleInstance("T", None, sel)
    if "C0" in rules:
        for a in left:
            yield GRuleInstance("C0", a)


def g_applicable(s: Sequent, logic: LogicId) -> list[tuple[GRuleInstance, list[Sequent]]]:
    """Every rule instance of G.``logic`` applicable to ``s`` with its premisses.

    Selections range over distinct left formulas; the number of instances is
    factorial in the number of left plausibility formulas.
    """
    g_rules(logic)
    out = []
    for a in dict.fromkeys(s.ante):
        if isinstance(a, Atom) and a in s.succ_set:
            out.append(GRuleInstance("init", a))
    if Bot() in s.ante_set:
        out.append(GRuleInstance("botL"))
    for a in dict.fromkeys(s.ante):
        if isinstance(a, Imp):
            out.append(GRuleInstance("impL", a))
    for a in dict.fromkeys(s.succ):
        if isinstance(a, Imp):
            out.append(GRuleInstance("impR", a))
    out.extend(_modal_instances(s, logic))
    return [(inst, premisses_of(s, inst, logic)) for inst in out]


# ---------------------------------------------------------------------------
# search

_NODEPS: frozenset[int] = frozenset()


class _Search:
    """Search over duplicate-free sequents.

    Derivability depends only on the set projection, so the search records a
    plan (the successful rule instance) per duplicate-free sequent.  The
    derivation of the actual multiset sequent is built afterwards by applying
    the planned instances to it; a rule instance applicable to a sequent is
    applicable to any sequent with a larger set projection, and its premisses
    again have larger set projections than the planned ones.
    """

    def __init__(self, logic: LogicId, budget: int, strategy: str):
        self.logic = logic
        self.rules = g_rules(logic)
        self.budget = budget
        self.exhaustive = strategy == "exhaustive"
        if strategy not in ("greedy", "exhaustive"):
            raise ValueError(f"unknown strategy {strategy!r}")
        self.steps = 0
        self.plan: dict[Sequent, GRuleInstance] = {}
        self.failed: set[Sequent] = set()
        # failures that hinged on blocks, with the frames they were blocked against
        self.failed_cond: dict[Sequent, list[tuple[frozenset, frozenset]]] = {}
        self.hist: list[tuple[frozenset, frozenset]] = []

    def _replay_blocks(self, frames) -> frozenset[int] | None:
        """History indices re-firing the recorded blocks, or None if one is missing."""
        deps = set()
        for fa, fs in frames:
            for i, (ha, hs) in enumerate(self.hist):
                if fa <= ha and fs <= hs:
                    deps.add(i)
                    break
            else:
                return None
        return frozenset(deps)

    def prove(self, s: Sequent) -> tuple[bool, frozenset[int]]:
        """Derivability of ``s`` and the history indices a failure depends on."""
        s = s.normal()
        if s in self.plan:
            return True, _NODEPS
        if s in self.failed:
            return False, _NODEPS
        for a in s.ante:
            if isinstance(a, Bot):
                self.plan[s] = GRuleInstance("botL")
                return True, _NODEPS
        for a in s.ante:
            if isinstance(a, Atom) and a in s.succ_set:
                self.plan[s] = GRuleInstance("init", a)
                return True, _NODEPS
        frames = self.failed_cond.get(s)
        if frames is not None:
            deps = self._replay_blocks(frames)
            if deps is not None:
                return False, deps
        self.steps += 1
        if self.steps > self.budget:
            raise BudgetExceeded(self.budget)
        idx = len(self.hist)
        inst, deps = self._propositional(s)
        if inst is None and deps is None:
            # modal phase: only these sequents take part in loop checking
            for i in range(idx - 1, -1, -1):
                if s.subsumed_by(*self.hist[i]):
                    return False, frozenset((i,))
            self.hist.append((s.ante_set, s.succ_set))
            try:
                inst, deps = self._modal_exhaustive(s) if self.exhaustive else self._modal_greedy(s)
            finally:
                self.hist.pop()
            deps = frozenset(i for i in deps if i < idx)
        if inst is not None:
            self.plan[s] = inst
            return True, _NODEPS
        if deps:
            self.failed_cond[s] = [self.hist[i] for i in sorted(deps)]
        else:
            self.failed.add(s)
        return False, deps

    def _all(self, s: Sequent, inst: GRuleInstance):
        """Prove every premiss; returns (``inst`` or None, deps)."""
        for p in premisses_of(s, inst, self.logic):
            ok, deps = self.prove(p)
            if not ok:
                return None, deps
        return inst, _NODEPS

    def _propositional(self, s: Sequent):
        """Apply one invertible rule; ``(None, None)`` if none applies."""
        for a in s.succ:
            if isinstance(a, Imp):
                return self._all(s, GRuleInstance("impR", a))
        for a in s.ante:
            if isinstance(a, Imp):
                return self._all(s, GRuleInstance("impL", a))
        return None, None

    def _modal_exhaustive(self, s: Sequent):
        deps: set[int] = set()
        for inst in _modal_instances(s, self.logic):
            got, ds = self._all(s, inst)
            if got is not None:
                return got, _NODEPS
            deps |= ds
        return None, deps

    def _modal_greedy(self, s: Sequent):
        rules = self.rules
        left = list(dict.fromkeys(_cmps(s.ante)))
        right = list(dict.fromkeys(_cmps(s.succ)))
        deps: set[int] = set()
        attempts: list[tuple[str, CmpPl | None]] = []
        for b in right:
            if "CP" in rules:
                attempts.append(("CP", b))
            if "A" in rules:
                attempts.append(("A", b))
        for name in ("N", "NA"):
            if name in rules:
                attempts.append((name, None))
        for b in right:
            if "W" in rules:
                attempts.append(("W", b))
            if "W0" in rules:
                attempts.append(("W0", b))
        if "T" in rules:
            attempts.append(("T", None))
        for name, b in attempts:
            inst = self._grow(s, name, b, left, deps)
            if inst is not None:
                return inst, _NODEPS
        if "C0" in rules:
            for a in left:
                got, ds = self._all(s, GRuleInstance("C0", a))
                if got is not None:
                    return got, _NODEPS
                deps |= ds
        return None, deps

    def _try(self, p: Sequent, deps: set[int]) -> bool:
        ok, ds = self.prove(p)
        if not ok:
            deps |= ds
        return ok

    def _grow(
        self, s: Sequent, name: str, b: CmpPl | None, left: list[CmpPl], deps: set[int]
    ) -> GRuleInstance | None:
        min_n = 1 if name in ("N", "T", "NA") else 0
        sel: list[CmpPl] = []
        remaining = list(left)
        while True:
            if len(sel) >= min_n:
                inst = GRuleInstance(name, b, tuple(sel))
                if self._try(premisses_of(s, inst, self.logic)[-1], deps):
                    return inst
            if name == "W0":
                return None
            for c in remaining:
                inst = GRuleInstance(name, b, tuple(sel) + (c,))
                if self._try(premisses_of(s, inst, self.logic)[len(sel)], deps):
                    sel.append(c)
                    remaining.remove(c)
                    break
            else:
                return None

    def build(self, s: Sequent) -> GDerivation:
        """Materialise the derivation of ``s`` from the plan.

        Each sequent is derived with the lowest planned sequent its set
        projection contains, which keeps the duplicates that context-sharing
        rules accumulate from compounding.
        """
        height: dict[Sequent, int] = {}
        for n, inst in self.plan.items():  # premisses were planned first
            height[n] = 1 + max((height[p.normal()] for p in premisses_of(n, inst, self.logic)), default=0)
        by_height = sorted(self.plan, key=height.__getitem__)

        def pick(cur: Sequent) -> Sequent:
            ca, cs = cur.ante_set, cur.succ_set
            for n in by_height:
                if n.ante_set <= ca and n.succ_set <= cs:
                    return n
            raise AssertionError(f"no plan for {cur}")

        memo: dict[Sequent, GDerivation] = {}
        stack: list[tuple[Sequent, bool]] = [(s, False)]
        while stack:
            cur, ready = stack.pop()
            if cur in memo:
                continue
            inst = self.plan[pick(cur)]
            prems = premisses_of(cur, inst, self.logic)
            if ready:
                memo[cur] = GDerivation(cur, inst, [memo[p] for p in prems])
                continue
            stack.append((cur, True))
            stack.extend((p, False) for p in prems if p not in memo)
        return memo[s]


def _as_sequent(x: Sequent | Formula) -> Sequent:
    return x if isinstance(x, Sequent) else Sequent((), (x,))


def g_prove(
    s: Sequent | Formula,
    logic: LogicId,
    budget: int = DEFAULT_BUDGET,
    strategy: str = "greedy",
) -> GDerivation | None:
    """Search for a derivation of ``s`` in G.``logic``.

    Returns ``None`` when no derivation exists and raises
    :class:`BudgetExceeded` when more than ``budget`` sequents were expanded.
    """
    if not logic.has_calculus:
        raise NoCalculusError(logic, "sequent")
    s = _as_sequent(s)
    limit = sys.getrecursionlimit()
    if limit < 20000:
        sys.setrecursionlimit(20000)
    search = _Search(logic, budget, strategy)
    ok, _ = search.prove(s)
    return search.build(s) if ok else None


def g_derivable(s: Sequent | Formula, logic: LogicId, budget: int = DEFAULT_BUDGET) -> bool:
    return g_prove(s, logic, budget) is not None


def check_derivation(d: GDerivation, logic: LogicId) -> None:
    """Replay ``d`` bottom-up; raises :class:`DerivationError` on the first mismatch."""
    stack = [d]
    while stack:
        node = stack.pop()
        expected = premisses_of(node.conclusion, node.rule, logic)
        got = [p.conclusion for p in node.premisses]
        if expected != got:
            raise DerivationError(
                f"{node.rule.label} on {node.conclusion}: expected premisses "
                f"{[str(e) for e in expected]}, found {[str(g) for g in got]}"
            )
        stack.extend(node.premisses)


def g_cut_test(
    left: Sequent, right: Sequent, cut: Formula, logic: LogicId, budget: int = DEFAULT_BUDGET
) -> bool:
    """Derivability of the conclusion of a cut on ``cut``.

    ``left`` is ``G => cut, D`` and ``right`` is ``G', cut => D'``; both must be
    derivable.  Cut is not a rule of the calculus; this is a test harness.
    """
    if cut not in left.succ_set or cut not in right.ante_set:
        raise ValueError("cut formula must occur right in the first and left in the second sequent")
    for p in (left, right):
        if g_prove(p, logic, budget) is None:
            raise ValueError(f"premiss {p} is not derivable")
    concl = Sequent(
        [*left.ante, *_remove_one(right.ante, cut)],
        [*_remove_one(left.succ, cut), *right.succ],
    )
    return g_prove(concl, logic, budget) is not None
