"""Countermodels read off saturated hypersequents, and their verification.

Worlds are component indices.  A block ``<S | A>`` of component ``n``
contributes the neighbourhood ``S^D = {m : set(S) is contained in the
succedent of m}`` to ``N(n)``, and ``p`` holds at ``n`` iff ``p`` is in the
antecedent of ``n``.  Depending on the logic the neighbourhood function is
then adjusted:

* NT and NW add ``O(n) = (union of N(n)) + {n}`` to ``N(n)``;
* NC adds ``{n}``;
* NA and NNA give every world the union of all block neighbourhoods.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .formula import Atom, Formula, atoms
from .hseq import Hypersequent, Refuted, h_prove, is_saturated, unsatisfied_instances
from .logics import LogicId, frame_conditions
from .semantics import FrameCondition, NeighbourhoodModel, check_condition, forces

__all__ = [
    "ExtractionReport",
    "VerificationError",
    "NotSaturatedError",
    "delta_set",
    "extract",
    "verify",
    "refute",
]


class NotSaturatedError(ValueError):
    pass


class VerificationError(AssertionError):
    """An extracted model contradicts the hypersequent it came from."""

    def __init__(self, message: str, report: ExtractionReport | None = None):
        self.report = report
        super().__init__(message)


@dataclass
class Claim:
    world: int
    item: str
    expected: bool
    verified: bool


@dataclass
class ExtractionReport:
    model: NeighbourhoodModel
    witness_world: int
    claims: list[Claim] = field(default_factory=list)
    frame_checks: list[tuple[FrameCondition, bool]] = field(default_factory=list)
    root_refuted: bool | None = None

    @property
    def ok(self) -> bool:
        return (
            all(c.verified for c in self.claims)
            and all(ok for _, ok in self.frame_checks)
            and self.root_refuted is not False
        )

    def to_json(self) -> dict:
        return {
            "model": self.model.to_json(),
            "witnessWorld": self.witness_world,
            "claims": [
                {"world": c.world, "item": c.item, "expected": c.expected, "verified": c.verified}
                for c in self.claims
            ],
            "frameChecks": [{"condition": c.value, "holds": ok} for c, ok in self.frame_checks],
            "rootRefuted": self.root_refuted,
            "ok": self.ok,
        }

    def summary(self) -> str:
        bad = [c for c in self.claims if not c.verified]
        conds = ", ".join(f"{c.value}: {'ok' if ok else 'FAILS'}" for c, ok in self.frame_checks)
        lines = [
            str(self.model),
            f"witness world: {self.witness_world}",
            f"claims checked: {len(self.claims)}, failed: {len(bad)}",
            f"frame conditions: {conds}",
        ]
        return "\n".join(lines)


def delta_set(h: Hypersequent, sigma) -> frozenset[int]:
    """``S^D``: components whose succedent contains every formula of ``sigma``."""
    s = frozenset(sigma)
    return frozenset(m for m, c in enumerate(h.components) if s <= c.succ_set)


def extract(h: Hypersequent, logic: LogicId, check: bool = True) -> NeighbourhoodModel:
    """The countermodel of a saturated hypersequent in ``logic``."""
    if check and not is_saturated(h, logic):
        first = unsatisfied_instances(h, logic)[0]
        raise NotSaturatedError(f"hypersequent is not saturated: {first.describe()}")
    n = len(h)
    base = [{delta_set(h, b.sigma) for b in c.blocks} for c in h.components]
    L = LogicId
    if logic in (L.NT, L.NW):
        fams = [fam | {frozenset().union(*fam) | {w}} for w, fam in enumerate(base)]
    elif logic is L.NC:
        fams = [fam | {frozenset({w})} for w, fam in enumerate(base)]
    elif logic in (L.NA, L.NNA):
        shared = set().union(*base)
        fams = [shared] * n
    else:
        fams = base
    names = set()
    for c in h.components:
        for f in (*c.ante, *c.succ, *(x for b in c.blocks for x in (*b.sigma, b.head))):
            names |= atoms(f)
    valuation = {p: [m for m, c in enumerate(h.components) if Atom(p) in c.ante_set] for p in sorted(names)}
    return NeighbourhoodModel(n, [list(f) for f in fams], valuation)


def verify(
    h: Hypersequent,
    m: NeighbourhoodModel,
    logic: LogicId,
    root: Formula | None = None,
    witness: int = 0,
) -> ExtractionReport:
    """Check that ``m`` makes every antecedent formula true and every
    succedent formula and block false at its world, satisfies the frame
    conditions of ``logic`` and refutes ``root`` at ``witness``.

    Raises :class:`VerificationError` at the first failed check.
    """
    report = ExtractionReport(m, witness)

    def record(world: int, item: str, expected: bool, actual: bool) -> None:
        report.claims.append(Claim(world, item, expected, expected == actual))
        if expected != actual:
            raise VerificationError(
                f"world {world}: {item} should be {'true' if expected else 'false'}", report
            )

    if m.worlds != len(h):
        raise VerificationError(f"model has {m.worlds} worlds, hypersequent {len(h)} components", report)
    for n, c in enumerate(h.components):
        for f in c.ante:
            record(n, str(f), True, forces(m, n, f))
        for f in c.succ:
            record(n, str(f), False, forces(m, n, f))
        for b in c.blocks:
            record(n, str(b), False, forces(m, n, b.formula()))
    for cond in sorted(frame_conditions(logic), key=lambda c: c.value):
        ok = check_condition(m, cond)
        report.frame_checks.append((cond, ok))
        if not ok:
            raise VerificationError(f"frame condition {cond.value} fails", report)
    if root is not None:
        report.root_refuted = not forces(m, witness, root)
        if not report.root_refuted:
            raise VerificationError(f"root formula holds at world {witness}", report)
    return report


def refute(f: Formula, logic: LogicId) -> ExtractionReport | None:
    """Run the hypersequent search; on failure return the verified countermodel report."""
    r = h_prove(f, logic)
    if not isinstance(r, Refuted):
        return None
    return verify(r.hypersequent, extract(r.hypersequent, logic), logic, f)
