"""Finite neighbourhood models and the forcing relation.

Two evaluators live here.  :func:`forces` follows the inductive truth clauses
world by world and is the reference.  :class:`ModelBatch` encodes many models
with the same number of worlds as integer bitmasks and evaluates a formula on
all of them at once with numpy; the exhaustive enumerator and the random
model sampler are built on it.  The test-suite checks the two against each
other.

Bitmask encoding for ``n`` worlds: a world set is an int in ``0 .. 2**n - 1``;
the nonempty sets are numbered ``s = 1 .. 2**n - 1`` and a neighbourhood
family is an int whose bit ``s - 1`` says whether set ``s`` belongs to it.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .formula import Atom, Bot, CmpPl, Formula, Imp, atoms as formula_atoms

__all__ = [
    "FrameCondition",
    "NeighbourhoodModel",
    "ModelError",
    "ModelBudgetExceeded",
    "NotFoundUpToBound",
    "SemanticCountermodel",
    "ModelBatch",
    "forces",
    "exists_forces",
    "extension",
    "valid_in_model",
    "check_condition",
    "enumerate_models",
    "iter_model_batches",
    "count_models",
    "random_models",
    "find_semantic_countermodel",
    "model_from_json",
    "model_to_json",
    "bounded_validity_counterexample",
    "all_conditions_hold",
    "DEFAULT_MODEL_CEILING",
]

DEFAULT_MODEL_CEILING = 10**6


class FrameCondition(enum.Enum):
    NonEmptiness = "nonemptiness"
    N = "N"
    T = "T"
    W = "W"
    C = "C"
    U = "U"
    A = "A"
    APlus = "A+"

    @classmethod
    def parse(cls, name: str) -> FrameCondition:
        for c in cls:
            if name in (c.name, c.value) or name.lower() in (c.name.lower(), c.value.lower()):
                return c
        raise ValueError(f"unknown frame condition {name!r}")


_LOCAL = frozenset({FrameCondition.N, FrameCondition.T, FrameCondition.W, FrameCondition.C})


class ModelError(ValueError):
    """Malformed model data.  ``path`` points into the JSON document."""

    def __init__(self, message: str, path: str = "$"):
        self.path = path
        super().__init__(f"{path}: {message}")


class ModelBudgetExceeded(RuntimeError):
    def __init__(self, ceiling: int):
        self.ceiling = ceiling
        super().__init__(f"model enumeration ceiling of {ceiling} models reached")


def _set_key(s: frozenset[int]) -> tuple[int, ...]:
    return tuple(sorted(s))


@dataclass(frozen=True)
class NeighbourhoodModel:
    """A finite neighbourhood model ``<W, N, V>`` with ``W = {0, .., worlds-1}``.

    ``neighbourhoods[w]`` is the family N(w), stored sorted and deduplicated;
    ``valuation`` maps atom names to the worlds where they hold.
    """

    worlds: int
    neighbourhoods: tuple[tuple[frozenset[int], ...], ...]
    valuation: tuple[tuple[str, frozenset[int]], ...]

    def __init__(
        self,
        worlds: int,
        neighbourhoods: Sequence[Iterable[Iterable[int]]],
        valuation: Mapping[str, Iterable[int]] | None = None,
    ):
        if not isinstance(worlds, int) or worlds < 1:
            raise ModelError("a model needs at least one world", "$.worlds")
        if len(neighbourhoods) != worlds:
            raise ModelError(
                f"expected {worlds} neighbourhood families, got {len(neighbourhoods)}",
                "$.neighbourhoods",
            )
        fams = []
        for w, fam in enumerate(neighbourhoods):
            seen: dict[frozenset[int], None] = {}
            for i, alpha in enumerate(fam):
                alpha = frozenset(alpha)
                path = f"$.neighbourhoods[{w}][{i}]"
                if not alpha:
                    raise ModelError("empty neighbourhood (N(w) may not contain the empty set)", path)
                bad = [v for v in alpha if not isinstance(v, int) or not 0 <= v < worlds]
                if bad:
                    raise ModelError(f"world index {bad[0]!r} out of range", path)
                if alpha in seen:
                    raise ModelError("duplicate neighbourhood", path)
                seen[alpha] = None
            fams.append(tuple(sorted(seen, key=_set_key)))
        val = []
        for name, ws in sorted((valuation or {}).items()):
            ws = frozenset(ws)
            bad = [v for v in ws if not isinstance(v, int) or not 0 <= v < worlds]
            if bad:
                raise ModelError(f"world index {bad[0]!r} out of range", f"$.valuation.{name}")
            val.append((name, ws))
        object.__setattr__(self, "worlds", worlds)
        object.__setattr__(self, "neighbourhoods", tuple(fams))
        object.__setattr__(self, "valuation", tuple(val))

    @property
    def W(self) -> range:
        return range(self.worlds)

    def N(self, w: int) -> tuple[frozenset[int], ...]:
        return self.neighbourhoods[w]

    def V(self, name: str) -> frozenset[int]:
        for n, ws in self.valuation:
            if n == name:
                return ws
        return frozenset()

    def to_json(self) -> dict:
        return model_to_json(self)

    def __str__(self) -> str:
        def fmt(s):
            return "{" + ", ".join(map(str, sorted(s))) + "}"

        lines = [f"W = {fmt(range(self.worlds))}"]
        for w in self.W:
            lines.append(f"N({w}) = {{{', '.join(fmt(a) for a in self.N(w))}}}")
        for name, ws in self.valuation:
            lines.append(f"V({name}) = {fmt(ws)}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# forcing, world by world


def forces(m: NeighbourhoodModel, w: int, f: Formula) -> bool:
    if not 0 <= w < m.worlds:
        raise IndexError(f"world {w} out of range for a model with {m.worlds} worlds")
    if isinstance(f, Atom):
        return w in m.V(f.name)
    if isinstance(f, Bot):
        return False
    if isinstance(f, Imp):
        return not forces(m, w, f.left) or forces(m, w, f.right)
    if isinstance(f, CmpPl):
        return all(
            not exists_forces(m, alpha, f.right) or exists_forces(m, alpha, f.left)
            for alpha in m.N(w)
        )
    raise TypeError(f"not a formula: {f!r}")


def exists_forces(m: NeighbourhoodModel, alpha: Iterable[int], f: Formula) -> bool:
    """``alpha ⊩∃ f``: some world of ``alpha`` forces ``f``."""
    return any(forces(m, v, f) for v in alpha)


def extension(m: NeighbourhoodModel, f: Formula) -> frozenset[int]:
    """The set of worlds forcing ``f``."""
    return frozenset(w for w in m.W if forces(m, w, f))


def valid_in_model(m: NeighbourhoodModel, f: Formula) -> bool:
    return all(forces(m, w, f) for w in m.W)


def check_condition(m: NeighbourhoodModel, c: FrameCondition) -> bool:
    W, N = m.W, m.N
    if c is FrameCondition.NonEmptiness:
        return all(alpha for w in W for alpha in N(w))
    if c is FrameCondition.N:
        return all(N(w) for w in W)
    if c is FrameCondition.T:
        return all(any(w in alpha for alpha in N(w)) for w in W)
    if c is FrameCondition.W:
        return all(N(w) and all(w in alpha for alpha in N(w)) for w in W)
    if c is FrameCondition.C:
        return all(
            frozenset({w}) in N(w) and all(w in alpha for alpha in N(w)) for w in W
        )
    if c is FrameCondition.U:
        union = [frozenset().union(*N(w)) for w in W]
        return all(union[v] == union[w] for w in W for alpha in N(w) for v in alpha)
    if c is FrameCondition.A:
        return all(set(N(v)) == set(N(w)) for w in W for alpha in N(w) for v in alpha)
    if c is FrameCondition.APlus:
        return all(set(N(v)) == set(N(0)) for v in W)
    raise ValueError(c)


# ---------------------------------------------------------------------------
# JSON


def model_to_json(m: NeighbourhoodModel) -> dict:
    return {
        "worlds": m.worlds,
        "neighbourhoods": [[sorted(a) for a in m.N(w)] for w in m.W],
        "valuation": {name: sorted(ws) for name, ws in m.valuation},
    }


def model_from_json(data: dict | str) -> NeighbourhoodModel:
    """Load a model, reporting schema violations with a JSON path."""
    import jsonschema

    from .export import load_schema

    if isinstance(data, str):
        data = json.loads(data)
    validator = jsonschema.Draft202012Validator(load_schema("model"))
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        raise ModelError(e.message, e.json_path)
    return NeighbourhoodModel(data["worlds"], data["neighbourhoods"], data.get("valuation", {}))


# ---------------------------------------------------------------------------
# bitmask machinery


@lru_cache(maxsize=None)
def _tables(n: int):
    """Lookup tables for ``n`` worlds."""
    nsets = 2**n - 1
    nfam = 2**nsets
    subsets = np.arange(1, nsets + 1, dtype=np.int64)
    # bits (over set numbering) of the sets containing world w
    contains = np.array(
        [sum(1 << (s - 1) for s in range(1, nsets + 1) if s >> w & 1) for w in range(n)],
        dtype=np.int64,
    )
    singleton = np.array([1 << ((1 << w) - 1) for w in range(n)], dtype=np.int64)
    fams = np.arange(nfam, dtype=np.int64)
    union = np.zeros(nfam, dtype=np.int64)
    for s in range(1, nsets + 1):
        union |= np.where(fams >> (s - 1) & 1, s, 0)
    return subsets, contains, singleton, union


def _local_ok(n: int, w: int, fams: np.ndarray, conditions: Iterable[FrameCondition]) -> np.ndarray:
    _, contains, singleton, _ = _tables(n)
    ok = np.ones(fams.shape, dtype=bool)
    outside = ~contains[w]
    for c in conditions:
        if c is FrameCondition.N:
            ok &= fams != 0
        elif c is FrameCondition.T:
            ok &= (fams & contains[w]) != 0
        elif c is FrameCondition.W:
            ok &= (fams != 0) & ((fams & outside) == 0)
        elif c is FrameCondition.C:
            ok &= ((fams & singleton[w]) != 0) & ((fams & outside) == 0)
    return ok


def _global_ok(n: int, families: np.ndarray, conditions: Iterable[FrameCondition]) -> np.ndarray:
    _, contains, _, union = _tables(n)
    ok = np.ones(families.shape[0], dtype=bool)
    for c in conditions:
        if c is FrameCondition.APlus:
            for v in range(1, n):
                ok &= families[:, v] == families[:, 0]
        elif c in (FrameCondition.U, FrameCondition.A):
            vals = union[families] if c is FrameCondition.U else families
            for w in range(n):
                for v in range(n):
                    reach = (families[:, w] & contains[v]) != 0
                    ok &= ~reach | (vals[:, v] == vals[:, w])
    return ok


@dataclass
class ModelBatch:
    """Many models over the same worlds, encoded as bitmasks.

    ``families[i, w]`` encodes N(w) of model ``i``; ``valuation[a][i]`` is the
    world set of atom ``a``.
    """

    worlds: int
    families: np.ndarray
    valuation: dict[str, np.ndarray]

    def __len__(self) -> int:
        return self.families.shape[0]

    @property
    def full(self) -> int:
        return (1 << self.worlds) - 1

    def extension(self, f: Formula) -> np.ndarray:
        """Bitmask of the worlds forcing ``f``, one entry per model."""
        return self._ext(f, {})

    def _ext(self, f: Formula, memo: dict) -> np.ndarray:
        got = memo.get(f)
        if got is not None:
            return got
        m = len(self)
        if isinstance(f, Atom):
            v = self.valuation.get(f.name)
            out = v if v is not None else np.zeros(m, dtype=np.int64)
        elif isinstance(f, Bot):
            out = np.zeros(m, dtype=np.int64)
        elif isinstance(f, Imp):
            a = self._ext(f.left, memo)
            b = self._ext(f.right, memo)
            out = (~a | b) & self.full
        elif isinstance(f, CmpPl):
            a = self._ext(f.left, memo)
            b = self._ext(f.right, memo)
            # bad: sets that meet the right operand but miss the left one
            bad = np.zeros(m, dtype=np.int64)
            for s in range(1, self.full + 1):
                hit = ((b & s) != 0) & ((a & s) == 0)
                bad |= hit.astype(np.int64) << (s - 1)
            out = np.zeros(m, dtype=np.int64)
            for w in range(self.worlds):
                out |= ((self.families[:, w] & bad) == 0).astype(np.int64) << w
        else:
            raise TypeError(f"not a formula: {f!r}")
        memo[f] = out
        return out

    def valid(self, f: Formula) -> np.ndarray:
        return self.extension(f) == self.full

    def satisfies(self, c: FrameCondition) -> np.ndarray:
        ok = _global_ok(self.worlds, self.families, [c])
        if c in _LOCAL:
            for w in range(self.worlds):
                ok &= _local_ok(self.worlds, w, self.families[:, w], [c])
        return ok

    def model(self, i: int) -> NeighbourhoodModel:
        n = self.worlds
        neigh = []
        for w in range(n):
            fam = int(self.families[i, w])
            neigh.append(
                [[v for v in range(n) if s >> v & 1] for s in range(1, self.full + 1) if fam >> (s - 1) & 1]
            )
        val = {
            a: [v for v in range(n) if int(bits[i]) >> v & 1] for a, bits in self.valuation.items()
        }
        return NeighbourhoodModel(n, neigh, val)

    def select(self, mask: np.ndarray) -> ModelBatch:
        return ModelBatch(
            self.worlds, self.families[mask], {a: v[mask] for a, v in self.valuation.items()}
        )

    @classmethod
    def from_models(cls, models: Sequence[NeighbourhoodModel], atoms: Iterable[str] = ()) -> ModelBatch:
        if not models:
            raise ValueError("empty model list")
        n = models[0].worlds
        if any(m.worlds != n for m in models):
            raise ValueError("all models of a batch need the same number of worlds")
        names = set(atoms)
        for m in models:
            names.update(a for a, _ in m.valuation)
        fams = np.zeros((len(models), n), dtype=np.int64)
        val = {a: np.zeros(len(models), dtype=np.int64) for a in sorted(names)}
        for i, m in enumerate(models):
            for w in m.W:
                for alpha in m.N(w):
                    s = sum(1 << v for v in alpha)
                    fams[i, w] |= 1 << (s - 1)
            for a, ws in m.valuation:
                val[a][i] = sum(1 << v for v in ws)
        return cls(n, fams, val)


# ---------------------------------------------------------------------------
# exhaustive enumeration


def _allowed_families(n: int, conditions: frozenset[FrameCondition]) -> list[np.ndarray]:
    nfam = 2 ** (2**n - 1)
    fams = np.arange(nfam, dtype=np.int64)
    local = conditions & _LOCAL
    per_world = [fams[_local_ok(n, w, fams, local)] for w in range(n)]
    return per_world


def count_models(n: int, atoms: Sequence[str], conditions: Iterable[FrameCondition] = ()) -> int:
    """Number of candidate models with exactly ``n`` worlds before global filtering."""
    conditions = frozenset(conditions)
    per_world = _allowed_families(n, conditions)
    if FrameCondition.APlus in conditions:
        common = set(per_world[0].tolist()).intersection(*(p.tolist() for p in per_world[1:]))
        nf = len(common)
    else:
        nf = 1
        for p in per_world:
            nf *= len(p)
    return nf * 2 ** (n * len(atoms))


def _batches_for(
    n: int, atoms: Sequence[str], conditions: frozenset[FrameCondition], chunk: int
) -> Iterator[ModelBatch]:
    per_world = _allowed_families(n, conditions)
    if FrameCondition.APlus in conditions:
        common = per_world[0]
        for p in per_world[1:]:
            common = common[np.isin(common, p)]
        choices = [common]
        shared = True
    else:
        choices = per_world
        shared = False
    radices = [len(c) for c in choices] + [2**n] * len(atoms)
    total = 1
    for r in radices:
        total *= r
    glob = conditions - _LOCAL - {FrameCondition.NonEmptiness}
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        digits = []
        rest = idx
        for r in reversed(radices):
            digits.append(rest % r)
            rest = rest // r
        digits.reverse()
        if shared:
            f0 = choices[0][digits[0]]
            fams = np.repeat(f0[:, None], n, axis=1)
        else:
            fams = np.stack([choices[w][digits[w]] for w in range(n)], axis=1)
        k = len(choices)
        val = {a: digits[k + i].astype(np.int64) for i, a in enumerate(atoms)}
        batch = ModelBatch(n, fams, val)
        if glob:
            batch = batch.select(_global_ok(n, fams, glob))
        if len(batch):
            yield batch


def iter_model_batches(
    max_worlds: int,
    atoms: Sequence[str],
    conditions: Iterable[FrameCondition] = (),
    *,
    ceiling: int = DEFAULT_MODEL_CEILING,
    chunk: int = 1 << 15,
) -> Iterator[ModelBatch]:
    """Every model with at most ``max_worlds`` worlds, in canonical order, batched.

    Raises :class:`ModelBudgetExceeded` once more than ``ceiling`` models would
    have been produced; batches already yielded are not retracted.
    """
    if max_worlds < 1:
        raise ValueError("max_worlds must be at least 1")
    atoms = sorted(set(atoms))
    conditions = frozenset(conditions)
    seen = 0
    for n in range(1, max_worlds + 1):
        for batch in _batches_for(n, atoms, conditions, chunk):
            if seen + len(batch) > ceiling:
                keep = ceiling - seen
                if keep > 0:
                    yield batch.select(np.arange(len(batch)) < keep)
                raise ModelBudgetExceeded(ceiling)
            seen += len(batch)
            yield batch


def enumerate_models(
    max_worlds: int,
    atoms: Sequence[str],
    conditions: Iterable[FrameCondition] = (),
    *,
    ceiling: int = DEFAULT_MODEL_CEILING,
) -> Iterator[NeighbourhoodModel]:
    for batch in iter_model_batches(max_worlds, atoms, conditions, ceiling=ceiling):
        for i in range(len(batch)):
            yield batch.model(i)


@dataclass(frozen=True)
class SemanticCountermodel:
    model: NeighbourhoodModel
    world: int


@dataclass(frozen=True)
class NotFoundUpToBound:
    """No countermodel with at most ``max_worlds`` worlds.  Not a validity proof."""

    max_worlds: int
    models_checked: int

    def __bool__(self) -> bool:
        return False


def find_semantic_countermodel(
    f: Formula,
    conditions: Iterable[FrameCondition],
    max_worlds: int,
    *,
    atoms: Iterable[str] | None = None,
    ceiling: int = DEFAULT_MODEL_CEILING,
) -> SemanticCountermodel | NotFoundUpToBound:
    names = sorted(formula_atoms(f) if atoms is None else set(atoms))
    checked = 0
    for batch in iter_model_batches(max_worlds, names, conditions, ceiling=ceiling):
        bad = np.flatnonzero(~batch.valid(f))
        if bad.size:
            i = int(bad[0])
            ext = int(batch.extension(f)[i])
            w = next(v for v in range(batch.worlds) if not ext >> v & 1)
            return SemanticCountermodel(batch.model(i), w)
        checked += len(batch)
    return NotFoundUpToBound(max_worlds, checked)


# ---------------------------------------------------------------------------
# random sampling


def random_models(
    n: int,
    atoms: Sequence[str],
    conditions: Iterable[FrameCondition],
    count: int,
    rng: np.random.Generator,
) -> ModelBatch:
    """``count`` random models with ``n`` worlds satisfying ``conditions``.

    Each world's family is uniform over the families allowed by the local
    conditions; global conditions other than A+ are met by rejection.
    """
    conditions = frozenset(conditions)
    atoms = sorted(set(atoms))
    per_world = _allowed_families(n, conditions)
    glob = conditions - _LOCAL - {FrameCondition.NonEmptiness, FrameCondition.APlus}
    out: list[ModelBatch] = []
    have = 0
    for _ in range(1000):
        want = max(count - have, 1) * (4 if glob else 1)
        if FrameCondition.APlus in conditions:
            common = per_world[0]
            for p in per_world[1:]:
                common = common[np.isin(common, p)]
            if common.size == 0:
                raise ValueError("no family satisfies the conditions at every world")
            f0 = rng.choice(common, size=want)
            fams = np.repeat(f0[:, None], n, axis=1)
        else:
            fams = np.stack([rng.choice(per_world[w], size=want) for w in range(n)], axis=1)
        val = {a: rng.integers(0, 2**n, size=want, dtype=np.int64) for a in atoms}
        batch = ModelBatch(n, fams.astype(np.int64), val)
        if glob:
            batch = batch.select(_global_ok(n, batch.families, glob))
        out.append(batch)
        have += len(batch)
        if have >= count:
            break
    else:
        raise RuntimeError("could not sample enough models")
    fams = np.concatenate([b.families for b in out])[:count]
    val = {a: np.concatenate([b.valuation[a] for b in out])[:count] for a in atoms}
    return ModelBatch(n, fams, val)


def all_conditions_hold(m: NeighbourhoodModel, conditions: Iterable[FrameCondition]) -> bool:
    return all(check_condition(m, c) for c in conditions)


def bounded_validity_counterexample(
    formulas: Sequence[Formula],
    conditions: Iterable[FrameCondition],
    *,
    exhaustive_worlds: int = 2,
    random_worlds: int = 3,
    samples: int = 10_000,
    seed: int = 0,
    ceiling: int = DEFAULT_MODEL_CEILING,
) -> tuple[Formula, SemanticCountermodel] | None:
    """Check ``formulas`` on every model with at most ``exhaustive_worlds``
    worlds and on ``samples`` random models with ``random_worlds`` worlds.

    Returns the first formula that fails together with its countermodel, or
    ``None`` when all hold everywhere checked.
    """
    formulas = list(formulas)
    conditions = frozenset(conditions)
    names = sorted(set().union(*(formula_atoms(f) for f in formulas))) if formulas else []

    def scan(batch: ModelBatch):
        for f in formulas:
            bad = np.flatnonzero(~batch.valid(f))
            if bad.size:
                i = int(bad[0])
                ext = int(batch.extension(f)[i])
                w = next(v for v in range(batch.worlds) if not ext >> v & 1)
                return f, SemanticCountermodel(batch.model(i), w)
        return None

    for batch in iter_model_batches(exhaustive_worlds, names, conditions, ceiling=ceiling):
        hit = scan(batch)
        if hit:
            return hit
    if samples and random_worlds:
        rng = np.random.default_rng(seed)
        hit = scan(random_models(random_worlds, names, conditions, samples, rng))
        if hit:
            return hit
    return None
