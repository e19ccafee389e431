"""Seeded random formulas and sequents for the property harnesses."""

from __future__ import annotations

import random
from typing import Iterator, Sequence

from .formula import BOT, Atom, CmpPl, Formula, Imp
from .gseq import Sequent

__all__ = ["random_formula", "random_formulas", "random_sequent", "DEFAULT_SEED"]

DEFAULT_SEED = 20240917
ATOMS = ("p", "q", "r")


def random_formula(
    rng: random.Random,
    size: int,
    atoms: Sequence[str] = ATOMS,
    bot_weight: float = 0.15,
    cmp_weight: float = 0.5,
) -> Formula:
    """A formula of complexity exactly ``size`` (rounded down to odd).

    Binary nodes are plausibility formulas with probability ``cmp_weight``,
    implications otherwise; leaves are ``bot`` with probability
    ``bot_weight``.
    """
    if size < 1:
        raise ValueError("size must be positive")
    if size % 2 == 0:
        size -= 1
    if size == 1:
        return BOT if rng.random() < bot_weight else Atom(rng.choice(atoms))
    left = 2 * rng.randrange((size - 1) // 2) + 1
    right = size - 1 - left
    op = CmpPl if rng.random() < cmp_weight else Imp
    return op(random_formula(rng, left, atoms, bot_weight, cmp_weight), random_formula(rng, right, atoms, bot_weight, cmp_weight))


def random_formulas(
    count: int,
    max_size: int = 8,
    seed: int = DEFAULT_SEED,
    atoms: Sequence[str] = ATOMS,
    min_size: int = 3,
) -> Iterator[Formula]:
    """``count`` formulas with sizes drawn uniformly from the odd sizes in range."""
    rng = random.Random(seed)
    sizes = [s for s in range(min_size, max_size + 1) if s % 2 == 1] or [1]
    for _ in range(count):
        yield random_formula(rng, rng.choice(sizes), atoms)


def random_sequent(
    rng: random.Random,
    max_size: int = 6,
    max_side: int = 2,
    atoms: Sequence[str] = ATOMS,
) -> Sequent:
    def side() -> list[Formula]:
        return [random_formula(rng, rng.choice(range(1, max_size + 1, 2)), atoms) for _ in range(rng.randint(0, max_side))]

    return Sequent(side(), side())
