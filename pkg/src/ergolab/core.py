"""Finite measure-preserving systems and tower extraction.

The finite model of an invertible measure-preserving transformation is a
bijection of n equal-mass atoms (each of mass 1/n). Aperiodicity and
ergodicity are modelled by restricting tower constructions to single
n-cycles; all measures are exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from . import perms
from .errors import Infeasible


@dataclass(frozen=True)
class FinitePermutationSystem:
    """n atoms of mass 1/n permuted by a bijection `map`."""

    map: tuple[int, ...]

    def __post_init__(self):
        arr = np.asarray(self.map)
        n = arr.size
        if n == 0:
            raise ValueError("need at least one atom")
        if arr.min() < 0 or arr.max() >= n or np.bincount(arr, minlength=n).max() > 1:
            raise ValueError("map is not a bijection on {0..n-1}")

    @property
    def n(self) -> int:
        return len(self.map)

    def apply(self, i: int) -> int:
        return self.map[i]

    def is_single_cycle(self) -> bool:
        return perms.is_single_cycle(self.map)

    def image(self, s: "AtomSet") -> "AtomSet":
        return AtomSet(frozenset(self.map[i] for i in s.members), self.n)

    def preimage(self, s: "AtomSet") -> "AtomSet":
        inv = perms.inverse(self.map)
        return AtomSet(frozenset(inv[i] for i in s.members), self.n)

    def subset(self, members: Iterable[int]) -> "AtomSet":
        return AtomSet(frozenset(members), self.n)

    @staticmethod
    def cycle(n: int) -> "FinitePermutationSystem":
        """The standard n-cycle i -> i+1 mod n."""
        if n < 1:
            raise ValueError("n must be positive")
        return FinitePermutationSystem(tuple((i + 1) % n for i in range(n)))

    @staticmethod
    def random_cycle(n: int, seed: int) -> "FinitePermutationSystem":
        order = np.random.default_rng(seed).permutation(n)
        p = np.empty(n, dtype=np.int64)
        p[order] = np.roll(order, -1)
        return FinitePermutationSystem(tuple(p.tolist()))


@dataclass(frozen=True)
class AtomSet:
    """A measurable set: a subset of the n atoms. Measure is never stored."""

    members: frozenset[int]
    n: int

    def __post_init__(self):
        if any(not 0 <= i < self.n for i in self.members):
            raise ValueError("atom index out of range")

    @property
    def measure(self) -> Fraction:
        return Fraction(len(self.members), self.n)

    def __contains__(self, i: int) -> bool:
        return i in self.members

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class Tower:
    """Levels base, T base, ..., T^(h-1) base plus a residual set (the roof)."""

    base: AtomSet
    height: int
    residual: AtomSet

    def levels(self, sys: FinitePermutationSystem) -> list[AtomSet]:
        out = [self.base]
        for _ in range(self.height - 1):
            out.append(sys.image(out[-1]))
        return out


def validate_tower(sys: FinitePermutationSystem, tower: Tower) -> bool:
    """Levels and residual are pairwise disjoint and cover all atoms."""
    seen: set[int] = set()
    total = 0
    for level in tower.levels(sys):
        seen |= level.members
        total += len(level)
    seen |= tower.residual.members
    total += len(tower.residual)
    return total == sys.n and len(seen) == sys.n


def _require_cycle(sys: FinitePermutationSystem) -> None:
    if not sys.is_single_cycle():
        raise ValueError("system must be a single n-cycle")


def rokhlin_tower(sys: FinitePermutationSystem, h: int) -> Tower:
    """Height-h tower on a single n-cycle with residual of measure (n mod h)/n.

    The cycle is walked from atom 0; the base sits at walk positions
    0, h, 2h, ... and the residual is the trailing n mod h positions.
    When n mod h <= 1 the residual additionally maps into the base under T.
    """
    _require_cycle(sys)
    n = sys.n
    if not 1 <= h <= n:
        raise ValueError(f"need 1 <= h <= n, got h={h}, n={n}")
    order = perms.cycle_order_from(sys.map, 0)
    q = n // h
    base = frozenset(order[k * h] for k in range(q))
    residual = frozenset(order[q * h:])
    return Tower(AtomSet(base, n), h, AtomSet(residual, n))


def _arc_residual_search(y_pos: list[int], n: int, h: int) -> list[int] | None:
    """Lexicographically first position-subset of y_pos cutting the cycle
    into arcs of length divisible by h, or None if no subset works.

    Consecutive chosen positions (cyclically) must leave gaps divisible by h,
    so each successor position is congruent to predecessor + 1 mod h.
    """
    if n % h == 0:
        return []  # empty residual: the whole cycle splits into columns
    k = len(y_pos)
    dead: set[tuple[int, int]] = set()  # (closing residue, node) with no chain

    def chain_from(cur: int, target: int) -> list[int] | None:
        if y_pos[cur] % h == target:
            return [cur]  # closing as early as possible is lexicographically first
        for j in range(cur + 1, k):
            if (y_pos[j] - y_pos[cur] - 1) % h != 0 or (target, j) in dead:
                continue
            sub = chain_from(j, target)
            if sub is not None:
                return [cur] + sub
        dead.add((target, cur))
        return None

    for first in range(k):
        target = (y_pos[first] + n - 1) % h
        chain = chain_from(first, target)
        if chain is not None:
            return [y_pos[i] for i in chain]
    return None


def lehrer_weiss_tower(sys: FinitePermutationSystem, h: int, y: AtomSet) -> Tower:
    """Height-h tower whose residual lies inside the prescribed set y.

    Finite-scale feasibility: some subset of y must cut the cycle into arcs
    of length divisible by h. Raises Infeasible when no subset does.
    """
    _require_cycle(sys)
    n = sys.n
    if not 1 <= h <= n:
        raise ValueError(f"need 1 <= h <= n, got h={h}, n={n}")
    if len(y) == 0:
        raise ValueError("target set y must be non-empty")
    if y.n != n:
        raise ValueError("y belongs to a different system")
    order = perms.cycle_order_from(sys.map, 0)
    pos_of = {atom: p for p, atom in enumerate(order)}
    y_pos = sorted(pos_of[a] for a in y.members)
    chosen = _arc_residual_search(y_pos, n, h)
    if chosen is None:
        raise Infeasible(
            f"no subset of y cuts the {n}-cycle into arcs divisible by {h}"
        )
    residual = frozenset(order[p] for p in chosen)
    if not chosen:
        base_pos: list[int] = list(range(0, n, h))
    else:
        base_pos = []
        m = len(chosen)
        for i in range(m):
            arc_start = chosen[i] + 1
            arc_len = (chosen[(i + 1) % m] - chosen[i] - 1) % n
            for off in range(0, arc_len, h):
                base_pos.append((arc_start + off) % n)
    base = frozenset(order[p] for p in base_pos)
    return Tower(AtomSet(base, n), h, AtomSet(residual, n))
