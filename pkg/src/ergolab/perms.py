"""Small permutation toolkit on arrays of atom indices.

A permutation on n atoms is a sequence p of length n with p[i] = image of i.
Composition follows function order: compose(f, g) applies g first.
"""

from __future__ import annotations

import random
from typing import Sequence


def is_permutation(p: Sequence[int]) -> bool:
    n = len(p)
    seen = bytearray(n)
    for v in p:
        if not 0 <= v < n or seen[v]:
            return False
        seen[v] = 1
    return True


def identity(n: int) -> list[int]:
    return list(range(n))


def compose(f: Sequence[int], g: Sequence[int]) -> list[int]:
    """f after g: (f*g)(i) = f(g(i))."""
    return [f[g[i]] for i in range(len(g))]


def inverse(p: Sequence[int]) -> list[int]:
    inv = [0] * len(p)
    for i, v in enumerate(p):
        inv[v] = i
    return inv


def cycles(p: Sequence[int]) -> list[list[int]]:
    """Disjoint cycle decomposition; each cycle starts at its smallest atom."""
    n = len(p)
    seen = bytearray(n)
    out = []
    for start in range(n):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = 1
        j = p[start]
        while j != start:
            cyc.append(j)
            seen[j] = 1
            j = p[j]
        out.append(cyc)
    return out


def power(p: Sequence[int], k: int) -> list[int]:
    """p^k for any integer k, via cycle decomposition (handles negative k)."""
    n = len(p)
    out = [0] * n
    for cyc in cycles(p):
        m = len(cyc)
        shift = k % m
        for pos, atom in enumerate(cyc):
            out[atom] = cyc[(pos + shift) % m]
    return out


def is_involution(p: Sequence[int]) -> bool:
    return all(p[p[i]] == i for i in range(len(p)))


def is_single_cycle(p: Sequence[int]) -> bool:
    n = len(p)
    if n == 0:
        return False
    count = 1
    j = p[0]
    while j != 0:
        count += 1
        if count > n:
            return False
        j = p[j]
    return count == n


def random_cycle(n: int, seed: int) -> list[int]:
    """A uniformly random single n-cycle, deterministic in the seed."""
    order = list(range(n))
    random.Random(seed).shuffle(order)
    p = [0] * n
    for i in range(n):
        p[order[i]] = order[(i + 1) % n]
    return p


def cycle_order_from(p: Sequence[int], start: int = 0) -> list[int]:
    """Orbit of `start` in iteration order; the full cycle for cyclic p."""
    out = [start]
    j = p[start]
    while j != start:
        out.append(j)
        j = p[j]
    return out
