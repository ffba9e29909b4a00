"""Factor a cyclic measure-preserving permutation into three involutions.

Pipeline on a single n-cycle T:
  1. extract a height-h tower (h = 11 by default) with residual runs placed
     between column tops and the next column base;
  2. build a correcting involution s swapping each residual run's last atom
     with the top of the preceding column, so that T after s climbs columns
     cleanly and fixes the residual setwise;
  3. factor the induced base map (a q-cycle on column bases) into two
     involutions by cycle reversal and lift the two factors to live on
     distinct tower levels, so they commute with s and with each other;
  4. the product P of T with the combined involution S is periodic on the
     tower (each orbit climbs one column and hops to the next base), and
     splits into two reflections per orbit;
  5. the triple (conjugate of S by P, reflection, reflection) composes to T.

Composition convention everywhere: (f * g)(x) = f(g(x)), applied right to
left, so a triple (s1, s2, s3) represents x -> s1(s2(s3(x))).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import perms
from .core import FinitePermutationSystem


@dataclass(frozen=True)
class InvolutionTriple:
    """Three involutions with s1(s2(s3(x))) equal to the target map."""

    s1: tuple[int, ...]
    s2: tuple[int, ...]
    s3: tuple[int, ...]

    def compose(self) -> list[int]:
        return perms.compose(self.s1, perms.compose(self.s2, self.s3))

    def verify(self, target: Sequence[int]) -> bool:
        n = len(target)
        ident = np.arange(n)
        a1, a2, a3 = (np.asarray(s) for s in (self.s1, self.s2, self.s3))
        return (
            bool((a1[a1] == ident).all())
            and bool((a2[a2] == ident).all())
            and bool((a3[a3] == ident).all())
            and bool((a1[a2[a3]] == np.asarray(target)).all())
        )


def cycle_two_involutions(k: int) -> tuple[list[int], list[int]]:
    """Reflections (S', S'') on {0..k-1} with S'(S''(i)) = i+1 mod k.

    S''(i) = -i mod k and S'(i) = 1-i mod k.
    """
    if k < 1:
        raise ValueError("k must be positive")
    s2 = [(-i) % k for i in range(k)]
    s1 = [(1 - i) % k for i in range(k)]
    return s1, s2


def _reflection_pair(p: Sequence[int]) -> tuple[list[int], list[int]]:
    """Involutions (r1, r2) with r1(r2(x)) = p(x), by per-cycle reversal."""
    n = len(p)
    r1 = list(range(n))
    r2 = list(range(n))
    for cyc in perms.cycles(p):
        m = len(cyc)
        for i, atom in enumerate(cyc):
            r2[atom] = cyc[(-i) % m]
            r1[atom] = cyc[(1 - i) % m]
    return r1, r2


def _reflection_pair_list(pl: list[int]) -> tuple[list[int], list[int]]:
    """Per-cycle reversal pair for a list permutation, one pass."""
    n = len(pl)
    r1 = list(range(n))
    r2 = list(range(n))
    seen = bytearray(n)
    for start in range(n):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = 1
        j = pl[start]
        while j != start:
            cyc.append(j)
            seen[j] = 1
            j = pl[j]
        m = len(cyc)
        for i in range(m):
            atom = cyc[i]
            r2[atom] = cyc[-i]
            r1[atom] = cyc[(1 - i) % m]
    return r1, r2


def _pipeline_parts(sys: FinitePermutationSystem, height: int):
    """Internal stages of the factorization: the correcting involution, the
    two lifted base factors, their product, and the periodic part."""
    n = sys.n
    walk = perms.cycle_order_from(sys.map, 0)
    if len(walk) != n:
        raise ValueError("system must be a single n-cycle")
    t = np.asarray(sys.map)

    h = min(height, n)
    q, r = divmod(n, h)
    order = np.asarray(walk)

    # walk layout: q columns of h atoms; residual runs spread over the gaps,
    # the first r % q gaps getting one extra atom when r > q
    run_len = [r // q + (1 if k < r % q else 0) for k in range(q)]
    col_start = np.zeros(q, dtype=np.int64)
    pos = 0
    for k in range(q):
        col_start[k] = pos
        pos += h + run_len[k]

    # correcting involution: swap each run's last atom with its column top
    s = np.arange(n)
    tops = order[col_start + h - 1]
    for k in range(q):
        if run_len[k] == 0:
            continue
        top = tops[k]
        last = order[col_start[k] + h + run_len[k] - 1]
        s[top], s[last] = s[last], s[top]

    # base-cycle factors lifted to levels 0 and 1; the climb applies the
    # level-0 factor, then the level-1 factor, then the top hop, and the
    # reversal pair composes back to the +1 column shift, so P^h = id on
    # the tower whenever every residual run has length <= 1
    lift1, lift2 = cycle_two_involutions(q)
    d1 = np.arange(n)
    d2 = np.arange(n)
    d1[order[col_start]] = order[col_start[np.asarray(lift1)]]
    d2[order[col_start + 1]] = order[col_start[np.asarray(lift2)] + 1]
    big_s = s.copy()
    big_s[order[col_start]] = d1[order[col_start]]
    big_s[order[col_start + 1]] = d2[order[col_start + 1]]

    # periodic part P = T after S
    p = t[big_s]
    return s, d1, d2, big_s, p


def factor_three_involutions(
    sys: FinitePermutationSystem, height: int = 11
) -> InvolutionTriple:
    """Factor a single n-cycle into three involutions via the tower pipeline.

    The tower height is clamped to n when n < height, so small cycles are
    factored through their full-cycle tower. For n <= 2 the map is already
    an involution and the triple is trivial.
    """
    if height < 3:
        raise ValueError("tower height must be at least 3")
    n = sys.n
    if n <= 2:
        if not perms.is_single_cycle(sys.map):
            raise ValueError("system must be a single n-cycle")
        ident = tuple(range(n))
        return InvolutionTriple(ident, ident, tuple(sys.map))

    _, _, _, big_s, p = _pipeline_parts(sys, height)
    refl1, refl2 = _reflection_pair_list(p.tolist())

    # conjugate S by P so the correcting product sits leftmost in the triple
    p_inv = np.empty(len(p), dtype=p.dtype)
    p_inv[p] = np.arange(len(p))
    s_first = p[big_s[p_inv]]
    return InvolutionTriple(
        tuple(s_first.tolist()), tuple(refl1), tuple(refl2)
    )
