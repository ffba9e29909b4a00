"""Symbolic rank-one cutting-and-stacking with exact correlations.

A construction is given by an initial height h1 and spacer counts s_j; each
stage cuts the tower into two equal columns, stacks the right column on the
left one, and adds s_j spacer levels above the right column, so heights obey
h_{j+1} = 2*h_j + s_j. Stage-j levels have width 2^(1-j) (stage-1 levels
have width 1) and the total mass grows without bound when the spacers do.

Sets of finite measure are unions of levels of some stage. A stage-j level
splits into levels l and l+h_j of stage j+1, so a level-index set S evolves
as S -> S + (S + h_j), and the transformation acts as index +1 within any
stage tower. Correlations mu(T^n A intersect A) are obtained exactly by
counting index pairs at a deep enough stage; values whose orbit would leave
the working tower are flagged Unstable rather than approximated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import DesignError


class Unstable:
    """Sentinel: the requested value is not certified at this working stage."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNSTABLE"


UNSTABLE = Unstable()


@dataclass(frozen=True)
class RankOneSpec:
    """Construction parameters: initial height and per-stage spacer counts."""

    h1: int
    spacers: tuple[int, ...]

    def __post_init__(self):
        if self.h1 < 1:
            raise ValueError("h1 must be positive")
        if any(s < 0 for s in self.spacers):
            raise ValueError("spacer counts must be non-negative")

    @property
    def max_stage(self) -> int:
        return len(self.spacers) + 1


def heights(spec: RankOneSpec, stages: int) -> list[int]:
    """Heights h_1..h_stages under h_{j+1} = 2*h_j + s_j."""
    if stages < 1:
        raise ValueError("stage count must be positive")
    if stages > spec.max_stage:
        raise ValueError(
            f"spec provides {len(spec.spacers)} spacers, not enough for stage {stages}"
        )
    hs = [spec.h1]
    for j in range(stages - 1):
        hs.append(2 * hs[-1] + spec.spacers[j])
    return hs


def level_width(stage: int) -> Fraction:
    return Fraction(1, 2 ** (stage - 1))


@dataclass(frozen=True)
class LevelSet:
    """A finite-measure set: a union of levels of one stage."""

    stage: int
    levels: frozenset[int]

    def measure(self) -> Fraction:
        return len(self.levels) * level_width(self.stage)


@dataclass(frozen=True)
class TowerStage:
    """Geometry of the stage-j tower: level widths and spacer provenance."""

    stage: int
    height: int
    width: Fraction
    spacer_levels: frozenset[int]

    @property
    def total_mass(self) -> Fraction:
        return self.height * self.width


def stage_geometry(spec: RankOneSpec, stage: int) -> TowerStage:
    hs = heights(spec, stage)
    spacers: set[int] = set()
    for j in range(stage - 1):
        h = hs[j]
        spacers = spacers | {x + h for x in spacers} | set(
            range(2 * h, 2 * h + spec.spacers[j])
        )
    return TowerStage(stage, hs[-1], level_width(stage), frozenset(spacers))


def propagate_levels(
    spec: RankOneSpec, a: LevelSet, stage: int
) -> frozenset[int]:
    """Level indices of `a` inside the stage-`stage` tower."""
    hs = heights(spec, stage)
    if a.stage > stage:
        raise ValueError("working stage is shallower than the set's stage")
    if a.levels and max(a.levels) >= hs[a.stage - 1]:
        raise ValueError("level index outside its stage tower")
    if any(l < 0 for l in a.levels):
        raise ValueError("negative level index")
    s = set(a.levels)
    for j in range(a.stage - 1, stage - 1):
        s |= {x + hs[j] for x in s}
    return frozenset(s)


def correlation(
    spec: RankOneSpec, a: LevelSet, n: int, stage: int
) -> Fraction | Unstable:
    """Exact mu(T^n A intersect A), or UNSTABLE if not certified at `stage`.

    The value is certified when no mass of A sits in the top n levels of the
    working tower (every orbit segment stays inside); otherwise the counts at
    stages `stage-1` and `stage` must agree, else UNSTABLE is returned.
    """
    if n < 0:
        raise ValueError("time must be non-negative")
    hs = heights(spec, stage)
    h_top = hs[-1]
    if n >= h_top and n > 0:
        raise ValueError(f"time {n} leaves the stage-{stage} tower (h={h_top})")
    if n == 0:
        return a.measure()
    levels = propagate_levels(spec, a, stage)
    w = level_width(stage)
    hits = sum(1 for l in levels if l + n in levels)
    boundary = sum(1 for l in levels if l + n >= h_top)
    if boundary == 0:
        return hits * w
    if stage - 1 >= a.stage and n < hs[-2]:
        prev_levels = propagate_levels(spec, a, stage - 1)
        prev_hits = sum(1 for l in prev_levels if l + n in prev_levels)
        if prev_hits * level_width(stage - 1) == hits * w:
            return hits * w
    return UNSTABLE


def extend_spec(spec: RankOneSpec, a: LevelSet, n_max: int) -> RankOneSpec:
    """Append minimal sparse spacers (s_j = h_j) until times up to n_max are
    certifiable for the level set `a`; existing stages are unchanged."""
    spacers = list(spec.spacers)
    hs = heights(spec, spec.max_stage)
    top = max(propagate_levels(spec, a, max(a.stage, spec.max_stage)), default=0)
    while hs[-1] - top <= n_max or spec.max_stage == a.stage:
        spacers.append(hs[-1])
        spec = RankOneSpec(spec.h1, tuple(spacers))
        top += hs[-1]
        hs.append(3 * hs[-1])
        if len(spacers) > 512:
            raise DesignError("cannot certify the requested horizon")
    return spec


def min_exact_stage(spec: RankOneSpec, a: LevelSet, n_max: int) -> int:
    """Smallest working stage at which all times up to n_max are certified."""
    for stage in range(a.stage + 1, spec.max_stage + 1):
        hs = heights(spec, stage)
        top = max(propagate_levels(spec, a, stage), default=0)
        if hs[-1] - top > n_max:
            return stage
    raise ValueError(
        f"spec too shallow to certify all times up to {n_max}; add spacers"
    )


@dataclass(frozen=True)
class CorrelationSeries:
    """Exact correlation values mu(T^n A intersect A) for n = 0..n_max."""

    entries: tuple[tuple[int, Fraction], ...]

    def value(self, n: int) -> Fraction:
        return self.entries[n][1]

    def to_csv(self) -> str:
        lines = ["n,numerator,denominator"]
        for n, v in self.entries:
            lines.append(f"{n},{v.numerator},{v.denominator}")
        return "\n".join(lines) + "\n"


def correlation_series(
    spec: RankOneSpec, a: LevelSet, n_max: int, stage: int | None = None
) -> CorrelationSeries:
    """All correlations for n in [0, n_max] at a certifying working stage.

    Computed from the pair-difference multiset of the level-index set, which
    is exact once the working stage is deep enough that no orbit of A leaves
    the tower within n_max steps.
    """
    if stage is None:
        stage = min_exact_stage(spec, a, n_max)
    hs = heights(spec, stage)
    levels = sorted(propagate_levels(spec, a, stage))
    if levels and hs[-1] - levels[-1] <= n_max:
        raise ValueError("working stage too shallow for exact series")
    w = level_width(stage)
    counts: dict[int, int] = {}
    for l in levels:
        for m in levels:
            if m >= l:
                d = m - l
                counts[d] = counts.get(d, 0) + 1
    entries = tuple(
        (n, counts.get(n, 0) * w) for n in range(n_max + 1)
    )
    return CorrelationSeries(entries)


@dataclass(frozen=True)
class SignedDecomposition:
    """n = sum of signed heights (strictly decreasing stages) + remainder."""

    terms: tuple[tuple[int, int], ...]  # (sign, stage index j, 1-based)
    remainder: int
    term_bound: int


def nonmixing_decomposition(
    n: int,
    hs: Sequence[int],
    c: Fraction,
    mu_a: Fraction,
    remainder_cap: int = 0,
) -> SignedDecomposition | None:
    """Greedy signed-height decomposition of a non-mixing time.

    The term count m is capped by 2^-m * mu_a >= c; heights are consumed in
    strictly decreasing stage order, each chosen nearest to the running
    remainder. Returns None when the remainder cannot be brought within
    remainder_cap under those constraints.
    """
    if any(hs[i] >= hs[i + 1] for i in range(len(hs) - 1)):
        raise ValueError("heights must be strictly increasing")
    if c <= 0:
        raise ValueError("threshold must be positive")
    m_bound = 0
    while Fraction(mu_a, 2 ** (m_bound + 1)) >= c:
        m_bound += 1
    if m_bound == 0:
        return None
    remaining = n
    terms: list[tuple[int, int]] = []
    next_j = len(hs) - 1
    while remaining != 0 and abs(remaining) > remainder_cap and len(terms) < m_bound:
        best = None
        for j in range(next_j, -1, -1):
            gain = abs(abs(remaining) - hs[j])
            if best is None or gain < best[0]:
                best = (gain, j)
        if best is None or best[0] >= abs(remaining):
            break
        sign = 1 if remaining > 0 else -1
        j = best[1]
        terms.append((sign, j + 1))
        remaining -= sign * hs[j]
        next_j = j - 1
    if abs(remaining) > remainder_cap or not terms:
        return None
    return SignedDecomposition(tuple(terms), remaining, m_bound)


@dataclass(frozen=True)
class SpacerDesign:
    """Result of fitting heights to interval midpoints."""

    spec: RankOneSpec
    selected: tuple[int, ...]  # indices of intervals actually used
    heights: tuple[int, ...]


def _validate_intervals(intervals: Sequence[tuple[int, int]]) -> None:
    if not intervals:
        raise DesignError("no intervals given")
    prev_b = None
    prev_len = None
    for i, (a, b) in enumerate(intervals):
        if a > b or a < 1:
            raise DesignError(f"interval {i} is malformed: [{a}, {b}]")
        if prev_b is not None and a <= prev_b:
            raise DesignError(
                f"interval {i} starts at {a}, not beyond previous end {prev_b}"
            )
        if prev_len is not None and b - a <= prev_len:
            raise DesignError(f"interval lengths must increase, bad at index {i}")
        prev_b = b
        prev_len = b - a
    return None


def design_spacers(
    intervals: Sequence[tuple[int, int]], h1: int = 1
) -> SpacerDesign:
    """Choose spacers so each new height lands at an interval midpoint.

    Intervals are consumed in order; one is selected when the spacer needed
    to reach its midpoint is at least the current height (the construction's
    growth condition), otherwise it is skipped. Raises DesignError when no
    interval can be selected.
    """
    _validate_intervals(intervals)
    hs = [h1]
    spacers: list[int] = []
    selected: list[int] = []
    for i, (a, b) in enumerate(intervals):
        mid = (a + b) // 2
        s = mid - 2 * hs[-1]
        if s < hs[-1]:
            continue
        spacers.append(s)
        hs.append(mid)
        selected.append(i)
    if not selected:
        raise DesignError(
            f"intervals too dense: no midpoint admits spacer >= height "
            f"(first failing index 0 of {len(intervals)})"
        )
    return SpacerDesign(
        RankOneSpec(h1, tuple(spacers)), tuple(selected), tuple(hs)
    )


def gap_intervals(
    m_times: Iterable[int], count: int, max_scan: int = 1_000_000
) -> list[tuple[int, int]]:
    """Disjoint intervals of strictly growing length inside the gaps of M.

    Each interval is the centered half of a gap between consecutive elements
    of M, taken only when long enough to keep lengths strictly increasing.
    Raises DesignError when M is exhausted (or the scan budget is) first.
    """
    if count < 1:
        raise ValueError("count must be positive")
    out: list[tuple[int, int]] = []
    prev_len = 0
    it: Iterator[int] = iter(m_times)
    try:
        prev = next(it)
    except StopIteration:
        raise DesignError("sequence M is empty") from None
    scanned = 0
    for cur in it:
        scanned += 1
        if scanned > max_scan:
            raise DesignError(
                f"no {count} usable gaps within scan budget {max_scan}"
            )
        if cur <= prev:
            raise ValueError("M must be strictly increasing")
        gap = cur - prev - 1
        length = (gap + 1) // 2
        if length > prev_len and length >= 1:
            lo = prev + 1 + (gap - length) // 2
            hi = lo + length - 1
            out.append((lo, hi))
            prev_len = length
            if len(out) == count:
                return out
        prev = cur
    raise DesignError(
        f"sequence M exhausted after {len(out)} usable gaps, needed {count}"
    )
