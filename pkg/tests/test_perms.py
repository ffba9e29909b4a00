import random

import pytest
from hypothesis import given, strategies as st

from ergolab import perms


def random_perm(n, seed):
    p = list(range(n))
    random.Random(seed).shuffle(p)
    return p


@given(st.integers(1, 50), st.integers(0, 10**6))
def test_inverse_round_trip(n, seed):
    p = random_perm(n, seed)
    assert perms.compose(p, perms.inverse(p)) == perms.identity(n)
    assert perms.compose(perms.inverse(p), p) == perms.identity(n)


@given(st.integers(1, 40), st.integers(0, 10**6), st.integers(-30, 30))
def test_power_matches_iteration(n, seed, k):
    p = random_perm(n, seed)
    expected = perms.identity(n)
    step = p if k >= 0 else perms.inverse(p)
    for _ in range(abs(k)):
        expected = perms.compose(step, expected)
    assert perms.power(p, k) == expected


def test_cycles_partition():
    p = [1, 0, 3, 4, 2, 5]
    cyc = perms.cycles(p)
    assert sorted(sum(cyc, [])) == list(range(6))
    assert [0, 1] in cyc and [5] in cyc


def test_single_cycle_detection():
    assert perms.is_single_cycle([1, 2, 0])
    assert not perms.is_single_cycle([1, 0, 2])
    assert perms.is_single_cycle(perms.random_cycle(37, 5))


def test_cycle_order_walks_whole_cycle():
    p = perms.random_cycle(12, 9)
    order = perms.cycle_order_from(p, 0)
    assert sorted(order) == list(range(12))
    for a, b in zip(order, order[1:]):
        assert p[a] == b
