import pytest

from ergolab import mosaics as mo
from ergolab.errors import CapExceeded, Infeasible

BLUE = mo.BLUE


def brute_force_count(w, h, k, adjacency=8):
    """Exhaustive scanline enumeration with direct grid checks; the counting
    authority for small boards."""
    grid = [[None] * w for _ in range(h)]

    def blue_ok(x, y):
        if adjacency == 8:
            offs = [(-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1)]
        else:
            offs = [(0, -1), (-1, 0), (1, 0), (0, 1)]
        for dx, dy in offs:
            nx, ny = x + dx, y + dy
            if 0 <= nx < w and 0 <= ny < h and grid[ny][nx] == BLUE:
                return False
        return True

    def red_ok(x, y):
        if x + k > w or y + k > h:
            return False
        return all(
            grid[yy][xx] is None for yy in range(y, y + k) for xx in range(x, x + k)
        )

    def count_from(pos):
        while pos < w * h and grid[pos // w][pos % w] is not None:
            pos += 1
        if pos == w * h:
            return 1
        y, x = divmod(pos, w)
        total = 0
        if blue_ok(x, y):
            grid[y][x] = BLUE
            total += count_from(pos + 1)
            grid[y][x] = None
        if red_ok(x, y):
            for yy in range(y, y + k):
                for xx in range(x, x + k):
                    grid[yy][xx] = 0
            total += count_from(pos + 1)
            for yy in range(y, y + k):
                for xx in range(x, x + k):
                    grid[yy][xx] = None
        return total

    return count_from(0)


def test_count_matches_brute_force_small_boards():
    for k in (2, 3):
        for w in range(1, 7):
            for h in range(1, 7):
                expected = brute_force_count(w, h, k)
                assert mo.count_mosaics(w, h, k) == expected, (w, h, k)


def test_count_matches_brute_force_4_adjacency():
    for k in (2, 3):
        for w in range(1, 6):
            for h in range(1, 6):
                expected = brute_force_count(w, h, k, adjacency=4)
                assert mo.count_mosaics(w, h, k, adjacency=4) == expected, (w, h, k)


def test_count_anchor_values():
    assert mo.count_mosaics(3, 3, 3) == 1
    assert mo.count_mosaics(4, 4, 3) == 0
    assert mo.count_mosaics(1, 1, 2) == 1
    # the brute force is the authority for the 2x2 board: only the red tile
    assert brute_force_count(2, 2, 2) == 1
    assert mo.count_mosaics(2, 2, 2) == 1


def test_count_single_column_closed_form():
    # width 1: no tile fits, blues may not stack, so only the 1x1 board works
    for k in (2, 3):
        assert mo.count_mosaics(1, 1, k) == 1
        for h in range(2, 10):
            assert mo.count_mosaics(1, h, k) == 0


def test_count_transpose_symmetry():
    for k in (2, 3):
        for w in range(1, 7):
            for h in range(1, 7):
                assert mo.count_mosaics(w, h, k) == mo.count_mosaics(h, w, k)


def test_count_width_cap():
    with pytest.raises(CapExceeded):
        mo.count_mosaics(mo.WIDTH_CAP + 1, 3, 2)


def test_generate_examples():
    m = mo.generate_mosaic(3, 3, 3, seed=1)
    assert m.cells == ((0, 0, 0), (0, 0, 0), (0, 0, 0))
    assert mo.validate_mosaic(m)

    with pytest.raises(Infeasible):
        mo.generate_mosaic(4, 4, 3, seed=1)

    m = mo.generate_mosaic(1, 1, 3, seed=0)
    assert m.cells == ((BLUE,),)
    assert mo.validate_mosaic(m)


def test_generate_matches_brute_force_feasibility():
    for k in (2, 3):
        for w in range(1, 7):
            for h in range(1, 7):
                feasible = brute_force_count(w, h, k) > 0
                try:
                    m = mo.generate_mosaic(w, h, k, seed=w * 31 + h)
                except Infeasible:
                    assert not feasible, (w, h, k)
                else:
                    assert feasible, (w, h, k)
                    assert mo.validate_mosaic(m)


def test_generate_large_boards():
    m = mo.generate_mosaic(64, 64, 2, seed=11)
    assert mo.validate_mosaic(m)
    m = mo.generate_mosaic(66, 33, 3, seed=4)
    assert mo.validate_mosaic(m)
    with pytest.raises(Infeasible):
        mo.generate_mosaic(63, 64, 2, seed=0)


def test_validator_rejects_corruption():
    m = mo.generate_mosaic(6, 6, 3, seed=2)
    rows = [list(r) for r in m.cells]
    rows[0][0] = BLUE
    bad = mo.Mosaic(6, 6, 3, tuple(tuple(r) for r in rows))
    assert not mo.validate_mosaic(bad)
    # two touching blues
    grid = [[BLUE, BLUE]]
    assert not mo.validate_mosaic(mo.Mosaic(2, 1, 2, tuple(tuple(r) for r in grid)))


def test_entropy_profile_k3_non_increasing_on_doublings():
    rows = mo.entropy_profile([(3, 3), (6, 6), (12, 12)], 3)
    values = [e for _, _, e in rows]
    assert all(a >= b for a, b in zip(values, values[1:]))


def test_entropy_zero_count_is_zero():
    rows = mo.entropy_profile([(4, 4)], 3)
    assert rows[0][2] == 0.0


def test_log2_big():
    assert mo.log2_big(1) == 0.0
    assert mo.log2_big(2**100) == pytest.approx(100.0)
    big = 3**400
    import math

    assert mo.log2_big(big) == pytest.approx(400 * math.log2(3), rel=1e-9)
    with pytest.raises(ValueError):
        mo.log2_big(0)


def test_spin_map():
    grid = [
        [BLUE, 0, 0],
        [0, 0, BLUE],
    ]
    m = mo.Mosaic(3, 2, 2, tuple(tuple(r) for r in grid))
    result = mo.spin_map(m)
    assert result["spins"][(0, 0)] == 1
    assert result["spins"][(2, 1)] == -1
    assert result["plus"] == 1 and result["minus"] == 1
    assert result["diagnostic"] == 0.0

    m = mo.generate_mosaic(64, 64, 2, seed=5)
    result = mo.spin_map(m)
    assert 0.0 <= result["diagnostic"] <= 1.0

    with pytest.raises(ValueError):
        mo.spin_map(mo.generate_mosaic(3, 3, 3, seed=0))


def test_render_ppm(tmp_path):
    path = tmp_path / "m.ppm"
    m = mo.Mosaic(1, 1, 2, ((BLUE,),))
    mo.render_ppm(m, str(path))
    assert path.read_bytes() == b"P6\n1 1\n255\n\x00\x00\xff"

    m = mo.generate_mosaic(3, 3, 3, seed=0)
    mo.render_ppm(m, str(path))
    body = path.read_bytes().split(b"255\n", 1)[1]
    assert body == b"\xff\x00\x00" * 9

    m = mo.generate_mosaic(6, 4, 2, seed=0)
    mo.render_ppm(m, str(path))
    body = path.read_bytes().split(b"255\n", 1)[1]
    assert len(body) == 3 * 6 * 4


def test_generate_deterministic_per_seed():
    a = mo.generate_mosaic(6, 6, 2, seed=3)
    b = mo.generate_mosaic(6, 6, 2, seed=3)
    assert a == b
