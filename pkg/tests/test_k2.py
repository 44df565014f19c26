"""k²-tree construction, navigation and mutation against brute-force oracles."""

import random

import pytest

from attk2.errors import InputError, NotFoundError
from attk2.k2 import DynK2Tree, K2Tree


def bits(s):
    return [int(ch) for ch in s]


def test_build_empty_matrix():
    t = K2Tree.build(4, [], 2)
    assert t.T.to_bits() == bits("0000")
    assert t.L.to_bits() == []
    assert t.cell(1, 1) == 0
    assert t.row_neighbors(3) == []
    assert t.range(1, 4, 1, 4) == []


def test_build_single_level_identity():
    t = K2Tree.build(2, [(1, 1), (2, 2)], 2)
    assert t.T.to_bits() == []
    assert t.L.to_bits() == bits("1001")
    assert t.cell(1, 1) == 1
    assert t.cell(1, 2) == 0
    assert t.row_neighbors(1) == [1]
    assert t.col_neighbors(1) == [1]


def test_full_two_by_two():
    t = K2Tree.build(2, [(r, c) for r in (1, 2) for c in (1, 2)], 2)
    assert t.row_neighbors(2) == [1, 2]


def test_build_rejects_bad_input():
    with pytest.raises(InputError):
        K2Tree.build(4, [(0, 1)], 2)
    with pytest.raises(InputError):
        K2Tree.build(4, [(1, 5)], 2)
    with pytest.raises(InputError):
        K2Tree.build(4, [], 1)


def test_eleven_by_eleven_padding():
    """11x11 matrix with an empty up-right quadrant, padded to 16."""
    cells = [
        (1, 1), (2, 5), (8, 3), (5, 8), (7, 7),
        (9, 2), (10, 6), (11, 1), (9, 9), (10, 11),
    ]
    t = K2Tree.build(11, cells, 2)
    assert t.n == 16
    # first partition: only the up-right 8x8 submatrix is empty
    assert t.T.to_bits()[:4] == bits("1011")
    for r in range(1, 9):
        for c in range(9, 12):
            assert t.cell(r, c) == 0
    # padding invariance: building at the padded side answers identically
    t16 = K2Tree.build(16, cells, 2)
    for r in range(1, 12):
        assert t.row_neighbors(r) == t16.row_neighbors(r)
        for c in range(1, 12):
            assert t.cell(r, c) == t16.cell(r, c)
    assert t.range(1, 11, 1, 11) == t16.range(1, 11, 1, 11) == sorted(cells)


def _leaf_order_key(r, c, n, k):
    """Levelwise leaf order equals lexicographic order of the child-digit path."""
    digits = []
    size = n
    r -= 1
    c -= 1
    while size > 1:
        size //= k
        digits.append((r // size) * k + (c // size))
        r %= size
        c %= size
    return digits


@pytest.mark.parametrize("k", [2, 4])
@pytest.mark.parametrize("density", [0.001, 0.01, 0.1])
def test_queries_against_brute_force(k, density):
    rng = random.Random(int(density * 10_000) * 31 + k)
    n = 128
    cells = {
        (rng.randint(1, n), rng.randint(1, n))
        for _ in range(int(n * n * density) + 1)
    }
    t = K2Tree.build(n, cells, k)
    assert t.ones == len(cells)
    for _ in range(300):
        r, c = rng.randint(1, n), rng.randint(1, n)
        assert t.cell(r, c) == ((r, c) in cells)
    for r in range(1, n + 1):
        assert t.row_neighbors(r) == sorted(c for (rr, c) in cells if rr == r)
    for c in range(1, n + 1):
        assert t.col_neighbors(c) == sorted(r for (r, cc) in cells if cc == c)
    assert t.range(1, n, 1, n) == sorted(cells)
    for _ in range(60):
        r1 = rng.randint(1, n); r2 = rng.randint(r1, n)
        c1 = rng.randint(1, n); c2 = rng.randint(c1, n)
        want = sorted(
            (r, c) for (r, c) in cells if r1 <= r <= r2 and c1 <= c <= c2
        )
        assert t.range(r1, r2, c1, c2) == want


def test_leaf_ordinal_matches_enumeration():
    rng = random.Random(99)
    n = 32
    cells = {(rng.randint(1, n), rng.randint(1, n)) for _ in range(120)}
    t = K2Tree.build(n, cells, 2)
    order = sorted(cells, key=lambda rc: _leaf_order_key(rc[0], rc[1], t.n, 2))
    for i, (r, c) in enumerate(order, start=1):
        assert t.leaf_ordinal(r, c) == i
    missing = next(
        (r, c)
        for r in range(1, n + 1)
        for c in range(1, n + 1)
        if (r, c) not in cells
    )
    with pytest.raises(NotFoundError):
        t.leaf_ordinal(*missing)


def test_leaf_ordinal_single_cell():
    t = K2Tree.build(7, [(3, 6)], 2)
    assert t.leaf_ordinal(3, 6) == 1


def test_range_rejects_malformed_rectangle():
    t = K2Tree.build(8, [(1, 1)], 2)
    with pytest.raises(InputError):
        t.range(3, 2, 1, 1)
    with pytest.raises(IndexError):
        t.range(1, 9, 1, 1)


def test_space_on_clustered_matrix():
    """1% density clustered into 8 blocks compresses below the raw bitmap."""
    rng = random.Random(1024)
    n = 1024
    target = n * n // 100
    cells = set()
    anchors = [(rng.randint(0, n - 64), rng.randint(0, n - 64)) for _ in range(8)]
    while len(cells) < target:
        ar, ac = anchors[rng.randrange(8)]
        cells.add((ar + rng.randint(1, 64), ac + rng.randint(1, 64)))
    t = K2Tree.build(n, cells, 2)
    assert t.ones == target
    assert t.bit_size < n * n


def test_dyn_set_examples():
    d = DynK2Tree(4, k=2)
    d.set(3, 2)
    assert d.cell(3, 2) == 1
    assert sum(d.cell(r, c) for r in range(1, 5) for c in range(1, 5)) == 1
    # set then clear leaves a logically (and physically) empty tree
    d.clear(3, 2)
    fresh = DynK2Tree(4, k=2)
    assert d.T.to_bits() == fresh.T.to_bits()
    assert d.L.to_bits() == fresh.L.to_bits()
    ordinal, present = d.clear(1, 1)
    assert not present


def test_dyn_replay_against_matrix():
    """500 random set/clear ops on 64x64 equal a plain boolean matrix."""
    rng = random.Random(64)
    d = DynK2Tree(64, k=2)
    ref = [[0] * 64 for _ in range(64)]
    for _ in range(500):
        r, c = rng.randint(1, 64), rng.randint(1, 64)
        if rng.random() < 0.6:
            d.set(r, c)
            ref[r - 1][c - 1] = 1
        else:
            _, present = d.clear(r, c)
            assert present == bool(ref[r - 1][c - 1])
            ref[r - 1][c - 1] = 0
        rr, cc = rng.randint(1, 64), rng.randint(1, 64)
        assert d.cell(rr, cc) == ref[rr - 1][cc - 1]
    cells = [
        (r + 1, c + 1) for r in range(64) for c in range(64) if ref[r][c]
    ]
    static = K2Tree.build(64, cells, 2)
    for r in range(1, 65):
        assert d.row_neighbors(r) == static.row_neighbors(r)
    for c in range(1, 65):
        assert d.col_neighbors(c) == static.col_neighbors(c)
    assert d.range(1, 64, 1, 64) == static.range(1, 64, 1, 64)
    assert d.T.to_bits() == static.T.to_bits()
    assert d.L.to_bits() == static.L.to_bits()


def test_dyn_matches_static_for_k3():
    rng = random.Random(27)
    d = DynK2Tree(27, k=3)
    cells = set()
    for _ in range(300):
        r, c = rng.randint(1, 27), rng.randint(1, 27)
        d.set(r, c)
        cells.add((r, c))
    static = K2Tree.build(27, cells, 3)
    assert d.range(1, 27, 1, 27) == static.range(1, 27, 1, 27)
    for r in range(1, 28):
        assert d.row_neighbors(r) == static.row_neighbors(r)


def test_dyn_grow_preserves_cells():
    d = DynK2Tree(2, k=2)
    d.set(1, 2)
    d.set(2, 2)
    d.grow()
    assert d.n == 4
    assert d.cell(1, 2) == 1 and d.cell(2, 2) == 1
    assert d.cell(4, 4) == 0
    d.set(4, 3)
    d.grow()
    assert d.n == 8
    assert d.range(1, 8, 1, 8) == [(1, 2), (2, 2), (4, 3)]
    # growing an empty tree keeps it empty and canonical
    e = DynK2Tree(2, k=2)
    e.grow()
    f = DynK2Tree(4, k=2)
    assert e.n == 4
    assert e.T.to_bits() == f.T.to_bits() and e.L.to_bits() == f.L.to_bits()


def test_dyn_set_returns_leaf_ordinal():
    d = DynK2Tree(8, k=2)
    ordinal, _pos, created = d.set(3, 1)
    assert (ordinal, created) == (1, True)
    ordinal, _pos, created = d.set(3, 1)
    assert (ordinal, created) == (1, False)
    ordinal, _pos, created = d.set(1, 1)
    assert created and ordinal == 1  # (1,1) precedes (3,1) in leaf order
    assert d.leaf_ordinal(3, 1) == 2
