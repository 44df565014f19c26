"""Sparse attribute lists and dense attribute matrices."""

import random

import pytest

from attk2.attrstore import (
    DenseAttributeMatrix,
    DynDenseAttribute,
    DynSparseAttribute,
    SparseAttribute,
)
from attk2.errors import InputError


@pytest.fixture
def names():
    # Researcher names, ids 3..5
    return SparseAttribute(
        "Researcher", "Name", 3, ["P. García", "J. Boy", "S. Gómez"]
    )


def test_sparse_get(names):
    assert names.get(3) == "P. García"
    assert names.get(5) == "S. Gómez"
    with pytest.raises(IndexError):
        names.get(2)
    with pytest.raises(IndexError):
        names.get(6)


def test_sparse_lex_index_first_entry(names):
    assert names.values[names.lex_index[0]] == "J. Boy"


def test_sparse_select(names):
    assert names.select("J. Boy") == [4]
    assert names.select("nobody") == []


def test_sparse_absent_values():
    sa = SparseAttribute("L", "a", 1, ["x", None, "x", None, ""])
    assert sa.get(2) is None
    assert sa.present == 3
    assert sa.select("x") == [1, 3]
    assert sa.select("") == [5]  # literal empty string is a real value


def test_sparse_duplicates_across_ids():
    rng = random.Random(5)
    values = [rng.choice(["a", "b", "c"]) for _ in range(100)]
    sa = SparseAttribute("L", "a", 10, values)
    for v in "abc":
        assert sa.select(v) == [i + 10 for i, x in enumerate(values) if x == v]
    for i, v in enumerate(values):
        assert sa.get(i + 10) == v


@pytest.fixture
def edge_dense():
    # edges 1..7: e4 Projects=5-10, e6 Expertise=Medium, e7 Expertise=High
    return DenseAttributeMatrix.build(
        7,
        [(6, "Expertise", "Medium"), (7, "Expertise", "High"), (4, "Projects", "5-10")],
    )


def test_dense_get(edge_dense):
    assert edge_dense.get(6, "Expertise") == "Medium"
    assert edge_dense.get(4, "Projects") == "5-10"
    assert edge_dense.get(1, "Expertise") is None
    assert edge_dense.get(4, "Expertise") is None
    assert edge_dense.get(4, "Rating") is None


def test_dense_columns_sorted(edge_dense):
    assert edge_dense.atts == ["Expertise", "Projects"]
    assert edge_dense.col_values[0] == ["High", "Medium"]  # bytewise order
    assert edge_dense.col_limits == [2, 3]


def test_dense_select(edge_dense):
    assert edge_dense.select("Expertise", "Medium", 1, 7) == [6]
    assert edge_dense.select("Expertise", "High", 1, 7) == [7]
    assert edge_dense.select("Expertise", "High", 1, 5) == []
    assert edge_dense.select("Expertise", "Low", 1, 7) == []
    assert edge_dense.select("Projects", "5-10", 1, 7) == [4]


def test_dense_one_value_per_element():
    with pytest.raises(InputError):
        DenseAttributeMatrix.build(3, [(1, "a", "x"), (1, "a", "y")])


def test_dense_empty():
    m = DenseAttributeMatrix.build(5, [])
    assert m.get(1, "a") is None
    assert m.select("a", "x", 1, 5) == []


def test_dense_random_against_matrix_scan():
    rng = random.Random(0xA7)
    n = 90
    atts = ["alpha", "beta", "gamma"]
    assigned = {}
    for elem in range(1, n + 1):
        for att in atts:
            if rng.random() < 0.5:
                assigned[(elem, att)] = f"{att}-{rng.randint(1, 9)}"
    m = DenseAttributeMatrix.build(
        n, [(e, a, v) for (e, a), v in assigned.items()]
    )
    for _ in range(100):
        elem = rng.randint(1, n)
        att = rng.choice(atts)
        assert m.get(elem, att) == assigned.get((elem, att))
        value = f"{att}-{rng.randint(1, 9)}"
        lo = rng.randint(1, n)
        hi = rng.randint(lo, n)
        want = [
            e for e in range(lo, hi + 1) if assigned.get((e, att)) == value
        ]
        assert m.select(att, value, lo, hi) == want
    # at most one 1 per row inside each attribute block
    for elem in range(1, n + 1):
        for att in atts:
            c1, c2 = m._block(att)
            assert len(m.matrix.row_leaves(elem, c1, c2)) <= 1


def test_schema_guard_regions_stay_empty():
    # elements 1..3 are label A (attribute alpha), 4..6 label B (attribute beta);
    # the cross blocks contain no ones
    triples = [(1, "alpha", "x"), (2, "alpha", "y"), (5, "beta", "z")]
    m = DenseAttributeMatrix.build(6, triples)
    a1, a2 = m._block("alpha")
    b1, b2 = m._block("beta")
    assert m.matrix.range(4, 6, a1, a2) == []
    assert m.matrix.range(1, 3, b1, b2) == []


def test_dyn_sparse_last_write_wins():
    sa = DynSparseAttribute("L", "a")
    sa.set(2, "v1")
    assert sa.get(2) == "v1"
    assert sa.get(1) is None
    assert sa.get(9) is None
    sa.set(2, "v2")
    assert sa.get(2) == "v2"
    assert sa.select("v1") == []
    assert sa.select("v2") == [2]
    sa.set(2, None)
    assert sa.get(2) is None
    assert sa.select("v2") == []


def test_dyn_dense_set_and_update():
    d = DynDenseAttribute("a")
    d.set(3, "x")
    assert d.get(3) == "x"
    d.set(3, "y")
    assert d.get(3) == "y"
    assert d.select("x", 1, 10) == []
    assert d.select("y", 1, 10) == [3]
    # unseen values append new columns at the end, in first-seen order
    d.set(1, "m")
    assert d.values == ["x", "y", "m"]
    d.clear(3)
    assert d.get(3) is None


def test_dyn_dense_replay_against_mapping():
    rng = random.Random(0xA8)
    atts = {name: DynDenseAttribute(name) for name in ("p", "q", "r")}
    ref = {}
    for _ in range(1000):
        name = rng.choice("pqr")
        elem = rng.randint(1, 120)
        value = f"{name}{rng.randint(1, 12)}"
        atts[name].set(elem, value)
        ref[(elem, name)] = value
        elem = rng.randint(1, 120)
        name = rng.choice("pqr")
        assert atts[name].get(elem) == ref.get((elem, name))
    for name, store in atts.items():
        values = {v for (e, a), v in ref.items() if a == name}
        for value in values:
            want = sorted(
                e for (e, a), v in ref.items() if a == name and v == value
            )
            assert store.select(value, 1, 120) == want
        # one value per element survives the updates
        for elem in range(1, 121):
            hits = store.tree.row_leaves(elem, 1, store.tree.n) if elem <= store.tree.n else []
            assert len(hits) <= 1
