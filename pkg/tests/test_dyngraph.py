"""Dynamic store: mutations, tombstoning, and agreement with both the naive
replay oracle and the static store."""

import random

import pytest

from attk2.dyngraph import DynAttK2Graph
from attk2.errors import InputError, NotFoundError
from attk2.gen import generate
from attk2.graph import EDGE, NODE, UNDEFINED, build_graph
from attk2.oracle import NaiveStore
from attk2.queries import replay_bundle

from conftest import running_bundle


def make_tiny():
    g = DynAttK2Graph()
    g.add_node_type("User")
    g.add_attribute(NODE, "User", "name", False)
    g.add_attribute(NODE, "User", "tier", True)
    g.add_edge_type("Follows")
    g.add_attribute(EDGE, "Follows", "since", True)
    return g


def test_empty_store_queries():
    g = DynAttK2Graph()
    assert g.get_types(NODE) == []
    assert g.get_types(EDGE) == []
    with pytest.raises(NotFoundError):
        g.scan(NODE, "User")


def test_sequential_ids_and_basic_queries():
    g = make_tiny()
    assert g.add_node("User", [("name", "ann")]) == 1
    assert g.add_node("User", [("tier", "gold")]) == 2
    assert g.add_edge("Follows", 1, 2, [("since", "2019")]) == 1
    assert g.get_type(NODE, 1) == "User"
    assert g.get_attribute(NODE, 1, "name") == "ann"
    assert g.get_attribute(NODE, 1, "tier") is None
    assert g.get_attribute(NODE, 1, "age") is UNDEFINED
    assert g.scan(NODE, "User") == [1, 2]
    assert g.neighbors("User", 1) == [2]
    assert g.related("Follows", 1) == [2]
    assert g.select(NODE, "User", "tier", "gold") == [2]


def test_add_node_validation_applies_no_mutation():
    g = make_tiny()
    with pytest.raises(InputError):
        g.add_node("User", [("name", "x"), ("age", "3")])
    assert g.node_schema.count == 0
    with pytest.raises(NotFoundError):
        g.add_node("Ghost", [])


def test_add_edge_requires_endpoints():
    g = make_tiny()
    g.add_node("User")
    with pytest.raises(NotFoundError):
        g.add_edge("Follows", 1, 2)


def test_parallel_edges_and_involution():
    g = make_tiny()
    g.add_node("User")
    g.add_node("User")
    e1 = g.add_edge("Follows", 1, 2)
    e2 = g.add_edge("Follows", 1, 2)
    assert g.relations.edges_between(1, 2) == [e1, e2]
    g.remove_edge(e2)
    assert g.relations.edges_between(1, 2) == [e1]


def test_set_attribute_last_write_wins():
    g = make_tiny()
    g.add_node("User", [("tier", "gold")])
    g.set_attribute(NODE, 1, "tier", "iron")
    assert g.get_attribute(NODE, 1, "tier") == "iron"
    assert g.select(NODE, "User", "tier", "gold") == []
    assert g.select(NODE, "User", "tier", "iron") == [1]
    with pytest.raises(InputError):
        g.set_attribute(NODE, 1, "age", "9")


def test_dense_values_append_columns_at_end():
    g = make_tiny()
    g.add_node("User", [("tier", "gold")])
    g.add_node("User", [("tier", "wood")])
    g.add_node("User", [("tier", "bronze")])
    assert g.node_dense["tier"].values == ["gold", "wood", "bronze"]


def test_remove_edge_tombstones():
    g = make_tiny()
    g.add_node("User")
    g.add_node("User")
    e = g.add_edge("Follows", 1, 2, [("since", "2020")])
    g.remove_edge(e)
    with pytest.raises(NotFoundError):
        g.get_type(EDGE, e)
    with pytest.raises(NotFoundError):
        g.get_attribute(EDGE, e, "since")
    with pytest.raises(NotFoundError):
        g.remove_edge(e)
    assert g.scan(EDGE, "Follows") == []
    assert g.select(EDGE, "Follows", "since", "2020") == []
    assert g.related("Follows", 1) == []
    # ids are never reused
    assert g.add_edge("Follows", 2, 1) == e + 1


def test_remove_node_requires_isolation():
    g = make_tiny()
    g.add_node("User", [("name", "ann")])
    g.add_node("User")
    e = g.add_edge("Follows", 1, 2)
    with pytest.raises(InputError):
        g.remove_node(1)
    g.remove_edge(e)
    g.remove_node(1)
    with pytest.raises(NotFoundError):
        g.get_type(NODE, 1)
    assert g.scan(NODE, "User") == [2]
    assert g.select(NODE, "User", "name", "ann") == []
    with pytest.raises(NotFoundError):
        g.add_edge("Follows", 2, 1)


def test_schema_growth_midstream():
    g = make_tiny()
    g.add_node("User", [("name", "ann")])
    g.add_node_type("Bot")
    g.add_attribute(NODE, "Bot", "name", False)
    bot = g.add_node("Bot", [("name", "marvin")])
    assert g.get_types(NODE) == ["Bot", "User"]
    assert g.get_type(NODE, bot) == "Bot"
    assert g.select(NODE, "Bot", "name", "marvin") == [bot]
    assert g.select(NODE, "User", "name", "marvin") == []
    # a dense/sparse clash on the shared attribute name is rejected
    g.add_edge_type("Owns")
    with pytest.raises(InputError):
        g.add_attribute(EDGE, "Owns", "name", True)


def test_running_example_replay_matches_paper_answers():
    r = replay_bundle(running_bundle())
    g = r.graph
    boy = r.node_ids["4"]
    gomez = r.node_ids["5"]
    assert g.neighbors("Researcher", boy) == [gomez]
    assert g.get_type(NODE, r.node_ids["4"]) == "Researcher"
    assert g.get_attribute(EDGE, r.edge_ids["6"], "Expertise") == "Medium"
    assert g.related("Author", r.node_ids["3"]) == [r.node_ids["1"]]


def test_permuted_replay_matches_static_modulo_ids():
    bundle = running_bundle()
    static = build_graph(bundle)
    rng = random.Random(4)
    for _ in range(3):
        norder = list(range(len(bundle.nodes)))
        eorder = list(range(len(bundle.edges)))
        rng.shuffle(norder)
        rng.shuffle(eorder)
        r = replay_bundle(bundle, node_order=norder, edge_order=eorder)
        g = r.graph
        assert g.get_types(NODE) == static.get_types(NODE)
        for ext, iid in r.node_ids.items():
            s = static.node_ids.internal(ext)
            assert g.get_type(NODE, iid) == static.get_type(NODE, s)
            for att in ("Name", "Title", "Position", "University", "Topic"):
                assert g.get_attribute(NODE, iid, att) == static.get_attribute(
                    NODE, s, att
                )
            for lab in static.get_types(NODE):
                got = {r.node_ext[x] for x in g.neighbors(lab, iid)}
                want = {
                    static.node_ids.external(x) for x in static.neighbors(lab, s)
                }
                assert got == want
            for elab in static.get_types(EDGE):
                got = {r.node_ext[x] for x in g.related(elab, iid)}
                want = {
                    static.node_ids.external(x) for x in static.related(elab, s)
                }
                assert got == want


def test_freeze_exports_static_store(tmp_path):
    from attk2 import io

    r = replay_bundle(running_bundle())
    g = r.graph
    g.remove_edge(r.edge_ids["5"])
    frozen = g.freeze()
    assert frozen.get_types(NODE) == g.get_types(NODE)
    assert frozen.edge_schema.count == 6
    for ext, dyn_id in r.node_ids.items():
        internal = frozen.node_ids.internal(str(dyn_id))
        assert frozen.get_type(NODE, internal) == g.get_type(NODE, dyn_id)
        for att in ("Name", "Title", "Position"):
            assert frozen.get_attribute(NODE, internal, att) == g.get_attribute(
                NODE, dyn_id, att
            )
        for lab in g.get_types(NODE):
            got = sorted(
                frozen.node_ids.external(x) for x in frozen.neighbors(lab, internal)
            )
            assert got == sorted(str(x) for x in g.neighbors(lab, dyn_id))
    # the export serializes like any static store
    path = tmp_path / "frozen.db"
    io.save_db(frozen, path)
    loaded = io.load_db(path)
    assert loaded.get_types(EDGE) == frozen.get_types(EDGE)


def test_mutation_stream_matches_oracle():
    rng = random.Random(0xD16)
    data = generate(
        nodes=120, edges=500, node_types=3, edge_types=3, attrs=6, seed=77,
        queries_per_kind=0,
    )
    bundle = data.bundle
    g = DynAttK2Graph()
    o = NaiveStore()
    for label, atts in bundle.node_schema:
        g.add_node_type(label)
        o.add_node_type(label)
        for att, dense in atts:
            g.add_attribute(NODE, label, att, dense)
            o.add_attribute(NODE, label, att, dense)
    for label, atts in bundle.edge_schema:
        g.add_edge_type(label)
        o.add_edge_type(label)
        for att, dense in atts:
            g.add_attribute(EDGE, label, att, dense)
            o.add_attribute(EDGE, label, att, dense)
    ext_ids = {}
    for ext, label, attrs in bundle.nodes:
        ext_ids[ext] = g.add_node(label, attrs)
        assert o.add_node(label, attrs) == ext_ids[ext]
    live_edges = []
    node_atts = {lab: [a for a, _ in atts] for lab, atts in bundle.node_schema}
    for i, (ext, label, src, tgt, attrs) in enumerate(bundle.edges):
        eid = g.add_edge(label, ext_ids[src], ext_ids[tgt], attrs)
        assert o.add_edge(label, ext_ids[src], ext_ids[tgt], attrs) == eid
        live_edges.append(eid)
        if i % 5 == 2 and live_edges:
            victim = live_edges.pop(rng.randrange(len(live_edges)))
            g.remove_edge(victim)
            o.remove_edge(victim)
        if i % 7 == 3:
            node = rng.randint(1, g.node_schema.count)
            label_n = o.get_type(NODE, node)
            atts_n = node_atts[label_n]
            if atts_n:
                att = rng.choice(atts_n)
                value = f"upd{i}"
                g.set_attribute(NODE, node, att, value)
                o.set_attribute(NODE, node, att, value)
    node_labels = o.get_types(NODE)
    edge_labels = o.get_types(EDGE)
    for lab in node_labels:
        assert g.scan(NODE, lab) == o.scan(NODE, lab)
    for lab in edge_labels:
        assert g.scan(EDGE, lab) == o.scan(EDGE, lab)
    n = g.node_schema.count
    for _ in range(400):
        i = rng.randint(1, n)
        assert g.get_type(NODE, i) == o.get_type(NODE, i)
        att = rng.choice(["attr%02d" % a for a in range(1, 7)])
        assert g.get_attribute(NODE, i, att) == o.get_attribute(NODE, i, att)
        lab = rng.choice(node_labels)
        assert g.neighbors(lab, i) == o.neighbors(lab, i)
        elab = rng.choice(edge_labels)
        assert g.related(elab, i) == o.related(elab, i)
        j = rng.randint(1, g.edge_schema.count)
        try:
            want = o.get_attribute(EDGE, j, att)
        except NotFoundError:
            with pytest.raises(NotFoundError):
                g.get_attribute(EDGE, j, att)
        else:
            assert g.get_attribute(EDGE, j, att) == want
