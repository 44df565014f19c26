"""Query-script parsing, execution and timing.

A script is tab-separated, one query per line: the operation name followed by
its arguments. Ids in scripts are external ids; runners translate to internal
ids on the way in and back on the way out. Empty and undefined results are
both rendered as "-".
"""

from __future__ import annotations

import gc
import time
from pathlib import Path
from statistics import mean, median

from .dyngraph import DynAttK2Graph
from .errors import InputError
from .graph import EDGE, NODE, UNDEFINED, AttK2Graph
from .io import InputBundle, unescape_field

_ARITY = {
    "GetNodeTypes": 0,
    "GetEdgeTypes": 0,
    "ScanNodes": 1,
    "ScanEdges": 1,
    "GetNodeType": 1,
    "GetEdgeType": 1,
    "GetNodeAttribute": 2,
    "GetEdgeAttribute": 2,
    "SelectNodes": 3,
    "SelectEdges": 3,
    "Neighbors": 2,
    "Related": 2,
}


def parse_script(path) -> list[list[str]]:
    """Read a query script, checking operation names and arities."""
    ops = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = [unescape_field(f) for f in line.split("\t")]
            op = fields[0]
            arity = _ARITY.get(op)
            if arity is None:
                raise InputError(f"{path}:{lineno}: unknown operation {op!r}")
            if len(fields) - 1 != arity:
                raise InputError(
                    f"{path}:{lineno}: {op} takes {arity} arguments, "
                    f"got {len(fields) - 1}"
                )
            ops.append(fields)
    return ops


class StaticRunner:
    """Executes script operations against a static store, in external ids."""

    def __init__(self, graph: AttK2Graph):
        self.graph = graph
        self._node_int = graph.node_ids.internal
        self._edge_int = graph.edge_ids.internal
        self._node_ext = graph.node_ids.external
        self._edge_ext = graph.edge_ids.external

    def run(self, op, args):
        g = self.graph
        if op == "GetNodeTypes":
            return g.get_types(NODE)
        if op == "GetEdgeTypes":
            return g.get_types(EDGE)
        if op == "ScanNodes":
            return [self._node_ext(i) for i in g.scan(NODE, args[0])]
        if op == "ScanEdges":
            return [self._edge_ext(i) for i in g.scan(EDGE, args[0])]
        if op == "GetNodeType":
            return g.get_type(NODE, self._node_int(args[0]))
        if op == "GetEdgeType":
            return g.get_type(EDGE, self._edge_int(args[0]))
        if op == "GetNodeAttribute":
            return g.get_attribute(NODE, self._node_int(args[0]), args[1])
        if op == "GetEdgeAttribute":
            return g.get_attribute(EDGE, self._edge_int(args[0]), args[1])
        if op == "SelectNodes":
            ids = g.select(NODE, args[0], args[1], args[2])
            if ids is UNDEFINED:
                return UNDEFINED
            return [self._node_ext(i) for i in ids]
        if op == "SelectEdges":
            ids = g.select(EDGE, args[0], args[1], args[2])
            if ids is UNDEFINED:
                return UNDEFINED
            return [self._edge_ext(i) for i in ids]
        if op == "Neighbors":
            return [
                self._node_ext(i) for i in g.neighbors(args[0], self._node_int(args[1]))
            ]
        if op == "Related":
            return [
                self._node_ext(i) for i in g.related(args[0], self._node_int(args[1]))
            ]
        raise InputError(f"unknown operation {op!r}")


class DynamicRunner:
    """Same operation surface over a dynamic store plus its external id maps."""

    def __init__(self, graph: DynAttK2Graph, node_ids: dict, edge_ids: dict):
        self.graph = graph
        self.node_ids = node_ids  # external -> dynamic id
        self.edge_ids = edge_ids
        self.node_ext = {v: k for k, v in node_ids.items()}
        self.edge_ext = {v: k for k, v in edge_ids.items()}

    def run(self, op, args):
        g = self.graph
        if op == "GetNodeTypes":
            return g.get_types(NODE)
        if op == "GetEdgeTypes":
            return g.get_types(EDGE)
        if op == "ScanNodes":
            return [self.node_ext[i] for i in g.scan(NODE, args[0])]
        if op == "ScanEdges":
            return [self.edge_ext[i] for i in g.scan(EDGE, args[0])]
        if op == "GetNodeType":
            return g.get_type(NODE, self.node_ids[args[0]])
        if op == "GetEdgeType":
            return g.get_type(EDGE, self.edge_ids[args[0]])
        if op == "GetNodeAttribute":
            return g.get_attribute(NODE, self.node_ids[args[0]], args[1])
        if op == "GetEdgeAttribute":
            return g.get_attribute(EDGE, self.edge_ids[args[0]], args[1])
        if op == "SelectNodes":
            ids = g.select(NODE, args[0], args[1], args[2])
            if ids is UNDEFINED:
                return UNDEFINED
            return [self.node_ext[i] for i in ids]
        if op == "SelectEdges":
            ids = g.select(EDGE, args[0], args[1], args[2])
            if ids is UNDEFINED:
                return UNDEFINED
            return [self.edge_ext[i] for i in ids]
        if op == "Neighbors":
            return [
                self.node_ext[i] for i in g.neighbors(args[0], self.node_ids[args[1]])
            ]
        if op == "Related":
            return [
                self.node_ext[i] for i in g.related(args[0], self.node_ids[args[1]])
            ]
        raise InputError(f"unknown operation {op!r}")


def replay_bundle(
    bundle: InputBundle, k: int = 2, node_order=None, edge_order=None
) -> DynamicRunner:
    """Build a dynamic store by inserting a bundle's content element by element.

    The default order sorts elements by (label, external id), which makes the
    dynamic ids coincide with the static store's internal ids; explicit orders
    exercise arbitrary insertion sequences.
    """
    g = DynAttK2Graph(k=k)
    for label, atts in bundle.node_schema:
        g.add_node_type(label)
        for att, dense in atts:
            g.add_attribute(NODE, label, att, dense)
    for label, atts in bundle.edge_schema:
        g.add_edge_type(label)
        for att, dense in atts:
            g.add_attribute(EDGE, label, att, dense)

    nodes = list(bundle.nodes)
    edges = list(bundle.edges)
    if node_order is None:
        nodes.sort(key=lambda r: (r[1].encode(), r[0].encode()))
    else:
        nodes = [nodes[i] for i in node_order]
    if edge_order is None:
        edges.sort(key=lambda r: (r[1].encode(), r[0].encode()))
    else:
        edges = [edges[i] for i in edge_order]

    node_ids = {}
    for ext, label, attrs in nodes:
        node_ids[ext] = g.add_node(label, attrs)
    edge_ids = {}
    for ext, label, src, tgt, attrs in edges:
        edge_ids[ext] = g.add_edge(label, node_ids[src], node_ids[tgt], attrs)
    return DynamicRunner(g, node_ids, edge_ids)


def format_result(result) -> str:
    """Render a query result as one tab-separated output line."""
    if result is UNDEFINED or result is None:
        return "-"
    if isinstance(result, str):
        return result
    items = list(result)
    if not items:
        return "-"
    return "\t".join(items)


def run_script(runner, ops) -> list[str]:
    return [format_result(runner.run(op[0], op[1:])) for op in ops]


def bench_scripts(runner, scripts: dict[str, list], repeat: int = 1) -> list[dict]:
    """Time every query individually; returns one summary row per script.

    The collector is paused while the clock runs, like timeit does, so the
    numbers reflect query cost rather than allocation debt of the caller.
    """
    rows = []
    for name in sorted(scripts):
        ops = scripts[name]
        samples = []
        run = runner.run
        clock = time.perf_counter_ns
        gc.collect()
        was_enabled = gc.isenabled()
        gc.disable()
        try:
            for _ in range(repeat):
                for op in ops:
                    args = op[1:]
                    t0 = clock()
                    run(op[0], args)
                    samples.append(clock() - t0)
        finally:
            if was_enabled:
                gc.enable()
        if not samples:
            continue
        samples_us = [s / 1000.0 for s in samples]
        samples_us.sort()
        mean_us = mean(samples_us)
        rows.append(
            {
                "set": name,
                "queries": len(samples_us),
                "mean_us": mean_us,
                "median_us": median(samples_us),
                "p99_us": samples_us[min(len(samples_us) - 1, int(len(samples_us) * 0.99))],
                "qps": (1e6 / mean_us) if mean_us else 0.0,
            }
        )
    return rows


def load_scripts(directory) -> dict[str, list]:
    """Parse every *.tsv script in a directory, keyed by file stem."""
    directory = Path(directory)
    scripts = {}
    for path in sorted(directory.glob("*.tsv")):
        scripts[path.stem] = parse_script(path)
    if not scripts:
        raise InputError(f"no query scripts (*.tsv) found in {directory}")
    return scripts
