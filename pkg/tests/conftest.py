"""Shared fixtures and oracles.

The worked example (two c-d chains hanging off a b hub, one back edge)
appears in two forms: the plain graph in data/fig1.el and the grammar in
data/fig1.gg, authored so that decompressing the grammar reproduces the
graph with identical node ids.
"""

from __future__ import annotations

import random
from pathlib import Path

import pytest

from gramsim import (GraphGenParams, LabeledGraph, PatternGenParams, gen_graph,
                     gen_pattern, load_graph, parse_grammar)

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def fig1_graph() -> LabeledGraph:
    return load_graph((DATA / "fig1.el").read_text())


@pytest.fixture(scope="session")
def fig1_grammar():
    return parse_grammar((DATA / "fig1.gg").read_text())


@pytest.fixture(scope="session")
def cd_pattern() -> LabeledGraph:
    return load_graph((DATA / "cd.el").read_text())


def greatest_simulation(graph: LabeledGraph, pattern: LabeledGraph) -> dict[int, frozenset[int]]:
    """Brute-force oracle: shrink the label-compatible relation until every
    pattern edge is mirrored, then demand totality. Quadratic and slow, but
    independent of both engines."""
    rel = {(u, v) for u in pattern.node_ids for v in graph.node_ids
           if pattern.label(u) == graph.label(v)}
    succ = graph.successor_index()
    changed = True
    while changed:
        changed = False
        for (u, v) in sorted(rel):
            for (src, dst) in pattern.edges:
                if src != u:
                    continue
                if not any((dst, w) in rel for w in succ[v]):
                    rel.discard((u, v))
                    changed = True
                    break
    out = {u: frozenset(v for (uu, v) in rel if uu == u) for u in pattern.node_ids}
    return out if all(out.values()) else {}


def random_soup(rng: random.Random, max_nodes: int = 12,
                labels: tuple[str, ...] = ("a", "b", "c")) -> LabeledGraph:
    """A uniform random labeled digraph, self-loops included; covers shapes
    the redundancy generator never produces."""
    n = rng.randint(1, max_nodes)
    nodes = [(i, rng.choice(labels)) for i in range(1, n + 1)]
    edge_count = rng.randint(0, min(2 * n, n * n))
    edges = set()
    for _ in range(edge_count):
        edges.add((rng.randint(1, n), rng.randint(1, n)))
    return LabeledGraph(nodes, edges)


def seeded_case(seed: int, max_base: int = 14) -> tuple[LabeledGraph, LabeledGraph]:
    """One (graph, pattern) pair drawn from the package's own generators,
    parameter ranges kept inside their validity envelope."""
    rng = random.Random(seed)
    base = rng.randint(6, max_base)
    graph = gen_graph(GraphGenParams(
        base_nodes=base, variations=rng.randint(2, 4),
        delete_fraction=rng.choice([0.0, 0.3, 0.5]),
        edges_per_node=rng.choice([0.8, 1.25, 1.6]),
        label_alphabet=rng.choice([1, 1, 2, 3]), seed=rng.randrange(10**6)))
    nodes = rng.randint(1, 4)
    edges = min(rng.randint(0, 6), nodes * nodes)
    pattern = gen_pattern(PatternGenParams(nodes=nodes, edges=edges,
                                           seed=rng.randrange(10**6)),
                          graph.label_set())
    return graph, pattern
