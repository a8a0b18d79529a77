"""Seeded random graph and pattern generators for tests and benchmarks."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable

from .graph import LabeledGraph, PatternGraph


@dataclass(frozen=True)
class GraphGenParams:
    """Knobs for gen_graph; identical params always give identical graphs."""

    base_nodes: int
    variations: int
    delete_fraction: float
    edges_per_node: float
    label_alphabet: int
    seed: int

    def __post_init__(self):
        if self.base_nodes < 1:
            raise ValueError("base_nodes must be at least 1")
        if self.variations < 1:
            raise ValueError("variations must be at least 1")
        if not 0.0 <= self.delete_fraction <= 0.5:
            raise ValueError("delete_fraction must be within [0, 0.5]")
        if self.edges_per_node < 0:
            raise ValueError("edges_per_node must be non-negative")
        if self.label_alphabet < 1:
            raise ValueError("label_alphabet must be at least 1")


@dataclass(frozen=True)
class PatternGenParams:
    nodes: int
    edges: int
    seed: int

    def __post_init__(self):
        if self.nodes < 1:
            raise ValueError("nodes must be at least 1")
        if self.edges < 0:
            raise ValueError("edges must be non-negative")
        if self.edges > self.nodes * self.nodes:
            raise ValueError("edges exceed the number of distinct node pairs")


def _labels(count: int) -> list[str]:
    return [f"l{i}" for i in range(count)]


def gen_graph(params: GraphGenParams) -> LabeledGraph:
    """Generate a redundant graph: noisy copies of one random base subgraph.

    The base subgraph gets `base_nodes` random labels and random internal
    edges up to `edges_per_node` density. Each of the `variations` copies
    drops a uniformly chosen number of nodes, up to `delete_fraction` of
    them, with their incident edges. Random edges between different copies
    then top the global edge count back up to the density target.

    Raises:
        ValueError: bad params, or a density target that cannot be met.
    """
    rng = random.Random(params.seed)
    n = params.base_nodes
    base_labels = [rng.choice(_labels(params.label_alphabet)) for _ in range(n)]
    base_edge_target = round(params.edges_per_node * n)
    if base_edge_target > n * (n - 1):
        raise ValueError("edges_per_node density unreachable within the base subgraph")
    base_edges: set[tuple[int, int]] = set()
    while len(base_edges) < base_edge_target:
        src = rng.randrange(n)
        dst = rng.randrange(n)
        if src != dst:
            base_edges.add((src, dst))

    labels: dict[int, str] = {}
    edges: set[tuple[int, int]] = set()
    copy_of: dict[int, int] = {}
    max_deleted = int(params.delete_fraction * n)
    for copy in range(params.variations):
        offset = copy * n
        deleted = set(rng.sample(range(n), rng.randint(0, max_deleted)))
        for local in range(n):
            if local in deleted:
                continue
            nid = offset + local + 1
            labels[nid] = base_labels[local]
            copy_of[nid] = copy
        for src, dst in base_edges:
            if src not in deleted and dst not in deleted:
                edges.add((offset + src + 1, offset + dst + 1))

    node_ids = sorted(labels)
    global_target = round(params.edges_per_node * len(node_ids))
    if params.variations == 1 and global_target > len(edges):
        raise ValueError("density target unreachable: no second copy for inter-copy edges")
    attempts = 0
    limit = 100 * max(global_target, 1) + 1000
    while len(edges) < global_target:
        attempts += 1
        if attempts > limit:
            raise ValueError("density target unreachable: too few distinct inter-copy pairs")
        src = rng.choice(node_ids)
        dst = rng.choice(node_ids)
        if copy_of[src] != copy_of[dst] and (src, dst) not in edges:
            edges.add((src, dst))

    return LabeledGraph(labels.items(), edges)


def gen_pattern(params: PatternGenParams, alphabet: Iterable[str]) -> PatternGraph:
    """Generate a random pattern over the given label alphabet.

    When `edges` is at least nodes - 1, the first nodes - 1 edges form a
    randomly oriented spanning tree, so the pattern is weakly connected;
    the remainder is sampled uniformly from the unused node pairs
    (self-loops included). Fewer edges than nodes - 1 are accepted but the
    pattern may be disconnected.
    """
    pool = sorted(set(alphabet))
    if not pool:
        raise ValueError("alphabet must not be empty")
    rng = random.Random(params.seed)
    n = params.nodes
    labels = [(i, rng.choice(pool)) for i in range(1, n + 1)]
    edges: set[tuple[int, int]] = set()
    if params.edges >= n - 1:
        for i in range(2, n + 1):
            other = rng.randrange(1, i)
            edge = (other, i) if rng.random() < 0.5 else (i, other)
            edges.add(edge)
    attempts = 0
    limit = 100 * (params.edges + 1) + 1000
    while len(edges) < params.edges:
        attempts += 1
        if attempts > limit:
            raise ValueError("cannot place the requested number of distinct edges")
        edge = (rng.randrange(1, n + 1), rng.randrange(1, n + 1))
        edges.add(edge)
    return LabeledGraph(labels, edges)
