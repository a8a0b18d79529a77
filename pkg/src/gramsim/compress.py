"""Digram replacement: compress a labeled graph into a graph grammar.

The compressor repeatedly finds the most frequent digram (an edge shape:
the label paths hanging under its two endpoints), replaces every
non-overlapping occurrence with a fresh two-node rule, and records the
replaced edge shape as an edge pair of that rule. Whatever survives
becomes the start rule.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Mapping

from .graph import LabeledGraph
from .grammar import GraphGrammar, PathMap, Rule
from .suffix import GrammarPathSuffix, bare


@dataclass(frozen=True)
class Digram:
    """Edge shape: label path under the source, label path under the target."""

    source_path: GrammarPathSuffix
    target_path: GrammarPathSuffix

    def __str__(self) -> str:
        return f"({self.source_path}, {self.target_path})"


class WorkGraph:
    """Mutable intermediate state of a compression run.

    Nodes are (ordinal, label); each work edge remembers, per endpoint,
    the path from the current node down to the original terminal node it
    attaches to (the bare label for an unmerged node). Replacing a digram
    merges node pairs and grows those paths.
    """

    def __init__(self, graph: LabeledGraph | None):
        if graph is None:
            return  # clone() fills the fields
        if len(graph) == 0:
            raise ValueError("cannot compress an empty graph")
        self.labels: dict[int, str] = dict(graph.nodes)
        # original node represented by each (node, path-under-node)
        self.node_paths: dict[int, dict[GrammarPathSuffix, int]] = {
            nid: {bare(label): nid} for nid, label in graph.nodes}
        self.edges: dict[int, tuple[int, GrammarPathSuffix, int, GrammarPathSuffix]] = {}
        self.touching: dict[int, set[int]] = {nid: set() for nid in self.labels}
        self.by_digram: dict[tuple[GrammarPathSuffix, GrammarPathSuffix], set[int]] = {}
        self.rules: list[Rule] = []
        self.rule_pairs: list[tuple[GrammarPathSuffix, GrammarPathSuffix]] = []
        self.max_ordinal = max(self.labels)
        for eid, (src, dst) in enumerate(sorted(graph.edges)):
            record = (src, bare(graph.label(src)), dst, bare(graph.label(dst)))
            self.edges[eid] = record
            self.touching[src].add(eid)
            self.touching[dst].add(eid)
            if src != dst:
                self.by_digram.setdefault((record[1], record[3]), set()).add(eid)
        self.next_edge_id = len(self.edges)

    def clone(self) -> "WorkGraph":
        other = WorkGraph(None)
        other.labels = dict(self.labels)
        other.node_paths = {nid: dict(paths) for nid, paths in self.node_paths.items()}
        other.edges = dict(self.edges)
        other.touching = {nid: set(eids) for nid, eids in self.touching.items()}
        other.by_digram = {key: set(eids) for key, eids in self.by_digram.items()}
        other.rules = list(self.rules)
        other.rule_pairs = list(self.rule_pairs)
        other.max_ordinal = self.max_ordinal
        other.next_edge_id = self.next_edge_id
        return other

    @property
    def nodes(self) -> tuple[tuple[int, str], ...]:
        return tuple(sorted(self.labels.items()))

    @property
    def work_edges(self) -> frozenset[tuple[int, GrammarPathSuffix, int, GrammarPathSuffix]]:
        return frozenset(self.edges.values())

    def size(self) -> int:
        # grammar size if we stopped now: every rule body is 2 nodes
        return len(self.labels) + len(self.edges) + 3 * len(self.rules)

    def _occurrences(self, key: tuple[GrammarPathSuffix, GrammarPathSuffix]) -> list[int]:
        """Greedy maximal node-disjoint occurrence set, ascending (src, dst)."""
        bucket = self.by_digram.get(key)
        if not bucket:
            return []
        used: set[int] = set()
        out: list[int] = []
        for eid in sorted(bucket, key=lambda e: (self.edges[e][0], self.edges[e][2])):
            src, _, dst, _ = self.edges[eid]
            if src in used or dst in used:
                continue
            used.add(src)
            used.add(dst)
            out.append(eid)
        return out

    def count_nonoverlapping(self, key: tuple[GrammarPathSuffix, GrammarPathSuffix]) -> int:
        return len(self._occurrences(key))

    def replace(self, key: tuple[GrammarPathSuffix, GrammarPathSuffix], fresh_name: str
                ) -> set[tuple[GrammarPathSuffix, GrammarPathSuffix]]:
        """Replace all counted occurrences of `key` by fresh_name nodes.

        Returns every digram key whose edge bucket changed. Requires a
        non-overlapping count of at least 2.
        """
        occurrences = self._occurrences(key)
        if len(occurrences) < 2:
            raise ValueError(f"digram ({key[0]}, {key[1]}) has non-overlapping count "
                             f"{len(occurrences)}, need at least 2")
        src_path, dst_path = key
        self.rules.append(Rule(fresh_name, ((1, src_path.first_label), (2, dst_path.first_label))))
        first = ((fresh_name, 1),)
        second = ((fresh_name, 2),)
        self.rule_pairs.append((src_path.prepend(first), dst_path.prepend(second)))
        affected: set[tuple[GrammarPathSuffix, GrammarPathSuffix]] = set()
        for eid in occurrences:
            v1, _, v2, _ = self.edges[eid]
            self._drop_edge(eid, affected)
            n = self.max_ordinal + 1
            self.max_ordinal = n
            self.labels[n] = fresh_name
            self.touching[n] = set()
            merged: dict[GrammarPathSuffix, int] = {}
            for path, original in self.node_paths.pop(v1).items():
                merged[path.prepend(first)] = original
            for path, original in self.node_paths.pop(v2).items():
                merged[path.prepend(second)] = original
            self.node_paths[n] = merged
            for old, prefix in ((v1, first), (v2, second)):
                for other_eid in list(self.touching[old]):
                    src, sp, dst, dp = self.edges[other_eid]
                    if src == old:
                        src, sp = n, sp.prepend(prefix)
                    if dst == old:
                        dst, dp = n, dp.prepend(prefix)
                    self._rekey_edge(other_eid, (src, sp, dst, dp), affected)
                del self.touching[old]
                del self.labels[old]
        return affected

    def _drop_edge(self, eid: int, affected: set) -> None:
        src, sp, dst, dp = self.edges.pop(eid)
        self.touching[src].discard(eid)
        self.touching[dst].discard(eid)
        if src != dst:
            key = (sp, dp)
            bucket = self.by_digram[key]
            bucket.discard(eid)
            if bucket:
                affected.add(key)
            else:
                del self.by_digram[key]
                affected.add(key)

    def _rekey_edge(self, eid: int, record, affected: set) -> None:
        old_src, old_sp, old_dst, old_dp = self.edges[eid]
        if old_src != old_dst:
            old_key = (old_sp, old_dp)
            bucket = self.by_digram[old_key]
            bucket.discard(eid)
            if not bucket:
                del self.by_digram[old_key]
            affected.add(old_key)
        self.touching[old_src].discard(eid)
        self.touching[old_dst].discard(eid)
        src, sp, dst, dp = record
        self.edges[eid] = record
        self.touching[src].add(eid)
        self.touching[dst].add(eid)
        if src != dst:
            new_key = (sp, dp)
            self.by_digram.setdefault(new_key, set()).add(eid)
            affected.add(new_key)

    def to_grammar(self, terminals: Iterable[str], start_name: str
                   ) -> tuple[GraphGrammar, PathMap]:
        """Freeze the current state: survivors become the start rule."""
        survivors = sorted(self.labels)
        dense = {nid: i for i, nid in enumerate(survivors, start=1)}
        body = tuple((dense[nid], self.labels[nid]) for nid in survivors)
        rules = self.rules + [Rule(start_name, body)]
        pairs = list(self.rule_pairs)
        for src, sp, dst, dp in self.edges.values():
            pairs.append((sp.prepend(((start_name, dense[src]),)),
                          dp.prepend(((start_name, dense[dst]),))))
        grammar = GraphGrammar(terminals, rules, start_name, pairs)
        entries = []
        for nid in survivors:
            step = ((start_name, dense[nid]),)
            for path, original in self.node_paths[nid].items():
                entries.append((path.prepend(step), original))
        return grammar, PathMap(entries)


def initial_work_graph(graph: LabeledGraph) -> WorkGraph:
    """The compression start state: one work node and edge per original."""
    return WorkGraph(graph)


def digram_census(wg: WorkGraph) -> dict[Digram, int]:
    """Non-overlapping occurrence counts of every digram present.

    Occurrences are chosen greedily in ascending (src, dst) ordinal order,
    never sharing a node; self-loop work edges are never occurrences.
    """
    out = {}
    for key in wg.by_digram:
        count = wg.count_nonoverlapping(key)
        if count:
            out[Digram(*key)] = count
    return out


def replace_digram(wg: WorkGraph, digram: Digram, fresh_name: str) -> WorkGraph:
    """A new WorkGraph with every counted occurrence of `digram` replaced.

    Raises:
        ValueError: if the digram's non-overlapping count is below 2, or
            fresh_name is already a label in use.
    """
    if fresh_name in wg.labels.values() or any(r.name == fresh_name for r in wg.rules):
        raise ValueError(f"fresh name {fresh_name} already in use")
    clone = wg.clone()
    clone.replace((digram.source_path, digram.target_path), fresh_name)
    return clone


def _allocate_names(terminals: frozenset[str]):
    start_name = "S"
    i = 0
    while start_name in terminals:
        start_name = f"S{i}"
        i += 1

    def fresh():
        n = 1
        while True:
            name = f"R{n}"
            if name not in terminals and name != start_name:
                yield name
            n += 1

    return start_name, fresh()


def compress(graph: LabeledGraph, *, min_count: int = 2) -> tuple[GraphGrammar, PathMap]:
    """Compress a graph into a grammar plus the path map back to its nodes.

    Repeatedly replaces the digram with the highest non-overlapping count
    (ties: lexicographically smallest key text) until every count is below
    min_count. The returned PathMap sends each full grammar path to the
    original node id it stands for.

    Raises:
        ValueError: empty graph, or min_count < 2.
    """
    if min_count < 2:
        raise ValueError("min_count below 2 would allow size-increasing replacements")
    terminals = graph.label_set()
    start_name, fresh_names = _allocate_names(terminals)
    wg = WorkGraph(graph)

    # Lazy max-heap over digram counts. Entries may be optimistic upper
    # bounds (raw bucket size) for keys touched since their last exact
    # count; exact[key] is None for those. Every live key always has a
    # heap entry at least as large as its true count, so the first popped
    # entry that matches a current exact count is the true maximum.
    exact: dict[tuple, int | None] = {}
    heap: list[tuple[int, str, str, tuple]] = []
    for key in wg.by_digram:
        count = wg.count_nonoverlapping(key)
        exact[key] = count
        if count >= min_count:
            heap.append((-count, str(key[0]), str(key[1]), key))
    heapq.heapify(heap)

    while heap:
        negc, _, _, key = heapq.heappop(heap)
        bucket = wg.by_digram.get(key)
        if bucket is None:
            exact.pop(key, None)
            continue
        current = exact.get(key)
        if current is None or current != -negc:
            count = wg.count_nonoverlapping(key)
            exact[key] = count
            if count >= min_count:
                heapq.heappush(heap, (-count, str(key[0]), str(key[1]), key))
            continue
        if current < min_count:
            continue
        affected = wg.replace(key, next(fresh_names))
        exact.pop(key, None)
        for touched in affected:
            bucket = wg.by_digram.get(touched)
            if bucket is None:
                exact.pop(touched, None)
                continue
            exact[touched] = None
            heapq.heappush(heap, (-len(bucket), str(touched[0]), str(touched[1]), touched))

    return wg.to_grammar(terminals, start_name)


def size_metrics(graph_or_grammar) -> int:
    """Size of a graph (nodes + edges) or grammar (body nodes + edge pairs)."""
    if isinstance(graph_or_grammar, LabeledGraph):
        return len(graph_or_grammar) + len(graph_or_grammar.edges)
    if isinstance(graph_or_grammar, GraphGrammar):
        gg = graph_or_grammar
        return sum(len(rule.body) for rule in gg.rules.values()) + len(gg.edge_pairs)
    raise TypeError(f"expected LabeledGraph or GraphGrammar, got {type(graph_or_grammar)!r}")


def compression_ratio(graph: LabeledGraph, grammar: GraphGrammar) -> float:
    """size(grammar) / size(graph); below 1.0 means the grammar is smaller."""
    return size_metrics(grammar) / size_metrics(graph)
