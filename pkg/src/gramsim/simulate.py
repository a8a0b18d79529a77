"""Pattern simulation evaluated directly on a compressed grammar.

Mirrors the uncompressed engine, but candidate sets hold grammar path
suffixes instead of node ids: a suffix stands for every decompressed node
whose full derivation path ends with it. Predecessor lookup works on the
grammar's edge pairs alone, and set subtraction splits a suffix into
longer ones until the parts to drop become syntactic.
"""

from __future__ import annotations

import weakref
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

from .graph import PatternGraph
from .grammar import GraphGrammar, PathMap, anchored_paths, represented_nodes
from .suffix import GrammarPathSuffix, SuffixSet, bare, is_suffix_of, remove_subsumed


@dataclass(frozen=True)
class GrammarSharpeningStep:
    """Snapshot after one worklist iteration of simulate_on_grammar."""

    node: int
    predecessor_suffixes: SuffixSet
    removed: SuffixSet
    candidates: Mapping[int, SuffixSet]


@dataclass(frozen=True, eq=False)
class SimulationResult:
    """Map from pattern node to its candidate suffixes; empty when the
    pattern has no simulation in the decompressed graph."""

    candidates: Mapping[int, SuffixSet]

    def __bool__(self) -> bool:
        return bool(self.candidates)

    @property
    def pairs(self) -> frozenset[tuple[int, GrammarPathSuffix]]:
        return frozenset((u, s) for u, sset in self.candidates.items() for s in sset)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimulationResult):
            return NotImplemented
        return dict(self.candidates) == dict(other.candidates)


def _raw_predecessors(pairs: Iterable[tuple[GrammarPathSuffix, GrammarPathSuffix]],
                      s: GrammarPathSuffix) -> list[GrammarPathSuffix]:
    # Both branches apply when s equals a right side; dedup happens in the
    # caller's set construction, never subsumption removal.
    out = []
    n = len(s.steps)
    for left, right in pairs:
        if is_suffix_of(s, right):
            out.append(left)
        if is_suffix_of(right, s):
            out.append(left.prepend(s.steps[:n - len(right.steps)]))
    return out


def predecessor_suffixes_of(gg: GraphGrammar, s: GrammarPathSuffix) -> SuffixSet:
    """Suffix-level predecessors of one suffix, deduplicated only.

    An edge pair (l, r) contributes l whenever `s` covers r (s is a
    suffix of r), and contributes l re-anchored under s's extra prefix
    whenever r covers `s`.

    Raises:
        ValueError: if `s` does not fit the grammar.
    """
    gg.ensure_valid()
    err = gg.suffix_violation(s)
    if err:
        raise ValueError(err)
    return SuffixSet(_raw_predecessors(gg.edge_pairs, s))


def predecessor_suffixes(gg: GraphGrammar, candidates: Iterable[GrammarPathSuffix]) -> SuffixSet:
    """Suffix-level predecessors of a whole set, subsumption-reduced.

    The represented node set equals the graph predecessors of the
    represented nodes of `candidates`, and the result elements represent
    pairwise disjoint node sets.
    """
    gg.ensure_valid()
    out: list[GrammarPathSuffix] = []
    for s in candidates:
        err = gg.suffix_violation(s)
        if err:
            raise ValueError(err)
        out.extend(_raw_predecessors(gg.edge_pairs, s))
    return remove_subsumed(out)


def _difference(gg: GraphGrammar, items: Iterable[GrammarPathSuffix],
                removes: tuple[GrammarPathSuffix, ...]) -> SuffixSet:
    out = []
    stack = list(items)
    stack.reverse()
    while stack:
        ext = stack.pop()
        dropped = False
        for rem in removes:
            if is_suffix_of(rem, ext):
                dropped = True
                break
        if dropped:
            continue
        n = len(ext.steps)
        split = False
        for rem in removes:
            if n < len(rem.steps) and is_suffix_of(ext, rem):
                split = True
                break
        if split:
            # Replace ext by its one-step extensions; each either leaves
            # the removal set's shadow or gets dropped a round later.
            stack.extend(reversed(gg.extensions(ext)))
        else:
            out.append(ext)
    return SuffixSet(out)


_EXACT = object()  # trie key marking "a suffix ends here"

_KEEP, _DROP, _SPLIT = 0, 1, 2


class _RemovalIndex:
    """Removal suffixes as per-terminal tries over reversed steps.

    One walk from the end of a candidate's steps answers both questions
    the pairwise scans in _difference ask: passing a node where a removal
    ends means the removal is a suffix of the candidate (drop); running
    out of candidate steps at a node with deeper children means some
    removal strictly extends the candidate (split)."""

    __slots__ = ("_roots",)

    def __init__(self, removes: Iterable[GrammarPathSuffix]):
        roots: dict[str, dict] = {}
        for rem in removes:
            node = roots.setdefault(rem.terminal, {})
            for step in reversed(rem.steps):
                node = node.setdefault(step, {})
            node[_EXACT] = True
        self._roots = roots

    def classify(self, ext: GrammarPathSuffix) -> int:
        node = self._roots.get(ext.terminal)
        if node is None:
            return _KEEP
        if _EXACT in node:
            return _DROP
        steps = ext.steps
        for position in range(len(steps) - 1, -1, -1):
            node = node.get(steps[position])
            if node is None:
                return _KEEP
            if _EXACT in node:
                return _DROP
        # a removal ending exactly here would have dropped above, so any
        # remaining key is a strictly deeper removal
        return _SPLIT if node else _KEEP


def _coalesce(gg: GraphGrammar, items: Iterable[GrammarPathSuffix]) -> list[GrammarPathSuffix]:
    # Undo splitting where it no longer distinguishes anything: when every
    # one-step extension of a parent suffix is present, the family is the
    # parent's exact partition and collapses back to it. Keeps sets at the
    # shallowest granularity that still describes the same node set.
    by_depth: dict[int, set[GrammarPathSuffix]] = {}
    for s in items:
        by_depth.setdefault(len(s.steps), set()).add(s)
    if not by_depth:
        return []
    occurrences = gg.label_occurrences()
    out: list[GrammarPathSuffix] = []
    for depth in range(max(by_depth), 0, -1):
        pool = by_depth.get(depth)
        if not pool:
            continue
        groups: dict[GrammarPathSuffix, list[GrammarPathSuffix]] = {}
        for s in pool:
            parent = GrammarPathSuffix(s.steps[1:], s.terminal)
            groups.setdefault(parent, []).append(s)
        for parent, members in groups.items():
            if len(members) == len(occurrences.get(parent.first_label, ())):
                by_depth.setdefault(depth - 1, set()).add(parent)
            else:
                out.extend(members)
    out.extend(by_depth.get(0, ()))
    return out


def _apply_removal_pair(gg: GraphGrammar, cand: SuffixSet,
                        old_index: _RemovalIndex, new_index: _RemovalIndex) -> SuffixSet:
    # cand minus (old_pre \ new_pre), rewritten as (cand \ old_pre) union
    # (cand intersect new_pre) so the removal set itself is never built.
    kept: list[GrammarPathSuffix] = []
    stack = list(cand)
    stack.reverse()
    while stack:
        ext = stack.pop()
        verdict = old_index.classify(ext)
        if verdict == _DROP:
            continue
        if verdict == _SPLIT:
            stack.extend(reversed(gg.extensions(ext)))
        else:
            kept.append(ext)
    stack = list(cand)
    stack.reverse()
    while stack:
        ext = stack.pop()
        verdict = new_index.classify(ext)
        if verdict == _DROP:  # covered by a kept predecessor suffix
            kept.append(ext)
        elif verdict == _SPLIT:
            stack.extend(reversed(gg.extensions(ext)))
    return SuffixSet(_coalesce(gg, remove_subsumed(kept)))


def _has_uncovered(gg: GraphGrammar, items: Iterable[GrammarPathSuffix],
                   index: _RemovalIndex) -> bool:
    """True if some node of `items` is outside the index's suffixes."""
    stack = list(items)
    while stack:
        ext = stack.pop()
        verdict = index.classify(ext)
        if verdict == _DROP:
            continue
        if verdict == _SPLIT:
            stack.extend(gg.extensions(ext))
        else:
            return True
    return False


def suffix_set_difference(gg: GraphGrammar, items: Iterable[GrammarPathSuffix],
                          removes: Iterable[GrammarPathSuffix]) -> SuffixSet:
    """Candidates minus removals, computed on suffixes.

    Drops every element covered by a removal suffix, and splits elements
    that cover a longer removal suffix into their one-step extensions
    until the overlap becomes syntactic. The represented node set of the
    result is exactly items' nodes minus removes' nodes.
    """
    gg.ensure_valid()
    for s in list(items) + list(removes):
        err = gg.suffix_violation(s)
        if err:
            raise ValueError(err)
    return _difference(gg, SuffixSet(items), tuple(SuffixSet(removes)))


class _PredNode:
    __slots__ = ("children", "exact", "subtree")

    def __init__(self):
        self.children: dict = {}
        self.exact: list[GrammarPathSuffix] = []
        self.subtree: list[GrammarPathSuffix] = []


class _PredecessorIndex:
    """Edge pairs as per-terminal tries over each right side's reversed
    steps, so one walk along a suffix collects both contribution kinds:
    rights that end on the walked path are suffixes of the query and
    contribute their left re-anchored under the unconsumed prefix, and
    rights in the subtree where the walk ends extend the query and
    contribute their left unchanged."""

    __slots__ = ("_roots",)

    def __init__(self, pairs: Iterable[tuple[GrammarPathSuffix, GrammarPathSuffix]]):
        roots: dict[str, _PredNode] = {}
        for left, right in pairs:
            node = roots.setdefault(right.terminal, _PredNode())
            node.subtree.append(left)
            for step in reversed(right.steps):
                node = node.children.setdefault(step, _PredNode())
                node.subtree.append(left)
            node.exact.append(left)
        self._roots = roots

    def lookup(self, s: GrammarPathSuffix) -> tuple[GrammarPathSuffix, ...]:
        node = self._roots.get(s.terminal)
        if node is None:
            return ()
        steps = s.steps
        n = len(steps)
        out: list[GrammarPathSuffix] = []
        if node.exact:  # bare rights are suffixes of every same-terminal s
            if n:
                out.extend(left.prepend(steps) for left in node.exact)
            else:
                out.extend(node.exact)
        completed = True
        for depth in range(1, n + 1):
            node = node.children.get(steps[n - depth])
            if node is None:
                completed = False
                break
            prefix = steps[:n - depth]
            if prefix:
                out.extend(left.prepend(prefix) for left in node.exact)
            else:
                out.extend(node.exact)
        if completed:
            out.extend(node.subtree)
        return tuple(out)


# grammars are immutable, so the tries and the per-suffix and per-set
# lookups survive across runs on the same grammar (the plain-graph
# engine's predecessor index is likewise retained by its LabeledGraph)
_INDEX_CACHE: weakref.WeakKeyDictionary = weakref.WeakKeyDictionary()


class _OptimizedState:
    """Caches shared by every optimized run on one grammar."""

    __slots__ = ("index", "contrib", "pre_sets")

    def __init__(self, gg: GraphGrammar):
        self.index = _PredecessorIndex(gg.edge_pairs)
        self.contrib: dict[GrammarPathSuffix, tuple[GrammarPathSuffix, ...]] = {}
        self.pre_sets: dict[SuffixSet, tuple[SuffixSet, _RemovalIndex]] = {}


class _Engine:
    """Per-run state: plain mode scans edge pairs pairwise; optimized
    mode walks a right-side trie and memoizes lookups per suffix and,
    with the covering trie, per whole candidate set."""

    def __init__(self, gg: GraphGrammar, optimized: bool):
        self.gg = gg
        self.optimized = optimized
        if optimized:
            state = _INDEX_CACHE.get(gg)
            if state is None:
                state = _OptimizedState(gg)
                _INDEX_CACHE[gg] = state
            self.state = state
        else:
            self.pairs = gg.edge_pairs

    def predecessors_of(self, sset: SuffixSet) -> SuffixSet:
        out: list[GrammarPathSuffix] = []
        for s in sset:
            out.extend(_raw_predecessors(self.pairs, s))
        return remove_subsumed(out)

    def predecessors_with_index(self, sset: SuffixSet) -> tuple[SuffixSet, _RemovalIndex]:
        state = self.state
        cached = state.pre_sets.get(sset)
        if cached is not None:
            return cached
        contrib = state.contrib
        out: list[GrammarPathSuffix] = []
        for s in sset:
            found = contrib.get(s)
            if found is None:
                found = state.index.lookup(s)
                contrib[s] = found
            out.extend(found)
        pre = SuffixSet(_coalesce(self.gg, remove_subsumed(out)))
        result = (pre, _RemovalIndex(pre))
        state.pre_sets[sset] = result
        return result


def simulate_on_grammar(gg: GraphGrammar, pattern: PatternGraph, *,
                        optimized: bool = False,
                        on_step: Callable[[GrammarSharpeningStep], None] | None = None,
                        ) -> SimulationResult:
    """Greatest simulation of `pattern` in the graph `gg` denotes.

    Same sharpening loop and FIFO policy as simulate_on_graph, with all
    node sets replaced by suffix sets. With optimized=True, predecessor
    lookups are memoized over terminal-indexed edge pairs, removals are
    deferred as (before, after) predecessor snapshots and applied when
    the target node is next inspected, and sets are re-coalesced to the
    shallowest equivalent suffixes; the expanded result is identical,
    the syntactic suffix sets need not be. Iteration snapshots are only
    emitted in plain mode.

    Raises:
        GrammarValidationError: if the grammar is invalid.
        ValueError: empty pattern, a grammar denoting no nodes, or a
            pattern label that is not a valid label.
    """
    gg.ensure_valid()
    if len(pattern) == 0:
        raise ValueError("pattern has no nodes")
    if gg.node_count() == 0:
        raise ValueError("grammar denotes an empty graph")

    engine = _Engine(gg, optimized)
    all_terminals = SuffixSet(bare(t) for t in gg.terminals)
    empty = SuffixSet()
    candidates = {u: SuffixSet([bare(pattern.label(u))]) if pattern.label(u) in gg.terminals
                  else empty for u in pattern.node_ids}
    # None marks "never sharpened", matching the plain-graph engine: the
    # first visit of each pattern node must run even when its label set
    # covers everything
    previous: dict[int, SuffixSet | None] = {u: None for u in pattern.node_ids}
    pattern_pred: dict[int, list[int]] = {u: [] for u in pattern.node_ids}
    for src, dst in sorted(pattern.edges):
        pattern_pred[dst].append(src)

    queue = deque(pattern.node_ids)
    queued = set(pattern.node_ids)

    if optimized:
        all_index = _RemovalIndex(all_terminals)
        prev_pre = {u: (all_terminals, all_index) for u in pattern.node_ids}
        pending: dict[int, list[tuple[_RemovalIndex, _RemovalIndex]]] = {
            u: [] for u in pattern.node_ids}
        while queue:
            u = queue.popleft()
            queued.discard(u)
            updates = pending[u]
            if updates:
                pending[u] = []
                cand = candidates[u]
                for old_index, new_index in updates:
                    if not cand:
                        break
                    cand = _apply_removal_pair(gg, cand, old_index, new_index)
                candidates[u] = cand
            if candidates[u] == previous[u]:
                continue
            previous[u] = candidates[u]
            pre_u, pre_index = engine.predecessors_with_index(candidates[u])
            # enqueue only on a real predecessor loss; a reshaped but
            # node-equal pre set must not keep the queue alive
            if pattern_pred[u] and _has_uncovered(gg, prev_pre[u][0], pre_index):
                old_index = prev_pre[u][1]
                for u2 in pattern_pred[u]:
                    pending[u2].append((old_index, pre_index))
                    if u2 not in queued:
                        queue.append(u2)
                        queued.add(u2)
            prev_pre[u] = (pre_u, pre_index)
    else:
        previous_pre = {u: all_terminals for u in pattern.node_ids}
        while queue:
            u = queue.popleft()
            queued.discard(u)
            if candidates[u] == previous[u]:
                continue
            previous[u] = candidates[u]
            pre_u = engine.predecessors_of(candidates[u])
            removed = _difference(gg, previous_pre[u], tuple(pre_u))
            for u2 in pattern_pred[u]:
                narrowed = _difference(gg, candidates[u2], tuple(removed))
                if narrowed != candidates[u2]:
                    candidates[u2] = narrowed
                    if u2 not in queued:
                        queue.append(u2)
                        queued.add(u2)
            previous_pre[u] = pre_u
            if on_step is not None:
                on_step(GrammarSharpeningStep(u, pre_u, removed, dict(candidates)))

    if all(candidates.values()):
        return SimulationResult(candidates)
    return SimulationResult({})


def expand_by_node(gg: GraphGrammar, result: SimulationResult,
                   path_map: PathMap | None = None) -> dict[int, frozenset[int]]:
    """Expand a simulation result to concrete node ids per pattern node.

    Without a path map, ids are the canonical decompression ids; with
    one (e.g. from compress), each full path is translated through it.
    """
    out: dict[int, frozenset[int]] = {}
    for u, sset in result.candidates.items():
        nodes: set[int] = set()
        for s in sset:
            if path_map is None:
                nodes |= represented_nodes(gg, s)
            else:
                nodes.update(path_map.node_for(p) for p in anchored_paths(gg, s))
        out[u] = frozenset(nodes)
    return out


def expand_to_nodes(gg: GraphGrammar, result: SimulationResult,
                    path_map: PathMap | None = None) -> frozenset[tuple[int, int]]:
    """Flatten expand_by_node into (pattern node, graph node) pairs."""
    return frozenset((u, v) for u, nodes in expand_by_node(gg, result, path_map).items()
                     for v in nodes)
