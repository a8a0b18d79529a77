"""Linear (non-recursive) context-free graph grammars.

A grammar holds one rule per nonterminal, a start rule, and a global set
of edge pairs. Each rule body is a small node sequence (ordinal, label);
an edge pair is two grammar path suffixes anchored at the same rule and
stands for one original edge per instantiation of that rule. The start
symbol appears in no body, so derivation is a finite DAG unfolding.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .graph import LabeledGraph, valid_label
from .suffix import GrammarPathSuffix, SuffixSet, parse_suffix


class GrammarFormatError(ValueError):
    """Raised for malformed grammar documents."""


class GrammarValidationError(ValueError):
    """Raised when an operation needs a valid grammar but validation fails."""

    def __init__(self, violations: list[str]):
        super().__init__("invalid grammar: " + "; ".join(violations))
        self.violations = violations


@dataclass(frozen=True)
class Rule:
    """One production: a named body of (ordinal, label) nodes."""

    name: str
    body: tuple[tuple[int, str], ...]

    def __post_init__(self):
        if not valid_label(self.name):
            raise ValueError(f"invalid rule name {self.name!r}")
        body = tuple(sorted(self.body))
        seen = set()
        for ordinal, label in body:
            if not isinstance(ordinal, int) or ordinal < 1:
                raise ValueError(f"rule {self.name}: ordinal must be a positive integer, got {ordinal!r}")
            if ordinal in seen:
                raise ValueError(f"rule {self.name}: duplicate ordinal {ordinal}")
            if not valid_label(label):
                raise ValueError(f"rule {self.name}: invalid label {label!r}")
            seen.add(ordinal)
        object.__setattr__(self, "body", body)
        object.__setattr__(self, "_by_ordinal", dict(body))

    def label_at(self, ordinal: int) -> str | None:
        return self._by_ordinal.get(ordinal)


class GraphGrammar:
    """Immutable grammar value; semantic checks live in validate()."""

    __slots__ = ("terminals", "start", "_rules", "edge_pairs", "_violations",
                 "_occurrences", "_leaf_counts", "_offsets", "_ext_cache",
                 "__weakref__")

    def __init__(self, terminals: Iterable[str], rules: Iterable[Rule], start: str,
                 edge_pairs: Iterable[tuple[GrammarPathSuffix, GrammarPathSuffix]] = ()):
        terms = frozenset(terminals)
        for t in terms:
            if not valid_label(t):
                raise ValueError(f"invalid terminal {t!r}")
        if not valid_label(start):
            raise ValueError(f"invalid start symbol {start!r}")
        rule_map: dict[str, Rule] = {}
        for rule in rules:
            if rule.name in rule_map:
                raise ValueError(f"more than one rule named {rule.name}")
            rule_map[rule.name] = rule
        pairs = sorted(set(edge_pairs), key=lambda p: (str(p[0]), str(p[1])))
        object.__setattr__(self, "terminals", terms)
        object.__setattr__(self, "start", start)
        object.__setattr__(self, "_rules", rule_map)
        object.__setattr__(self, "edge_pairs", tuple(pairs))
        object.__setattr__(self, "_violations", None)
        object.__setattr__(self, "_occurrences", None)
        object.__setattr__(self, "_leaf_counts", None)
        object.__setattr__(self, "_offsets", None)
        object.__setattr__(self, "_ext_cache", {})

    def __setattr__(self, name, value):
        raise AttributeError("GraphGrammar is immutable")

    @property
    def rules(self) -> Mapping[str, Rule]:
        return self._rules

    @property
    def nonterminals(self) -> frozenset[str]:
        return frozenset(self._rules)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GraphGrammar):
            return NotImplemented
        return (self.terminals == other.terminals and self.start == other.start
                and self._rules == other._rules and set(self.edge_pairs) == set(other.edge_pairs))

    def __hash__(self) -> int:
        return hash((self.terminals, self.start, frozenset(self._rules.items()), frozenset(self.edge_pairs)))

    def __repr__(self) -> str:
        return (f"GraphGrammar({len(self._rules)} rules, {len(self.edge_pairs)} edge pairs, "
                f"start {self.start!r})")

    # ---- validation ----

    def validate(self) -> list[str]:
        """Return all semantic violations, empty when the grammar is usable."""
        cached = self._violations
        if cached is not None:
            return list(cached)
        v: list[str] = []
        for name in sorted(self.terminals & set(self._rules)):
            v.append(f"symbol {name} is both a terminal and a nonterminal")
        if self.start not in self._rules:
            v.append(f"start symbol {self.start} has no rule")
        for rule in self._rules.values():
            for ordinal, label in rule.body:
                if label == self.start:
                    v.append(f"start symbol {self.start} appears in body of rule {rule.name}")
                elif label not in self.terminals and label not in self._rules:
                    v.append(f"rule {rule.name}: unknown label {label} at ordinal {ordinal}")
        cycle = self._find_cycle()
        if cycle:
            v.append("recursive grammar: " + " -> ".join(cycle))
        for left, right in self.edge_pairs:
            for s in (left, right):
                err = self.suffix_violation(s)
                if err:
                    v.append(err)
            if not left.steps or not right.steps:
                v.append(f"EDGES pair ({left}, {right}): suffix without an anchor step")
            elif left.steps[0][0] != right.steps[0][0]:
                v.append(f"EDGES pair ({left}, {right}): anchor rules differ "
                         f"({left.steps[0][0]} vs {right.steps[0][0]})")
        object.__setattr__(self, "_violations", tuple(v))
        return v

    def suffix_violation(self, s: GrammarPathSuffix) -> str | None:
        """Explain why `s` does not fit this grammar, or None if it does."""
        for i, (name, ordinal) in enumerate(s.steps):
            rule = self._rules.get(name)
            if rule is None:
                return f"suffix {s}: no rule named {name}"
            label = rule.label_at(ordinal)
            if label is None:
                return f"suffix {s}: no ordinal {ordinal} in rule {name}"
            expected = s.steps[i + 1][0] if i + 1 < len(s.steps) else s.terminal
            if label != expected:
                return f"suffix {s}: ordinal {ordinal} of rule {name} is labeled {label}, not {expected}"
        if s.terminal not in self.terminals:
            return f"suffix {s}: {s.terminal} is not a terminal"
        return None

    def _find_cycle(self) -> list[str] | None:
        WHITE, GRAY, BLACK = 0, 1, 2
        color = {name: WHITE for name in self._rules}
        for root in self._rules:
            if color[root] != WHITE:
                continue
            stack: list[tuple[str, Iterator[str]]] = [(root, self._callees(root))]
            color[root] = GRAY
            trail = [root]
            while stack:
                name, callees = stack[-1]
                advanced = False
                for callee in callees:
                    if color.get(callee, BLACK) == GRAY:
                        return trail[trail.index(callee):] + [callee]
                    if color.get(callee, BLACK) == WHITE:
                        color[callee] = GRAY
                        trail.append(callee)
                        stack.append((callee, self._callees(callee)))
                        advanced = True
                        break
                if not advanced:
                    color[name] = BLACK
                    trail.pop()
                    stack.pop()
        return None

    def _callees(self, name: str) -> Iterator[str]:
        for _, label in self._rules[name].body:
            if label in self._rules:
                yield label

    # ---- derived structure (valid grammars only) ----

    def ensure_valid(self) -> None:
        violations = self.validate()
        if violations:
            raise GrammarValidationError(violations)

    def label_occurrences(self) -> Mapping[str, tuple[tuple[str, int], ...]]:
        """For each label, the (rule, ordinal) body positions carrying it."""
        occ = self._occurrences
        if occ is None:
            acc: dict[str, list[tuple[str, int]]] = {}
            for rule in self._rules.values():
                for ordinal, label in rule.body:
                    acc.setdefault(label, []).append((rule.name, ordinal))
            occ = {label: tuple(positions) for label, positions in acc.items()}
            object.__setattr__(self, "_occurrences", occ)
        return occ

    def _reverse_topological(self) -> list[str]:
        # callees before callers; requires acyclicity
        order: list[str] = []
        state: dict[str, int] = {}
        for root in self._rules:
            if root in state:
                continue
            stack = [(root, iter(self._rules[root].body))]
            state[root] = 1
            while stack:
                name, body = stack[-1]
                pushed = False
                for _, label in body:
                    if label in self._rules and state.get(label, 0) == 0:
                        state[label] = 1
                        stack.append((label, iter(self._rules[label].body)))
                        pushed = True
                        break
                if not pushed:
                    order.append(name)
                    state[name] = 2
                    stack.pop()
        return order

    def _leaf_count_table(self) -> dict[str, int]:
        table = self._leaf_counts
        if table is None:
            table = {}
            for name in self._reverse_topological():
                total = 0
                for _, label in self._rules[name].body:
                    total += table[label] if label in self._rules else 1
                table[name] = total
            object.__setattr__(self, "_leaf_counts", table)
        return table

    def _offset_table(self) -> dict[tuple[str, int], int]:
        """Leaves strictly before each body position, within its rule."""
        table = self._offsets
        if table is None:
            leaves = self._leaf_count_table()
            table = {}
            for rule in self._rules.values():
                before = 0
                for ordinal, label in rule.body:
                    table[(rule.name, ordinal)] = before
                    before += leaves[label] if label in self._rules else 1
            object.__setattr__(self, "_offsets", table)
        return table

    def path_node(self, steps: tuple[tuple[str, int], ...]) -> int:
        """Canonical node id of a full start-anchored path (depth-first order)."""
        offsets = self._offset_table()
        return 1 + sum(offsets[step] for step in steps)

    def node_count(self) -> int:
        """Number of nodes of the denoted graph (needs a valid grammar)."""
        if self.start not in self._rules:
            return 0
        return self._leaf_count_table()[self.start]

    def extensions(self, s: GrammarPathSuffix) -> tuple[GrammarPathSuffix, ...]:
        """All one-step-longer suffixes N/k:s, in body-occurrence order."""
        cached = self._ext_cache.get(s)
        if cached is None:
            positions = self.label_occurrences().get(s.first_label, ())
            cached = tuple(GrammarPathSuffix(((name, ordinal),) + s.steps, s.terminal)
                           for name, ordinal in positions)
            self._ext_cache[s] = cached
        return cached

    def iter_full_paths(self) -> Iterator[tuple[tuple[tuple[str, int], ...], str]]:
        """Yield (steps, terminal) of every full path in depth-first order."""
        if self.start not in self._rules:
            return
        stack: list[list] = [[self.start, self._rules[self.start].body, 0, False]]
        prefix: list[tuple[str, int]] = []
        while stack:
            frame = stack[-1]
            name, body, idx, own_step = frame
            if idx == len(body):
                stack.pop()
                if own_step:
                    prefix.pop()
                continue
            frame[2] += 1
            ordinal, label = body[idx]
            rule = self._rules.get(label)
            if rule is not None:
                prefix.append((name, ordinal))
                stack.append([label, rule.body, 0, True])
            else:
                yield tuple(prefix) + ((name, ordinal),), label

    def instantiation_contexts(self) -> dict[str, tuple[tuple[tuple[str, int], ...], ...]]:
        """For each rule, all step prefixes from the start rule to one of its
        instances; the start rule's single context is the empty prefix."""
        contexts: dict[str, list] = {name: [] for name in self._rules}
        contexts[self.start] = [()]
        for name in reversed(self._reverse_topological()):
            own = contexts[name]
            if not own:
                continue  # unreachable from the start symbol
            for ordinal, label in self._rules[name].body:
                if label in self._rules:
                    contexts[label].extend(ctx + ((name, ordinal),) for ctx in own)
        return {name: tuple(ctxs) for name, ctxs in contexts.items()}


# ---- path semantics ----


def one_step_extensions(gg: GraphGrammar, s: GrammarPathSuffix) -> SuffixSet:
    """All suffixes one rule step longer than `s`.

    Empty for a suffix already anchored at the start symbol (it occurs in
    no body) and for labels that occur in no body at all.

    Raises:
        ValueError: if the first label of `s` is unknown to the grammar.
    """
    gg.ensure_valid()
    first = s.first_label
    if first not in gg.terminals and first not in gg.rules:
        raise ValueError(f"unknown first label {first} in suffix {s}")
    return SuffixSet(gg.extensions(s))


def anchored_paths(gg: GraphGrammar, s: GrammarPathSuffix) -> SuffixSet:
    """All full start-anchored paths that end with `s`."""
    gg.ensure_valid()
    err = gg.suffix_violation(s)
    if err:
        raise ValueError(err)
    start = gg.start
    out = []
    work = [s]
    while work:
        cur = work.pop()
        if cur.steps and cur.steps[0][0] == start:
            out.append(cur)
        else:
            work.extend(gg.extensions(cur))
    return SuffixSet(out)


def represented_nodes(gg: GraphGrammar, s: GrammarPathSuffix) -> frozenset[int]:
    """Canonical ids of the decompressed nodes whose full path ends with `s`."""
    return frozenset(gg.path_node(p.steps) for p in anchored_paths(gg, s))


def represented_node_union(gg: GraphGrammar, suffixes: Iterable[GrammarPathSuffix]) -> frozenset[int]:
    out: set[int] = set()
    for s in suffixes:
        out |= represented_nodes(gg, s)
    return frozenset(out)


class PathMap:
    """Bijection between full grammar paths and node ids."""

    __slots__ = ("_by_path", "_by_node")

    def __init__(self, entries: Iterable[tuple[GrammarPathSuffix, int]]):
        by_path: dict[GrammarPathSuffix, int] = {}
        by_node: dict[int, GrammarPathSuffix] = {}
        for path, nid in entries:
            if path in by_path:
                raise ValueError(f"duplicate path {path}")
            if nid in by_node:
                raise ValueError(f"duplicate node id {nid}")
            by_path[path] = nid
            by_node[nid] = path
        self._by_path = by_path
        self._by_node = dict(sorted(by_node.items()))

    def node_for(self, path: GrammarPathSuffix) -> int:
        return self._by_path[path]

    def path_for(self, nid: int) -> GrammarPathSuffix:
        return self._by_node[nid]

    def __len__(self) -> int:
        return len(self._by_path)

    def __iter__(self) -> Iterator[tuple[GrammarPathSuffix, int]]:
        for nid, path in self._by_node.items():
            yield path, nid

    def __contains__(self, path: GrammarPathSuffix) -> bool:
        return path in self._by_path

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PathMap):
            return NotImplemented
        return self._by_path == other._by_path

    def __repr__(self) -> str:
        return f"PathMap({len(self._by_path)} paths)"


def decompress(gg: GraphGrammar) -> tuple[LabeledGraph, PathMap]:
    """Unfold a grammar into the graph it denotes.

    Node ids are assigned in depth-first path order (start rule ordinal 1
    first, recursively), so the result is canonical. Each edge pair
    contributes one edge per instantiation context of its anchor rule.

    Raises:
        GrammarValidationError: if validate() reports violations.
    """
    gg.ensure_valid()
    nodes = []
    entries = []
    for i, (steps, terminal) in enumerate(gg.iter_full_paths(), start=1):
        nodes.append((i, terminal))
        entries.append((GrammarPathSuffix(steps, terminal), i))
    edges = set()
    contexts = gg.instantiation_contexts()
    for left, right in gg.edge_pairs:
        anchor = left.steps[0][0]
        for ctx in contexts[anchor]:
            edges.add((gg.path_node(ctx + left.steps), gg.path_node(ctx + right.steps)))
    return LabeledGraph(nodes, edges), PathMap(entries)


# ---- text format ----


def parse_grammar(text: str) -> GraphGrammar:
    """Parse the grammar text format.

    Lines: `TERMINALS a b c`, `START S`, `RULE N => 1:L 2:L`, and
    `EDGE <suffix> <suffix>`; `#` comments and blank lines are skipped.
    TERMINALS and START must each appear exactly once, before any RULE or
    EDGE line. Semantic problems are left to validate().

    Raises:
        GrammarFormatError: on malformed lines, with the line number.
    """
    terminals: list[str] | None = None
    start: str | None = None
    rules: list[Rule] = []
    rule_lines: dict[str, int] = {}
    pairs: list[tuple[GrammarPathSuffix, GrammarPathSuffix]] = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        kind = tokens[0]
        if kind == "TERMINALS":
            if terminals is not None:
                raise GrammarFormatError(f"line {lineno}: duplicate TERMINALS line")
            for t in tokens[1:]:
                if not valid_label(t):
                    raise GrammarFormatError(f"line {lineno}: invalid terminal {t!r}")
            terminals = tokens[1:]
        elif kind == "START":
            if start is not None:
                raise GrammarFormatError(f"line {lineno}: duplicate START line")
            if len(tokens) != 2 or not valid_label(tokens[1]):
                raise GrammarFormatError(f"line {lineno}: START expects one symbol")
            start = tokens[1]
        elif kind == "RULE":
            if terminals is None or start is None:
                raise GrammarFormatError(f"line {lineno}: RULE before TERMINALS/START header")
            if len(tokens) < 3 or tokens[2] != "=>":
                raise GrammarFormatError(f"line {lineno}: expected 'RULE name => items'")
            name = tokens[1]
            if name in rule_lines:
                raise GrammarFormatError(
                    f"line {lineno}: rule {name} already defined on line {rule_lines[name]}")
            body = []
            for item in tokens[3:]:
                ordinal, colon, label = item.partition(":")
                if not colon or not ordinal.isdigit() or int(ordinal) < 1 or not valid_label(label):
                    raise GrammarFormatError(f"line {lineno}: malformed body item {item!r}")
                body.append((int(ordinal), label))
            try:
                rules.append(Rule(name, tuple(body)))
            except ValueError as exc:
                raise GrammarFormatError(f"line {lineno}: {exc}") from exc
            rule_lines[name] = lineno
        elif kind == "EDGE":
            if terminals is None or start is None:
                raise GrammarFormatError(f"line {lineno}: EDGE before TERMINALS/START header")
            if len(tokens) != 3:
                raise GrammarFormatError(f"line {lineno}: EDGE expects two suffixes")
            try:
                pairs.append((parse_suffix(tokens[1]), parse_suffix(tokens[2])))
            except ValueError as exc:
                raise GrammarFormatError(f"line {lineno}: {exc}") from exc
        else:
            raise GrammarFormatError(f"line {lineno}: unknown directive {kind!r}")
    if terminals is None:
        raise GrammarFormatError("missing TERMINALS line")
    if start is None:
        raise GrammarFormatError("missing START line")
    try:
        return GraphGrammar(terminals, rules, start, pairs)
    except ValueError as exc:
        raise GrammarFormatError(str(exc)) from exc


def format_grammar(gg: GraphGrammar) -> str:
    """Serialize a grammar deterministically (inverse of parse_grammar)."""
    lines = ["TERMINALS " + " ".join(sorted(gg.terminals)), f"START {gg.start}"]
    for rule in gg.rules.values():
        items = " ".join(f"{ordinal}:{label}" for ordinal, label in rule.body)
        lines.append(f"RULE {rule.name} => {items}" if items else f"RULE {rule.name} =>")
    for left, right in gg.edge_pairs:
        lines.append(f"EDGE {left} {right}")
    return "\n".join(lines) + "\n"


def format_path_map(pm: PathMap) -> str:
    """Serialize a path map as `<path> <id>` lines in ascending id order."""
    return "".join(f"{path} {nid}\n" for path, nid in pm)


def parse_path_map(text: str) -> PathMap:
    entries = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2 or not tokens[1].isdigit():
            raise GrammarFormatError(f"line {lineno}: expected '<path> <id>'")
        try:
            entries.append((parse_suffix(tokens[0]), int(tokens[1])))
        except ValueError as exc:
            raise GrammarFormatError(f"line {lineno}: {exc}") from exc
    return PathMap(entries)
