"""Grammar path suffixes and canonically ordered sets of them.

A grammar path suffix names a trailing segment of a derivation path: zero
or more `rule/ordinal` steps followed by one terminal label, written
`N1/i1:N2/i2:...:F`. A bare terminal is the empty-step case. Suffixes are
immutable and hashable; sets of them are kept in a canonical order so set
results are reproducible byte for byte.
"""

from __future__ import annotations

from typing import Iterable, Iterator

from .graph import valid_label


class SuffixFormatError(ValueError):
    """Raised for text that does not parse as a grammar path suffix."""


class GrammarPathSuffix:
    """An immutable (steps, terminal) pair; steps are (rule, ordinal)."""

    __slots__ = ("steps", "terminal", "_hash", "_key", "_text")

    def __init__(self, steps: tuple[tuple[str, int], ...], terminal: str):
        object.__setattr__(self, "steps", steps)
        object.__setattr__(self, "terminal", terminal)
        object.__setattr__(self, "_hash", hash((steps, terminal)))
        object.__setattr__(self, "_key", None)
        object.__setattr__(self, "_text", None)

    def __setattr__(self, name, value):
        raise AttributeError("GrammarPathSuffix is immutable")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GrammarPathSuffix):
            return NotImplemented
        return self.terminal == other.terminal and self.steps == other.steps

    def __hash__(self) -> int:
        return self._hash

    def __len__(self) -> int:
        """Number of steps (a bare terminal has length 0)."""
        return len(self.steps)

    @property
    def first_label(self) -> str:
        """Rule name of the first step, or the terminal for a bare suffix."""
        return self.steps[0][0] if self.steps else self.terminal

    @property
    def sort_key(self) -> tuple:
        # Terminal first, then steps innermost-out: a suffix of another
        # suffix sorts immediately before all of its extensions, which makes
        # subsumption removal a single linear sweep.
        key = self._key
        if key is None:
            key = (self.terminal,) + tuple(reversed(self.steps))
            object.__setattr__(self, "_key", key)
        return key

    def prepend(self, steps: tuple[tuple[str, int], ...]) -> "GrammarPathSuffix":
        """The longer suffix obtained by adding `steps` in front."""
        if not steps:
            return self
        return GrammarPathSuffix(steps + self.steps, self.terminal)

    def __str__(self) -> str:
        text = self._text
        if text is None:
            parts = [f"{name}/{ordinal}" for name, ordinal in self.steps]
            parts.append(self.terminal)
            text = ":".join(parts)
            object.__setattr__(self, "_text", text)
        return text

    def __repr__(self) -> str:
        return f"GrammarPathSuffix({str(self)!r})"


def bare(terminal: str) -> GrammarPathSuffix:
    """The zero-step suffix for a terminal label."""
    return GrammarPathSuffix((), terminal)


def parse_suffix(text: str) -> GrammarPathSuffix:
    """Parse `N1/i1:...:Nn/in:F` (n >= 0) into a GrammarPathSuffix.

    Raises:
        SuffixFormatError: empty input, malformed step, non-positive or
            non-numeric ordinal, or an invalid rule/terminal name.
    """
    if not text:
        raise SuffixFormatError("empty grammar path suffix")
    parts = text.split(":")
    steps = []
    for part in parts[:-1]:
        name, slash, ordinal = part.partition("/")
        if not slash:
            raise SuffixFormatError(f"step {part!r} has no '/' in suffix {text!r}")
        if not valid_label(name):
            raise SuffixFormatError(f"invalid rule name {name!r} in suffix {text!r}")
        if not ordinal.isdigit() or int(ordinal) < 1:
            raise SuffixFormatError(f"invalid ordinal {ordinal!r} in suffix {text!r}")
        steps.append((name, int(ordinal)))
    terminal = parts[-1]
    if "/" in terminal:
        raise SuffixFormatError(f"suffix {text!r} must end with a terminal label, not a step")
    if not valid_label(terminal):
        raise SuffixFormatError(f"invalid terminal {terminal!r} in suffix {text!r}")
    return GrammarPathSuffix(tuple(steps), terminal)


def is_suffix_of(shorter: GrammarPathSuffix, longer: GrammarPathSuffix) -> bool:
    """True if `shorter` is a step-granular suffix of `longer` (reflexive)."""
    if shorter.terminal != longer.terminal:
        return False
    n = len(shorter.steps)
    if n == 0:
        return True
    if n > len(longer.steps):
        return False
    return longer.steps[-n:] == shorter.steps


class SuffixSet:
    """A duplicate-free collection of suffixes in canonical order.

    Ordering is by GrammarPathSuffix.sort_key. Two SuffixSets are equal
    iff they hold the same suffixes.
    """

    __slots__ = ("_items", "_lookup")

    def __init__(self, items: Iterable[GrammarPathSuffix] = ()):
        lookup = frozenset(items)
        self._items: tuple[GrammarPathSuffix, ...] = tuple(sorted(lookup, key=lambda s: s.sort_key))
        self._lookup = lookup

    def __iter__(self) -> Iterator[GrammarPathSuffix]:
        return iter(self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __bool__(self) -> bool:
        return bool(self._items)

    def __contains__(self, item: object) -> bool:
        return item in self._lookup

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SuffixSet):
            return NotImplemented
        return self._lookup == other._lookup

    def __hash__(self) -> int:
        return hash(self._lookup)

    @property
    def items(self) -> tuple[GrammarPathSuffix, ...]:
        return self._items

    def union(self, other: Iterable[GrammarPathSuffix]) -> "SuffixSet":
        return SuffixSet(self._lookup.union(other))

    def __repr__(self) -> str:
        return "SuffixSet({" + ", ".join(str(s) for s in self._items) + "})"


def remove_subsumed(suffixes: Iterable[GrammarPathSuffix]) -> SuffixSet:
    """Drop every suffix that has a shorter suffix of itself in the set.

    A shorter suffix represents a superset of nodes, so only the minimal
    elements carry information. In canonical order all extensions of a kept
    element are contiguous right after it, so one sweep with the last kept
    element suffices.
    """
    out: list[GrammarPathSuffix] = []
    last: GrammarPathSuffix | None = None
    for s in SuffixSet(suffixes):
        if last is not None and is_suffix_of(last, s):
            continue
        out.append(s)
        last = s
    return SuffixSet(out)
