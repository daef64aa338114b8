"""Free groups F_k acting on their Cayley trees.

Reduced words are hash-consed nodes of one global trie: a word is a pointer to
its last letter, whose parent is the word with that letter removed.  Two equal
words are therefore the same object, equality is identity, and appending or
cancelling a letter is O(1).  Paths of length 10^5 share structure instead of
storing 10^5 separate tuples.

Letters are nonzero ints: ``i`` is the generator a_i, ``-i`` its inverse.
"""
from __future__ import annotations

import math
import string
import weakref
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

__all__ = [
    "ReducedWord",
    "IDENTITY",
    "FreeGroup",
    "TreeEnd",
    "TreeLine",
    "multiply",
    "inverse",
    "distance",
    "geodesic",
    "common_prefix_length",
    "gromov_product",
    "distance_to_geodesic",
    "confluence",
    "pencil_line",
    "end_estimate",
    "parse_word",
    "format_word",
]

_ALPHABET = string.ascii_lowercase
# (id(parent), letter) -> child.  Safe because a live child keeps its parent
# alive, so the parent's id cannot be recycled while the entry exists.
_NODES: "weakref.WeakValueDictionary[tuple[int, int], ReducedWord]" = weakref.WeakValueDictionary()


class ReducedWord:
    """A freely reduced word; also a vertex of the Cayley tree."""

    __slots__ = ("parent", "letter", "length", "__weakref__")

    parent: "ReducedWord | None"
    letter: int
    length: int

    def __new__(cls, *args, **kwargs):
        raise TypeError("use ReducedWord.from_letters or IDENTITY.push")

    @classmethod
    def _root(cls) -> "ReducedWord":
        node = object.__new__(cls)
        node.parent = None
        node.letter = 0
        node.length = 0
        return node

    @classmethod
    def from_letters(cls, letters: Iterable[int]) -> "ReducedWord":
        """Freely reduce ``letters`` and return the canonical node."""
        node = IDENTITY
        for x in letters:
            node = node.push(x)
        return node

    def push(self, letter: int) -> "ReducedWord":
        """Right-multiply by a single letter."""
        if letter == -self.letter and self.length:
            return self.parent
        if letter == 0:
            raise ValueError("letter 0 is not a generator")
        key = (id(self), letter)
        child = _NODES.get(key)
        if child is None:
            child = object.__new__(ReducedWord)
            child.parent = self
            child.letter = letter
            child.length = self.length + 1
            _NODES[key] = child
        return child

    def letters(self) -> tuple[int, ...]:
        out = []
        node = self
        while node.length:
            out.append(node.letter)
            node = node.parent
        out.reverse()
        return tuple(out)

    def ancestor(self, depth: int) -> "ReducedWord":
        """The prefix of length ``depth``."""
        if not 0 <= depth <= self.length:
            raise ValueError(f"depth {depth} outside 0..{self.length}")
        node = self
        for _ in range(self.length - depth):
            node = node.parent
        return node

    def ancestors(self) -> list["ReducedWord"]:
        """All prefixes, from the identity up to ``self``."""
        out = []
        node = self
        while node is not None:
            out.append(node)
            node = node.parent
        out.reverse()
        return out

    def __len__(self) -> int:
        return self.length

    def __mul__(self, other: "ReducedWord") -> "ReducedWord":
        node = self
        for x in other.letters():
            node = node.push(x)
        return node

    def inverse(self) -> "ReducedWord":
        node = IDENTITY
        cur = self
        while cur.length:
            node = node.push(-cur.letter)
            cur = cur.parent
        return node

    def sort_key(self) -> tuple:
        """Shortlex key with a < a' < b < b' < ..."""
        return (self.length, tuple(2 * abs(x) + (x < 0) for x in self.letters()))

    def __reduce__(self):
        return (ReducedWord.from_letters, (self.letters(),))

    def __repr__(self) -> str:
        return f"ReducedWord({format_word(self)!r})"

    def __str__(self) -> str:
        return format_word(self)


IDENTITY = ReducedWord._root()


def parse_word(text: str) -> ReducedWord:
    """Parse ``"ab'a"``-style literals; ``"1"`` (or empty) is the identity."""
    text = text.strip()
    if text in ("", "1", "e"):
        return IDENTITY
    letters = []
    for ch in text:
        if ch == "'":
            if not letters or letters[-1] < 0:
                raise ValueError(f"misplaced inverse mark in {text!r}")
            letters[-1] = -letters[-1]
        elif ch in _ALPHABET:
            letters.append(_ALPHABET.index(ch) + 1)
        elif not ch.isspace():
            raise ValueError(f"bad character {ch!r} in word literal {text!r}")
    return ReducedWord.from_letters(letters)


def format_word(word: ReducedWord) -> str:
    if not word.length:
        return "1"
    return "".join(_ALPHABET[abs(x) - 1] + ("'" if x < 0 else "") for x in word.letters())


def multiply(u: ReducedWord, v: ReducedWord) -> ReducedWord:
    return u * v


def inverse(u: ReducedWord) -> ReducedWord:
    return u.inverse()


def common_prefix_length(u: ReducedWord, v: ReducedWord) -> int:
    """Length of the longest common prefix, i.e. depth of the meet in the tree."""
    while u.length > v.length:
        u = u.parent
    while v.length > u.length:
        v = v.parent
    while u is not v:
        u = u.parent
        v = v.parent
    return u.length


def _meet(u: ReducedWord, v: ReducedWord) -> ReducedWord:
    return u.ancestor(common_prefix_length(u, v))


def distance(u: ReducedWord, v: ReducedWord) -> int:
    """Word distance |u^-1 v|."""
    return u.length + v.length - 2 * common_prefix_length(u, v)


def geodesic(u: ReducedWord, v: ReducedWord) -> list[ReducedWord]:
    """The unique vertex path from ``u`` to ``v``."""
    m = common_prefix_length(u, v)
    down = []
    node = u
    while node.length > m:
        down.append(node)
        node = node.parent
    down.append(node)
    up = []
    node = v
    while node.length > m:
        up.append(node)
        node = node.parent
    up.reverse()
    return down + up


def gromov_product(x: ReducedWord, y: ReducedWord, z: ReducedWord) -> float:
    """(y, z)_x; a half-integer in general, an integer on a tree."""
    return (distance(x, y) + distance(x, z) - distance(y, z)) / 2


def distance_to_geodesic(x: ReducedWord, path: Sequence[ReducedWord]) -> int:
    """Brute-force distance from ``x`` to the vertices of ``path``."""
    return min(distance(x, p) for p in path)


def _fold_stack(start: ReducedWord, steps: Sequence[ReducedWord]) -> list[int]:
    stack = list(start.letters())
    spelled: dict[ReducedWord, tuple[int, ...]] = {}
    for step in steps:
        letters = spelled.get(step)
        if letters is None:
            letters = spelled[step] = step.letters()
        for x in letters:
            if stack and stack[-1] == -x:
                stack.pop()
            else:
                stack.append(x)
    return stack


class FreeGroup:
    """F_k with its standard generators, acting on the Cayley tree by left multiplication."""

    snapshot_stride = 1
    acts_on_itself = True

    def __init__(self, rank: int = 2):
        if not 1 <= rank <= len(_ALPHABET):
            raise ValueError(f"rank must be in 1..{len(_ALPHABET)}, got {rank}")
        self.rank = rank
        self.identity = IDENTITY

    def __repr__(self) -> str:
        return f"FreeGroup({self.rank})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FreeGroup) and other.rank == self.rank

    def __hash__(self) -> int:
        return hash(("FreeGroup", self.rank))

    def generators(self) -> list[ReducedWord]:
        """a, a', b, b', ... in generator-index order."""
        out = []
        for i in range(1, self.rank + 1):
            out.append(IDENTITY.push(i))
            out.append(IDENTITY.push(-i))
        return out

    def mul(self, u: ReducedWord, v: ReducedWord) -> ReducedWord:
        return u * v

    def inv(self, u: ReducedWord) -> ReducedWord:
        return u.inverse()

    def act(self, g: ReducedWord, p: ReducedWord) -> ReducedWord:
        return g * p

    def dist(self, u: ReducedWord, v: ReducedWord) -> int:
        return distance(u, v)

    def fold(self, start: ReducedWord, steps: Sequence[ReducedWord]) -> ReducedWord:
        """start * steps[0] * ... * steps[-1], on a plain list stack."""
        return ReducedWord.from_letters(_fold_stack(start, steps))

    def fold_length(self, start: ReducedWord, steps: Sequence[ReducedWord]) -> int:
        """Word length of the product, without building the word."""
        return len(_fold_stack(start, steps))

    def parse(self, text: str) -> ReducedWord:
        word = parse_word(text)
        if any(abs(x) > self.rank for x in word.letters()):
            raise ValueError(f"{text!r} uses a generator outside F_{self.rank}")
        return word

    def format(self, word: ReducedWord) -> str:
        return format_word(word)

    def segment_distance(self, u: ReducedWord, v: ReducedWord, x: ReducedWord | None = None) -> int:
        """Distance from ``x`` (default e) to the geodesic [u, v]."""
        x = IDENTITY if x is None else x
        return round(gromov_product(x, u, v))


@dataclass(frozen=True)
class TreeEnd:
    """Finite approximation of an end: the first ``stable_length`` letters are certified."""

    prefix: ReducedWord
    stable_length: int

    def __post_init__(self):
        if not 0 <= self.stable_length <= self.prefix.length:
            raise ValueError("stable_length must lie in 0..len(prefix)")

    @property
    def stable_prefix(self) -> ReducedWord:
        return self.prefix.ancestor(self.stable_length)

    def translate(self, g: ReducedWord) -> "TreeEnd":
        """g applied to the end.  Certification survives only when the stable part outlives g's cancellation."""
        stable = self.stable_prefix
        moved = g * self.prefix
        if stable.length > g.length:
            return TreeEnd(moved, (g * stable).length)
        return TreeEnd(moved, 0)

    @classmethod
    def ray(cls, letters: Sequence[int], depth: int) -> "TreeEnd":
        """The end of the periodic ray letters^inf, certified to ``depth`` letters."""
        node = IDENTITY
        i = 0
        while node.length < depth:
            node = node.push(letters[i % len(letters)])
            i += 1
            if i > 4 * depth + 4 * len(letters):
                raise ValueError("periodic word does not escape; it is not reduced cyclically")
        return cls(node, node.length)


def common_prefix_length_many(words: Sequence[ReducedWord]) -> int:
    """Length of the longest prefix shared by every word.

    The meet of a set equals the shallowest meet of consecutive pairs (the
    geodesics between consecutive words form a connected subtree), so for a
    walk the cost is proportional to the total step length.
    """
    if not words:
        raise ValueError("need at least one word")
    it = iter(words)
    prev = next(it)
    best = prev.length
    for w in it:
        m = common_prefix_length(prev, w)
        if m < best:
            best = m
        prev = w
    return best


def end_estimate(images: Sequence[ReducedWord], window: float = 0.25) -> TreeEnd:
    """Estimate the end a sequence of vertices converges to.

    The prefix is the final image; the certified length is the longest prefix
    shared by every vertex in the final ``window`` fraction (at least 2
    vertices), or 0 when that window is constant.
    """
    if len(images) < 2:
        raise ValueError("need at least 2 images")
    size = max(2, math.ceil(window * len(images)))
    tail = images[-size:]
    if all(p is tail[0] for p in tail):
        # A window that never moves carries no evidence about any end.
        return TreeEnd(images[-1], 0)
    return TreeEnd(images[-1], common_prefix_length_many(tail))


def confluence(xi: TreeEnd, eta: TreeEnd) -> ReducedWord:
    """The vertex where the geodesics toward two distinct ends separate."""
    a, b = xi.stable_prefix, eta.stable_prefix
    m = common_prefix_length(a, b)
    if m >= min(a.length, b.length):
        raise ValueError("ends not distinguishable at their certified lengths")
    return a.ancestor(m)


@dataclass(frozen=True)
class TreeLine:
    """Bi-infinite geodesic through ``center``, represented out to two tips.

    Parameter 0 sits at ``center``; positive parameters run toward ``forward_tip``.
    Both tips must descend from ``center`` through different children.
    """

    center: ReducedWord
    forward_tip: ReducedWord
    backward_tip: ReducedWord

    def __post_init__(self):
        c = self.center
        for tip in (self.forward_tip, self.backward_tip):
            if tip.length <= c.length or tip.ancestor(c.length) is not c:
                raise ValueError("tips must be proper descendants of the center")
        if common_prefix_length(self.forward_tip, self.backward_tip) != c.length:
            raise ValueError("tips leave the center through the same edge")

    @property
    def extent(self) -> tuple[int, int]:
        c = self.center.length
        return (c - self.backward_tip.length, self.forward_tip.length - c)

    def point(self, t: int) -> ReducedWord:
        lo, hi = self.extent
        if not lo <= t <= hi:
            raise ValueError(f"parameter {t} outside represented extent [{lo}, {hi}]")
        if t >= 0:
            return self.forward_tip.ancestor(self.center.length + t)
        return self.backward_tip.ancestor(self.center.length - t)

    def vertices(self) -> list[ReducedWord]:
        lo, hi = self.extent
        return [self.point(t) for t in range(lo, hi + 1)]

    @cached_property
    def _nodes(self) -> frozenset:
        return frozenset(self.forward_tip.ancestors()) | frozenset(self.backward_tip.ancestors())

    def distance(self, v: ReducedWord) -> int:
        """Distance from ``v`` to the (represented part of the) line."""
        nodes = self._nodes
        node = v
        while node not in nodes:
            node = node.parent
        c = self.center.length
        if node.length < c:
            return (v.length - node.length) + (c - node.length)
        return v.length - node.length

    def distance_at(self, v: ReducedWord, t: float) -> float:
        """Distance from ``v`` to gamma(t), with gamma(t) on an edge for fractional t."""
        t0 = math.floor(t)
        frac = t - t0
        d0 = distance(v, self.point(t0))
        if frac == 0:
            return float(d0)
        d1 = distance(v, self.point(t0 + 1))
        return min(d0 + frac, d1 + 1 - frac)

    def translate(self, g: ReducedWord) -> "TreeLine":
        """g applied to the line, re-anchored at the point nearest the identity."""
        verts = [g * p for p in self.vertices()]
        depths = [p.length for p in verts]
        i = depths.index(min(depths))
        if i == 0 or i == len(verts) - 1:
            raise ValueError("translated line no longer passes its nearest point inside the represented extent")
        return TreeLine(verts[i], verts[-1], verts[0])


def pencil_line(xi: TreeEnd, eta: TreeEnd) -> TreeLine:
    """The geodesic line joining eta to xi; parameter 0 at the confluence, positive toward xi."""
    c = confluence(xi, eta)
    return TreeLine(c, xi.prefix, eta.prefix)
