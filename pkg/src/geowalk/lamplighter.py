"""Lamplighter groups Z_m wr F_k over the Cayley tree of F_k.

An element (x, f) is a lamplighter position x (a tree vertex) and a finitely
supported lamp configuration f.  The word metric for the standard generators
(a_i^{+-}, 0) and (e, +-delta_e) has the closed form

    |(x, f)| = sum_t min(f(t), m - f(t)) + 2 * |Steiner({e, x} u supp f)| - |x|

(lamp presses, plus every Steiner edge walked twice except those of [e, x],
walked once).  ``LengthTracker`` maintains this quantity in O(1) per
generator step, which is what makes scans along long Cayley paths feasible.
"""
from __future__ import annotations

import itertools
import math
import re
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .walks import ResourceError
from .tree import (
    IDENTITY,
    ReducedWord,
    TreeEnd,
    common_prefix_length,
    distance as tree_distance,
    end_estimate,
    format_word,
    parse_word,
)

__all__ = [
    "LampConfig",
    "LampState",
    "LimitConfiguration",
    "LamplighterGroup",
    "LengthTracker",
    "LampSegment",
    "steiner_size",
    "steiner_span",
    "word_length",
    "distance",
    "compose",
    "inverse",
    "geodesic",
    "geodesic_moves",
    "apply_moves",
    "scan_lengths",
    "format_state",
    "parse_state",
    "limit_estimate",
    "path_limit_estimate",
    "bfs_ball",
    "max_min_radius",
    "decorated_pair",
    "marching_pair",
    "random_decoration",
]


class LampConfig:
    """Finitely supported Z_m-valued function on tree vertices.  Immutable."""

    __slots__ = ("modulus", "_values", "_hash")

    def __init__(self, modulus: int, values: Mapping[ReducedWord, int] | Iterable = ()):
        if modulus < 2:
            raise ValueError("modulus must be >= 2")
        items = values.items() if isinstance(values, Mapping) else values
        clean = {}
        for v, x in items:
            x %= modulus
            if x:
                clean[v] = x
        self.modulus = modulus
        self._values = clean
        self._hash = None

    @classmethod
    def _trusted(cls, modulus: int, values: dict) -> "LampConfig":
        obj = object.__new__(cls)
        obj.modulus = modulus
        obj._values = values
        obj._hash = None
        return obj

    def __getitem__(self, v: ReducedWord) -> int:
        return self._values.get(v, 0)

    def value(self, v: ReducedWord) -> int:
        return self._values.get(v, 0)

    def support(self) -> list[ReducedWord]:
        return list(self._values)

    def items(self):
        return self._values.items()

    def __iter__(self) -> Iterator[ReducedWord]:
        return iter(self._values)

    def __len__(self) -> int:
        return len(self._values)

    def __bool__(self) -> bool:
        return bool(self._values)

    def __eq__(self, other) -> bool:
        return isinstance(other, LampConfig) and self.modulus == other.modulus and self._values == other._values

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.modulus, frozenset(self._values.items())))
        return self._hash

    def __add__(self, other: "LampConfig") -> "LampConfig":
        _check_modulus(self.modulus, other.modulus)
        out = dict(self._values)
        m = self.modulus
        for v, x in other._values.items():
            y = (out.get(v, 0) + x) % m
            if y:
                out[v] = y
            else:
                out.pop(v, None)
        return LampConfig._trusted(m, out)

    def __neg__(self) -> "LampConfig":
        m = self.modulus
        return LampConfig._trusted(m, {v: m - x for v, x in self._values.items()})

    def __sub__(self, other: "LampConfig") -> "LampConfig":
        return self + (-other)

    def translate(self, g: ReducedWord) -> "LampConfig":
        """T_g f, i.e. v -> f(g^-1 v): the support moves to g * s."""
        return LampConfig._trusted(self.modulus, {g * v: x for v, x in self._values.items()})

    def restrict(self, keep) -> "LampConfig":
        return LampConfig._trusted(self.modulus, {v: x for v, x in self._values.items() if keep(v)})

    def presses(self) -> int:
        m = self.modulus
        return sum(min(x, m - x) for x in self._values.values())

    def sorted_items(self) -> list[tuple[ReducedWord, int]]:
        return sorted(self._values.items(), key=lambda kv: kv[0].sort_key())

    def __repr__(self) -> str:
        body = ",".join(f"{format_word(v)}:{x}" for v, x in self.sorted_items())
        return f"LampConfig(m={self.modulus}, {{{body}}})"

    def __reduce__(self):
        return (LampConfig, (self.modulus, dict(self._values)))


def _check_modulus(m1: int, m2: int) -> None:
    if m1 != m2:
        raise ValueError(f"modulus mismatch: {m1} vs {m2}")


@dataclass(frozen=True)
class LampState:
    pos: ReducedWord
    lamps: LampConfig

    @property
    def modulus(self) -> int:
        return self.lamps.modulus

    def __repr__(self) -> str:
        return f"LampState({format_state(self)!r})"


def format_state(g: LampState) -> str:
    lamps = ",".join(f"{format_word(v)}:{x}" for v, x in g.lamps.sorted_items())
    return f"pos={format_word(g.pos)}; lamps={lamps}"


_STATE_RE = re.compile(r"^\s*pos\s*=\s*(?P<pos>[^;]*);\s*lamps\s*=\s*(?P<lamps>.*?)\s*$")


def parse_state(text: str, modulus: int) -> LampState:
    """``"pos=<word>; lamps=<word>:<value>,..."``; the lamps list may be empty."""
    m = _STATE_RE.match(text)
    if not m:
        raise ValueError(f"bad lamplighter literal {text!r}")
    values: dict[ReducedWord, int] = {}
    body = m.group("lamps").strip()
    if body:
        for entry in body.split(","):
            word, _, value = entry.partition(":")
            if not _:
                raise ValueError(f"lamp entry {entry!r} needs '<word>:<value>'")
            v = parse_word(word)
            values[v] = values.get(v, 0) + int(value)
    return LampState(parse_word(m.group("pos")), LampConfig(modulus, values))


def compose(g: LampState, h: LampState) -> LampState:
    """(x, f)(y, g) = (xy, f + T_x g)."""
    _check_modulus(g.modulus, h.modulus)
    if not h.lamps:
        return LampState(g.pos * h.pos, g.lamps)
    if not h.pos.length and len(h.lamps) == 1 and not g.pos.length:
        return LampState(g.pos, g.lamps + h.lamps)
    return LampState(g.pos * h.pos, g.lamps + h.lamps.translate(g.pos))


def inverse(g: LampState) -> LampState:
    """(x, f)^-1 = (x^-1, -T_{x^-1} f)."""
    xinv = g.pos.inverse()
    return LampState(xinv, -g.lamps.translate(xinv))


def steiner_size(vertices: Iterable[ReducedWord]) -> int:
    """Edges of the smallest subtree containing e and all ``vertices``."""
    seen = {IDENTITY}
    for v in vertices:
        node = v
        while node not in seen:
            seen.add(node)
            node = node.parent
    return len(seen) - 1


def _rooted_union(vertices: Sequence[ReducedWord]) -> tuple[set, ReducedWord]:
    """Union of the paths e -> v, and the meet of the vertices.

    The meet is found by walking down from e while the union does not branch,
    so the cost stays linear in the size of the union.
    """
    seen = {IDENTITY}
    degree: dict[ReducedWord, int] = {}
    child: dict[ReducedWord, ReducedWord] = {}
    for v in vertices:
        node = v
        while node not in seen:
            seen.add(node)
            up = node.parent
            degree[up] = degree.get(up, 0) + 1
            child[up] = node
            node = up
    targets = set(vertices)
    meet = IDENTITY
    while meet not in targets and degree.get(meet, 0) == 1:
        meet = child[meet]
    return seen, meet


def steiner_span(vertices: Sequence[ReducedWord]) -> int:
    """Edges of the smallest subtree containing ``vertices`` (e not forced)."""
    vertices = list(vertices)
    if not vertices:
        return 0
    seen, meet = _rooted_union(vertices)
    return len(seen) - 1 - meet.length


def distance(u: LampState, v: LampState) -> int:
    """Word distance |u^-1 v|, computed in place without translating configurations."""
    _check_modulus(u.modulus, v.modulus)
    diff = v.lamps - u.lamps
    span = steiner_span([u.pos, v.pos, *diff])
    return diff.presses() + 2 * span - tree_distance(u.pos, v.pos)


def word_length(g: LampState) -> int:
    return g.lamps.presses() + 2 * steiner_size([g.pos, *g.lamps]) - g.pos.length


def _letter_order(letter: int) -> tuple[int, int]:
    return (abs(letter), letter < 0)


def geodesic_moves(u: LampState, v: LampState) -> list[tuple[str, int]]:
    """Generator moves of the canonical geodesic from ``u`` to ``v``.

    Moves are ``("move", letter)`` or ``("press", +-1)``.  The route is a
    depth-first tour of the Steiner subtree of {pos u, pos v} u supp(v - u):
    branches hanging off [pos u, pos v] are served (in generator-index order)
    before the route moves past their attachment vertex, and each lamp is set
    with min(d, m - d) presses on first arrival.
    """
    _check_modulus(u.modulus, v.modulus)
    m = u.modulus
    diff = v.lamps - u.lamps
    x, y = u.pos, v.pos
    seen, meet = _rooted_union([x, y, *diff])
    # Above the meet the union is a single chain, the strict ancestors of the meet.
    members = seen.difference(meet.ancestors()[:-1])
    nbrs: dict[ReducedWord, list[tuple[int, ReducedWord]]] = {w: [] for w in members}
    for w in members:
        if w is not meet:
            nbrs[w].append((-w.letter, w.parent))
            nbrs[w.parent].append((w.letter, w))
    for w in nbrs:
        nbrs[w].sort(key=lambda item: _letter_order(item[0]))

    path_nodes = _path(x, y)
    on_path = {w: i for i, w in enumerate(path_nodes)}
    moves: list[tuple[str, int]] = []

    def press(w: ReducedWord) -> None:
        d = diff.value(w)
        if d:
            if d <= m - d:
                moves.extend([("press", 1)] * d)
            else:
                moves.extend([("press", -1)] * (m - d))

    for i, w in enumerate(path_nodes):
        press(w)
        prev_ = path_nodes[i - 1] if i else None
        next_ = path_nodes[i + 1] if i + 1 < len(path_nodes) else None
        for letter, child in nbrs[w]:
            if child is prev_ or child is next_:
                continue
            _tour_branch(w, letter, child, nbrs, press, moves)
        if next_ is not None:
            moves.append(("move", _letter_between(w, next_)))
    return moves


def _tour_branch(root, letter, child, nbrs, press, moves) -> None:
    """Depth-first excursion root -> child -> ... -> root."""
    moves.append(("move", letter))
    press(child)
    stack = [(child, root, iter(nbrs[child]))]
    while stack:
        node, parent, it = stack[-1]
        for letter2, nxt in it:
            if nxt is parent:
                continue
            moves.append(("move", letter2))
            press(nxt)
            stack.append((nxt, node, iter(nbrs[nxt])))
            break
        else:
            stack.pop()
            moves.append(("move", _letter_between(node, parent)))


def _letter_between(a: ReducedWord, b: ReducedWord) -> int:
    if b.length == a.length + 1 and b.parent is a:
        return b.letter
    if a.length == b.length + 1 and a.parent is b:
        return -a.letter
    raise ValueError("vertices are not adjacent")


def _path(x: ReducedWord, y: ReducedWord) -> list[ReducedWord]:
    k = common_prefix_length(x, y)
    down = []
    node = x
    while node.length > k:
        down.append(node)
        node = node.parent
    down.append(node)
    up = []
    node = y
    while node.length > k:
        up.append(node)
        node = node.parent
    return down + up[::-1]


def apply_moves(start: LampState, moves: Sequence[tuple[str, int]]) -> list[LampState]:
    """Every state visited by ``moves`` from ``start`` (including ``start``)."""
    m = start.modulus
    pos = start.pos
    lamps = dict(start.lamps.items())
    config = start.lamps
    out = [start]
    for kind, arg in moves:
        if kind == "move":
            pos = pos.push(arg)
        else:
            val = (lamps.get(pos, 0) + arg) % m
            if val:
                lamps[pos] = val
            else:
                lamps.pop(pos, None)
            config = LampConfig._trusted(m, dict(lamps))
        out.append(LampState(pos, config))
    return out


def geodesic(u: LampState, v: LampState) -> list[LampState]:
    """The canonical geodesic from u to v as a list of states."""
    return apply_moves(u, geodesic_moves(u, v))


class LengthTracker:
    """Word distance from a fixed reference state to a state moving by generators.

    With reference (r, f0) and current state (x, f), the tracked value is
    presses(f - f0) + 2 * |Steiner({r, x} u supp(f - f0))| - d(r, x).
    The tree is rooted at r.  Each vertex v carries c(v): the number of
    support points in its subtree, except that for vertices on [r, x] the
    subtree of the next vertex toward x is left out.  Both generator moves
    then touch O(1) entries.
    """

    def __init__(self, reference: LampState, start: LampState):
        _check_modulus(reference.modulus, start.modulus)
        self.modulus = reference.modulus
        root = reference.pos
        self.root = root
        self._root_path = root.ancestors()
        self._root_set = set(self._root_path)
        diff = start.lamps - reference.lamps
        self.lamps = dict(diff.items())
        self.presses = diff.presses()
        self.pos = start.pos
        self.depth = tree_distance(root, start.pos)

        # Union of paths toward the root, with depths measured from the root.
        rdepth = {root: 0}
        order: list[ReducedWord] = []
        for p in [start.pos, *self.lamps]:
            chain = []
            node = p
            while node not in rdepth:
                chain.append(node)
                node = self._toward_root(node)
            d = rdepth[node]
            for w in reversed(chain):
                d += 1
                rdepth[w] = d
                order.append(w)
        self.edges = len(rdepth) - 1
        true = {w: (1 if w in self.lamps else 0) for w in rdepth}
        for w in sorted(order, key=rdepth.__getitem__, reverse=True):
            true[self._toward_root(w)] += true[w]
        counts = {w: c for w, c in true.items() if c}
        node = start.pos
        while node is not root:
            up = self._toward_root(node)
            c = true[up] - true[node]
            if c:
                counts[up] = c
            else:
                counts.pop(up, None)
            node = up
        self._counts = counts

    def _toward_root(self, v: ReducedWord) -> ReducedWord:
        if v in self._root_set and v is not self.root:
            return self._root_path[v.length + 1]
        return v.parent

    @property
    def length(self) -> int:
        return self.presses + 2 * self.edges - self.depth

    def move(self, letter: int) -> None:
        x = self.pos
        nxt = x.push(letter)
        counts = self._counts
        if nxt is not self.root and self._toward_root(nxt) is x:
            cn = counts.get(nxt, 0)
            cx = counts.get(x, 0) - cn
            if cx:
                counts[x] = cx
            else:
                counts.pop(x, None)
            if not cn:
                self.edges += 1
            self.depth += 1
        else:
            cx = counts.get(x, 0)
            if not cx:
                self.edges -= 1
            else:
                counts[nxt] = counts.get(nxt, 0) + cx
            self.depth -= 1
        self.pos = nxt

    def press(self, delta: int) -> None:
        m = self.modulus
        x = self.pos
        old = self.lamps.get(x, 0)
        new = (old + delta) % m
        if new:
            self.lamps[x] = new
        else:
            self.lamps.pop(x, None)
        self.presses += min(new, m - new) - min(old, m - old)
        if bool(old) != bool(new):
            c = self._counts.get(x, 0) + (1 if new else -1)
            if c:
                self._counts[x] = c
            else:
                self._counts.pop(x, None)

    def apply(self, move: tuple[str, int]) -> None:
        kind, arg = move
        if kind == "move":
            self.move(arg)
        else:
            self.press(arg)


def scan_lengths(reference: LampState, start: LampState, moves: Sequence[tuple[str, int]]) -> list[int]:
    """d(reference, s_j) for every state s_j of the Cayley path ``start`` + ``moves``."""
    tr = LengthTracker(reference, start)
    out = [tr.length]
    move, press = tr.move, tr.press
    for kind, arg in moves:
        if kind == "move":
            move(arg)
        else:
            press(arg)
        out.append(tr.length)
    return out


class LampSegment:
    """The canonical geodesic segment from ``start`` to ``end``, parametrized by arc length.

    Parameter 0 sits at the first state nearest the identity; positive
    parameters run toward ``end``.
    """

    def __init__(self, start: LampState, end: LampState):
        self.start = start
        self.end = end
        self.moves = geodesic_moves(start, end)
        identity = LampState(IDENTITY, LampConfig(start.modulus))
        lengths = scan_lengths(identity, start, self.moves)
        self.radius = min(lengths)
        self.zero = lengths.index(self.radius)
        self._memo: tuple[LampState, list[int]] | None = None

    def __len__(self) -> int:
        return len(self.moves)

    @property
    def extent(self) -> tuple[int, int]:
        return (-self.zero, len(self.moves) - self.zero)

    def _scan(self, p: LampState) -> list[int]:
        if self._memo is not None and self._memo[0] is p:
            return self._memo[1]
        lengths = scan_lengths(p, self.start, self.moves)
        self._memo = (p, lengths)
        return lengths

    def states(self) -> list[LampState]:
        return apply_moves(self.start, self.moves)

    def distance(self, p: LampState) -> int:
        return min(self._scan(p))

    def distance_at(self, p: LampState, t: float) -> float:
        lo, hi = self.extent
        if not lo <= t <= hi:
            raise ValueError(f"parameter {t} outside segment extent [{lo}, {hi}]")
        lengths = self._scan(p)
        t0 = math.floor(t)
        frac = t - t0
        d0 = lengths[self.zero + t0]
        if frac == 0:
            return float(d0)
        d1 = lengths[self.zero + t0 + 1]
        return min(d0 + frac, d1 + 1 - frac)


@dataclass(frozen=True)
class LimitConfiguration:
    end: TreeEnd
    lamps: LampConfig
    stabilization_radius: int


def limit_estimate(states: Sequence[LampState], window: float = 0.25) -> LimitConfiguration:
    """Finite-time estimate of the limit configuration of a path of states.

    The end comes from the positions; the reported lamps are the entries that
    never change over the final ``window`` fraction and lie outside the cone
    of the certified end prefix (no cone when nothing is certified).
    """
    if len(states) < 4:
        raise ValueError("need at least 4 states")
    size = max(2, math.ceil(window * len(states)))
    start = len(states) - size
    end = end_estimate([s.pos for s in states], window)
    changed: set = set()
    it = itertools.islice(iter(states), start, None)
    prev = next(it)
    for cur in it:
        if cur.lamps is not prev.lamps:
            changed.update(k for k, _ in cur.lamps.items() ^ prev.lamps.items())
        prev = cur
    return _limit_configuration(end, states[-1].lamps, changed)


def path_limit_estimate(start: LampState, steps: Sequence[LampState], window: float = 0.25) -> LimitConfiguration:
    """``limit_estimate`` of the path start, start*g_1, ..., read off the steps.

    A step (y, h) taken at position x changes lamps exactly on x * supp(h), so
    the window's changed set needs positions only, not a configuration per state.
    """
    if len(steps) < 3:
        raise ValueError("need at least 4 states")
    total = len(steps) + 1
    size = max(2, math.ceil(window * total))
    first = total - size  # index of the first state in the window
    positions = [start.pos]
    changed: set = set()
    m = start.modulus
    values = dict(start.lamps.items())
    pos = start.pos
    for i, g in enumerate(steps, 1):
        for v, x in g.lamps.items():
            t = pos * v
            y = (values.get(t, 0) + x) % m
            if y:
                values[t] = y
            else:
                values.pop(t, None)
            if i > first:
                changed.add(t)
        pos = pos * g.pos
        positions.append(pos)
    end = end_estimate(positions, window)
    return _limit_configuration(end, LampConfig._trusted(m, values), changed)


def _limit_configuration(end: TreeEnd, final: LampConfig, changed: set) -> LimitConfiguration:
    cone = end.stable_prefix if end.stable_length else None

    def keep(v: ReducedWord) -> bool:
        if v in changed:
            return False
        if cone is not None and v.length >= cone.length and v.ancestor(cone.length) is cone:
            return False
        return True

    lamps = final.restrict(keep)
    radius = max((v.length for v in lamps), default=0)
    return LimitConfiguration(end, lamps, radius)


class LamplighterGroup:
    """Z_m wr F_k with the standard generating set S."""

    snapshot_stride = 64
    acts_on_itself = True

    def __init__(self, modulus: int = 2, rank: int = 2):
        if modulus < 2:
            raise ValueError("modulus must be >= 2")
        if rank < 1:
            raise ValueError("rank must be >= 1")
        self.modulus = modulus
        self.rank = rank
        self.identity = LampState(IDENTITY, LampConfig(modulus))

    def __repr__(self) -> str:
        return f"LamplighterGroup(m={self.modulus}, k={self.rank})"

    def __eq__(self, other) -> bool:
        return isinstance(other, LamplighterGroup) and (other.modulus, other.rank) == (self.modulus, self.rank)

    def __hash__(self) -> int:
        return hash(("LamplighterGroup", self.modulus, self.rank))

    def move(self, letter: int) -> LampState:
        return LampState(IDENTITY.push(letter), LampConfig(self.modulus))

    def press(self, delta: int) -> LampState:
        return LampState(IDENTITY, LampConfig(self.modulus, {IDENTITY: delta}))

    def generators(self) -> list[LampState]:
        """(a_1, 0), (a_1^-1, 0), ..., then (e, +delta_e), (e, -delta_e) (one press when m = 2)."""
        out = []
        for i in range(1, self.rank + 1):
            out.append(self.move(i))
            out.append(self.move(-i))
        out.append(self.press(1))
        if self.modulus > 2:
            out.append(self.press(-1))
        return out

    def switch_walk_switch(self) -> list[LampState]:
        """All products (e, s delta_e)(a, 0)(e, s' delta_e) with a a tree generator."""
        out = []
        m = self.modulus
        for i in range(1, self.rank + 1):
            for letter in (i, -i):
                for s1 in range(m):
                    for s2 in range(m):
                        g = LampState(IDENTITY, LampConfig(m, {IDENTITY: s1}))
                        g = compose(g, self.move(letter))
                        g = compose(g, LampState(IDENTITY, LampConfig(m, {IDENTITY: s2})))
                        out.append(g)
        return out

    def mul(self, g: LampState, h: LampState) -> LampState:
        if not h.lamps:
            if h.pos.length == 1:
                return LampState(g.pos.push(h.pos.letter), g.lamps)
            return LampState(g.pos * h.pos, g.lamps)
        if not h.pos.length and len(h.lamps) == 1:
            (v, x), = h.lamps.items()
            if v is IDENTITY:
                m = self.modulus
                values = dict(g.lamps.items())
                y = (values.get(g.pos, 0) + x) % m
                if y:
                    values[g.pos] = y
                else:
                    values.pop(g.pos, None)
                return LampState(g.pos, LampConfig._trusted(m, values))
        return compose(g, h)

    def inv(self, g: LampState) -> LampState:
        return inverse(g)

    def act(self, g: LampState, p: LampState) -> LampState:
        return self.mul(g, p)

    def dist(self, u: LampState, v: LampState) -> int:
        return distance(u, v)

    def accumulate(self, start: LampState, steps: Sequence[LampState], stride: int) -> list[LampState]:
        """Prefix snapshots every ``stride`` steps, with one mutable configuration."""
        m = self.modulus
        pos = start.pos
        values = dict(start.lamps.items())
        out = [start]
        for i, s in enumerate(steps, 1):
            if s.lamps:
                for v, x in s.lamps.items():
                    t = pos * v
                    y = (values.get(t, 0) + x) % m
                    if y:
                        values[t] = y
                    else:
                        values.pop(t, None)
            pos = pos * s.pos if s.pos.length != 1 else pos.push(s.pos.letter)
            if i % stride == 0:
                out.append(LampState(pos, LampConfig._trusted(m, dict(values))))
        return out

    def fold(self, start: LampState, steps: Sequence[LampState]) -> LampState:
        return self.accumulate(start, steps, max(1, len(steps)))[-1]

    def parse(self, text: str) -> LampState:
        g = parse_state(text, self.modulus)
        if any(abs(x) > self.rank for w in [g.pos, *g.lamps] for x in w.letters()):
            raise ValueError(f"{text!r} uses a generator outside F_{self.rank}")
        return g

    def format(self, g: LampState) -> str:
        return format_state(g)

    def segment_distance(self, u: LampState, v: LampState, x: LampState | None = None) -> int:
        ref = self.identity if x is None else x
        return min(scan_lengths(ref, u, geodesic_moves(u, v)))


def bfs_ball(group: LamplighterGroup, radius: int, budget: int = 5_000_000) -> dict[LampState, int]:
    """Exact word lengths on the Cayley ball, by breadth-first search over S."""
    gens = group.generators()
    dist = {group.identity: 0}
    frontier = deque([group.identity])
    while frontier:
        g = frontier.popleft()
        d = dist[g]
        if d == radius:
            continue
        for s in gens:
            h = group.mul(g, s)
            if h not in dist:
                dist[h] = d + 1
                frontier.append(h)
                if len(dist) > budget:
                    raise ResourceError(f"lamplighter ball of radius {radius} exceeds {budget} elements")
    return dist


def max_min_radius(u: LampState, v: LampState, ball: Mapping[LampState, int], group: LamplighterGroup) -> int:
    """max over all geodesics [u, v] of their distance to the identity, from a BFS table alone.

    ``ball`` maps elements to word lengths (as built by ``bfs_ball``); distances
    are read as d(y, z) = |y^-1 z|.  A vertex z lies on some geodesic iff
    d(u, z) + d(z, v) = d(u, v); a bottleneck sweep over that layered graph
    gives the answer.  Raises ``ValueError`` if the table is too small.
    """
    def table(g: LampState) -> int:
        try:
            return ball[g]
        except KeyError:
            raise ValueError("BFS table does not cover the geodesics between u and v") from None

    uinv = inverse(u)
    total = table(compose(uinv, v))
    gens = group.generators()
    layer = {u: table(u)}
    for step in range(1, total + 1):
        nxt: dict[LampState, int] = {}
        for z, best in layer.items():
            for s in gens:
                y = group.mul(z, s)
                score = min(best, table(y))
                if y in nxt:
                    nxt[y] = max(nxt[y], score)
                elif table(compose(uinv, y)) == step and table(compose(inverse(y), v)) == total - step:
                    nxt[y] = score
        layer = nxt
    return layer[v]


def decorated_pair(group: LamplighterGroup, depth: int, first: LampConfig, second: LampConfig,
                   forward: int = 1, backward: int = 2) -> tuple[LampState, LampState]:
    """Truncations at ``depth`` of two limit configurations with distinct ends.

    The ends are forward^inf and backward^inf (generator indices); each
    configuration is a fixed finite lamp set.
    """
    return (
        LampState(ReducedWord.from_letters([forward] * depth), first),
        LampState(ReducedWord.from_letters([backward] * depth), second),
    )


def marching_pair(group: LamplighterGroup, depth: int, letter: int = 1) -> tuple[LampState, LampState]:
    """Same end, a lamp marching outward: (a^2d, 0) and (a^2d, delta at a^d)."""
    far = ReducedWord.from_letters([letter] * (2 * depth))
    mid = ReducedWord.from_letters([letter] * depth)
    m = group.modulus
    return LampState(far, LampConfig(m)), LampState(far, LampConfig(m, {mid: 1}))


def random_decoration(group: LamplighterGroup, rng, radius: int = 2, size: int = 3) -> LampConfig:
    """A random lamp configuration with ``size`` lit vertices inside the given tree ball."""
    sphere = [IDENTITY]
    verts = [IDENTITY]
    for _ in range(radius):
        sphere = [p.push(x) for p in sphere for x in _letters(group.rank) if not (p.length and x == -p.letter)]
        verts.extend(sphere)
    picks = rng.choice(len(verts), size=min(size, len(verts)), replace=False)
    values = {verts[int(i)]: int(rng.integers(1, group.modulus)) for i in picks}
    return LampConfig(group.modulus, values)


def _letters(rank: int) -> list[int]:
    out = []
    for i in range(1, rank + 1):
        out += [i, -i]
    return out
