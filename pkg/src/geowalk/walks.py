"""Group-agnostic random-walk engine.

A *space* here is any object exposing the group-action surface used below:
``identity``, ``mul``, ``inv``, ``act``, ``dist``, ``parse``/``format`` and,
for enumeration, ``generators``.  ``FreeGroup``, ``MoebiusGroup`` and
``LamplighterGroup`` all qualify.
"""
from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from typing import Any, Callable, Protocol

import numpy as np

__all__ = [
    "ResourceError",
    "GroupAction",
    "FiniteMeasure",
    "trial_seed",
    "make_rng",
    "sample",
    "sample_many",
    "reflect",
    "first_moment",
    "PrefixSequence",
    "SamplePath",
    "BilateralPath",
    "walk",
    "walk_endpoint",
    "bilateral_walk",
    "ball_growth",
    "parse_measure",
    "format_measure",
]

WEIGHT_TOLERANCE = 1e-12


class ResourceError(RuntimeError):
    """A computation exceeded its representation or enumeration budget."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message if index is None else f"{message} (at index {index})")
        self.index = index


class GroupAction(Protocol):
    identity: Any

    def mul(self, g, h): ...

    def inv(self, g): ...

    def act(self, g, p): ...

    def dist(self, p, q) -> float: ...


@dataclass(frozen=True)
class FiniteMeasure:
    """Finitely supported probability measure; weights may be Fractions or floats."""

    atoms: tuple[tuple[Any, Real], ...]
    _cumulative: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        atoms = tuple((g, w) for g, w in self.atoms)
        object.__setattr__(self, "atoms", atoms)
        if not atoms:
            raise ValueError("measure needs at least one atom")
        elements = [g for g, _ in atoms]
        if len(set(elements)) != len(elements):
            raise ValueError("duplicate elements in measure")
        weights = [w for _, w in atoms]
        if any(not w > 0 for w in weights):
            raise ValueError("weights must be strictly positive")
        total = sum(weights)
        if all(isinstance(w, (int, Fraction)) for w in weights):
            if total != 1:
                raise ValueError(f"weights sum to {total}, not 1")
        elif abs(float(total) - 1.0) > WEIGHT_TOLERANCE:
            raise ValueError(f"weights sum to {float(total)!r}, not 1 within {WEIGHT_TOLERANCE}")
        cum = np.cumsum([float(w) for w in weights])
        cum[-1] = np.inf
        object.__setattr__(self, "_cumulative", cum)

    @classmethod
    def uniform(cls, elements: Sequence) -> "FiniteMeasure":
        n = len(elements)
        return cls(tuple((g, Fraction(1, n)) for g in elements))

    @classmethod
    def dirac(cls, element) -> "FiniteMeasure":
        return cls(((element, Fraction(1)),))

    @property
    def elements(self) -> list:
        return [g for g, _ in self.atoms]

    @property
    def weights(self) -> list:
        return [w for _, w in self.atoms]

    def __len__(self) -> int:
        return len(self.atoms)


def trial_seed(master_seed: int, trial: int) -> int:
    """64-bit seed of the independent stream for ``trial``."""
    ss = np.random.SeedSequence(master_seed, spawn_key=(trial,))
    return int(ss.generate_state(1, np.uint64)[0])


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based generator (Philox) keyed by a 64-bit seed."""
    return np.random.Generator(np.random.Philox(key=seed))


def sample_many(measure: FiniteMeasure, rng: np.random.Generator, size: int) -> list:
    """``size`` independent draws; draw i consumes exactly the i-th uniform of the stream."""
    idx = np.searchsorted(measure._cumulative, rng.random(size), side="right")
    elements = measure.elements
    return [elements[i] for i in idx.tolist()]


def sample(measure: FiniteMeasure, rng: np.random.Generator):
    return sample_many(measure, rng, 1)[0]


def reflect(space: GroupAction, measure: FiniteMeasure) -> FiniteMeasure:
    """The reflected measure g -> mu(g^-1)."""
    return FiniteMeasure(tuple((space.inv(g), w) for g, w in measure.atoms))


def first_moment(space: GroupAction, measure: FiniteMeasure, basepoint=None) -> float:
    x = space.identity if basepoint is None else basepoint
    return sum(float(w) * space.dist(x, space.act(g, x)) for g, w in measure.atoms)


class PrefixSequence(Sequence):
    """The prefix products start, start*s_1, start*s_1*s_2, ... as a lazy sequence.

    Every ``stride``-th prefix is stored; others are replayed from the nearest
    stored one.  With ``stride == 1`` the sequence is fully materialized.
    """

    def __init__(self, space: GroupAction, start, steps: Sequence, stride: int | None = None):
        self.space = space
        self.steps = steps
        self.stride = stride or getattr(space, "snapshot_stride", 1)
        accumulate = getattr(space, "accumulate", None)
        if accumulate is not None:
            self._snapshots = accumulate(start, steps, self.stride)
        else:
            self._snapshots = _accumulate(space, start, steps, self.stride)

    def __len__(self) -> int:
        return len(self.steps) + 1

    def __getitem__(self, k):
        if isinstance(k, slice):
            return [self[i] for i in range(*k.indices(len(self)))]
        if k < 0:
            k += len(self)
        if not 0 <= k < len(self):
            raise IndexError(k)
        q, r = divmod(k, self.stride)
        g = self._snapshots[q]
        for s in self.steps[q * self.stride : k]:
            g = self.space.mul(g, s)
        return g

    def __iter__(self):
        if self.stride == 1:
            yield from self._snapshots
            return
        g = self._snapshots[0]
        yield g
        for s in self.steps:
            g = self.space.mul(g, s)
            yield g


def _accumulate(space: GroupAction, start, steps: Sequence, stride: int) -> list:
    out = [start]
    g = start
    check = getattr(space, "check_representable", None)
    for i, s in enumerate(steps, 1):
        g = space.mul(g, s)
        if check is not None:
            check(g, i)
        if i % stride == 0:
            out.append(g)
    return out


class _Images(Sequence):
    def __init__(self, space: GroupAction, prefixes: Sequence, basepoint):
        self.space = space
        self.prefixes = prefixes
        self.basepoint = basepoint
        self._trivial = basepoint == space.identity and getattr(space, "acts_on_itself", False)

    def __len__(self) -> int:
        return len(self.prefixes)

    def __getitem__(self, k):
        if isinstance(k, slice):
            return [self[i] for i in range(*k.indices(len(self)))]
        g = self.prefixes[k]
        return g if self._trivial else self.space.act(g, self.basepoint)

    def __iter__(self):
        for g in self.prefixes:
            yield g if self._trivial else self.space.act(g, self.basepoint)


@dataclass(frozen=True)
class SamplePath:
    """One sample path: steps g_1..g_n, prefixes w_0..w_n, images w_k x."""

    space: Any
    steps: tuple
    prefixes: Sequence
    images: Sequence
    basepoint: Any
    seed: int | None

    @property
    def n(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class BilateralPath:
    """Steps g_lo..g_hi (lo <= 0 < hi) of a bi-infinite sequence.

    ``prefix(n)`` is the two-sided product W(n): g_1...g_n for n >= 0 and
    g_0^-1 g_-1^-1 ... g_(n+1)^-1 for n < 0, so that W(n)^-1 W(m) = g_(n+1)...g_m.
    """

    space: Any
    steps: tuple
    lo: int
    basepoint: Any
    seed: int | None = None

    def __post_init__(self):
        if self.lo > 0 or self.hi < 1:
            raise ValueError("bilateral path must cover index 0 and 1")

    @property
    def hi(self) -> int:
        return self.lo + len(self.steps) - 1

    def step(self, i: int):
        if not self.lo <= i <= self.hi:
            raise IndexError(i)
        return self.steps[i - self.lo]

    def _forward(self) -> PrefixSequence:
        cached = self.__dict__.get("_fwd")
        if cached is None:
            cached = PrefixSequence(self.space, self.space.identity, self.steps[1 - self.lo :])
            object.__setattr__(self, "_fwd", cached)
        return cached

    def _backward(self) -> PrefixSequence:
        cached = self.__dict__.get("_bwd")
        if cached is None:
            inv = self.space.inv
            back = [inv(self.step(i)) for i in range(0, self.lo - 1, -1)]
            cached = PrefixSequence(self.space, self.space.identity, back)
            object.__setattr__(self, "_bwd", cached)
        return cached

    @property
    def forward_prefixes(self) -> Sequence:
        return self._forward()

    @property
    def backward_prefixes(self) -> Sequence:
        """W(0), W(-1), ..., W(lo - 1)."""
        return self._backward()

    def prefix(self, n: int):
        if n >= 0:
            return self.forward_prefixes[n]
        return self.backward_prefixes[-n]

    @property
    def forward_images(self) -> Sequence:
        return _Images(self.space, self.forward_prefixes, self.basepoint)

    @property
    def backward_images(self) -> Sequence:
        return _Images(self.space, self.backward_prefixes, self.basepoint)

    def forward_path(self) -> SamplePath:
        prefixes = self.forward_prefixes
        return SamplePath(
            self.space,
            tuple(self.steps[1 - self.lo :]),
            prefixes,
            _Images(self.space, prefixes, self.basepoint),
            self.basepoint,
            self.seed,
        )

    def shift(self, k: int) -> "BilateralPath":
        """The shifted sequence g'_i = g_(i+k), re-based at its own W'(0) = identity."""
        return BilateralPath(self.space, self.steps, self.lo - k, self.basepoint, self.seed)


def _basepoint(space, basepoint):
    return getattr(space, "basepoint", space.identity) if basepoint is None else basepoint


def walk(space: GroupAction, measure: FiniteMeasure, n: int, rng: np.random.Generator, basepoint=None, seed: int | None = None) -> SamplePath:
    if n < 1:
        raise ValueError("n must be >= 1")
    x = _basepoint(space, basepoint)
    steps = tuple(sample_many(measure, rng, n))
    prefixes = PrefixSequence(space, space.identity, steps)
    return SamplePath(space, steps, prefixes, _Images(space, prefixes, x), x, seed)


def walk_endpoint(space: GroupAction, measure: FiniteMeasure, n: int, rng: np.random.Generator):
    """w_n alone, drawn from the same stream positions as ``walk``."""
    steps = sample_many(measure, rng, n)
    fold = getattr(space, "fold", None)
    if fold is not None:
        return fold(space.identity, steps)
    return _accumulate(space, space.identity, steps, max(1, n))[-1]


def bilateral_walk(space: GroupAction, measure: FiniteMeasure, horizon: int, rng: np.random.Generator, basepoint=None, seed: int | None = None) -> BilateralPath:
    """Steps g_-N..g_N.  Forward steps are drawn first, so g_1..g_N match ``walk`` on the same stream."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    x = _basepoint(space, basepoint)
    forward = sample_many(measure, rng, horizon)
    backward = sample_many(measure, rng, horizon + 1)  # g_0, g_-1, ..., g_-N
    steps = tuple(reversed(backward)) + tuple(forward)
    return BilateralPath(space, steps, -horizon, x, seed)


def ball_growth(space: GroupAction, radius: float, basepoint=None, budget: int = 10**7, slack: float = 0.0) -> int:
    """#{g : d(x, gx) <= radius} by breadth-first enumeration over words.

    Elements farther than ``radius + slack`` are not expanded.  On a Cayley
    graph with x the identity, slack 0 is exact (prefixes of geodesic words
    stay in the ball).
    """
    x = _basepoint(space, basepoint)
    key: Callable = getattr(space, "key", lambda g: g)
    gens = space.generators()
    seen = {key(space.identity)}
    frontier = [space.identity]
    count = 1 if space.dist(x, x) <= radius else 0
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = space.mul(g, s)
                k = key(h)
                if k in seen:
                    continue
                seen.add(k)
                if len(seen) > budget:
                    raise ResourceError(f"ball enumeration exceeded budget of {budget} elements")
                d = space.dist(x, space.act(h, x))
                if d <= radius + 1e-9:
                    count += 1
                if d <= radius + slack + 1e-9:
                    nxt.append(h)
        frontier = nxt
    return count


def _parse_weight(text: str):
    try:
        return Fraction(text)
    except ValueError:
        value = float(text)
        if not math.isfinite(value):
            raise ValueError(f"weight {text!r} is not finite")
        return value


def parse_measure(space, text: str) -> FiniteMeasure:
    """Lines of ``element-literal weight``; ``#`` starts a comment."""
    atoms = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.rsplit(None, 1)
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected '<element> <weight>'")
        atoms.append((space.parse(parts[0]), _parse_weight(parts[1])))
    return FiniteMeasure(tuple(atoms))


def format_measure(space, measure: FiniteMeasure) -> str:
    return "".join(f"{space.format(g)} {w}\n" for g, w in measure.atoms)
