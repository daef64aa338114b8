"""Drift, tracking profiles, orbit-function traces, density and visibility diagnostics.

A trial draws a bilateral path, builds a finite-time pencil from its own
forward and backward behaviour (a line through estimated ends for trees and
H^2, the segment between matched-horizon images for lamplighters) and then
measures how far the forward orbit strays from the pencil, both from the
point gamma(A n) and from the pencil as a set.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from . import hplane, tree
from .lamplighter import LamplighterGroup, LampSegment
from .walks import (
    BilateralPath,
    FiniteMeasure,
    SamplePath,
    bilateral_walk,
    make_rng,
    sample_many,
    trial_seed,
    walk_endpoint,
)

__all__ = [
    "PencilUnavailable",
    "DriftEstimate",
    "TrackingReport",
    "OrbitFunctionTrace",
    "VisibilityResult",
    "drift_estimate",
    "decadic_checkpoints",
    "finite_pencil",
    "tracking_profile",
    "tracking_trial",
    "ergodic_trace",
    "telescoping_check",
    "increment_violations",
    "density",
    "half_densities",
    "visibility_probe",
    "equivariance_check",
    "zero_drift",
]


class PencilUnavailable(RuntimeError):
    """Boundary estimates were too unstable to pin down a pencil."""


class DriftEstimate(NamedTuple):
    mean: float
    spread: float
    values: tuple


def _basepoint(space, basepoint):
    return getattr(space, "basepoint", space.identity) if basepoint is None else basepoint


def _drift_one(args) -> float:
    space, measure, n, seed, basepoint = args
    x = _basepoint(space, basepoint)
    if basepoint is None and hasattr(space, "fold_length"):
        # Same stream positions as walk_endpoint; only the length is kept.
        steps = sample_many(measure, make_rng(seed), n)
        return space.fold_length(space.identity, steps) / n
    w = walk_endpoint(space, measure, n, make_rng(seed))
    return space.dist(x, space.act(w, x)) / n


def _map(fn, jobs: int, items: list) -> list:
    """Map in trial order, in-process or over a process pool."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def drift_estimate(
    space,
    measure: FiniteMeasure,
    n: int,
    trials: int,
    master_seed: int,
    basepoint=None,
    jobs: int = 1,
) -> DriftEstimate:
    """Mean and sample standard deviation of d(x, w_n x)/n over independent trials."""
    if n < 1 or trials < 1:
        raise ValueError("n and trials must be >= 1")
    items = [(space, measure, n, trial_seed(master_seed, t), basepoint) for t in range(trials)]
    values = _map(_drift_one, jobs, items)
    mean = float(np.mean(values))
    spread = float(np.std(values, ddof=1)) if trials > 1 else 0.0
    return DriftEstimate(mean, spread, tuple(values))


def zero_drift(mean: float, spread: float) -> bool:
    """Drift statistically indistinguishable from zero."""
    return mean < 3 * spread


def decadic_checkpoints(n: int, start: int = 100) -> list[int]:
    out = []
    k = start
    while k <= n:
        out.append(k)
        k *= 10
    return out


def finite_pencil(bpath: BilateralPath, window: float = 0.25):
    """The pencil a bilateral path determines at its own horizon.

    Trees: the line through the estimated forward and backward ends.
    H^2: the geodesic between the estimated boundary points.
    Lamplighters: the canonical segment from W(-N)x to W(N)x.
    """
    space = bpath.space
    if not isinstance(space, (LamplighterGroup, tree.FreeGroup, hplane.MoebiusGroup)):
        raise TypeError(f"no pencil construction for {type(space).__name__}")
    horizon = min(bpath.hi, -bpath.lo)
    if isinstance(space, LamplighterGroup):
        x = bpath.basepoint
        back = space.act(bpath.prefix(-horizon), x)
        fwd = space.act(bpath.prefix(horizon), x)
        return LampSegment(back, fwd)
    fwd_images = bpath.forward_images[: horizon + 1]
    back_images = bpath.backward_images[: horizon + 1]
    if isinstance(space, tree.FreeGroup):
        xi = tree.end_estimate(fwd_images, window)
        eta = tree.end_estimate(back_images, window)
        try:
            return tree.pencil_line(xi, eta)
        except ValueError as exc:
            raise PencilUnavailable(str(exc)) from None
    xi = hplane.boundary_estimate(fwd_images, window)
    eta = hplane.boundary_estimate(back_images, window)
    if not (xi.stable and eta.stable):
        raise PencilUnavailable("boundary estimates did not stabilize")
    if xi.value == eta.value:
        raise PencilUnavailable("forward and backward estimates coincide")
    return space.pencil(xi.value, eta.value)


@dataclass
class TrackingReport:
    drift: float
    checkpoints: list[int]
    errors: list[float]
    errors_forward: list[float]
    errors_backward: list[float]
    nearest: list[float]
    orbit_distance: list[float]
    orientation: int
    orientation_by_checkpoint: list[int]
    density: dict = field(default_factory=dict)
    density_upto: int = 0
    clamped: int = 0
    seed: int | None = None


def _clamp(pencil, t: float) -> tuple[float, bool]:
    lo, hi = getattr(pencil, "extent", (-math.inf, math.inf))
    if t < lo:
        return lo, True
    if t > hi:
        return hi, True
    return t, False


def tracking_profile(
    path: SamplePath,
    pencil,
    drift: float,
    checkpoints: Sequence[int] | None = None,
    density_constants: Sequence[float] = (10.0,),
    density_upto: int | None = None,
    density_stride: int = 1,
) -> TrackingReport:
    """Tracking errors e_k = d(w_k x, gamma(+-A k))/k at the checkpoints.

    The sign of gamma's parametrization is resolved by the smaller error at the
    last checkpoint; the per-checkpoint best sign is kept as well.  Parameters
    beyond a finite pencil's extent are clamped to its ends and counted.
    """
    if drift < 0:
        raise ValueError("drift must be >= 0")
    space, x = path.space, path.basepoint
    n = path.n
    if checkpoints is None:
        checkpoints = decadic_checkpoints(n)
    checkpoints = [k for k in checkpoints if 1 <= k <= n]
    fwd, bwd, near, orbit, best = [], [], [], [], []
    clamped = 0
    for k in checkpoints:
        img = path.images[k]
        tp, cp = _clamp(pencil, drift * k)
        tm, cm = _clamp(pencil, -drift * k)
        clamped += cp + cm
        ep = pencil.distance_at(img, tp) / k
        em = pencil.distance_at(img, tm) / k
        fwd.append(ep)
        bwd.append(em)
        best.append(1 if ep <= em else -1)
        near.append(float(pencil.distance(img)))
        orbit.append(float(space.dist(x, img)))
    orientation = best[-1] if best else 1
    errors = fwd if orientation == 1 else bwd
    report = TrackingReport(
        drift=drift,
        checkpoints=list(checkpoints),
        errors=list(errors),
        errors_forward=fwd,
        errors_backward=bwd,
        nearest=near,
        orbit_distance=orbit,
        orientation=orientation,
        orientation_by_checkpoint=best,
        clamped=clamped,
        seed=path.seed,
    )
    if density_constants:
        upto = density_upto if density_upto is not None else (checkpoints[-1] if checkpoints else n)
        upto = min(upto, n)
        values = _pencil_distances(path, pencil, upto, density_stride)
        report.density = {c: density(values, c) for c in density_constants}
        report.density_upto = upto
    return report


def _pencil_distances(path: SamplePath, pencil, upto: int, stride: int) -> list[float]:
    """f_k = d(w_k x, pencil) for k = stride, 2 stride, ..., <= upto."""
    if stride > 1:
        return [pencil.distance(path.images[k]) for k in range(stride, upto + 1, stride)]
    out = []
    for k, img in enumerate(path.images):
        if k > upto:
            break
        if k:
            out.append(pencil.distance(img))
    return out


def tracking_trial(
    space,
    measure: FiniteMeasure,
    n: int,
    seed: int,
    drift: float,
    checkpoints: Sequence[int] | None = None,
    density_constants: Sequence[float] = (10.0,),
    horizon_factor: float = 2.0,
    density_stride: int = 1,
    basepoint=None,
) -> TrackingReport:
    """One full trial: bilateral path, its own pencil, and the forward tracking profile."""
    horizon = max(n, int(math.ceil(horizon_factor * n)))
    bpath = bilateral_walk(space, measure, horizon, make_rng(seed), basepoint=basepoint, seed=seed)
    pencil = finite_pencil(bpath)
    path = _truncate(bpath.forward_path(), n)
    return tracking_profile(path, pencil, drift, checkpoints, density_constants, density_stride=density_stride)


def _truncate(path: SamplePath, n: int) -> SamplePath:
    return SamplePath(path.space, path.steps[:n], path.prefixes, path.images, path.basepoint, path.seed)


@dataclass(frozen=True)
class OrbitFunctionTrace:
    """f_k = d(w_k x, pencil) for k = 0..n, increments g_k = f_(k+1) - f_k and step sizes d(x, g_(k+1) x)."""

    values: tuple
    increments: tuple
    step_sizes: tuple


def ergodic_trace(bpath: BilateralPath, pencil, n: int) -> OrbitFunctionTrace:
    """Orbit function along the shift: f(T^k omega) = d(W(k) x, pencil) with the pencil fixed."""
    if not 1 <= n <= bpath.hi:
        raise ValueError("n must lie in 1..horizon")
    space, x = bpath.space, bpath.basepoint
    values = []
    for k, img in enumerate(bpath.forward_images):
        if k > n:
            break
        values.append(pencil.distance(img))
    increments = tuple(values[k + 1] - values[k] for k in range(n))
    steps = tuple(space.dist(x, space.act(bpath.step(k + 1), x)) for k in range(n))
    return OrbitFunctionTrace(tuple(values), increments, steps)


def telescoping_check(trace: OrbitFunctionTrace) -> float:
    """max_k |sum_{j<k} g_j - (f_k - f_0)|; exactly 0 for integer-valued traces."""
    worst = 0
    partial = 0
    f0 = trace.values[0]
    for k, g in enumerate(trace.increments, 1):
        partial += g
        worst = max(worst, abs(partial - (trace.values[k] - f0)))
    return float(worst)


def increment_violations(trace: OrbitFunctionTrace, tol: float = 0.0) -> int:
    """Indices where |f_(k+1) - f_k| exceeds d(x, g_(k+1) x)."""
    return sum(1 for g, s in zip(trace.increments, trace.step_sizes) if abs(g) > s + tol)


def density(values: Sequence[float], c: float) -> float:
    """Fraction of entries with value <= c."""
    if not len(values):
        raise ValueError("no values")
    return sum(1 for v in values if v <= c) / len(values)


def half_densities(values: Sequence[float], c: float) -> tuple[float, float]:
    h = len(values) // 2
    return density(values[:h], c), density(values[h:], c)


@dataclass(frozen=True)
class VisibilityResult:
    depths: tuple
    radii: tuple
    running_max: tuple
    stable: bool


def visibility_probe(space, pairs: Callable[[int], tuple], depths: Sequence[int], radius: Callable | None = None) -> VisibilityResult:
    """Distance from the basepoint to the segment joining each depth's endpoint pair.

    Verdict: stably visible when the running maximum does not increase over
    the last half of the depth schedule.
    """
    if radius is None:
        radius = space.segment_distance
    radii = []
    for d in depths:
        u, v = pairs(d)
        radii.append(radius(u, v))
    running = tuple(np.maximum.accumulate(radii).tolist()) if radii else ()
    half = len(running) // 2
    stable = bool(running) and running[-1] == running[max(0, half - 1)]
    return VisibilityResult(tuple(depths), tuple(radii), running, stable)


def equivariance_check(bpath: BilateralPath, k: int, window: float = 0.25) -> float:
    """First disagreement between the k-shifted forward end estimate and W(k)^-1 applied to the original.

    Both estimates use steps up to the same last index (matched horizons).
    Returns ``math.inf`` when the certified prefixes agree entirely.
    """
    if not isinstance(bpath.space, tree.FreeGroup):
        raise TypeError("exact equivariance is defined for free groups")
    if not 0 <= k < bpath.hi:
        raise ValueError("shift must lie in 0..horizon-1")
    original = tree.end_estimate(bpath.forward_images, window)
    moved = original.translate(bpath.prefix(k).inverse())
    shifted_path = bpath.shift(k)
    shifted = tree.end_estimate(shifted_path.forward_images, window)
    depth = min(moved.stable_length, shifted.stable_length)
    a = moved.prefix.ancestor(depth)
    b = shifted.prefix.ancestor(depth)
    if a is b:
        return math.inf
    la, lb = a.letters(), b.letters()
    return float(next(i for i in range(depth) if la[i] != lb[i]))
