"""Command-line experiment runner.

    geowalk track --config exp.cfg --seed 42 --jobs 4 --out results/
    geowalk drift --preset f2-srw --set n=100000
    geowalk validate --config exp.cfg

Configs are flat ``key = value`` text with ``#`` comments.  Each subcommand
writes ``report.csv``, ``summary.txt`` and ``plot.gp`` into the output
directory (``--out``, then the config's ``out``, then ``$GEOWALK_OUT``).
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from . import floyd, hplane, lamplighter, tracking, tree
from .walks import FiniteMeasure, ResourceError, make_rng, parse_measure, trial_seed

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RESOURCE = 3

SUBCOMMANDS = ("drift", "track", "floyd", "lamplighter-oracle", "visibility", "validate")

PRESETS: dict[str, dict[str, str]] = {
    "f2-srw": {
        "space": "tree k=2",
        "measure": "srw",
        "n": "10000",
        "trials": "10",
        "density": "10",
    },
    "lamplighter-srw": {
        "space": "lamplighter m=2 k=2",
        "measure": "srw",
        "n": "10000",
        "trials": "10",
        "density": "10",
    },
    "hplane-srw": {
        "space": "hplane",
        "measure": "srw",
        "n": "1000",
        "trials": "10",
        "density": "10",
    },
    "f2-floyd": {
        "space": "floyd geom:0.5 k=2",
        "n": "200",
        "radius": "12",
    },
}


class ConfigError(ValueError):
    def __init__(self, diagnostics: list["Diagnostic"]):
        super().__init__("; ".join(str(d) for d in diagnostics))
        self.diagnostics = diagnostics


@dataclass(frozen=True)
class Diagnostic:
    field: str
    message: str

    def __str__(self) -> str:
        return f"{self.field}: {self.message}"


@dataclass
class ExperimentConfig:
    space: str = "tree k=2"
    measure: str = "srw"
    n: int = 10000
    trials: int = 10
    seed: int = 0
    checkpoints: list[int] | None = None
    density: list[float] = field(default_factory=lambda: [10.0])
    density_stride: int | None = None
    horizon_factor: float = 2.0
    radius: int = 12
    depth: int = 20
    pairs: str = "lambda"
    budget: int = 5_000_000
    out: str | None = None

    def effective_checkpoints(self) -> list[int]:
        return self.checkpoints if self.checkpoints is not None else tracking.decadic_checkpoints(self.n)


_CONVERTERS = {
    "n": int,
    "trials": int,
    "seed": int,
    "radius": int,
    "depth": int,
    "budget": int,
    "horizon_factor": float,
    "checkpoints": lambda s: [int(x) for x in s.replace(",", " ").split()],
    "density": lambda s: [float(x) for x in s.replace(",", " ").split()],
    "density_stride": lambda s: None if s.strip() == "auto" else int(s),
}
_KEYS = {f.name for f in fields(ExperimentConfig)}


def parse_config_text(text: str) -> dict[str, str]:
    """``key = value`` lines; ``#`` starts a comment.  ``preset = name`` pulls in a preset first."""
    raw: dict[str, str] = {}
    problems = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            problems.append(Diagnostic(f"line {lineno}", "expected 'key = value'"))
            continue
        raw[key.strip().replace("-", "_")] = value.strip()
    if problems:
        raise ConfigError(problems)
    return raw


def build_config(raw: dict[str, str]) -> ExperimentConfig:
    raw = dict(raw)
    problems = []
    merged: dict[str, str] = {}
    preset = raw.pop("preset", None)
    if preset is not None:
        if preset not in PRESETS:
            problems.append(Diagnostic("preset", f"unknown preset {preset!r}; known: {', '.join(PRESETS)}"))
        else:
            merged.update(PRESETS[preset])
    merged.update(raw)
    values = {}
    for key, value in merged.items():
        if key not in _KEYS:
            problems.append(Diagnostic(key, "unknown key"))
            continue
        try:
            values[key] = _CONVERTERS.get(key, str)(value)
        except ValueError:
            problems.append(Diagnostic(key, f"cannot parse {value!r}"))
    if problems:
        raise ConfigError(problems)
    return ExperimentConfig(**values)


def load_config(path: str | None, preset: str | None = None, overrides: list[str] = ()) -> ExperimentConfig:
    raw: dict[str, str] = {}
    if preset:
        raw["preset"] = preset
    if path:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError([Diagnostic("config", f"cannot read {path}: {exc.strerror}")]) from None
        raw.update(parse_config_text(text))
    for item in overrides:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError([Diagnostic("--set", f"expected key=value, got {item!r}")])
        raw[key.strip().replace("-", "_")] = value.strip()
    return build_config(raw)


# ----------------------------------------------------------------------------
# Space and measure specs


def _spec_options(tokens: list[str], allowed: set[str], field_name: str) -> dict[str, str]:
    opts = {}
    for tok in tokens:
        key, sep, value = tok.partition("=")
        if not sep or key not in allowed:
            raise ConfigError([Diagnostic(field_name, f"unexpected token {tok!r}")])
        opts[key] = value
    return opts


def _positive_int(opts: dict, key: str, default: int, minimum: int, field_name: str) -> int:
    try:
        value = int(opts.get(key, default))
    except ValueError:
        raise ConfigError([Diagnostic(f"{field_name}.{key}", f"not an integer: {opts[key]!r}")]) from None
    if value < minimum:
        raise ConfigError([Diagnostic(f"{field_name}.{key}", f"must be >= {minimum}, got {value}")])
    return value


@dataclass(frozen=True)
class SpaceSpec:
    kind: str
    group: object
    scaling: floyd.ScalingFunction | None = None


def parse_space(text: str) -> SpaceSpec:
    """``tree k=2`` | ``hplane [a b c d; ...]`` | ``floyd geom:0.5 [k=2]`` | ``lamplighter m=2 k=2``."""
    tokens = text.split()
    if not tokens:
        raise ConfigError([Diagnostic("space", "empty space spec")])
    kind, rest = tokens[0], tokens[1:]
    if kind == "tree":
        opts = _spec_options(rest, {"k"}, "space")
        return SpaceSpec(kind, tree.FreeGroup(_positive_int(opts, "k", 2, 1, "space")))
    if kind == "lamplighter":
        opts = _spec_options(rest, {"m", "k"}, "space")
        m = _positive_int(opts, "m", 2, 2, "space")
        k = _positive_int(opts, "k", 2, 1, "space")
        return SpaceSpec(kind, lamplighter.LamplighterGroup(m, k))
    if kind == "floyd":
        if not rest:
            raise ConfigError([Diagnostic("space", "floyd needs a scaling literal such as geom:0.5")])
        try:
            scaling = floyd.ScalingFunction.parse(rest[0])
        except ValueError as exc:
            raise ConfigError([Diagnostic("space.scaling", str(exc))]) from None
        opts = _spec_options(rest[1:], {"k"}, "space")
        return SpaceSpec(kind, tree.FreeGroup(_positive_int(opts, "k", 2, 1, "space")), scaling)
    if kind == "hplane":
        body = text.strip()[len("hplane"):].strip()
        if not body:
            return SpaceSpec(kind, hplane.MoebiusGroup())
        probe = hplane.MoebiusGroup()
        try:
            mats = [probe.parse(chunk) for chunk in body.split(";") if chunk.strip()]
            return SpaceSpec(kind, hplane.MoebiusGroup(mats))
        except ValueError as exc:
            raise ConfigError([Diagnostic("space.matrices", str(exc))]) from None
    raise ConfigError([Diagnostic("space", f"unknown space kind {kind!r}; use tree, hplane, floyd or lamplighter")])


def parse_measure_spec(space, text: str) -> FiniteMeasure:
    """``srw`` | ``switch-walk`` | ``atoms: <literal> <weight> | <literal> <weight> | ...``."""
    text = text.strip()
    if text == "srw":
        return FiniteMeasure.uniform(space.generators())
    if text == "switch-walk":
        if not isinstance(space, lamplighter.LamplighterGroup):
            raise ConfigError([Diagnostic("measure", "switch-walk needs a lamplighter space")])
        return FiniteMeasure.uniform(list(dict.fromkeys(space.switch_walk_switch())))
    if text.startswith("atoms:"):
        try:
            return parse_measure(space, text[len("atoms:"):].replace("|", "\n"))
        except ValueError as exc:
            raise ConfigError([Diagnostic("measure", str(exc))]) from None
    raise ConfigError([Diagnostic("measure", f"unknown measure spec {text!r}; use srw, switch-walk or atoms: ...")])


def validate(config: ExperimentConfig) -> list[Diagnostic]:
    """Every violated invariant, with its field; empty iff the config would run."""
    out: list[Diagnostic] = []
    space = None
    try:
        space = parse_space(config.space)
    except ConfigError as exc:
        out.extend(exc.diagnostics)
    except ValueError as exc:
        out.append(Diagnostic("space", str(exc)))
    if space is not None and space.kind != "floyd":
        try:
            parse_measure_spec(space.group, config.measure)
        except ConfigError as exc:
            out.extend(exc.diagnostics)
    if config.n < 1:
        out.append(Diagnostic("n", f"must be >= 1, got {config.n}"))
    if config.trials < 1:
        out.append(Diagnostic("trials", f"must be >= 1, got {config.trials}"))
    if not 0 <= config.seed < 2**64:
        out.append(Diagnostic("seed", "must be an unsigned 64-bit integer"))
    cps = config.checkpoints
    if cps is not None:
        if not cps:
            out.append(Diagnostic("checkpoints", "empty list"))
        elif any(b <= a for a, b in zip(cps, cps[1:])):
            out.append(Diagnostic("checkpoints", "must be strictly ascending"))
        elif cps[0] < 1 or cps[-1] > config.n:
            out.append(Diagnostic("checkpoints", f"must lie in 1..n={config.n}"))
    if not config.density or any(not (c > 0 and math.isfinite(c)) for c in config.density):
        out.append(Diagnostic("density", "need positive finite constants"))
    if config.density_stride is not None and config.density_stride < 1:
        out.append(Diagnostic("density_stride", "must be >= 1 or 'auto'"))
    if not config.horizon_factor >= 1:
        out.append(Diagnostic("horizon_factor", "must be >= 1"))
    if config.radius < 0:
        out.append(Diagnostic("radius", "must be >= 0"))
    if config.depth < 2:
        out.append(Diagnostic("depth", "must be >= 2"))
    if config.budget < 1:
        out.append(Diagnostic("budget", "must be >= 1"))
    if config.pairs not in ("lambda", "marching"):
        out.append(Diagnostic("pairs", "use 'lambda' or 'marching'"))
    return out


# ----------------------------------------------------------------------------
# Reports

TRACK_COLUMNS = ["trial", "seed", "n", "d_x_wn", "e_n", "nearest_dist", "density_C", "orientation", "verdict"]
NA = "NA"


def _fmt(x) -> str:
    if x is None:
        return NA
    if isinstance(x, float):
        if not math.isfinite(x):
            return NA
        return repr(x)
    return str(x)


def _csv_text(columns: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def _plot_script(xcol: int, ycol: int, title: str, ylabel: str) -> str:
    return (
        'set datafile separator ","\n'
        'set datafile missing "NA"\n'
        "set key autotitle columnhead\n"
        "set logscale xy\n"
        'set xlabel "n"\n'
        f'set ylabel "{ylabel}"\n'
        f'set title "{title}"\n'
        f'plot "report.csv" using {xcol}:{ycol} with points pt 7 ps 0.5\n'
    )


@dataclass
class Outcome:
    csv_text: str
    summary: list[str]
    plot: str


def _map(fn, jobs: int, items: list) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _drift_master(seed: int) -> int:
    # Drift trials draw from their own family of streams.
    return trial_seed(seed, 1 << 40)


def run_drift(config: ExperimentConfig, jobs: int) -> Outcome:
    spec = parse_space(config.space)
    measure = parse_measure_spec(spec.group, config.measure)
    est = tracking.drift_estimate(spec.group, measure, config.n, config.trials, config.seed, jobs=jobs)
    rows = []
    for t, value in enumerate(est.values):
        rows.append([t, trial_seed(config.seed, t), config.n, value * config.n, None, None, None, None, "ok"])
    verdict = "zero-drift" if tracking.zero_drift(est.mean, est.spread) else "positive-drift"
    summary = [
        "experiment: drift",
        f"space: {config.space}",
        f"measure: {config.measure}",
        f"n: {config.n}",
        f"trials: {config.trials}",
        f"drift_mean: {est.mean!r}",
        f"drift_spread: {est.spread!r}",
        f"verdict: {verdict}",
    ]
    return Outcome(_csv_text(TRACK_COLUMNS, rows), summary, _plot_script(3, 4, "d(x, w_n x)", "distance"))


def _track_one(args):
    group, measure, config, t, drift = args
    seed = trial_seed(config.seed, t)
    stride = config.density_stride
    if stride is None:
        stride = max(1, config.effective_checkpoints()[-1] // 50) if isinstance(group, lamplighter.LamplighterGroup) else 1
    try:
        report = tracking.tracking_trial(
            group,
            measure,
            config.n,
            seed,
            drift,
            checkpoints=config.effective_checkpoints(),
            density_constants=tuple(config.density),
            horizon_factor=config.horizon_factor,
            density_stride=stride,
        )
    except tracking.PencilUnavailable:
        return t, seed, None
    return t, seed, report


def run_track(config: ExperimentConfig, jobs: int) -> Outcome:
    spec = parse_space(config.space)
    group = spec.group
    measure = parse_measure_spec(group, config.measure)
    est = tracking.drift_estimate(group, measure, config.n, config.trials, _drift_master(config.seed), jobs=jobs)
    checkpoints = config.effective_checkpoints()
    summary = [
        "experiment: track",
        f"space: {config.space}",
        f"measure: {config.measure}",
        f"n: {config.n}",
        f"trials: {config.trials}",
        f"checkpoints: {', '.join(map(str, checkpoints))}",
        f"drift_mean: {est.mean!r}",
        f"drift_spread: {est.spread!r}",
    ]
    rows = []
    if tracking.zero_drift(est.mean, est.spread):
        for t in range(config.trials):
            for k in checkpoints:
                rows.append([t, trial_seed(config.seed, t), k, None, None, None, None, None, "zero-drift"])
        summary.append("verdict: zero-drift regime; tracking skipped")
        return Outcome(_csv_text(TRACK_COLUMNS, rows), summary, _plot_script(3, 5, "tracking error", "e_n"))

    results = _map(_track_one, jobs, [(group, measure, config, t, est.mean) for t in range(config.trials)])
    primary = config.density[0]
    unavailable = 0
    per_checkpoint: dict[int, list[float]] = {k: [] for k in checkpoints}
    densities: dict[float, list[float]] = {c: [] for c in config.density}
    for t, seed, report in results:
        if report is None:
            unavailable += 1
            for k in checkpoints:
                rows.append([t, seed, k, None, None, None, None, None, "pencil-unavailable"])
            continue
        for c in config.density:
            densities[c].append(report.density.get(c, math.nan))
        for i, k in enumerate(report.checkpoints):
            per_checkpoint[k].append(report.errors[i])
            verdict = "clamped" if report.clamped else "ok"
            rows.append([
                t, seed, k, report.orbit_distance[i], report.errors[i], report.nearest[i],
                report.density.get(primary), report.orientation, verdict,
            ])
    summary.append(f"pencil_unavailable: {unavailable}")
    for k in checkpoints:
        vals = per_checkpoint[k]
        summary.append(f"median_e_n[{k}]: {float(np.median(vals))!r}" if vals else f"median_e_n[{k}]: NA")
    first_positive = None
    for c in config.density:
        vals = densities[c]
        mean = float(np.mean(vals)) if vals else math.nan
        summary.append(f"density[C={c!r}]: {_fmt(mean)}")
        if first_positive is None and vals and mean > 0:
            first_positive = c
    summary.append(f"first_C_with_positive_density: {_fmt(first_positive)}")
    meds = [float(np.median(per_checkpoint[k])) for k in checkpoints if per_checkpoint[k]]
    decreasing = len(meds) >= 2 and all(b < a for a, b in zip(meds, meds[1:]))
    summary.append(f"verdict: {'median e_n decreasing' if decreasing else 'median e_n not decreasing'}")
    return Outcome(_csv_text(TRACK_COLUMNS, rows), summary, _plot_script(3, 5, "tracking error", "e_n"))


def _random_word(rng: np.random.Generator, rank: int, radius: int) -> tree.ReducedWord:
    length = int(rng.integers(0, radius + 1))
    letters: list[int] = []
    while len(letters) < length:
        x = int(rng.integers(1, rank + 1)) * (1 if rng.random() < 0.5 else -1)
        if letters and letters[-1] == -x:
            continue
        letters.append(x)
    return tree.ReducedWord.from_letters(letters)


def run_floyd(config: ExperimentConfig, jobs: int) -> Outcome:
    spec = parse_space(config.space)
    if spec.kind != "floyd":
        raise ConfigError([Diagnostic("space", "the floyd experiment needs a 'floyd <scaling>' space")])
    rng = make_rng(config.seed)
    rank = spec.group.rank
    rows = []
    violations = uncertified = 0
    for i in range(config.n):
        u = _random_word(rng, rank, config.radius)
        v = _random_word(rng, rank, config.radius)
        res = floyd.floyd_distance(
            u, v, spec.scaling, radius=config.radius + 2, group=spec.group, budget=config.budget
        )
        bound = floyd.karlsson_bound(u, v, spec.scaling)
        ok = res.value <= bound + floyd.CERTIFY_TOL
        violations += not ok
        uncertified += not res.certified
        verdict = "ok" if ok and res.certified else ("uncertified" if ok else "bound-violated")
        rows.append([i, tree.format_word(u), tree.format_word(v), res.value, int(res.certified), bound, verdict])
    summary = [
        "experiment: floyd",
        f"space: {config.space}",
        f"pairs: {config.n}",
        f"radius: {config.radius}",
        f"bound_violations: {violations}",
        f"uncertified: {uncertified}",
        f"verdict: {'pass' if not violations and not uncertified else 'fail'}",
    ]
    cols = ["pair", "u", "v", "floyd_distance", "certified", "karlsson_bound", "verdict"]
    return Outcome(_csv_text(cols, rows), summary, _plot_script(6, 4, "Floyd distance vs bound", "d_F"))


def run_oracle(config: ExperimentConfig, jobs: int) -> Outcome:
    spec = parse_space(config.space)
    if spec.kind != "lamplighter":
        raise ConfigError([Diagnostic("space", "lamplighter-oracle needs a lamplighter space")])
    group = spec.group
    ball = lamplighter.bfs_ball(group, config.radius, budget=config.budget)
    counts: dict[int, list[int]] = {}
    for g, d in ball.items():
        entry = counts.setdefault(d, [0, 0])
        entry[0] += 1
        entry[1] += lamplighter.word_length(g) != d
    rows = [[d, counts[d][0], counts[d][1]] for d in sorted(counts)]
    mismatches = sum(c[1] for c in counts.values())
    summary = [
        "experiment: lamplighter-oracle",
        f"space: {config.space}",
        f"radius: {config.radius}",
        f"ball_size: {len(ball)}",
        f"mismatches: {mismatches}",
        f"verdict: {'pass' if not mismatches else 'fail'}",
    ]
    return Outcome(_csv_text(["length", "sphere_size", "mismatches"], rows), summary,
                   _plot_script(1, 2, "sphere sizes", "count"))


def run_visibility(config: ExperimentConfig, jobs: int) -> Outcome:
    spec = parse_space(config.space)
    group = spec.group
    depths = list(range(1, config.depth + 1))
    if isinstance(group, lamplighter.LamplighterGroup):
        if config.pairs == "marching":
            pairs = lambda d: lamplighter.marching_pair(group, d)  # noqa: E731
        else:
            rng = make_rng(config.seed)
            first = lamplighter.random_decoration(group, rng)
            second = lamplighter.random_decoration(group, rng)
            pairs = lambda d: lamplighter.decorated_pair(group, d, first, second)  # noqa: E731
    elif isinstance(group, tree.FreeGroup):
        if group.rank < 2:
            raise ConfigError([Diagnostic("space.k", "visibility on a tree needs k >= 2")])
        if config.pairs == "marching":
            pairs = lambda d: (tree.ReducedWord.from_letters([1] * d), tree.ReducedWord.from_letters([1] * (2 * d)))  # noqa: E731
        else:
            pairs = lambda d: (tree.ReducedWord.from_letters([1] * d), tree.ReducedWord.from_letters([2] * d))  # noqa: E731
    else:
        raise ConfigError([Diagnostic("space", "visibility probes need a tree or lamplighter space")])
    res = tracking.visibility_probe(group, pairs, depths)
    rows = [[d, r, m] for d, r, m in zip(res.depths, res.radii, res.running_max)]
    summary = [
        "experiment: visibility",
        f"space: {config.space}",
        f"pairs: {config.pairs}",
        f"depths: 1..{config.depth}",
        f"final_running_max: {res.running_max[-1]!r}",
        f"verdict: {'stably visible' if res.stable else 'not stabilized'}",
    ]
    return Outcome(_csv_text(["depth", "radius", "running_max"], rows), summary,
                   _plot_script(1, 2, "visibility radius", "radius"))


RUNNERS = {
    "drift": run_drift,
    "track": run_track,
    "floyd": run_floyd,
    "lamplighter-oracle": run_oracle,
    "visibility": run_visibility,
}


def output_dir(cli_out: str | None, config: ExperimentConfig) -> Path:
    chosen = cli_out or config.out or os.environ.get("GEOWALK_OUT")
    if not chosen:
        raise ConfigError([Diagnostic("out", "no output directory: pass --out, set 'out', or export GEOWALK_OUT")])
    return Path(chosen)


def write_outcome(directory: Path, outcome: Outcome) -> None:
    try:
        directory.mkdir(parents=True, exist_ok=True)
        (directory / "report.csv").write_text(outcome.csv_text)
        (directory / "summary.txt").write_text("\n".join(outcome.summary) + "\n")
        (directory / "plot.gp").write_text(outcome.plot)
    except OSError as exc:
        raise ConfigError([Diagnostic("out", f"cannot write to {directory}: {exc.strerror}")]) from None


def run(experiment: str, config: ExperimentConfig, jobs: int = 1, out: str | None = None) -> int:
    """Validate, run and write one experiment; returns the process exit code."""
    problems = validate(config)
    if problems:
        for p in problems:
            print(f"config error: {p}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        directory = output_dir(out, config)
        outcome = RUNNERS[experiment](config, max(1, jobs))
        write_outcome(directory, outcome)
    except ConfigError as exc:
        for p in exc.diagnostics:
            print(f"config error: {p}", file=sys.stderr)
        return EXIT_CONFIG
    except ResourceError as exc:
        print(f"resource budget exceeded: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    print("\n".join(outcome.summary))
    return EXIT_OK


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="geowalk", description="Random-walk tracking experiments on groups.")
    p.add_argument("command", choices=SUBCOMMANDS)
    p.add_argument("--config", metavar="PATH", help="flat key = value config file")
    p.add_argument("--preset", choices=sorted(PRESETS), help="start from a named preset")
    p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                   help="override one config key (repeatable)")
    p.add_argument("--seed", type=int, metavar="U64", help="master seed (overrides the config)")
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1, metavar="N", help="worker processes")
    p.add_argument("--out", metavar="DIR", help="output directory (default: config 'out', then $GEOWALK_OUT)")
    return p


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        config = load_config(args.config, args.preset, args.overrides)
    except ConfigError as exc:
        for p in exc.diagnostics:
            print(f"config error: {p}", file=sys.stderr)
        return EXIT_CONFIG
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    if args.command == "validate":
        problems = validate(config)
        for p in problems:
            print(p)
        if not problems:
            print("config ok")
        return EXIT_CONFIG if problems else EXIT_OK
    return run(args.command, config, jobs=args.jobs, out=args.out)


if __name__ == "__main__":
    sys.exit(main())
