"""Monte Carlo estimates of the reconstruction failure probability."""
from __future__ import annotations

import csv
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.stats import norm

from .geometry import PointCloud
from .params import ShapeParams, auto_delta
from .pseudograph import is_isomorphic
from .reconstruct import ReconstructionConfig, reconstruct
from .synth import EmbeddedGraph, TubeModel, named_graph, sample_tube

CSV_COLUMNS = ("n", "trials", "failures", "estimate", "ci_low", "ci_high", "wall_ms")


@dataclass
class ExperimentSpec:
    model: TubeModel
    params: ShapeParams
    n_values: Sequence[int]
    trials: int = 100
    delta: float | None = None  # None: pick via params.auto_delta
    seed: int = 0

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        ns = [int(n) for n in self.n_values]
        if not ns or any(n <= 0 for n in ns) or any(b <= a for a, b in zip(ns, ns[1:])):
            raise ValueError("n_values must be positive and strictly increasing")
        self.n_values = ns

    def config(self) -> ReconstructionConfig:
        delta = self.delta if self.delta is not None else auto_delta(self.params)
        return ReconstructionConfig.from_params(delta, self.params)


@dataclass(frozen=True)
class RiskEstimate:
    n: int
    trials: int
    failures: int
    ci_low: float
    ci_high: float
    wall_ms: float = 0.0

    @property
    def estimate(self) -> float:
        return self.failures / self.trials

    def row(self) -> dict:
        return {"n": self.n, "trials": self.trials, "failures": self.failures, "estimate": self.estimate,
                "ci_low": self.ci_low, "ci_high": self.ci_high, "wall_ms": self.wall_ms}


def wilson_interval(failures: int, trials: int, level: float = 0.95) -> tuple[float, float]:
    if trials < 1:
        raise ValueError("trials must be at least 1")
    z = norm.ppf(0.5 + level / 2)
    p = failures / trials
    den = 1 + z * z / trials
    mid = (p + z * z / (2 * trials)) / den
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / den
    # clamp so the interval always contains the point estimate despite rounding
    return min(max(mid - half, 0.0), p), max(min(mid + half, 1.0), p)


def trial_seed(base: int, n: int, trial: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([int(base), int(n), int(trial)])


def run_trial(model: TubeModel, params: ShapeParams, cfg: ReconstructionConfig, n: int, seed=None,
              cloud: PointCloud | None = None) -> bool:
    """True iff reconstruction from ``n`` fresh samples (or ``cloud``) matches the truth.

    Any failure diagnostic (dangling or over-attached edge component) counts as
    a failed trial.
    """
    if cloud is None:
        cloud = sample_tube(model, n, seed)
    report = reconstruct(cloud, cfg)
    if report.flagged:
        return False
    return is_isomorphic(report.graph, model.graph.topology())


def estimate_risk(spec: ExperimentSpec) -> list[RiskEstimate]:
    cfg = spec.config()
    out = []
    for n in spec.n_values:
        t0 = time.perf_counter()
        fails = sum(not run_trial(spec.model, spec.params, cfg, n, trial_seed(spec.seed, n, k))
                    for k in range(spec.trials))
        lo, hi = wilson_interval(fails, spec.trials)
        out.append(RiskEstimate(n, spec.trials, fails, lo, hi, (time.perf_counter() - t0) * 1e3))
    return out


def write_results_csv(results: Sequence[RiskEstimate], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        w.writeheader()
        for r in results:
            w.writerow({k: (f"{v:.12g}" if isinstance(v, float) else v) for k, v in r.row().items()})


def log_risk_slope(results: Sequence[RiskEstimate], lo: float = 0.05, hi: float = 0.95) -> tuple[float, int]:
    """Least-squares slope of log(estimate) against n over estimates inside (lo, hi)."""
    pts = [(r.n, math.log(r.estimate)) for r in results if lo < r.estimate < hi]
    if len(pts) < 2:
        return math.nan, len(pts)
    x, y = np.array(pts).T
    return float(np.polyfit(x, y, 1)[0]), len(pts)


# -- experiment-spec files ----------------------------------------------------

@dataclass
class _SpecFile:
    graph: dict = field(default_factory=dict)
    sigma: float = 0.0
    n_values: list = field(default_factory=list)
    trials: int = 100
    delta: float | None = None
    seed: int = 0


def spec_from_json(data: dict, base_dir: Path | None = None) -> ExperimentSpec:
    """Build a spec from a JSON object.

    ``graph`` is either ``{"generator": name, ...kwargs}`` or ``{"file": path}``;
    optional ``params`` overrides the graph's declared shape parameters.
    """
    raw = _SpecFile(**{k: v for k, v in data.items() if k in _SpecFile.__dataclass_fields__})
    gspec = dict(raw.graph)
    if "file" in gspec:
        path = Path(gspec["file"])
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        graph = EmbeddedGraph.load(path)
    elif "generator" in gspec:
        graph = named_graph(gspec.pop("generator"), **gspec)
    else:
        raise ValueError("experiment spec needs graph.generator or graph.file")
    if data.get("params"):
        params = ShapeParams(**data["params"])
    elif graph.params is not None:
        params = graph.params
    else:
        raise ValueError("graph carries no shape parameters; give them under 'params'")
    params = params.with_sigma(float(raw.sigma))
    return ExperimentSpec(TubeModel(graph, float(raw.sigma)), params, raw.n_values, int(raw.trials),
                          raw.delta, int(raw.seed))


def load_spec(path) -> ExperimentSpec:
    path = Path(path)
    return spec_from_json(json.loads(path.read_text()), path.parent)
