import csv
import json
import math

import numpy as np
import pytest

from metgraph.experiments import (
    CSV_COLUMNS,
    ExperimentSpec,
    estimate_risk,
    load_spec,
    log_risk_slope,
    run_trial,
    trial_seed,
    wilson_interval,
    write_results_csv,
)
from metgraph.params import delta_noiseless, max_feasible_delta
from metgraph.reconstruct import ReconstructionConfig
from metgraph.synth import TubeModel, grid_sample_dense, is_dense, worst_case_graph


@pytest.fixture(scope="module")
def model():
    g = worst_case_graph(math.pi / 2, 1.0)
    return TubeModel(g), g.params


def test_wilson_against_closed_form():
    lo, hi = wilson_interval(10, 100)
    z = 1.959963984540054
    p, n = 0.1, 100
    centre = (p + z * z / (2 * n)) / (1 + z * z / n)
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / (1 + z * z / n)
    assert lo == pytest.approx(centre - half, rel=1e-12) and hi == pytest.approx(centre + half, rel=1e-12)


def test_wilson_contains_estimate_and_shrinks():
    for f, n in ((0, 10), (10, 10), (3, 7)):
        lo, hi = wilson_interval(f, n)
        assert 0 <= lo <= f / n <= hi <= 1
    w1 = np.diff(wilson_interval(25, 100))[0]
    w4 = np.diff(wilson_interval(100, 400))[0]
    assert w4 == pytest.approx(w1 / 2, rel=0.05)


def test_trials_must_be_positive(model):
    m, p = model
    with pytest.raises(ValueError):
        ExperimentSpec(m, p, [100], trials=0)
    with pytest.raises(ValueError):
        ExperimentSpec(m, p, [200, 100], trials=1)


def test_single_point_fails(model):
    m, p = model
    cfg = ReconstructionConfig.from_params(delta_noiseless(p), p)
    assert run_trial(m, p, cfg, 1, seed=0) is False


def test_grid_sample_succeeds_when_dense(model):
    m, p = model
    d = 0.9 * max_feasible_delta(p)
    cloud = grid_sample_dense(m, d / 2)
    assert is_dense(cloud, m, d)
    assert run_trial(m, p, ReconstructionConfig.from_params(d, p), len(cloud), cloud=cloud)


def test_trial_seeds_distinct():
    states = {tuple(trial_seed(0, n, k).generate_state(2)) for n in (10, 20) for k in range(50)}
    assert len(states) == 100


def test_estimates_reproducible_and_monotone(model):
    m, p = model
    spec = ExperimentSpec(m, p, [600, 1200, 2000], trials=40, seed=3)
    a, b = estimate_risk(spec), estimate_risk(spec)
    assert [r.failures for r in a] == [r.failures for r in b]
    est = [r.estimate for r in a]
    assert est[0] >= est[1] >= est[2]
    assert est[0] > 0.9 and est[2] < 0.1


def test_small_feature_needs_many_samples():
    from metgraph.synth import lower_bound_pair
    g1, g2 = lower_bound_pair("shortest_edge", 0.05)
    p = g2.params
    spec = ExperimentSpec(TubeModel(g2), p, [50, 100], trials=20, seed=0)
    assert all(r.estimate > 0.9 for r in estimate_risk(spec))


def test_csv_output(tmp_path, model):
    m, p = model
    res = estimate_risk(ExperimentSpec(m, p, [300], trials=5))
    path = tmp_path / "r.csv"
    write_results_csv(res, path)
    rows = list(csv.DictReader(open(path)))
    assert tuple(rows[0]) == CSV_COLUMNS and int(rows[0]["trials"]) == 5


def test_log_slope():
    from metgraph.experiments import RiskEstimate
    rs = [RiskEstimate(n, 1000, int(1000 * math.exp(-n / 100)), 0, 1) for n in (10, 50, 100, 200, 400)]
    slope, used = log_risk_slope(rs)
    assert used == 4 and slope == pytest.approx(-0.01, rel=0.05)


def test_spec_file(tmp_path):
    data = {"graph": {"generator": "worst-case", "alpha": math.pi / 2, "tau": 1.0},
            "n_values": [500, 1000], "trials": 3, "seed": 9}
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(data))
    spec = load_spec(path)
    assert spec.trials == 3 and spec.n_values == [500, 1000] and spec.model.sigma == 0
    assert spec.config().delta == pytest.approx(delta_noiseless(spec.params))
