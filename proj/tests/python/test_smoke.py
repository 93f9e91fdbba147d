import math
import os
from pathlib import Path

import numpy as np
import pytest

import tvqueue as tq

ROOT = Path(os.environ.get("TVQ_SOURCE_DIR", Path(__file__).resolve().parents[2]))

STATIONARY = """{
  "lambda": {"kind": "constant", "params": {"value": 1.5}},
  "staffing": {"kind": "constant", "params": {"value": 1.0}},
  "mu": 1.0,
  "patience": {"kind": "exponential", "params": {"rate": 0.5}},
  "horizon": 30.0,
  "x0": 1.0
}"""


def test_load_and_round_trip():
    spec = tq.load_model(str(ROOT / "configs" / "h2_sinusoid.json"))
    assert spec.horizon == 16.0
    assert spec.violations() == []
    again = tq.parse_model(spec.to_json())
    assert again.mu == spec.mu


def test_stationary_limits():
    fluid = tq.solve_fluid(tq.parse_model(STATIONARY), 1e-3)
    g = tq.propagate(fluid)
    assert fluid.w[-1] == pytest.approx(2 * math.log(1.5), abs=1e-6)
    assert fluid.Q[-1] == pytest.approx(1.0, abs=1e-4)
    assert g.var_Wstar[-1] == pytest.approx(2.0, abs=1e-4)
    assert g.var_Xstar[-1] == pytest.approx(3.0, abs=1e-4)
    assert set(fluid.regimes) == {"OL"}


def test_sinusoidal_example_report():
    fluid = tq.solve_fluid(tq.sinusoidal_h2_example(), 1e-2)
    assert len(fluid.switching_times) == 5
    g = tq.propagate(fluid)
    r = tq.report(200, fluid, g)
    assert isinstance(r["mean_X"], np.ndarray)
    np.testing.assert_allclose(r["mean_Q"] + r["mean_B"], r["mean_X"], rtol=1e-10)
    assert np.all(g.var_X >= 0)


def test_truncated_moments():
    mean_pos, var_pos, mean_min, var_min = tq.truncated_moments(0.0, 1.0, 0.0)
    assert mean_pos == pytest.approx(1 / math.sqrt(2 * math.pi))
    assert var_pos == pytest.approx(0.5 - 1 / (2 * math.pi))
    assert mean_min == pytest.approx(-mean_pos)


def test_simulate_small():
    spec = tq.sinusoidal_h2_example()
    spec.horizon = 3.0
    out = tq.simulate(spec, n=30, reps=10, seed=3, grid_step=0.1, parallel=2)
    assert out["conserved"]
    assert out["X"]["mean"].shape == out["t"].shape
    again = tq.simulate(spec, n=30, reps=10, seed=3, grid_step=0.1, parallel=1)
    np.testing.assert_array_equal(out["X"]["mean"], again["X"]["mean"])


def test_errors():
    with pytest.raises(tq.ConfigError):
        tq.parse_model("{not json")
    zero = tq.load_model(str(ROOT / "tests" / "data" / "zero_lambda.json"))
    assert any("λ_inf > 0 fails" in v for v in zero.violations())
    with pytest.raises(tq.ModelError):
        tq.solve_fluid(zero)
    with pytest.raises(tq.InfeasibleStaffingError):
        tq.solve_fluid(tq.load_model(str(ROOT / "tests" / "data" / "infeasible.json")))
    assert issubclass(tq.ModelError, tq.Error)
