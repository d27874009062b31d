"""Smoke tests for the python bindings: end-to-end paths only; the C++
suite carries the detailed coverage."""

import json

import numpy as np
import pytest

import hamlock as H


@pytest.fixture(scope="module")
def cubic():
    return H.builtin_model("scalar_power", [1.0, 4.0])


@pytest.fixture(scope="module")
def bump(cubic):
    cfg = H.OneBumpConfig()
    cfg.window = 80
    res = H.find_one_bump(cubic, cfg)
    assert res.report.converged
    return res


def test_action_on_witness_ray(cubic):
    u = H.Sequence.delta(0, np.array([2.0]))
    assert H.action(u, cubic) == pytest.approx(2.0)
    assert H.action(u.scaled(3.0), cubic) == pytest.approx(-270.0)


def test_assumption_audit(cubic):
    rep = H.check_assumptions(cubic, H.SampleGrid.standard())
    assert rep.all_pass
    with pytest.raises(ValueError):
        H.builtin_model("scalar_power", [1.0, 1.5])


def test_one_bump_and_decay(bump, cubic):
    r = bump.report
    assert r.residual_sup <= 1e-10
    assert r.action_value > 0
    d = H.decay_rate(r.solution)
    assert d.decaying
    assert abs(d.lambda_ - (3 - 5**0.5) / 2) < 1e-4


def test_level_history_monotone(bump):
    h = bump.minimax.history
    assert all(h[i + 1] <= h[i] + 1e-12 for i in range(len(h) - 1))
    assert bump.minimax.level > 0


def test_multibump_roundtrip(bump, cubic):
    v = bump.report.solution
    bound = H.Window.symmetric(400)
    P = H.make_separation(2, 4, 1, 48, bound)
    cfg = H.MultibumpConfig()
    cfg.window = 400
    rep = H.find_multibump(v, P, cubic, 0.1, cfg)
    assert rep.pass_
    assert max(rep.per_window_distance) <= 0.05
    assert max(rep.tail_energies) <= 1e-8


def test_sequence_numpy_roundtrip():
    vals = np.arange(12, dtype=float).reshape(6, 2)
    u = H.Sequence(2, -3, vals)
    assert u.first() == -3
    out = u.values()
    np.testing.assert_array_equal(out, vals)


def test_csv_roundtrip(tmp_path):
    u = H.Sequence(1, -2, np.array([0.1, -0.7, 3.14159, 1e-13]))
    p = tmp_path / "u.csv"
    H.write_sequence_csv(p, u)
    assert H.read_sequence_csv(p) == u


def test_run_command_exit_codes(tmp_path):
    cfg = {"model": {"name": "scalar_power", "params": [1, 4]}, "window": 60}
    assert H.run_command("check-model", json.dumps(cfg), tmp_path / "a") == 0
    bad = dict(cfg, window=400, multibump={"k": 2, "N": 4, "spacing": 47})
    assert H.run_command("multibump", json.dumps(bad), tmp_path / "b") == 2
    report = json.loads(((tmp_path / "b") / "report.json").read_text())
    assert "error" in report
