import json
import math

import pytest

import epicurv


def test_leading_order_rho():
    m = epicurv.FieldModel(A=1.0, gamma=2.0)
    assert epicurv.leading_order_rho(m, 0.001) == pytest.approx(1000.0 ** 0.25, rel=1e-12)
    with pytest.raises(ValueError):
        epicurv.leading_order_rho(m, -0.001)


def test_spectral_round_trip():
    f = epicurv.PeriodicScalar(8)
    f.a = [1.0, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0]
    f.b = [0.0, 0.25, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
    grid = epicurv.UniformGrid(64)
    samples = epicurv.synthesize(f, grid)
    back = epicurv.analyze(samples, 8)
    assert back.a == pytest.approx(f.a, abs=1e-14)
    assert back.b == pytest.approx(f.b, abs=1e-14)
    assert f.eval(0.3) == pytest.approx(
        math.cos(0.3) + 0.5 * math.cos(3 * 0.3) + 0.25 * math.sin(2 * 0.3), rel=1e-14
    )


def test_l0_kernel():
    f = epicurv.PeriodicScalar(4)
    f.a = [1.0, 0.0, 0.0, 0.0]
    image = epicurv.l0_apply(f)
    assert image.a[0] == 0.0
    with pytest.raises(RuntimeError):
        epicurv.l0_invert(f)


def test_solve_and_verify():
    m = epicurv.FieldModel(A=1.0, gamma=2.0, A1=0.0, gamma1=3.0)
    cfg = epicurv.SolverConfig()
    cfg.root_tol = 1e-8
    r = epicurv.solve_rho(m, 0.002, cfg)
    lo, hi = r.window
    assert lo < r.rho_eps < hi
    assert abs(r.sol.lambda1) <= 1e-7
    assert abs(r.sol.lambda2) <= 1e-9
    assert r.sol.eq_residual <= 1e-9

    rep = epicurv.verify_solution(m, r.sol, curve_time_span=2.0 * math.pi)
    assert rep.max_deviation <= 1e-5
    assert rep.speed_drift <= 1e-10


def test_closure_check():
    rep = epicurv.closure_check(epicurv.AnsatzParams(eps=1.0 / 8.0, rho=3.0), 1, 8)
    assert rep.closure_err <= 1e-12
    assert rep.symmetry_order == 7
    assert rep.symmetry_err <= 1e-10


def test_field_evaluations():
    m = epicurv.FieldModel(A=1.0, gamma=2.0)
    assert epicurv.eval_B(m, 0j) == pytest.approx(2.0)
    assert epicurv.rotation_equivariance_check(m, 1.0 + 2.0j, 0.7) <= 1e-12


def test_integrate_planar_circle():
    m = epicurv.FieldModel(A=1e-300, gamma=2.0)
    cfg = epicurv.SimConfig()
    cfg.duration = 2.0 * math.pi
    tr = epicurv.integrate_planar(m, 1.0 + 0.0j, 0.0 + 1.0j, cfg)
    x, y, _ = tr.positions[-1]
    assert math.hypot(x - 1.0, y) <= 1e-9


def test_run_config_curve(tmp_path):
    out = tmp_path / "curve.csv"
    cfg = {
        "command": "curve",
        "eps_num": 1,
        "eps_den": 8,
        "rho": 3.0,
        "samples": 128,
        "format": "csv",
        "output_path": str(out),
    }
    assert epicurv.run_config(json.dumps(cfg)) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "t,x,y"
    assert len(lines) == 129
