import json
import math

import numpy as np
import pytest

import glvortex as gv


@pytest.fixture(scope="module")
def ws():
    return gv.Workspace(gv.Domain.disk(), 64)


def test_xi0_center(ws):
    # 1/I0(1) - 1
    assert ws.xi0_at(0.0, 0.0) == pytest.approx(-0.210151685174888, abs=2e-3)
    field = ws.xi0()
    xs, ys = ws.coordinates()
    assert field.shape == (len(ys), len(xs))
    assert np.nanmax(field) < 0.0


def test_F_xi0(ws):
    assert ws.F_xi0 == pytest.approx(1.40237543749675, abs=2e-2)


def test_energy_and_gradient(ws):
    pts = [(0.2, -0.1), (-0.3, 0.25)]
    e = gv.H(ws, pts, 10.0)
    g = gv.grad_H(ws, pts, 10.0)
    step = 1e-4
    moved = [(0.2 + step, -0.1), (-0.3, 0.25)]
    fd = (gv.H(ws, moved, 10.0) - e) / step
    assert fd == pytest.approx(g[0][0], rel=2e-2, abs=1e-2)
    assert math.isfinite(gv.W(ws, pts))


def test_identity_residuals(ws):
    cfg = gv.random_configs(gv.Domain.disk(), 1, 3, 0.1, 3)[0]
    assert gv.check_WH_identity(ws, cfg, 10.0)["scaled"] < 1e-2
    assert gv.check_B1_identity(ws, cfg) < 1e-3


def test_obstacle(ws):
    sol = gv.solve_m(ws, 1e6, 0.6)
    assert sol["m"] > 0.0
    assert sol["f"] == pytest.approx(1.0, abs=1e-4)
    assert sol["min_zeta"] == pytest.approx(-sol["m"], rel=1e-6)
    assert sol["coincidence"].any()


def test_preconditions(ws):
    with pytest.raises(gv.PreconditionError):
        gv.solve_m(ws, 1e6, 0.3)
    with pytest.raises(gv.Error):
        gv.H(ws, [(2.0, 0.0)], 10.0)
    assert gv.lambda_floor(gv.Domain.disk(), 1e6) == pytest.approx(1.0 / (math.pi - 10 ** -1.5))
    assert gv.N_max(gv.Domain.disk(), 25.0) == 10


def test_minimize_single_vortex(ws):
    r = gv.minimize(ws, 25.0, 1, starts=2)
    assert r["converged"]
    (x, y), = r["points"]
    assert math.hypot(x, y) < 0.05


def test_run_obstacle_writes_outputs(tmp_path):
    m = gv.run_obstacle("disk", 32, [0.6, 0.8], out=str(tmp_path))
    assert m["command"] == "obstacle"
    for f in m["outputs"]:
        assert (tmp_path / f).exists()
    assert json.loads((tmp_path / "manifest.json").read_text())["lambda"] == [0.6, 0.8]
