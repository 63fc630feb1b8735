import json
import math

import pytest

import teichlab as tl


def test_type_w_and_iet():
    assert tl.classify_type_w([3, 2, 1])[0]
    assert not tl.classify_type_w([4, 3, 2, 1])[0]
    assert tl.iet_evaluate(["1/3", "2/3"], [2, 1], "0") == "2/3"
    eps = tl.epsilon_sequence(["1/3", "2/3"], [2, 1], 4)
    assert eps[0] == "1/3"
    assert eps[-1] == "0"  # rational rotation of period 3


def test_errors_carry_codes():
    with pytest.raises(tl.TeichLabError) as info:
        tl.classify_type_w([1, 2])
    assert info.value.code == "NotIrreducible"
    with pytest.raises(tl.TeichLabError):
        tl.builtin_surface("klein_bottle")


def test_surfaces_and_flow():
    x = tl.builtin_surface("square_torus")
    assert x.genus == 1 and math.isclose(x.area, 1.0)
    y = tl.act(tl.geodesic(0.7), x)
    assert math.isclose(tl.systole(y), math.exp(-0.7), rel_tol=1e-12)
    octagon = tl.builtin_surface("regular_octagon")
    assert octagon.stratum == [2]
    back = tl.surface_from_json(octagon.to_json())
    assert back.genus == 2
    # max norm: the four primitive vectors of norm 1
    assert set(tl.saddle_connections(x, 1.5)[:4]) == {1 + 0j, 1j, 1 + 1j, 1 - 1j}


def test_suspensions():
    names = tl.shipped_suspensions()
    assert len(names) == 5
    for name in names:
        assert tl.first_return_max_error(name, 200) <= 1e-8
        assert tl.verify_local_product(name, [-0.01, 0.0, 0.01]) <= 1e-9
    data = json.loads(tl.suspension_json("rotation-third"))
    assert data["iet"]["perm"] == [2, 1]
    assert tl.suspend(json.dumps(data)).genus == 1


def test_dimension_calibration():
    cantor = json.loads(tl.estimate_dimension(tl.cantor_masks(8), tl.cantor_step()))
    assert abs(cantor["dim_upper"] - math.log(2) / math.log(3)) <= 0.05
    full = json.loads(tl.estimate_dimension(tl.full_masks(5, 1.0), 1.0))
    assert abs(full["dim_upper"] - 1) <= 0.02


def test_recurrence_mask():
    x = tl.builtin_surface("square_torus")
    m = tl.recurrence_mask(x, level=5, eps=0.1, N=5, t=1.0, delta=0.5)
    assert len(m) == 40
    assert json.loads(m.to_json())["count"] == 40


def test_experiments(tmp_path):
    names = [e["name"] for e in tl.list_experiments()]
    assert names[0] == "typew_scan" and len(names) == 8
    cfg = {"experiment": "iet_epsn", "seed": 2, "params": {"n_max": 50}}
    summary, files = tl.run_experiment(cfg, out_dir=str(tmp_path))
    assert summary["status"] == "ok"
    assert (tmp_path / "partition.csv").exists() and (tmp_path / "manifest.json").exists()
    _, again = tl.run_experiment(cfg, out_dir="", threads=2)
    body = lambda s: s.split("\n", 1)[1]
    assert body(files["partition.csv"]) == body(again["partition.csv"])
    with pytest.raises(tl.TeichLabError) as info:
        tl.run_experiment({"experiment": "iet_epsn", "params": {"bogus": 1}}, out_dir="")
    assert info.value.code == "ConfigError"
