import json
import math

import numpy as np
import pytest

import dualiv

E1 = [(0, 1, 1), (0, 1, 0), (1, 1, 1), (1, 1, 1), (1, 1, 1), (1, 1, 0), (1, 0, 1), (0, 0, 0)]


def e1_arrays():
    z = np.array([r[0] for r in E1])
    w = np.array([r[1] for r in E1])
    d = np.array([r[2] for r in E1])
    return d.astype(float), d, z, w


def test_eight_row_fixture():
    fit = dualiv.late_estimate(*e1_arrays())
    assert fit.probs_w1.p_at == pytest.approx(0.5)
    assert fit.probs_w1.p_cp == pytest.approx(0.25)
    assert fit.w1 == pytest.approx(2.375)
    assert fit.w0 == pytest.approx(1.625)
    assert fit.late == pytest.approx(1.0)


def test_simulated_sample_and_inference():
    y, d, z, w = dualiv.generate_sample(n=4000, rho1=1.0, rho0=1.0, seed=3)
    assert len(y) == 4000
    fit, inf = dualiv.infer(y, d, z, w, level=0.9)
    lo, hi = inf.ci_late
    assert lo < fit.late < hi
    assert (hi - lo) / 2 == pytest.approx(1.6448536269514722 * inf.se_late)
    phi = dualiv.influence(y, d, z, w)
    assert abs(phi["late"].mean()) < 1e-10
    se = phi["late"].std() / math.sqrt(len(y))
    assert se == pytest.approx(inf.se_late, rel=1e-10)


def test_estimate_dict_matches_fit():
    y, d, z, w = dualiv.generate_sample(n=2000, seed=9)
    report = dualiv.estimate(y, d, z, w, k1=0.2, k0=0.1)
    fit = dualiv.late_estimate(y, d, z, w)
    assert set(report) == {"estimates", "inference", "bounds", "diagnostics", "meta"}
    assert report["estimates"]["late"] == fit.late
    b = dualiv.late_bounds(y, d, z, w, k1=0.2, k0=0.1)
    assert report["bounds"]["lower"] == pytest.approx(b.lower)


def test_errors_carry_codes():
    y, d, z, w = e1_arrays()
    with pytest.raises(dualiv.DualivError) as info:
        dualiv.late_estimate(y, d, z, w, relevance_tol=0.3)
    assert info.value.name == "WeakRelevance"
    assert info.value.exit_status == 3
    assert info.value.component == "iv1"

    with pytest.raises(dualiv.DualivError) as info:
        dualiv.late_estimate([1.0, 2.0], [1], [0, 1], [0, 1])
    assert info.value.subcode == 20
    assert info.value.category == "input"

    with pytest.raises(dualiv.DualivError) as info:
        dualiv.late_bounds(y, d, z, w, k1=-1.0)
    assert info.value.name == "NegativeCap"


def test_monte_carlo_is_reproducible():
    a = dualiv.run_monte_carlo(n=500, reps=20, rho1=1.0, rho0=1.0, workers=1)
    b = dualiv.run_monte_carlo(n=500, reps=20, rho1=1.0, rho0=1.0, workers=3)
    assert a.to_json() == b.to_json()
    assert a.theta0 == pytest.approx(dualiv.true_late(rho1=1.0, rho0=1.0))
    assert json.loads(a.to_json())["config"]["n"] == 500


def test_true_late_values():
    assert dualiv.true_late() == pytest.approx(1.2299311146432133, abs=1e-12)
    assert dualiv.true_late(design="threshold", k=-0.25) == pytest.approx(
        1.1644097714701493, abs=1e-12
    )


def test_load_csv(tmp_path):
    path = tmp_path / "data.csv"
    path.write_text("w,z,d,y\n1,0,1,2.5\n0,1,0,-1\n")
    y, d, z, w = dualiv.load_csv(str(path))
    assert list(y) == [2.5, -1.0]
    assert list(w) == [1, 0]
    bad = tmp_path / "bad.csv"
    bad.write_text("y,d,z,w\n1,1,2,1\n")
    with pytest.raises(dualiv.DualivError) as info:
        dualiv.load_csv(str(bad))
    assert info.value.row == 2
    assert info.value.column == "z"
