import io
import json

import pytest

from semidet_bc.binary_example import bsc_policy
from semidet_bc.channels import policy_to_dict
from semidet_bc.cli import main


def run(argv):
    buf = io.StringIO()
    code = main([str(a) for a in argv], out=buf)
    return code, buf.getvalue()


@pytest.fixture
def policy_file(tmp_path):
    p = tmp_path / "pol.json"
    p.write_text(json.dumps(policy_to_dict(bsc_policy(0.2))))
    return p


def test_region_inner_prints_and_writes(tmp_path, fig1_file):
    out = tmp_path / "r.csv"
    code, text = run(["region-inner", "--channel", fig1_file, "--sweeps", 6, "--restarts", 3,
                      "--steps", 8, "--out", out])
    assert code == 0
    assert text.startswith("area: ") and "corners:" in text
    assert out.read_text().startswith("r_y,r_z\n")


def test_region_outer_marks_estimate(fig1_file):
    code, text = run(["region-outer", "--channel", fig1_file, "--sweeps", 4, "--restarts", 2, "--steps", 4])
    assert code == 0 and "estimate: lower-bound-of-outer-bound" in text


def test_region_causal(fig1_file):
    code, text = run(["region-causal", "--channel", fig1_file, "--sweeps", 8, "--restarts", 4])
    assert code == 0 and "strategies: 4" in text
    assert "0.000000000 0.278071905" in text


def test_missing_field_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"x_size": 2, "y_size": 2, "z_size": 2, "s_size": 2,
                               "f": [0, 1, 1, 0], "w": [[1, 0]] * 4}))
    code, _ = run(["region-inner", "--channel", bad])
    assert code == 2
    assert "p_s" in capsys.readouterr().err


def test_figure1(tmp_path):
    code, text = run(["example-figure1", "--p", 0.2, "--sigma", 0.5, "--out-dir", tmp_path])
    assert code == 0
    assert {p.name for p in tmp_path.iterdir()} == {"noncausal.csv", "causal.csv", "figure1.svg"}
    assert "R_z axis 0.278071905" in text
    code, _ = run(["example-figure1", "--sigma", 0.3, "--out-dir", tmp_path / "x"])
    assert code == 2
    code, _ = run(["example-figure1", "--sigma", 0.3, "--no-causal", "--out-dir", tmp_path / "y"])
    assert code == 0


def test_simulate(fig1_file, policy_file, capsys):
    base = ["simulate", "--channel", fig1_file, "--policy", policy_file, "--eps", 1.0, "--seed", 1]
    code, text = run(base + ["--n", 12, "--ry", 0.35, "--rz", 0, "--cry", 0.35, "--crz", 0.06,
                             "--trials", 100])
    assert code == 0
    keys = [line.split(":")[0] for line in text.splitlines()]
    assert keys == ["n", "trials", "encoder_fail_rate", "det_err_rate", "nondet_err_rate",
                    "overall_err_rate", "seed"]
    code, text = run(base + ["--n", 12, "--ry", 0.35, "--rz", 0, "--cry", 0.35, "--crz", 0.06,
                             "--trials", 0])
    assert code == 0 and "trials: 0" in text
    code, _ = run(base + ["--n", 40, "--ry", 0.5, "--rz", 0, "--cry", 0.3, "--crz", 0, "--trials", 1])
    assert code == 3
    assert "2^22" in capsys.readouterr().err


def test_reduce_support(tmp_path, fig1_file):
    import numpy as np
    from semidet_bc.channels import AuxPolicy
    q = np.repeat(bsc_policy(0.1).p_xu_given_s / 4, 4, axis=2)
    pol = tmp_path / "big.json"
    pol.write_text(json.dumps(policy_to_dict(AuxPolicy(q))))
    out = tmp_path / "small.json"
    code, text = run(["reduce-support", "--channel", fig1_file, "--policy", pol, "--out", out])
    assert code == 0
    assert text.startswith("support: 8 -> ")
    assert json.loads(out.read_text())["u_size"] <= 5


def test_bad_threads(fig1_file):
    code, _ = run(["region-causal", "--channel", fig1_file, "--threads", 0])
    assert code == 2
