import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from lorenz_acim.cli import main
from lorenz_acim.density import StepDensity


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    lines = text.splitlines()
    assert lines[0] == "# lorenz-acim v1"
    return list(csv.DictReader(lines[1:]))


def test_classify_examples(capsys):
    code, out, _ = run(["classify", "2", "1/3", "2/5"], capsys)
    assert code == 0
    (r,) = rows(out)
    assert r["class"] == "UniqueEquivalentBounded"
    assert (r["r_lo"], r["r_hi"]) == ("1/1296", "1296")
    code, out, _ = run(["classify", "0.9", "1.05", "0.5"], capsys)
    assert code == 0 and rows(out)[0]["class"] == "NoAcim"


def test_classify_constraint_violation(capsys):
    code, _, err = run(["classify", "3", "1", "0.5"], capsys)
    assert code == 2 and "ac ≤ 1 violated" in err


def test_bad_number_is_input_error(capsys):
    code, _, err = run(["classify", "x", "1", "0.5"], capsys)
    assert code == 2


def test_classify_json(capsys):
    code, out, _ = run(["classify", "4", "1/2", "1/7", "--format", "json"], capsys)
    assert json.loads(out) == {
        "class": "PeriodicIdentity",
        "boundary_sum": "1",
        "n": 3,
        "r_lo": None,
        "r_hi": None,
    }


def test_density_markov(capsys):
    code, out, _ = run(["density", "2", "1", "0.5", "--method", "markov"], capsys)
    assert code == 0
    vals = [float(r["value"]) for r in rows(out)]
    assert vals == pytest.approx([4 / 3, 2 / 3])


def test_density_parry_degenerate(capsys):
    code, _, err = run(["density", "2", "2", "0.5", "--method", "parry"], capsys)
    assert code == 3 and "DegenerateEndpoints" in err


def test_density_parry_matches_ulam(tmp_path, capsys):
    par, ul = tmp_path / "p.csv", tmp_path / "u.csv"
    assert main(["density", "1.8", "1.8", "0.5", "--method", "parry", "--terms", "60", "--out", str(par)]) == 0
    assert main(["density", "1.8", "1.8", "0.5", "--method", "ulam", "--cells", "4096", "--out", str(ul)]) == 0
    g = StepDensity.from_csv(par.read_text())
    u = StepDensity.from_csv(ul.read_text())
    mids = (np.arange(4096) + 0.5) / 4096
    bps = np.array(g.breakpoints, dtype=float)
    far = np.min(np.abs(mids[:, None] - bps[None, :]), axis=1) >= 3 / 4096
    assert np.abs(g.evaluate_many(mids) - u.evaluate_many(mids))[far].max() <= 0.02
    # round trip keeps the integral
    assert abs(float(g.integral()) - 1) <= 1e-12 and abs(float(u.integral()) - 1) <= 1e-12


@pytest.mark.parametrize(
    "params, kind",
    [
        (["4", "1/2", "1/7"], None),
        (["6/5", "6/5", "1/2"], "kappa"),
        (["1.5", "1.5", "0.5"], "terms"),
        (["1", "3", "2/3"], None),
    ],
)
def test_density_auto_dispatch(params, kind, capsys):
    code, out, _ = run(["density", *params], capsys)
    assert code == 0
    g = StepDensity.from_csv(out)
    assert abs(float(g.integral()) - 1) <= 1e-12
    if kind == "kappa":
        assert float(g(0.35)) == 0


def test_density_auto_no_acim(capsys):
    code, _, err = run(["density", "0.9", "1.05", "0.5"], capsys)
    assert code == 3 and "NotApplicable" in err


def test_density_renorm_not_applicable(capsys):
    code, _, err = run(["density", "1.5", "1.5", "0.5", "--method", "renorm"], capsys)
    assert code == 3 and "NotApplicable" in err


def test_rotation_examples(capsys):
    code, out, _ = run(["rotation", "4", "1/2", "1/7", "3000"], capsys)
    (r,) = rows(out)
    assert r["rho"] == "2/3"
    assert abs(float(r["lo"]) - 2 / 3) <= 1 / 3000 and abs(float(r["hi"]) - 2 / 3) <= 1 / 3000
    code, out, _ = run(["rotation", "1", "1", "0.3", "100"], capsys)
    assert float(rows(out)[0]["rho"]) == 0.7
    code, out, _ = run(["rotation", "1", "1", "3/10", "100"], capsys)
    assert rows(out)[0]["rho"] == "7/10"


def test_orbit_example(capsys):
    code, out, _ = run(["orbit", "2", "2", "0.5", "0.333333", "5"], capsys)
    rs = rows(out)
    assert len(rs) == 6
    halves = [float(r["point"]) > 0.5 for r in rs]
    assert halves == [False, True] * 3
    assert [int(r["m_k"]) for r in rs] == [0, 0, 1, 1, 2, 2]


def test_orbit_critical_side(capsys):
    code, out, _ = run(["orbit", "2", "2", "1/2", "1/2+", "2"], capsys)
    assert [r["point"] for r in rows(out)] == ["1/2", "0", "0"]


def test_equivalence_command(capsys):
    code, out, _ = run(["equivalence", "6/5", "6/5", "1/2"], capsys)
    (r,) = rows(out)
    assert (r["verdict"], r["equivalent"], r["kappa"]) == ("NotEquivalent", "false", "2")
    assert (r["p_left"], r["A"]) == ("3/11", "2/5")
    code, out, _ = run(["equivalence", "6/5", "6/5", "1/2", "--format", "json"], capsys)
    assert json.loads(out)["gaps"] == [["3/11", "2/5"], ["3/5", "8/11"]]


def test_scan_parry_threshold(capsys):
    code, out, _ = run(["scan", "--a", "1.05", "1.9", "0.01", "--c", "0.5", "--fields", "equivalence"], capsys)
    rs = rows(out)
    assert len(rs) == 86
    for r in rs:
        assert r["status"] == "ok"
        assert (r["equivalent"] == "false") == (float(r["a"]) < math.sqrt(2))
        assert r["class"] == r["rho_lo"] == ""


def test_scan_single_point(capsys):
    code, out, _ = run(["scan", "--a", "2", "2", "1", "--c", "0.5"], capsys)
    (r,) = rows(out)
    assert (r["equivalent"], r["kappa"], r["status"]) == ("true", "1", "ok")


def test_scan_empty_range(capsys):
    code, out, _ = run(["scan", "--a", "2", "1", "0.1"], capsys)
    assert code == 0
    assert out.splitlines() == [
        "# lorenz-acim v1",
        "a,b,c,status,class,kappa,equivalent,rho_lo,rho_hi",
    ]


def test_scan_invalid_points_and_bad_step(capsys):
    code, out, _ = run(["scan", "--a", "1.5", "2.5", "0.5", "--c", "0.5", "--fields", "classify"], capsys)
    assert [r["status"] for r in rows(out)] == ["ok", "ok", "invalid"]
    code, _, _ = run(["scan", "--a", "1", "2", "0"], capsys)
    assert code == 2
    code, _, _ = run(["scan", "--a", "1", "2", "0.5", "--fields", "bogus"], capsys)
    assert code == 2


def test_scan_jobs_deterministic(capsys):
    base = ["scan", "--a", "1.1", "1.9", "0.05", "--b", "1.2", "1.6", "0.2", "--c", "0.5"]
    _, one, _ = run(base, capsys)
    _, four, _ = run(base + ["--jobs", "4"], capsys)
    assert one == four


def test_scan_spec_file(tmp_path, capsys):
    spec = tmp_path / "scan.json"
    spec.write_text(json.dumps({"a": ["6/5", "6/5", "1/10"], "c": "1/2", "fields": ["equivalence", "kappa"]}))
    code, out, _ = run(["scan", "--spec", str(spec), "--exact"], capsys)
    (r,) = rows(out)
    assert (r["a"], r["b"], r["equivalent"], r["kappa"]) == ("6/5", "6/5", "false", "2")
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2")
    assert main(["scan", "--spec", str(bad)]) == 2


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "lorenz_acim", "classify", "1.5", "1.5", "0.5"],
        capture_output=True, text=True, check=True,
    ).stdout
    assert "UniqueBoundedVariation" in out


def test_deterministic_output(capsys):
    _, first, _ = run(["density", "1.3", "1.3", "0.5"], capsys)
    _, second, _ = run(["density", "1.3", "1.3", "0.5"], capsys)
    assert first == second
