import json
import math
import os

import numpy as np
import pytest

from granpack import cli
from granpack import packing as pk

GOLDEN = os.path.join(os.path.dirname(__file__), "golden", "report.txt")
FIXTURE_ARGS = ["--families", "gamma,weibull,hyperbolic", "--porosity", "0.44", "--domain", "30x30", "--seed", "7"]


@pytest.fixture(scope="module")
def fixture_run(tmp_path_factory, sample1_path):
    out = tmp_path_factory.mktemp("run")
    assert cli.main(["run", "--curve", sample1_path, "--out", str(out)] + FIXTURE_ARGS) == 0
    return out


def load(path):
    with open(path) as fh:
        return json.load(fh)


def test_fit_all_families(tmp_path, sample1_path):
    assert cli.main(["fit", "--curve", sample1_path, "--out", str(tmp_path)]) == 0
    rep = load(tmp_path / "fit_report.json")
    assert [c["family"] for c in rep["candidates"]] == ["gamma", "lognormal", "weibull", "hyperbolic"]
    assert rep["chosen"] in rep["config"]["families"]
    assert rep["config"]["log_base"] == math.e and rep["config"]["ref_diameter_mm"] == 0.001
    for c in rep["candidates"]:
        assert set(c["gof"]) == {"statistic", "df", "p_value", "bins"}
    svg = (tmp_path / "fit.svg").read_text()
    assert svg.startswith("<?xml") and svg.count("<polyline") == 4
    assert (tmp_path / "histogram.csv").read_text().count("\n") == 27


def test_fit_single_family(tmp_path, sample1_path):
    assert cli.main(["fit", "--curve", sample1_path, "--families", "lognormal", "--out", str(tmp_path)]) == 0
    rep = load(tmp_path / "fit_report.json")
    assert len(rep["candidates"]) == 1 and rep["chosen"] == "lognormal"


def test_missing_curve(tmp_path, capsys):
    missing = str(tmp_path / "nope.csv")
    assert cli.main(["fit", "--curve", missing, "--out", str(tmp_path)]) == 2
    assert missing in capsys.readouterr().err


def test_malformed_curve(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("1.0,50\n2.0,40\n")
    assert cli.main(["fit", "--curve", str(bad), "--out", str(tmp_path)]) == 2


def test_bad_flags(tmp_path, sample1_path):
    assert cli.main(["run", "--curve", sample1_path, "--porosity", "1.5", "--out", str(tmp_path)]) == 2
    assert cli.main(["fit", "--curve", sample1_path, "--families", "cauchy", "--out", str(tmp_path)]) == 2


def test_linear_space_drops_hyperbolic(tmp_path, sample1_path, caplog):
    assert cli.main(["fit", "--curve", sample1_path, "--fit-space", "linear", "--out", str(tmp_path)]) == 0
    rep = load(tmp_path / "fit_report.json")
    assert "hyperbolic" not in [c["family"] for c in rep["candidates"]]
    assert "hyperbolic law dropped" in caplog.text


def test_pack_outputs(fixture_run):
    rep = load(fixture_run / "packing_report.json")
    x, y, r = pk.read_packing_csv((fixture_run / "packing.csv").read_text())
    assert r.size == rep["particle_count"]
    area = 900.0
    eta_hat = 1 - math.pi * np.sum(r**2) / area
    assert eta_hat == pytest.approx(rep["achieved_porosity"], abs=1e-9)
    if rep["termination_reason"] == "target_reached":
        assert rep["target_porosity"] - math.pi * r.max() ** 2 / area <= eta_hat <= rep["target_porosity"]
    else:
        assert eta_hat > rep["target_porosity"]
    svg = (fixture_run / "packing.svg").read_text()
    assert svg.count('id="detail"') == 1
    assert svg.count("<circle") >= r.size


def test_near_one_porosity(tmp_path, fixture_run):
    args = ["pack", "--fit-report", str(fixture_run / "fit_report.json"), "--porosity", "0.999",
            "--domain", "30x30", "--out", str(tmp_path)]
    assert cli.main(args) == 0
    rep = load(tmp_path / "packing_report.json")
    assert 1 <= rep["particle_count"] <= 5
    assert (tmp_path / "packing.svg").read_text().rstrip().endswith("</svg>")


@pytest.mark.filterwarnings("ignore::granpack.errors.DomainTooSmall")
def test_first_particle_fail(tmp_path, fixture_run, capsys):
    args = ["pack", "--fit-report", str(fixture_run / "fit_report.json"), "--porosity", "0.5",
            "--domain", "0.001x0.001", "--out", str(tmp_path)]
    assert cli.main(args) == 3
    assert "FAIL" in capsys.readouterr().err


def test_polygon_domain(tmp_path, fixture_run):
    poly = tmp_path / "poly.csv"
    poly.write_text("x_mm,y_mm\n0,0\n30,0\n30,20\n15,30\n0,20\n")
    args = ["pack", "--fit-report", str(fixture_run / "fit_report.json"), "--polygon", str(poly),
            "--porosity", "0.7", "--out", str(tmp_path)]
    assert cli.main(args) == 0
    assert load(tmp_path / "packing_report.json")["domain"]["kind"] == "polygon"


def test_report_golden(fixture_run, capsys):
    assert cli.main(["report", "--out", str(fixture_run)]) == 0
    text = capsys.readouterr().out
    lines = text.splitlines()
    assert len(lines) == 2 + 3 + 1 and lines[-1].startswith("summary")
    with open(GOLDEN) as fh:
        assert text == fh.read()


def test_report_empty_candidates(tmp_path, fixture_run):
    rep = load(fixture_run / "fit_report.json")
    rep["candidates"] = []
    (tmp_path / "fit_report.json").write_text(json.dumps(rep))
    assert cli.main(["report", "--fit-report", str(tmp_path / "fit_report.json"),
                     "--packing-report", str(fixture_run / "packing_report.json")]) == 2


def test_report_schema_mismatch(tmp_path, fixture_run):
    (tmp_path / "p.json").write_text("{}")
    assert cli.main(["report", "--fit-report", str(fixture_run / "fit_report.json"),
                     "--packing-report", str(tmp_path / "p.json")]) == 2


def test_stage_seeds_distinct():
    s = cli.stage_seeds(0)
    assert len(set(s)) == 3 and s == cli.stage_seeds(0) and s != cli.stage_seeds(1)
