import csv
import io
import json

import numpy as np
import pytest

from inflexion.harness import (
    PUBLISHED_TABLES,
    TABLE_IDS,
    ExperimentConfig,
    check_table,
    plot_series,
    read_report,
    report_from_json,
    reproduce_paper,
    run_experiment,
    variance_scaling_study,
    write_bundle,
    write_plot_data,
)
from inflexion.model import CUBIC, FISHER_PRY, GOMPERTZ, NoiseSpec, sample

UNIFORM = NoiseSpec("uniform", 0.05, 0)


def test_noiseless_fisher_pry():
    rep = run_experiment(ExperimentConfig(FISHER_PRY, 2, 8))
    assert rep.values("chi_S") == [pytest.approx(5.0, abs=1e-12)]
    assert rep.values("chi_D") == [pytest.approx(5.0, abs=1e-12)]
    assert rep.summary["chi_S"]["bias"] == pytest.approx(0, abs=1e-12)


def test_gompertz_single_draw_plausible():
    rep = run_experiment(ExperimentConfig(GOMPERTZ, 3.5, 8, noise=UNIFORM.with_seed(3)))
    (s,), (d,) = rep.values("chi_S"), rep.values("chi_D")
    assert abs(s - 5.06) < 0.15 and abs(d - 5.22) < 0.15


def test_cubic_correction_method():
    rep = run_experiment(ExperimentConfig(CUBIC, -2, 8, methods=("ese", "cubic-correction")))
    assert abs(rep.values("cubic_p")[0] - 2.5) <= 10 / 500
    assert rep.values("cubic_p")[0] == pytest.approx(2.493333333, abs=1e-9)


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(FISHER_PRY, 2, 8, replicates=3)
    with pytest.raises(ValueError):
        ExperimentConfig(FISHER_PRY, 2, 8, methods=("ese", "magic"))
    with pytest.raises(ValueError):
        ExperimentConfig(FISHER_PRY, 2, 8, methods=("cubic-correction",))


def small_config(**kw):
    base = dict(curve=FISHER_PRY, a=2, b=8, n=200, noise=UNIFORM.with_seed(11),
                methods=("ese", "ede", "bese", "bede"), replicates=12)
    base.update(kw)
    return ExperimentConfig(**base)


def test_replicate_determinism():
    assert run_experiment(small_config()).to_json() == run_experiment(small_config()).to_json()
    other = run_experiment(small_config(noise=UNIFORM.with_seed(12))).to_json()
    assert other != run_experiment(small_config()).to_json()


def test_seed_ladder():
    rep = run_experiment(small_config())
    assert [r["seed"] for r in rep.replicates] == list(range(11, 23))
    shifted = run_experiment(small_config(noise=UNIFORM.with_seed(12), replicates=11))
    assert shifted.replicates[0]["ese"] == rep.replicates[1]["ese"]


def test_summary_recomputable_from_rows():
    rep = run_experiment(small_config())
    doc = json.loads(rep.to_json())
    rows = doc["replicates"]
    for name, extract in (
        ("chi_S", lambda r: r["ese"]["chi_S"]),
        ("chi_D", lambda r: r["ede"]["chi_D"]),
        ("bese", lambda r: r["bese"]["estimate"]),
        ("bede", lambda r: r["bede"]["estimate"]),
    ):
        vals = np.array([v for v in map(extract, rows) if v is not None])
        s = doc["summary"][name]
        assert s["count"] == vals.size
        assert abs(s["mean"] - vals.mean()) < 1e-12
        assert abs(s["sd"] - vals.std(ddof=1)) < 1e-12
        assert abs(s["bias"] - (vals.mean() - 5.0)) < 1e-12


def test_json_round_trip():
    rep = run_experiment(small_config(replicates=3))
    back = report_from_json(rep.to_json())
    assert back.config == rep.config
    assert back.to_json() == rep.to_json()
    assert read_report(rep.to_json()).summary == rep.summary
    with pytest.raises(ValueError):
        read_report('{"schema": "other/1"}')


def test_replicate_csv_matches_rows():
    rep = run_experiment(small_config(replicates=4))
    rows = list(csv.DictReader(io.StringIO(rep.replicate_csv())))
    assert len(rows) == 4
    assert [int(r["seed"]) for r in rows] == [11, 12, 13, 14]
    for row, val in zip(rows, rep.values("chi_S")):
        assert float(row["chi_S"]) == pytest.approx(val, rel=1e-9)


def test_failing_replicate_does_not_abort():
    # four points of convex data: EDE fails to detect, BESE still returns
    cfg = ExperimentConfig(FISHER_PRY, 0, 3, n=3, noise=UNIFORM, methods=("ede",), replicates=3)
    rep = run_experiment(cfg)
    assert len(rep.replicates) == 3
    assert rep.summary["chi_D"]["count"] + rep.summary["chi_D"]["missing"] == 3


def test_variance_scaling_study_exact_form():
    cfg = ExperimentConfig(FISHER_PRY, 2, 8, noise=UNIFORM, replicates=2000)
    rows = variance_scaling_study(cfg, [100, 400])
    for row in rows:
        assert row["theoretical"] == pytest.approx(36 * (0.0025 / 3) / (2 * row["n"]))
        assert abs(row["empirical"] / row["exact"] - 1) < 0.15
        assert abs(row["mean"] - row["noiseless"]) < 4 * np.sqrt(row["exact"] / 2000)
    assert rows[0]["theoretical"] / rows[1]["theoretical"] == pytest.approx(4)
    assert 3.2 < rows[0]["empirical"] / rows[1]["empirical"] < 4.8


def test_variance_scaling_study_normal_noise():
    cfg = ExperimentConfig(FISHER_PRY, 2, 8, noise=NoiseSpec("normal", 0.05, 1), replicates=2000)
    (row,) = variance_scaling_study(cfg, [200])
    assert abs(row["empirical"] / row["exact"] - 1) < 0.15


def test_variance_study_requires_noise():
    with pytest.raises(ValueError):
        variance_scaling_study(ExperimentConfig(FISHER_PRY, 2, 8), [100])


def test_plot_data(tmp_path):
    series = plot_series(sample(FISHER_PRY, 2, 8, 100), FISHER_PRY)
    paths = write_plot_data(series, tmp_path)
    names = {p.stem for p in paths}
    assert {"data", "total_chord", "residuals", "left_profile", "right_profile",
            "ese_markers", "ede_markers", "curve"} <= names
    with (tmp_path / "data.csv").open() as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["x", "y"] and len(rows) == 102
    markers = np.loadtxt(tmp_path / "ese_markers.csv", delimiter=",", skiprows=1)
    assert markers[2, 0] == pytest.approx(5.0)


def test_table_catalog():
    assert len(set(TABLE_IDS)) == len(TABLE_IDS)
    for n in ("I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X",
              "XI", "XII", "XIII", "XIV", "XV", "XVI", "XVII"):
        assert f"table-{n}" in TABLE_IDS


def test_reproduce_single_table():
    bundle = reproduce_paper(["table-I"])
    assert list(bundle["reports"]) == ["table-I"]
    report = bundle["reports"]["table-I"]
    assert report["passed"]
    assert report["interval"] == [2, 8] and report["n"] == 500 and report["noise"] is None
    assert report["expected"]["chi_S"] == 5.0
    assert {c["name"] for c in report["checks"]} >= {"chi_S", "chi_D"}


def test_table_vii_analytic():
    table = next(t for t in PUBLISHED_TABLES if t.id == "table-VII")
    result = check_table(table)
    assert result["passed"]
    assert all(c["tolerance"] == 1e-6 for c in result["checks"])


def test_reproduce_noiseless_all_pass():
    noiseless = [t.id for t in PUBLISHED_TABLES if t.kind in ("pass", "iterations", "analytic")]
    bundle = reproduce_paper(noiseless)
    failed = [k for k, r in bundle["reports"].items() if not r["passed"]]
    assert not failed


def test_noisy_table_envelope():
    bundle = reproduce_paper(["table-IX"], replicates=200)
    report = bundle["reports"]["table-IX"]
    assert report["passed"]
    env = [c for c in report["checks"] if c["name"].endswith("envelope")]
    assert len(env) == 2
    assert all(c["observed"][0] <= c["expected"] <= c["observed"][1] for c in env)
    assert all(c["replicates"] == 200 for c in report["checks"])


def test_write_bundle(tmp_path):
    bundle = reproduce_paper(["table-I", "table-VII"])
    write_bundle(bundle, tmp_path)
    assert {p.name for p in tmp_path.iterdir()} >= {"table-I.json", "table-VII.json", "bundle.json", "summary.txt"}
    doc = json.loads((tmp_path / "bundle.json").read_text())
    assert doc["schema"] == "inflexion.reproduction/1" and doc["passed"]
