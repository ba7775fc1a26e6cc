"""Scenario loading, report determinism, exit codes and plotting."""

import json
from pathlib import Path

import pytest

from levybounds import cli

SCENARIO_DIR = Path(cli.__file__).parent / "scenarios"
GOLDEN_DIR = Path(__file__).parent / "golden"
TWOPOINT = SCENARIO_DIR / "twopoint_vs_bm.toml"


def write_scenario(tmp_path: Path, text: str) -> Path:
    path = tmp_path / "scenario.toml"
    path.write_text(text)
    return path


# ---------------------------------------------------------------------------
# Schema validation
# ---------------------------------------------------------------------------


def test_shipped_scenarios_load():
    for name in ("twopoint_vs_bm", "stable_scaling", "jr_lower_bound"):
        sc = cli.load_scenario(SCENARIO_DIR / f"{name}.toml")
        assert sc.id == name


def test_schema_error_names_missing_field(tmp_path):
    path = write_scenario(tmp_path, '[scenario]\nkind = "jr_decay"\n[jr]\nr = 1.5\nn = [10]\n')
    with pytest.raises(cli.SchemaError, match="missing required field 'id'"):
        cli.load_scenario(path)


def test_schema_error_unknown_kind(tmp_path):
    path = write_scenario(tmp_path, '[scenario]\nid = "x"\nkind = "nope"\n')
    with pytest.raises(cli.SchemaError, match="unknown kind"):
        cli.load_scenario(path)


def test_schema_error_unknown_theorem(tmp_path):
    path = write_scenario(
        tmp_path,
        '[scenario]\nid = "x"\nkind = "pair_certification"\n'
        'theorems = ["NotATheorem"]\n'
        "[pair.first]\nsigma = 1.0\n[pair.second]\nsigma = 1.0\n",
    )
    with pytest.raises(cli.SchemaError, match="unknown bound tag"):
        cli.load_scenario(path)


def test_schema_error_maintv_needs_sigma(tmp_path):
    path = write_scenario(
        tmp_path,
        '[scenario]\nid = "x"\nkind = "pair_certification"\n'
        'theorems = ["MainTV"]\n'
        "[pair.first]\nsigma = 0.0\n[pair.second]\nsigma = 1.0\n",
    )
    with pytest.raises(cli.SchemaError, match="MainTV requires sigma > 0"):
        cli.load_scenario(path)


def test_schema_error_bad_p(tmp_path):
    path = write_scenario(
        tmp_path,
        '[scenario]\nid = "x"\nkind = "pair_certification"\np = 3.0\n'
        "[pair.first]\nsigma = 1.0\n[pair.second]\nsigma = 1.0\n",
    )
    with pytest.raises(cli.SchemaError, match=r"p: must lie in \[1, 2\]"):
        cli.load_scenario(path)


def test_schema_error_bad_toml(tmp_path):
    path = write_scenario(tmp_path, "this is not toml [")
    with pytest.raises(cli.SchemaError, match="not valid TOML"):
        cli.load_scenario(path)


def test_schema_error_stable_needs_two_eps(tmp_path):
    path = write_scenario(
        tmp_path,
        '[scenario]\nid = "x"\nkind = "stable_scaling"\n'
        "[stable]\nalpha = [0.5]\nc = 0.1\neps = [0.1]\n",
    )
    with pytest.raises(cli.SchemaError, match="at least two points"):
        cli.load_scenario(path)


def test_measure_families_parse():
    spec = {"family": "finite_discrete", "atoms": [[0.5, 1.0], [-0.2, 2.0]]}
    nu = cli._measure_from_spec(spec, "test")
    assert nu.mass_outside(0.1) == pytest.approx(3.0)
    with pytest.raises(cli.SchemaError, match="atoms"):
        cli._measure_from_spec({"family": "finite_discrete", "atoms": [[1.0]]}, "t")
    with pytest.raises(cli.SchemaError, match="unknown measure family"):
        cli._measure_from_spec({"family": "cauchy"}, "t")


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


def test_run_matches_golden_csv(tmp_path):
    rc = cli.main(["run", str(TWOPOINT), "--out", str(tmp_path)])
    assert rc == 0
    got = (tmp_path / "twopoint_vs_bm.csv").read_bytes()
    golden = (GOLDEN_DIR / "twopoint_vs_bm.csv").read_bytes()
    assert got == golden
    # JSON mirror parses and has one entry per CSV data row
    rows = json.loads((tmp_path / "twopoint_vs_bm.json").read_text())
    assert len(rows) == len(got.decode().strip().splitlines()) - 1


def test_run_exit_one_on_failed_certification(tmp_path):
    # a large negative slack forces the upper-bound check to fail
    path = write_scenario(
        tmp_path,
        '[scenario]\nid = "fail"\nkind = "pair_certification"\n'
        "p = 1.0\neps = 0.1\nt = 0.01\nsamples = 2000\nseed = 1\nslack = -0.999\n"
        'theorems = ["MainW"]\n'
        "[pair.first]\n[pair.first.measure]\nfamily = 'twopoint'\neps0 = 0.1\n"
        "[pair.second]\nsigma = 1.0\n",
    )
    rc = cli.main(["run", str(path), "--out", str(tmp_path / "out")])
    assert rc == 1


def test_run_exit_two_on_schema_error(tmp_path):
    path = write_scenario(tmp_path, '[scenario]\nid = "x"\nkind = "bad"\n')
    assert cli.main(["run", str(path), "--out", str(tmp_path / "out")]) == 2
    assert cli.main(["run", str(tmp_path / "missing.toml"), "--out", "x"]) == 2


def test_seed_and_samples_overrides(tmp_path):
    path = write_scenario(
        tmp_path,
        '[scenario]\nid = "tiny"\nkind = "pair_certification"\n'
        "p = 1.0\neps = 0.1\nt = 0.01\nsamples = 500\nseed = 1\n"
        'theorems = ["MainW"]\n'
        "[pair.first]\n[pair.first.measure]\nfamily = 'twopoint'\neps0 = 0.1\n"
        "[pair.second]\nsigma = 1.0\n",
    )
    cli.main(["run", str(path), "--out", str(tmp_path / "a")])
    cli.main(["run", str(path), "--out", str(tmp_path / "b"), "--seed", "99"])
    a = (tmp_path / "a" / "tiny.csv").read_text()
    b = (tmp_path / "b" / "tiny.csv").read_text()
    assert a != b


def test_jr_report_rows(tmp_path):
    rc = cli.main(
        ["run", str(SCENARIO_DIR / "jr_lower_bound.toml"), "--out", str(tmp_path)]
    )
    assert rc == 0
    rows = json.loads((tmp_path / "jr_lower_bound.json").read_text())
    tags = [r["theorem"] for r in rows]
    assert tags.count("ToscaniTV") == 5
    assert tags[-1] == "DecayMonotone"
    assert rows[-1]["pass"] is True


def test_list_theorems(capsys):
    assert cli.main(["list-theorems"]) == 0
    out = capsys.readouterr().out
    for tag in cli.bounds.BOUND_TAGS:
        assert tag in out
    assert out.count("requires:") == 17


# ---------------------------------------------------------------------------
# Plotting
# ---------------------------------------------------------------------------


def test_plot_sandwich_deterministic(tmp_path):
    report = GOLDEN_DIR / "twopoint_vs_bm.csv"
    out1 = tmp_path / "p1.svg"
    out2 = tmp_path / "p2.svg"
    assert cli.main(["plot", str(report), "--kind", "sandwich", "--out", str(out1)]) == 0
    assert cli.main(["plot", str(report), "--kind", "sandwich", "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_plot_decay(tmp_path):
    cli.main(["run", str(SCENARIO_DIR / "jr_lower_bound.toml"), "--out", str(tmp_path)])
    rc = cli.main(
        ["plot", str(tmp_path / "jr_lower_bound.csv"), "--kind", "decay"]
    )
    assert rc == 0
    assert (tmp_path / "jr_lower_bound.decay.svg").exists()


def test_plot_unknown_kind_exits_two(tmp_path, capsys):
    report = GOLDEN_DIR / "twopoint_vs_bm.csv"
    with pytest.raises(SystemExit):
        cli.main(["plot", str(report), "--kind", "pie"])
