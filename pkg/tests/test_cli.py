import json
import math

import pytest
from click.testing import CliRunner

from expsum.cli import EXIT_INPUT, EXIT_INVARIANT, EXIT_OK, RunConfig, main
from expsum.errors import InvalidInput
from expsum.io import ZERO_COLUMNS, read_zeros_csv


def write_problem(path, terms):
    path.write_text(json.dumps({"terms": [{"re": c.real, "im": c.imag, "freq": w}
                                          for c, w in terms]}))
    return path


@pytest.fixture
def ex2_file(tmp_path):
    return write_problem(tmp_path / "ex2.json", [(6, 0), (-5, 1), (1, 2)])


@pytest.fixture
def ex1_file(tmp_path):
    return write_problem(tmp_path / "ex1.json", [(1, 2), (1, 0), (1, 1)])


def invoke(*args):
    return CliRunner().invoke(main, [str(a) for a in args])


def test_analyze(ex2_file, tmp_path):
    out = tmp_path / "a"
    res = invoke("analyze", "--problem", ex2_file, "--out", out, "--svg")
    assert res.exit_code == EXIT_OK, res.output
    data = json.loads((out / "decomposition.json").read_text())
    assert [r["dominant"] for r in data["regions"]] == [0, 1, 2]
    assert data["regions"][1]["x_lo"] == pytest.approx(math.log(2), abs=1e-12)
    assert data["regions"][2]["x_lo"] == pytest.approx(math.log(6), abs=1e-12)
    assert (out / "strips.svg").read_text().startswith("<svg")
    assert invoke("validate", "--report", out / "decomposition.json").exit_code == EXIT_OK


def test_analyze_example_one_output(ex1_file, tmp_path):
    res = invoke("analyze", "--problem", ex1_file, "--out", tmp_path)
    assert "-0.48121182506" in res.output and "0.48121182506" in res.output


def test_missing_or_malformed_problem(tmp_path):
    res = invoke("analyze", "--problem", tmp_path / "nope.json", "--out", tmp_path)
    assert res.exit_code == EXIT_INPUT
    bad = tmp_path / "bad.json"
    bad.write_text('{"terms": [{"re": 1}]}')
    assert invoke("analyze", "--problem", bad, "--out", tmp_path).exit_code == EXIT_INPUT
    single = write_problem(tmp_path / "one.json", [(2, 1)])
    assert invoke("analyze", "--problem", single, "--out", tmp_path).exit_code == EXIT_INPUT


def test_validate_rejects_bad_report(tmp_path):
    p = tmp_path / "d.json"
    p.write_text(json.dumps({"regions": [{"x_lo": "-inf", "x_hi": 0, "dominant": 0}], "strips": []}))
    assert invoke("validate", "--report", p).exit_code == EXIT_INPUT


def test_count(ex2_file, tmp_path):
    res = invoke("count", "--problem", ex2_file, "--y-lo", 0, "--y-hi", 2 * math.pi, "--out", tmp_path)
    assert res.exit_code == EXIT_OK and "count 2" in res.output
    assert json.loads((tmp_path / "count.json").read_text())["count"] == 2
    res = invoke("count", "--problem", ex2_file, "--y-lo", 0, "--y-hi", 2 * math.pi,
                 "--x-lo", 0.9, "--x-hi", 3, "--out", tmp_path)
    assert "count 1" in res.output


def test_window_validation(ex2_file, tmp_path):
    assert invoke("count", "--problem", ex2_file, "--y-lo", 3, "--y-hi", 1).exit_code == EXIT_INPUT
    assert invoke("count", "--problem", ex2_file, "--y-lo", 3).exit_code == EXIT_INPUT
    with pytest.raises(InvalidInput):
        RunConfig(ex2_file, "count", window=(2.0, 1.0))


def test_zeros_csv(ex2_file, tmp_path):
    res = invoke("zeros", "--problem", ex2_file, "--y-lo", -1, "--y-hi", 13, "--out", tmp_path, "--svg")
    assert res.exit_code == EXIT_OK, res.output
    text = (tmp_path / "zeros.csv").read_text()
    assert text.splitlines()[0] == ",".join(ZERO_COLUMNS)
    rows = read_zeros_csv(text)
    assert len(rows) == 6
    assert {round(r["re"], 10) for r in rows} == {round(math.log(2), 10), round(math.log(3), 10)}
    assert (tmp_path / "zeros.svg").exists()


def test_density_and_langer(ex1_file, tmp_path):
    res = invoke("density", "--problem", ex1_file, "--out", tmp_path)
    assert res.exit_code == EXIT_OK, res.output
    reports = json.loads((tmp_path / "density.json").read_text())
    (rep,) = reports
    rs = [s[0] for s in rep["samples"]]
    counts = [s[1] for s in rep["samples"]]
    big = [(r, c) for r, c in zip(rs, counts) if r >= 100]
    n = len(big)
    mx = sum(r for r, _ in big) / n
    my = sum(c for _, c in big) / n
    slope = sum((r - mx) * (c - my) for r, c in big) / sum((r - mx) ** 2 for r, _ in big)
    assert slope == pytest.approx(1 / math.pi, rel=0.02)
    header = (tmp_path / "density_strip0.csv").read_text().splitlines()[0]
    assert header == "r,count,expected,deviation"


def test_bad_r_grid(ex1_file):
    assert invoke("density", "--problem", ex1_file, "--r-grid", "10,5").exit_code == EXIT_INPUT
    assert invoke("density", "--problem", ex1_file, "--r-grid", "a,b").exit_code == EXIT_INPUT


def test_backlund(ex2_file, tmp_path):
    z1 = f"{math.log(6) + 1}+0j"
    z2 = f"{math.log(6) + 1}+{2 * math.pi}j"
    res = invoke("backlund", "--problem", ex2_file, "--z1", z1, "--z2", z2,
                 "--radius", 4 * math.pi, "--out", tmp_path)
    assert res.exit_code == EXIT_OK, res.output
    data = json.loads((tmp_path / "backlund.json").read_text())
    assert data["lhs"] <= data["bound"]
    res = invoke("backlund", "--problem", ex2_file, "--z1", z1, "--z2", z2, "--radius", 1.0)
    assert res.exit_code == EXIT_INPUT


def test_disc(ex2_file, tmp_path):
    res = invoke("disc", "--problem", ex2_file, "--horizon", 300, "--lines", 5,
                 "--line", math.log(2), "--out", tmp_path)
    assert res.exit_code == EXIT_OK, res.output
    data = json.loads((tmp_path / "disc.json").read_text())
    assert data["lines_tested"] == 6


def test_report_is_deterministic(ex2_file, tmp_path):
    outs = []
    for name in ("r1", "r2"):
        res = invoke("report", "--problem", ex2_file, "--r-grid", "10,40,90",
                     "--y-lo", -5, "--y-hi", 20, "--out", tmp_path / name, "--seed", 7)
        assert res.exit_code == EXIT_OK, res.output
        outs.append({p.name: p.read_bytes() for p in sorted((tmp_path / name).iterdir())})
    assert outs[0] == outs[1]
    assert {"decomposition.json", "strips.svg", "zeros.csv", "zeros.json", "zeros.svg",
            "density.json", "density_strip0.csv", "density_strip1.csv", "disc.json"} <= set(outs[0])


def test_langer_failure_exits_three(ex2_file, tmp_path, monkeypatch):
    import expsum.cli as cli
    from expsum.density import density_reports as real

    def broken(*a, **k):
        reps = real(*a, **k)
        from dataclasses import replace
        return [replace(r, langer_max_deviation=99.0) for r in reps]

    monkeypatch.setattr(cli, "density_reports", broken)
    res = invoke("density", "--problem", ex2_file, "--r-grid", "10", "--out", tmp_path)
    assert res.exit_code == EXIT_INVARIANT


def test_numeric_failure_exits_four(ex2_file, tmp_path, monkeypatch):
    import expsum.cli as cli
    from expsum.errors import PerturbationExhausted

    def exhausted(*a, **k):
        raise PerturbationExhausted("cluster on the contour")

    monkeypatch.setattr(cli, "count_zeros", exhausted)
    res = invoke("count", "--problem", ex2_file, "--out", tmp_path)
    assert res.exit_code == 4
