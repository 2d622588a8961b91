import csv
import io
import json

import pytest

from heunreg import cli
from heunreg.errors import QuadratureUnresolved
from heunreg.cli import (EXIT_CONVERGENCE, EXIT_DOMAIN, EXIT_OK, EXIT_USAGE, SWEEP_COLUMNS,
                         main, parse_grid)

FIG = ["--a", "1,1", "--q", "0.3,0", "--alpha", "1.4,0.9", "--beta", "1.1,0", "--delta", "6.7,0"]


def run(capsys, argv):
    code = main(argv)
    return code, capsys.readouterr().out


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_eval_csv(capsys):
    code, out = run(capsys, ["eval", "--fn", "heunl", *FIG, "--gamma", "0.5,0", "--z", "0,1"])
    assert code == EXIT_OK
    (row,) = rows(out)
    assert set(row) >= {"value_re", "value_im", "deriv_re", "deriv_im", "err_est", "flags"}
    assert float(row["err_est"]) >= 0


def test_eval_json_matches_csv(capsys):
    args = ["eval", "--fn", "heunl-reg", *FIG, "--gamma", "-1,0", "--z", "0,1"]
    _, out_csv = run(capsys, args)
    _, out_json = run(capsys, args + ["--format", "json"])
    a = rows(out_csv)[0]
    b = json.loads(out_json)
    assert float(a["value_re"]) == b["value_re"] and float(a["value_im"]) == b["value_im"]
    assert "contour" in b["flags"]


def test_eval_verify(capsys):
    code, out = run(capsys, ["eval", "--fn", "heuns-reg", *FIG, "--gamma", "1,0", "--z", "0,1",
                             "--verify", "--format", "json"])
    assert code == EXIT_OK
    assert json.loads(out)["verify_rel_diff"] <= 1e-8


def test_eval_out_file(tmp_path, capsys):
    path = tmp_path / "r.json"
    code, out = run(capsys, ["eval", *FIG, "--gamma", "0.5,0", "--z", "0,1",
                             "--format", "json", "--out", str(path)])
    assert code == EXIT_OK and out == ""
    assert "value_re" in json.loads(path.read_text())


def test_eval_domain_errors(capsys):
    code, out = run(capsys, ["eval", "--fn", "heuns", *FIG, "--gamma", "2,0", "--z", "0,1",
                             "--format", "json"])
    assert code == EXIT_DOMAIN and json.loads(out)["flags"] == "error=PoleAtGamma"
    code, out = run(capsys, ["eval", *FIG, "--gamma", "0.5,0", "--z", "2,0", "--format", "json"])
    assert code == EXIT_DOMAIN and "OnCut" in json.loads(out)["flags"]


def test_eval_invalid_singular_point(capsys):
    code, out = run(capsys, ["eval", "--a", "0,0", "--q", "0,0", "--alpha", "1,0", "--beta", "1,0",
                             "--gamma", "1,0", "--delta", "1,0", "--z", "0,1", "--format", "json"])
    assert code == EXIT_DOMAIN and json.loads(out)["flags"] == "error=InvalidSingularPoint"


def test_eval_convergence_error(capsys, monkeypatch):
    def fail(*args):
        raise QuadratureUnresolved("no agreement")
    monkeypatch.setattr(cli, "evaluate", fail)
    code, out = run(capsys, ["eval", *FIG, "--gamma", "0.5,0", "--z", "0,1", "--format", "json"])
    assert code == EXIT_CONVERGENCE
    assert json.loads(out)["flags"] == "error=QuadratureUnresolved"


def test_negative_values_accepted(capsys):
    code, out = run(capsys, ["eval", *FIG, "--gamma", "-0.5,-0.25", "--z", "-1,1"])
    assert code == EXIT_OK and rows(out)[0]["value_re"]


@pytest.mark.parametrize("argv", [
    ["eval", *FIG, "--z", "0,1"],  # missing --gamma
    ["eval", *FIG, "--gamma", "0.5", "--z", "0,1"],
    ["eval", *FIG, "--gamma", "0.5,0", "--z", "0,1", "--tol", "-1"],
    ["eval", "--fn", "nope", *FIG, "--gamma", "0.5,0", "--z", "0,1"],
    ["sweep", *FIG, "--z", "0,1"],
    ["sweep", *FIG, "--z", "0,1", "--gamma-grid", "0:1:2,0:0:2", "--z-grid", "0:1:2,0:1:2"],
])
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == EXIT_USAGE


def test_sweep_equals_evals(capsys):
    code, out = run(capsys, ["sweep", "--fn", "heunl-reg", *FIG, "--z", "0,1",
                             "--gamma-grid", "-1.2:-0.8:2,-0.1:0.1:2"])
    assert code == EXIT_OK
    table = rows(out)
    assert list(table[0]) == list(SWEEP_COLUMNS)
    assert [(float(r["axis_re"]), float(r["axis_im"])) for r in table] == \
        [(-1.2, -0.1), (-0.8, -0.1), (-1.2, 0.1), (-0.8, 0.1)]
    for r in table:
        g = f"{r['axis_re']},{r['axis_im']}"
        _, single = run(capsys, ["eval", "--fn", "heunl-reg", *FIG, "--gamma", g, "--z", "0,1"])
        s = rows(single)[0]
        assert (s["value_re"], s["value_im"]) == (r["value_re"], r["value_im"])


def test_sweep_parallel_and_deterministic(capsys):
    args = ["sweep", "--fn", "heunl", *FIG, "--gamma", "0.5,0", "--z-grid", "-1:1:3,0.5:1.5:3"]
    _, a = run(capsys, args)
    _, b = run(capsys, args)
    _, c = run(capsys, args + ["--jobs", "2"])
    assert a == b == c
    assert len(rows(a)) == 9


def test_sweep_on_cut_reports_rows(capsys):
    code, out = run(capsys, ["sweep", *FIG, "--gamma", "0.5,0", "--z-grid", "1.5:3:4,0:0:2"])
    assert code == EXIT_OK
    table = rows(out)
    assert len(table) == 8
    assert all(r["flags"].startswith("error=") and r["value_re"] == "" for r in table)


def test_parse_grid():
    re_axis, im_axis = parse_grid("-4.5:2.5:141,-1:1:41")
    assert (re_axis.lo, re_axis.hi, re_axis.n) == (-4.5, 2.5, 141)
    assert len(im_axis.points()) == 41


def test_selftest_command(capsys):
    code, out = run(capsys, ["selftest", "--filter", "wronskian"])
    assert code == EXIT_OK
    assert out.splitlines()[0].startswith("PASS wronskian")
    _, again = run(capsys, ["selftest", "--filter", "wronskian", "--seed", "7"])
    _, third = run(capsys, ["selftest", "--filter", "wronskian", "--seed", "7"])
    assert again == third
