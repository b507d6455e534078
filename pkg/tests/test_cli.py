import csv
import json

import numpy as np
import pytest

from mubsearch.cli import main
from mubsearch.lm import LmOptions
from mubsearch.objective import BasisSet
from mubsearch.search import SearchConfig, run_search


def run(*argv):
    return main([str(a) for a in argv])


def read_csv_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_search_writes_outputs(tmp_path):
    prefix = tmp_path / "run"
    assert run("search", "--dim", 2, "--bases", 2, "--trials", 50, "--seed", 7,
               "--out", prefix) == 0
    summary = json.loads((tmp_path / "run.summary.json").read_text())
    assert summary["success_rate"] == 1.0
    assert summary["schema_version"] == 1
    assert summary["generator_id"]
    assert summary["flags"]["trials"] == 50
    rows = read_csv_rows(tmp_path / "run.trials.csv")
    assert len(rows) == 50
    assert list(rows[0]) == ["trial_id", "seed", "d", "n_bases", "objective_final",
                             "iterations", "termination", "success", "wall_time_ms"]
    assert rows[0]["seed"].startswith("0x")


def test_search_non_discovery_exits_zero(tmp_path):
    prefix = tmp_path / "six"
    assert run("search", "--dim", 6, "--bases", 3, "--trials", 3, "--seed", 7,
               "--out", prefix) == 0
    summary = json.loads((tmp_path / "six.summary.json").read_text())
    assert summary["success_count"] == 0


def test_search_rerun_is_identical(tmp_path):
    for name in ("a", "b"):
        assert run("search", "--dim", 3, "--bases", 2, "--trials", 5, "--seed", 11,
                   "--out", tmp_path / name) == 0
    strip = lambda rows: [{k: v for k, v in r.items() if k != "wall_time_ms"} for r in rows]
    assert strip(read_csv_rows(tmp_path / "a.trials.csv")) == \
        strip(read_csv_rows(tmp_path / "b.trials.csv"))


@pytest.mark.parametrize("argv", [
    ["search", "--dim", "2", "--bases", "2", "--trials", "0", "--seed", "1", "--out", "x"],
    ["search", "--dim", "1", "--bases", "2", "--trials", "1", "--seed", "1", "--out", "x"],
    ["search", "--dim", "2"],
    ["bogus"],
])
def test_invalid_flags_exit_2(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_search_io_failure_exits_3(tmp_path):
    prefix = tmp_path / "missing" / "run"
    assert run("search", "--dim", 2, "--bases", 1, "--trials", 1, "--seed", 1,
               "--out", prefix) == 3


def test_construct_then_verify(tmp_path, capsys):
    out = tmp_path / "m5.json"
    assert run("construct", "--dim", 5, "--out", out) == 0
    assert BasisSet.load(out).n_bases == 5
    assert run("verify", "--input", out) == 0
    text = capsys.readouterr().out
    assert "objective" in text and "unitarity" in text


def test_construct_qubit(tmp_path):
    out = tmp_path / "m2.json"
    assert run("construct", "--dim", 2, "--out", out) == 0
    assert len(json.loads(out.read_text())["bases"]) == 2
    assert run("verify", "--input", out) == 0


def test_construct_composite_exits_2(tmp_path):
    assert run("construct", "--dim", 6, "--out", tmp_path / "x.json") == 2


def test_verify_qutrit_objective(tmp_path, capsys):
    out = tmp_path / "m3.json"
    run("construct", "--dim", 3, "--out", out)
    capsys.readouterr()
    assert run("verify", "--input", out) == 0
    line = capsys.readouterr().out.splitlines()[0]
    assert float(line.split(":")[1]) < 1e-20


def test_verify_duplicate_standard_basis(tmp_path, capsys):
    path = tmp_path / "dup.json"
    BasisSet(np.eye(4)).save(path)
    assert run("verify", "--input", path) == 1
    line = capsys.readouterr().out.splitlines()[0]
    assert float(line.split(":")[1]) == pytest.approx(3.0, abs=1e-12)


def test_verify_truncated_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"d": 2, "bases": [[[[1, 0], [0')
    assert run("verify", "--input", path) == 2


def test_verify_non_unitary(tmp_path):
    path = tmp_path / "nu.json"
    path.write_text(json.dumps({"d": 2, "bases": [[[[2, 0], [0, 0]], [[0, 0], [1, 0]]]]}))
    assert run("verify", "--input", path) == 2


def test_verify_missing_file(tmp_path):
    assert run("verify", "--input", tmp_path / "nope.json") == 2


def write_trials(path, values):
    with open(path, "w") as fh:
        fh.write("trial_id,seed,d,n_bases,objective_final,iterations,termination,success,wall_time_ms\n")
        for i, v in enumerate(values):
            fh.write(f"{i},0x{i:016x},2,1,{v!r},1,FunctionChangeTol,{int(v <= 1e-6)},0\n")


def test_hist_all_zero(tmp_path):
    src, out = tmp_path / "t.csv", tmp_path / "h.txt"
    write_trials(src, [0.0, 0.0, 0.0])
    assert run("hist", "--input", src, "--out", out) == 0
    assert out.read_text().split() == ["0.0025", "3"]


def test_hist_header_only(tmp_path):
    src, out = tmp_path / "t.csv", tmp_path / "h.txt"
    write_trials(src, [])
    assert run("hist", "--input", src, "--out", out) == 0
    assert out.read_text() == ""


def test_hist_bad_input(tmp_path):
    src = tmp_path / "t.csv"
    src.write_text("not,a,trials,file\n")
    assert run("hist", "--input", src, "--out", tmp_path / "h.txt") == 2
    assert run("hist", "--input", tmp_path / "missing.csv", "--out", tmp_path / "h.txt") == 2


def test_search_then_hist_matches_in_memory(tmp_path):
    prefix = tmp_path / "run"
    assert run("search", "--dim", 3, "--bases", 3, "--trials", 6, "--seed", 4,
               "--max-iter", 3, "--bin-width", 0.01, "--out", prefix) == 0
    out = tmp_path / "h.txt"
    assert run("hist", "--input", f"{prefix}.trials.csv", "--bin-width", 0.01,
               "--out", out) == 0
    data = np.loadtxt(out, ndmin=2)
    summary = json.loads((tmp_path / "run.summary.json").read_text())
    expected = [((lo + hi) / 2, c) for lo, hi, c in summary["histogram"]]
    assert data.tolist() == [list(e) for e in expected]
    config = SearchConfig(d=3, n_bases=3, trials=6, base_seed=4, bin_width=0.01,
                          lm_options=LmOptions(max_iterations=3))
    report = run_search(config)
    assert [list(b) for b in report.histogram] == summary["histogram"]
