import json
import subprocess
import sys

import pytest

from qorbits import __version__
from qorbits.cli import main, parse_n
from qorbits.qtensor import family_a_matrix


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def test_parse_n():
    assert parse_n("2..4") == [2, 3, 4]
    assert parse_n("2,3") == [2, 3]
    assert parse_n("3") == [3]


def test_verify_hecke(capsys):
    code, rep = run(["verify", "hecke", "--n", "2..4"], capsys)
    assert code == 0
    assert [c["params"]["n"] for c in rep["checks"]] == [2, 3, 4]
    assert all(c["result"] == "pass" for c in rep["checks"])
    assert rep["summary"] == {"passed": 3, "failed": 0, "skipped": 0}
    assert rep["version"] == __version__
    assert rep["config"]["seed"] == 0


def test_verify_re_solutions(capsys):
    code, rep = run(["verify", "re-solutions", "--n", "4"], capsys)
    assert code == 0
    fams = {c["check"] for c in rep["checks"]}
    assert fams == {"re-solution:A", "re-solution:B"}
    assert max(c["params"]["n"] for c in rep["checks"]) == 4
    assert rep["summary"]["failed"] == 0


def test_dims_re(capsys):
    code, rep = run(["dims", "--algebra", "re", "--n", "2", "--max-degree", "4"], capsys)
    assert code == 0
    rows = rep["checks"][0]["rows"]
    assert [r["dim"] for r in rows] == [1, 4, 10, 20, 35]
    assert all(r["match"] for r in rows)
    assert set(rows[0]) == {"degree", "dim", "classical", "match"}


def test_degree_cap_is_usage_error(capsys):
    assert main(["dims", "--n", "2", "--max-degree", "9"]) == 2


def test_bad_subcommand_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "nonsense"])
    assert exc.value.code == 2


def test_bad_n_is_usage_error(capsys):
    assert main(["verify", "hecke", "--n", "two"]) == 2
    assert main(["verify", "hecke", "--n", "9"]) == 2


def _write(tmp_path, name, rows):
    p = tmp_path / name
    p.write_text(json.dumps({"n": len(rows), "entries": rows}))
    return str(p)


def test_check_matrix_pass_and_fail(tmp_path, capsys):
    ok = _write(tmp_path, "diag.json", [["a^2", "0"], ["0", "0"]])
    code, rep = run(["check-matrix", ok], capsys)
    assert code == 0 and rep["checks"][0]["result"] == "pass"
    ones = _write(tmp_path, "ones.json", [["1", "1"], ["1", "1"]])
    code, rep = run(["check-matrix", ones], capsys)
    assert code == 1
    assert rep["checks"][0]["result"] == "fail" and rep["checks"][0]["witnesses"]


def test_check_matrix_roundtrip(tmp_path, capsys):
    p = tmp_path / "a.json"
    p.write_text(json.dumps(family_a_matrix(2, 1, 1).to_json()))
    code, rep = run(["check-matrix", str(p), "--against", "symmetric", "--mult", "1,1",
                     "--eig", "a^2,b^2"], capsys)
    assert code == 0 and rep["checks"][0]["result"] == "pass"


def test_check_matrix_parse_error(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"n": 2')
    assert main(["check-matrix", str(p)]) == 2
    assert main(["check-matrix", str(tmp_path / "missing.json")]) == 2


def test_report_written_and_byte_stable(tmp_path, capsys):
    out = tmp_path / "report.json"
    main(["suite", "tensor", "--out", str(out)])
    first_file, first_stdout = out.read_bytes(), capsys.readouterr().out
    main(["suite", "tensor", "--out", str(out)])
    assert out.read_bytes() == first_file
    assert capsys.readouterr().out == first_stdout == first_file.decode()


def test_timings_optional(capsys):
    code, rep = run(["verify", "hecke", "--n", "2", "--timings"], capsys)
    assert code == 0 and "seconds" in json.dumps(rep)


def test_poisson_subcommand(capsys):
    code, rep = run(["poisson", "--n", "2"], capsys)
    assert code == 0 and rep["checks"][0]["check"] == "poisson"


@pytest.mark.parametrize("what", ["trp", "alg-lemma", "substitution", "gl2"])
def test_verify_checks(what, capsys):
    code, rep = run(["verify", what], capsys)
    assert code == 0, rep
    assert rep["summary"]["failed"] == 0


def test_entry_point_module():
    res = subprocess.run([sys.executable, "-m", "qorbits.cli", "verify", "hecke", "--n", "2"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["summary"]["passed"] == 1
