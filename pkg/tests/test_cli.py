import csv
import io

import pytest

from pinwheel.cli import HEADER, main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_verify_d2(capsys):
    code, out = run(capsys, "verify", "--arity", "3", "--max-internal", "2", "--suite", "d2")
    assert code == 0
    assert "[d2]" in out.out and "checks passed" in out.out


def test_verify_pinwheel_arity_four(capsys):
    code, out = run(capsys, "verify", "--arity", "4", "--max-internal", "2", "--suite", "pinwheel")
    assert code == 0
    assert "FAIL" not in out.out


@pytest.mark.parametrize("argv", [
    ["verify", "--arity", "0"],
    ["verify", "--suite", "nonsense"],
    ["example", "nonsense"],
    ["verify", "--max-internal", "-1"],
])
def test_bad_arguments_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_plus_graph_example(capsys):
    code, out = run(capsys, "example", "plus-graph")
    assert code == 0
    assert "has 12 terms" in out.out
    assert "q-image equals the cyclic Arnold sum: PASS" in out.out
    assert "q(d γ) reduces to 0: PASS" in out.out


def test_csv_rows(capsys):
    code, out = run(capsys, "verify", "--arity", "3", "--max-internal", "1",
                    "--suite", "psi", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out.out)))
    assert tuple(rows[0]) == HEADER
    assert len(rows) > 1 and all(r[4] in ("PASS", "FAIL", "INFO") for r in rows[1:])
    assert code == 0


def test_output_is_deterministic(tmp_path, capsys):
    argv = ["homology", "--arity", "3", "--max-internal", "2", "--cache-dir", str(tmp_path)]
    _, cold = run(capsys, *argv)
    _, warm = run(capsys, *argv)
    assert cold.out == warm.out
    assert any(tmp_path.iterdir())


def test_out_file(tmp_path, capsys):
    target = tmp_path / "report.csv"
    code, out = run(capsys, "enumerate", "--arity", "3", "--max-internal", "1",
                    "--format", "csv", "--out", str(target))
    assert code == 0 and out.out == ""
    assert target.read_text().startswith(",".join(HEADER))


def test_refuses_large_runs(capsys):
    code, out = run(capsys, "homology", "--arity", "6", "--max-internal", "3")
    assert code == 3
    assert "refusing to run" in out.err


def test_homology_table_flags_truncation(capsys):
    code, out = run(capsys, "homology", "--arity", "3", "--max-internal", "2")
    assert code == 0
    assert "FLAG" in out.out and "exact(m<2)" in out.out
