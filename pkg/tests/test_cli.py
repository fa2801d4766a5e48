import csv
import io
import json

import pytest

from qigw import checks
from qigw.checks import CheckReport, SuiteBounds, run_suite
from qigw.cli import main
from qigw.quantization.diffpoly import dump_density, hamiltonian_density


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("argv,want", [
    (("qint", "--d", "2", "--g", "1"), "1/24"),
    (("qint", "--d", "0", "0", "0", "--g", "0"), "1"),
    (("qint", "--d", "1", "--g", "1"), "0"),
    (("hurwitz", "--g", "1", "--mu", "2"), "1/2"),
    (("hurwitz", "--g", "0", "--mu", "1", "1", "1"), "6"),
    (("gw", "--a", "1", "--d", "2"), "1/24"),
    (("quantum", "--d", "1", "--g", "1"), "-1/24"),
    (("quantum", "--d", "2", "--g", "2", "--l", "1"), "1/2880"),
])
def test_single_values(capsys, argv, want):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert out.strip() == want


def test_qint_json(capsys):
    code, out, _ = run(capsys, "qint", "--d", "2", "--g", "1", "--format", "json")
    assert code == 0 and json.loads(out) == {"d": [2], "g": 1, "value": "1/24"}


def test_precondition_message_is_verbatim(capsys):
    code, _, err = run(capsys, "qint", "--d", "0", "0", "--g", "0")
    assert code == 2
    assert "n >= 1 + 2*delta(g,0)" in err


def test_wedge_vev_agrees_with_fock(capsys):
    _, a, _ = run(capsys, "wedge-vev", "a2 E0(z) a-2", "--cap", "5")
    _, b, _ = run(capsys, "wedge-vev", "a2 E0(z) a-2", "--cap", "5", "--fock")
    assert a == b and a.strip()


def read_table(text):
    lines = text.splitlines()
    assert lines[0].startswith("# kind=")
    return list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))


def test_tables(capsys):
    _, out, _ = run(capsys, "table", "qint", "--g", "2", "--n", "3")
    assert {"g": "1", "d": "2", "value": "1/24"} in read_table(out)
    _, out, _ = run(capsys, "table", "hurwitz", "--g", "1", "--max-degree", "4")
    assert {"g": "1", "mu": "2", "value": "1/2"} in read_table(out)
    _, out, _ = run(capsys, "table", "gw", "--a", "1", "--n", "1")
    rows = read_table(out)
    assert [r["value"] for r in rows if r["d"] == "2"] == ["1/24"]


def test_table_is_deterministic(capsys, tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert main(["table", "qint", "--g", "2", "--n", "3", "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_quantum_with_density_file(capsys, tmp_path):
    path = tmp_path / "h2.txt"
    path.write_text(dump_density(hamiltonian_density(2)))
    code, out, _ = run(capsys, "quantum", "--d", "2", "--g", "1", "--l", "1", "--density", f"2={path}")
    assert code == 0 and out.strip() == "1/24"


@pytest.mark.parametrize("argv", [
    ("crosscheck",),
    ("crosscheck", "--suite"),
    ("crosscheck", "--suite", "nonsense"),
    ("quantum", "--d", "1", "--g", "0", "--l", "1"),
    ("quantum", "--d", "3", "--g", "1"),
    ("hurwitz", "--g", "0"),
    ("table", "gw"),
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_crosscheck_hurwitz_passes(capsys):
    code, out, _ = run(capsys, "crosscheck", "--suite", "hurwitz", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert data["reports"][0]["passed"] == data["reports"][0]["total"] > 0


def test_crosscheck_failure_exit_code(capsys, monkeypatch):
    def broken(bounds):
        rep = CheckReport("broken")
        rep.add("one is two", 1, 2)
        return rep

    monkeypatch.setitem(checks.SUITES, "broken", broken)
    code, out, _ = run(capsys, "crosscheck", "--suite", "broken")
    assert code == 1 and "FAIL one is two: 1 != 2" in out


def test_dilaton_never_fails(capsys):
    code, out, _ = run(capsys, "crosscheck", "--suite", "dilaton")
    assert code == 0 and "informational" in out


def test_env_overrides(monkeypatch):
    monkeypatch.setenv("QIGW_HURWITZ_DEGREE", "3")
    b = SuiteBounds.from_env()
    assert b.hurwitz_degree == 3
    assert len(run_suite("hurwitz", b).entries) == 3 * (1 + 2 + 3)
    assert SuiteBounds.from_env(hurwitz_degree=2).hurwitz_degree == 2
    monkeypatch.setenv("QIGW_CAP", "eight")
    with pytest.raises(ValueError):
        SuiteBounds.from_env()


def test_report_counts_consistent():
    rep = CheckReport("x")
    rep.add("a", 1, 1)
    rep.add("b", 1, 2)
    rep.note("c", 0)
    d = rep.to_dict()
    assert (d["passed"], d["total"], len(d["failures"])) == (1, 2, 1)
    assert not rep.ok
