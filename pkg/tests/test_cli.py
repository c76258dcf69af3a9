import json
from fractions import Fraction

import pytest

from subrigid.cli import main

TM_SPEC = '{"alphabet": ["0","1"], "rules": {"0": "01", "1": "10"}}'
PERIODIC_SPEC = '{"alphabet": ["0","1"], "rules": {"0": "010", "1": "101"}}'


@pytest.fixture
def tm_file(tmp_path):
    path = tmp_path / "tm.json"
    path.write_text(TM_SPEC)
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_delta_command(tm_file, capsys):
    code, out, err = run_cli(capsys, "delta", tm_file)
    assert code == 0
    report = json.loads(out)
    assert report["rate"]["lower"] == "2/3"
    assert report["rate"]["exact"] is True
    assert report["rate"]["witness_length"] == 4
    assert report["rate"]["sequence"] == "3*2^n"
    assert "delta=2/3" in err


def test_stdout_is_deterministic(tm_file, capsys):
    _, first, _ = run_cli(capsys, "delta", tm_file)
    _, second, _ = run_cli(capsys, "delta", tm_file)
    assert first == second


def test_measure_command(tmp_path, capsys):
    path = tmp_path / "z6.json"
    path.write_text('{"family": "zeta", "params": {"l": 6}}')
    code, out, _ = run_cli(capsys, "measure", str(path), "--word", "00")
    assert code == 0
    assert json.loads(out)["measure"]["value"] == "5/14"


def test_profile_csv(tm_file, tmp_path, capsys):
    csv_path = tmp_path / "profile.csv"
    code, out, _ = run_cli(capsys, "profile", tm_file, "--max", "5", "--csv", str(csv_path))
    assert code == 0
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "m,a_m,a_m_decimal"
    assert lines[1].startswith("2,1/3,")
    assert lines[3].startswith("4,2/3,")
    assert len(lines) == 5


def test_toml_spec(tmp_path, capsys):
    path = tmp_path / "spec.toml"
    path.write_text('family = "zeta"\n[params]\nl = 6\n')
    code, out, _ = run_cli(capsys, "delta", str(path))
    assert code == 0
    assert json.loads(out)["rate"]["lower"] == "5/7"


def test_periodic_exit_code(tmp_path, capsys):
    path = tmp_path / "periodic.json"
    path.write_text(PERIODIC_SPEC)
    code, out, err = run_cli(capsys, "delta", str(path))
    assert code == 2
    assert out == ""
    assert "periodic" in err


def test_missing_file_exit_code(capsys):
    code, _, err = run_cli(capsys, "delta", "/nonexistent/spec.json")
    assert code == 2
    assert "not found" in err


def test_malformed_spec_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"alphabet": ["0","1"]}')
    code, _, err = run_cli(capsys, "delta", str(path))
    assert code == 2


def test_approx_command(capsys):
    code, out, _ = run_cli(capsys, "approx", "--delta", "0.3", "--eps", "0.001")
    assert code == 0
    body = json.loads(out)["approx"]
    target = Fraction("3/10")
    product = Fraction(1)
    for factor in body["factors"]:
        assert Fraction(factor["bracket_low"]) <= target <= Fraction(factor["delta_k"])
        assert factor["bracket_holds"] is True
        product *= Fraction(factor["rate"]) ** factor["exponent"]
    assert product == Fraction(body["achieved"])
    assert Fraction(body["achieved"]) - target <= Fraction("1/1000")


def test_approx_rejects_out_of_range(capsys):
    code, _, err = run_cli(capsys, "approx", "--delta", "1.5")
    assert code == 2


def test_oracle_command(tm_file, capsys):
    code, out, _ = run_cli(capsys, "oracle", tm_file, "--word", "01", "--depth", "14")
    assert code == 0
    body = json.loads(out)["oracle"]
    assert abs(body["value"] - 1 / 3) < 1e-3


def test_certify_command(tm_file, capsys):
    code, out, _ = run_cli(capsys, "certify", tm_file)
    assert code == 0
    kinds = {c["kind"]: c["bound"] for c in json.loads(out)["certificates"]}
    assert kinds["return_words"] == "1/6"


def test_diagnose_command(tm_file, capsys):
    code, out, _ = run_cli(capsys, "diagnose", tm_file, "--n", "8")
    assert code == 0
    body = json.loads(out)["diagnostic"]
    assert body["verdict"] == "not rigid (certified)"


def test_stdin_spec(capsys, monkeypatch):
    import io

    monkeypatch.setattr("sys.stdin", io.StringIO(TM_SPEC))
    code, out, _ = run_cli(capsys, "delta", "-")
    assert code == 0
    assert json.loads(out)["rate"]["lower"] == "2/3"


def test_non_primitive_exit_code(tmp_path, capsys):
    path = tmp_path / "reducible.json"
    path.write_text('{"alphabet": ["0","1"], "rules": {"0": "01", "1": "1"}}')
    code, _, err = run_cli(capsys, "delta", str(path))
    assert code == 2
    assert "primitive" in err
