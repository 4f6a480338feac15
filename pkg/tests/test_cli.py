import json

from concatqec import cli


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_syndrome_table_matches_reference(capsys):
    code, out, _ = run(["syndrome-table"], capsys)
    assert code == 0
    assert "reference match: yes" in out


def test_syndrome_table_csv_bold_row(capsys, tmp_path):
    target = tmp_path / "table.csv"
    code, _, _ = run(["syndrome-table", "--format", "csv", "--out", str(target)], capsys)
    assert code == 0
    text = target.read_text()
    assert text.splitlines()[0] == "syndrome,error_label,data_state_form,correction"
    assert "0110,B1,c(0)|0> - c(1)|1>,S5" in text


def test_syndrome_table_json(capsys):
    code, out, _ = run(["syndrome-table", "--format", "json"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["matches_reference"] is True
    assert len(payload["rows"]) == 16


def test_syndrome_table_fault_injection_fails(capsys):
    code, _, err = run(["syndrome-table", "--inject-theta-fault"], capsys)
    assert code == 1


def test_example_text_trace(capsys):
    code, out, _ = run(["example"], capsys)
    assert code == 0
    assert "syndrome: 0110" in out
    assert out.rstrip().endswith("fidelity: 1.000000000")


def test_example_json_trace(capsys):
    code, out, _ = run(["example", "--format", "json"], capsys)
    assert code == 0
    trace = json.loads(out)
    assert trace["syndrome"] == "0110"
    assert trace["correction"] == "S5"
    assert trace["passed"] is True


def test_example_tight_tolerance_still_passes(capsys):
    # the pipeline is exact up to rounding, so 1e-12 has headroom
    code, _, _ = run(["example", "--tolerance", "1e-12"], capsys)
    assert code == 0


def test_sweep_trivial(capsys):
    code, out, _ = run(["sweep", "--t", "0", "--s", "0", "--workers", "1"], capsys)
    assert code == 0
    assert "total scenarios: 1" in out and "passed: 1" in out


def test_sweep_json_artifact_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for target in (a, b):
        code, _, _ = run(["sweep", "--t", "1", "--s", "0", "--workers", "1",
                          "--format", "json", "--out", str(target)], capsys)
        assert code == 0
    assert a.read_bytes() == b.read_bytes()
    payload = json.loads(a.read_text())
    assert payload["total"] == 45 and payload["passed"] == 45


def test_sweep_invalid_params_exit_2(capsys):
    code, _, err = run(["sweep", "--t", "3", "--s", "0"], capsys)
    assert code == 2
    assert "invalid configuration" in err


def test_tolerance_validation_exit_2(capsys):
    code, _, _ = run(["example", "--tolerance", "0.5"], capsys)
    assert code == 2


def test_env_tolerance_override(capsys, monkeypatch):
    monkeypatch.setenv("CONCATQEC_TOLERANCE", "0.5")
    code, _, _ = run(["example"], capsys)
    assert code == 2  # invalid value range proves the env var was read
    monkeypatch.setenv("CONCATQEC_TOLERANCE", "not-a-number")
    code, _, _ = run(["example"], capsys)
    assert code == 2
    monkeypatch.setenv("CONCATQEC_TOLERANCE", "1e-6")
    code, _, _ = run(["example"], capsys)
    assert code == 0


def test_flag_beats_environment(capsys, monkeypatch):
    monkeypatch.setenv("CONCATQEC_TOLERANCE", "0.5")
    code, _, _ = run(["example", "--tolerance", "1e-9"], capsys)
    assert code == 0


def test_selfcheck(capsys):
    code, out, _ = run(["selfcheck"], capsys)
    assert code == 0
    assert "encoder isometry: OK" in out
    assert "selfcheck: all checks passed" in out


def test_selfcheck_json(capsys):
    code, out, _ = run(["selfcheck", "--format", "json"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["ok"] is True
    assert all(c["ok"] for c in payload["checks"])
