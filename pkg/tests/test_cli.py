import json

import pytest

from revram.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_synth_decoder_json(capsys):
    code, out, _ = run(capsys, "synth", "decoder", "-n", "2", "--format", "json")
    assert code == 0
    report = json.loads(out)
    assert (report["quantum_cost"], report["delay"], report["garbage"]) == (9, 9, 1)
    assert all(isinstance(report[k], int) for k in ("quantum_cost", "delay", "garbage", "gate_count"))


def test_json_byte_stable(capsys):
    _, a, _ = run(capsys, "synth", "ram", "-n", "2", "-m", "2", "--format", "json")
    _, b, _ = run(capsys, "synth", "ram", "-n", "2", "-m", "2", "--format", "json")
    assert a == b


def test_gate_info(capsys):
    code, out, _ = run(capsys, "gate", "info", "mf1")
    assert code == 0
    assert "width: 3" in out and "cost: 4" in out and "bijective: yes" in out


def test_gate_info_printed_variant(capsys):
    _, out, _ = run(capsys, "gate", "info", "mf1p", "--format", "json")
    assert json.loads(out)["bijective"] is False


def test_gate_verify(capsys):
    assert run(capsys, "gate", "verify", "TG")[1] == "TG: verified\n"
    assert run(capsys, "gate", "verify", "FRG")[1] == "FRG: absent\n"


def test_unknown_gate(capsys):
    code, _, err = run(capsys, "gate", "info", "nope")
    assert code == 2 and err.startswith("revram: error:")


def test_metrics_missing_file(capsys):
    code, _, err = run(capsys, "metrics", "nonexistent.rev")
    assert code != 0
    assert "file not found" in err


@pytest.mark.parametrize(
    "target",
    [["decoder", "-n", "3"], ["dff"], ["msdff"], ["msdff", "--for-ram"],
     ["ram", "-n", "1", "-m", "2"], ["ram", "-n", "2", "-m", "1", "--variant", "functional"]],
)
def test_generate_parse_metrics_round_trip(capsys, tmp_path, target):
    rev = tmp_path / "c.rev"
    rep = tmp_path / "c.json"
    assert run(capsys, "synth", *target, "--out", str(rev), "--metrics", str(rep))[0] == 0
    code, out, _ = run(capsys, "metrics", str(rev), "--format", "json")
    assert code == 0
    direct = json.loads(rep.read_text())
    parsed = json.loads(out)
    for key in ("gate_count", "quantum_cost", "delay", "garbage", "lines", "constants", "name"):
        assert parsed[key] == direct[key]
    code, out, _ = run(capsys, "check", str(rev))
    assert code == 0 and "reversible" in out


def test_check_detects_collision(capsys, tmp_path):
    path = tmp_path / "bad.rev"
    path.write_text(".numvars 3\n.variables a b c\n.constants ---\n.garbage ---\n.begin\nmf1p a b c\n.end\n")
    code, out, _ = run(capsys, "check", str(path))
    assert code == 1 and "NOT reversible" in out


def test_parse_error_reported(capsys, tmp_path):
    path = tmp_path / "bad.rev"
    path.write_text(".numvars 1\n.variables a\n.constants -\n.garbage -\n.begin\nt3 a\n.end\n")
    code, _, err = run(capsys, "metrics", str(path))
    assert code == 2 and "bad.rev:6:" in err


def test_delay_model_flag(capsys):
    _, out, _ = run(capsys, "synth", "decoder", "-n", "2", "--format", "json", "--delay-model", "unit")
    assert json.loads(out)["delay"] == 3  # both MFRG1 gates share s1


def test_search(capsys):
    code, out, _ = run(capsys, "search", "decomposition", "FG", "--max-len", "2", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["found"] and data["sequence"] == ["CNOT(0->1)"]
    _, out, _ = run(capsys, "search", "decomposition", "MFRG1", "--max-len", "4")
    assert "NONE" in out
    assert run(capsys, "search", "decomposition", "TG", "--max-len", "9")[0] == 2


def test_sim_ram(capsys, tmp_path):
    script = tmp_path / "s.txt"
    script.write_text("w 2 101\nr 2\nr 0\n")
    code, out, _ = run(capsys, "sim", "ram", "-n", "2", "-m", "3", "--script", str(script))
    assert code == 0 and out == "101\n000\n"
    script.write_text("w 9 101\n")
    assert run(capsys, "sim", "ram", "-n", "2", "-m", "3", "--script", str(script))[0] == 2


def test_sim_fuzz(capsys):
    code, out, _ = run(capsys, "sim", "fuzz", "-n", "2", "-m", "2", "--scripts", "10", "--format", "json")
    assert code == 0 and json.loads(out)["ok"] is True


def test_out_of_bounds(capsys):
    code, _, err = run(capsys, "synth", "decoder", "-n", "9")
    assert code == 2 and "n must be" in err


def test_improvements(capsys):
    code, out, _ = run(capsys, "improvements", "--format", "json")
    assert code == 0
    assert all(row["matches"] for row in json.loads(out))


def test_backend(capsys):
    _, out, _ = run(capsys, "backend")
    assert out.strip() in ("cython", "python")


def test_bad_flags():
    with pytest.raises(SystemExit) as info:
        main(["synth", "ram", "-n", "1"])
    assert info.value.code == 2
