import json
import subprocess
import sys
from pathlib import Path

import pytest

from prnreduce import report as rep
from prnreduce.cli import main

from conftest import MODEL_PATH

HERE = Path(__file__).parent
GOLDEN = HERE / "golden"
UNREACHABLE = str(HERE / "models" / "unreachable.prn")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_reduce_golden(capsys):
    code, out, _ = run(capsys, "reduce", MODEL_PATH, "--json", "-")
    assert code == 0
    assert out == (GOLDEN / "reduce_four_gene.json").read_text(encoding="utf-8")
    rep.validate_report(json.loads(out))


def test_reduce_text(capsys):
    code, out, _ = run(capsys, "reduce", MODEL_PATH)
    assert code == 0
    assert "objectives (8):" in out
    assert "activation limits: a=1 b=1 c=1 d=-inf" in out
    assert "inhibition limits: a=+inf b=0 c=0 d=+inf" in out


def test_reduce_to_file_is_byte_stable(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "reduce", MODEL_PATH, "--json", str(a))
    run(capsys, "reduce", MODEL_PATH, "--json", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_reduce_approx_is_more_permissive(capsys):
    _, exact, _ = run(capsys, "reduce", MODEL_PATH, "--json", "-")
    _, approx, _ = run(capsys, "reduce", MODEL_PATH, "--mode", "approx", "--json", "-")
    e = json.loads(exact)["limits"]["per_state"]
    a = json.loads(approx)["limits"]["per_state"]
    for ce, ca in zip(e, a):
        for re_, ra in zip(ce["entries"], ca["entries"]):
            assert rep.parse_limit(ra["activation"]) >= rep.parse_limit(re_["activation"])
            assert rep.parse_limit(ra["inhibition"]) <= rep.parse_limit(re_["inhibition"])


def test_unknown_goal_component(capsys):
    code, _, err = run(capsys, "reduce", MODEL_PATH, "--goal", "zeta=1")
    assert code == 3
    assert "zeta" in err


def test_missing_file(capsys):
    code, _, err = run(capsys, "reduce", "/nonexistent/model.prn")
    assert code == 3 and "cannot read" in err


def test_reach(capsys):
    code, out, _ = run(capsys, "reach", MODEL_PATH, "--reduce", "off", "--json", "-")
    data = json.loads(out)
    assert code == 0 and data["verdict"] == "reached"
    assert data["unreduced"]["states"] <= 16
    code, out, _ = run(capsys, "reach", MODEL_PATH, "--reduce", "on", "--json", "-")
    data = json.loads(out)
    assert code == 0 and data["verdict"] == "reached"
    assert data["unreduced"]["states"] == 16
    assert data["reduced"]["states"] <= 8


def test_reach_unreached_and_budget(capsys):
    code, out, _ = run(capsys, "reach", UNREACHABLE)
    assert code == 1 and "verdict: unreached" in out
    code, out, _ = run(capsys, "reach", MODEL_PATH, "--budget", "2")
    assert code == 2 and "verdict: unknown" in out
    code, out, _ = run(capsys, "reach", MODEL_PATH, "--reduce", "on", "--budget", "2")
    assert code == 2


def test_cover(capsys):
    code, out, _ = run(capsys, "cover", MODEL_PATH, "--component", "a", "--json", "-")
    assert code == 0
    assert out == (GOLDEN / "cover_four_gene.json").read_text(encoding="utf-8")
    rep.validate_report(json.loads(out), "cover.schema.json")
    code, out, _ = run(capsys, "cover", MODEL_PATH, "--component", "a", "--change", "1:0")
    assert "6 members, 12 specs (concrete: 18)" in out
    code, out, _ = run(capsys, "cover", MODEL_PATH, "--component", "a", "--change", "0:1")
    assert "3 members, 9 specs" in out


def test_cover_errors_and_empty(capsys):
    assert run(capsys, "cover", MODEL_PATH, "--component", "q")[0] == 3
    assert run(capsys, "cover", MODEL_PATH, "--component", "a", "--change", "0:2")[0] == 3
    assert run(capsys, "cover", MODEL_PATH, "--component", "a", "--change", "1:2")[0] == 3
    code, out, _ = run(capsys, "cover", UNREACHABLE, "--component", "a", "--change", "0:1")
    assert code == 0 and "0 members, 0 specs" in out


def test_oracle_listing(capsys):
    code, out, _ = run(capsys, "oracle", MODEL_PATH, "--max-len", "4")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "minimal traces up to length 4: 3"
    assert lines[1] == "  [1] length 2: b 0->1 <b=0>, a 0->1 <b=1 c=0 d=0>"
    assert lines[3].startswith("  [3] length 4:")
    code, out, _ = run(capsys, "oracle", MODEL_PATH, "--max-len", "1")
    assert out.startswith("minimal traces up to length 1: 0")


def test_oracle_cap(tmp_path, capsys):
    stripped = tmp_path / "bare.prn"
    stripped.write_text("".join(ln for ln in open(MODEL_PATH, encoding="utf-8") if not ln.startswith("param")),
                        encoding="utf-8")
    code, out, _ = run(capsys, "oracle", str(stripped), "--max-len", "3")
    assert code == 0 and "length 2" in out
    code, _, err = run(capsys, "oracle", str(stripped), "--cap", "3")
    assert code == 3 and "lattice" in err


def test_oracle_campaign_deterministic(capsys):
    _, a, _ = run(capsys, "oracle", "--seed", "42", "--count", "10", "--max-len", "5")
    _, b, _ = run(capsys, "oracle", "--seed", "42", "--count", "10", "--max-len", "5")
    assert a == b
    data = json.loads(a)
    assert data["seed"] == 42 and data["instances"] == 10 and data["failures"] == []


def test_json_model_format(tmp_path, capsys, ref_model):
    from prnreduce.modelfile import model_to_json

    path = tmp_path / "four_gene.model"
    path.write_text(json.dumps(model_to_json(ref_model)), encoding="utf-8")
    code, out, _ = run(capsys, "reduce", str(path), "--format", "json", "--json", "-")
    assert code == 0
    assert out == (GOLDEN / "reduce_four_gene.json").read_text(encoding="utf-8")


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "prnreduce.cli", "reach", MODEL_PATH, "--reduce", "on"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "reduced: 8 states" in proc.stdout
