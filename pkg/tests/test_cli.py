import io
import json
import subprocess
import sys

from substalg.cli import emit_report, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    return code, (json.loads(out) if out.strip() else None), err


def replays(capsys, doc):
    path_doc = json.dumps(doc)
    sys.stdin = io.StringIO(path_doc)
    try:
        code, out, _ = run_json(capsys, "replay")
    finally:
        sys.stdin = sys.__stdin__
    return code == 0 and out["accepted"]


def test_decide_exit_codes(capsys):
    assert run(capsys, "decide", "--dim", "2", "--sig", "TA", "s[0,1] s[0,1] x0 = x0")[0] == 0
    code, doc, _ = run_json(capsys, "decide", "--dim", "2", "--sig", "TA", "s[0,1] x0 = x0")
    assert code == 1 and doc["certificate"]["type"] == "countermodel"
    assert replays(capsys, doc)


def test_decide_quasi_and_diagonals(capsys):
    assert run(capsys, "decide", "s[0,1] x0 = ~x0 => 0 = 1")[0] == 0
    code, doc, _ = run_json(capsys, "decide", "x0 = x0 => s[0,1] x0 = x0")
    assert code == 1 and replays(capsys, doc)
    code, doc, _ = run_json(capsys, "decide", "--sig", "SAD", "d[0,1] = 0")
    assert code == 1 and replays(capsys, doc)
    code, doc, _ = run_json(capsys, "decide", "--dim", "4", "--sig", "TA", "--samples", "200",
                            "s[0,1] x0 = ~x0 => 0 = 1")
    assert code == 2 and doc["status"] == "unknown"


def test_usage_errors(capsys):
    code, _, err = run(capsys, "decide", "x0 = ")
    assert code == 3 and "parse error" in err and "^" in err
    assert run(capsys, "decide", "--dim", "1", "x0 = x0")[0] == 3
    assert run(capsys, "decide", "--sig", "TA", "s[0/1] x0 = x0")[0] == 3
    assert run(capsys, "frobnicate")[0] == 3
    assert run(capsys, "prove", "s[0,1]")[0] == 3
    assert run(capsys, "decide", "--budget-assignments", "0", "x0 = x0")[0] == 3


def test_statement_from_stdin(capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO("s[0,1] s[0,1] x0 = x0\n"))
    assert run(capsys, "decide")[0] == 0


def test_sat_and_countermodel(capsys):
    code, doc, _ = run_json(capsys, "sat", "p0 & !<0,1> p0")
    assert code == 0 and doc["status"] == "satisfiable"
    code, doc, _ = run_json(capsys, "sat", "p0 & !p0")
    assert code == 1 and doc["status"] == "unsatisfiable" and replays(capsys, doc)
    code, doc, _ = run_json(capsys, "countermodel", "p0 -> <0,1> p0")
    assert code == 1 and doc["certificate"]["type"] == "kripke" and replays(capsys, doc)
    assert run(capsys, "countermodel", "<0,1><0,1> p0 <-> p0")[0] == 0


def test_interpolate(capsys):
    code, doc, _ = run_json(capsys, "interpolate", "--dim", "3", "x0 & x1", "x0 | x2", "--shared", "x0")
    assert code == 0 and doc["interpolant"] == "x0"
    code, doc, _ = run_json(capsys, "interpolate", "x0", "x1")
    assert code == 1 and replays(capsys, doc)
    assert run(capsys, "interpolate", "x0", "x0", "--shared", "y")[0] == 3


def test_prove(capsys):
    code, doc, _ = run_json(capsys, "prove", "--dim", "3", "s[0,1] s[1,2] s[0,1] = s[1,2] s[0,1] s[1,2]")
    assert code == 0 and doc["method"] == "trace" and doc["trace"]["steps"]
    code, doc, _ = run_json(capsys, "prove", "--dim", "3", "s[0,1]", "=", "s[0,2]")
    assert code == 1 and doc["certificate"]["point"] == 0 and replays(capsys, doc)
    code, doc, _ = run_json(capsys, "prove", "--sig", "SA", "s[0/1] s[0/1] = s[0/1]")
    assert code == 0 and doc["method"] == "hat"


def test_free_stats(capsys):
    code, doc, _ = run_json(capsys, "free", "--dim", "2", "--sig", "TA", "--gens", "1", "--stats")
    assert code == 0 and doc["atoms"] == 4 and doc["cardinality"] == 16


def test_replay_rejects_forged_certificate(capsys, tmp_path):
    code, doc, _ = run_json(capsys, "decide", "s[0,1] x0 = x0")
    doc["certificate"]["countermodel"]["assignment"]["x0"] = "0"
    p = tmp_path / "cert.json"
    p.write_text(json.dumps(doc))
    code, out, _ = run_json(capsys, "replay", str(p))
    assert code == 1 and not out["accepted"]
    p.write_text("not json")
    assert run(capsys, "replay", str(p))[0] == 3


def test_verify_report_is_deterministic(capsys):
    c1, out1, _ = run(capsys, "verify-paper", "--dim-max", "2", "--json")
    c2, out2, _ = run(capsys, "verify-paper", "--dim-max", "2", "--json")
    assert c1 == 0 and out1 == out2
    doc = json.loads(out1)
    assert doc["non_variety"][0]["n"] == 2 and doc["ok"]
    assert {f["id"] for f in doc["flags"]} >= {"free-algebra-bound", "diagonal-axiom-4"}


def test_emit_report_text():
    assert emit_report({}, False) == ""
    assert emit_report({"a": {"b": 1}, "c": [{"d": 2}]}, False) == "a.b: 1\nc.0.d: 2"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "substalg", "decide", "s[0,1] x0 = x0"],
                          capture_output=True, text=True)
    assert proc.returncode == 1 and "status: invalid" in proc.stdout
