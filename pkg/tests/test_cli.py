import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from gbgw.cli import decode, encode, main
from gbgw.core import NU, NuPoly
from gbgw.correlators import nu_correlator
from gbgw.virasoro import solve_tau


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_correlator_norbury(capsys):
    code, out = run(capsys, "correlator", "--ells", "1,1", "--normalization", "norbury")
    assert code == 0
    rec = json.loads(out)
    assert rec["value"] == "63/512" and rec["key"] == [1, 1]


def test_correlator_nu_symbolic(capsys):
    code, out = run(capsys, "correlator", "--ells", "1,2", "--normalization", "nu", "--symbolic")
    assert json.loads(out)["value"] == [[0, "115/1536"], [2, "-1/128"]]


def test_correlator_connected_at_half(capsys):
    code, out = run(capsys, "correlator", "--ells", "0", "--normalization", "connected", "--nu", "1/2")
    assert decode(json.loads(out)["value"]) == 0


def test_round_trip(capsys):
    _, out = run(capsys, "correlator", "--ells", "1,1,2", "--normalization", "nu")
    assert decode(json.loads(out)["value"]) == nu_correlator([1, 1, 2])
    assert decode(encode(F(-3, 7))) == F(-3, 7)
    assert decode(encode(NuPoly.const(0))) == 0


def test_csv_and_plain(capsys):
    _, out = run(capsys, "correlator", "--ells", "1,1", "--normalization", "nu", "--format", "csv")
    assert out.splitlines() == ["key,normalization,nu,value", '"1,1",nu,symbolic,0:7/32 2:-1/24']
    _, out = run(capsys, "correlator", "--ells", "1,1", "--normalization", "norbury", "--format", "plain")
    assert out.strip().endswith("= 63/512")


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as e:
        main(["correlator", "--ells", "1,x"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["correlator", "--ells", "1,1", "--normalization", "norbury", "--symbolic"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["correlator", "--ells", "1,1", "--nu", "1/2", "--symbolic"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["tau", "--level", "-1"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["bogus"])
    assert e.value.code == 2


def test_stabilization_exit(capsys):
    assert main(["correlator", "--ells", "3,3", "--order", "3"]) == 3
    assert "not certified" in capsys.readouterr().err


def test_table_a2(capsys):
    code, out = run(capsys, "table", "A2", "--max-index", "2", "--diff")
    body = json.loads(out)
    assert code == 0
    assert [r["value"] for r in body["rows"]] == ["63/512", "8625/32768", "125565/131072"]
    assert body["diff"]["mismatches"] == [] and body["diff"]["compared"] == 3


def test_table_b3_row(capsys):
    _, out = run(capsys, "table", "B3", "--max-index", "1")
    row = json.loads(out)["rows"][0]
    assert decode(row["value"]) == (4 * NU * NU - 29) * (12 * NU * NU - 83) * F(1, 384)


def test_table_a4_row(capsys):
    _, out = run(capsys, "table", "A4", "--max-index", "1")
    assert json.loads(out)["rows"][0]["value"] == "4825971/16384"


def test_table_diff_detects_mismatch(capsys, monkeypatch):
    import gbgw.cli as cli
    snap = cli.load_snapshot()
    snap["A2"]["entries"]["1,2"] = "1/2"
    monkeypatch.setattr(cli, "load_snapshot", lambda: snap)
    code, out = run(capsys, "table", "A2", "--max-index", "2", "--diff")
    assert code == 1
    assert json.loads(out)["diff"]["mismatches"][0]["key"] == "1,2"


def test_table_known_discrepancies(capsys, monkeypatch):
    import gbgw.cli as cli
    snap = cli.load_snapshot()
    # shrink the check to one known entry so the test stays fast
    snap["A2"]["entries"]["1,1"] = "1/3"
    snap["A2"]["known_discrepancies"] = {"1,1": {"certified": "63/512", "note": "test"}}
    monkeypatch.setattr(cli, "load_snapshot", lambda: snap)
    code, out = run(capsys, "table", "A2", "--max-index", "1", "--diff")
    assert code == 0 and json.loads(out)["diff"]["known_discrepancies"][0]["key"] == "1,1"
    code, _ = run(capsys, "table", "A2", "--max-index", "1", "--diff", "--strict")
    assert code == 1


def test_snapshot_known_discrepancies_are_certified():
    from gbgw.cli import load_snapshot
    known = load_snapshot()["A4"]["known_discrepancies"]
    assert sorted(known) == ["2,4,4,4", "3,3,4,4", "3,4,4,4", "4,4,4,4"]


def test_tau_command(capsys):
    _, out = run(capsys, "tau", "--level", "3")
    body = json.loads(out)
    terms = {tuple(t["monomial"]): decode(t["coefficient"]) for t in body["terms"]}
    tau = solve_tau(3).poly
    assert terms == {m: v for m, v in tau.items()}
    _, out = run(capsys, "tau", "--level", "3", "--nu", "0", "--log", "--format", "plain")
    assert "t0: 1/16" in out


def test_verify_tricomi(capsys):
    code, out = run(capsys, "verify", "--suite", "tricomi", "--max-g", "4")
    assert code == 0 and json.loads(out)["passed"]


def test_verify_failure_exit(capsys, monkeypatch):
    import gbgw.suites as suites
    monkeypatch.setitem(suites.SUITE_FUNCTIONS, "tricomi", lambda **_: [("forced", False)])
    code, out = run(capsys, "verify", "--suite", "tricomi", "--format", "plain")
    assert code == 1 and "FAIL" in out


def test_out_file(tmp_path, capsys):
    path = tmp_path / "o.json"
    assert main(["correlator", "--ells", "1", "--out", str(path)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(path.read_text())["provenance"] == "closed-form"


def _cli(*argv):
    return subprocess.run([sys.executable, "-m", "gbgw", *argv], capture_output=True, check=True).stdout


def test_deterministic_output():
    args = ["table", "B2", "--max-index", "3", "--diff"]
    first = _cli(*args)
    assert _cli(*args) == first
    assert _cli(*args, "--jobs", "3") == first
