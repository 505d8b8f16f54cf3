"""Model ids, gates, reports and the command-line front end."""

from __future__ import annotations

import json
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tangent_syzygies.api import ModelSpec, compute_table
from tangent_syzygies.cli import main, parse_ints, parse_range
from tangent_syzygies.config import SweepConfig
from tangent_syzygies.report import Report
from tangent_syzygies.suite import (
    GATES,
    SuiteContext,
    gate_adjointness,
    gate_complex,
    gate_exactness,
    gate_theorem1,
    gate_theorem2,
    smallest_good_prime,
    theorem1_expectation,
    theorem2_expectation,
)


@given(st.integers(3, 40))
def test_model_id_roundtrip(g):
    assert ModelSpec.parse(f"tangent-rnc:g={g}").id == f"tangent-rnc:g={g}"
    assert ModelSpec.parse(f"elliptic:d={g}").r == g - 1


def test_model_spec():
    s = ModelSpec.parse("genus2:deg13")
    assert (s.genus, s.r, s.id) == (2, 11, "genus2:deg13")
    with pytest.raises(ValueError):
        ModelSpec.parse("k3:carpet")


def test_sweep_config_validation():
    with pytest.raises(ValueError):
        SweepConfig(g_range=(5, 3))
    with pytest.raises(ValueError):
        SweepConfig(chars=(4,))
    with pytest.raises(ValueError):
        SweepConfig(proxy_primes=(32003,))
    with pytest.raises(ValueError):
        SweepConfig(jobs=0)


def test_range_parsing():
    assert parse_range("3..12") == (3, 12)
    assert parse_range("3-12") == (3, 12)
    assert parse_range("5") == (5, 5)
    assert parse_ints("0,2,3") == (0, 2, 3)


def test_smallest_good_prime():
    assert [smallest_good_prime(g) for g in (3, 4, 5, 7, 9)] == [3, 3, 5, 5, 7]


def test_theorem_expectations():
    # g = 7, b = 2: vanishing for p <= 2 when char = 0 or 2 char >= 9
    assert theorem1_expectation(7, 2, 0) is True
    assert theorem1_expectation(7, 2, 5) is True
    assert theorem1_expectation(7, 2, 3) is False
    assert theorem1_expectation(7, 1, 3) is None
    assert theorem1_expectation(7, 3, 0) is False
    assert theorem2_expectation(9, 3, 3) is None  # 3 < floor((9-1)/2)
    assert theorem2_expectation(9, 3, 5) is True
    assert theorem2_expectation(9, 3, 2) is None


def test_small_gates_pass():
    ctx = SuiteContext(SweepConfig(g_range=(3, 7), chars=(0, 2, 3, 5)))
    for gate in (gate_exactness, gate_adjointness, gate_complex):
        assert gate(ctx).passed


def test_theorem_gates_and_negative_control():
    ctx = SuiteContext(SweepConfig(g_range=(3, 8)))
    assert gate_theorem1(ctx).passed
    assert gate_theorem2(ctx).passed
    inverted = gate_theorem1(ctx, invert=True)
    assert not inverted.passed
    assert inverted.failures and all("expected" in f for f in inverted.failures)


def test_report_deterministic():
    ctx = SuiteContext(SweepConfig(g_range=(3, 6), chars=(0, 3)))
    a = Report.from_gates([gate_theorem1(ctx)])
    b = Report.from_gates([gate_theorem1(SuiteContext(SweepConfig(g_range=(3, 6), chars=(0, 3))))])
    assert a.to_json() == b.to_json()
    assert a.to_csv() == b.to_csv()
    d = json.loads(a.to_json())
    assert d["schema"] == 1 and d["verdict"] == "PASS"
    keys = [(r["model"], r["char"], str(r["g"]), r["p"], r["q"]) for r in d["records"]]
    assert keys == sorted(keys)


def test_parallel_sweep_matches_serial():
    serial = gate_theorem1(SuiteContext(SweepConfig(g_range=(3, 7), chars=(0, 3), jobs=1)))
    parallel = gate_theorem1(SuiteContext(SweepConfig(g_range=(3, 7), chars=(0, 3), jobs=2)))
    assert [r.row()[:7] for r in serial.records] == [r.row()[:7] for r in parallel.records]


def test_gate_registry():
    assert {"exactness", "adjointness", "duality", "hilbert", "numerator", "propagation", "direct_vs_gamma"} <= set(GATES)
    assert {"remark45", "k11", "remark33", "theorem1", "theorem2", "golden", "kappa"} <= set(GATES)


# ---------------------------------------------------------------------------
# CLI


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_cli_betti(capsys):
    code, out, _ = run(capsys, "betti", "--model", "tangent-rnc:g=3", "--char", "5", "--format", "json")
    assert code == 0
    d = json.loads(out)
    assert {(e["p"], e["q"]): e["v"] for e in d["entries"] if e["v"]} == {(0, 0): 1, (1, 3): 1}
    assert d["certification"] == "exact-Fp"


def test_cli_betti_elliptic_pretty(capsys):
    code, out, _ = run(capsys, "betti", "--model", "elliptic", "--d", "9", "--char", "0")
    assert code == 0
    assert "2 |   -   6  81 171 165  81  18   2" in out


def test_cli_precondition_errors(capsys):
    code, _, err = run(capsys, "betti", "--model", "tangent-rnc:g=3", "--char", "2")
    assert code == 2 and "CharTwoUnsupported" in err
    code, _, err = run(capsys, "betti", "--model", "elliptic:d=9", "--char", "5")
    assert code == 2
    code, _, _ = run(capsys, "betti", "--model", "nonsense:x=1")
    assert code == 2
    code, _, _ = run(capsys, "suite", "--gate", "nonsense")
    assert code == 2
    with pytest.raises(SystemExit) as e:
        main(["betti", "--format", "xml"])
    assert e.value.code == 2


def test_cli_maps(capsys):
    code, out, _ = run(capsys, "maps", "--p", "0", "--char", "0")
    assert code == 0 and "Delta_2" in out and "rank 3" in out.splitlines()[1]
    _, out, _ = run(capsys, "maps", "--p", "1", "--char", "3")
    assert "fiber h=1: fails" in out
    _, out, _ = run(capsys, "maps", "--p", "0", "--variant", "carpet", "--char", "5")
    tau_line = next(line for line in out.splitlines() if "tau" in line)
    assert tau_line.split()[-1] == "3"
    _, out, _ = run(capsys, "maps", "--p", "0", "--char", "7", "--triplets")
    assert len(out.splitlines()) > 10


def test_cli_theorem_exit_codes(capsys):
    code, out, _ = run(capsys, "theorem", "T1", "--g", "3..7", "--char", "0,2,3,5")
    assert code == 0 and "PASS" in out
    code, out, _ = run(capsys, "theorem", "T1", "--g", "3..7", "--char", "0,2,3,5", "--invert")
    assert code == 1 and "FAIL" in out and "expected" in out
    code, _, _ = run(capsys, "theorem", "T2", "--g", "3..7", "--char", "0,3,5")
    assert code == 0


def test_cli_suite_gates(capsys, tmp_path):
    code, out, _ = run(capsys, "suite", "--gate", "k11", "--gate", "remark45", "--quick", "--out", str(tmp_path))
    assert code == 0
    assert "k11" in out and "remark45" in out and "FAIL" not in out
    d = json.loads((tmp_path / "suite.json").read_text())
    assert d["verdict"] == "PASS"
    assert (tmp_path / "suite.csv").read_text().startswith("model,g,char,p,q,value,certification,ms")


def test_cli_byte_identical(capsys, tmp_path):
    outs = []
    for k in range(2):
        d = tmp_path / str(k)
        code, out, _ = run(capsys, "sweep", "--model", "tangent-rnc", "--g", "3..5", "--char", "0,7", "--format", "csv", "--out", str(d))
        assert code == 0
        outs.append((out, (d / "sweep.json").read_bytes(), (d / "sweep.csv").read_bytes()))
    assert outs[0] == outs[1]


def test_cli_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "tangent_syzygies", "betti", "--model", "tangent-rnc:g=3", "--char", "2"],
        capture_output=True,
        text=True,
    )
    assert res.returncode == 2


def test_char0_uses_two_primes():
    t = compute_table("tangent-rnc:g=4", 0)
    assert t.certification == "multi-prime-char0" and not t.notes
