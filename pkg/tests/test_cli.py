import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from fredholm_pairs.cli import run

GOLDEN = Path(__file__).parent / "golden"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_golden_analyze_pair():
    code, out, err = call("analyze-pair", "--input", GOLDEN / "pair_identity.json")
    assert code == 0 and err == ""
    assert out == (GOLDEN / "analyze_pair.expected.json").read_text()
    an = json.loads(out)["result"]["analysis"]
    assert (an["a"], an["b"], an["c"], an["d"], an["index"]) == (0, 0, 0, 0, 0)


def test_golden_analyze_chain():
    code, out, _ = call("analyze-chain", "--input", GOLDEN / "chain_exact.json")
    assert code == 0
    assert out == (GOLDEN / "analyze_chain.expected.json").read_text()
    report = json.loads(out)
    assert report["ok"] and report["result"]["analysis"]["index"] == 0


def test_golden_malformed_entries():
    code, out, err = call("analyze-pair", "--input", GOLDEN / "pair_malformed.json")
    assert code == 2 and out == ""
    assert err == (GOLDEN / "pair_malformed.expected.stderr").read_text()
    assert "$.S.entries[1]" in err


def test_inconsistent_fixture_exits_3():
    code, out, err = call("analyze-pair", "--input", GOLDEN / "pair_inconsistent.json")
    assert code == 3
    assert json.loads(out)["ok"] is False
    assert "check failed: product-zero decomposition" in err


def test_report_contents():
    _, out, _ = call("analyze-pair", "--input", GOLDEN / "pair_identity.json", "--tol", "1e-8")
    report = json.loads(out)
    assert report["version"] == "0.1.0"
    assert report["tolerance"] == {"rank_rtol": 1e-8, "residual_atol": 1e-9}
    assert all({"name", "passed", "residual"} <= set(c) for c in report["checks"])


def test_byte_identical_runs(tmp_path):
    pair = GOLDEN / "pair_identity.json"
    outs = [call("perturb-pair", "--input", pair, "--seed", 11, "--trials", 20, "--mode", "compact-analog")[1] for _ in range(2)]
    assert outs[0] == outs[1]
    assert json.loads(outs[0])["result"]["summary"]["all_index_preserved"]


def test_output_file_and_text_format(tmp_path):
    target = tmp_path / "r.txt"
    code, out, _ = call("analyze-chain", "--input", GOLDEN / "chain_exact.json", "--format", "text", "--output", target)
    assert code == 0 and out == ""
    text = target.read_text()
    assert "analysis.index: 0" in text and "[PASS]" in text and text.rstrip().endswith("ok")


@pytest.mark.parametrize(
    "argv",
    [
        ["perturb-pair", "--input", GOLDEN / "pair_identity.json"],
        ["analyze-pair"],
        ["analyze-pair", "--input", GOLDEN / "missing.json"],
        ["probe", "--n-range", "5:2"],
        ["probe", "--n-range", "x"],
        ["perturb-chain", "--input", GOLDEN / "chain_exact.json", "--seed", 1, "--epsilon", -1],
        ["analyze-chain", "--input", GOLDEN / "pair_identity.json"],
    ],
)
def test_invalid_input_exits_2(argv):
    code, out, err = call(*argv)
    assert code == 2 and out == "" and err.startswith("error:")


def test_nonfinite_exits_2(tmp_path):
    f = tmp_path / "nan.json"
    f.write_text('{"S": {"rows": 1, "cols": 1, "entries": [[NaN]]}, "T": {"rows": 1, "cols": 1, "entries": [[0]]}}')
    code, _, err = call("analyze-pair", "--input", f)
    assert code == 2 and "$.S.entries[0][0]" in err


def test_perturb_chain():
    code, out, _ = call("perturb-chain", "--input", GOLDEN / "chain_exact.json", "--seed", 3, "--trials", 10, "--epsilon", 0.05)
    assert code == 0
    assert json.loads(out)["result"]["kind"] == "chain"


def test_probe():
    code, out, _ = call("probe", "--family", "right-shift", "--shape", "rect-up", "--n-range", "1:40")
    assert code == 0
    res = json.loads(out)["result"]
    assert res["stabilized"] and res["limits"] == {"a": 0, "b": 0, "c": 1, "d": 0, "index": -1}
    assert len(res["per_n"]) == 40


def test_probe_square_caveat():
    _, out, _ = call("probe", "--family", "right-shift", "--n-range", "1:10")
    assert any("square truncation" in c for c in json.loads(out)["result"]["caveats"])


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "fredholm_pairs", "analyze-pair", "--input", str(GOLDEN / "pair_identity.json")],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout == (GOLDEN / "analyze_pair.expected.json").read_text()
