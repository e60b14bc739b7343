import io
import json
import subprocess
import sys

import pytest

from framelab import cli
from framelab.formats import digest_of


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), stdout=out)
    text = out.getvalue()
    return code, (json.loads(text) if text.strip() else None), text


@pytest.mark.parametrize("argv,code,decision", [
    (["cp", "johnsex5"], 1, "FAIL"),
    (["cp", "full_spark_3in2"], 0, "PASS"),
    (["pr-vectors", "full_spark_3in2"], 0, "PASS_exact"),
    (["pr-vectors", "two_in_r2"], 1, "FAIL"),
    (["spark", "six_in_r3"], 1, "FAIL"),
    (["deficiency", "two_in_r2"], 1, "FAIL"),
    (["analyze", "full_spark_3in2"], 0, "OK"),
    (["hyperplanes", "johnsex5"], 0, "PASS"),
    (["augment", "two_in_r2", "--seed", "7"], 0, "PASS"),
    (["pr-subspaces", "johnsex_subspaces", "--budget", "30"], 3, "PASS_budgeted"),
    (["pr-subspaces", "johnsex_subspaces", "--operator", "johnsex2_operator", "--budget", "30"], 1, "FAIL"),
    (["norm-retrieval", "two_in_r2"], 0, "PASS_exact"),
    (["direct-sum", "two_in_r2", "full_spark_3in2"], 1, "PREMISE_FAILED"),
    (["naimark", "two_in_r2"], 0, "PASS"),
    (["naimark", "full_spark_3in2"], 2, "ERROR"),
    (["cp", "does/not/exist.json"], 2, "ERROR"),
    (["fsp-project", "six_in_r3", "--rank", "2"], 2, "ERROR"),
])
def test_exit_codes(argv, code, decision):
    got, report, _ = run(*argv)
    assert got == code and report["decision"] == decision and report["exit_code"] == code


def test_usage_errors_exit_2(capsys):
    assert cli.main(["no-such-command"]) == 2
    assert cli.main(["fsp-project", "johnsex5"]) == 2  # --rank missing


def test_report_shape():
    code, report, text = run("pr-vectors", "two_in_r2")
    assert set(report) == {"command", "seed", "input", "input_digest", "arithmetic_mode", "decision", "result",
                           "witness", "exit_code"}
    assert report["input_digest"] == digest_of(report["input"])
    assert "\n" not in text.strip()
    assert report["witness"]["partition"]["verdict"] == "BothDeficient"


def test_pretty_and_timing():
    _, report, text = run("cp", "johnsex5", "--pretty", "--timing")
    assert text.startswith("{\n") and report["timing_seconds"] >= 0


def test_parse_error_report(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("1 2\n3 oops\n")
    code, report, _ = run("cp", str(bad))
    assert code == 2 and "line 2" in report["result"]["error"]


def test_text_input_and_mode_flags(tmp_path):
    p = tmp_path / "m.txt"
    p.write_text("1 0\n0 1\n1 1\n")
    code, report, _ = run("cp", str(p))
    assert code == 0 and report["arithmetic_mode"] == "float"
    # small-denominator floats are ranked exactly
    assert report["result"]["certificate"]["arithmetic_mode"] == "exact"
    _, report, _ = run("analyze", str(p), "--exact")
    assert report["arithmetic_mode"] == "exact" and report["result"]["parseval"] is False


def test_reconstruct_demo():
    code, report, _ = run("reconstruct-demo", "--samples", "50", "--seed", "1")
    assert code == 0 and report["result"]["max_error"] <= 1e-8
    code, report, _ = run("reconstruct-demo", "--x", "0", "1", "2")
    assert report["result"]["examples"][0]["branch"] == "alpha1_zero"


def test_fixture_suite_passes():
    code, report, _ = run("paper-suite", "--budget", "40")
    assert code == 0
    assert all(row["ok"] for row in report["result"]["checks"])


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "framelab.cli", "cp", "johnsex5"], capture_output=True, text=True)
    assert proc.returncode == 1
    assert json.loads(proc.stdout)["decision"] == "FAIL"


@pytest.mark.parametrize("argv", [
    ["cp", "johnsex5"],
    ["cp", "johnsex5", "--float"],
    ["pr-subspaces", "johnsex_subspaces", "--budget", "5"],
    ["analyze", "full_spark_3in2", "--exact"],
])
def test_echoed_input_round_trips(argv):
    from framelab.formats import parse_text

    _, report, _ = run(*argv)
    again = parse_text(json.dumps(report["input"]))
    assert again.digest == report["input_digest"]
