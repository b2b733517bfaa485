import csv
import io
import json
import math
import subprocess
import sys

import pytest

from growthpmp import Params, __version__, cost, synthesize
from growthpmp import serialize as ser
from growthpmp.cli import SWEEP_FIELDS, SweepSpec, dispatch, run_sweep
from growthpmp.pmp import build_certificate

FP2_C = ["--kind", "fp2", "--lambda", "1", "--a", "2", "--t0", "0", "--T", "2", "--x0", "0"]
FP1_B = ["--kind", "fp1", "--lambda", "1", "--a", "2", "--t0", "0", "--T", "1", "--x0", "0"]


def run(capsys, *argv):
    code = dispatch(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


# -- synth --------------------------------------------------------------------


def test_synth_case_c(capsys):
    code, out, _ = run(capsys, "synth", *FP2_C)
    doc = json.loads(out)
    assert code == 0
    assert doc["case"] == "FP2_c" and doc["alpha1"] == 0.5
    assert doc["version"] == f"growthpmp {__version__}"
    assert doc["process"]["params"]["lambda"] == 1.0


def test_synth_csv(capsys):
    code, out, _ = run(capsys, "synth", *FP1_B, "--format", "csv")
    table = rows(out)
    assert code == 0 and list(table[0]) == ["t", "x1", "x2", "u"]
    assert float(table[-1]["x2"]) == pytest.approx(synthesize(Params("fp1", 1, 2, 0, 1, 0)).cost)


def test_synth_invalid_params_exit_3(capsys):
    code, _, err = run(capsys, "synth", "--kind", "fp1", "--lambda", "2", "--a", "1", "--T", "1")
    assert code == 3 and "a must exceed lambda" in err


@pytest.mark.parametrize("argv", [
    ["synth", "--kind", "fp1", "--lambda", "1"],
    ["synth", *FP1_B, "--bogus"],
    ["frobnicate"],
    ["synth", "--kind", "fp9", "--lambda", "1", "--a", "2", "--T", "1"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and "usage" in err and out == ""


def test_full_precision_floats(capsys):
    _, out, _ = run(capsys, "synth", *FP2_C)
    doc = json.loads(out)
    assert doc["rho"] == math.log(2.0)
    assert "0.6931471805599453" in out


# -- certify ------------------------------------------------------------------


def test_certify_fp1_case_b(capsys):
    code, out, _ = run(capsys, "certify", *FP1_B)
    rep = json.loads(out)["report"]
    assert code == 0 and rep["pass"]
    for key in ("res_support", "res_selection", "res_adjoint", "res_transversality",
                "res_maximum"):
        assert rep[key] <= 1e-9


def test_certify_case_c_fails(capsys):
    code, out, _ = run(capsys, "certify", *FP2_C)
    doc = json.loads(out)
    assert code == 1 and doc["report"]["pass"] is False
    assert doc["certificate"]["fit_ok"] is False


def test_synth_certify_round_trip(capsys, tmp_path):
    path = tmp_path / "s.json"
    assert run(capsys, "synth", *FP1_B, "--out", str(path))[0] == 0
    code, out, _ = run(capsys, "certify", "--kind", "fp1", "--in", str(path))
    doc = json.loads(out)
    original = synthesize(Params("fp1", 1, 2, 0, 1, 0)).cost
    assert code == 0 and abs(doc["cost"] - original) <= 1e-12


def test_certify_missing_input_file(capsys, tmp_path):
    code, _, err = run(capsys, "certify", "--kind", "fp1", "--in", str(tmp_path / "nope.json"))
    assert code == 2 and "cannot read" in err


def test_certify_csv(capsys):
    code, out, _ = run(capsys, "certify", *FP1_B, "--format", "csv")
    table = rows(out)
    assert code == 0 and table[0]["pass"] == "True"


# -- dp / compete / preflight -------------------------------------------------


def test_dp_json(capsys):
    code, out, _ = run(capsys, "dp", *FP1_B, "--nt", "200", "--nx", "401")
    doc = json.loads(out)
    assert code == 0 and abs(doc["gap"]) <= 1e-2
    assert doc["config"]["nt"] == 200 and doc["version"].startswith("growthpmp")


def test_dp_csv(capsys):
    code, out, _ = run(capsys, "dp", *FP1_B, "--nt", "10", "--nx", "21", "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "t,x,value"
    assert len(out.splitlines()) == 1 + 11 * 21


def test_compete_reports_gap(capsys):
    code, out, _ = run(capsys, "compete", *FP2_C)
    doc = json.loads(out)
    assert code == 0
    assert doc["ud_at_alpha1"] == pytest.approx(-0.19294453028457123, abs=1e-15)
    assert doc["ubd_min"]["cost"] < doc["ud_at_alpha1"]
    assert doc["ubd_gap"] == pytest.approx(doc["ubd_min"]["cost"] - doc["ud_at_alpha1"])


def test_preflight_pass(capsys):
    code, out, _ = run(capsys, "preflight", *FP1_B)
    doc = json.loads(out)
    assert code == 0 and doc["pass"] and doc["growth_ratio"] <= 3.0


@pytest.mark.parametrize("argv", [
    ["--kind", "fp1", "--lambda", "1", "--a", "1", "--T", "1"],
    ["--kind", "fp1", "--lambda", "1", "--a", "2", "--t0", "1", "--T", "1"],
    ["--kind", "fp2", "--lambda", "1", "--a", "2", "--T", "1", "--x0", "1.5"],
])
def test_preflight_invalid_exit_3(capsys, argv):
    code, out, _ = run(capsys, "preflight", *argv)
    assert code == 3 and json.loads(out)["params_ok"] is False


# -- sweep --------------------------------------------------------------------


def test_sweep_grid_cardinality_and_header(capsys):
    code, out, _ = run(capsys, "sweep", "--kind", "fp2", "--lambda", "1", "--a", "2",
                       "--range", "T=0.5:2:3", "--range", "x0=-1:0.5:3")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == ",".join(SWEEP_FIELDS)
    assert len(lines) == 10


def test_sweep_case_b_row(capsys):
    _, out, _ = run(capsys, "sweep", "--kind", "fp2", "--lambda", "1", "--a", "2",
                    "--T", "1", "--range", "x0=0:1:3")
    first = rows(out)[0]
    assert first["case"] == "FP2_b" and float(first["x0"]) == 0.0


def test_sweep_marks_invalid_points(capsys):
    _, out, _ = run(capsys, "sweep", "--kind", "fp2", "--lambda", "1", "--a", "2", "--T", "1",
                    "--range", "x0=0:2:3", "--with-dp", "--nt", "20", "--nx", "41")
    table = rows(out)
    assert [r["status"] for r in table] == ["ok", "ok", "invalid"]
    assert table[2]["cost_analytic"] == "" and table[0]["cost_dp"] != ""


def test_sweep_continuous_across_short_long_boundary():
    spec = SweepSpec("fp2", {"lambda": 1.0, "a": 2.0, "t0": 0.0, "T": None, "x0": 0.0},
                     {"T": (0.6, 0.8, 201)})
    table = rows(run_sweep(spec))
    cases = [r["case"] for r in table]
    assert "FP2_a" in cases and "FP2_b" in cases
    costs = [float(r["cost_analytic"]) for r in table]
    step = 0.2 / 200
    assert max(abs(b - a) for a, b in zip(costs, costs[1:])) <= 2 * step


def test_sweep_deterministic_under_parallelism():
    base = {"lambda": 1.0, "a": 2.0, "t0": 0.0, "T": 2.0, "x0": 0.0}
    kw = dict(ranges={"x0": (-1.0, 1.0, 4), "a": (1.5, 3.0, 2)}, with_dp=True, with_cert=True,
              nt=40, nx=81)
    serial = run_sweep(SweepSpec("fp2", base, jobs=1, **kw))
    parallel = run_sweep(SweepSpec("fp2", base, jobs=3, **kw))
    assert serial == parallel


def test_sweep_unwritable_output(capsys, tmp_path):
    code, _, err = run(capsys, "sweep", *FP1_B, "--out", str(tmp_path / "no" / "x.csv"))
    assert code == 1 and "cannot write" in err


def test_sweep_bad_range(capsys):
    code, _, err = run(capsys, "sweep", *FP1_B, "--range", "mu=0:1:3")
    assert code == 2 and "--range" in err


def test_sweep_json_rows(capsys):
    _, out, _ = run(capsys, "sweep", *FP1_B, "--format", "json")
    doc = json.loads(out)
    assert doc["rows"][0]["case"] == "FP1_B" and "version" in doc


def test_identical_invocations_identical_output(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        run(capsys, "dp", *FP2_C, "--nt", "50", "--nx", "101", "--out", str(path))
    assert a.read_bytes() == b.read_bytes()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "growthpmp", "--version"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and __version__ in proc.stdout


# -- serialization ------------------------------------------------------------


def test_process_round_trip(fp2_c):
    proc = synthesize(fp2_c).process
    back = ser.process_from_doc(json.loads(ser.dumps(ser.process_to_doc(proc))))
    assert back == proc and cost(back) == cost(proc)
    assert back.params == proc.params


def test_certificate_round_trip(fp2_c):
    r = synthesize(fp2_c)
    cert = build_certificate(fp2_c, r, sample_count=201, grid_step=0.1)
    back = ser.certificate_from_doc(json.loads(ser.dumps(ser.certificate_to_doc(cert))))
    assert back == cert


def test_malformed_documents():
    from growthpmp import InvalidInput

    with pytest.raises(InvalidInput):
        ser.process_from_doc({"params": {}})
    with pytest.raises(InvalidInput):
        ser.certificate_from_doc({"gamma": 1.0})
