import io
import json
import math
import subprocess
import sys

import pytest

from orthocover import cli
from orthocover.covering2d import COVERING_BOUND


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_density3d_json():
    code, out, _ = run("density3d", "--family", "3,6", "--p", "7", "--case", "a1a2",
                       "--param", "0.3324288", "--format", "json")
    assert code == 0
    rec = json.loads(out)
    assert rec["density"] == pytest.approx(1.27297329, abs=1e-6)
    assert set(rec) == {"p", "q", "r", "case", "param", "s", "h", "horoball_volume",
                        "hyperball_volume", "cell_volume", "density", "covering",
                        "uncovered_edges"}
    assert rec["covering"] is True


def test_density2d():
    code, out, _ = run("density2d", "--type", "1", "--a", "0.7", "--t", "0.5", "--format", "json")
    rec = json.loads(out)
    assert code == 0
    assert math.isfinite(rec["density"]) and rec["covering"]


def test_noncovering_case_exit_2():
    code, out, err = run("density3d", "--family", "3,6", "--p", "7", "--case", "a0a2",
                         "--param", "0.5")
    assert code == 2
    assert "witness" in err


@pytest.mark.parametrize("argv,needle", [
    (["density3d", "--family", "3,6", "--p", "6", "--case", "a1a2", "--param", "0.3"], "p >= 7"),
    (["density3d", "--family", "4,4", "--p", "4", "--case", "a2p2", "--param", "0.3"], "p >= 5"),
    (["density3d", "--family", "3,6", "--p", "6.5", "--case", "a1a2", "--param", "0.3"],
     "allow-nonextendable"),
    (["density3d", "--family", "3,6", "--p", "7", "--case", "a1a2", "--param", "1.5"], "[0, 1]"),
    (["density2d", "--type", "2", "--a", "0.4", "--t", "0.5"], "type 1 regime"),
    (["density2d", "--type", "1", "--a", "1.2", "--t", "0.5"], "(0, 1)"),
    (["table", "--family", "5,5"], "no printed table"),
])
def test_usage_errors(argv, needle):
    code, _, err = run(*argv)
    assert code == 1
    assert needle in err


def test_bad_flag_is_usage_error(capsys):
    assert cli.main(["density3d", "--family", "x"]) == 1


def test_real_p_flagged():
    code, out, _ = run("density3d", "--family", "3,6", "--p", "6.46", "--case", "a1a2",
                       "--param", "0.3325", "--allow-nonextendable", "--format", "json")
    assert code == 0
    assert json.loads(out)["locally_optimal_only"] is True


def test_table_csv():
    code, out, _ = run("table", "--family", "3,6", "--format", "csv")
    assert code == 0
    assert "\r" not in out
    lines = out.strip("\n").split("\n")
    assert lines[0] == "p,case,density,param"
    rows = [l.split(",") for l in lines[1:]]
    assert [r[0] for r in rows] == ["7", "8", "9"]
    expected = [(1.27297329, 0.3324288), (1.288832, 0.3337034), (1.3065421, 0.3358650)]
    for r, (d, u) in zip(rows, expected):
        assert float(r[2]) == pytest.approx(d, abs=1e-5)
        assert float(r[3]) == pytest.approx(u, abs=2e-4)


def test_sweep_2d_csv_format_and_determinism():
    argv = ["sweep", "--dimension", "2", "--type", "1", "--t", "0.5",
            "--start", "0.001", "--stop", "0.999", "--step", "0.001"]
    code, out, _ = run(*argv)
    assert code == 0
    assert out == run(*argv)[1]
    assert out == run(*argv, "--workers", "2")[1]
    lines = out.split("\n")
    assert lines[0] == "type,a,t,density,valid" and lines[-1] == ""
    rows = [l.split(",") for l in lines[1:-1]]
    assert len(rows) == 999
    # 17 significant digits, '.' decimal
    assert rows[1][1] == format(0.002, ".17g")
    dens = [float(r[3]) for r in rows]
    assert all(d > COVERING_BOUND for d in dens)
    assert all(r[4] == "true" for r in rows)


def test_sweep_3d_minimum():
    code, out, _ = run("sweep", "--dimension", "3", "--family", "3,6", "--p", "7", "--case",
                       "a1a2", "--start", "0", "--stop", "1", "--step", "0.01")
    assert code == 0
    rows = [l.split(",") for l in out.strip().split("\n")[1:]]
    valid = [(float(r[2]), float(r[1])) for r in rows if r[3] == "true"]
    assert min(valid)[1] == pytest.approx(0.332, abs=0.011)


def test_sweep_real_p_minimum():
    code, out, _ = run("sweep", "--dimension", "3", "--family", "3,6", "--case", "a1a2",
                       "--allow-nonextendable", "--start", "6.43", "--stop", "6.49",
                       "--step", "0.01")
    assert code == 0
    rows = [l.split(",") for l in out.strip().split("\n")[1:]]
    best = min(rows, key=lambda r: float(r[2]))
    assert float(best[0]) == pytest.approx(6.46, abs=1e-9)


def test_sweep_empty_range():
    assert run("sweep", "--dimension", "2", "--type", "1", "--t", "0.5",
               "--start", "0.5", "--stop", "0.1", "--step", "0.1")[0] == 1


def test_verify_small():
    code, out, err = run("verify", "--samples", "200000", "--seed", "1", "--format", "csv")
    lines = out.strip().split("\n")
    assert lines[0].startswith("quantity,closed_form,monte_carlo,stderr,z,within_3sigma")
    assert len(lines) == 7
    assert code == (0 if all(l.endswith("true") for l in lines[1:]) else 2)


def test_refute():
    code, out, _ = run("refute", "--family", "6,3", "--p", "4", "--case", "a0p0",
                       "--format", "json")
    assert code == 0
    rec = json.loads(out)
    assert rec["all_refuted"] and rec["tangent_everywhere"]


def test_optimize_commands():
    code, out, _ = run("optimize", "--family", "4,4", "--p", "5", "--case", "a2p2",
                       "--format", "json")
    assert code == 0
    assert json.loads(out)["density"] == pytest.approx(1.8383911, abs=1e-5)
    code, out, _ = run("optimize2d", "--type", "2", "--a", "0.001", "--format", "json")
    rec = json.loads(out)
    assert code == 0 and rec["t"] == pytest.approx(1.142, abs=1e-2)


@pytest.mark.parametrize("argv", [
    ["density3d", "--family", "3,6", "--p", "7.0", "--case", "a1a2", "--param", "0.25",
     "--format", "json"],
    ["sweep", "--dimension", "2", "--type", "1", "--t", "0.5", "--start", "0.1", "--stop",
     "0.9", "--step", "0.1", "--workers", "2"],
    ["density3d", "--family", "3,6", "--p", "6.5", "--case", "a1a2", "--param", "0.1",
     "--allow-nonextendable"],
    ["verify", "--seed", "3", "--samples", "1000"],
])
def test_runspec_round_trip(argv):
    spec = cli.parse(argv)
    assert cli.parse(spec.to_argv()) == spec


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "orthocover", "density2d", "--type", "1",
                          "--a", "0.7", "--t", "0.5", "--format", "csv"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.startswith("type,a,t,")
