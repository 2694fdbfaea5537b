import csv
import io
import json
import math

import pytest

import qbhlab.entanglement
from qbhlab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_ground_state_singlet_point(capsys):
    code, out, _ = run(capsys, "ground-state", "--lambda", "1", "--theta", "0", "--h", "0")
    d = json.loads(out)
    assert code == 0 and d["sz"] == 0 and d["f_s"] == pytest.approx(1.0)
    assert d["entropy"] == pytest.approx(1.584963, abs=1e-6) and d["k"] == pytest.approx(3.0)


def test_ground_state_saturated(capsys):
    code, out, _ = run(capsys, "ground-state", "--lambda", "1", "--theta", "0", "--h", "3")
    d = json.loads(out)
    assert code == 0 and d["sz"] == 2 and d["entropy"] == 0.0 and d["k"] == pytest.approx(1.0)


def test_ground_state_degrees_and_csv(capsys):
    code, out, _ = run(capsys, "ground-state", "--lambda", "1", "--theta-deg", "-45",
                       "--sector", "0", "--format", "csv")
    header, row = rows(out)
    d = dict(zip(header, row))
    assert code == 0 and float(d["entropy"]) == pytest.approx(1.0)
    assert d["multiplicity"] == "2"


def test_ground_state_out_of_range_theta(capsys):
    code, _, err = run(capsys, "ground-state", "--lambda", "1", "--theta", "1.6", "--h", "0")
    assert code == 2 and "theta" in err


@pytest.mark.parametrize("argv", [
    ["ground-state", "--lambda", "2", "--theta", "0"],
    ["ground-state", "--lambda", "1"],
    ["spectrum", "--lambda", "1", "--axis", "h", "--grid", "0:3"],
    ["nonsense"],
])
def test_malformed_flags_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_spectrum_h_axis(capsys):
    code, out, _ = run(capsys, "spectrum", "--lambda", "1", "--axis", "h", "--fixed", "0",
                       "--grid", "0:3:301")
    table = rows(out)
    assert code == 0 and table[0][0] == "h_J1" and table[0][1] == "e1_J1" and len(table) == 302
    by_h = {round(float(r[0]), 9): r for r in table[1:]}
    assert by_h[1.0][-1].startswith("2-") and by_h[2.0][-1].startswith("2-")
    assert by_h[0.5][-1].startswith("1-")
    assert out.endswith("\r\n")


def test_spectrum_single_point(capsys):
    code, out, _ = run(capsys, "spectrum", "--lambda", "1", "--axis", "theta", "--grid", "0.2:0.2:1")
    table = rows(out)
    assert code == 0 and len(table) == 2 and len(table[1]) == 11


def test_number_format(capsys):
    _, out, _ = run(capsys, "spectrum", "--lambda", "1", "--axis", "theta", "--grid", "0:0:1")
    x = rows(out)[1][1]
    mantissa, exp = x.split("e")
    assert len(mantissa.replace("-", "").replace(".", "")) == 15 and exp[0] in "+-"


def test_phase_diagram_single_point(capsys):
    code, out, _ = run(capsys, "phase-diagram", "--lambda", "1", "--theta-grid", "0:0:1",
                       "--h-grid", "1.5:1.5:1")
    table = rows(out)
    assert code == 0 and table[0] == ["theta", "h", "sz", "energy", "degenerate"]
    assert len(table) == 2 and table[1][2] == "1" and table[1][4] == "false"


def test_phase_diagram_negative_lambda_no_sz0(capsys):
    code, out, _ = run(capsys, "phase-diagram", "--lambda", "-1", "--theta-grid", "0.01:1.55:40",
                       "--h-grid", "0:3:40")
    assert code == 0 and all(r[2] != "0" for r in rows(out)[1:])


def test_entanglement_sweep_passes_reference_points(capsys):
    code, out, _ = run(capsys, "entanglement-sweep", "--lambda", "1", "--theta-grid", "-45:0:2", "--deg")
    table = rows(out)
    assert table[0] == ["theta", "entropy", "k", "p0", "ppm", "f_s", "f_t", "is_global_ground"]
    (t0, s0, k0, *_), (t1, s1, k1, *_) = table[1:]
    assert float(t0) == pytest.approx(-math.pi / 4)
    assert float(s0) == pytest.approx(1.0) and float(k0) == pytest.approx(2.0)
    assert float(s1) == pytest.approx(math.log2(3))


def test_entanglement_sweep_negative_lambda_triplet(capsys):
    # at theta -> 0- the S^z=0 ground state is the S=2, m=0 state, whose F_T is 8/9
    _, out, _ = run(capsys, "entanglement-sweep", "--lambda", "-1", "--theta-grid", "-1.55:-0.01:50")
    f_t = [float(r[6]) for r in rows(out)[1:]]
    assert len(f_t) == 50 and min(f_t) >= 8 / 9 and f_t[0] > 0.9999
    assert all(a >= b for a, b in zip(f_t, f_t[1:]))


def test_entanglement_sweep_empty_grid(capsys):
    assert run(capsys, "entanglement-sweep", "--lambda", "1", "--theta-grid", "0:1:0")[0] == 2


def test_hubbard_map(capsys):
    code, out, _ = run(capsys, "hubbard", "map", "--t", "0.1", "--u0", "1", "--u2", "1")
    d = json.loads(out)
    assert code == 0 and d["lambda_out"] == -1
    assert d["theta_out"] == pytest.approx(-0.7853981, abs=1e-7)


def test_hubbard_compare(capsys):
    code, out, _ = run(capsys, "hubbard", "compare", "--t", "0.01", "--u0", "1", "--u2", "1")
    d = json.loads(out)
    assert code == 0 and d["max_deviation"] < 1e-3 and "offset_used" in d


def test_hubbard_spectrum_t0(capsys):
    code, out, _ = run(capsys, "hubbard", "spectrum", "--t", "0", "--u0", "1", "--u2", "1")
    ev = json.loads(out)["eigenvalues"]
    assert code == 0 and len(ev) == 21 and sum(abs(e) < 1e-12 for e in ev) == 9


@pytest.mark.parametrize("action", ["map", "compare"])
def test_hubbard_rejects_nonpositive_u(capsys, action):
    assert run(capsys, "hubbard", action, "--t", "0.1", "--u0", "0", "--u2", "1")[0] == 2
    assert run(capsys, "hubbard", action, "--t", "0.1", "--u0", "1", "--u2", "-1")[0] == 2


def test_validate_fresh_build(capsys):
    code, out, err = run(capsys, "validate", "--samples", "100")
    d = json.loads(out)
    assert code == 0 and d["passed"] and "[PASS] entropy-oracle" in err


def test_validate_detects_entropy_sign_error(capsys, monkeypatch):
    real = qbhlab.entanglement.entropy
    monkeypatch.setattr(qbhlab.entanglement, "entropy", lambda rho: -real(rho))
    code, out, _ = run(capsys, "validate", "--samples", "50")
    failed = [s["name"] for s in json.loads(out)["suites"] if not s["passed"]]
    assert code == 1 and failed == ["entropy-oracle"]


def test_validate_seed_reproducible(capsys):
    a = run(capsys, "validate", "--seed", "42", "--samples", "50")
    b = run(capsys, "validate", "--seed", "42", "--samples", "50")
    assert a == b


def test_output_file_matches_stdout(capsys, tmp_path):
    argv = ["phase-diagram", "--lambda", "1", "--theta-grid", "-1:1:5", "--h-grid", "0:3:5"]
    _, out, _ = run(capsys, *argv)
    path = tmp_path / "pd.csv"
    assert main(argv + ["--output", str(path)]) == 0
    assert path.read_bytes() == out.encode("utf-8")


def test_byte_identical_reruns(capsys, monkeypatch):
    argv = ["phase-diagram", "--lambda", "-1", "--theta-grid", "-1.5:1.5:31", "--h-grid", "0:3:31",
            "--verify", "--seed", "7"]
    monkeypatch.setenv("QBH_THREADS", "1")
    first = run(capsys, *argv)
    monkeypatch.setenv("QBH_THREADS", "8")
    assert run(capsys, *argv) == first
