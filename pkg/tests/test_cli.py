import json

import pytest

from cylroman.cli import main


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:
        code = exc.code
    out = capsys.readouterr()
    return code, out.out, out.err


def machine(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "machine")
    return code, json.loads(out)


def test_words(capsys):
    code, doc = machine(capsys, "words", "--m", "6")
    assert code == 0 and doc["count"] == 848
    code, out, _ = run(capsys, "words", "--m", "2", "--list")
    assert code == 0 and len(out.splitlines()) == 12 and out.splitlines()[1:] == [
        "aa", "ac", "bc", "bd", "ca", "cb", "cc", "cd", "db", "dc", "dd"]


@pytest.mark.parametrize("argv", [
    ("words", "--m", "1"),
    ("gamma", "--m", "3"),
    ("gamma", "--m", "3", "--n", "2"),
    ("recurrence", "--m", "3", "--max-power", "1"),
    ("recurrence", "--variant", "border", "--m", "5"),
    ("loss-verify", "--from", "5", "--to", "30"),
    ("power", "--m", "3", "--threads", "0"),
    ("nonsense",),
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_gamma(capsys):
    assert machine(capsys, "gamma", "--m", "2", "--n", "3")[1]["gamma_R"] == 4
    code, out, _ = run(capsys, "gamma", "--m", "7", "--n", "5")
    assert code == 0 and "= 16" in out


def test_capacity_exit_code(capsys):
    code, _, err = run(capsys, "gamma", "--m", "12", "--n", "5")
    assert code == 3 and "capacity" in err
    code, _, err = run(capsys, "matrix", "--m", "8", "--memory-budget", "64")
    assert code == 3 and "MiB" in err


def test_recurrence(capsys):
    code, doc = machine(capsys, "recurrence", "--m", "3")
    assert code == 0 and (doc["n0"], doc["alpha"], doc["beta"]) == (11, 4, 6)
    code, doc = machine(capsys, "recurrence", "--m", "4", "--variant", "border")
    assert code == 0 and (doc["n0"], doc["alpha"], doc["beta"]) == (30, 1, 1)
    code, doc = machine(capsys, "recurrence", "--m", "4", "--alpha", "5")
    assert (doc["n0"], doc["alpha"], doc["beta"]) == (16, 5, 10)


def test_recurrence_not_found(capsys):
    code, out, _ = run(capsys, "recurrence", "--m", "2", "--max-power", "5")
    assert code == 5 and "recurrence not found" in out


def test_timing_breakdown(capsys):
    _, doc = machine(capsys, "recurrence", "--m", "2")
    assert {"kernel_seconds", "serialize_seconds", "io_seconds", "build_seconds"} <= set(doc["timing"])


def test_machine_format_is_stable(capsys):
    docs = []
    for threads in ("1", "3"):
        _, doc = machine(capsys, "recurrence", "--m", "3", "--threads", threads)
        doc.pop("timing")
        docs.append(json.dumps(doc, sort_keys=True))
    assert docs[0] == docs[1]


def test_warm_cache_reports_zero_products(capsys, tmp_path):
    _, cold = machine(capsys, "recurrence", "--m", "3", "--cache-dir", str(tmp_path))
    _, warm = machine(capsys, "recurrence", "--m", "3", "--cache-dir", str(tmp_path))
    assert cold["operations"]["products"] == 49
    assert warm["operations"] == {"products": 0, "cache_hits": 50}
    assert (tmp_path / "A_pow_50.trpm").exists()


def test_io_error_exit_code(capsys, tmp_path):
    target = tmp_path / "file"
    target.write_text("x")
    code, _, err = run(capsys, "recurrence", "--m", "2", "--cache-dir", str(target))
    assert code == 4
    code, _, _ = run(capsys, "matrix", "--m", "2", "--out", str(tmp_path / "missing" / "a.trpm"))
    assert code == 4


def test_formula(capsys):
    code, doc = machine(capsys, "formula", "--m", "2", "--n", "7")
    assert code == 0 and doc["value"] == {"n": 7, "gamma_R": 8}
    assert doc["verification"]["ceiling_form_matches_recurrence_n_le_200"]
    for n in range(3, 21):
        _, f = machine(capsys, "formula", "--m", "2", "--n", str(n))
        _, g = machine(capsys, "gamma", "--m", "2", "--n", str(n))
        assert f["value"]["gamma_R"] == g["gamma_R"]


def test_bound(capsys):
    code, out, _ = run(capsys, "bound", "--m", "10", "--n", "10")
    assert code == 0 and "44" in out and "exact" in out
    _, doc = machine(capsys, "bound", "--m", "15", "--n", "13")
    assert doc["lower_bound"] == 84 and not doc["exact"]


def test_loss_verify_reports_the_n11_mismatch(capsys):
    code, doc = machine(capsys, "loss-verify", "--from", "10", "--to", "30")
    assert code == 1
    assert doc["mismatches"] == [11] and doc["bound_holds_for_all_n_from"] == 10
    assert (doc["recurrence"]["n0"], doc["recurrence"]["alpha"], doc["recurrence"]["beta"]) == (30, 1, 1)


def test_oracle(capsys):
    code, doc = machine(capsys, "oracle", "--m", "3", "--n", "4")
    assert code == 0 and doc["agree"] and doc["brute_force"] == 6
    code, doc = machine(capsys, "oracle", "--m", "3", "--n", "5", "--mode", "dp")
    assert code == 0 and doc["agree"]
    code, doc = machine(capsys, "oracle", "--variant", "border", "--n", "11")
    assert code == 0 and doc["brute_force"] == doc["transfer_matrix"] == 12
    code, doc = machine(capsys, "oracle", "--m", "4", "--n", "5", "--certificate")
    assert doc["weight"] == 10 and doc["valid"] and doc["grid"][0] == "20100"


def test_matrix_and_power_outputs(capsys, tmp_path):
    from cylroman.tropical import read_matrix, trop_power
    from cylroman.solver import transfer_matrix

    out = tmp_path / "a.trpm"
    code, doc = machine(capsys, "matrix", "--m", "3", "--out", str(out))
    assert code == 0 and doc["dim"] == 33 and read_matrix(out) == transfer_matrix(3)
    assert (tmp_path / "a.words.txt").read_text().splitlines()[0] == "aaa"
    code, doc = machine(capsys, "power", "--m", "3", "--n", "6", "--out", str(tmp_path / "p.trpm"))
    assert code == 0 and doc["diagonal_minima"]["6"] == 10
    assert read_matrix(tmp_path / "p.trpm") == trop_power(transfer_matrix(3), 6)


@pytest.mark.slow
def test_m7_formula_and_m8_gamma(capsys):
    code, doc = machine(capsys, "formula", "--m", "7", "--n", "7")
    assert code == 0 and doc["value"]["gamma_R"] == 24
    assert doc["formula"]["exceptions"] == {"6": 20}
    code, doc = machine(capsys, "gamma", "--m", "8", "--n", "5")
    assert code == 0 and doc["gamma_R"] == 18


@pytest.mark.large
def test_m9_formula(capsys):
    code, doc = machine(capsys, "formula", "--m", "9", "--n", "12", "--memory-budget", "8192")
    assert code == 0 and doc["value"]["gamma_R"] == 50
