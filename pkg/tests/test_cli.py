import json

import pytest

from conftest import DATA, fixture_path
from ggr import dsl
from ggr.cli import EXIT_FAIL, EXIT_INPUT, EXIT_OK, EXIT_RESOURCE, build_parser, main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_check_exit_codes(capsys, tmp_path):
    code, out, _ = run(capsys, "check", fixture_path("semidirect"))
    assert code == EXIT_OK and "PASS" in out
    code, out, _ = run(capsys, "check", fixture_path("broken_distributivity"))
    assert code == EXIT_FAIL and "FAIL" in out
    code, _, err = run(capsys, "check", tmp_path / "missing.ggr")
    assert code == EXIT_INPUT and "error" in err


def test_check_malformed_is_input_error(capsys):
    code, _, err = run(capsys, "check", DATA / "malformed" / "arity.ggr")
    assert code == EXIT_INPUT
    assert "line" in err and "column" in err


def test_check_several_files(capsys):
    code, out, _ = run(capsys, "check", "--json", fixture_path("sd3"), fixture_path("broken_distributivity"))
    assert code == EXIT_FAIL
    results = json.loads(out)
    assert [r["passed"] for r in results] == [True, False]


def test_radical_sd3(capsys):
    code, out, _ = run(capsys, "radical", "--require-agreement", fixture_path("sd3"))
    assert code == EXIT_OK
    assert "J = {0, i}" in out
    code, out, _ = run(capsys, "radical", "--json", fixture_path("sd3"))
    payload = json.loads(out)
    assert payload["J"] == ["0", "i"]
    assert all(v["agree"] for v in payload["agreements"].values())


def test_radical_on_gamma_ring_fixture(capsys):
    code, out, _ = run(capsys, "radical", "--json", fixture_path("matrix_m2f2"))
    assert code == EXIT_OK
    assert json.loads(out)["J"] == ["0"]


def test_radical_json_is_deterministic(capsys):
    outs = [run(capsys, "radical", "--json", fixture_path("perf16"))[1] for _ in range(2)]
    assert outs[0] == outs[1]


def test_radical_resource_bound(capsys):
    code, _, err = run(capsys, "radical", "--max-size", "2", fixture_path("sd3"))
    assert code == EXIT_RESOURCE and "exceeds" in err
    code, _, _ = run(capsys, "radical", "--max-lattice", "2", fixture_path("matrix_m2f2"))
    assert code == EXIT_RESOURCE


def test_env_sets_max_size(capsys, monkeypatch):
    monkeypatch.setenv("GGR_MAX_SIZE", "2")
    code, _, _ = run(capsys, "radical", fixture_path("sd3"))
    assert code == EXIT_RESOURCE
    assert build_parser().parse_args(["check", "x"]).max_size == 2


def test_bad_arguments(capsys):
    assert run(capsys, "radical")[0] == EXIT_INPUT
    assert run(capsys, "frobnicate")[0] == EXIT_INPUT
    assert run(capsys, "check", "--max-size", "0", fixture_path("sd3"))[0] == EXIT_INPUT


def test_radical_of_broken_file_fails(capsys):
    code, _, err = run(capsys, "radical", fixture_path("broken_distributivity"))
    assert code == EXIT_FAIL and err


def test_linearize_sd3(capsys):
    code, out, _ = run(capsys, "linearize", fixture_path("sd3"))
    assert code == EXIT_OK
    spec = dsl.parse(out)
    assert spec.kind == "gammaring"
    elab = dsl.elaborate(spec)
    assert elab.passed and len(elab.structure.ring.R) == 4


def test_ideals_sd3(capsys):
    code, out, _ = run(capsys, "ideals", fixture_path("sd3"))
    assert code == EXIT_OK
    payload = json.loads(out)
    lattice = [I["elements"] for I in payload["right_ideals"]]
    assert lattice == [["0"], ["0", "i"], ["0", "i", "s"]]
    middle = payload["right_ideals"][1]
    assert middle["two_sided"] and middle["modular"] and middle["maximal"]
    assert payload["covers"] == [[1], [2], []]


def test_enumerate_trivial_corpus(capsys, tmp_path):
    code, out, _ = run(capsys, "enumerate", "--max-size", "1", "--json", "--out", tmp_path / "cx")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["anneids"] == 1 and payload["counterexamples"] == 0
    assert not (tmp_path / "cx").exists()


def test_enumerate_small_corpus_is_clean(capsys, tmp_path):
    code, out, _ = run(capsys, "enumerate", "--max-size", "3", "--strict", "--out", tmp_path / "cx")
    assert code == EXIT_OK
    assert "0 counterexamples" in out


def test_module_entry_point():
    import subprocess
    import sys

    proc = subprocess.run([sys.executable, "-m", "ggr", "check", str(fixture_path("sd3"))],
                          capture_output=True, text=True)
    assert proc.returncode == EXIT_OK
    assert "PASS" in proc.stdout


@pytest.mark.parametrize("command", ["radical", "linearize", "ideals"])
def test_missing_file_everywhere(capsys, tmp_path, command):
    assert run(capsys, command, tmp_path / "nope.ggr")[0] == EXIT_INPUT
