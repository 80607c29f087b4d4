import io
import json
import subprocess
import sys

import pytest

from maass import cli


def run(argv, monkeypatch=None):
    out = io.StringIO()
    code = cli.main(argv, out=out)
    return code, out.getvalue()


def run_proc(args, cwd, env=None):
    return subprocess.run([sys.executable, "-m", "maass", *args], cwd=cwd, env=env,
                          capture_output=True, text=True)


def test_fnv1a_reference_values():
    assert cli.fnv1a_64(b"") == 0xCBF29CE484222325
    assert cli.fnv1a_64(b"a") == 0xAF63DC4C8601EC8C


def test_compute_siegel_matches_library(tmp_path):
    code, text = run(["compute", "siegel2", "--weight", "4", "--bound", "1",
                      "--cache-dir", str(tmp_path)])
    data = json.loads(text)
    assert code == 0 and data["weight"] == 4
    assert [["1", "1", "1"], "13440/1"] in data["coeffs"]


def test_cache_transparency(tmp_path):
    args = ["compute", "fourier-jacobi", "--weight", "6", "--index", "2", "--nmax", "3"]
    _, uncached = run(args + ["--no-cache"])
    _, first = run(args + ["--cache-dir", str(tmp_path)])
    _, second = run(args + ["--cache-dir", str(tmp_path)])
    assert uncached == first == second
    assert len(list(tmp_path.glob("*.json"))) == 1


def test_corrupted_cache_is_recomputed(tmp_path):
    args = ["compute", "siegel2", "--weight", "4", "--bound", "2", "--cache-dir", str(tmp_path)]
    _, good = run(args)
    entry = next(tmp_path.glob("*.json"))
    data = json.loads(entry.read_text())
    data["payload"] = data["payload"].replace("13440/1", "13441/1")
    entry.write_text(json.dumps(data))
    _, again = run(args)
    assert again == good
    assert cli.ExpansionCache(tmp_path).read(cli.siegel2_key(4, 2)) == good.strip()


def test_env_cache_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("MAASS_CACHE_DIR", str(tmp_path / "env"))
    run(["compute", "siegel2", "--weight", "4", "--bound", "1"])
    assert list((tmp_path / "env").glob("siegel2*.json"))


def test_verify_output_is_deterministic():
    args = ["verify", "satake", "--seed", "7"]
    _, a = run(args)
    _, b = run(args)
    assert a == b
    lines = [json.loads(x) for x in a.splitlines()]
    assert lines[-1]["summary"] and lines[-1]["status"] == "pass"
    assert all(x["runtime_ms"] == 0 for x in lines[:-1])


def test_jobs_do_not_change_output():
    args = ["verify", "gauss"]
    assert run(args)[1] == run(args + ["--jobs", "2"])[1]


def test_forced_mismatch_exits_one():
    code, text = run(["verify", "gauss", "--force-mismatch"])
    summary = json.loads(text.splitlines()[-1])
    assert code == 1 and summary["failed"] == 1
    assert summary["first_failure"]["check"] == "forced_mismatch"


@pytest.mark.parametrize("argv", [
    ["compute", "siegel2", "--weight", "5", "--bound", "1"],
    ["compute", "satake-poly", "--l", "0", "--n", "1", "--prime", "4"],
    ["compute", "satake-poly", "--l", "3", "--n", "1", "--prime", "2"],
    ["verify", "theorem1", "--primes", "6"],
    ["verify", "theorem1", "--weights", "3"],
])
def test_validation_errors_exit_two(argv):
    assert run(argv)[0] == 2


def test_usage_errors_exit_two(tmp_path):
    for args in (["verify", "bogus"], ["compute"], ["verify", "gauss", "--weights", "x"]):
        assert run_proc(args, tmp_path).returncode == 2


def test_subprocess_byte_identical(tmp_path):
    args = ["compute", "a-prime", "--n", "2", "--symbolic", "--no-cache"]
    a, b = run_proc(args, tmp_path), run_proc(args, tmp_path)
    assert a.returncode == 0 and a.stdout == b.stdout
    assert json.loads(a.stdout)["palindromic"] is True


def test_timing_flag_reports_runtime():
    _, text = run(["verify", "gauss", "--timing", "--primes", "3"])
    assert any(json.loads(x).get("runtime_ms", 0) > 0 for x in text.splitlines()[:-1])
