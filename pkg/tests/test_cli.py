import subprocess
import sys

import pytest

from flagvec.cli import main


@pytest.fixture
def run(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("FLAGVEC_CACHE_DIR", str(tmp_path / "cache"))

    def _run(*argv):
        status = main([str(a) for a in argv])
        out = capsys.readouterr()
        return status, out.out, out.err

    return _run


def write(path, text):
    path.write_text(text, encoding="ascii")
    return path


def test_compute_one_cell(run, tmp_path):
    g = write(tmp_path / "g.txt", "igraph i=1 r=2\ncell 0\n")
    out = tmp_path / "v.txt"
    status, _, _ = run("compute", "--input", g, "--vector", "flag", "--out", out)
    assert status == 0
    assert out.read_text() == "flagvec-vector v1\nterm 1/1 a|b\nterm 1/1 b|a\n"


def test_compute_methods_agree(run, tmp_path):
    g = write(tmp_path / "g.txt", "igraph i=2 r=4\ncell 0 1\ncell 1 2\ncell 2 3\n")
    _, naive, _ = run("compute", "--input", g, "--method", "naive")
    _, dp, _ = run("compute", "--input", g, "--method", "dp")
    assert naive == dp


def test_linkspace(run):
    status, out, _ = run("linkspace", "--kind", "igraph", "--i", 1, "--m", 3)
    assert status == 0
    assert "dimension: 2" in out
    assert "residue igraph i=1 r=3 cells=[{0} {1} {2}]: a + 3*b" in out


def test_group_compare(run, tmp_path):
    a = write(tmp_path / "a.txt", "group r=2\nrow 0 1\nrow 1 0\n")
    b = write(tmp_path / "b.txt", "group r=2\nrow 0 1\nrow 1 0\n")
    status, out, _ = run("group", "--input", a, "--compare", b)
    assert status == 0 and out == "identical\n"
    z4 = write(tmp_path / "z4.txt", "group r=4\nrow 0 1 2 3\nrow 1 2 3 0\nrow 2 3 0 1\nrow 3 0 1 2\n")
    v4 = write(tmp_path / "v4.txt", "group r=4\nrow 0 1 2 3\nrow 1 0 3 2\nrow 2 3 0 1\nrow 3 2 1 0\n")
    assert run("group", "--input", z4, "--compare", v4)[1] == "different\n"


def test_input_error_exit_status(run, tmp_path):
    bad = write(tmp_path / "bad.txt", "igraph i=2 r=3\ncell 0 1\ncell 0 1\n")
    status, _, err = run("compute", "--input", bad)
    assert status == 2
    assert "bad.txt:3" in err


def test_group_validation_error(run, tmp_path):
    bad = write(tmp_path / "bad.txt", "group r=2\nrow 0 1\nrow 0 1\n")
    assert run("group", "--input", bad)[0] == 2


def test_resource_error_exit_status(run):
    status, _, err = run("linkspace", "--kind", "igraph", "--i", 2, "--m", 7)
    assert status == 3 and "limit" in err


def test_invariant_error_exit_status(run, monkeypatch):
    from flagvec import decorated

    monkeypatch.setattr(decorated, "removal_sign", lambda position: 1)
    status, _, err = run("experiment", "invariance", "--kind", "oriented", "--i", 2, "--r", 4, "--trials", 30)
    assert status == 4
    assert "witness:" in err and "origraph" in err


def test_unknown_flag_rejected(run):
    with pytest.raises(SystemExit) as info:
        run("compute", "--bogus")
    assert info.value.code == 2


def test_experiment_reports(run, tmp_path):
    out = tmp_path / "r.txt"
    status, _, _ = run("experiment", "independence", "--kind", "igraph", "--i", 1, "--r", 4, "--out", out)
    assert status == 0
    text = out.read_text()
    assert text.startswith("flagvec-report v1\n") and "rank: 5" in text
    status, text, _ = run("experiment", "hull", "--kind", "igraph", "--i", 1, "--r", 4)
    assert "vertices: 5" in text
    status, text, _ = run("experiment", "cosphere", "--kind", "igraph", "--i", 1, "--r", 3)
    assert "stage1_cospherical:" in text
    status, text, _ = run("experiment", "invariance", "--kind", "igraph", "--i", 2, "--r", 4, "--trials", 5)
    assert "result: pass" in text


def test_experiment_from_files(run, tmp_path):
    files = [
        write(tmp_path / "g0.txt", "igraph i=2 r=3\n"),
        write(tmp_path / "g1.txt", "igraph i=2 r=3\ncell 0 1\n"),
        write(tmp_path / "g2.txt", "igraph i=2 r=3\ncell 1 2\n"),
    ]
    status, text, _ = run("experiment", "collisions", *files)
    assert status == 0 and "equivalent_pairs_suppressed: 1" in text
    vec = tmp_path / "v.txt"
    run("compute", "--input", files[1], "--out", vec)
    status, text, _ = run("experiment", "hull", files[0], vec, files[2])
    assert status == 0 and "duplicates: 2" in text


def test_cache_list_and_clear(run, tmp_path):
    run("linkspace", "--kind", "igraph", "--i", 1, "--m", 2)
    status, out, _ = run("cache", "list")
    assert "igraph-i1-m2-v1.json" in out.split()
    status, out, _ = run("cache", "clear")
    assert status == 0 and out.startswith("removed")
    assert run("cache", "list")[1] == ""


def test_console_entry_point(tmp_path):
    g = write(tmp_path / "g.txt", "igraph i=1 r=2\ncell 0\n")
    proc = subprocess.run(
        [sys.executable, "-m", "flagvec.cli", "--cache-dir", str(tmp_path / "c"), "compute", "--input", str(g)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and "term 1/1 a|b" in proc.stdout
