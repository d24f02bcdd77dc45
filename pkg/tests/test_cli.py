"""End-to-end command-line behavior, run in process through cli.main."""

import json
import subprocess
import sys

import pytest

from shiftlab import (
    Backend,
    SimplicialComplex,
    UniformHypergraph,
    betti_numbers,
    build_shift_graph,
    build_shift_graph_from,
    contract,
    export_dot,
    export_json,
    hypergraph_to_json,
    make_field_context,
)
from shiftlab.cli import main
from shiftlab.reproduce import available_targets

RP2_FACETS = [
    [1, 2, 5], [1, 2, 6], [1, 3, 4], [1, 3, 5], [1, 4, 6],
    [2, 3, 4], [2, 3, 6], [2, 4, 5], [3, 5, 6], [4, 5, 6],
]


@pytest.fixture()
def rp2_file(tmp_path):
    path = tmp_path / "rp2.json"
    path.write_text(json.dumps({"n": 6, "facets": RP2_FACETS}))
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_ok(capsys, *argv):
    code, out, err = run_cli(capsys, *argv)
    assert code == 0, err
    return out


# ------------------------------------------------------------------ shift


def test_shift_hypergraph_by_longest_permutation(tmp_path, capsys):
    path = tmp_path / "in.json"
    path.write_text(json.dumps({"n": 4, "k": 2, "edges": [[1, 2], [2, 3]]}))
    for char in ("0", "2"):
        out = run_ok(capsys, "shift", "-i", str(path), "--perm", "w0", "--char", char)
        assert json.loads(out) == {"n": 4, "k": 2, "edges": [[1, 2], [1, 3]]}
        assert out.endswith("\n")


def test_shift_by_identity_echoes_canonical_form(tmp_path, capsys):
    path = tmp_path / "in.json"
    path.write_text(json.dumps({"n": 4, "k": 2, "edges": [[3, 2], [2, 1]]}))
    out = run_ok(capsys, "shift", "-i", str(path), "--perm", "e")
    assert json.loads(out)["edges"] == [[1, 2], [2, 3]]


def test_shift_with_named_vandermonde_matrix(tmp_path, capsys):
    path = tmp_path / "in.json"
    path.write_text(
        json.dumps(
            {"n": 6, "k": 3, "edges": [[1, 2, 3], [1, 4, 5], [2, 4, 6], [3, 5, 6]]}
        )
    )
    out = run_ok(capsys, "shift", "-i", str(path), "--matrix", "vandermonde6")
    assert json.loads(out)["edges"] == [[1, 2, 3], [1, 2, 4], [1, 2, 5], [1, 3, 4]]
    out = run_ok(capsys, "shift", "-i", str(path), "--matrix", "generic6")
    assert json.loads(out)["edges"] == [[1, 2, 3], [1, 2, 4], [1, 2, 5], [1, 2, 6]]


def test_shift_reads_stdin_and_writes_text(tmp_path, capsys, monkeypatch):
    import io

    monkeypatch.setattr(
        sys, "stdin", io.StringIO(json.dumps({"n": 4, "k": 2, "edges": [[1, 2], [2, 3]]}))
    )
    out = run_ok(capsys, "shift", "-i", "-", "--perm", "w0", "--format", "text")
    assert out == "1 2\n1 3\n"


def test_shift_text_input_modes(tmp_path, capsys):
    path = tmp_path / "faces.txt"
    path.write_text("# comment\n1,2\n2 3\n")
    out = run_ok(capsys, "shift", "-i", str(path), "--perm", "w0", "--n", "4")
    assert json.loads(out) == {"n": 4, "k": 2, "edges": [[1, 2], [1, 3]]}
    # same faces forced to a complex: closure is taken, facets come back
    out = run_ok(
        capsys, "shift", "-i", str(path), "--perm", "w0", "--n", "4", "--as", "complex"
    )
    assert json.loads(out) == {"n": 4, "facets": [[1, 2], [1, 3]]}
    # without --n the vertex count defaults to the largest label seen
    out = run_ok(capsys, "shift", "-i", str(path), "--perm", "w0")
    assert json.loads(out)["n"] == 3


def test_shift_complex_input(rp2_file, capsys):
    out = run_ok(capsys, "shift", "-i", rp2_file, "--perm", "w0", "--char", "2")
    payload = json.loads(out)
    K = SimplicialComplex.from_facets(payload["n"], payload["facets"])
    assert betti_numbers(K, 2).values == (1, 1, 1)
    original = SimplicialComplex.from_facets(6, RP2_FACETS)
    assert K.f_vector() == original.f_vector()


def test_shift_with_matrix_file(tmp_path, capsys):
    inp = tmp_path / "in.json"
    inp.write_text(json.dumps({"n": 3, "k": 2, "edges": [[1, 3], [2, 3]]}))
    mat = tmp_path / "mat.json"
    mat.write_text(
        json.dumps(
            {"n": 3, "entries": [["x1,1", "x1,2", "x1,3"], [0, "x2,2", "x2,3"], [0, 0, 1]]}
        )
    )
    out = run_ok(capsys, "shift", "-i", str(inp), "--matrix", str(mat))
    # upper-triangular matrices never move a family
    assert json.loads(out)["edges"] == [[1, 3], [2, 3]]


def test_shift_error_exits(tmp_path, capsys):
    good = tmp_path / "in.json"
    good.write_text(json.dumps({"n": 4, "k": 2, "edges": [[1, 2]]}))
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run_cli(capsys, "shift", "-i", str(bad), "--perm", "w0")
    assert code == 2 and "shiftlab: error" in err
    # singular explicit matrix: a mathematical precondition, not a parse error
    sing = tmp_path / "sing.json"
    sing.write_text(json.dumps({"n": 2, "entries": [[1, 1], [1, 1]]}))
    small = tmp_path / "small.json"
    small.write_text(json.dumps({"n": 2, "k": 1, "edges": [[2]]}))
    code, _, err = run_cli(capsys, "shift", "-i", str(small), "--matrix", str(sing))
    assert code == 3 and "error" in err
    # wrong-size named family
    code, _, _ = run_cli(capsys, "shift", "-i", str(good), "--matrix", "vandermonde5")
    assert code == 2
    # composite characteristic
    code, _, _ = run_cli(capsys, "shift", "-i", str(good), "--perm", "w0", "--char", "4")
    assert code == 3
    # permutation of the wrong size
    code, _, _ = run_cli(capsys, "shift", "-i", str(good), "--perm", "2,1,3")
    assert code == 2
    # missing file
    code, _, _ = run_cli(capsys, "shift", "-i", str(tmp_path / "absent"), "--perm", "e")
    assert code == 2


def test_shift_output_file(tmp_path, capsys):
    inp = tmp_path / "in.json"
    inp.write_text(json.dumps({"n": 4, "k": 2, "edges": [[2, 4]]}))
    dest = tmp_path / "out.json"
    out = run_ok(capsys, "shift", "-i", str(inp), "--perm", "w0", "-o", str(dest))
    assert out == ""
    assert json.loads(dest.read_text())["edges"] == [[1, 2]]
    assert dest.read_text().endswith("\n")


# -------------------------------------------------------------------- psg


def test_psg_matches_library_export_and_is_deterministic(capsys):
    ctx = make_field_context(0, Backend.RANDOMIZED, seed=0)
    want = export_json(build_shift_graph(4, 2, 2, ctx)) + "\n"
    first = run_ok(capsys, "psg", "-n", "4", "-k", "2", "-m", "2")
    second = run_ok(capsys, "psg", "-n", "4", "-k", "2", "-m", "2")
    assert first == want and second == want
    symbolic = run_ok(
        capsys, "psg", "-n", "4", "-k", "2", "-m", "2", "--backend", "symbolic"
    )
    assert symbolic == want


def test_psg_parallel_output_is_byte_identical(capsys):
    base = run_ok(capsys, "psg", "-n", "4", "-k", "2", "-m", "2")
    forked = run_ok(capsys, "psg", "-n", "4", "-k", "2", "-m", "2", "--parallelism", "2")
    assert forked == base


def test_psg_contract_and_dot(capsys):
    ctx = make_field_context(0, Backend.RANDOMIZED, seed=0)
    want = export_json(contract(build_shift_graph(4, 2, 3, ctx), ctx)) + "\n"
    out = run_ok(capsys, "psg", "-n", "4", "-k", "2", "-m", "3", "--contract")
    assert out == want
    assert json.loads(out)["contracted"] is True
    dot = run_ok(capsys, "psg", "-n", "4", "-k", "2", "-m", "3", "--format", "dot")
    assert dot.startswith("digraph shiftgraph {")


def test_psg_from_file(tmp_path, capsys):
    ctx = make_field_context(0, Backend.RANDOMIZED, seed=0)
    S = UniformHypergraph.from_edges(4, 2, [[1, 4], [3, 4]])
    path = tmp_path / "start.json"
    path.write_text(hypergraph_to_json(S))
    want = export_json(build_shift_graph_from(S, ctx)) + "\n"
    assert run_ok(capsys, "psg", "--from", str(path)) == want


def test_psg_error_exits(capsys):
    code, _, err = run_cli(capsys, "psg", "-n", "4", "-k", "2")
    assert code == 2 and "psg needs" in err
    code, _, err = run_cli(
        capsys, "psg", "-n", "4", "-k", "2", "-m", "2", "--max-nodes", "3"
    )
    assert code == 3 and "cap" in err


# ------------------------------------------------------------------ betti


def test_betti_methods_and_chars(rp2_file, capsys):
    out = run_ok(capsys, "betti", rp2_file)
    assert json.loads(out) == {"betti": [1, 0, 0], "char": 0}
    out = run_ok(capsys, "betti", rp2_file, "--char", "2")
    assert json.loads(out) == {"betti": [1, 1, 1], "char": 2}
    out = run_ok(capsys, "betti", rp2_file, "--char", "3")
    assert json.loads(out) == {"betti": [1, 0, 0], "char": 3}
    out = run_ok(capsys, "betti", rp2_file, "--method", "full-shift", "--char", "2")
    assert json.loads(out) == {"betti": [1, 1, 1], "char": 2}
    out = run_ok(capsys, "betti", rp2_file, "--char", "2", "--format", "text")
    assert out == "1,1,1\n"


def test_betti_near_cone_method(tmp_path, capsys):
    cone = tmp_path / "cone.json"
    cone.write_text(json.dumps({"n": 4, "facets": [[1, 2, 3], [1, 3, 4]]}))
    out = run_ok(capsys, "betti", str(cone), "--method", "near-cone", "--char", "2")
    assert json.loads(out) == {"betti": [1, 0, 0], "char": 2}
    lone = tmp_path / "lone.json"
    lone.write_text(json.dumps({"n": 3, "facets": [[2, 3]]}))
    code, _, err = run_cli(capsys, "betti", str(lone), "--method", "near-cone")
    assert code == 3 and "near cone" in err


def test_betti_text_input_and_errors(tmp_path, capsys, monkeypatch):
    import io

    monkeypatch.setattr(sys, "stdin", io.StringIO("1 2\n1 3\n2 3\n"))
    out = run_ok(capsys, "betti", "-", "--format", "text")
    assert out == "1,1\n"
    code, _, _ = run_cli(capsys, "betti", str(tmp_path / "absent.json"))
    assert code == 2
    rp = tmp_path / "rp.json"
    rp.write_text(json.dumps({"n": 6, "facets": RP2_FACETS}))
    code, _, _ = run_cli(capsys, "betti", str(rp), "--char", "6")
    assert code == 3


# ------------------------------------------------------------------- scan


def test_scan_reports_no_violations(rp2_file, capsys):
    out = run_ok(
        capsys,
        "scan",
        rp2_file,
        "--random",
        "2",
        "--random-n",
        "4",
        "--random-dim",
        "1",
        "--graph",
        "3,2,2",
    )
    payload = json.loads(out)
    assert len(payload["complexes"]) == 3
    assert all(c["violations"] == [] for c in payload["complexes"])
    # graphs get contracted before the acyclicity check; every two-edge
    # family on three vertices lands in one full-shift class
    assert payload["graphs"] == [
        {"n": 3, "k": 2, "m": 2, "nodes": 1, "edges": 0, "acyclic": True, "cycle": []}
    ]
    assert payload["complexes"][0]["betti"] == [1, 0, 0]


def test_scan_seed_env_override(rp2_file, capsys, monkeypatch):
    with_flag = run_ok(capsys, "scan", "--random", "2", "--seed", "5")
    monkeypatch.setenv("SHIFTLAB_SEED", "5")
    with_env = run_ok(capsys, "scan", "--random", "2", "--seed", "0")
    assert with_env == with_flag
    monkeypatch.setenv("SHIFTLAB_SEED", "oops")
    code, _, _ = run_cli(capsys, "scan", "--random", "1")
    assert code == 2


def test_scan_bad_graph_triple(capsys):
    code, _, err = run_cli(capsys, "scan", "--graph", "3,2")
    assert code == 2 and "n,k,m" in err


# -------------------------------------------------------------- reproduce


def test_reproduce_list_and_fast_target(capsys):
    out = run_ok(capsys, "reproduce", "--list")
    names = [line.split()[0] for line in out.splitlines()]
    assert names == available_targets()
    assert len(names) == 8
    out = run_ok(capsys, "reproduce", "two-edge-routes")
    assert out.startswith("PASS two-edge-routes (")
    code, _, err = run_cli(capsys, "reproduce", "no-such-target")
    assert code == 2 and "unknown reproduce target" in err
    code, _, err = run_cli(capsys, "reproduce")
    assert code == 2 and "available" in err


def test_version_and_console_script():
    proc = subprocess.run(
        [sys.executable, "-m", "shiftlab.cli", "--version"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("shiftlab ")


def test_epsilon_parsing(tmp_path, capsys):
    inp = tmp_path / "in.json"
    inp.write_text(json.dumps({"n": 4, "k": 2, "edges": [[1, 2], [2, 3]]}))
    for eps in ("2^-10", "1/1024", "0.125"):
        out = run_ok(capsys, "shift", "-i", str(inp), "--perm", "w0", "--epsilon", eps)
        assert json.loads(out)["edges"] == [[1, 2], [1, 3]]
    code, _, _ = run_cli(capsys, "shift", "-i", str(inp), "--perm", "w0", "--epsilon", "x")
    assert code == 2


def test_char0_double_prime_flag(tmp_path, capsys):
    inp = tmp_path / "in.json"
    inp.write_text(json.dumps({"n": 6, "k": 3, "edges": [[1, 2, 3], [1, 4, 5], [2, 4, 6], [3, 5, 6]]}))
    out = run_ok(
        capsys, "shift", "-i", str(inp), "--matrix", "vandermonde6", "--char0-double-prime"
    )
    assert json.loads(out)["edges"] == [[1, 2, 3], [1, 2, 4], [1, 2, 5], [1, 3, 4]]
