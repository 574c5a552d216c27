import json

import pytest

from perturbcc.cli import main
from perturbcc.graph import dump_edge_list, example_graph, load_edge_list


@pytest.fixture
def chains_file(tmp_path):
    path = tmp_path / "chains.txt"
    assert main(["gen", "--chains", "3", "--len", "4", "--seed", "2", "-o", str(path)]) == 0
    return path


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_gen_to_stdout(capsys):
    assert main(["gen", "--chains", "2", "--len", "3", "--no-shuffle"]) == 0
    g, _ = load_edge_list(capsys.readouterr().out)
    assert g.edge_set() == {(1, 2), (2, 3), (4, 5), (5, 6)}


def test_gen_random(capsys):
    assert main(["gen", "--random", "10", "12", "--seed", "4"]) == 0
    g, _ = load_edge_list(capsys.readouterr().out)
    assert (g.n, g.m) == (10, 12)


@pytest.mark.parametrize("algo", ["bfs", "sis", "gss", "exact"])
def test_cc(chains_file, capsys, algo):
    assert main(["cc", "--algo", algo, "-i", str(chains_file)]) == 0
    out = _json(capsys)
    assert out["K"] == 3
    assert sorted(len(c) for c in out["components"]) == [4, 4, 4]


def test_cc_trace_and_start(tmp_path, capsys):
    path = tmp_path / "g.txt"
    path.write_text(dump_edge_list(example_graph()))
    assert main(["cc", "--algo", "gss", "-i", str(path), "--trace", "--start", "1"]) == 0
    out = _json(capsys)
    assert out["traces"][0]["trace"] == [{"k": 1, "new": [2, 3, 4, 6, 7, 8]}, {"k": 2, "new": [5]}]


def test_cc_float_mode_numpy(chains_file, capsys):
    assert main(["cc", "--algo", "sis", "--mode", "float", "--backend", "numpy", "-i", str(chains_file)]) == 0
    assert _json(capsys)["K"] == 3


def test_verify(chains_file, capsys):
    assert main(["verify", "-i", str(chains_file), "--exact"]) == 0
    out = _json(capsys)
    assert out["ok"] and out["exact"]["ok"]
    assert set(out["strategies"]) == {"algebraic-bfs", "sis", "gss", "exact-perturb"}


def test_detlab(tmp_path, capsys):
    path = tmp_path / "g.txt"
    path.write_text("1 2\n2 3\n1 3\n")
    assert main(["detlab", "-i", str(path)]) == 0
    captured = capsys.readouterr()
    assert json.loads(captured.out)["polynomial"] == "d^3 - 3d + 2"
    assert "d^3 - 3d + 2" in captured.err


def test_exact_cap_exit_code(tmp_path, capsys):
    path = tmp_path / "big.txt"
    assert main(["gen", "--chains", "7", "--len", "10", "-o", str(path)]) == 0
    assert main(["cc", "--algo", "exact", "-i", str(path)]) == 2
    assert "n <= 64" in capsys.readouterr().err
    assert main(["verify", "--exact", "-i", str(path)]) == 2
    assert main(["detlab", "-i", str(path)]) == 2


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["cc"],
        ["cc", "--algo", "dfs", "-i", "x"],
        ["cc", "-i", "/nonexistent/file"],
        ["gen"],
        ["gen", "--random", "3", "9"],
        ["bench", "--sizes", "3by4"],
        ["bench", "--sizes", "2x3", "--repeats", "2"],
        ["bench", "--sizes", "2x3", "--strategies", "exact"],
        ["bench", "--suite", "grids", "--sizes", "2x3"],
    ],
)
def test_usage_errors(argv, capsys):
    assert main(argv) == 2


def test_malformed_input(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("1 2\n3 x\n")
    assert main(["cc", "-i", str(path)]) == 2
    assert "line 2" in capsys.readouterr().err


def test_start_out_of_range(chains_file):
    assert main(["cc", "-i", str(chains_file), "--start", "99"]) == 2


def test_bench_csv(tmp_path, capsys):
    out = tmp_path / "b.csv"
    assert main(["bench", "--sizes", "4x5", "--strategies", "sis,gss", "-o", str(out)]) == 0
    lines = out.read_bytes().decode().split("\n")
    assert lines[0] == "n,m,K,strategy,total_iterations,wall_ns"
    assert lines[1].startswith("20,16,4,sis,")
    assert "\r" not in out.read_bytes().decode()


def test_invariant_exit_code(monkeypatch, chains_file):
    import perturbcc.cli as cli

    monkeypatch.setattr(cli, "verify_strategies", lambda g, backend=None: {"ok": False})
    assert main(["verify", "-i", str(chains_file)]) == 3
