import pytest

from coct import cli
from coct.cli import EXIT_INPUT, EXIT_INTERNAL, EXIT_OK, main
from coct.expression import read_expression, serialize
from coct.graph import read_graph
from coct.reduction import read_dimacs


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def stats(err):
    return dict(line.split("=", 1) for line in err.splitlines() if "=" in line)


def test_solve_prints_single_token(capsys, fixtures_dir):
    code, out, err = run(capsys, "solve", "--expr", fixtures_dir / "c5.expr", "--budget", 1,
                         "--trials", 20, "--seed", 7)
    assert code == EXIT_OK and out == "YES\n"
    assert stats(err)["answer"] == "YES"
    code, out, _ = run(capsys, "solve", "--expr", fixtures_dir / "c5.expr", "--budget", 0)
    assert code == EXIT_OK and out == "NO\n"


def test_solve_is_deterministic(capsys, fixtures_dir):
    args = ("solve", "--expr", fixtures_dir / "c5_triangle.expr", "--budget", 4, "--trials", 2, "--seed", 3)
    first = run(capsys, *args)
    second = run(capsys, *args)
    assert first[:2] == second[:2] == (EXIT_OK, "NO\n")
    drop = lambda e: {k: v for k, v in stats(e).items() if k != "seconds"}  # noqa: E731
    assert drop(first[2]) == drop(second[2])


@pytest.mark.parametrize("name,budget", [("c5", 1), ("triangle", 1), ("k2", 0), ("c5_triangle", 3)])
def test_solve_and_oracle_agree_on_fixtures(capsys, fixtures_dir, name, budget):
    path = fixtures_dir / f"{name}.expr"
    _, a, _ = run(capsys, "solve", "--expr", path, "--budget", budget, "--trials", 20)
    _, b, _ = run(capsys, "oracle", "--expr", path, "--budget", budget)
    assert a == b


def test_oracle_on_graph_file(capsys, fixtures_dir):
    code, out, err = run(capsys, "oracle", "--graph", fixtures_dir / "c5.graph", "--budget", 1)
    assert code == EXIT_OK and out == "YES\n"
    assert stats(err)["size"] == "1"


def test_check_expr(capsys, fixtures_dir, tmp_path):
    code, out, _ = run(capsys, "check-expr", "--expr", fixtures_dir / "c5.expr", "--graph", fixtures_dir / "c5.graph")
    assert (code, out) == (EXIT_OK, "OK\n")
    other = tmp_path / "tri.expr"
    other.write_text(serialize(read_expression(fixtures_dir / "triangle.expr")))
    code, out, _ = run(capsys, "check-expr", "--expr", other, "--graph", fixtures_dir / "c5.graph")
    assert (code, out) == (EXIT_OK, "MISMATCH\n")


def test_reduce_writes_all_outputs(capsys, fixtures_dir, tmp_path):
    prefix = tmp_path / "inst"
    code, _, err = run(capsys, "reduce", "--cnf", fixtures_dir / "sat_unit.cnf", "--t0", 1, "--out", prefix)
    assert code == EXIT_OK
    assert (tmp_path / "inst.budget").read_text() == "651\n"
    meta = dict(line.split("=") for line in (tmp_path / "inst.meta").read_text().split())
    assert set(meta) == {"n", "m", "d", "t0", "t", "s", "nprime", "c", "k", "budget"}
    assert meta["budget"] == "651" and meta["c"] == "12"
    g = read_graph(tmp_path / "inst.graph")
    assert stats(err)["vertices"] == str(g.n)
    code, out, _ = run(capsys, "check-expr", "--expr", tmp_path / "inst.expr", "--graph", tmp_path / "inst.graph")
    assert out == "OK\n"
    assert read_dimacs(fixtures_dir / "sat_unit.cnf").n == int(meta["n"])


def test_selftest_passes(capsys):
    code, out, _ = run(capsys, "selftest", "--max-k", 1)
    assert code == EXIT_OK
    assert out.splitlines()[-1] == "OK"
    assert all(line.startswith("PASS") for line in out.splitlines()[:-1])


def test_selftest_failure_exits_3(capsys, monkeypatch):
    import coct.selftest
    monkeypatch.setattr(coct.selftest, "run_all", lambda max_k, log: False)
    code, out, _ = run(capsys, "selftest")
    assert code == EXIT_INTERNAL and out == "FAILED\n"


@pytest.mark.parametrize("argv", [
    ["solve", "--expr", "missing.expr", "--budget", "1"],
    ["solve", "--budget", "1"],
    ["solve", "--expr", "x", "--budget", "1", "--bogus"],
    ["frobnicate"],
    ["oracle", "--budget", "1"],
])
def test_input_errors_exit_2(capsys, argv):
    assert main(argv) == EXIT_INPUT


def test_bad_values_exit_2(capsys, fixtures_dir, tmp_path):
    c5 = fixtures_dir / "c5.expr"
    assert run(capsys, "solve", "--expr", c5, "--budget", -1)[0] == EXIT_INPUT
    assert run(capsys, "solve", "--expr", c5, "--budget", 1, "--trials", 0)[0] == EXIT_INPUT
    assert run(capsys, "solve", "--expr", c5, "--budget", 1, "--seed", 2 ** 64)[0] == EXIT_INPUT
    bad = tmp_path / "bad.expr"
    bad.write_text("(u (v 1 1)")
    code, _, err = run(capsys, "solve", "--expr", bad, "--budget", 1)
    assert code == EXIT_INPUT and err.startswith("error:")
    assert run(capsys, "reduce", "--cnf", fixtures_dir / "sat_unit.cnf", "--t0", 0, "--out", tmp_path / "x")[0] == EXIT_INPUT
    cnf = tmp_path / "bad.cnf"
    cnf.write_text("p cnf 1 1\n1 -1 0\n")
    assert run(capsys, "reduce", "--cnf", cnf, "--t0", 1, "--out", tmp_path / "x")[0] == EXIT_INPUT


def test_unexpected_exception_exits_3(capsys, monkeypatch, fixtures_dir):
    def boom(cfg):
        raise RuntimeError("broken invariant")
    monkeypatch.setitem(cli.COMMANDS, "oracle", boom)
    code, _, err = run(capsys, "oracle", "--expr", fixtures_dir / "c5.expr", "--budget", 1)
    assert code == EXIT_INTERNAL and "broken invariant" in err
