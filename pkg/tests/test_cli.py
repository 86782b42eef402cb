import pytest

from elgames.cli import main
from elgames.games import random_game, save_game


@pytest.fixture
def game_file(tmp_path):
    path = tmp_path / "game.elg"
    path.write_text(save_game(random_game(11, 6, 3)))
    return str(path)


def test_ztree_buchi(capsys):
    assert main(["ztree", "--el", "Inf f"]) == 0
    out = capsys.readouterr().out
    assert "2 vertices" in out
    assert "box {f}" in out and "circle {}" in out


def test_ztree_dot(capsys):
    assert main(["ztree", "--el", "Inf f & Inf g", "--dot"]) == 0
    assert "digraph" in capsys.readouterr().out


def test_solve_prints_win_line(game_file, capsys):
    assert main(["solve", game_file]) == 0
    out = capsys.readouterr().out
    assert out.startswith("WIN:")


def test_solve_with_verify_and_oracle(game_file, capsys, tmp_path):
    strat = str(tmp_path / "out.strat")
    code = main(["solve", game_file, "--verify", "--oracle-check",
                 "--strategy", strat])
    out = capsys.readouterr().out
    assert code == 0, out
    assert "verified" in out and "agrees" in out
    assert open(strat).read().startswith("strategy 1")


def test_solve_deterministic_output(game_file, capsys):
    main(["solve", game_file])
    first = capsys.readouterr().out
    main(["solve", game_file])
    assert capsys.readouterr().out == first


def test_oracle_matches_solve(game_file, capsys):
    main(["solve", game_file])
    solve_out = capsys.readouterr().out.splitlines()[0]
    main(["oracle", game_file])
    oracle_out = capsys.readouterr().out.splitlines()[0]
    assert solve_out == oracle_out


def test_reduce_writes_pgsolver(game_file, capsys, tmp_path):
    out_pg = str(tmp_path / "out.pg")
    assert main(["reduce", game_file, "--pgsolver", out_pg]) == 0
    assert "product:" in capsys.readouterr().out
    assert open(out_pg).read().startswith("parity ")


def test_synth_running_example(capsys):
    code = main([
        "synth",
        "--safety", "G(b|c) & G(a -> b | X X b)",
        "--el", "(G F a -> G F b) & ((F G !a | F G !(b&c)) & G F c)",
        "--inputs", "a", "--outputs", "b,c"])
    assert code == 0
    assert capsys.readouterr().out.strip() == "REALIZABLE"


def test_synth_unrealizable(capsys):
    code = main([
        "synth", "--safety", "G(b|c) & G !b", "--el", "G F b",
        "--inputs", "a", "--outputs", "b,c"])
    assert code == 0
    assert capsys.readouterr().out.strip() == "UNREALIZABLE"


def test_synth_controller_file(tmp_path, capsys):
    ctrl = str(tmp_path / "out.mealy")
    code = main(["synth", "--safety", "true", "--el", "G F a -> G F b",
                 "--inputs", "a", "--outputs", "b", "--controller", ctrl])
    assert code == 0
    assert "REALIZABLE" in capsys.readouterr().out
    assert open(ctrl).read().startswith("mealy 1")


def test_corpus_deterministic_and_green(capsys):
    assert main(["corpus", "--seed", "7", "--count", "40"]) == 0
    first = capsys.readouterr().out
    assert "40/40 agree" in first
    main(["corpus", "--seed", "7", "--count", "40"])
    assert capsys.readouterr().out == first


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as err:
        main(["solve"])
    assert err.value.code == 2


def test_format_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.elg"
    bad.write_text("elgame 1\ncolors a\nnode 0 E\nobjective Inf a\n")
    assert main(["solve", str(bad)]) == 3


def test_missing_file_exit_code(capsys):
    assert main(["solve", "/nonexistent/game.elg"]) == 3
