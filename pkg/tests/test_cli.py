import pytest

from gourds.board import serialize_board, star_of_david_board
from gourds.boards import hex_board, random_proper_board
from gourds.cli import main
from gourds.puzzle import parse_config, serialize_config
from tests.conftest import numbered_config


@pytest.fixture
def board_file(tmp_path):
    b = random_proper_board(15, 1)
    p = tmp_path / "b.board"
    p.write_text(serialize_board(b))
    return b, p


@pytest.fixture
def config_file(tmp_path, board_file):
    b, _ = board_file
    c = numbered_config(b)
    p = tmp_path / "c.config"
    p.write_text(serialize_config(c))
    return c, p


def test_validate_proper(board_file, capsys):
    _, p = board_file
    assert main(["validate", "--board", str(p)]) == 0
    assert "proper: True" in capsys.readouterr().out


def test_validate_star(tmp_path, capsys):
    p = tmp_path / "star.board"
    p.write_text(serialize_board(star_of_david_board()))
    assert main(["validate", "--board", str(p)]) == 1
    assert "is_star_of_david: True" in capsys.readouterr().out


def test_missing_file_exit_2():
    assert main(["validate", "--board", "/nonexistent.board"]) == 2


def test_parse_error_exit_2(tmp_path):
    p = tmp_path / "junk.board"
    p.write_text("junk\n")
    assert main(["validate", "--board", str(p)]) == 2


def test_oracle_counts(tmp_path, capsys):
    bp = tmp_path / "tri.board"
    bp.write_text("gourds-board v1\n0 0 .\n1 0 .\n0 1 .\n")
    cp = tmp_path / "g.config"
    cp.write_text("gourds-config v1\ng 0 0 c1 1 0 c2\ne 0 1\n")
    assert main(["oracle", "--board", str(bp), "--config", str(cp)]) == 0
    assert "states: 6" in capsys.readouterr().out
    assert main(["oracle", "--board", str(bp), "--config", str(cp),
                 "--mode", "sharp"]) == 0
    assert "states: 3" in capsys.readouterr().out


def test_decompose(board_file, tmp_path, capsys):
    _, p = board_file
    out = tmp_path / "dump.txt"
    assert main(["decompose", "--board", str(p), "--out", str(out)]) == 0
    assert out.read_text().startswith("cycle:")


def test_scramble_solve_verify_round_trip(tmp_path, board_file, config_file):
    _, bp = board_file
    c, cp = config_file
    mixed = tmp_path / "mixed.config"
    assert main(["scramble", "--board", str(bp), "--config", str(cp),
                 "--steps", "40", "--seed", "7", "--out", str(mixed)]) == 0
    plan = tmp_path / "plan.txt"
    assert main(["solve", "--board", str(bp), "--start", str(mixed),
                 "--target", str(cp), "--out", str(plan)]) == 0
    final = tmp_path / "final.config"
    assert main(["verify", "--board", str(bp), "--start", str(mixed),
                 "--config", str(plan), "--target", str(cp),
                 "--out", str(final)]) == 0
    got = parse_config(final.read_text())
    assert got.cell_labels() == c.cell_labels()
    assert got.empty == c.empty


def test_verify_divergence_exit_1(tmp_path, board_file, config_file):
    _, bp = board_file
    c, cp = config_file
    mixed = tmp_path / "mixed.config"
    main(["scramble", "--board", str(bp), "--config", str(cp),
          "--steps", "40", "--seed", "8", "--out", str(mixed)])
    plan = tmp_path / "plan.txt"
    main(["solve", "--board", str(bp), "--start", str(mixed),
          "--target", str(cp), "--out", str(plan)])
    # replaying against the scrambled state as target diverges
    assert main(["verify", "--board", str(bp), "--start", str(mixed),
                 "--config", str(plan), "--target", str(mixed)]) == 1


def test_reduce_and_place(tmp_path, capsys):
    fp = tmp_path / "f.1in3"
    fp.write_text("gourds-1in3 v1\nc a b c\nc a b c\nc a b c\n")
    ip = tmp_path / "inst.placement"
    assert main(["reduce", "--formula", str(fp), "--out", str(ip)]) == 0
    sol = tmp_path / "sol.config"
    assert main(["place", "--board", str(ip), "--out", str(sol)]) == 0
    assert sol.read_text().startswith("gourds-config v1")


def test_place_enumeration_limit(tmp_path, capsys):
    ip = tmp_path / "small.placement"
    ip.write_text(
        "gourds-placement v1\n0 0 c1\n1 0 c1\n0 1 c2\nb c1 c2 1\n"
    )
    assert main(["place", "--board", str(ip), "--limit", "5"]) == 0
    assert "solutions:" in capsys.readouterr().err


def test_bench_csv(tmp_path):
    out = tmp_path / "bench.csv"
    assert main(["bench", "--seed", "1", "--steps", "20",
                 "--limit", "1", "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "n,strategy,moves_s1,moves_s2,moves_s3,lower_bound,wall_time"
    assert len(lines) == 3  # one size, two strategies
    assert lines[1].split(",")[1] == "cubic"
    assert lines[2].split(",")[1] == "quadratic"
