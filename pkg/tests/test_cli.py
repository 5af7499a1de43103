"""
Tests for the `ac` command line
"""
import pytest

from main import (
    EXIT_EXHAUSTED, EXIT_OK, EXIT_REPLAY_FAILED, EXIT_SOFTWARE, EXIT_USAGE, main
)


def test_nf(capsys):
    assert main(["nf", "y x"]) == EXIT_OK
    assert capsys.readouterr().out == "x y\n"


def test_nf_cyclic_only(capsys):
    assert main(["nf", "--cyclic-only", "yx x"]) == EXIT_OK
    assert capsys.readouterr().out == "x xy\n"


def test_nf_writes_output_file(tmp_path, capsys):
    out = tmp_path / "nf.txt"
    assert main(["nf", "(YX, x)", "-o", str(out)]) == EXIT_OK
    assert out.read_text(encoding="utf-8") == "x y\n"
    assert capsys.readouterr().out == ""


def test_bad_word_is_a_usage_error(capsys):
    assert main(["nf", "y q"]) == EXIT_USAGE
    assert "invalid character 'q'" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["nf"], ["enumerate", "-L", "3"],
                                  ["nf", "x y", "--bogus"]])
def test_argument_errors_exit_64(argv):
    assert main(argv) == EXIT_USAGE


def test_help_lists_subcommands(capsys):
    assert main(["--help"]) == EXIT_OK
    out = capsys.readouterr().out
    for command in ("conjugates", "nf", "enumerate", "trivialize", "classify", "replay"):
        assert command in out


@pytest.mark.parametrize("command, flags", [
    ("conjugates", ["--u", "--v", "-L", "-D", "--verify", "--output"]),
    ("nf", ["--cyclic-only", "--output"]),
    ("enumerate", ["--seed", "-L", "-D", "--threads", "--nf", "--checkpoint", "--resume",
                   "--max-visited", "--report", "--bound", "--output"]),
    ("trivialize", ["--seed", "--target", "-L", "-D", "--threads", "--nf", "--checkpoint",
                    "--resume", "--max-visited", "--report", "--bound", "--output"]),
    ("classify", ["--relators", "--output"]),
    ("replay", ["--n", "-L", "-D", "--max-rounds", "--output"]),
])
def test_subcommand_help_lists_flags(capsys, command, flags):
    assert main([command, "--help"]) == EXIT_OK
    out = capsys.readouterr().out
    for flag in flags:
        assert flag in out


def test_conjugates(capsys):
    assert main(["conjugates", "--u", "x", "--v", "y", "-L", "1", "-D", "1"]) == EXIT_OK
    assert capsys.readouterr().out == "x\n"


def test_conjugates_empty_set_prints_nothing(capsys):
    assert main(["conjugates", "--u", "xyy", "--v", "x", "-L", "2", "-D", "0"]) == EXIT_OK
    assert capsys.readouterr().out == ""


def test_conjugates_verify(capsys):
    assert main(["conjugates", "--u", "x", "--v", "y", "-L", "2", "-D", "1", "--verify"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert "x\tCONSISTENT" in lines
    assert all(line.endswith("\tCONSISTENT") for line in lines)


def test_negative_rounds_rejected():
    assert main(["conjugates", "--u", "x", "--v", "y", "-D", "-1"]) == EXIT_USAGE


def test_classify(capsys):
    assert main(["classify", "xyyXYYY", "xyxYXY"]) == EXIT_OK
    rows = capsys.readouterr().out.splitlines()
    assert rows[0] == "xyyXYYY\tBS_TYPE\tu=y v=X n=2 m=3"
    assert rows[1] == "xyxYXY\tUNCLASSIFIED\t-"


def test_classify_file(tmp_path, capsys):
    path = tmp_path / "relators.txt"
    path.write_text("YXyxYxyXX\n", encoding="utf-8")
    assert main(["classify", "--relators", str(path)]) == EXIT_OK
    assert "\tBAUMSLAG_TYPE\t" in capsys.readouterr().out


def test_classify_needs_input():
    assert main(["classify"]) == EXIT_USAGE


def test_replay_ok(tmp_path, capsys):
    script = tmp_path / "moves.txt"
    script.write_text("START x y\nAC1 1 2\nTARGET xy y\n", encoding="utf-8")
    assert main(["replay", str(script)]) == EXIT_OK
    assert capsys.readouterr().out == "AC1 1 2\nFINAL xy y\nOK\n"


def test_replay_failure(tmp_path, capsys):
    script = tmp_path / "moves.txt"
    script.write_text("START x y\nACM 1 xx\n", encoding="utf-8")
    assert main(["replay", str(script), "-L", "3", "--max-rounds", "1"]) == EXIT_REPLAY_FAILED
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "FINAL x y"
    assert lines[1].startswith("FAILED 0 ")


def test_replay_missing_file(tmp_path):
    assert main(["replay", str(tmp_path / "missing.txt")]) == EXIT_USAGE


def test_replay_malformed_script(tmp_path, capsys):
    script = tmp_path / "moves.txt"
    script.write_text("START x y\nAC4 1\n", encoding="utf-8")
    assert main(["replay", str(script)]) == EXIT_USAGE
    assert "line 2" in capsys.readouterr().err


def test_enumerate(capsys):
    assert main(["enumerate", "--seed", "x y", "-L", "3", "-D", "1"]) == EXIT_OK
    assert capsys.readouterr().out == "# ac-counts/1 seed=x,y L=3 D=1 bound=8 nf=full\n2\t1\n"


def test_enumerate_guard_and_invariant_exit_70(tmp_path):
    assert main(["enumerate", "--seed", "xy xY", "-L", "2"]) == EXIT_SOFTWARE
    argv = ["enumerate", "--seed", "xy y", "-L", "2", "-D", "1", "--nf", "cyclic",
            "--max-visited", "1", "--checkpoint", str(tmp_path / "guard.ckpt")]
    assert main(argv) == EXIT_SOFTWARE


def test_resume_from_corrupted_checkpoint_exits_70(tmp_path):
    path = tmp_path / "bad.ckpt"
    path.write_bytes(b"garbage")
    assert main(["enumerate", "--seed", "x y", "-L", "2", "--resume", str(path)]) == EXIT_SOFTWARE


def test_trivialize(capsys):
    assert main(["trivialize", "--seed", "y x", "-L", "2"]) == EXIT_OK
    assert capsys.readouterr().out == "START y x\nNF\nTARGET x y\n"


def test_trivialize_exhausted(capsys):
    argv = ["trivialize", "--seed", "x y", "--target", "xx y", "--nf", "cyclic", "-L", "1", "-D", "0"]
    assert main(argv) == EXIT_EXHAUSTED
    assert "exhausted" in capsys.readouterr().err
