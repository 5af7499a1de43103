"""
Tests for AC-moves, ACM-moves, automorphisms, move scripts and replay
"""
import pytest

from conftest import random_word
from config.settings import MOVE_SCRIPTS, MOVE_SCRIPTS_DIR, REPLAY_MAX_ROUNDS
from model.conjugacy import acm_conjugates
from model.errors import MoveRejected, NotAnAutomorphismError, ScriptError
from model.moves import (
    Move, MoveKind, apply_ac1, apply_ac2, apply_ac3, apply_acm, apply_aut, apply_move,
    automorphic_images, expand_template, format_script, load_script, parse_script,
    replay, replay_script
)
from model.words import ak_pair, exponent_matrix, parse_pair, parse_word


def w(text):
    return parse_word(text)


def p(text):
    return parse_pair(text)


def test_ac1_multiplies_components():
    assert apply_ac1(p("x y"), 1, 2) == p("xy y")
    assert apply_ac1(p("xy Y"), 1, 2) == p("x Y")
    assert apply_ac1(p("x y"), 2, 1) == p("x yx")


def test_ac2_is_an_involution():
    pair = p("xyY xxY")
    assert apply_ac2(pair, 2) == p("x yXX")
    assert apply_ac2(apply_ac2(pair, 1), 1) == pair


def test_ac3_conjugates():
    assert apply_ac3(p("y x"), 1, w("x")) == p("Xyx x")


def test_bad_component_indices():
    with pytest.raises(ValueError):
        apply_ac1(p("x y"), 1, 1)
    with pytest.raises(ValueError):
        apply_ac2(p("x y"), 3)
    with pytest.raises(ValueError):
        apply_ac3(p("x y"), 0, w("x"))


def test_acm_accepts_harvested_conjugate():
    assert apply_acm(p("x y"), 1, w("yx"), 3, 1) == p("yx y")
    # YX is the inverse of the harvested xy
    assert apply_acm(p("x y"), 1, w("YX"), 3, 1) == p("YX y")


def test_acm_rejects_other_words():
    with pytest.raises(MoveRejected) as excinfo:
        apply_acm(p("x y"), 1, w("xx"), 3, 1)
    assert excinfo.value.component == 1
    assert excinfo.value.rounds == 1
    with pytest.raises(MoveRejected):
        apply_acm(p("x y"), 1, w("yx"), 3, 0)


def test_apply_aut():
    assert apply_aut(p("x y"), (w("x"), w("yx"))) == p("x yx")
    assert apply_aut(ak_pair(3), (w("y"), w("x"))) == p("yxyXYX yyyXXXX")
    assert apply_aut(ak_pair(3), (w("x"), w("y"))) == ak_pair(3)


def test_apply_aut_rejects_non_basis():
    with pytest.raises(NotAnAutomorphismError):
        apply_aut(p("x y"), (w("xx"), w("y")))
    with pytest.raises(NotAnAutomorphismError):
        apply_aut(p("x y"), (w("xy"), w("yx")))


def test_automorphic_images_of_ak3():
    images = automorphic_images(ak_pair(3))
    assert images[0] == p("xYxyXy xxxyyyy")
    assert images[2] == p("yxyXYX yyyXXXX")
    assert len(images) == 3


def test_apply_move_nf():
    assert apply_move(p("yx x"), Move(MoveKind.NF)) == p("x y")


def test_expand_template():
    assert expand_template("x{k}Y{k+1}", 3) == "xxxYYYY"
    assert expand_template("(YX){k}Y", 2) == "YXYXY"
    assert expand_template("x{2}y", None) == "xxy"
    with pytest.raises(ScriptError):
        expand_template("x{k-4}", 3)
    with pytest.raises(ScriptError):
        expand_template("x{k}", None)


def test_parse_script():
    script = parse_script(
        "# comment\n"
        "START x{k} y\n"
        "AC1 1 2   # product\n"
        "ac2 2\n"
        "AC3 1 Y\n"
        "ACM 2 yx\n"
        "AUT y x\n"
        "NF\n"
        "TARGET x y\n",
        n=2,
    )
    assert script.start == p("xx y")
    assert script.target == p("x y")
    assert [m.kind for m in script.moves] == [
        MoveKind.AC1, MoveKind.AC2, MoveKind.AC3, MoveKind.ACM, MoveKind.AUT, MoveKind.NF
    ]
    assert script.moves[3] == Move(MoveKind.ACM, component=2, word=w("yx"))
    assert parse_script(format_script(script.moves, script.start, script.target)).moves == script.moves


@pytest.mark.parametrize("text, line", [
    ("AC1 1 2\nFOO 1\n", 2),
    ("AC1 1 1\n", 1),
    ("\n\nAC2 3\n", 3),
    ("AC3 1 xq\n", 1),
    ("NF extra\n", 1),
    ("START x\n", 1),
])
def test_parse_script_errors_carry_line_numbers(text, line):
    with pytest.raises(ScriptError) as excinfo:
        parse_script(text)
    assert excinfo.value.line_number == line
    assert str(excinfo.value).startswith(f"line {line}: ")


def test_replay_records_least_rounds():
    script = parse_script("START x y\nAC2 2\nAC2 2\nACM 1 yx\nTARGET yx y\n")
    report = replay_script(script, word_bound=3, max_rounds=2)
    assert report.succeeded
    assert report.step_rounds == {2: 1}
    assert report.final == "yx y"
    assert report.target_reached


def test_replay_stops_at_rejected_move():
    moves = parse_script("AC2 1\nACM 1 xx\nAC2 2\n").moves
    report = replay(p("x y"), moves, word_bound=3, max_rounds=1)
    assert not report.succeeded
    assert report.failed_index == 1
    assert report.applied == 1
    assert report.final == "X y"
    assert "xx" in report.reason


def test_replay_reports_missed_target():
    script = parse_script("START x y\nAC2 1\nTARGET xy y\n")
    report = replay_script(script)
    assert report.failed_index is None
    assert report.target_reached is False
    assert not report.succeeded


def test_replay_script_needs_start():
    with pytest.raises(ScriptError):
        replay_script(parse_script("AC2 1\n"))


def _replay_lemma(name, n, word_bound=10):
    script = load_script(MOVE_SCRIPTS_DIR / MOVE_SCRIPTS[name], n)
    report = replay_script(script, word_bound, REPLAY_MAX_ROUNDS)
    assert report.succeeded, f"{name} n={n}: step {report.failed_index}: {report.reason}"
    assert all(d <= REPLAY_MAX_ROUNDS for d in report.step_rounds.values())
    assert script.target in (ak_pair(n), ak_pair(n).swap())


@pytest.mark.parametrize("name", sorted(MOVE_SCRIPTS))
def test_lemma_scripts_replay_at_three(name):
    _replay_lemma(name, 3)


@pytest.mark.slow
@pytest.mark.parametrize("name", sorted(MOVE_SCRIPTS))
def test_lemma_scripts_replay_at_four(name):
    _replay_lemma(name, 4, word_bound=12)


def _abs_det(pair):
    return abs(exponent_matrix(pair).determinant())


def test_moves_keep_the_exponent_determinant(rng):
    pair = ak_pair(3)
    expected = _abs_det(pair)
    for _ in range(40):
        i = rng.choice((1, 2))
        kind = rng.choice(("AC1", "AC2", "AC3", "ACM"))
        if kind == "AC1":
            image = apply_ac1(pair, i, 3 - i)
        elif kind == "AC2":
            image = apply_ac2(pair, i)
        elif kind == "AC3":
            image = apply_ac3(pair, i, random_word(rng, 3, cyclic=False))
        else:
            conjugates = sorted(acm_conjugates(pair.component(i), pair.other(i), 8, 1))
            if not conjugates:
                continue
            image = apply_acm(pair, i, rng.choice(conjugates), 8, 1)
        assert _abs_det(image) == expected, f"{kind} on ({pair})"
        if image.total_length <= 16:
            pair = image
