"""
Tests for pseudo-conjugacy graphs, the harvest and the finite quotient oracle
"""
import pytest

from conftest import random_word
from model.conjugacy import (
    Verdict, acm_classes, acm_conjugates, build_pcg, check_symmetry, finite_quotient_oracle,
    harvest, harvest_graph, harvested_cores, oracle_witness
)
from model.errors import DegeneratePresentation
from model.weighted_digraph import loop_graph
from model.words import parse_word


def w(text):
    return parse_word(text)


def words(*texts):
    return frozenset(w(t) for t in texts)


def test_pcg_of_relator_itself_has_unit_modulus():
    pcg = build_pcg(w("x"), w("x"), 1)
    assert pcg.modulus == 1
    assert "N=1" in pcg.summary()


def test_pcg_rejects_trivial_words():
    with pytest.raises(DegeneratePresentation):
        build_pcg(w("xX"), w("y"))
    with pytest.raises(DegeneratePresentation):
        build_pcg(w("x"), w("1"))


def test_harvest_of_plain_loop():
    pcg = build_pcg(w("xy"), w("xxyy"), 0)
    assert harvest(pcg, 2).words == words("xy", "yx")
    assert harvest_graph(loop_graph(w("x")), 3).words == words("x")


def test_harvest_respects_word_bound():
    assert harvest_graph(loop_graph(w("xyy")), 2).words == frozenset()


def test_harvest_truncates_at_bin_cap(caplog):
    result = harvest_graph(loop_graph(w("xy")), 4, bin_cap=1)
    assert result.truncated
    assert "harvest is partial" in caplog.text


def test_acm_conjugates_without_completion_is_rotation_class():
    assert acm_conjugates(w("x"), w("y"), 3, 0) == words("x")
    assert acm_conjugates(w("xxY"), w("xyxYXY"), 3, 0) == words("xxY", "xYx", "Yxx")


def test_acm_conjugates_modulo_generator():
    assert acm_conjugates(w("x"), w("y"), 1, 1) == words("x")
    conjugates = acm_conjugates(w("x"), w("y"), 3, 1)
    assert {w("xy"), w("yx"), w("yxy")} <= conjugates
    assert w("xx") not in conjugates
    assert w("y") not in conjugates
    assert all(c.exponent_sum(0) == 1 for c in conjugates)


def test_acm_conjugates_swap_in_braid_group():
    # the conjugator xyx exchanges x and y modulo xyx = yxy
    conjugates = acm_conjugates(w("xxxYYYY"), w("xyxYXY"), 7, 2)
    assert w("yyyXXXX") in conjugates
    assert w("xxxYYYY") in conjugates


def test_check_symmetry_on_small_instance():
    assert check_symmetry(w("x"), w("y"), 3, 1) == []


def test_oracle_on_conjugate_words():
    assert finite_quotient_oracle(w("x"), w("x"), w("xyxYXY")) == Verdict.CONSISTENT
    # x and y are conjugate in the braid group
    assert finite_quotient_oracle(w("x"), w("y"), w("xyxYXY")) == Verdict.CONSISTENT


def test_oracle_refutes_with_witness():
    witness = oracle_witness(w("x"), w("xx"), w("y"))
    assert witness is not None
    assert witness.degree == 2
    assert finite_quotient_oracle(w("x"), w("xx"), w("y")) == Verdict.REFUTED


def test_oracle_refutes_in_small_degree():
    # y has order 2 in S_2 while y^2 is trivial
    assert finite_quotient_oracle(w("y"), w("yy"), w("x"), trials=0, max_degree=3) == Verdict.REFUTED


def test_conjugate_sets_grow_with_rounds(rng):
    for _ in range(12):
        u = random_word(rng, 5)
        v = random_word(rng, 5)
        previous = acm_conjugates(u, v, 6, 0)
        for rounds in (1, 2):
            current = acm_conjugates(u, v, 6, rounds)
            assert previous <= current, f"U_{rounds - 1}({u}, {v}) not in U_{rounds}"
            previous = current


def test_class_cache_matches_direct_harvest(rng):
    for _ in range(12):
        u = random_word(rng, 6)
        v = random_word(rng, 5)
        for variant in (u, u.rotate(1), u.inverse()):
            direct = harvest(build_pcg(variant, v, 1), 6)
            assert harvested_cores(variant, v, 6, 1) == direct.cores, f"{variant} modulo {v}"
            assert acm_conjugates(variant, v, 6, 1) == direct.words


def test_acm_classes_are_least_representatives():
    classes = acm_classes(w("xy"), w("y"), 2, 1)
    assert w("x") in classes
    assert w("xy") in classes
    assert list(classes) == sorted(classes)
    assert acm_classes(w("YX"), w("Y"), 2, 1) == classes


def _assert_sound(rng, samples, max_length, word_bound, rounds, max_degree, trials):
    for _ in range(samples):
        u = random_word(rng, max_length)
        v = random_word(rng, max_length)
        for conjugate in acm_conjugates(u, v, word_bound, rounds):
            verdict = finite_quotient_oracle(u, conjugate, v, trials=trials, max_degree=max_degree)
            assert verdict == Verdict.CONSISTENT, f"{conjugate} !~ {u} modulo {v}"


def test_harvested_conjugates_pass_oracle(rng):
    _assert_sound(rng, samples=12, max_length=6, word_bound=6, rounds=1, max_degree=4, trials=0)


@pytest.mark.slow
def test_harvested_conjugates_pass_oracle_large(rng):
    _assert_sound(rng, samples=200, max_length=8, word_bound=8, rounds=2, max_degree=5, trials=200)
