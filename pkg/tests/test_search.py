"""
Tests for the breadth-first search driver
"""
import json

import pytest

from model.checkpoint import load_checkpoint
from model.errors import CheckpointError, InvariantViolation
from model.moves import parse_script, replay_script
from model.search import SearchConfig, check_neighbor_symmetry, neighbors, run, within_bounds
from model.words import ak_pair, parse_pair


def p(text):
    return parse_pair(text)


def test_config_defaults_and_validation():
    cfg = SearchConfig(seed=p("x y"), word_bound=5)
    assert cfg.total_bound == 12
    assert SearchConfig(seed=p("x y"), word_bound=5, total_bound=9).total_bound == 9
    for bad in ({"word_bound": 0}, {"rounds": -1}, {"threads": 0},
                {"mode": "explore"}, {"normal_form": "weak"}):
        with pytest.raises(ValueError):
            SearchConfig(seed=p("x y"), **bad)


def test_within_bounds():
    cfg = SearchConfig(seed=p("x y"), word_bound=3)
    assert within_bounds(p("xxxx y"), cfg)
    assert not within_bounds(p("xxxx yyyy"), cfg)
    assert not within_bounds(p("xxxxxx yyy"), cfg)


def test_canonical_pair_has_no_new_neighbours():
    cfg = SearchConfig(seed=p("x y"), word_bound=3, rounds=1)
    assert neighbors(p("x y"), cfg) == []
    assert check_neighbor_symmetry(p("x y"), cfg) == []


def test_enumerate_canonical_component():
    report = run(SearchConfig(seed=p("y x"), word_bound=3, rounds=1))
    assert report.counts == {2: 1}
    assert report.visited == 1
    assert report.counts_tsv() == "# ac-counts/1 seed=y,x L=3 D=1 bound=8 nf=full\n2\t1\n"
    assert not report.aborted


def test_trivialize_from_canonical_seed():
    report = run(SearchConfig(seed=p("x y"), word_bound=3, rounds=1, mode="trivialize"))
    assert report.found
    assert report.witness == "START x y\nNF\nTARGET x y\n"
    assert report.witness_length == 0
    assert report.witness_acm_moves == 0


def test_trivialize_witness_replays_in_cyclic_mode():
    cfg = SearchConfig(seed=p("xy y"), word_bound=2, rounds=1, mode="trivialize",
                       normal_form="cyclic")
    report = run(cfg)
    assert report.found
    assert report.witness.startswith("START xy y\nCNF\n")
    assert report.witness.endswith("TARGET x y\n")
    assert report.witness_length == 1

    replayed = replay_script(parse_script(report.witness), word_bound=2)
    assert replayed.succeeded, replayed.reason


def test_trivialize_exhausts_unreachable_target():
    cfg = SearchConfig(seed=p("x y"), word_bound=2, rounds=1, mode="trivialize",
                       target=p("xx y"), normal_form="cyclic")
    report = run(cfg)
    assert not report.found
    assert report.exhausted
    assert report.witness is None
    assert report.visited > 1


def test_seed_with_wrong_determinant_is_rejected():
    with pytest.raises(InvariantViolation):
        run(SearchConfig(seed=p("xy xY"), word_bound=2))


def test_neighbours_are_acm_substitutions_only():
    cfg = SearchConfig(seed=p("xy y"), word_bound=2, rounds=0, normal_form="cyclic")
    assert neighbors(p("xy y"), cfg) == []
    cfg = SearchConfig(seed=p("xy y"), word_bound=2, rounds=1, normal_form="cyclic")
    found = neighbors(p("xy y"), cfg)
    assert (p("x y"), "ACM 1 x\nCNF") in found
    assert all(text.startswith("ACM ") for _, text in found)


@pytest.mark.parametrize("threads", [4, 8])
def test_worker_count_does_not_change_results(threads):
    base = dict(seed=p("x y"), word_bound=3, rounds=1, normal_form="cyclic")
    single = run(SearchConfig(threads=1, **base))
    pooled = run(SearchConfig(threads=threads, **base))
    assert pooled.counts == single.counts
    assert pooled.pair_counts == single.pair_counts
    assert pooled.visited == single.visited
    assert single.visited > 1


def test_checkpoint_resume_matches(tmp_path):
    path = tmp_path / "search.ckpt"
    cfg = SearchConfig(seed=p("x y"), word_bound=2, rounds=1, normal_form="cyclic",
                       checkpoint_path=path, checkpoint_every=1)
    first = run(cfg)
    assert path.exists()

    echo, state = load_checkpoint(path)
    assert echo == cfg.echo()
    assert len(state) == first.visited

    resumed = run(cfg, resume=path)
    assert resumed.counts == first.counts
    assert resumed.visited == first.visited

    other = SearchConfig(seed=p("x y"), word_bound=3, rounds=1, normal_form="cyclic")
    with pytest.raises(CheckpointError):
        run(other, resume=path)


def test_resume_from_mid_run_checkpoint(tmp_path):
    base = dict(seed=p("x y"), word_bound=3, rounds=1, normal_form="cyclic")
    uninterrupted = run(SearchConfig(**base))
    assert uninterrupted.visited > 3

    path = tmp_path / "mid.ckpt"
    interrupted = run(SearchConfig(max_visited=3, checkpoint_path=path, checkpoint_every=1, **base))
    assert interrupted.aborted
    _, state = load_checkpoint(path)
    assert any(state.frontier.values())

    resumed = run(SearchConfig(checkpoint_path=path, **base), resume=path)
    assert not resumed.aborted
    assert resumed.visited == uninterrupted.visited
    assert resumed.counts == uninterrupted.counts
    assert resumed.pair_counts == uninterrupted.pair_counts


def test_memory_guard_aborts_and_keeps_frontier(tmp_path):
    path = tmp_path / "guard.ckpt"
    seed = p("xy y")
    cfg = SearchConfig(seed=seed, word_bound=2, rounds=1, normal_form="cyclic",
                       max_visited=1, checkpoint_path=path)
    report = run(cfg)
    assert report.aborted
    assert report.visited == 2

    _, state = load_checkpoint(path)
    assert 0 in state.frontier[seed.total_length]


def test_presentation_counts_weigh_swaps():
    full = run(SearchConfig(seed=p("y x"), word_bound=3, rounds=1))
    assert full.pair_counts == {2: 1}
    cyclic = run(SearchConfig(seed=p("y x"), word_bound=1, rounds=0, normal_form="cyclic"))
    assert cyclic.counts == {2: 1}
    assert cyclic.pair_counts == {2: 2}
    assert cyclic.counts_tsv().endswith("\n2\t2\n")


def test_report_save(tmp_path):
    report = run(SearchConfig(seed=p("x y"), word_bound=2, rounds=0))
    path = tmp_path / "reports" / "search.json"
    report.save(path)
    data = json.loads(path.read_text(encoding="utf-8"))
    assert data["counts"] == {"2": 1}
    assert data["pair_counts"] == {"2": 1}
    assert data["mode"] == "enumerate"
