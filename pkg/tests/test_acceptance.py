"""
Long acceptance runs: the count columns of the AK(3) component, trivialization
of AK(2) and the Gordon presentation, and the Miller-Schupp searches. Run with
`pytest --runslow`.
"""
import pytest

from config.settings import AK2_PAIR, DEFAULT_ROUNDS, GORDON_PAIR, PRESENTATIONS_DIR, TABLE1_REFERENCE
from model.moves import parse_script, replay_script
from model.search import SearchConfig, run
from model.words import ak_pair, parse_pair, read_pairs

pytestmark = pytest.mark.slow


def _trivialize(seed, word_bound=12, **kwargs):
    cfg = SearchConfig(seed=seed, word_bound=word_bound, rounds=DEFAULT_ROUNDS,
                       mode="trivialize", **kwargs)
    return run(cfg)


def _assert_witness_replays(report, name, word_bound=12):
    replayed = replay_script(parse_script(report.witness, name=name), word_bound=word_bound,
                             max_rounds=DEFAULT_ROUNDS)
    assert replayed.succeeded, f"step {replayed.failed_index}: {replayed.reason}"


def test_ak3_component_counts_at_l10():
    report = run(SearchConfig(seed=ak_pair(3), word_bound=10, rounds=DEFAULT_ROUNDS))
    assert not report.aborted
    assert report.pair_counts == TABLE1_REFERENCE[10]
    assert all(count % 2 == 0 for count in report.pair_counts.values())


def test_small_totals_do_not_grow_with_word_bound():
    columns = {}
    for bound in (10, 11, 12):
        report = run(SearchConfig(seed=ak_pair(3), word_bound=bound, rounds=DEFAULT_ROUNDS))
        assert not report.aborted
        columns[bound] = {t: report.pair_counts.get(t, 0) for t in (13, 14, 15)}
    assert columns[10] == columns[11] == columns[12] == {13: 4, 14: 10, 15: 70}


def test_ak2_is_trivialized_quickly_with_few_acm_moves():
    report = _trivialize(parse_pair(AK2_PAIR))
    assert report.found
    assert report.runtime_seconds < 10
    assert report.witness_acm_moves < 5
    _assert_witness_replays(report, "ak2")


def test_gordon_is_trivialized():
    report = _trivialize(parse_pair(GORDON_PAIR))
    assert report.found
    assert report.witness_acm_moves < 5
    _assert_witness_replays(report, "gordon")


@pytest.mark.parametrize("pair", read_pairs(PRESENTATIONS_DIR / "miller_schupp_trivializable.txt"),
                         ids=lambda pair: pair.to_text().replace(" ", "_"))
def test_miller_schupp_pairs_are_trivialized(pair):
    report = _trivialize(pair)
    assert not report.aborted
    assert report.found
    _assert_witness_replays(report, pair.to_text())
