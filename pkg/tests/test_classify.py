"""
Tests for Baumslag-Solitar type relator classification
"""
from model.classify import (
    BSWitness, RelatorTag, classify_file, classify_relator, classify_words, detect_bs_type,
    free_conjugate, read_relators
)
from model.words import is_cyclic_rotation, parse_word


def w(text):
    return parse_word(text)


def _is_rotation_of_relator_or_inverse(word, relator):
    return is_cyclic_rotation(word, relator) or is_cyclic_rotation(word, relator.inverse())


def test_bs_type_relator():
    detected = detect_bs_type(w("xyyXYYY"), all_witnesses=True)
    assert detected.tag == RelatorTag.BS_TYPE
    assert BSWitness(w("y"), w("X"), 2, 3) in detected.witnesses
    for witness in detected.witnesses:
        assert _is_rotation_of_relator_or_inverse(witness.relator(), w("xyyXYYY"))
    assert classify_relator(w("xyyXYYY")).tag == RelatorTag.BS_TYPE


def test_witness_order_and_single_result():
    detected = detect_bs_type(w("xyyXYYY"))
    assert len(detected.witnesses) == 1
    assert detected.witness == detected.witnesses[0]
    assert detected.witness == BSWitness(w("y"), w("X"), 2, 3)
    assert detect_bs_type(w("yyyxYYX")).witness == BSWitness(w("y"), w("x"), 3, 2)


def test_witness_text():
    assert BSWitness(w("y"), w("X"), 2, 3).to_text() == "u=y v=X n=2 m=3"
    assert BSWitness(w("y"), w("X"), 2, 3).relator() == w("xyyXYYY")


def test_unclassified_relators():
    assert classify_relator(w("xyxYXY")).tag == RelatorTag.UNCLASSIFIED
    assert classify_relator(w("xxxYYYY")).tag == RelatorTag.UNCLASSIFIED
    assert classify_relator(w("xy")).witness is None


def test_piece_bound():
    assert detect_bs_type(w("xyyXYYY"), max_piece=0).tag == RelatorTag.UNCLASSIFIED


def test_baumslag_type_relator():
    result = classify_relator(w("YXyxYxyXX"))
    assert result.tag == RelatorTag.BAUMSLAG_TYPE
    assert free_conjugate(result.witness.u, result.witness.v)
    assert _is_rotation_of_relator_or_inverse(result.witness.relator(), w("YXyxYxyXX"))
    assert BSWitness(w("x"), w("Yxy"), 1, 2) in result.witnesses


def test_free_conjugate():
    assert free_conjugate(w("xy"), w("yx"))
    assert free_conjugate(w("x"), w("Yxy"))
    assert not free_conjugate(w("x"), w("X"))


def test_classify_words_summary():
    summary = classify_words([w("xyyXYYY"), w("xyxYXY"), w("YXyxYxyXX")])
    assert summary.total == 3
    assert summary.counts == {"BS_TYPE": 1, "UNCLASSIFIED": 1, "BAUMSLAG_TYPE": 1}
    rows = summary.to_tsv().splitlines()
    assert rows[1] == "xyxYXY\tUNCLASSIFIED\t-"
    assert rows[0] == "xyyXYYY\tBS_TYPE\tu=y v=X n=2 m=3"


def test_read_relators_deduplicates_cyclic_classes(tmp_path):
    path = tmp_path / "relators.txt"
    path.write_text("# from a search\nxy yx\n(XY, xyyXYYY)\nYYYxyyX\n", encoding="utf-8")
    assert read_relators(path) == [w("xy"), w("xyyXYYY")]


def test_classify_file_summary(tmp_path):
    path = tmp_path / "relators.txt"
    path.write_text("xyyXYYY\nYXyxYxyXX\nxyxYXY\nyyxYYXy\n", encoding="utf-8")
    summary = classify_file(path)
    assert summary.total == 3
    assert summary.counts[RelatorTag.BS_TYPE.value] == 1
    assert summary.counts[RelatorTag.BAUMSLAG_TYPE.value] == 1
    assert summary.counts[RelatorTag.UNCLASSIFIED.value] == 1
