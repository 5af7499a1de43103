"""
Relator Classification Module
Heuristic one-relator classification: Baumslag-Solitar type relators
(u^n)^v = u^m and the Baumslag-type refinement u ~ v in the free group.
"""
import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Tuple
import sys

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))
from model.words import (
    Word, cyclic_core, is_cyclic_rotation, least_cyclic_representative, parse_word, power_root
)

logger = logging.getLogger(__name__)


class RelatorTag(Enum):
    BAUMSLAG_TYPE = "BAUMSLAG_TYPE"
    BS_TYPE = "BS_TYPE"
    UNCLASSIFIED = "UNCLASSIFIED"


@dataclass(frozen=True)
class BSWitness:
    """A rotation of r (or of r^-1) spelled literally as v^-1 u^n v u^-m"""
    u: Word
    v: Word
    n: int
    m: int

    def relator(self) -> Word:
        return self.v.inverse() * self.u.power(self.n) * self.v * self.u.power(-self.m)

    def to_text(self) -> str:
        return f"u={self.u} v={self.v or '1'} n={self.n} m={self.m}"

    def sort_key(self) -> Tuple:
        return (len(self.u), len(self.v), self.u, self.v, self.n, self.m)


@dataclass
class RelatorClass:
    tag: RelatorTag
    witness: Optional[BSWitness] = None
    witnesses: List[BSWitness] = field(default_factory=list)


def free_conjugate(a: Word, b: Word) -> bool:
    """Conjugacy in F(x, y): cyclic reductions are rotations of each other"""
    return is_cyclic_rotation(cyclic_core(a), cyclic_core(b))


def _factor(word: Word, max_piece: Optional[int]) -> List[BSWitness]:
    """All literal factorizations word = v^-1 u^n v u^-m with n, m nonzero"""
    letters = word.letters
    size = len(letters)
    found = []
    longest = (size - 2) // 2 if max_piece is None else min(max_piece, (size - 2) // 2)
    for a in range(longest + 1):
        v = Word(letters[:a]).inverse()
        rest = letters[a:]
        for s in range(1, len(rest) - a):
            if rest[s:s + a] != v.letters:
                continue
            head, tail = Word(rest[:s]), Word(rest[s + a:])
            u, n = power_root(head)
            if not u.is_cyclically_reduced():
                continue
            tail_root, exponent = power_root(tail)
            if tail_root == u:
                m = -exponent
            elif tail_root == u.inverse():
                m = exponent
            else:
                continue
            found.append(BSWitness(u, v, n, m))
    return found


def detect_bs_type(relator: Word, max_piece: Optional[int] = None,
                   all_witnesses: bool = False) -> RelatorClass:
    """
    Search the rotations of r and r^-1 for v^-1 u^n v u^-m with u cyclically
    reduced and |u|(|n| + |m|) + 2|v| = |r|

    `max_piece` bounds |v|. Witnesses read off rotations of r come before
    those of r^-1, then order by (|u|, |v|); only the first is kept unless
    `all_witnesses` is set.
    """
    core = cyclic_core(relator)
    sources = {}
    if core:
        for source, word in enumerate((core, core.inverse())):
            for rotation in word.rotations():
                for witness in _factor(rotation, max_piece):
                    sources.setdefault(witness, source)
    ordered = sorted(sources, key=lambda witness: (sources[witness],) + witness.sort_key())
    if not ordered:
        return RelatorClass(RelatorTag.UNCLASSIFIED)
    return RelatorClass(RelatorTag.BS_TYPE, ordered[0], ordered if all_witnesses else [ordered[0]])


def classify_relator(relator: Word) -> RelatorClass:
    """BAUMSLAG_TYPE if some witness has u ~ v in F(x, y), else BS_TYPE if any witness"""
    detected = detect_bs_type(relator, all_witnesses=True)
    for witness in detected.witnesses:
        if witness.v and free_conjugate(witness.u, witness.v):
            return RelatorClass(RelatorTag.BAUMSLAG_TYPE, witness, detected.witnesses)
    return detected


@dataclass
class ClassificationSummary:
    """Per-class totals of a relator batch"""
    total: int
    counts: Dict[str, int]
    rows: List[Tuple[str, str, str]]

    def to_tsv(self) -> str:
        return "".join(f"{r}\t{tag}\t{witness}\n" for r, tag, witness in self.rows)

    def print_summary(self) -> None:
        print("\n" + "=" * 70)
        print("RELATOR CLASSIFICATION")
        print("=" * 70)
        print(f"  Relators: {self.total}")
        for tag in RelatorTag:
            print(f"    {tag.value:<14} {self.counts.get(tag.value, 0)}")


def read_relators(path: Path) -> List[Word]:
    """Every word of a relator or pair file, deduplicated by cyclic class"""
    relators: List[Word] = []
    seen = set()
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            line = line.split("#", 1)[0].strip()
            for token in line.replace(",", " ").replace("(", " ").replace(")", " ").split():
                word = parse_word(token)
                key = least_cyclic_representative(word)
                if key and key not in seen:
                    seen.add(key)
                    relators.append(word)
    return relators


def classify_words(relators: List[Word]) -> ClassificationSummary:
    rows = []
    counts: Counter = Counter()
    for relator in relators:
        result = classify_relator(relator)
        counts[result.tag.value] += 1
        witness = result.witness.to_text() if result.witness else "-"
        rows.append((relator.to_text(), result.tag.value, witness))
    logger.info(f"classified {len(relators)} relators: {dict(counts)}")
    return ClassificationSummary(total=len(relators), counts=dict(counts), rows=rows)


def classify_file(path: Path) -> ClassificationSummary:
    return classify_words(read_relators(path))
