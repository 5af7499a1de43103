"""
Conjugacy Harvesting Module
ACM-move engine: pseudo-conjugacy graphs built by D rounds of R-completion
over Loop(u), and harvesting of their weight-1 circuits up to a length bound.

Also hosts the finite-quotient soundness oracle: homomorphisms of F(x, y)
into small symmetric groups that kill the relator can refute a conjugacy
claim by comparing cycle types.
"""
import logging
import random
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple
import sys

from sympy.combinatorics import Permutation
from sympy.combinatorics.named_groups import SymmetricGroup

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))
from config.settings import (
    CONJUGATES_CACHE_SIZE, DEFAULT_ROUNDS, HARVEST_BIN_CAP,
    ORACLE_MAX_DEGREE, ORACLE_SEED, ORACLE_TRIALS
)
from model.errors import DegeneratePresentation
from model.weighted_digraph import (
    WeightedDigraph, loop_graph, modulus_text, r_complete, symmetrize
)
from model.words import Word, cyclic_core, is_cyclic_rotation, least_cyclic_representative

logger = logging.getLogger(__name__)

# Largest degree reached by the randomized part of the oracle
ORACLE_RANDOM_MAX_DEGREE = 7

# Last label of a partner bin; None is the empty path
PARTNER_LABELS = (None, 0, 1, 2, 3)


@dataclass
class PseudoConjugacyGraph:
    """Folded graph whose circuits read conjugates of powers of base_word"""
    graph: WeightedDigraph
    base_word: Word
    relator: Word
    rounds: int

    @property
    def modulus(self) -> int:
        return self.graph.modulus

    def summary(self) -> str:
        return (
            f"PCG(u={self.base_word}, v={self.relator}, D={self.rounds}): "
            f"{self.graph.vertex_count()} vertices, N={modulus_text(self.modulus)}"
        )


@dataclass
class HarvestBin:
    """Reduced paths from the pivot sharing terminus, last label, weight and length"""
    terminus: int
    last_label: Optional[int]
    weight: int
    length: int
    paths: List[Tuple[int, ...]] = field(default_factory=list)


@dataclass
class Harvest:
    """Outcome of one harvest run"""
    cores: FrozenSet[Word]
    truncated: bool = False
    pivots: int = 0
    skipped: int = 0
    paths: int = 0

    @property
    def words(self) -> FrozenSet[Word]:
        """Every cyclic rotation of every harvested circuit label"""
        return frozenset(word for core in self.cores for word in core.rotations())


def build_pcg(u: Word, v: Word, rounds: int = DEFAULT_ROUNDS) -> PseudoConjugacyGraph:
    """
    Loop(u) completed `rounds` times with the symmetrized relator v

    Raises:
        DegeneratePresentation: if u or v is trivial
    """
    base = cyclic_core(u)
    if not base:
        raise DegeneratePresentation(f"cannot harvest conjugates of trivial word {u}")
    relators = symmetrize(v)
    graph = loop_graph(base).fold()
    for _ in range(rounds):
        graph = r_complete(graph, relators)
    pcg = PseudoConjugacyGraph(graph=graph, base_word=base, relator=cyclic_core(v), rounds=rounds)
    logger.debug(pcg.summary())
    return pcg


BinKey = Tuple[int, Optional[int], int, int]  # (terminus, last label, weight key, length)


def _collect_bins(adjacency: Dict[int, List[Tuple[int, int, int]]], removed: Set[int],
                  pivot: int, depth: int, key, cap: int
                  ) -> Tuple[Optional[Dict[BinKey, HarvestBin]], int]:
    """
    Depth-first enumeration of reduced paths from the pivot into bins

    The empty path sits in the bin with last label None. Returns
    (None, count) once more than `cap` paths have been produced.
    """
    bins: Dict[BinKey, HarvestBin] = {}

    def place(terminus: int, last: Optional[int], weight: int, path: Tuple[int, ...]) -> None:
        bin_key = (terminus, last, key(weight), len(path))
        if bin_key not in bins:
            bins[bin_key] = HarvestBin(terminus, last, key(weight), len(path))
        bins[bin_key].paths.append(path)

    place(pivot, None, 0, ())
    count = 1
    stack = [(pivot, (), 0, None)]
    while stack:
        vertex, path, weight, last = stack.pop()
        if len(path) == depth:
            continue
        for label, edge_weight, terminus in adjacency[vertex]:
            if terminus in removed:
                continue
            if last is not None and label == last ^ 1:
                continue
            extended = path + (label,)
            total = weight + edge_weight
            place(terminus, label, total, extended)
            count += 1
            if count > cap:
                return None, count
            stack.append((terminus, extended, total, label))
    return bins, count


def harvest_graph(graph: WeightedDigraph, word_bound: int,
                  bin_cap: int = HARVEST_BIN_CAP) -> Harvest:
    """
    All weight-1 circuits of length at most `word_bound` in a folded graph

    Pivots are taken in vertex-id order and removed once processed. The
    result holds the cyclic reduction of each circuit label found.
    """
    modulus = graph.modulus
    key = graph.weight_key
    adjacency = graph.adjacency()
    depth = (word_bound + 1) // 2
    removed: Set[int] = set()
    circuits: Set[Tuple[int, ...]] = set()
    result = Harvest(cores=frozenset())

    for pivot in sorted(adjacency):
        live = [e for e in adjacency[pivot] if e[2] not in removed]
        if modulus != 1 and all(key(weight) == 0 for _, weight, _ in live):
            result.skipped += 1
            continue
        bins, count = _collect_bins(adjacency, removed, pivot, depth, key, bin_cap)
        result.paths += count
        result.pivots += 1
        removed.add(pivot)
        if bins is None:
            result.truncated = True
            logger.warning(
                f"pivot {pivot} abandoned after {count} paths (bin cap {bin_cap}); "
                f"harvest is partial"
            )
            continue
        returns: Dict[BinKey, List[Tuple[int, ...]]] = {}
        # compatible bins: same terminus, distinct last labels, weights
        # differing by 1, lengths differing by 0 or 1
        for head_bin in bins.values():
            for partner_length in (head_bin.length, head_bin.length - 1):
                if partner_length < 0 or head_bin.length + partner_length > word_bound:
                    continue
                for partner_last in PARTNER_LABELS:
                    if partner_last == head_bin.last_label:
                        continue
                    tail_key = (head_bin.terminus, partner_last,
                                key(head_bin.weight - 1), partner_length)
                    tail_bin = bins.get(tail_key)
                    if tail_bin is None:
                        continue
                    if tail_key not in returns:
                        returns[tail_key] = [tuple(l ^ 1 for l in reversed(tail))
                                             for tail in tail_bin.paths]
                    # distinct last labels: the junction does not cancel
                    for head in head_bin.paths:
                        circuits.update(head + back for back in returns[tail_key])

    result.cores = frozenset(cyclic_core(Word._trusted(letters)) for letters in circuits)
    logger.debug(
        f"harvest L={word_bound}: {len(circuits)} circuits, {len(result.cores)} cores, "
        f"{result.pivots} pivots, {result.skipped} skipped"
    )
    return result


def harvest(pcg: PseudoConjugacyGraph, word_bound: int,
            bin_cap: int = HARVEST_BIN_CAP) -> Harvest:
    return harvest_graph(pcg.graph, word_bound, bin_cap)


@lru_cache(maxsize=CONJUGATES_CACHE_SIZE)
def _class_cores(u_class: Word, v_class: Word, word_bound: int, rounds: int) -> FrozenSet[Word]:
    return harvest(build_pcg(u_class, v_class, rounds), word_bound).cores


def harvested_cores(u: Word, v: Word, word_bound: int,
                    rounds: int = DEFAULT_ROUNDS) -> FrozenSet[Word]:
    """
    Cyclic cores of the harvest for u modulo v

    The harvest only depends on the cyclic classes of u and v: it is run once
    per class pair and inverted when u reads its class backwards.
    """
    core = cyclic_core(u)
    u_class = least_cyclic_representative(core)
    cores = _class_cores(u_class, least_cyclic_representative(v), word_bound, rounds)
    if not core or is_cyclic_rotation(u_class, core):
        return cores
    return frozenset(c.inverse() for c in cores)


@lru_cache(maxsize=CONJUGATES_CACHE_SIZE)
def acm_conjugates(u: Word, v: Word, word_bound: int,
                   rounds: int = DEFAULT_ROUNDS) -> FrozenSet[Word]:
    """
    U_D(u, v): conjugates of u in <x, y | v> of length at most L found by the
    pseudo-conjugacy graph of depth D
    """
    return frozenset(
        word for core in harvested_cores(u, v, word_bound, rounds) for word in core.rotations()
    )


@lru_cache(maxsize=CONJUGATES_CACHE_SIZE)
def _class_representatives(u_class: Word, v_class: Word, word_bound: int,
                           rounds: int) -> Tuple[Word, ...]:
    cores = _class_cores(u_class, v_class, word_bound, rounds)
    return tuple(sorted({least_cyclic_representative(core) for core in cores}))


def acm_classes(u: Word, v: Word, word_bound: int,
                rounds: int = DEFAULT_ROUNDS) -> Tuple[Word, ...]:
    """Least cyclic representatives of the classes in U_D(u, v), sorted"""
    return _class_representatives(least_cyclic_representative(u),
                                  least_cyclic_representative(v), word_bound, rounds)


def check_symmetry(u: Word, v: Word, word_bound: int, rounds: int = DEFAULT_ROUNDS) -> List[Word]:
    """
    Harvested conjugates u' whose own harvest at depth D+1 misses u

    Failures are diagnostics: they are logged, not raised.
    """
    target = cyclic_core(u)
    misses = []
    for conjugate in sorted(acm_conjugates(u, v, word_bound, rounds)):
        if target not in acm_conjugates(conjugate, v, word_bound, rounds + 1):
            misses.append(conjugate)
    if misses:
        logger.info(
            f"conjugacy symmetry: {len(misses)} of the conjugates of {u} modulo {v} "
            f"do not recover it at D={rounds + 1}"
        )
    return misses


# =============================================================================
# Finite quotient oracle
# =============================================================================

class Verdict(Enum):
    CONSISTENT = "CONSISTENT"
    REFUTED = "REFUTED"


@dataclass(frozen=True)
class OracleWitness:
    """Homomorphism into S_degree (array forms) separating two words"""
    degree: int
    x_image: Tuple[int, ...]
    y_image: Tuple[int, ...]


def _compose(first: Sequence[int], second: Sequence[int]) -> Tuple[int, ...]:
    """Apply `first`, then `second`"""
    return tuple(second[i] for i in first)


def _inverse(perm: Sequence[int]) -> Tuple[int, ...]:
    result = [0] * len(perm)
    for i, image in enumerate(perm):
        result[image] = i
    return tuple(result)


@lru_cache(maxsize=None)
def _cycle_type(perm: Tuple[int, ...]) -> Tuple[Tuple[int, int], ...]:
    return tuple(sorted(Permutation(list(perm)).cycle_structure.items()))


@lru_cache(maxsize=None)
def _group_table(degree: int):
    """Elements of S_degree with multiplication and inversion tables over indices"""
    elements = [tuple(p.array_form) for p in SymmetricGroup(degree).generate()]
    index = {perm: i for i, perm in enumerate(elements)}
    product = [[index[_compose(a, b)] for b in elements] for a in elements]
    inverse = [index[_inverse(a)] for a in elements]
    identity = index[tuple(range(degree))]
    return elements, product, inverse, identity


def _evaluate(word: Word, x_index: int, y_index: int, table) -> int:
    elements, product, inverse, identity = table
    images = (x_index, inverse[x_index], y_index, inverse[y_index])
    current = identity
    for letter in word:
        current = product[current][images[letter]]
    return current


@lru_cache(maxsize=4096)
def _killing_homomorphisms(relator: Word, degree: int) -> Tuple[Tuple[int, int], ...]:
    """Index pairs (x, y) of S_degree with relator mapped to the identity"""
    table = _group_table(degree)
    size = len(table[0])
    identity = table[3]
    return tuple(
        (x, y) for x in range(size) for y in range(size)
        if _evaluate(relator, x, y, table) == identity
    )


def _evaluate_perm(word: Word, x_image: Tuple[int, ...], y_image: Tuple[int, ...]) -> Tuple[int, ...]:
    images = (x_image, _inverse(x_image), y_image, _inverse(y_image))
    current = tuple(range(len(x_image)))
    for letter in word:
        current = _compose(current, images[letter])
    return current


def oracle_witness(u: Word, u_prime: Word, v: Word, trials: int = ORACLE_TRIALS,
                   max_degree: int = ORACLE_MAX_DEGREE) -> Optional[OracleWitness]:
    """
    A homomorphism F(x, y) -> S_k killing v with phi(u), phi(u') in distinct
    conjugacy classes, or None

    Exhaustive for 2 <= k <= max_degree, then `trials` seeded random image
    pairs in degrees max_degree+1 .. 7.
    """
    for degree in range(2, max_degree + 1):
        table = _group_table(degree)
        elements = table[0]
        for x, y in _killing_homomorphisms(v, degree):
            left = elements[_evaluate(u, x, y, table)]
            right = elements[_evaluate(u_prime, x, y, table)]
            if _cycle_type(left) != _cycle_type(right):
                return OracleWitness(degree, elements[x], elements[y])

    degrees = list(range(max_degree + 1, ORACLE_RANDOM_MAX_DEGREE + 1))
    if not degrees or trials <= 0:
        return None
    rng = random.Random(ORACLE_SEED)
    for _ in range(trials):
        degree = rng.choice(degrees)
        x_image = tuple(rng.sample(range(degree), degree))
        y_image = tuple(rng.sample(range(degree), degree))
        if _evaluate_perm(v, x_image, y_image) != tuple(range(degree)):
            continue
        left = _evaluate_perm(u, x_image, y_image)
        right = _evaluate_perm(u_prime, x_image, y_image)
        if _cycle_type(left) != _cycle_type(right):
            return OracleWitness(degree, x_image, y_image)
    return None


def finite_quotient_oracle(u: Word, u_prime: Word, v: Word, trials: int = ORACLE_TRIALS,
                           max_degree: int = ORACLE_MAX_DEGREE) -> Verdict:
    """
    REFUTED proves u and u' are not conjugate in <x, y | v>; CONSISTENT is
    evidence only
    """
    witness = oracle_witness(u, u_prime, v, trials, max_degree)
    if witness is not None:
        logger.debug(f"{u} !~ {u_prime} modulo {v}: witness in S_{witness.degree}")
        return Verdict.REFUTED
    return Verdict.CONSISTENT
