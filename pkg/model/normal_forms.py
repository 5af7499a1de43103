"""
Normal Forms Module
Canonical representatives of relator pairs under the cyclic relation
(rotation, inversion, swap) and under the cyclic + automorphism relation,
computed by Whitehead minimization followed by a closure over the
minimal-length level.
"""
import logging
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from pathlib import Path
from typing import FrozenSet, List, Tuple
import sys

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))
from config.settings import NF_CACHE_SIZE, ORBIT_CAP
from model.errors import DegeneratePresentation, OrbitCapExceeded
from model.words import (
    GEN_X, GEN_Y, Pair, Word, cyclic_core, least_cyclic_representative
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WhiteheadMove:
    """A rank-2 Whitehead automorphism given by the images of x and y"""
    index: int
    x_image: Word
    y_image: Word
    length_preserving: bool

    @property
    def name(self) -> str:
        return f"x->{self.x_image},y->{self.y_image}"

    def image(self, word: Word) -> Word:
        """Image of a (not necessarily cyclic) word"""
        images = (self.x_image, self.x_image.inverse(), self.y_image, self.y_image.inverse())
        letters: List[int] = []
        for letter in word:
            letters.extend(images[letter].letters)
        return Word(letters)


def _build_table() -> Tuple[WhiteheadMove, ...]:
    moves = []
    # signed permutations of {x, y}, identity first
    for swap, x_sign, y_sign in product((False, True), (1, -1), (1, -1)):
        x_target, y_target = (GEN_Y, GEN_X) if swap else (GEN_X, GEN_Y)
        moves.append((x_target.power(x_sign), y_target.power(y_sign), True))
    # multiplier moves: a fixed, the other generator t -> ta, a^-1 t, a^-1 t a
    for code in range(4):
        a = Word((code,))
        if code < 2:
            t = GEN_Y
            images = [(GEN_X, t * a), (GEN_X, a.inverse() * t), (GEN_X, a.inverse() * t * a)]
        else:
            t = GEN_X
            images = [(t * a, GEN_Y), (a.inverse() * t, GEN_Y), (a.inverse() * t * a, GEN_Y)]
        for x_image, y_image in images:
            moves.append((x_image, y_image, False))
    return tuple(
        WhiteheadMove(index, x_image, y_image, preserving)
        for index, (x_image, y_image, preserving) in enumerate(moves)
    )


WHITEHEAD_TABLE = _build_table()


def whitehead_table() -> Tuple[WhiteheadMove, ...]:
    """The 20 Whitehead automorphisms of F(x, y); the first 8 preserve length"""
    return WHITEHEAD_TABLE


def apply_whitehead(word: Word, move: WhiteheadMove) -> Word:
    """Image of a cyclic word, cyclically reduced"""
    return cyclic_core(move.image(word))


# =============================================================================
# Cyclic normal form
# =============================================================================

@lru_cache(maxsize=NF_CACHE_SIZE)
def cyclic_nf(pair: Pair) -> Pair:
    """
    Least pair under rotation and inversion of each component and swap

    Raises:
        DegeneratePresentation: if a component is trivial as a cyclic word
    """
    first = least_cyclic_representative(pair.first)
    second = least_cyclic_representative(pair.second)
    if not first or not second:
        raise DegeneratePresentation(f"pair ({pair}) has a trivial component")
    return Pair(first, second) if first <= second else Pair(second, first)


# =============================================================================
# Whitehead minimization
# =============================================================================

def _cyclic_pair(pair: Pair) -> Pair:
    first, second = cyclic_core(pair.first), cyclic_core(pair.second)
    if not first or not second:
        raise DegeneratePresentation(f"pair ({pair}) has a trivial component")
    return Pair(first, second)


def _apply_to_pair(pair: Pair, move: WhiteheadMove) -> Pair:
    return Pair(apply_whitehead(pair.first, move), apply_whitehead(pair.second, move))


def minimize_total_length(pair: Pair) -> Tuple[Pair, List[WhiteheadMove]]:
    """
    Greedy descent over the 12 non-length-preserving moves

    Each step takes the move with the largest decrease of total cyclic
    length (ties to the lower table index) and stops when none decreases it.
    """
    current = _cyclic_pair(pair)
    applied: List[WhiteheadMove] = []
    reducers = [m for m in WHITEHEAD_TABLE if not m.length_preserving]
    while True:
        best = None
        best_total = current.total_length
        for move in reducers:
            image = _apply_to_pair(current, move)
            if image.total_length < best_total:
                best, best_total = (move, image), image.total_length
        if best is None:
            return current, applied
        applied.append(best[0])
        current = best[1]


# =============================================================================
# Minimal-level orbit
# =============================================================================

@dataclass
class OrbitStatistics:
    """Sizes of the minimal-level orbits computed so far"""
    computed: int = 0
    total_size: int = 0
    largest: int = 0

    def record(self, size: int) -> None:
        self.computed += 1
        self.total_size += size
        self.largest = max(self.largest, size)

    def merge(self, other: "OrbitStatistics") -> None:
        self.computed += other.computed
        self.total_size += other.total_size
        self.largest = max(self.largest, other.largest)

    @property
    def mean(self) -> float:
        return self.total_size / self.computed if self.computed else 0.0


_ORBIT_STATS = OrbitStatistics()


def orbit_statistics() -> OrbitStatistics:
    return OrbitStatistics(_ORBIT_STATS.computed, _ORBIT_STATS.total_size, _ORBIT_STATS.largest)


def reset_orbit_statistics() -> None:
    global _ORBIT_STATS
    _ORBIT_STATS = OrbitStatistics()


def min_level_orbit(pair: Pair, cap: int = ORBIT_CAP) -> FrozenSet[Pair]:
    """
    Closure of cyclic_nf(pair) under all 20 moves followed by cyclic_nf,
    kept to pairs of the same total length

    Raises:
        OrbitCapExceeded: when the closure grows beyond `cap` pairs
    """
    start = cyclic_nf(pair)
    level = start.total_length
    seen = {start}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        for move in WHITEHEAD_TABLE:
            image = _apply_to_pair(current, move)
            if image.total_length != level:
                continue
            image = cyclic_nf(image)
            if image in seen:
                continue
            seen.add(image)
            if len(seen) > cap:
                raise OrbitCapExceeded(
                    f"minimal-level orbit of ({start}) exceeds {cap} pairs"
                )
            queue.append(image)
    _ORBIT_STATS.record(len(seen))
    return frozenset(seen)


@lru_cache(maxsize=NF_CACHE_SIZE)
def _full_nf_of_class(cyclic: Pair) -> Pair:
    minimal, _ = minimize_total_length(cyclic)
    return min(min_level_orbit(minimal))


@lru_cache(maxsize=NF_CACHE_SIZE)
def full_nf(pair: Pair) -> Pair:
    """Least element of the minimal-level orbit of the Whitehead-minimized pair"""
    return _full_nf_of_class(cyclic_nf(pair))


def normal_form(pair: Pair, kind: str = "full") -> Pair:
    """Dispatch on the normal form kind used by the search: "full" or "cyclic" """
    if kind == "cyclic":
        return cyclic_nf(pair)
    return full_nf(pair)


# =============================================================================
# Presentation counts
# =============================================================================

def _ordered_nf(pair: Pair) -> Pair:
    """Least cyclic representative of each component, order kept"""
    first = least_cyclic_representative(pair.first)
    second = least_cyclic_representative(pair.second)
    if not first or not second:
        raise DegeneratePresentation(f"pair ({pair}) has a trivial component")
    return Pair(first, second)


@lru_cache(maxsize=NF_CACHE_SIZE)
def presentation_multiplicity(pair: Pair, kind: str = "full", cap: int = ORBIT_CAP) -> int:
    """
    Number of ordered presentations a normal form stands for: 1 when the
    swapped pair is equivalent to the pair without the swap, 2 otherwise

    Under "full" the ordered equivalence allows rotation, inversion of each
    component and automorphisms; under "cyclic" only rotation and inversion.

    Raises:
        OrbitCapExceeded: when the ordered minimal-level orbit grows beyond `cap`
    """
    if kind == "cyclic":
        return 1 if _ordered_nf(pair) == _ordered_nf(pair.swap()) else 2
    minimal, _ = minimize_total_length(pair)
    start = _ordered_nf(minimal)
    swapped = _ordered_nf(minimal.swap())
    level = start.total_length
    seen = {start}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        if current == swapped:
            return 1
        for move in WHITEHEAD_TABLE:
            image = _apply_to_pair(current, move)
            if image.total_length != level:
                continue
            image = _ordered_nf(image)
            if image in seen:
                continue
            seen.add(image)
            if len(seen) > cap:
                raise OrbitCapExceeded(
                    f"ordered minimal-level orbit of ({start}) exceeds {cap} pairs"
                )
            queue.append(image)
    return 2
