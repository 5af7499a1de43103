"""
Free Group Words Module
Packed words over {x, x^-1, y, y^-1}: free and cyclic reduction, shortlex
ordering, relator pairs and their abelianization.

Letters are 2-bit codes (x=0, X=1, y=2, Y=3, so the inverse of a letter is
``code ^ 1``). A word is stored as a tuple of letter codes; the packed form
puts 32 letters into every 64-bit cell, letter i at bits 2*(i % 32) of cell
i // 32.
"""
import struct
from dataclasses import dataclass
from functools import total_ordering
from pathlib import Path
from typing import Iterable, Iterator, List, Sequence, Tuple
import sys

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))
from model.errors import WordParseError

LETTERS = "xXyY"
LETTER_CODES = {ch: code for code, ch in enumerate(LETTERS)}
X, X_INV, Y, Y_INV = 0, 1, 2, 3

CELL_LETTERS = 32
CELL_BITS = 64
CELL_MASK = (1 << CELL_BITS) - 1

EMPTY_TEXT = "1"


def inverse_letter(letter: int) -> int:
    return letter ^ 1


def _reduce(letters: Iterable[int]) -> Tuple[int, ...]:
    """Stack-based free reduction"""
    stack: List[int] = []
    for letter in letters:
        if stack and stack[-1] == letter ^ 1:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def _invert(letters: Sequence[int]) -> Tuple[int, ...]:
    return tuple(letter ^ 1 for letter in reversed(letters))


def pack_letters(letters: Sequence[int]) -> Tuple[int, ...]:
    """Pack letter codes 32 per 64-bit cell"""
    cells = []
    for start in range(0, len(letters), CELL_LETTERS):
        cell = 0
        for offset, letter in enumerate(letters[start:start + CELL_LETTERS]):
            cell |= letter << (2 * offset)
        cells.append(cell)
    return tuple(cells)


def unpack_cells(cells: Sequence[int], length: int) -> Tuple[int, ...]:
    """Inverse of pack_letters"""
    letters = []
    for i in range(length):
        cell = cells[i // CELL_LETTERS]
        letters.append((cell >> (2 * (i % CELL_LETTERS))) & 3)
    return tuple(letters)


def _join_cells(cells: Sequence[int]) -> int:
    value = 0
    for index, cell in enumerate(cells):
        value |= cell << (CELL_BITS * index)
    return value


def _split_cells(value: int, count: int) -> Tuple[int, ...]:
    return tuple((value >> (CELL_BITS * index)) & CELL_MASK for index in range(count))


def rotate_packed(cells: Sequence[int], length: int, k: int) -> Tuple[int, ...]:
    """
    Rotate a packed word left by k letters (result[i] = letters[(i + k) % n])
    with shifts and masks over the whole cell vector; the cell count is unchanged.
    """
    if length == 0:
        return tuple(cells)
    k %= length
    if k == 0:
        return tuple(cells)
    value = _join_cells(cells)
    head_bits = 2 * k
    rotated = (value >> head_bits) | ((value & ((1 << head_bits) - 1)) << (2 * (length - k)))
    return _split_cells(rotated, len(cells))


def rotate_portable(letters: Sequence[int], k: int) -> Tuple[int, ...]:
    """Letter-tuple rotation; must agree with rotate_packed"""
    if not letters:
        return tuple(letters)
    k %= len(letters)
    return tuple(letters[k:]) + tuple(letters[:k])


@total_ordering
class Word:
    """
    Immutable freely reduced word in F(x, y)

    Ordering is shortlex with x < X < y < Y.
    """

    __slots__ = ("letters", "_hash")

    def __init__(self, letters: Iterable[int] = ()):
        self.letters = _reduce(letters)
        self._hash = hash(self.letters)

    @classmethod
    def _trusted(cls, letters: Tuple[int, ...]) -> "Word":
        """Wrap a tuple already known to be freely reduced"""
        word = cls.__new__(cls)
        word.letters = letters
        word._hash = hash(letters)
        return word

    # -- container protocol -------------------------------------------------

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if not isinstance(other, Word):
            return NotImplemented
        return self.letters == other.letters

    def __lt__(self, other: "Word") -> bool:
        if not isinstance(other, Word):
            return NotImplemented
        if len(self.letters) != len(other.letters):
            return len(self.letters) < len(other.letters)
        return self.letters < other.letters

    def __repr__(self) -> str:
        return f"Word({self.to_text()!r})"

    def __str__(self) -> str:
        return self.to_text()

    # -- group operations ---------------------------------------------------

    def __mul__(self, other: "Word") -> "Word":
        left, right = self.letters, other.letters
        i = 0
        limit = min(len(left), len(right))
        while i < limit and left[-1 - i] == right[i] ^ 1:
            i += 1
        return Word._trusted(left[:len(left) - i] + right[i:])

    def inverse(self) -> "Word":
        return Word._trusted(_invert(self.letters))

    def power(self, exponent: int) -> "Word":
        base = self if exponent >= 0 else self.inverse()
        return Word(base.letters * abs(exponent))

    def conjugate(self, by: "Word") -> "Word":
        """by^-1 * self * by"""
        return by.inverse() * self * by

    def is_cyclically_reduced(self) -> bool:
        letters = self.letters
        return len(letters) < 2 or letters[0] != letters[-1] ^ 1

    def exponent_sum(self, generator: int) -> int:
        return self.letters.count(2 * generator) - self.letters.count(2 * generator + 1)

    # -- packed representation ---------------------------------------------

    @property
    def cells(self) -> Tuple[int, ...]:
        return pack_letters(self.letters)

    @classmethod
    def from_cells(cls, cells: Sequence[int], length: int) -> "Word":
        return cls(unpack_cells(cells, length))

    def rotate(self, k: int) -> "Word":
        """Cyclic shift left by k letters, computed on the packed cells"""
        if not self.letters:
            return self
        cells = rotate_packed(self.cells, len(self.letters), k)
        return Word._trusted(unpack_cells(cells, len(self.letters)))

    def rotations(self) -> List["Word"]:
        return [self.rotate(k) for k in range(len(self.letters))] or [self]

    def to_text(self) -> str:
        if not self.letters:
            return EMPTY_TEXT
        return "".join(LETTERS[letter] for letter in self.letters)


EMPTY_WORD = Word()
GEN_X = Word((X,))
GEN_Y = Word((Y,))


def parse_word(text: str) -> Word:
    """
    Parse a word over x, X, y, Y (X = x^-1, Y = y^-1); "1" is the empty word

    Raises:
        WordParseError: on any other character, with its position
    """
    if text == EMPTY_TEXT:
        return EMPTY_WORD
    codes = []
    for position, char in enumerate(text):
        code = LETTER_CODES.get(char)
        if code is None:
            raise WordParseError(text, position)
        codes.append(code)
    return Word(codes)


def free_reduce(letters: Iterable[int]) -> Word:
    return Word(letters)


def cyclic_reduce(word: Word) -> Tuple[Word, Word]:
    """
    Split w as conjugator^-1 * core * conjugator with core cyclically reduced

    Returns:
        Tuple of (core, conjugator)
    """
    letters = word.letters
    start, end = 0, len(letters)
    while end - start >= 2 and letters[start] == letters[end - 1] ^ 1:
        start += 1
        end -= 1
    core = Word._trusted(letters[start:end])
    conjugator = Word._trusted(_invert(letters[:start]))
    return core, conjugator


def cyclic_core(word: Word) -> Word:
    return cyclic_reduce(word)[0]


def _least_rotation(letters: Tuple[int, ...]) -> Tuple[int, ...]:
    n = len(letters)
    if n < 2:
        return letters
    return min(rotate_portable(letters, k) for k in range(n))


def least_cyclic_representative(word: Word) -> Word:
    """Shortlex-least cyclic permutation of w or w^-1 (w is cyclically reduced first)"""
    core = cyclic_core(word).letters
    if not core:
        return EMPTY_WORD
    return Word._trusted(min(_least_rotation(core), _least_rotation(_invert(core))))


def is_cyclic_rotation(a: Word, b: Word) -> bool:
    if len(a) != len(b):
        return False
    if not a.letters:
        return True
    doubled = a.letters + a.letters
    n = len(a.letters)
    return any(doubled[i:i + n] == b.letters for i in range(n))


def shortlex_compare(a: Word, b: Word) -> int:
    """-1, 0 or 1 as a is shortlex less than, equal to or greater than b"""
    if a == b:
        return 0
    return -1 if a < b else 1


def power_root(word: Word) -> Tuple[Word, int]:
    """
    Primitive root of a word: w = root^exponent with exponent maximal

    The empty word is returned as (empty, 0).
    """
    letters = word.letters
    n = len(letters)
    if n == 0:
        return EMPTY_WORD, 0
    for size in range(1, n + 1):
        if n % size == 0 and letters[:size] * (n // size) == letters:
            return Word._trusted(letters[:size]), n // size
    return word, 1


@dataclass(frozen=True)
class ExponentMatrix:
    """Row i holds the exponent sums of x and y in relator i"""
    rows: Tuple[Tuple[int, int], Tuple[int, int]]

    def determinant(self) -> int:
        (a, b), (c, d) = self.rows
        return a * d - b * c


@dataclass(frozen=True, order=True)
class Pair:
    """Ordered relator pair (a candidate balanced presentation on x, y)"""
    first: Word
    second: Word

    @property
    def total_length(self) -> int:
        return len(self.first) + len(self.second)

    def component(self, index: int) -> Word:
        """1-based component access"""
        if index == 1:
            return self.first
        if index == 2:
            return self.second
        raise IndexError(f"pair component index must be 1 or 2, got {index}")

    def other(self, index: int) -> Word:
        return self.component(3 - index)

    def replace(self, index: int, word: Word) -> "Pair":
        if index == 1:
            return Pair(word, self.second)
        if index == 2:
            return Pair(self.first, word)
        raise IndexError(f"pair component index must be 1 or 2, got {index}")

    def swap(self) -> "Pair":
        return Pair(self.second, self.first)

    def pack(self) -> bytes:
        """Packed byte image: two 16-bit lengths, then the 64-bit cells of both words"""
        cells = self.first.cells + self.second.cells
        return struct.pack(f"<HH{len(cells)}Q", len(self.first), len(self.second), *cells)

    @classmethod
    def unpack(cls, data: bytes) -> "Pair":
        first_len, second_len = struct.unpack_from("<HH", data)
        first_cells = -(-first_len // CELL_LETTERS)
        second_cells = -(-second_len // CELL_LETTERS)
        cells = struct.unpack_from(f"<{first_cells + second_cells}Q", data, 4)
        return cls(
            Word.from_cells(cells[:first_cells], first_len),
            Word.from_cells(cells[first_cells:], second_len),
        )

    def to_text(self) -> str:
        return f"{self.first.to_text()} {self.second.to_text()}"

    def __str__(self) -> str:
        return self.to_text()


CANONICAL = Pair(GEN_X, GEN_Y)


def exponent_matrix(pair: Pair) -> ExponentMatrix:
    return ExponentMatrix((
        (pair.first.exponent_sum(0), pair.first.exponent_sum(1)),
        (pair.second.exponent_sum(0), pair.second.exponent_sum(1)),
    ))


def parse_pair(text: str) -> Pair:
    """Parse "<word> <word>"; commas and parentheses as in "(u, v)" are accepted"""
    cleaned = text.strip().strip("()").replace(",", " ")
    parts = cleaned.split()
    if len(parts) != 2:
        raise WordParseError(text, len(text)) if parts else WordParseError(text, 0)
    return Pair(parse_word(parts[0]), parse_word(parts[1]))


def read_pairs(path: Path) -> List[Pair]:
    """Read a pair file: one pair per line, blank lines and # comments ignored"""
    pairs = []
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            line = line.split("#", 1)[0].strip()
            if line:
                pairs.append(parse_pair(line))
    return pairs


def ak_pair(n: int) -> Pair:
    """AK(n) = (xyxYXY, x^n Y^(n+1))"""
    return Pair(parse_word("xyxYXY"), Word((X,) * n + (Y_INV,) * (n + 1)))
