"""
Moves Module
AC-moves, ACM-moves and automorphism moves on relator pairs, plus parsing
and replay of move scripts that machine-check hand-written move sequences.
"""
import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Tuple
import sys

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))
from config.settings import DEFAULT_ROUNDS, DEFAULT_WORD_BOUND, REPLAY_MAX_ROUNDS
from model.conjugacy import acm_conjugates
from model.errors import ACError, MoveRejected, NotAnAutomorphismError, ScriptError
from model.normal_forms import cyclic_nf, full_nf
from model.weighted_digraph import generates_free_group
from model.words import (
    GEN_X, GEN_Y, Pair, Word, cyclic_core, parse_word
)

logger = logging.getLogger(__name__)


class MoveKind(Enum):
    AC1 = "AC1"
    AC2 = "AC2"
    AC3 = "AC3"
    ACM = "ACM"
    AUT = "AUT"
    NF = "NF"
    CNF = "CNF"


@dataclass(frozen=True)
class Move:
    """One step of a move script"""
    kind: MoveKind
    component: Optional[int] = None
    other: Optional[int] = None
    word: Optional[Word] = None
    images: Optional[Tuple[Word, Word]] = None

    def to_text(self) -> str:
        if self.kind == MoveKind.AC1:
            return f"AC1 {self.component} {self.other}"
        if self.kind == MoveKind.AC2:
            return f"AC2 {self.component}"
        if self.kind in (MoveKind.AC3, MoveKind.ACM):
            return f"{self.kind.value} {self.component} {self.word}"
        if self.kind == MoveKind.AUT:
            return f"AUT {self.images[0]} {self.images[1]}"
        return self.kind.value


def _check_component(index: int) -> None:
    if index not in (1, 2):
        raise ValueError(f"component index must be 1 or 2, got {index}")


# =============================================================================
# Moves
# =============================================================================

def apply_ac1(pair: Pair, i: int, j: int) -> Pair:
    """r_i -> r_i r_j"""
    _check_component(i)
    _check_component(j)
    if i == j:
        raise ValueError("AC1 needs two distinct components")
    return pair.replace(i, pair.component(i) * pair.component(j))


def apply_ac2(pair: Pair, i: int) -> Pair:
    """r_i -> r_i^-1"""
    _check_component(i)
    return pair.replace(i, pair.component(i).inverse())


def apply_ac3(pair: Pair, i: int, conjugator: Word) -> Pair:
    """r_i -> w^-1 r_i w"""
    _check_component(i)
    return pair.replace(i, pair.component(i).conjugate(conjugator))


def apply_acm(pair: Pair, i: int, target: Word, word_bound: int = DEFAULT_WORD_BOUND,
              rounds: int = DEFAULT_ROUNDS) -> Pair:
    """
    Replace r_i by a word conjugate to r_i^(+-1) modulo the other relator

    Raises:
        MoveRejected: if neither target nor its inverse is in U_D(r_i, r_other)
    """
    _check_component(i)
    conjugates = acm_conjugates(pair.component(i), pair.other(i), word_bound, rounds)
    core = cyclic_core(target)
    if core in conjugates or core.inverse() in conjugates:
        return pair.replace(i, target)
    raise MoveRejected(i, target, pair.other(i), word_bound, rounds)


def is_automorphism(x_image: Word, y_image: Word) -> bool:
    """x -> x_image, y -> y_image extends to an automorphism of F(x, y)"""
    if not x_image or not y_image:
        return False
    return generates_free_group((x_image, y_image))


def substitute(word: Word, x_image: Word, y_image: Word) -> Word:
    images = (x_image, x_image.inverse(), y_image, y_image.inverse())
    letters: List[int] = []
    for letter in word:
        letters.extend(images[letter].letters)
    return Word(letters)


def apply_aut(pair: Pair, images: Tuple[Word, Word]) -> Pair:
    """
    Apply the endomorphism x -> images[0], y -> images[1] to both relators

    Raises:
        NotAnAutomorphismError: if the images do not form a basis
    """
    x_image, y_image = images
    if not is_automorphism(x_image, y_image):
        raise NotAnAutomorphismError(f"({x_image}, {y_image}) is not a basis of F(x, y)")
    return Pair(substitute(pair.first, x_image, y_image), substitute(pair.second, x_image, y_image))


def automorphic_images(pair: Pair) -> List[Pair]:
    """Images under y -> Y, y -> yx and the swap x <-> y"""
    return [
        apply_aut(pair, (GEN_X, GEN_Y.inverse())),
        apply_aut(pair, (GEN_X, GEN_Y * GEN_X)),
        apply_aut(pair, (GEN_Y, GEN_X)),
    ]


def apply_move(pair: Pair, move: Move, word_bound: int = DEFAULT_WORD_BOUND,
               rounds: int = DEFAULT_ROUNDS) -> Pair:
    if move.kind == MoveKind.AC1:
        return apply_ac1(pair, move.component, move.other)
    if move.kind == MoveKind.AC2:
        return apply_ac2(pair, move.component)
    if move.kind == MoveKind.AC3:
        return apply_ac3(pair, move.component, move.word)
    if move.kind == MoveKind.ACM:
        return apply_acm(pair, move.component, move.word, word_bound, rounds)
    if move.kind == MoveKind.AUT:
        return apply_aut(pair, move.images)
    if move.kind == MoveKind.CNF:
        return cyclic_nf(pair)
    return full_nf(pair)


# =============================================================================
# Script files
# =============================================================================

# x{k+1}, (YX){k}, y{3}
_TEMPLATE = re.compile(r"(\(([xXyY]+)\)|([xXyY]))\{([^}]*)\}")
_EXPONENT = re.compile(r"^\s*(k)?\s*(?:([+-])\s*(\d+))?\s*$")


@dataclass
class Script:
    """A parsed move script instantiated at a concrete n"""
    name: str
    n: Optional[int]
    moves: List[Move]
    start: Optional[Pair] = None
    target: Optional[Pair] = None


def _exponent(expression: str, n: Optional[int], line_number: int) -> int:
    text = expression.strip()
    if text.lstrip("-").isdigit():
        return int(text)
    match = _EXPONENT.match(text)
    if not match or not match.group(1):
        raise ScriptError(f"bad exponent expression {expression!r}", line_number)
    if n is None:
        raise ScriptError("template uses k but no n was given", line_number)
    value = n
    if match.group(2):
        offset = int(match.group(3))
        value = value + offset if match.group(2) == "+" else value - offset
    return value


def expand_template(text: str, n: Optional[int] = None, line_number: Optional[int] = None) -> str:
    """Expand exponent templates with k = n"""
    def replace(match: re.Match) -> str:
        base = match.group(2) or match.group(3)
        exponent = _exponent(match.group(4), n, line_number)
        if exponent < 0:
            raise ScriptError(f"negative exponent in {match.group(0)!r}", line_number)
        return base * exponent

    return _TEMPLATE.sub(replace, text)


def _word(token: str, n: Optional[int], line_number: int) -> Word:
    try:
        return parse_word(expand_template(token, n, line_number))
    except ACError as e:
        if isinstance(e, ScriptError):
            raise
        raise ScriptError(str(e), line_number) from e


def _index(token: str, line_number: int) -> int:
    if token not in ("1", "2"):
        raise ScriptError(f"component index must be 1 or 2, got {token!r}", line_number)
    return int(token)


def parse_script(text: str, n: Optional[int] = None, name: str = "<script>") -> Script:
    """
    Parse a move script

    One move per line ("AC1 i j", "AC2 i", "AC3 i <word>", "ACM i <word>",
    "AUT <word> <word>", "NF", "CNF"); optional "START <pair>" and "TARGET <pair>"
    directives; "#" starts a comment.
    """
    script = Script(name=name, n=n, moves=[])
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        keyword, args = tokens[0].upper(), tokens[1:]

        def expect(count: int) -> None:
            if len(args) != count:
                raise ScriptError(f"{keyword} takes {count} arguments, got {len(args)}", line_number)

        if keyword in ("START", "TARGET"):
            expect(2)
            pair = Pair(_word(args[0], n, line_number), _word(args[1], n, line_number))
            if keyword == "START":
                script.start = pair
            else:
                script.target = pair
        elif keyword == "AC1":
            expect(2)
            i, j = _index(args[0], line_number), _index(args[1], line_number)
            if i == j:
                raise ScriptError("AC1 needs two distinct components", line_number)
            script.moves.append(Move(MoveKind.AC1, component=i, other=j))
        elif keyword == "AC2":
            expect(1)
            script.moves.append(Move(MoveKind.AC2, component=_index(args[0], line_number)))
        elif keyword in ("AC3", "ACM"):
            expect(2)
            script.moves.append(Move(MoveKind(keyword), component=_index(args[0], line_number),
                                     word=_word(args[1], n, line_number)))
        elif keyword == "AUT":
            expect(2)
            script.moves.append(Move(MoveKind.AUT, images=(_word(args[0], n, line_number),
                                                           _word(args[1], n, line_number))))
        elif keyword in ("NF", "CNF"):
            expect(0)
            script.moves.append(Move(MoveKind(keyword)))
        else:
            raise ScriptError(f"unknown move {tokens[0]!r}", line_number)
    return script


def load_script(path: Path, n: Optional[int] = None) -> Script:
    with open(path, "r", encoding="utf-8") as f:
        return parse_script(f.read(), n, name=Path(path).stem)


def format_script(moves: List[Move], start: Optional[Pair] = None,
                  target: Optional[Pair] = None) -> str:
    lines = []
    if start is not None:
        lines.append(f"START {start}")
    lines.extend(move.to_text() for move in moves)
    if target is not None:
        lines.append(f"TARGET {target}")
    return "\n".join(lines) + "\n"


# =============================================================================
# Replay
# =============================================================================

@dataclass
class ReplayReport:
    """Outcome of replaying a move sequence"""
    start: str
    final: str
    steps: int
    applied: int = 0
    failed_index: Optional[int] = None
    reason: Optional[str] = None
    step_rounds: Dict[int, int] = field(default_factory=dict)
    target: Optional[str] = None
    target_reached: Optional[bool] = None

    @property
    def succeeded(self) -> bool:
        return self.failed_index is None and self.target_reached is not False

    def print_summary(self, title: str = "REPLAY") -> None:
        print("\n" + "=" * 70)
        print(title)
        print("=" * 70)
        print(f"  Start:   {self.start}")
        print(f"  Final:   {self.final}")
        if self.target is not None:
            print(f"  Target:  {self.target} ({'reached' if self.target_reached else 'NOT reached'})")
        print(f"  Steps:   {self.applied}/{self.steps}")
        for index, rounds in sorted(self.step_rounds.items()):
            print(f"    step {index}: ACM accepted at D={rounds}")
        if self.failed_index is not None:
            print(f"  FAILED at step {self.failed_index}: {self.reason}")


def replay(pair: Pair, moves: List[Move], word_bound: int = DEFAULT_WORD_BOUND,
           max_rounds: int = REPLAY_MAX_ROUNDS, target: Optional[Pair] = None) -> ReplayReport:
    """
    Apply moves in order, verifying every ACM step with the conjugacy engine

    Each ACM step is tried at D = 0, 1, ..., max_rounds and the least D that
    accepts it is recorded; the word bound is raised to the target length
    when needed. Stops at the first rejected step.
    """
    report = ReplayReport(start=pair.to_text(), final=pair.to_text(), steps=len(moves))
    current = pair
    for index, move in enumerate(moves):
        try:
            if move.kind == MoveKind.ACM:
                bound = max(word_bound, len(cyclic_core(move.word)))
                accepted = None
                for rounds in range(max_rounds + 1):
                    try:
                        accepted = apply_acm(current, move.component, move.word, bound, rounds)
                    except MoveRejected:
                        continue
                    report.step_rounds[index] = rounds
                    break
                if accepted is None:
                    raise MoveRejected(move.component, move.word, current.other(move.component),
                                       bound, max_rounds)
                current = accepted
            else:
                current = apply_move(current, move, word_bound)
        except ACError as e:
            report.failed_index = index
            report.reason = str(e)
            logger.warning(f"replay stopped at step {index} ({move.to_text()}): {e}")
            break
        report.applied += 1
    report.final = current.to_text()
    if target is not None:
        report.target = target.to_text()
        report.target_reached = cyclic_nf(current) == cyclic_nf(target)
    logger.info(f"replay: {report.applied}/{report.steps} steps, minimal D {report.step_rounds}")
    return report


def replay_script(script: Script, word_bound: int = DEFAULT_WORD_BOUND,
                  max_rounds: int = REPLAY_MAX_ROUNDS) -> ReplayReport:
    """
    Replay a script from its START pair

    Raises:
        ScriptError: if the script has no START directive
    """
    if script.start is None:
        raise ScriptError(f"script {script.name} has no START pair")
    return replay(script.start, script.moves, word_bound, max_rounds, script.target)
