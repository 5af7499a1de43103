"""
Exception hierarchy shared by the engine modules
"""
from typing import Optional


class ACError(Exception):
    """Base class for all toolkit errors"""


class WordParseError(ACError):
    """Invalid character in a word literal"""

    def __init__(self, text: str, position: int):
        self.text = text
        self.position = position
        char = text[position] if 0 <= position < len(text) else ""
        super().__init__(
            f"invalid character {char!r} at position {position} in {text!r} "
            f"(alphabet is x, X, y, Y)"
        )


class DegeneratePresentation(ACError):
    """A relator is trivial after cyclic reduction"""


class WeightOverflowError(ACError):
    """An edge weight left the signed 64-bit range"""


class NotAnAutomorphismError(ACError):
    """An image pair does not define an automorphism of F(x, y)"""


class MoveRejected(ACError):
    """An ACM target was not found among the harvested conjugates"""

    def __init__(self, component: int, target, relator, word_bound: int, rounds: int):
        self.component = component
        self.target = target
        self.relator = relator
        self.word_bound = word_bound
        self.rounds = rounds
        super().__init__(
            f"{target} (or its inverse) is not in U_{rounds} of component "
            f"{component} modulo {relator} with L={word_bound}"
        )


class ScriptError(ACError):
    """Malformed move script"""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class OrbitCapExceeded(ACError):
    """Minimal-length automorphic orbit grew beyond the configured cap"""


class CheckpointError(ACError):
    """Checkpoint file is corrupted, truncated or from another version"""


class InvariantViolation(ACError):
    """An internal consistency check failed"""
