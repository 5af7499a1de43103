"""
Andrews-Curtis Toolkit - Command Line Entry Point

Subcommands:
1. conjugates  - harvest the ACM-conjugates of u modulo v
2. nf          - normal form of a relator pair
3. enumerate   - bounded breadth-first enumeration of an AC-component
4. trivialize  - search for a path from a seed to the canonical pair
5. classify    - Baumslag-Solitar type classification of relators
6. replay      - machine-check a move script

Usage:
    python main.py nf "y x"
    python main.py conjugates --u xyxYXY --v xxxYYYY -L 10 -D 2
    python main.py enumerate --seed "xyxYXY xxxYYYY" -L 10 -D 2
    python main.py trivialize --seed "xxYYY xyxYXY" -L 12 -D 2
    python main.py classify --relators data/relators.txt
    python main.py replay data/move_scripts/lemma_swap_xy.txt --n 3

Exit status: 0 success, 1 replay failure, 2 trivialize search exhausted,
64 usage or input errors, 70 internal guards (memory, orbit cap, weight
overflow, checkpoint, invariant).
"""
import argparse
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

# Add project root to path
PROJECT_ROOT = Path(__file__).parent
sys.path.insert(0, str(PROJECT_ROOT))

from config.settings import (
    DEFAULT_ROUNDS, DEFAULT_WORD_BOUND, LOG_LEVEL, MAX_VISITED, REPLAY_MAX_ROUNDS
)
from model.classify import classify_words, read_relators
from model.conjugacy import Verdict, acm_conjugates, finite_quotient_oracle
from model.errors import (
    ACError, CheckpointError, DegeneratePresentation, InvariantViolation,
    OrbitCapExceeded, ScriptError, WeightOverflowError, WordParseError
)
from model.moves import load_script, replay_script
from model.normal_forms import normal_form
from model.search import SearchConfig, run
from model.words import parse_pair, parse_word

logger = logging.getLogger("ac")

EXIT_OK = 0
EXIT_REPLAY_FAILED = 1
EXIT_EXHAUSTED = 2
EXIT_USAGE = 64
EXIT_SOFTWARE = 70

USAGE_ERRORS = (WordParseError, ScriptError, DegeneratePresentation, ValueError, OSError)
GUARD_ERRORS = (OrbitCapExceeded, WeightOverflowError, CheckpointError, InvariantViolation)


@dataclass
class CliConfig:
    """Options shared by every subcommand"""
    subcommand: str
    word_bound: int = DEFAULT_WORD_BOUND
    rounds: int = DEFAULT_ROUNDS
    threads: int = 1
    input_path: Optional[Path] = None
    output_path: Optional[Path] = None
    checkpoint: Optional[Path] = None
    verbosity: int = 0

    def __post_init__(self):
        if self.word_bound < 1:
            raise ValueError(f"-L must be at least 1, got {self.word_bound}")
        if self.rounds < 0:
            raise ValueError(f"-D must be non-negative, got {self.rounds}")
        if self.threads < 1:
            raise ValueError(f"--threads must be at least 1, got {self.threads}")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "CliConfig":
        return cls(
            subcommand=args.command,
            word_bound=getattr(args, "L", DEFAULT_WORD_BOUND),
            rounds=getattr(args, "D", DEFAULT_ROUNDS),
            threads=getattr(args, "threads", 1),
            input_path=getattr(args, "input_path", None),
            output_path=getattr(args, "output", None),
            checkpoint=getattr(args, "checkpoint", None),
            verbosity=args.verbose,
        )


class UsageParser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors exit with status 64"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def setup_logging(verbosity: int) -> None:
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = getattr(logging, LOG_LEVEL, logging.WARNING)
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def write_output(text: str, path: Optional[Path]) -> None:
    """Write to a file if one is given, otherwise to stdout; nonempty text ends in a newline"""
    if text and not text.endswith("\n"):
        text += "\n"
    if path is None:
        sys.stdout.write(text)
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)
    logger.info(f"wrote {path}")


# =============================================================================
# Subcommands
# =============================================================================

def cmd_conjugates(args: argparse.Namespace, cfg: CliConfig) -> int:
    u, v = parse_word(args.u), parse_word(args.v)
    conjugates = sorted(acm_conjugates(u, v, cfg.word_bound, cfg.rounds))
    lines = []
    for word in conjugates:
        if args.verify:
            verdict = finite_quotient_oracle(u, word, v)
            lines.append(f"{word}\t{verdict.value}")
            if verdict == Verdict.REFUTED:
                logger.warning(f"{word} is not conjugate to {u} modulo {v}")
        else:
            lines.append(word.to_text())
    write_output("\n".join(lines), cfg.output_path)
    return EXIT_OK


def cmd_nf(args: argparse.Namespace, cfg: CliConfig) -> int:
    pair = parse_pair(args.pair)
    kind = "cyclic" if args.cyclic_only else "full"
    write_output(normal_form(pair, kind).to_text(), cfg.output_path)
    return EXIT_OK


def _search_config(args: argparse.Namespace, cfg: CliConfig, mode: str) -> SearchConfig:
    target = getattr(args, "target", None)
    return SearchConfig(
        seed=parse_pair(args.seed),
        word_bound=cfg.word_bound,
        rounds=cfg.rounds,
        total_bound=getattr(args, "bound", None),
        threads=cfg.threads,
        mode=mode,
        target=parse_pair(target) if target else None,
        normal_form=args.nf,
        max_visited=args.max_visited,
        checkpoint_path=cfg.checkpoint,
    )


def cmd_enumerate(args: argparse.Namespace, cfg: CliConfig) -> int:
    report = run(_search_config(args, cfg, "enumerate"), resume=args.resume)
    if args.report:
        report.save(args.report)
    write_output(report.counts_tsv(), cfg.output_path)
    if report.aborted:
        print("ac: visited-set memory guard tripped; counts are partial", file=sys.stderr)
        return EXIT_SOFTWARE
    return EXIT_OK


def cmd_trivialize(args: argparse.Namespace, cfg: CliConfig) -> int:
    report = run(_search_config(args, cfg, "trivialize"), resume=args.resume)
    if args.report:
        report.save(args.report)
    if report.found:
        write_output(report.witness, cfg.output_path)
        return EXIT_OK
    if report.aborted:
        print("ac: visited-set memory guard tripped before the target was reached", file=sys.stderr)
        return EXIT_SOFTWARE
    print(f"ac: search space exhausted after {report.visited} pairs", file=sys.stderr)
    return EXIT_EXHAUSTED


def cmd_classify(args: argparse.Namespace, cfg: CliConfig) -> int:
    relators = read_relators(cfg.input_path) if cfg.input_path else []
    relators.extend(parse_word(token) for token in args.words)
    if not relators:
        raise ValueError("nothing to classify: give --relators FILE or words")
    summary = classify_words(relators)
    write_output(summary.to_tsv(), cfg.output_path)
    return EXIT_OK


def cmd_replay(args: argparse.Namespace, cfg: CliConfig) -> int:
    script = load_script(args.script, args.n)
    report = replay_script(script, cfg.word_bound, args.max_rounds)
    lines = []
    for index, move in enumerate(script.moves):
        if index >= report.applied:
            break
        rounds = report.step_rounds.get(index)
        lines.append(move.to_text() + (f"\tD={rounds}" if rounds is not None else ""))
    lines.append(f"FINAL {report.final}")
    if report.failed_index is not None:
        lines.append(f"FAILED {report.failed_index} {report.reason}")
    elif report.target_reached is False:
        lines.append(f"FAILED target {report.target} not reached")
    else:
        lines.append("OK")
    write_output("\n".join(lines), cfg.output_path)
    return EXIT_OK if report.succeeded else EXIT_REPLAY_FAILED


COMMANDS = {
    "conjugates": cmd_conjugates,
    "nf": cmd_nf,
    "enumerate": cmd_enumerate,
    "trivialize": cmd_trivialize,
    "classify": cmd_classify,
    "replay": cmd_replay,
}


# =============================================================================
# Parser
# =============================================================================

def _add_bounds(parser: argparse.ArgumentParser, word_bound: int = DEFAULT_WORD_BOUND) -> None:
    parser.add_argument("-L", type=int, default=word_bound,
                        help=f"word length bound L (default: {word_bound})")
    parser.add_argument("-D", type=int, default=DEFAULT_ROUNDS,
                        help=f"R-completion rounds D (default: {DEFAULT_ROUNDS})")


def _add_search(parser: argparse.ArgumentParser) -> None:
    _add_bounds(parser)
    parser.add_argument("--seed", required=True, help='seed pair, e.g. "xyxYXY xxxYYYY"')
    parser.add_argument("--threads", type=int, default=1, help="worker processes (default: 1)")
    parser.add_argument("--nf", choices=("full", "cyclic"), default="full",
                        help="normal form used for the visited set (default: full)")
    parser.add_argument("--checkpoint", type=Path, help="write checkpoints to this file")
    parser.add_argument("--resume", type=Path, help="resume from a checkpoint file")
    parser.add_argument("--max-visited", type=int, default=MAX_VISITED,
                        help=f"memory guard on visited pairs (default: {MAX_VISITED}, env AC_MAX_VISITED)")
    parser.add_argument("--report", type=Path, help="save the JSON search report here")
    parser.add_argument("-o", "--output", type=Path, help="write results here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = UsageParser(
        prog="ac",
        description="Andrews-Curtis toolkit: ACM-moves, normal forms and bounded search",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  ac nf "y x"
  ac conjugates --u xyxYXY --v xxxYYYY -L 10
  ac enumerate --seed "xyxYXY xxxYYYY" -L 10 -D 2
  ac trivialize --seed "xxYYY xyxYXY" -L 12 -D 2
  ac replay data/move_scripts/lemma_swap_xy.txt --n 3
        """
    )
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="-v for progress logging, -vv for debug output")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("conjugates", help="harvest ACM-conjugates of u modulo v")
    p.add_argument("--u", required=True, help="relator to conjugate")
    p.add_argument("--v", required=True, help="the other relator")
    _add_bounds(p)
    p.add_argument("--verify", action="store_true",
                   help="check every conjugate against the finite quotient oracle")
    p.add_argument("-o", "--output", type=Path, help="write results here instead of stdout")

    p = sub.add_parser("nf", help="normal form of a pair")
    p.add_argument("pair", help='pair of words, e.g. "y x"')
    p.add_argument("--cyclic-only", action="store_true",
                   help="cyclic normal form without automorphism minimization")
    p.add_argument("-o", "--output", type=Path, help="write results here instead of stdout")

    p = sub.add_parser("enumerate", help="count normal forms per total length")
    _add_search(p)
    p.add_argument("--bound", type=int, help="total length bound (default: 2L+2)")

    p = sub.add_parser("trivialize", help="search a path from the seed to the target")
    _add_search(p)
    p.add_argument("--bound", type=int, help="total length bound (default: 2L+2)")
    p.add_argument("--target", help='target pair (default: "x y")')

    p = sub.add_parser("classify", help="Baumslag-Solitar type classification")
    p.add_argument("--relators", dest="input_path", type=Path, help="relator or pair file")
    p.add_argument("words", nargs="*", help="relators given on the command line")
    p.add_argument("-o", "--output", type=Path, help="write results here instead of stdout")

    p = sub.add_parser("replay", help="verify a move script")
    p.add_argument("script", type=Path, help="move script file")
    p.add_argument("--n", type=int, help="value substituted for k in exponent templates")
    _add_bounds(p)
    p.add_argument("--max-rounds", type=int, default=REPLAY_MAX_ROUNDS,
                   help=f"largest D tried for each ACM step (default: {REPLAY_MAX_ROUNDS})")
    p.add_argument("-o", "--output", type=Path, help="write results here instead of stdout")

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, dispatch, and map errors to exit statuses"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    setup_logging(args.verbose)
    try:
        cfg = CliConfig.from_args(args)
        return COMMANDS[args.command](args, cfg)
    except GUARD_ERRORS as e:
        print(f"ac: {e}", file=sys.stderr)
        return EXIT_SOFTWARE
    except USAGE_ERRORS as e:
        print(f"ac: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ACError as e:
        logger.exception("unexpected toolkit error")
        print(f"ac: {e}", file=sys.stderr)
        return EXIT_SOFTWARE


if __name__ == "__main__":
    sys.exit(main())
