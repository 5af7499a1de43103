"""
Breadth-First Search Module
Bounded enumeration of the normal-form quotient of an AC-component:
frontier of normal forms processed shortest-first, ACM-neighbour expansion,
visited set, per-total-length counts and trivialization detection.
"""
import json
import logging
import time
from dataclasses import asdict, dataclass, field
from datetime import datetime
from multiprocessing import Pool
from pathlib import Path
from typing import Dict, List, Optional, Tuple
import sys

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))
from config.settings import (
    CHECKPOINT_EVERY, COUNTS_FORMAT, DEFAULT_ROUNDS, DEFAULT_WORD_BOUND, MAX_VISITED
)
from model.checkpoint import SearchState, load_checkpoint, save_checkpoint
from model.conjugacy import acm_classes
from model.errors import CheckpointError, DegeneratePresentation, InvariantViolation
from model.moves import Move, MoveKind
from model.normal_forms import (
    OrbitStatistics, normal_form, orbit_statistics, presentation_multiplicity
)
from model.words import CANONICAL, Pair, exponent_matrix, least_cyclic_representative

logger = logging.getLogger(__name__)

MODES = ("enumerate", "trivialize")
NORMAL_FORMS = ("full", "cyclic")


@dataclass
class SearchConfig:
    """Parameters of one breadth-first run"""
    seed: Pair
    word_bound: int = DEFAULT_WORD_BOUND
    rounds: int = DEFAULT_ROUNDS
    total_bound: Optional[int] = None
    threads: int = 1
    mode: str = "enumerate"
    target: Optional[Pair] = None
    normal_form: str = "full"
    max_visited: int = MAX_VISITED
    checkpoint_path: Optional[Path] = None
    checkpoint_every: int = CHECKPOINT_EVERY

    def __post_init__(self):
        if self.total_bound is None:
            self.total_bound = 2 * self.word_bound + 2
        if self.word_bound < 1:
            raise ValueError(f"word bound must be at least 1, got {self.word_bound}")
        if self.rounds < 0:
            raise ValueError(f"rounds must be non-negative, got {self.rounds}")
        if self.threads < 1:
            raise ValueError(f"threads must be at least 1, got {self.threads}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.normal_form not in NORMAL_FORMS:
            raise ValueError(f"normal form must be one of {NORMAL_FORMS}, got {self.normal_form!r}")

    def echo(self) -> Dict:
        """Parameters that determine the visited set, as stored in checkpoints"""
        return {
            "seed": self.seed.to_text(),
            "word_bound": self.word_bound,
            "rounds": self.rounds,
            "total_bound": self.total_bound,
            "mode": self.mode,
            "target": self.target.to_text() if self.target is not None else None,
            "normal_form": self.normal_form,
        }


@dataclass
class SearchReport:
    """Outcome of a search run"""
    seed: str
    mode: str
    word_bound: int
    rounds: int
    total_bound: int
    normal_form: str
    threads: int
    counts: Dict[int, int]
    pair_counts: Dict[int, int]
    visited: int
    batches: int
    runtime_seconds: float
    found: Optional[bool] = None
    witness: Optional[str] = None
    witness_length: Optional[int] = None
    witness_acm_moves: Optional[int] = None
    aborted: bool = False
    exhausted: bool = False
    orbit_max: int = 0
    orbit_mean: float = 0.0
    timestamp: str = field(default_factory=lambda: datetime.now().isoformat())

    def counts_tsv(self) -> str:
        """Versioned header comment, then "T<TAB>presentations" lines"""
        lines = [
            f"# {COUNTS_FORMAT} seed={self.seed.replace(' ', ',')} L={self.word_bound} "
            f"D={self.rounds} bound={self.total_bound} nf={self.normal_form}"
        ]
        lines.extend(f"{total}\t{count}" for total, count in sorted(self.pair_counts.items()))
        return "\n".join(lines) + "\n"

    def print_summary(self) -> None:
        print("\n" + "=" * 70)
        print(f"SEARCH SUMMARY ({self.mode.upper()})")
        print("=" * 70)
        print(f"\n  Seed:          {self.seed}")
        print(f"  L / D / bound: {self.word_bound} / {self.rounds} / {self.total_bound}")
        print(f"  Normal form:   {self.normal_form}")
        print(f"  Visited:       {self.visited:,} in {self.batches} batches")
        print(f"  Runtime:       {self.runtime_seconds:.1f}s on {self.threads} worker(s)")
        if self.orbit_max:
            print(f"  Orbit sizes:   max {self.orbit_max}, mean {self.orbit_mean:.1f}")
        print("\n  Normal forms (presentations) per total length:")
        for total, count in sorted(self.counts.items()):
            print(f"    T={total:3d}: {count:,} ({self.pair_counts.get(total, 0):,})")
        if self.mode == "trivialize":
            if self.found:
                print(f"\n  TRIVIALIZED: {self.witness_length} steps, {self.witness_acm_moves} ACM-moves")
            else:
                print("\n  NOT TRIVIALIZED (search space exhausted)" if self.exhausted
                      else "\n  NOT TRIVIALIZED")
        if self.aborted:
            print("\n  ABORTED: visited-set memory guard tripped")

    def save(self, path: Path) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        data = asdict(self)
        data["counts"] = {str(k): v for k, v in sorted(self.counts.items())}
        data["pair_counts"] = {str(k): v for k, v in sorted(self.pair_counts.items())}
        with open(path, "w", encoding="utf-8") as f:
            json.dump(data, f, indent=2)
        logger.info(f"search report saved to {path}")


# =============================================================================
# Neighbour generation
# =============================================================================

def within_bounds(pair: Pair, cfg: SearchConfig) -> bool:
    """Total length within bound and at most one word longer than L"""
    if pair.total_length > cfg.total_bound:
        return False
    return (len(pair.first) > cfg.word_bound) + (len(pair.second) > cfg.word_bound) <= 1


def _moves_text(moves: List[Move]) -> str:
    return "\n".join(move.to_text() for move in moves)


def nf_move(kind: str) -> Move:
    """Script move that applies the given normal form kind"""
    return Move(MoveKind.CNF if kind == "cyclic" else MoveKind.NF)


def neighbors(pair: Pair, cfg: SearchConfig) -> List[Tuple[Pair, str]]:
    """
    Normal forms one ACM-substitution away

    For each component, one harvested conjugate per cyclic class other than
    its own. Returns (normal form, move text) pairs sorted by normal form.
    """
    found: Dict[Pair, str] = {}
    for i in (1, 2):
        component, other = pair.component(i), pair.other(i)
        own = least_cyclic_representative(component)
        for conjugate in acm_classes(component, other, cfg.word_bound, cfg.rounds):
            if conjugate == own:
                continue
            try:
                image = normal_form(pair.replace(i, conjugate), cfg.normal_form)
            except DegeneratePresentation:
                continue
            if image != pair and image not in found and within_bounds(image, cfg):
                moves = [Move(MoveKind.ACM, component=i, word=conjugate), nf_move(cfg.normal_form)]
                found[image] = _moves_text(moves)
    return sorted(found.items())


def _expand(args: Tuple[bytes, SearchConfig]) -> Tuple[List[Tuple[bytes, str]], OrbitStatistics]:
    """Worker entry point: packed pair in, packed neighbours out"""
    packed, cfg = args
    before = orbit_statistics()
    result = [(image.pack(), text) for image, text in neighbors(Pair.unpack(packed), cfg)]
    after = orbit_statistics()
    delta = OrbitStatistics(after.computed - before.computed,
                            after.total_size - before.total_size, after.largest)
    return result, delta


def check_neighbor_symmetry(pair: Pair, cfg: SearchConfig) -> List[Pair]:
    """Neighbours whose own neighbourhood misses `pair` (logged diagnostics)"""
    misses = [image for image, _ in neighbors(pair, cfg)
              if pair not in dict(neighbors(image, cfg))]
    if misses:
        logger.info(f"neighbour symmetry: {len(misses)} neighbours of ({pair}) do not lead back")
    return misses


# =============================================================================
# Driver
# =============================================================================

def _check_det(pair: Pair) -> None:
    det = exponent_matrix(pair).determinant()
    if abs(det) != 1:
        raise InvariantViolation(f"pair ({pair}) has exponent determinant {det}")


def _witness(state: SearchState, position: int, cfg: SearchConfig,
             target: Pair) -> Tuple[str, int, int]:
    """Move script from the seed to a visited pair, its length and ACM count"""
    path = state.path_to(position)
    fragments = [state.moves[p] for p in path[1:]]
    lines = [f"START {cfg.seed}", nf_move(cfg.normal_form).to_text()]
    for fragment in fragments:
        lines.extend(fragment.splitlines())
    lines.append(f"TARGET {target}")
    acm_moves = sum(1 for line in lines if line.startswith("ACM"))
    return "\n".join(lines) + "\n", len(fragments), acm_moves


def presentation_counts(state: SearchState, kind: str) -> Dict[int, int]:
    """Visited normal forms per total length, each weighted by its presentation multiplicity"""
    counts: Dict[int, int] = {}
    for position in range(len(state)):
        pair = state.pair(position)
        total = pair.total_length
        counts[total] = counts.get(total, 0) + presentation_multiplicity(pair, kind)
    return dict(sorted(counts.items()))


def run(cfg: SearchConfig, resume: Optional[Path] = None) -> SearchReport:
    """
    Breadth-first search by total length

    Each batch is the whole frontier at the least total length, expanded in
    pair order and merged in that order, so the visited set and counts do
    not depend on the number of workers.

    Raises:
        InvariantViolation: if a pair with exponent determinant other than
            +-1 shows up (the seed included)
        CheckpointError: if the resume file does not match the configuration
    """
    started = time.time()
    base_stats = orbit_statistics()
    seed_nf = normal_form(cfg.seed, cfg.normal_form)
    _check_det(seed_nf)
    target = cfg.target if cfg.target is not None else CANONICAL
    target_packed = normal_form(target, cfg.normal_form).pack()

    if resume is not None:
        echo, state = load_checkpoint(resume)
        if echo != cfg.echo():
            raise CheckpointError(f"{resume} was written for a different configuration: {echo}")
        logger.info(f"resuming from {resume} at batch {state.batches}")
    else:
        state = SearchState()
        state.insert(seed_nf.pack(), -1, "")

    found_at = state.index.get(target_packed) if cfg.mode == "trivialize" else None
    aborted = False
    worker_stats = OrbitStatistics()
    pool = Pool(processes=cfg.threads) if cfg.threads > 1 else None
    try:
        while found_at is None and not aborted:
            pending = [t for t, indices in state.frontier.items() if indices]
            if not pending:
                break
            total = min(pending)
            batch = sorted(state.frontier.pop(total), key=state.pair)
            jobs = [(state.pairs[p], cfg) for p in batch]
            if pool is not None:
                expansions = pool.imap(_expand, jobs, chunksize=max(1, len(jobs) // (4 * cfg.threads)))
            else:
                expansions = map(_expand, jobs)

            for offset, (parent, (results, stats)) in enumerate(zip(batch, expansions)):
                if pool is not None:
                    worker_stats.merge(stats)
                for packed, move_text in results:
                    position = state.insert(packed, parent, move_text)
                    if position is None:
                        continue
                    _check_det(state.pair(position))
                    if cfg.mode == "trivialize" and packed == target_packed:
                        found_at = position
                        break
                    if len(state) > cfg.max_visited:
                        aborted = True
                        break
                if found_at is not None or aborted:
                    # unmerged parents go back so a resumed run expands them
                    state.frontier[total] = batch[offset:] + state.frontier.get(total, [])
                    break

            state.batches += 1
            logger.info(
                f"batch {state.batches}: T={total}, {len(batch)} expanded, {len(state):,} visited"
            )
            if cfg.checkpoint_path is not None and state.batches % cfg.checkpoint_every == 0:
                save_checkpoint(cfg.checkpoint_path, cfg.echo(), state)
    finally:
        if pool is not None:
            pool.terminate()
            pool.join()

    if cfg.checkpoint_path is not None:
        save_checkpoint(cfg.checkpoint_path, cfg.echo(), state)

    if aborted:
        logger.warning(f"visited set exceeded {cfg.max_visited:,} pairs; search aborted")

    final_stats = orbit_statistics()
    stats = OrbitStatistics(final_stats.computed - base_stats.computed,
                            final_stats.total_size - base_stats.total_size, final_stats.largest)
    stats.merge(worker_stats)

    report = SearchReport(
        seed=cfg.seed.to_text(),
        mode=cfg.mode,
        word_bound=cfg.word_bound,
        rounds=cfg.rounds,
        total_bound=cfg.total_bound,
        normal_form=cfg.normal_form,
        threads=cfg.threads,
        counts=dict(sorted(state.counts.items())),
        pair_counts=presentation_counts(state, cfg.normal_form),
        visited=len(state),
        batches=state.batches,
        runtime_seconds=time.time() - started,
        aborted=aborted,
        orbit_max=stats.largest,
        orbit_mean=stats.mean,
    )
    if cfg.mode == "trivialize":
        report.found = found_at is not None
        report.exhausted = found_at is None and not aborted
        if found_at is not None:
            report.witness, report.witness_length, report.witness_acm_moves = _witness(
                state, found_at, cfg, target
            )
    return report
