"""
Relator Collection Script
Extracts every distinct relator (least cyclic representative) from a
search checkpoint into a relator file that `classify` reads.
"""
import argparse
import json
from pathlib import Path
from typing import List, Optional
import sys

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))
from config.settings import CHECKPOINT_DIR, PROCESSED_DATA_DIR
from model.checkpoint import SearchState, load_checkpoint
from model.words import Word, least_cyclic_representative


class RelatorCollector:
    """Collects the relators of all visited pairs of a search"""

    def __init__(self, output_dir: Path = None):
        self.output_dir = output_dir or PROCESSED_DATA_DIR
        self.output_dir.mkdir(parents=True, exist_ok=True)

    def collect(self, state: SearchState, max_total: Optional[int] = None) -> List[Word]:
        """Distinct relators by cyclic class, ordered shortlex"""
        relators = set()
        for position in range(len(state)):
            pair = state.pair(position)
            if max_total is not None and pair.total_length > max_total:
                continue
            relators.add(least_cyclic_representative(pair.first))
            relators.add(least_cyclic_representative(pair.second))
        return sorted(relators)

    def collect_from_checkpoint(self, path: Path, max_total: Optional[int] = None) -> List[Word]:
        config, state = load_checkpoint(path)
        print(f"Loaded {len(state):,} visited pairs (seed {config.get('seed')}, "
              f"L={config.get('word_bound')})")
        return self.collect(state, max_total)

    def save(self, relators: List[Word], filename: str = "relators.txt",
             source: str = "") -> Path:
        filepath = self.output_dir / filename
        with open(filepath, "w", encoding="utf-8") as f:
            if source:
                f.write(f"# relators collected from {source}\n")
            for relator in relators:
                f.write(relator.to_text() + "\n")
        print(f"Saved: {filepath} ({len(relators)} relators)")
        return filepath


def main(argv: Optional[List[str]] = None):
    parser = argparse.ArgumentParser(description="Collect relators from a search checkpoint")
    parser.add_argument("checkpoint", type=Path, nargs="?",
                        default=CHECKPOINT_DIR / "enumerate.ckpt", help="checkpoint file")
    parser.add_argument("--max-total", type=int, help="skip pairs longer than this")
    parser.add_argument("--output", default="relators.txt", help="file name under data/processed")
    args = parser.parse_args(argv)

    collector = RelatorCollector()
    relators = collector.collect_from_checkpoint(args.checkpoint, args.max_total)
    path = collector.save(relators, args.output, source=str(args.checkpoint))

    stats = {"checkpoint": str(args.checkpoint), "relators": len(relators), "file": str(path)}
    print(json.dumps(stats, indent=2))
    return path


if __name__ == "__main__":
    main()
