"""
Configuration settings for the Andrews-Curtis search toolkit
"""
import os
from pathlib import Path

# Project root directory
PROJECT_ROOT = Path(__file__).parent.parent

# Load .env file if exists
_env_file = PROJECT_ROOT / ".env"
if _env_file.exists():
    with open(_env_file, "r", encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line and not line.startswith("#") and "=" in line:
                key, value = line.split("=", 1)
                os.environ.setdefault(key.strip(), value.strip())


def _env_int(name: str, default: int) -> int:
    """Integer override from the environment, falling back to default"""
    raw = os.environ.get(name, "").strip()
    if not raw:
        return default
    try:
        return int(float(raw))
    except ValueError:
        return default


# Data directories
DATA_DIR = PROJECT_ROOT / "data"
MOVE_SCRIPTS_DIR = DATA_DIR / "move_scripts"
PRESENTATIONS_DIR = DATA_DIR / "presentations"
PROCESSED_DATA_DIR = DATA_DIR / "processed"
CHECKPOINT_DIR = DATA_DIR / "checkpoints"
OUTPUT_DIR = DATA_DIR / "visualization" / "output"

# Logging
LOG_LEVEL = os.environ.get("AC_LOG_LEVEL", "WARNING").upper()

# =============================================================================
# CONJUGATE HARVESTING (pseudo-conjugacy graphs)
# =============================================================================

# Number of R-completion rounds applied to Loop(u)
DEFAULT_ROUNDS = 2

# Maximal length of a harvested conjugate
DEFAULT_WORD_BOUND = 10

# Per-pivot cap on enumerated half-paths before the pivot is abandoned
HARVEST_BIN_CAP = _env_int("AC_HARVEST_BIN_CAP", 10_000_000)

# Edge weights are kept inside a signed 64-bit range
WEIGHT_LIMIT = 2 ** 63

# =============================================================================
# NORMAL FORMS
# =============================================================================

# Cap on the number of pairs in a minimal-length automorphic orbit
ORBIT_CAP = _env_int("AC_ORBIT_CAP", 100_000)

# LRU sizes for the normal form caches
NF_CACHE_SIZE = 1 << 18
CONJUGATES_CACHE_SIZE = 1 << 14

# =============================================================================
# SEARCH
# =============================================================================

# Memory guard: abort (after checkpointing) once this many pairs are visited
MAX_VISITED = _env_int("AC_MAX_VISITED", 50_000_000)

# Write a checkpoint every N processed batches when a checkpoint path is set
CHECKPOINT_EVERY = 50

CHECKPOINT_MAGIC = b"ACBFS\x00\x01\x00"
CHECKPOINT_VERSION = 1

# Format tag written as the first line of every TSV output
COUNTS_FORMAT = "ac-counts/1"

# =============================================================================
# VERIFICATION
# =============================================================================

# Finite quotient oracle: exhaustive over S_k up to this degree
ORACLE_MAX_DEGREE = 5

# Random homomorphisms tried per degree above the exhaustive range
ORACLE_TRIALS = 2000

ORACLE_SEED = 20160601

# Largest number of completion rounds tried when verifying a scripted ACM step
REPLAY_MAX_ROUNDS = 4

# =============================================================================
# REFERENCE PRESENTATIONS
# =============================================================================

AK2_PAIR = "xxYYY xyxYXY"
GORDON_PAIR = "XyxxY xyyyXYYYY"

# Lemma scripts replayed by the experiment pipeline
MOVE_SCRIPTS = {
    "swap": "lemma_swap_xy.txt",
    "invert_y": "lemma_invert_y.txt",
    "y_to_yx": "lemma_y_to_yx.txt",
}

# Table 1 columns reproducible at desk scale, T -> count
TABLE1_REFERENCE = {
    10: {13: 4, 14: 10, 15: 70, 16: 64, 17: 220, 18: 98, 19: 240, 20: 10, 21: 20},
    11: {13: 4, 14: 10, 15: 70, 16: 86, 17: 416, 18: 392, 19: 764, 20: 442,
         21: 746, 22: 438, 23: 112, 24: 6},
    12: {13: 4, 14: 10, 15: 70, 16: 86, 17: 454, 18: 398, 19: 1382, 20: 522,
         21: 1624, 22: 570, 23: 1462, 24: 42, 25: 110},
}
