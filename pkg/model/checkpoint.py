"""
Search Checkpoint Module
Binary persistence of the breadth-first search state.

File layout:
    magic (8 bytes) | version (u16) | config length (u32) | config JSON
    | SHA-256 of payload (32 bytes) | payload

Payload: visited records (length-prefixed packed pair, parent index,
length-prefixed move text) in insertion order, then the frontier as
(total length, indices) groups, then the processed batch count.
"""
import hashlib
import json
import logging
import os
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple
import sys

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))
from config.settings import CHECKPOINT_MAGIC, CHECKPOINT_VERSION
from model.errors import CheckpointError
from model.words import Pair

logger = logging.getLogger(__name__)

_HEADER = struct.Struct("<HI")
_DIGEST_SIZE = 32


@dataclass
class SearchState:
    """
    Visited normal forms in insertion order with parent links, the frontier
    grouped by total length, and per-total-length counts
    """
    pairs: List[bytes] = field(default_factory=list)
    parents: List[int] = field(default_factory=list)
    moves: List[str] = field(default_factory=list)
    index: Dict[bytes, int] = field(default_factory=dict)
    frontier: Dict[int, List[int]] = field(default_factory=dict)
    counts: Dict[int, int] = field(default_factory=dict)
    batches: int = 0

    def __len__(self) -> int:
        return len(self.pairs)

    def insert(self, packed: bytes, parent: int, move_text: str) -> Optional[int]:
        """Insert-if-absent; returns the new index, or None if already visited"""
        if packed in self.index:
            return None
        position = len(self.pairs)
        self.pairs.append(packed)
        self.parents.append(parent)
        self.moves.append(move_text)
        self.index[packed] = position
        total = Pair.unpack(packed).total_length
        self.counts[total] = self.counts.get(total, 0) + 1
        self.frontier.setdefault(total, []).append(position)
        return position

    def pair(self, position: int) -> Pair:
        return Pair.unpack(self.pairs[position])

    def path_to(self, position: int) -> List[int]:
        """Indices from the seed to `position`"""
        path = []
        while position >= 0:
            path.append(position)
            position = self.parents[position]
        return list(reversed(path))


def _encode_payload(state: SearchState) -> bytes:
    chunks = [struct.pack("<Q", len(state.pairs))]
    for packed, parent, move_text in zip(state.pairs, state.parents, state.moves):
        move_bytes = move_text.encode("utf-8")
        chunks.append(struct.pack("<H", len(packed)))
        chunks.append(packed)
        chunks.append(struct.pack("<qH", parent, len(move_bytes)))
        chunks.append(move_bytes)
    groups = [(total, indices) for total, indices in sorted(state.frontier.items()) if indices]
    chunks.append(struct.pack("<I", len(groups)))
    for total, indices in groups:
        chunks.append(struct.pack(f"<HI{len(indices)}Q", total, len(indices), *indices))
    chunks.append(struct.pack("<Q", state.batches))
    return b"".join(chunks)


def _decode_payload(payload: bytes) -> SearchState:
    state = SearchState()
    offset = 0

    def take(fmt: str):
        nonlocal offset
        values = struct.unpack_from(fmt, payload, offset)
        offset += struct.calcsize(fmt)
        return values

    (visited,) = take("<Q")
    for _ in range(visited):
        (size,) = take("<H")
        packed = payload[offset:offset + size]
        if len(packed) != size:
            raise CheckpointError("checkpoint payload is truncated")
        offset += size
        parent, move_size = take("<qH")
        move_text = payload[offset:offset + move_size].decode("utf-8")
        offset += move_size
        position = len(state.pairs)
        state.pairs.append(packed)
        state.parents.append(parent)
        state.moves.append(move_text)
        state.index[packed] = position
        total = Pair.unpack(packed).total_length
        state.counts[total] = state.counts.get(total, 0) + 1
    (group_count,) = take("<I")
    for _ in range(group_count):
        total, size = take("<HI")
        state.frontier[total] = list(take(f"<{size}Q"))
    (state.batches,) = take("<Q")
    if offset != len(payload):
        raise CheckpointError("trailing bytes after checkpoint payload")
    return state


def save_checkpoint(path: Path, config: Dict, state: SearchState) -> None:
    """Write a checkpoint atomically (temporary file, then rename)"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    config_bytes = json.dumps(config, sort_keys=True).encode("utf-8")
    payload = _encode_payload(state)
    digest = hashlib.sha256(payload).digest()
    temporary = path.with_suffix(path.suffix + ".tmp")
    with open(temporary, "wb") as f:
        f.write(CHECKPOINT_MAGIC)
        f.write(_HEADER.pack(CHECKPOINT_VERSION, len(config_bytes)))
        f.write(config_bytes)
        f.write(digest)
        f.write(payload)
    os.replace(temporary, path)
    logger.info(f"checkpoint written to {path}: {len(state)} visited, batch {state.batches}")


def load_checkpoint(path: Path) -> Tuple[Dict, SearchState]:
    """
    Read a checkpoint back

    Raises:
        CheckpointError: on foreign magic, version mismatch, truncation or
            checksum mismatch
    """
    with open(path, "rb") as f:
        data = f.read()
    magic_size = len(CHECKPOINT_MAGIC)
    if data[:magic_size] != CHECKPOINT_MAGIC:
        raise CheckpointError(f"{path} is not a search checkpoint")
    try:
        version, config_size = _HEADER.unpack_from(data, magic_size)
    except struct.error as e:
        raise CheckpointError(f"{path} is truncated") from e
    if version != CHECKPOINT_VERSION:
        raise CheckpointError(f"{path} has version {version}, expected {CHECKPOINT_VERSION}")
    offset = magic_size + _HEADER.size
    config_bytes = data[offset:offset + config_size]
    offset += config_size
    digest = data[offset:offset + _DIGEST_SIZE]
    offset += _DIGEST_SIZE
    if len(config_bytes) != config_size or len(digest) != _DIGEST_SIZE:
        raise CheckpointError(f"{path} is truncated")
    payload = data[offset:]
    if hashlib.sha256(payload).digest() != digest:
        raise CheckpointError(f"{path} failed its checksum")
    try:
        config = json.loads(config_bytes.decode("utf-8"))
        state = _decode_payload(payload)
    except (struct.error, UnicodeDecodeError, ValueError) as e:
        raise CheckpointError(f"{path} is corrupted: {e}") from e
    logger.info(f"checkpoint read from {path}: {len(state)} visited, batch {state.batches}")
    return config, state
