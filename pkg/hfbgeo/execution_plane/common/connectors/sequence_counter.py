# hfbgeo/execution_plane/common/connectors/sequence_counter.py
"""
Sequence Counter for run-record file naming.

Each record directory keeps its own counter in a ``.seq`` file, so records
are numbered run_0001, run_0002, ... per directory.
"""
import json
from pathlib import Path

_SEQ_FILE = ".seq"


def _seq_path(record_dir: Path) -> Path:
    return Path(record_dir) / _SEQ_FILE


def _load_seq(record_dir: Path) -> int:
    """Load current sequence number for a record directory."""
    seq_file = _seq_path(record_dir)
    if not seq_file.exists():
        return 0
    try:
        with open(seq_file, "r") as f:
            data = json.load(f)
        # bare int or {"seq": n}
        if isinstance(data, int):
            return data
        return int(data.get("seq", 0))
    except (json.JSONDecodeError, OSError, ValueError):
        return 0


def _save_seq(record_dir: Path, seq: int) -> None:
    seq_file = _seq_path(record_dir)
    seq_file.parent.mkdir(parents=True, exist_ok=True)
    with open(seq_file, "w") as f:
        json.dump({"seq": seq}, f)


def next_seq(record_dir: Path) -> int:
    """Next sequence number (1-based), persisted immediately."""
    next_num = _load_seq(record_dir) + 1
    _save_seq(record_dir, next_num)
    return next_num


def get_current_seq(record_dir: Path) -> int:
    """Current sequence number without incrementing."""
    return _load_seq(record_dir)


def reset_sequence(record_dir: Path) -> None:
    seq_file = _seq_path(record_dir)
    if seq_file.exists():
        seq_file.unlink()
