#!/usr/bin/env python3
# reset.py
"""
hfbgeo Reset Script

Clears run artifacts from a record directory:
- Run records (run_*.json)
- Sweep output written next to them (*.csv, *.json results)
- The record sequence counter (.seq)

Does NOT clear:
- Staging (suite manifests and example configs)

Usage:
    uv run reset.py              # Interactive confirmation
    uv run reset.py --force      # No confirmation
    uv run reset.py --dry-run    # Show what would be deleted
    uv run reset.py --record-dir other_runs
"""
import argparse
import os
import sys
from pathlib import Path

PROJECT_ROOT = Path(__file__).parent

sys.path.insert(0, str(PROJECT_ROOT))

from hfbgeo.control_plane.config.experiment_config import ENV_RECORD_DIR
from hfbgeo.execution_plane.common.connectors.sequence_counter import get_current_seq, reset_sequence

DEFAULT_RECORD_DIR = PROJECT_ROOT / "runs"
ARTIFACT_PATTERNS = ("run_*.json", "*.csv", "*.json")


def get_reset_files(record_dir: Path) -> list:
    """Artifacts under record_dir, each listed once."""
    if not record_dir.exists():
        return []
    found = {}
    for pattern in ARTIFACT_PATTERNS:
        for f in record_dir.glob(pattern):
            if f.is_file():
                found[f] = None
    return sorted(found)


def reset(record_dir: Path, dry_run: bool = False) -> dict:
    """Delete run artifacts and rewind the sequence counter."""
    files = get_reset_files(record_dir)
    stats = {"deleted": 0, "files": [str(f) for f in files], "sequence": get_current_seq(record_dir)}
    if dry_run:
        return stats
    for f in files:
        f.unlink()
        stats["deleted"] += 1
    if record_dir.exists():
        reset_sequence(record_dir)
    return stats


def main():
    parser = argparse.ArgumentParser(description="Reset hfbgeo run artifacts")
    parser.add_argument("--force", "-f", action="store_true", help="Skip confirmation")
    parser.add_argument("--dry-run", "-n", action="store_true", help="Show what would be deleted")
    parser.add_argument("--record-dir", type=str, help="Record directory (default ./runs)")

    args = parser.parse_args()
    record_dir = Path(args.record_dir or os.environ.get(ENV_RECORD_DIR) or DEFAULT_RECORD_DIR)

    print(f"\n{'=' * 60}")
    print("HFBGEO RESET")
    print(f"{'=' * 60}\n")

    # Preview
    stats = reset(record_dir, dry_run=True)

    if not stats["files"] and stats["sequence"] == 0:
        print("✓ Nothing to reset - record directory is already empty.")
        return

    print(f"The following will be cleared in {record_dir}:\n")
    for f in stats["files"]:
        print(f"  📄 {Path(f).name}")
    print(f"  🔢 sequence counter at {stats['sequence']}")
    print(f"\n  Total: {len(stats['files'])} file(s)")

    if args.dry_run:
        print("\n  (dry-run mode - no files deleted)")
        return

    if not args.force:
        response = input("\nProceed with reset? [y/N]: ")
        if response.lower() != "y":
            print("Cancelled.")
            sys.exit(0)

    stats = reset(record_dir, dry_run=False)

    print(f"\n✅ Reset complete. Deleted {stats['deleted']} file(s).")


if __name__ == "__main__":
    main()
