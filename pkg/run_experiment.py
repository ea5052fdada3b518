#!/usr/bin/env python3
# run_experiment.py
"""
hfbgeo Experiment Runner

Runs a versioned property suite from the Suite Store with run records, and
inspects or replays earlier runs.

Usage:
    uv run run_experiment.py                                # Latest property_suite
    uv run run_experiment.py property_suite --version 1.0.0 # Specific version
    uv run run_experiment.py acceptance_suite               # Full-scale acceptance counts
    uv run run_experiment.py --seed 11 --trials 5           # Every step at 5 trials

    # Utility
    uv run run_experiment.py --replay <utid>                # Re-run a recorded config
    uv run run_experiment.py --status <utid>                # Show a run record
    uv run run_experiment.py --list                         # List recent runs

Records go to ./runs unless --record-dir or $HFBGEO_RECORD_DIR says otherwise.
"""
import argparse
import os
import sys
from pathlib import Path

# Add project root to path
PROJECT_ROOT = Path(__file__).parent
sys.path.insert(0, str(PROJECT_ROOT))

from hfbgeo.cli import dispatch
from hfbgeo.control_plane.config import build_config
from hfbgeo.control_plane.config.experiment_config import ENV_RECORD_DIR
from hfbgeo.control_plane.suite_store import SuiteStore
from hfbgeo.core.errors import HfbgeoError
from hfbgeo.execution_plane.checks import interpreter
from hfbgeo.execution_plane.common.connectors.evidence_store import EvidenceStore

DEFAULT_RECORD_DIR = PROJECT_ROOT / "runs"

STATUS_ICONS = {"STARTED": "🔄", "SUCCESS": "✅", "FAILURE": "❌"}


def run_suite(name: str, version: str, record_dir: Path, flags: dict) -> int:
    """Full execution flow: locate the manifest, record the run, interpret it."""
    print(f"\n{'=' * 60}")
    print("HFBGEO EXPERIMENT RUNNER")
    print(f"{'=' * 60}\n")

    try:
        path = SuiteStore.find(name, version)
        cfg = build_config("suite", None, {**flags, "record_dir": str(record_dir), "suite_path": str(path)})
        result = interpreter.execute(cfg, str(path))
    except HfbgeoError as e:
        print(f"❌ RUN FAILED: {e}")
        return 2

    print(f"\n{'=' * 60}")
    print("EXECUTION SUMMARY")
    print(f"{'=' * 60}")
    print(f"  UTID: {result.utid}")
    print(f"  Suite: {path.name}")
    print(f"  Status: {result.status}")
    print(f"  Components: {len(result.bom.get('components_used', []))}")
    print()
    print(interpreter.render_summary(result.frame()))

    print(f"\n  📋 Full evidence: {record_dir}/ ({result.utid})")
    return result.exit_code


def replay(utid: str, record_dir: Path) -> int:
    """Re-run the command and configuration stored in a run record."""
    record = EvidenceStore.read_record(record_dir, utid)
    if not record:
        print(f"❌ No record found for UTID: {utid}")
        return 2

    print(f"\n{'=' * 60}")
    print("HFBGEO EXPERIMENT RUNNER - REPLAY")
    print(f"{'=' * 60}\n")
    print(f"📜 REPLAYING {record.get('command')} (hfbgeo v{record.get('version', '?')})")
    print(f"   Source UTID: {utid}")

    config = dict(record.get("config") or {})
    config.pop("command", None)
    config["record_dir"] = str(record_dir)
    try:
        cfg = build_config(record.get("command"), None, config)
        return dispatch(cfg)
    except HfbgeoError as e:
        print(f"❌ REPLAY FAILED: {e}")
        return 2


def check_status(utid: str, record_dir: Path) -> None:
    """Display the record of a run by UTID."""
    record = EvidenceStore.read_record(record_dir, utid)

    if not record:
        print(f"❌ No record found for UTID: {utid}")
        return

    print(f"\n{'=' * 60}")
    print(f"RUN STATUS: {utid}")
    print(f"{'=' * 60}\n")

    print(f"  Status: {record.get('status', 'UNKNOWN')}")
    print(f"  Command: {record.get('command', 'N/A')}")
    print(f"  hfbgeo: v{record.get('version', 'N/A')}")
    print(f"  Seed: {(record.get('config') or {}).get('seed', 'N/A')}")

    failed = [o for o in record.get("outcomes", []) if not o.get("passed")]
    if record.get("outcomes"):
        print(f"  Checks: {len(record['outcomes'])} ({len(failed)} failed)")
        for o in failed:
            print(f"       ❌ {o['check']}: trial {o.get('failing_trial')} (sub-seed {o.get('failing_seed')})")

    if "bom" in record:
        bom = record["bom"]
        print(f"\n  📦 Bill of Materials:")
        print(f"     Suite: {bom.get('suite_id', 'N/A')} (v{bom.get('suite_version', '?')}, hash {bom.get('suite_hash', '?')})")
        print(f"     Engine Version: {bom.get('engine_version', 'N/A')}")
        print(f"     Components Used: {len(bom.get('components_used', []))}")
        for comp in bom.get("components_used", []):
            print(f"       - [{comp['step']}] {comp['path']} (v{comp['version']})")


def list_runs(record_dir: Path) -> None:
    """List recent runs in the record directory."""
    records = EvidenceStore.list_runs(record_dir)

    print(f"\n{'=' * 60}")
    print("RECENT RUNS")
    print(f"{'=' * 60}\n")

    if not records:
        print("  (none)")
        return

    records.sort(key=lambda x: x.get("created_at", ""), reverse=True)

    for r in records[:20]:
        status_icon = STATUS_ICONS.get(r.get("status", ""), "❓")
        print(f"  {status_icon} {r.get('utid', 'N/A')}")
        print(f"     Command: {r.get('command', 'N/A')} (v{r.get('version', '?')})")
        print(f"     Status: {r.get('status', 'UNKNOWN')}")
        print()


def main():
    parser = argparse.ArgumentParser(description="Run an hfbgeo property suite")
    parser.add_argument("suite", nargs="?", default=interpreter.DEFAULT_SUITE, help="Suite name in the Suite Store")
    parser.add_argument("--version", "-v", type=str, help="Specific suite version")
    parser.add_argument("--seed", type=int, help="Master seed")
    parser.add_argument("--trials", type=int, help="Override every step's trial count")
    parser.add_argument("--threads", type=int, help="Worker threads per sweep")
    parser.add_argument("--record-dir", type=str, help="Run record directory")
    parser.add_argument("--replay", "-r", type=str, metavar="UTID", help="Re-run a recorded configuration")
    parser.add_argument("--status", "-s", type=str, metavar="UTID", help="Show a run record")
    parser.add_argument("--list", "-l", action="store_true", help="List recent runs")

    args = parser.parse_args()
    record_dir = Path(args.record_dir or os.environ.get(ENV_RECORD_DIR) or DEFAULT_RECORD_DIR)

    if args.list:
        list_runs(record_dir)
        return

    if args.status:
        check_status(args.status, record_dir)
        return

    if args.replay:
        sys.exit(replay(args.replay, record_dir))

    flags = {"seed": args.seed, "suite_trials": args.trials, "threads": args.threads}
    sys.exit(run_suite(args.suite, args.version, record_dir, flags))


if __name__ == "__main__":
    main()
