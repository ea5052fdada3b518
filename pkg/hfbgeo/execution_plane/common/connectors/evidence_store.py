# hfbgeo/execution_plane/common/connectors/evidence_store.py
"""
Evidence Store Connector

Append-mostly audit log of experiment runs: one JSON record per invocation.

Record:
  Filename: run_{seq:04d}_{command}_v{version}.json
  Fields:   utid, command, version, status, config, bom, outcomes,
            created_at / started_at / success_at | failure_at (UTC ISO)

Records live in a caller-chosen directory (``--record-dir`` or HFBGEO_RECORD_DIR).
"""
import json
import uuid
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, List, Optional

from hfbgeo import __version__
from hfbgeo.execution_plane.common.connectors.sequence_counter import next_seq


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


class EvidenceStore:
    """
    Static methods for writing/reading run records.
    """

    # utid -> record path, for updates to existing records
    _utid_to_path: Dict[str, Path] = {}

    @staticmethod
    def _find(record_dir: Path, utid: str) -> Optional[Path]:
        cached = EvidenceStore._utid_to_path.get(utid)
        if cached is not None and cached.exists():
            return cached
        for f in Path(record_dir).glob("run_*.json"):
            try:
                with open(f, "r") as file:
                    if json.load(file).get("utid") == utid:
                        EvidenceStore._utid_to_path[utid] = f
                        return f
            except (json.JSONDecodeError, OSError):
                continue
        return None

    @staticmethod
    def start_run(record_dir: Path, command: str, config: dict) -> str:
        """
        Create a new STARTED record and return its utid.
        """
        record_dir = Path(record_dir)
        record_dir.mkdir(parents=True, exist_ok=True)
        utid = f"utid-{uuid.uuid4()}"
        seq = next_seq(record_dir)
        safe_command = command.replace("/", "_")
        path = record_dir / f"run_{seq:04d}_{safe_command}_v{__version__}.json"
        EvidenceStore._utid_to_path[utid] = path

        timestamp = _now()
        record = {
            "utid": utid,
            "command": command,
            "version": __version__,
            "status": "STARTED",
            "config": config,
            "created_at": timestamp,
            "started_at": timestamp,
        }
        with open(path, "w") as f:
            json.dump(record, f, indent=2)
        return utid

    @staticmethod
    def write_record(record_dir: Path, utid: str, data: dict) -> None:
        """Merge ``data`` into an existing record; utid stays the first field."""
        path = EvidenceStore._find(record_dir, utid)
        if path is None:
            raise KeyError(f"No run record with utid {utid} in {record_dir}")
        with open(path, "r") as f:
            existing = json.load(f)
        existing.update(data)
        existing["updated_at"] = _now()
        ordered = {"utid": existing.pop("utid")}
        ordered.update(existing)
        with open(path, "w") as f:
            json.dump(ordered, f, indent=2, default=str)

    @staticmethod
    def update_status(record_dir: Path, utid: str, status: str, **extra) -> None:
        """
        Args:
            status: STARTED, SUCCESS or FAILURE
            **extra: additional fields to record
        """
        EvidenceStore.write_record(record_dir, utid, {
            "status": status,
            f"{status.lower()}_at": _now(),
            **extra,
        })

    @staticmethod
    def write_bom(record_dir: Path, utid: str, bom: dict) -> None:
        """Bill of materials: the component path + version of every step."""
        EvidenceStore.write_record(record_dir, utid, {"bom": bom})

    @staticmethod
    def read_record(record_dir: Path, utid: str) -> Optional[Dict]:
        path = EvidenceStore._find(record_dir, utid)
        if path is None:
            return None
        with open(path, "r") as f:
            return json.load(f)

    @staticmethod
    def list_runs(record_dir: Path, command: Optional[str] = None) -> List[Dict]:
        """All records in sequence order, optionally filtered by command."""
        record_dir = Path(record_dir)
        if not record_dir.exists():
            return []
        records = []
        for f in sorted(record_dir.glob("run_*.json")):
            with open(f, "r") as file:
                record = json.load(file)
            if command is None or record.get("command") == command:
                records.append(record)
        return records
