# hfbgeo/control_plane/suite_store/suite_store.py
"""
Suite Store

Holds the versioned suite manifests under ``staging/suites/`` and parses them.
A suite manifest sequences property-sweep components:

  manifest:
    identity:  {name, domain, owner}
    evolution: {manifest_version, manifest_schema_version, engine, engine_version}
    intent:
      defaults: {dimensions: [2, 3, 4], trials: 50, ...}   # merged under every step's params
      steps:
        - step: "fock"
          component: {path: "v1.fock_checks.run", version: "1.0.0"}
          params: {dimensions: [2, 3, 4]}

Files are named ``<name>_v<manifest_version>.yaml``; the latest version wins
when none is requested.
"""
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml

from hfbgeo.core.errors import ConfigError

_PROJECT_ROOT = Path(__file__).parent.parent.parent.parent
SUITE_STORE_PATH = _PROJECT_ROOT / "staging" / "suites"


@dataclass
class ComponentSpec:
    """Specification for a suite component."""
    path: str
    version: str
    params: Dict[str, Any]


@dataclass
class SuiteStep:
    """A step from suite intent."""
    step_name: str
    component: ComponentSpec


@dataclass
class Evolution:
    """Suite evolution block."""
    manifest_version: str
    manifest_schema_version: str
    engine: str
    engine_version: str


@dataclass
class Identity:
    """Suite identity block."""
    name: str
    domain: str
    owner: str


class SuiteParser:
    """
    V1 suite parser: the single place that reads suite manifest fields.
    """

    SCHEMA_VERSION_MAJOR = 1

    def __init__(self, manifest: dict):
        if not isinstance(manifest, dict):
            raise ConfigError(f"Suite manifest must be a mapping, got {type(manifest).__name__}")
        self._manifest = manifest.get("manifest", manifest)
        self._validate_schema_compatibility()

    def _validate_schema_compatibility(self) -> None:
        schema_version = self._manifest.get("evolution", {}).get("manifest_schema_version", "1.0.0")
        try:
            major = int(str(schema_version).split(".")[0])
        except ValueError as e:
            raise ConfigError(f"Unreadable manifest_schema_version {schema_version!r}") from e
        if major != self.SCHEMA_VERSION_MAJOR:
            raise ConfigError(
                f"SuiteParser cannot parse manifest_schema_version {schema_version}. "
                f"Expected major version {self.SCHEMA_VERSION_MAJOR}."
            )

    # =========================================================================
    # IDENTITY / EVOLUTION
    # =========================================================================

    def get_identity(self) -> Identity:
        identity = self._manifest.get("identity", {})
        return Identity(
            name=identity.get("name", ""),
            domain=identity.get("domain", ""),
            owner=identity.get("owner", ""),
        )

    def get_evolution(self) -> Evolution:
        evolution = self._manifest.get("evolution", {})
        return Evolution(
            manifest_version=str(evolution.get("manifest_version", "1.0.0")),
            manifest_schema_version=str(evolution.get("manifest_schema_version", "1.0.0")),
            engine=evolution.get("engine", "python"),
            engine_version=str(evolution.get("engine_version", "1.0.0")),
        )

    def get_suite_id(self) -> str:
        return self.get_identity().name

    # =========================================================================
    # INTENT
    # =========================================================================

    def get_defaults(self) -> Dict[str, Any]:
        return dict(self._manifest.get("intent", {}).get("defaults", {}) or {})

    def get_steps(self) -> List[SuiteStep]:
        """Steps in declared order, each with defaults merged under its params."""
        defaults = self.get_defaults()
        steps = []
        for raw in self._manifest.get("intent", {}).get("steps", []) or []:
            component = raw.get("component") or {}
            if "path" not in component or "version" not in component:
                raise ConfigError(f"Suite step {raw.get('step')!r} needs component.path and component.version")
            params = dict(defaults)
            params.update(raw.get("params") or {})
            steps.append(SuiteStep(
                step_name=raw.get("step", component["path"]),
                component=ComponentSpec(component["path"], str(component["version"]), params),
            ))
        if not steps:
            raise ConfigError(f"Suite '{self.get_suite_id()}' declares no steps")
        return steps


class SuiteStore:
    """Static methods for locating and loading suite manifests."""

    @staticmethod
    def _compute_hash(manifest: dict) -> str:
        """SHA256 of the manifest content, keys sorted."""
        content = json.dumps(manifest, sort_keys=True, default=str)
        return hashlib.sha256(content.encode()).hexdigest()[:16]

    @staticmethod
    def _compare_versions(v1: str, v2: str) -> int:
        """-1 if v1 < v2, 0 if equal, 1 if v1 > v2."""
        def parse_version(v: str) -> tuple:
            return tuple(int(p) for p in v.split(".") if p.isdigit())

        p1, p2 = parse_version(v1), parse_version(v2)
        if p1 < p2:
            return -1
        if p1 > p2:
            return 1
        return 0

    @staticmethod
    def list_suites(store: Path = SUITE_STORE_PATH) -> List[Path]:
        return sorted(Path(store).glob("*_v*.yaml"))

    @staticmethod
    def find(name: str, version: Optional[str] = None, store: Path = SUITE_STORE_PATH) -> Path:
        """Path of ``name`` at ``version`` (latest when None)."""
        candidates = [p for p in SuiteStore.list_suites(store) if p.stem.rsplit("_v", 1)[0] == name]
        if version:
            candidates = [p for p in candidates if p.stem.rsplit("_v", 1)[1] == version]
        if not candidates:
            raise ConfigError(f"No suite '{name}' (version {version or 'latest'}) in {store}")
        latest = candidates[0]
        for p in candidates[1:]:
            if SuiteStore._compare_versions(p.stem.rsplit("_v", 1)[1], latest.stem.rsplit("_v", 1)[1]) > 0:
                latest = p
        return latest

    @staticmethod
    def load(path: Path) -> dict:
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"Suite manifest not found: {path}")
        try:
            with open(path, "r") as f:
                manifest = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigError(f"Malformed suite manifest {path}: {e}") from e
        if not isinstance(manifest, dict):
            raise ConfigError(f"Suite manifest {path} must be a mapping")
        return manifest

    @staticmethod
    def get_parser(path: Path) -> SuiteParser:
        return SuiteParser(SuiteStore.load(path))
