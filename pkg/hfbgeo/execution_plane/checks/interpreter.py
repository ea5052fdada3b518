# hfbgeo/execution_plane/checks/interpreter.py
"""
Suite Interpreter

Executes a suite manifest from the Suite Store:
  1. Records a STARTED run in the Evidence Store (when a record dir is set)
  2. Resolves every step's check component through the RuntimeResolver
  3. Runs each check, collecting its CheckOutcomes
  4. Writes the BOM, the summary table and the final status

The interpreter is stateless: what to run lives in the suite manifest, what
happened lives in the run record and the summary table.
"""
from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

import pandas as pd

from hfbgeo.control_plane.config import ExperimentConfig
from hfbgeo.control_plane.suite_store import SuiteStore
from hfbgeo.core.errors import ConfigError, HfbgeoError, NoTrials
from hfbgeo.execution_plane.checks.sweep import CheckOutcome
from hfbgeo.execution_plane.common import console
from hfbgeo.execution_plane.common.connectors.evidence_store import EvidenceStore
from hfbgeo.execution_plane.common.resolver import RuntimeResolver

logger = logging.getLogger(__name__)

ENGINE_TYPE = "python"
DEFAULT_SUITE = "property_suite"

SUMMARY_COLUMNS = ["check", "trials", "worst", "threshold", "passed", "failing_trial", "failing_seed", "context"]


def outcomes_frame(outcomes: list[CheckOutcome]) -> pd.DataFrame:
    """One row per check class: trials, worst value, threshold, pass/fail."""
    if not outcomes:
        return pd.DataFrame(columns=SUMMARY_COLUMNS)
    frame = pd.DataFrame([asdict(o) for o in outcomes])
    for col in ("failing_trial", "failing_seed"):
        frame[col] = frame[col].astype("object").where(frame[col].notna(), None)
    return frame[SUMMARY_COLUMNS]


def render_summary(frame: pd.DataFrame) -> str:
    if frame.empty:
        return "(no checks ran)"
    shown = frame.copy()
    shown["passed"] = shown["passed"].map({True: "PASS", False: "FAIL"})
    return shown.to_string(index=False, float_format=lambda v: f"{v:.3e}")


@dataclass
class SuiteResult:
    status: str
    outcomes: list = field(default_factory=list)
    bom: dict = field(default_factory=dict)
    utid: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.status == "SUCCESS"

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def frame(self) -> pd.DataFrame:
        return outcomes_frame(self.outcomes)


class SuiteInterpreter:
    """
    Interprets and executes a property suite.
    """

    def __init__(self, config: ExperimentConfig, suite_path: Optional[str] = None, utid: Optional[str] = None):
        self.config = config
        self.utid = utid
        self.path = Path(suite_path or config.suite_path or SuiteStore.find(DEFAULT_SUITE))

        # 1. HYDRATE: load the suite from the Suite Store
        self.parser = SuiteStore.get_parser(self.path)
        evolution = self.parser.get_evolution()
        self.suite_id = self.parser.get_suite_id()
        self.suite_version = evolution.manifest_version
        self.engine = evolution.engine
        self.engine_version = evolution.engine_version

        if self.engine != ENGINE_TYPE:
            raise ConfigError(
                f"Suite declares engine '{self.engine}', but this is the '{ENGINE_TYPE}' interpreter."
            )

        self.steps = self.parser.get_steps()
        if config.suite_trials is not None:
            logger.info("suite: %d trials per step (overriding the manifest)", config.suite_trials)
            self.steps = [
                replace(s, component=replace(s.component, params={**s.component.params, "trials": config.suite_trials}))
                for s in self.steps
            ]
        for step in self.steps:
            if int(step.component.params.get("trials", config.trials)) < 1:
                raise NoTrials(f"Suite step '{step.step_name}' asks for zero trials")

    def _record(self, status: str, **extra) -> None:
        if self.config.record_dir and self.utid:
            EvidenceStore.update_status(Path(self.config.record_dir), self.utid, status, **extra)

    def run(self) -> SuiteResult:
        cfg = self.config
        started_at = datetime.now(timezone.utc).isoformat()
        if cfg.record_dir and self.utid is None:
            self.utid = EvidenceStore.start_run(Path(cfg.record_dir), "suite", cfg.to_dict())

        console.banner(
            "HFBGEO SUITE - EXECUTION START",
            Suite=self.suite_id,
            Version=self.suite_version,
            Engine=f"{self.engine} v{self.engine_version}",
            Seed=cfg.seed,
            Trials=cfg.suite_trials or "per step",
            UTID=self.utid or "(not recorded)",
        )

        bom = {
            "utid": self.utid,
            "suite_id": self.suite_id,
            "suite_version": self.suite_version,
            "suite_hash": SuiteStore._compute_hash(SuiteStore.load(self.path)),
            "engine": self.engine,
            "engine_version": self.engine_version,
            "components_used": [],
            "execution_log": [],
            "started_at": started_at,
        }

        outcomes: list[CheckOutcome] = []
        console.say("\n⚙️  CHECK PHASE")
        for index, step in enumerate(self.steps, start=1):
            spec = step.component
            console.say(f"   [{step.step_name}] Resolving: {spec.path} (v{spec.version})")
            try:
                check_fn = RuntimeResolver.resolve_and_validate({"path": spec.path, "version": spec.version})
            except (RuntimeError, ValueError) as e:
                bom["execution_log"].append({"step": step.step_name, "status": "FAILURE", "result": str(e)})
                self._finish(bom, "FAILURE", outcomes, error=str(e))
                raise ConfigError(str(e)) from e

            ctx = {"config": cfg, "threads": cfg.threads, "stream": index, "step": step.step_name}
            try:
                step_outcomes = check_fn(ctx, spec.params)
            except HfbgeoError as e:
                # a step that cannot even set up counts as one failed check
                logger.error("step %s raised %s", step.step_name, e)
                step_outcomes = [CheckOutcome(
                    check=f"{step.step_name}.setup", kind="flag", trials=0, worst=1.0, threshold=0.0,
                    passed=False, context=f"step {step.step_name}", detail=f"{type(e).__name__}: {e}",
                )]

            failed = [o for o in step_outcomes if not o.passed]
            for o in failed:
                console.fail(o.report())
            if not failed:
                console.ok(f"{step.step_name}: {len(step_outcomes)} checks passed")

            outcomes.extend(step_outcomes)
            bom["components_used"].append({"step": step.step_name, "path": spec.path, "version": spec.version})
            bom["execution_log"].append({
                "step": step.step_name,
                "status": "FAILURE" if failed else "SUCCESS",
                "result": f"{len(step_outcomes) - len(failed)}/{len(step_outcomes)} checks passed",
            })

        status = "SUCCESS" if all(o.passed for o in outcomes) else "FAILURE"
        return self._finish(bom, status, outcomes)

    def _finish(self, bom: dict, status: str, outcomes: list, error: Optional[str] = None) -> SuiteResult:
        bom["completed_at"] = datetime.now(timezone.utc).isoformat()
        bom["status"] = status
        if error:
            bom["error"] = error

        frame = outcomes_frame(outcomes)
        if self.config.out_path:
            Path(self.config.out_path).parent.mkdir(parents=True, exist_ok=True)
            frame.to_csv(self.config.out_path, index=False, float_format="%.17g")

        if self.config.record_dir and self.utid:
            EvidenceStore.write_bom(Path(self.config.record_dir), self.utid, bom)
            extra = {"outcomes": [asdict(o) for o in outcomes]}
            if error:
                extra["error"] = error
            self._record(status, **extra)

        mark = "✅" if status == "SUCCESS" else "❌"
        console.banner(f"{mark} SUITE {status}", Checks=len(outcomes), Failed=sum(not o.passed for o in outcomes))
        return SuiteResult(status=status, outcomes=outcomes, bom=bom, utid=self.utid)


def execute(config: ExperimentConfig, suite_path: Optional[str] = None) -> SuiteResult:
    """
    Entry point for suite execution.

    Args:
        config: the resolved experiment configuration
        suite_path: explicit manifest path (defaults to the latest property suite)
    """
    return SuiteInterpreter(replace(config, command="suite"), suite_path).run()
