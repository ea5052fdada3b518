# hfbgeo/execution_plane/checks/sweep.py
"""
Property Sweeps

A Sweep draws one row (or a few) per seeded trial and judges the rows
against Criteria. Rows are plain dicts so they stream straight into a
CsvSink; every row carries its trial index and reproducing sub-seed.

Criterion kinds:
  - max:  row[key] <= threshold      (residuals)
  - min:  row[key] >  threshold      (positivity)
  - flag: row[key] is truthy         (exact/discrete properties)

NaN means "not applicable to this trial" and is skipped. A Criterion with
rtol > 0 widens its threshold by rtol * |threshold|, for bounds that are
attained exactly (a value equal to the bound up to roundoff passes).
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

import numpy as np

from hfbgeo.core.errors import ConfigError, HfbgeoError
from hfbgeo.execution_plane.common.connectors.seed_counter import iter_trials, trial_seeds

logger = logging.getLogger(__name__)

KINDS = ("max", "min", "flag")

Row = dict
TrialFn = Callable[[int, int], Union[Row, list]]


@dataclass(frozen=True)
class Criterion:
    check: str
    key: str
    threshold: float = 0.0
    kind: str = "max"
    rtol: float = 0.0

    def limit(self) -> float:
        slack = self.rtol * abs(self.threshold)
        return self.threshold - slack if self.kind == "min" else self.threshold + slack


@dataclass(frozen=True)
class CheckOutcome:
    check: str
    kind: str
    trials: int
    worst: float
    threshold: float
    passed: bool
    failing_trial: Optional[int] = None
    failing_seed: Optional[int] = None
    context: str = ""
    detail: str = ""

    def report(self) -> str:
        if self.passed:
            return f"{self.check}: ok ({self.trials} trials, worst {self.worst:.3e})"
        where = f"trial {self.failing_trial} (sub-seed {self.failing_seed}"
        where += f", {self.context})" if self.context else ")"
        relation = {"max": "<=", "min": ">", "flag": "holds"}[self.kind]
        expected = f"expected {relation} {self.threshold:.1e}" if self.kind != "flag" else "expected property to hold"
        line = f"{self.check} FAILED at {where}: worst {self.worst:.3e}, {expected}"
        return f"{line}; {self.detail}" if self.detail else line


def _violates(kind: str, value, threshold: float) -> bool:
    if kind == "max":
        return not value <= threshold
    if kind == "min":
        return not value > threshold
    return not bool(value)


def _applicable(value) -> bool:
    if value is None:
        return False
    if isinstance(value, (float, np.floating)) and math.isnan(value):
        return False
    return True


def judge(rows: Sequence[Row], criteria: Iterable[Criterion], context: str = "", prefix: str = "") -> list[CheckOutcome]:
    """One outcome per criterion, plus ``<prefix>.errors`` for trials that raised."""
    outcomes = []
    good = [r for r in rows if "error" not in r]
    for c in criteria:
        values = [(r, r.get(c.key)) for r in good if _applicable(r.get(c.key))]
        failing = next(((r, v) for r, v in values if _violates(c.kind, v, c.limit())), None)
        if c.kind == "flag":
            worst = float(sum(1 for _, v in values if not v))
        elif not values:
            worst = float("nan")
        elif c.kind == "max":
            worst = float(max(v for _, v in values))
        else:
            worst = float(min(v for _, v in values))
        outcomes.append(CheckOutcome(
            check=c.check,
            kind=c.kind,
            trials=len(values),
            worst=worst,
            threshold=c.threshold,
            passed=failing is None,
            failing_trial=None if failing is None else failing[0].get("trial"),
            failing_seed=None if failing is None else failing[0].get("seed"),
            context=context,
        ))

    errors = [r for r in rows if "error" in r]
    first = errors[0] if errors else {}
    outcomes.append(CheckOutcome(
        check=f"{prefix}.errors" if prefix else "errors",
        kind="max",
        trials=len(rows),
        worst=float(len(errors)),
        threshold=0.0,
        passed=not errors,
        failing_trial=first.get("trial"),
        failing_seed=first.get("seed"),
        context=context,
        detail=first.get("error", ""),
    ))
    return outcomes


def merge_outcomes(outcomes: Iterable[CheckOutcome]) -> list[CheckOutcome]:
    """Fold outcomes with the same check name; first failure wins the report."""
    merged: dict[str, CheckOutcome] = {}
    for o in outcomes:
        prev = merged.get(o.check)
        if prev is None:
            merged[o.check] = o
            continue
        pool = [w for w in (prev.worst, o.worst) if not math.isnan(w)]
        if not pool:
            worst = float("nan")
        elif o.kind == "min":
            worst = min(pool)
        else:
            worst = max(pool) if o.kind == "max" else sum(pool)
        failed = prev if not prev.passed else o
        merged[o.check] = replace(
            prev,
            trials=prev.trials + o.trials,
            worst=worst,
            passed=prev.passed and o.passed,
            failing_trial=failed.failing_trial,
            failing_seed=failed.failing_seed,
            context=failed.context,
            detail=failed.detail,
        )
    return list(merged.values())


def guarded(fn: TrialFn) -> Callable[[int, int], list]:
    """
    Wrap a trial so it always returns rows tagged with trial and seed; a
    domain or numerical error becomes an error row instead of aborting the sweep.
    """
    def run(trial: int, seed: int) -> list:
        try:
            out = fn(trial, seed)
        except (HfbgeoError, np.linalg.LinAlgError) as e:
            logger.debug("trial %d (seed %d) raised %s", trial, seed, e)
            return [{"trial": trial, "seed": seed, "error": f"{type(e).__name__}: {e}"}]
        rows = out if isinstance(out, list) else [out]
        return [{"trial": trial, "seed": seed, **row} for row in rows]
    return run


@dataclass
class Sweep:
    command: str
    fields: tuple[str, ...]
    trial: TrialFn
    criteria: tuple[Criterion, ...]
    context: str = ""
    setup: Row = field(default_factory=dict)  # trial-independent values copied into every row

    @property
    def columns(self) -> tuple[str, ...]:
        return ("trial", "seed") + tuple(self.fields) + ("error",)

    def run(self, seeds: Sequence[int], threads: int = 1, sink=None) -> list[Row]:
        rows = []
        for batch in iter_trials(guarded(self.trial), list(seeds), threads):
            for row in batch:
                if "error" not in row:
                    row = {**self.setup, **row}
                if sink is not None:
                    sink.write(row)
                rows.append(row)
        return rows

    def judge(self, rows: Sequence[Row]) -> list[CheckOutcome]:
        return judge(rows, self.criteria, self.context, prefix=self.command)


def select_sweeps(available: Mapping[str, Callable[..., Sweep]], params: dict) -> list[Callable[..., Sweep]]:
    """Builders named by ``params["sweeps"]``, in that order; all of them when absent."""
    names = list(params.get("sweeps") or available)
    unknown = [name for name in names if name not in available]
    if unknown:
        raise ConfigError(f"Unknown sweeps {unknown}; this component runs {list(available)}")
    return [available[name] for name in names]


def sweep_grid(ctx: dict, params: dict, build: Callable[..., list[Sweep]], uses_spectrum: bool = True) -> list[CheckOutcome]:
    """
    Run ``build(config)`` sweeps over every (n, spectrum) the suite step asks for.

    params:
        dimensions: list of n (default: config n)
        spectra:    list of spectrum requests (default: config spectrum)
        trials:     trials per sweep (default: config trials)
        sweeps:     subset of the component's sweeps (see select_sweeps)
        max_n:      skip larger n (Fock-bound steps)
    """
    cfg = ctx["config"]
    threads = ctx.get("threads", cfg.threads)
    trials = int(params.get("trials", cfg.trials))
    dims = [int(n) for n in params.get("dimensions", [cfg.n])]
    max_n = params.get("max_n")
    spectra = [tuple(float(v) for v in s) for s in params.get("spectra", [cfg.spectrum])] if uses_spectrum else [cfg.spectrum]

    outcomes = []
    stream = int(ctx.get("stream", 0)) * 10_000
    for n in dims:
        if max_n is not None and n > int(max_n):
            continue
        for spectrum in spectra:
            if uses_spectrum and len(spectrum) > n:
                continue
            variant = replace(cfg, n=n, spectrum=spectrum if uses_spectrum else cfg.spectrum[:n], trials=trials)
            for sweep in build(variant):
                stream += 1
                seeds = trial_seeds(cfg.seed, trials, stream)
                rows = sweep.run(seeds, threads)
                outcomes.extend(sweep.judge(rows))
    return merge_outcomes(outcomes)
