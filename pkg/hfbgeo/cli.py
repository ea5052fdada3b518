# hfbgeo/cli.py
"""
hfbgeo command line.

Usage:
    hfbgeo section-test --spec 0.4,0 --n 4 --trials 10000 --seed 7
    hfbgeo polarization-test --spec 0.5,0.3 --n 5
    hfbgeo fock-verify --n 4 --seed 3 --trials 200
    hfbgeo hfb-minimize --L 2 --t 1 --U 4 --mu 0 --seed 1 --out result.json
    hfbgeo diagonalize --in g.json --tol 1e-10
    hfbgeo suite --suite staging/suites/property_suite_v1.0.0.yaml
    hfbgeo suite --suite staging/suites/acceptance_suite_v1.0.0.yaml
    hfbgeo suite --trials 5            # every step at 5 trials

Sweep commands stream one CSV row per trial to --out (stdout when absent);
progress and failure reports go to stderr.

Exit codes:
    0  every check passed
    1  a property check failed (the report names the trial and its sub-seed)
       or a numerical routine could not meet its tolerance
    2  bad configuration or malformed input
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

from hfbgeo import __version__
from hfbgeo.control_plane.config import COMMANDS, ExperimentConfig, build_config, load_config_file
from hfbgeo.core.errors import ConfigError, DomainError, NumericalError
from hfbgeo.core.g1pdm import G1pdm, bog_unitary_to_json, diagonalization_residual, diagonalize, g1pdm_from_json
from hfbgeo.core.hfbopt import build_hubbard, ground_energy, hfb_result_to_json, minimize_hfb, one_body_ground_energy
from hfbgeo.execution_plane.checks import interpreter
from hfbgeo.execution_plane.checks.sweep import CheckOutcome, Sweep
from hfbgeo.execution_plane.checks.v1.fock_checks import fock_sweep
from hfbgeo.execution_plane.checks.v1.g1pdm_checks import orbit_check_sweep
from hfbgeo.execution_plane.checks.v1.hfb_checks import QUADRATIC_TOL, VARIATIONAL_SLACK
from hfbgeo.execution_plane.checks.v1.orbit_checks import constants_sweep, geodesic_sweep, section_sweep
from hfbgeo.execution_plane.checks.v1.symplectic_checks import cocycle_sweep, polarization_sweep, radical_sweep
from hfbgeo.execution_plane.common import console
from hfbgeo.execution_plane.common.connectors.csv_sink import CsvSink
from hfbgeo.execution_plane.common.connectors.evidence_store import EvidenceStore
from hfbgeo.execution_plane.common.connectors.seed_counter import trial_seeds

logger = logging.getLogger("hfbgeo")

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_BAD_INPUT = 2

SWEEPS: dict[str, Callable[[ExperimentConfig], Sweep]] = {
    "orbit-check": orbit_check_sweep,
    "section-test": section_sweep,
    "constants": constants_sweep,
    "geodesic": geodesic_sweep,
    "cocycle-test": cocycle_sweep,
    "radical-test": radical_sweep,
    "polarization-test": polarization_sweep,
    "fock-verify": fock_sweep,
}


# =========================================================================
# ARGUMENTS
# =========================================================================

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="YAML or JSON experiment config")
    p.add_argument("--n", type=int, help="mode count n")
    p.add_argument("--spec", dest="spectrum", help="distinct eigenvalues, e.g. 0.4,0")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--section-tol", dest="section_tol", type=float)
    p.add_argument("--scale", type=float, help="scale of random generators")
    p.add_argument("--epsilon", type=float, help="size of near-identity samples (constants)")
    p.add_argument("--t-values", dest="t_values", help="geodesic times, e.g. 0.5,1,4")
    p.add_argument("--out", dest="out_path")
    p.add_argument("--in", dest="in_path")
    p.add_argument("--record-dir", dest="record_dir", help="run record directory (or $HFBGEO_RECORD_DIR)")
    p.add_argument("--threads", type=int)
    p.add_argument("--fock-cap", dest="fock_cap", type=int)
    p.add_argument("--suite", dest="suite_path", help="suite manifest (suite command)")
    p.add_argument("-v", "--verbose", action="count", default=0)
    p.add_argument("-q", "--quiet", action="store_true", help="no progress lines on stderr")


def _add_hubbard(p: argparse.ArgumentParser) -> None:
    p.add_argument("--L", dest="sites", type=int, help="lattice sites")
    p.add_argument("--t", dest="hopping", type=float, help="hopping amplitude")
    p.add_argument("--U", dest="u_int", type=float, help="on-site interaction")
    p.add_argument("--mu", type=float, help="chemical potential")
    p.add_argument("--convention", choices=("spinless", "spinful"))
    p.add_argument("--periodic", action="store_true", default=None)
    p.add_argument("--gradient-mode", dest="gradient_mode", choices=("fd", "generator"))
    p.add_argument("--max-iter", dest="max_iter", type=int)
    p.add_argument("--restarts", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hfbgeo",
        description="Orbit geometry of generalized one-particle density matrices",
        allow_abbrev=False,
    )
    parser.add_argument("--version", action="version", version=f"hfbgeo {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        p = sub.add_parser(command, allow_abbrev=False)
        _add_common(p)
        if command == "hfb-minimize":
            _add_hubbard(p)
    return parser


_HUBBARD_FLAGS = ("sites", "hopping", "u_int", "mu", "convention", "periodic")
_HFB_FLAGS = ("gradient_mode", "max_iter", "restarts")
_SKIP = {"command", "config", "verbose", "quiet"}


def flags_from_args(args: argparse.Namespace) -> dict:
    """Namespace -> ExperimentConfig overrides; flags not given stay out.

    On ``suite``, --trials overrides every step's count (suite_trials).
    """
    raw = vars(args)
    flags = {k: v for k, v in raw.items()
             if k not in _SKIP and k not in _HUBBARD_FLAGS and k not in _HFB_FLAGS and v is not None}
    hubbard = {k: raw[k] for k in _HUBBARD_FLAGS if raw.get(k) is not None}
    hfb = {k: raw[k] for k in _HFB_FLAGS if raw.get(k) is not None}
    if raw.get("command") == "suite" and "trials" in flags:
        flags["suite_trials"] = flags.pop("trials")
    if hubbard:
        flags["hubbard"] = hubbard
    if hfb:
        flags["hfb"] = hfb
    return flags


def _configure_logging(verbose: int) -> None:
    level = logging.WARNING if verbose == 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


# =========================================================================
# RECORDS
# =========================================================================

def _start_record(cfg: ExperimentConfig) -> Optional[str]:
    if not cfg.record_dir:
        return None
    return EvidenceStore.start_run(Path(cfg.record_dir), cfg.command, cfg.to_dict())


def _finish_record(cfg: ExperimentConfig, utid: Optional[str], status: str, **extra) -> None:
    if utid:
        EvidenceStore.update_status(Path(cfg.record_dir), utid, status, **extra)


def _write_json(payload: dict, path: Optional[str]) -> None:
    text = json.dumps(payload, indent=2)
    if path is None:
        sys.stdout.write(text + "\n")
        return
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(text + "\n")


def _report(outcomes: Sequence[CheckOutcome]) -> int:
    failed = [o for o in outcomes if not o.passed]
    for o in failed:
        console.fail(o.report())
    if not failed:
        console.ok(f"{len(outcomes)} checks passed")
    return EXIT_CHECK_FAILED if failed else EXIT_OK


# =========================================================================
# COMMANDS
# =========================================================================

def run_sweep(cfg: ExperimentConfig) -> int:
    sweep = SWEEPS[cfg.command](cfg)
    utid = _start_record(cfg)
    console.banner(
        f"HFBGEO {cfg.command.upper()}",
        Context=sweep.context,
        Trials=cfg.trials,
        Seed=cfg.seed,
        Threads=cfg.threads,
        Output=cfg.out_path or "(stdout)",
    )
    with CsvSink(cfg.out_path, cfg.command, cfg.seed, sweep.columns) as sink:
        rows = sweep.run(trial_seeds(cfg.seed, cfg.trials, 0), cfg.threads, sink)
    outcomes = sweep.judge(rows)
    code = _report(outcomes)
    _finish_record(cfg, utid, "SUCCESS" if code == EXIT_OK else "FAILURE",
                   outcomes=[asdict(o) for o in outcomes], rows=len(rows))
    return code


def run_diagonalize(cfg: ExperimentConfig) -> int:
    try:
        raw = json.loads(Path(cfg.in_path).read_text()) if cfg.in_path else json.load(sys.stdin)
    except OSError as e:
        raise ConfigError(f"Cannot read g1-pdm input: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"Malformed JSON input: {e}") from e
    if not isinstance(raw, dict):
        raise ConfigError("g1-pdm input must be a JSON object with 'gamma' and 'alpha'")

    G = g1pdm_from_json(raw)
    W, lam = diagonalize(G, cfg.tol)
    residual = diagonalization_residual(G, W, lam)
    _write_json({
        "W": bog_unitary_to_json(W),
        "lambda": [float(x) for x in np.diag(lam).real],
        "residual": residual,
    }, cfg.out_path)
    if residual > cfg.tol:
        console.fail(f"diagonalize: residual {residual:.3e} exceeds tol {cfg.tol:.1e}")
        return EXIT_CHECK_FAILED
    console.ok(f"diagonalize: n={G.n} residual {residual:.3e}")
    return EXIT_OK


def run_hfb(cfg: ExperimentConfig) -> int:
    s = cfg.hubbard
    H = build_hubbard(s.sites, s.hopping, s.u_int, s.mu, s.convention, s.periodic, cfg.fock_cap)
    quadratic = s.u_int == 0.0
    exact = one_body_ground_energy(H) if quadratic else ground_energy(H)
    utid = _start_record(cfg)
    console.banner(
        "HFBGEO HFB-MINIMIZE",
        Model=f"{s.convention} L={s.sites} t={s.hopping} U={s.u_int} mu={s.mu}",
        Modes=H.n,
        Seed=cfg.seed,
    )

    result = minimize_hfb(H, G1pdm.p_minus(H.n), cfg.hfb.to_params(cfg.seed))
    payload = hfb_result_to_json(result, exact)
    _write_json(payload, cfg.out_path)

    code = EXIT_OK
    if result.energy < exact - VARIATIONAL_SLACK:
        console.fail(f"hfbopt.variational FAILED (seed {cfg.seed}): E_HFB {result.energy:.12f} < E_gs {exact:.12f}")
        code = EXIT_CHECK_FAILED
    elif quadratic and abs(result.energy - exact) > QUADRATIC_TOL:
        console.fail(f"hfbopt.quadratic FAILED (seed {cfg.seed}): |E_HFB - E_gs| = {abs(result.energy - exact):.3e}")
        code = EXIT_CHECK_FAILED
    else:
        console.ok(f"E_HFB {result.energy:.10f}, E_gs {exact:.10f}, gap {result.energy - exact:.3e}")
    _finish_record(cfg, utid, "SUCCESS" if code == EXIT_OK else "FAILURE",
                   energy=result.energy, exact_ground_energy=exact, converged=result.converged)
    return code


def run_suite(cfg: ExperimentConfig) -> int:
    result = interpreter.execute(cfg, cfg.suite_path)
    if not cfg.out_path:
        sys.stdout.write(interpreter.render_summary(result.frame()) + "\n")
    return result.exit_code


def dispatch(cfg: ExperimentConfig) -> int:
    if cfg.command in SWEEPS:
        return run_sweep(cfg)
    if cfg.command == "diagonalize":
        return run_diagonalize(cfg)
    if cfg.command == "hfb-minimize":
        return run_hfb(cfg)
    return run_suite(cfg)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    console.set_quiet(args.quiet)
    try:
        file_data = load_config_file(args.config) if args.config else None
        cfg = build_config(args.command, file_data, flags_from_args(args), os.environ)
        return dispatch(cfg)
    except ConfigError as e:
        print(f"hfbgeo: configuration error: {e}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except DomainError as e:
        print(f"hfbgeo: invalid input: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except NumericalError as e:
        logger.debug("aborted", exc_info=True)
        print(f"hfbgeo: {args.command} failed: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
