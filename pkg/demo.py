#!/usr/bin/env python3
# demo.py
"""
hfbgeo Demo Runner

Walks through the demonstration scenarios with explanations and pauses.
Each demo exercises one part of the orbit-geometry toolkit.

Usage:
    uv run demo.py                  # Run all demos interactively
    uv run demo.py --demo 1         # Run specific demo
    uv run demo.py --demo 1-3       # Run demo range
    uv run demo.py --auto           # Run all without pauses
    uv run demo.py --list           # List all demos

Demos:
    1. Bogoliubov diagonalization of a paired g1-pdm
    2. Local cross-section near a base point
    3. Closed-range constants and norm bounds
    4. Cocycle identities and the coboundary split
    5. Kaehler polarization with a half-filled block
    6. Fock-space oracle (Wick, implementers, number statistics)
    7. HFB minimization on the Hubbard dimer
    8. Full property suite with run records
    9. Malformed input handling
"""
import argparse
import subprocess
import sys
from pathlib import Path
from typing import List

PROJECT_ROOT = Path(__file__).parent

DEMOS = [
    {
        "num": 1,
        "title": "Bogoliubov Diagonalization",
        "subject": "staging/inputs/g_pair.json",
        "description": """
A g1-pdm with pairing (alpha != 0) is brought to diag(Lambda, 1 - Lambda)
by a Bogoliubov unitary W.

Key Points:
  • Lambda sorted decreasing in [0, 1/2]
  • W returned as u/v blocks with its unitarity residual
  • Diagonalization residual reported against --tol
""",
        "commands": [
            ("Diagonalize", "uv run hfbgeo diagonalize --in staging/inputs/g_pair.json --tol 1e-10"),
        ],
        "observe": [
            "JSON with W, lambda and residual on stdout",
            "✅ diagonalize: n=2 residual ...",
        ],
    },
    {
        "num": 2,
        "title": "Local Cross-Section",
        "subject": "spectrum (0.4, 0), n = 4",
        "description": """
Random orbit points U Gamma U* at distances up to 1.25 times the section
radius. Inside the radius the section s(U) must reproduce the orbit point
and must not depend on the isotropy witness.

Key Points:
  • One CSV row per trial, streamed as computed
  • Section columns are nan outside the radius
  • Norm bounds checked inside c0/3
""",
        "commands": [
            ("Section sweep", "uv run hfbgeo section-test --spec 0.4,0 --n 4 --trials 200 --seed 7 --out runs/section.csv"),
            ("First rows", "head -5 runs/section.csv"),
        ],
        "observe": [
            "# hfbgeo 1.0.0 section-test seed=7 header line",
            "✅ ... checks passed",
        ],
    },
    {
        "num": 3,
        "title": "Closed-Range Constants",
        "subject": "spectrum (0.5, 0.3, 0.1), n = 4",
        "description": """
The block derivation ad(Gamma) has closed range with explicit constants
c~ (restricted norm) and c0 (operator norm); its inverse on the complement
of the extended conditional expectation is checked in both orders.
""",
        "commands": [
            ("Constants sweep", "uv run hfbgeo constants --spec 0.5,0.3,0.1 --n 4 --trials 100 --seed 5 --out runs/constants.csv"),
        ],
        "observe": [
            "closed_range_ratio >= 1 in every row",
            "✅ ... checks passed",
        ],
    },
    {
        "num": 4,
        "title": "Cocycles",
        "subject": "random g1-pdms, n = 4",
        "description": """
The two-cocycle s_Gamma satisfies the cyclic identity, is invariant under
the group action, equals -s+ at P- and splits as -s+ plus a coboundary.
""",
        "commands": [
            ("Cocycle sweep", "uv run hfbgeo cocycle-test --n 4 --trials 1000 --seed 9 --out runs/cocycle.csv"),
        ],
        "observe": [
            "✅ ... checks passed",
        ],
    },
    {
        "num": 5,
        "title": "Kaehler Polarization",
        "subject": "spectrum (0.5, 0.3), n = 5",
        "description": """
With a half-filled block the polarization P still carries a positive
Kaehler form; J squares to -1 on tangents and preserves omega.
""",
        "commands": [
            ("Polarization sweep", "uv run hfbgeo polarization-test --spec 0.5,0.3 --n 5 --trials 100 --out runs/polarization.csv"),
        ],
        "observe": [
            "positivity_value > 0 in every row",
            "✅ ... checks passed",
        ],
    },
    {
        "num": 6,
        "title": "Fock-Space Oracle",
        "subject": "n = 4 modes",
        "description": """
Explicit Fock space: CAR, implementers of Bogoliubov unitaries, quasi-free
states and Wick's theorem. Even monomials factor, odd monomials vanish.
""",
        "commands": [
            ("Fock sweep", "uv run hfbgeo fock-verify --n 4 --seed 3 --trials 200 --out runs/fock.csv"),
        ],
        "observe": [
            "car_residual below 1e-13",
            "✅ ... checks passed",
        ],
    },
    {
        "num": 7,
        "title": "HFB on the Hubbard Dimer",
        "subject": "spinful L = 2, t = 1, U = 4",
        "description": """
HFB minimization over the orbit plus a search over Lambda. The HFB energy
stays above the exact ground energy (-1 for U = 4) and the gap is reported.
""",
        "commands": [
            ("Minimize", "uv run hfbgeo hfb-minimize --L 2 --t 1 --U 4 --mu 0 --seed 1 --out runs/result.json"),
            ("Result", "cat runs/result.json"),
        ],
        "observe": [
            "exact_ground_energy -1.0",
            "gap >= 0",
        ],
    },
    {
        "num": 8,
        "title": "Property Suite",
        "subject": "property_suite v1.0.0",
        "description": """
The versioned suite from staging/suites runs every check component through
the RuntimeResolver and records a BOM with the suite hash.
""",
        "commands": [
            ("Run suite", "uv run run_experiment.py property_suite --seed 0"),
            ("List runs", "uv run run_experiment.py --list"),
        ],
        "observe": [
            "📦 one component per step in the BOM",
            "✅ SUITE SUCCESS",
        ],
    },
    {
        "num": 9,
        "title": "Malformed Input",
        "subject": "staging/inputs/g_malformed.json",
        "description": """
Malformed input never reaches the numerics: the command exits with code 2.
""",
        "commands": [
            ("Diagonalize broken JSON", "uv run hfbgeo diagonalize --in staging/inputs/g_malformed.json; echo exit=$?"),
        ],
        "observe": [
            "hfbgeo: configuration error: Malformed JSON input ...",
            "exit=2",
        ],
    },
]


def print_header(text: str, char: str = "="):
    """Print a header with decorators."""
    width = 70
    print()
    print(char * width)
    print(f"  {text}")
    print(char * width)


def print_demo_intro(demo: dict):
    print_header(f"DEMO #{demo['num']}: {demo['title']}", "═")
    print(f"\n  📋 Subject: {demo['subject']}")
    print(demo['description'])

    print("  What to observe:")
    for item in demo['observe']:
        print(f"    • {item}")
    print()


def run_command(description: str, command: str, auto: bool = False) -> bool:
    """Run a shell command with description."""
    print(f"\n  ▶ {description}")
    print(f"    $ {command}")

    if not auto:
        input("    [Press Enter to execute...]")

    result = subprocess.run(command, shell=True, cwd=PROJECT_ROOT, capture_output=False)
    return result.returncode == 0


def run_demo(demo: dict, auto: bool = False) -> bool:
    print_demo_intro(demo)

    if not auto:
        response = input("  Ready to run this demo? [Y/n/skip] ").strip().lower()
        if response in ("skip", "s"):
            print("  ⏭️  Skipped")
            return True
        if response == "n":
            print("  ❌ Cancelled")
            return False

    (PROJECT_ROOT / "runs").mkdir(exist_ok=True)
    for desc, cmd in demo['commands']:
        if not run_command(desc, cmd, auto):
            print("\n  ⚠️  Command failed, continuing...")

    print_header(f"Demo #{demo['num']} Complete", "─")

    if not auto:
        input("\n  [Press Enter for next demo...]")

    return True


def parse_demo_range(range_str: str) -> List[int]:
    """Parse demo range like '1', '1-3', '1,3,5'."""
    demos = []
    for part in range_str.split(','):
        if '-' in part:
            start, end = part.split('-')
            demos.extend(range(int(start), int(end) + 1))
        else:
            demos.append(int(part))
    return sorted(set(demos))


def list_demos():
    print_header("hfbgeo Demonstration Scenarios")
    print()
    for demo in DEMOS:
        print(f"  Demo #{demo['num']}: {demo['title']}")
        print(f"          {demo['subject']}")
        print()


def main():
    parser = argparse.ArgumentParser(
        description=f"hfbgeo Demo Runner - {len(DEMOS)} Demonstration Scenarios",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
    uv run demo.py                  Run all demos interactively
    uv run demo.py --demo 1         Run only demo #1
    uv run demo.py --demo 2-5       Run demos 2 through 5
    uv run demo.py --auto           Run all without pauses
    uv run demo.py --list           List all demos
        """
    )
    parser.add_argument("--demo", "-d", help="Demo number(s) to run (e.g., 1, 1-3, 1,3,5)")
    parser.add_argument("--auto", "-a", action="store_true", help="Run without pauses")
    parser.add_argument("--list", "-l", action="store_true", help="List all demos")

    args = parser.parse_args()

    if args.list:
        list_demos()
        return

    if args.demo:
        demo_nums = parse_demo_range(args.demo)
        demos_to_run = [d for d in DEMOS if d['num'] in demo_nums]
    else:
        demos_to_run = DEMOS

    print_header("HFBGEO DEMONSTRATION", "█")
    print("""
  Orbit geometry of generalized one-particle density matrices

  This demonstration covers:
    • Bogoliubov diagonalization and orbit classification
    • Local sections, cocycles and Kaehler polarizations
    • A Fock-space oracle and HFB minimization
""")

    if not args.auto:
        response = input("  Start demonstration? [Y/n] ").strip().lower()
        if response == 'n':
            print("  Cancelled.")
            return

    for demo in demos_to_run:
        if not run_demo(demo, args.auto):
            print("\n  Demonstration cancelled.")
            return

    print_header("DEMONSTRATION COMPLETE", "█")


if __name__ == "__main__":
    main()
