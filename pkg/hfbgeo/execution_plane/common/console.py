# hfbgeo/execution_plane/common/console.py
"""Human-facing progress lines. Always stderr, so stdout stays machine-readable."""
import sys

_quiet = False


def set_quiet(flag: bool) -> None:
    global _quiet
    _quiet = flag


def say(line: str = "") -> None:
    if not _quiet:
        print(line, file=sys.stderr)


def banner(title: str, **fields) -> None:
    say(f"\n{'=' * 60}")
    say(title)
    say("=" * 60)
    for key, value in fields.items():
        say(f"  {key}: {value}")
    if fields:
        say("=" * 60)


def ok(message: str) -> None:
    say(f"   ✅ {message}")


def fail(message: str) -> None:
    say(f"   ❌ {message}")
