# hfbgeo/execution_plane/common/connectors/csv_sink.py
"""
Streaming CSV output.

First line ``# hfbgeo <version> <command> seed=<seed>``, then a header row,
then one row per trial, flushed as written. Floats use ``%.17g`` with a '.'
decimal point regardless of locale, so identical runs give identical bytes.
"""
import csv
import math
import sys
from pathlib import Path
from typing import IO, Optional, Sequence

from hfbgeo import __version__


def format_value(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return "%.17g" % value
    if value is None:
        return ""
    return str(value)


class CsvSink:
    """Context manager writing rows to ``path`` (stdout when None)."""

    def __init__(self, path: Optional[str], command: str, seed: int, fields: Sequence[str]):
        self.path = path
        self.command = command
        self.seed = seed
        self.fields = list(fields)
        self._handle: Optional[IO[str]] = None
        self._writer = None
        self.rows_written = 0

    def __enter__(self) -> "CsvSink":
        if self.path is None:
            self._handle = sys.stdout
        else:
            Path(self.path).parent.mkdir(parents=True, exist_ok=True)
            self._handle = open(self.path, "w", newline="")
        self._handle.write(f"# hfbgeo {__version__} {self.command} seed={self.seed}\n")
        self._writer = csv.writer(self._handle, lineterminator="\n")
        self._writer.writerow(self.fields)
        self._handle.flush()
        return self

    def write(self, row: dict) -> None:
        self._writer.writerow([format_value(row.get(name)) for name in self.fields])
        self._handle.flush()
        self.rows_written += 1

    def __exit__(self, exc_type, exc, tb) -> None:
        if self._handle is not None and self._handle is not sys.stdout:
            self._handle.close()
        self._handle = None
