"""Comma-separated table access for harness output files.

Tables are small (header row plus at most a few thousand data rows), so
everything is parsed eagerly into strings and converted on column access.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class Table:
    path: Path
    header: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]

    def column(self, name: str, convert=float) -> list:
        if name not in self.header:
            raise ValueError(f"{self.path}: missing column {name!r}")
        i = self.header.index(name)
        return [convert(row[i]) for row in self.rows]

    def require(self, *names: str):
        for name in names:
            if name not in self.header:
                raise ValueError(f"{self.path}: missing column {name!r}")


def read_table(path) -> Table:
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        records = [tuple(row) for row in csv.reader(fh) if row]
    if not records:
        raise ValueError(f"{path}: empty table")
    header, rows = records[0], records[1:]
    if not rows:
        raise ValueError(f"{path}: empty table")
    for lineno, row in enumerate(rows, start=2):
        if len(row) != len(header):
            raise ValueError(f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}")
    return Table(path=path, header=header, rows=tuple(rows))
