"""File formats: review-score ingestion and deterministic experiment outputs.

Input formats
  wide: one line per candidate, comma-separated raw scores, no header; rows
        may have different lengths.
  long: header line then one review per line as candidate_id,reviewer_id,score;
        candidates keep first-appearance order, reviews keep file order.

All outputs are UTF-8, comma-separated with a header row, line-feed
terminated, and written atomically (write to a temp file, then rename).
Numbers are printed with 12 significant digits so repeated runs are
byte-identical.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np

from .core import ReviewMatrix, normalize_reviews


def fmt(x) -> str:
    """12-significant-digit decimal form; plain '0' for either signed zero."""
    v = float(x)
    if v == 0:
        return "0"
    return f"{v:.12g}"


def atomic_write_text(path, text: str):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8", newline="\n")
    os.replace(tmp, path)


def write_csv(path, header: list[str], rows: list[list]):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(cell if isinstance(cell, str) else fmt(cell) for cell in row))
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_json(path, obj):
    atomic_write_text(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _parse_score(raw: str, where: str, s_min: float, s_max: float) -> float:
    try:
        v = float(raw)
    except ValueError:
        raise ValueError(f"{where}: score {raw!r} is not a number") from None
    if not s_min <= v <= s_max:
        raise ValueError(f"{where}: score {fmt(v)} outside scale [{fmt(s_min)}, {fmt(s_max)}]")
    return v


def load_reviews(
    path,
    format: str = "wide",
    s_min: float = 0.0,
    s_max: float = 1.0,
    step: float = 1.0,
) -> ReviewMatrix:
    """Parse and normalize a review-score file; errors carry path and line number."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if format == "wide":
        raw_rows = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line:
                continue
            raw_rows.append(
                [
                    _parse_score(cell.strip(), f"{path}:{lineno}", s_min, s_max)
                    for cell in line.split(",")
                ]
            )
    elif format == "long":
        by_candidate: dict[str, list[float]] = {}
        lines = text.splitlines()
        for lineno, line in enumerate(lines, start=1):
            line = line.strip()
            if not line:
                continue
            cells = [c.strip() for c in line.split(",")]
            if len(cells) != 3:
                raise ValueError(f"{path}:{lineno}: expected 3 fields, got {len(cells)}")
            cand, _reviewer, raw = cells
            if lineno == 1:
                try:
                    float(raw)
                except ValueError:
                    continue  # header line
            score = _parse_score(raw, f"{path}:{lineno}", s_min, s_max)
            by_candidate.setdefault(cand, []).append(score)
        raw_rows = list(by_candidate.values())
    else:
        raise ValueError(f"unknown review file format {format!r}")
    if not raw_rows:
        raise ValueError(f"{path}: no review rows")
    return normalize_reviews(raw_rows, s_min, s_max, step)


def write_marginals_csv(path, u: np.ndarray, p: np.ndarray):
    rows = [[str(i), fmt(ui), fmt(pi)] for i, (ui, pi) in enumerate(zip(u, p))]
    write_csv(path, ["index", "utility", "probability"], rows)


def read_marginals_csv(path) -> tuple[np.ndarray, np.ndarray]:
    """(utilities, probabilities) back from a marginals file."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    u, p = [], []
    for line in lines[1:]:
        if not line:
            continue
        _, ui, pi = line.split(",")
        u.append(float(ui))
        p.append(float(pi))
    return np.asarray(u), np.asarray(p)


def write_sweep_csv(path, rows):
    write_csv(
        path,
        ["L", "mechanism", "regret", "regret_per_k", "stderr"],
        [[row.smoothness, row.mechanism, row.regret, row.regret_per_k, row.stderr] for row in rows],
    )


def write_tightness_csv(path, rows: list[dict]):
    write_csv(
        path,
        ["L", "mechanism", "ratio", "stderr", "boundary", "step", "direction"],
        [
            [
                r["L"],
                r["mechanism"],
                r["ratio"],
                r["stderr"],
                r["boundary"],
                r["step"],
                str(r["direction"]),
            ]
            for r in rows
        ],
    )


def write_bounds_csv(path, items: list[tuple[str, float]]):
    write_csv(path, ["bound", "value"], [[name, value] for name, value in items])


def write_samples_csv(path, sets: np.ndarray):
    rows = [[str(d), " ".join(str(int(i)) for i in row)] for d, row in enumerate(sets)]
    write_csv(path, ["draw", "selected"], rows)


def write_tradeoff_csv(path, rows: list[dict]):
    write_csv(
        path,
        ["mechanism", "ratio", "regret", "regret_per_k"],
        [[r["mechanism"], r["ratio"], r["regret"], r["regret_per_k"]] for r in rows],
    )
