"""Writing delimited and JSON artifacts, and human-readable tables."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence

from .measures import RECORD_FIELDS, BicepPoint

RANKING_FIELDS = ("rank",) + RECORD_FIELDS


def format_value(value) -> str:
    """CSV cell text: empty for ``None``, shortest round-trip repr for floats."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def atomic_write_text(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_bytes(path, data: bytes) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def write_csv(path, header, rows) -> None:
    atomic_write_text(path, csv_text(header, rows))


def json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, allow_nan=False) + "\n"


def write_json(path, obj) -> None:
    atomic_write_text(path, json_text(obj))


def point_rows(points: Iterable[BicepPoint]):
    for pt in points:
        yield [pt.as_record()[f] for f in RECORD_FIELDS]


def ranking_rows(ranked: Sequence[BicepPoint]):
    for rank, row in enumerate(point_rows(ranked), start=1):
        yield [rank] + row


def ranking_table(ranked: Sequence[BicepPoint]) -> str:
    """Fixed-width table with three decimals."""
    width = max([len("symbol")] + [len(p.symbol) for p in ranked])
    lines = [f"{'rank':>4}  {'symbol':<{width}}  {'E':>6}  {'C':>6}  {'I':>6}"]
    for rank, pt in enumerate(ranked, start=1):
        lines.append(f"{rank:>4}  {pt.symbol:<{width}}  {pt.E:6.3f}  {pt.C:6.3f}  {pt.I:6.3f}")
    return "\n".join(lines)


def barcode_text(sequences) -> str:
    """One line per sequence: padded symbol, a space, then the bit string."""
    sequences = list(sequences)
    width = max(len(s.symbol) for s in sequences)
    return "".join(f"{s.symbol:<{width}} {s.to_string()}\n" for s in sequences)
