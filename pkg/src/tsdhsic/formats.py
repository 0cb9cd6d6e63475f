"""Long-format panel CSV and the versioned JSON result envelope.

Panel files have the header ``variable,realization,time,value`` with one
row per observation; realisation and time indices are 0-based. Values are
written with ``repr`` so they read back bit for bit.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from .errors import ContiguityViolation, NonFiniteValue, ParseError
from .panel import TimeSeriesPanel

HEADER = ["variable", "realization", "time", "value"]
SCHEMA_VERSION = "tsdhsic/1"


def write_panel(panel: TimeSeriesPanel, dest) -> None:
    """Write ``panel`` to a path or text stream."""
    if isinstance(dest, (str, Path)):
        with open(dest, "w", newline="") as fh:
            write_panel(panel, fh)
        return
    writer = csv.writer(dest, lineterminator="\n")
    writer.writerow(HEADER)
    for name, x in zip(panel.names, panel.data):
        for r in range(x.shape[0]):
            for t in range(x.shape[1]):
                writer.writerow([name, r, t, repr(float(x[r, t]))])


def panel_to_csv(panel: TimeSeriesPanel) -> str:
    buf = io.StringIO()
    write_panel(panel, buf)
    return buf.getvalue()


def _parse_index(text: str, what: str, row: int) -> int:
    try:
        value = int(text)
    except ValueError:
        raise ParseError(f"{what} {text!r} is not an integer", row) from None
    if value < 0:
        raise ParseError(f"{what} must be >= 0, got {value}", row)
    return value


def read_panel(source) -> TimeSeriesPanel:
    """Parse and validate a panel CSV from a path or text stream.

    Raises
    ------
    ParseError
        Malformed header or row; the message carries the 1-based line number.
    NonFiniteValue
        NaN or infinite value.
    ContiguityViolation
        Duplicate cells, gaps in the realisation or time indices, ragged
        realisations within a variable, or differing realisation counts.
    """
    if isinstance(source, (str, Path)):
        with open(source, newline="") as fh:
            return read_panel(fh)
    reader = csv.reader(source)
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty file", 1) from None
    if [h.strip() for h in header] != HEADER:
        raise ParseError(f"expected header {','.join(HEADER)}, got {','.join(header)}", 1)

    cells: dict[str, dict[tuple[int, int], float]] = {}
    for line, fields in enumerate(reader, start=2):
        if not fields or (len(fields) == 1 and not fields[0].strip()):
            continue
        if len(fields) != 4:
            raise ParseError(f"expected 4 fields, got {len(fields)}", line)
        name = fields[0].strip()
        if not name:
            raise ParseError("empty variable name", line)
        r = _parse_index(fields[1].strip(), "realization", line)
        t = _parse_index(fields[2].strip(), "time", line)
        try:
            value = float(fields[3])
        except ValueError:
            raise ParseError(f"value {fields[3]!r} is not a number", line) from None
        if not math.isfinite(value):
            raise NonFiniteValue(f"row {line}: non-finite value {fields[3]!r}")
        var = cells.setdefault(name, {})
        if (r, t) in var:
            raise ContiguityViolation(f"row {line}: duplicate cell ({name}, {r}, {t})")
        var[(r, t)] = value
    if not cells:
        raise ParseError("no data rows", 2)

    arrays = []
    counts = {}
    for name, var in cells.items():
        realisations = sorted({r for r, _ in var})
        if realisations != list(range(len(realisations))):
            raise ContiguityViolation(f"variable {name!r}: realisations are not 0..n-1")
        lengths = set()
        for r in realisations:
            times = sorted(t for rr, t in var if rr == r)
            if times != list(range(len(times))):
                raise ContiguityViolation(f"variable {name!r}, realisation {r}: times are not 0..T-1")
            lengths.add(len(times))
        if len(lengths) != 1:
            raise ContiguityViolation(f"variable {name!r}: realisations have different lengths {sorted(lengths)}")
        n, T = len(realisations), lengths.pop()
        x = np.empty((n, T))
        for (r, t), v in var.items():
            x[r, t] = v
        counts[name] = n
        arrays.append(x)
    if len(set(counts.values())) != 1:
        raise ContiguityViolation(f"realisation counts differ across variables: {counts}")
    return TimeSeriesPanel(tuple(cells), tuple(arrays))


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def make_envelope(command: str, config: dict, payload: dict, warnings: list[str] | None = None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": _jsonable(config),
        "payload": _jsonable(payload),
        "warnings": list(warnings or []),
    }


def dumps_envelope(envelope: dict) -> str:
    """Deterministic JSON: insertion key order, shortest round-trip float repr."""
    return json.dumps(envelope, indent=2, allow_nan=False) + "\n"


def loads_envelope(text: str) -> dict:
    data = json.loads(text)
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema {data.get('schema_version')!r}")
    return data
