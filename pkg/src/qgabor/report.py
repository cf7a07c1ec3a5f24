"""JSON and CSV report writers with stable, byte-reproducible output."""
from __future__ import annotations

import csv
import io
import json
import sys
from pathlib import Path

import numpy as np


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def to_json(result) -> str:
    # json writes floats with repr, which round-trips doubles exactly
    return json.dumps(_plain(result), indent=2, allow_nan=True) + "\n"


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(header)
    for row in rows:
        wr.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def emit_report(result, fmt: str = "json", path=None) -> str:
    """Serialize ``result`` and write it to ``path`` (stdout when None).

    CSV results are dicts with ``header`` and ``rows`` entries.
    """
    if fmt == "json":
        text = to_json(result)
    elif fmt == "csv":
        text = to_csv(result["header"], result["rows"])
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")
    return text
