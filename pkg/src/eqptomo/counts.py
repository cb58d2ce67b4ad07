"""Reading and writing coincidence-count files.

CSV layout (UTF-8, LF line endings, decimal point)::

    ,H,V,D,A,R,L
    H,<6 values>
    ...
    L,<6 values>

Rows are Alice's outcome, columns Bob's. JSON layout::

    {"counts": [[...6 values...], ...6 rows...], "label_order": ["H", ...]}

``label_order`` is optional and defaults to H, V, D, A, R, L; it applies to
both rows and columns.
"""

import csv
import io
import json
import math

import numpy as np

from .errors import CountsFormatError
from .pauli import OUTCOMES


def _number(text, where):
    try:
        value = float(text)
    except (TypeError, ValueError):
        raise CountsFormatError(f"{where}: not a number: {text!r}") from None
    if not math.isfinite(value) or value < 0:
        raise CountsFormatError(f"{where}: counts must be finite and nonnegative, got {text!r}")
    return value


def parse_counts_csv(text):
    rows = [r for r in csv.reader(io.StringIO(text)) if any(c.strip() for c in r)]
    if len(rows) != 7:
        raise CountsFormatError(f"expected 7 CSV rows (header + 6), got {len(rows)}")
    header = [c.strip() for c in rows[0]]
    if header != ["", *OUTCOMES]:
        raise CountsFormatError(f"header must be ',H,V,D,A,R,L', got {','.join(header)!r}")
    E = np.empty((6, 6))
    for i, row in enumerate(rows[1:]):
        if len(row) != 7 or row[0].strip() != OUTCOMES[i]:
            raise CountsFormatError(f"row {i + 2} must start with {OUTCOMES[i]} and hold 6 values")
        for j, cell in enumerate(row[1:]):
            E[i, j] = _number(cell.strip(), f"row {OUTCOMES[i]}, column {OUTCOMES[j]}")
    return E


def parse_counts_json(text):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CountsFormatError(f"invalid JSON: {exc}") from None
    if not isinstance(obj, dict) or "counts" not in obj:
        raise CountsFormatError('JSON counts file needs a "counts" member')
    grid = obj["counts"]
    if not isinstance(grid, list) or len(grid) != 6 or any(
        not isinstance(r, list) or len(r) != 6 for r in grid
    ):
        raise CountsFormatError('"counts" must be a 6x6 array')
    E = np.array([[_number(v, f"counts[{i}][{j}]") for j, v in enumerate(r)] for i, r in enumerate(grid)])
    order = obj.get("label_order", list(OUTCOMES))
    if not isinstance(order, list) or sorted(map(str, order)) != sorted(OUTCOMES) or len(order) != 6:
        raise CountsFormatError(f"label_order must be a permutation of {OUTCOMES}, got {order}")
    perm = [order.index(s) for s in OUTCOMES]
    return E[np.ix_(perm, perm)]


def read_counts(path):
    """Load a 6x6 coincidence matrix from a .csv or .json file."""
    path = str(path)
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except UnicodeDecodeError as exc:
        raise CountsFormatError(f"{path}: not UTF-8 text") from exc
    if path.lower().endswith(".json") or text.lstrip().startswith("{"):
        return parse_counts_json(text)
    return parse_counts_csv(text)


def _fmt(v):
    v = float(v)
    return str(int(v)) if v.is_integer() else repr(v)


def format_counts_csv(E):
    E = np.asarray(E, dtype=float)
    lines = ["," + ",".join(OUTCOMES)]
    for s, row in zip(OUTCOMES, E):
        lines.append(s + "," + ",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def format_counts_json(E):
    E = np.asarray(E, dtype=float)
    grid = [[int(v) if float(v).is_integer() else float(v) for v in row] for row in E]
    return json.dumps({"counts": grid, "label_order": list(OUTCOMES)}, indent=2) + "\n"


def write_counts(path, E):
    path = str(path)
    text = format_counts_json(E) if path.lower().endswith(".json") else format_counts_csv(E)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
