"""Covariance-matrix files and tabular output.

JSON files look like ``{"modes": N, "ordering": "block" | "interleaved",
"matrix": [4 N^2 reals, row-major]}``. Plain-text files hold a whitespace
separated square matrix in block ordering.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .exceptions import CovarianceFormatError
from .symplectic_core import interleaved_to_block


def parse_covariance(text: str) -> np.ndarray:
    stripped = text.strip()
    if not stripped:
        raise CovarianceFormatError("empty covariance file")
    if stripped.startswith("{"):
        return _parse_json(stripped)
    try:
        rows = [[float(v) for v in line.split()] for line in stripped.splitlines() if line.strip()]
    except ValueError as exc:
        raise CovarianceFormatError(f"non-numeric entry: {exc}") from exc
    size = len(rows)
    if any(len(r) != size for r in rows):
        raise CovarianceFormatError("plain-text matrix is not square")
    if size % 2:
        raise CovarianceFormatError(f"matrix dimension {size} is odd")
    return np.array(rows)


def _parse_json(text: str) -> np.ndarray:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CovarianceFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "matrix" not in doc or "modes" not in doc:
        raise CovarianceFormatError('JSON covariance needs "modes" and "matrix"')
    modes = doc["modes"]
    if not isinstance(modes, int) or isinstance(modes, bool) or modes < 1:
        raise CovarianceFormatError(f'"modes" must be a positive integer, got {modes!r}')
    ordering = doc.get("ordering", "block")
    if ordering not in ("block", "interleaved"):
        raise CovarianceFormatError(f'"ordering" must be "block" or "interleaved", got {ordering!r}')
    try:
        flat = np.asarray(doc["matrix"], dtype=float).ravel()
    except (TypeError, ValueError) as exc:
        raise CovarianceFormatError(f"non-numeric matrix entries: {exc}") from exc
    dim = 2 * modes
    if flat.size != dim * dim:
        raise CovarianceFormatError(f"expected {dim * dim} entries for {modes} modes, got {flat.size}")
    matrix = flat.reshape(dim, dim)
    if ordering == "interleaved":
        matrix = interleaved_to_block(matrix)
    return matrix


def read_covariance(path) -> np.ndarray:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CovarianceFormatError(f"cannot read {path}: {exc}") from exc
    return parse_covariance(text)


def covariance_to_json(matrix, ordering: str = "block") -> str:
    matrix = np.asarray(matrix, dtype=float)
    return json.dumps({"modes": matrix.shape[0] // 2, "ordering": ordering, "matrix": matrix.ravel().tolist()})


def format_number(value, precision: int = 12) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    return format(float(value), f".{precision}g")


def render_table(header, rows, fmt: str = "csv", precision: int = 12) -> str:
    """Render rows as CSV (one header line) or JSON (columns plus rows)."""
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_number(v, precision) for v in row])
        return buf.getvalue()
    if fmt == "json":
        out_rows = [[json.loads(_json_scalar(v, precision)) for v in row] for row in rows]
        return json.dumps({"columns": list(header), "rows": out_rows}) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def _json_scalar(value, precision: int) -> str:
    if isinstance(value, str):
        return json.dumps(value)
    text = format_number(value, precision)
    if text in ("inf", "-inf", "nan"):
        return json.dumps(None)
    return text


def write_atomic(path, text: str) -> None:
    """Write via a temporary file in the target directory and rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
