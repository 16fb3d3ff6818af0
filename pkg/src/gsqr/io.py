"""Matrix file I/O: Matrix Market array format and headerless CSV.

Values are written with ``repr``, the shortest representation that parses
back to the identical float64, so files round-trip bit for bit.  The Matrix
Market body is column-major (all of column 1, then column 2, ...), one entry
per line; CSV is one matrix row per line.
"""

from pathlib import Path

import numpy as np

from .exceptions import ParseError
from .validation import check_matrix

__all__ = [
    "MATRIXMARKET",
    "CSV",
    "detect_format",
    "read_matrix",
    "write_matrix",
    "format_float",
]

MATRIXMARKET = "matrixmarket"
CSV = "csv"

_MM_HEADER = "%%MatrixMarket matrix array real general"


def format_float(x):
    """Shortest decimal string that round-trips to the same float64."""
    return repr(float(x))


def detect_format(path):
    """Infer the file format from the extension; CSV is the fallback."""
    suffix = Path(path).suffix.lower()
    if suffix in (".mtx", ".mm"):
        return MATRIXMARKET
    return CSV


def _parse_float(token, path, where):
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"{path}: invalid number {token!r} {where}") from None
    if not np.isfinite(value):
        raise ParseError(f"{path}: non-finite value {token!r} {where}")
    return value


def _read_matrixmarket(text, path):
    lines = text.splitlines()
    if not lines:
        raise ParseError(f"{path}: empty file")
    header = lines[0].split()
    expected = _MM_HEADER.split()
    if len(header) != len(expected) or [t.lower() for t in header] != [
        t.lower() for t in expected
    ]:
        raise ParseError(
            f"{path}: unsupported header {lines[0]!r} "
            f"(need {_MM_HEADER!r})"
        )
    body = [ln for ln in lines[1:] if ln.strip() and not ln.lstrip().startswith("%")]
    if not body:
        raise ParseError(f"{path}: missing size line")
    size = body[0].split()
    if len(size) != 2:
        raise ParseError(f"{path}: size line must be 'rows cols', got {body[0]!r}")
    try:
        m, n = int(size[0]), int(size[1])
    except ValueError:
        raise ParseError(f"{path}: non-integer size line {body[0]!r}") from None
    if m < 1 or n < 1:
        raise ParseError(f"{path}: invalid dimensions {m}x{n}")
    tokens = []
    for ln in body[1:]:
        tokens.extend(ln.split())
    if len(tokens) != m * n:
        raise ParseError(
            f"{path}: expected {m * n} entries for a {m}x{n} array, got {len(tokens)}"
        )
    values = [_parse_float(t, path, f"(entry {i + 1})") for i, t in enumerate(tokens)]
    return np.array(values).reshape((m, n), order="F")


def _read_csv(text, path):
    rows = []
    width = None
    for lineno, ln in enumerate(text.splitlines(), start=1):
        if not ln.strip():
            continue
        tokens = [t.strip() for t in ln.split(",")]
        if width is None:
            width = len(tokens)
        elif len(tokens) != width:
            raise ParseError(
                f"{path}: line {lineno} has {len(tokens)} fields, expected {width}"
            )
        rows.append(
            [_parse_float(t, path, f"(line {lineno})") for t in tokens]
        )
    if not rows:
        raise ParseError(f"{path}: empty file")
    return np.array(rows)


def read_matrix(path, fmt=None):
    """Read a dense real matrix from ``path``.

    Raises:
        ParseError: malformed content (wrong header, ragged rows, bad or
            non-finite numbers, entry-count mismatch).
        OSError: the file cannot be read.
    """
    fmt = fmt or detect_format(path)
    text = Path(path).read_text()
    if fmt == MATRIXMARKET:
        return _read_matrixmarket(text, path)
    if fmt == CSV:
        return _read_csv(text, path)
    raise ValueError(f"unknown matrix format {fmt!r}")


def write_matrix(path, a, fmt=None):
    """Write a dense real matrix to ``path`` in the chosen format."""
    a = check_matrix(a)
    fmt = fmt or detect_format(path)
    m, n = a.shape
    if fmt == MATRIXMARKET:
        lines = [_MM_HEADER, f"{m} {n}"]
        for j in range(n):
            for i in range(m):
                lines.append(format_float(a[i, j]))
    elif fmt == CSV:
        lines = [",".join(format_float(v) for v in row) for row in a]
    else:
        raise ValueError(f"unknown matrix format {fmt!r}")
    Path(path).write_text("\n".join(lines) + "\n")
