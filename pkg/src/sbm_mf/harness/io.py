"""Edge-list and label file formats (0-based indices).

Edge list: a header line ``n k`` followed by one ``i j`` line per edge with
i < j, each edge listed once. Labels: one community index per line.
"""

from pathlib import Path

import numpy as np

from ..exceptions import ParseError
from ..model import AdjacencyMatrix, HardAssignment


def write_edgelist(path, A, k):
    lines = [f"{A.n} {k}"]
    lines.extend(f"{i} {j}" for i, j in A.edges())
    Path(path).write_text("\n".join(lines) + "\n")


def _ints(line, lineno, count):
    parts = line.split()
    if len(parts) != count:
        raise ParseError(f"expected {count} integers, got {line.strip()!r}", lineno)
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise ParseError(f"non-integer field in {line.strip()!r}", lineno) from None


def read_edgelist(path):
    """Return ``(A, k)``."""
    text = Path(path).read_text().splitlines()
    if not text:
        raise ParseError("empty file", 1)
    n, k = _ints(text[0], 1, 2)
    if n < 0 or k < 1:
        raise ParseError(f"invalid header n={n}, k={k}", 1)
    seen = set()
    edges = []
    for lineno, line in enumerate(text[1:], start=2):
        if not line.strip():
            continue
        i, j = _ints(line, lineno, 2)
        if i == j:
            raise ParseError(f"self-loop {i} {j}", lineno)
        if i > j:
            raise ParseError(f"edge {i} {j} is not upper-triangular (need i < j)", lineno)
        if i < 0 or j >= n:
            raise ParseError(f"edge {i} {j} out of range for n={n}", lineno)
        if (i, j) in seen:
            raise ParseError(f"duplicate edge {i} {j}", lineno)
        seen.add((i, j))
        edges.append((i, j))
    return AdjacencyMatrix.from_edges(n, np.array(edges, dtype=np.int64).reshape(-1, 2)), k


def write_labels(path, assignment):
    Path(path).write_text("".join(f"{a}\n" for a in assignment.labels))


def read_labels(path, k=None):
    labels = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        if not line.strip():
            continue
        (label,) = _ints(line, lineno, 1)
        if label < 0 or (k is not None and label >= k):
            raise ParseError(f"label {label} out of range", lineno)
        labels.append(label)
    if k is None:
        k = max(labels) + 1 if labels else 1
    return HardAssignment(labels, k)
