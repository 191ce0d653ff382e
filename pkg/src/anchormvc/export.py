"""Result files written by the command-line tool.

All writes go to a temporary file in the target directory first and are
moved into place, so a crashed run never leaves a truncated file behind.
"""
import json
import os
import tempfile

from .datasets import read_numeric_csv

HISTORY_COLUMNS = ("iter", "objective", "residual", "zero_eigs", "beta", "mu")
GRAPH_COLUMNS = ("i", "j", "weight")
BENCH_COLUMNS = ("n", "per_iter_seconds", "total_seconds")


def num(x):
    """Shortest round-tripping text for a number."""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    return repr(float(x))


def atomic_write(path, text):
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(rows, header=None):
    lines = [",".join(header)] if header else []
    lines.extend(",".join(num(c) if not isinstance(c, str) else c for c in row)
                 for row in rows)
    return "\n".join(lines) + "\n"


def write_labels(path, labels):
    atomic_write(path, "".join(f"{int(c)}\n" for c in labels))


def read_labels(path):
    return read_numeric_csv(path)[:, 0].astype(int)


def write_history(path, history):
    rows = [(int(h.iteration), h.objective, h.residual, int(h.zero_eigs), h.beta, h.mu)
            for h in history]
    atomic_write(path, csv_text(rows, HISTORY_COLUMNS))


def write_graph(path, zbar, eps=0.0):
    """Sparse ``i,j,weight`` triplets of the entries above ``eps``."""
    rows = []
    for i, row in enumerate(zbar):
        for j in (row > eps).nonzero()[0]:
            rows.append((i, int(j), float(row[j])))
    atomic_write(path, csv_text(rows, GRAPH_COLUMNS))


def write_flat_json(path, mapping):
    """One flat JSON object; nested mappings are flattened with dots."""
    flat = {}

    def visit(prefix, value):
        if isinstance(value, dict):
            for k, v in value.items():
                visit(f"{prefix}.{k}" if prefix else str(k), v)
        else:
            flat[prefix] = value

    visit("", mapping)
    atomic_write(path, json.dumps(flat, indent=1) + "\n")
