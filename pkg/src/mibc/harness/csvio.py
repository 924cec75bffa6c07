"""CSV output for swept curves.

Columns: ``<variable>, ber|efficiency, ci_halfwidth, trials, seed, status``,
with a leading ``curve`` column in long format.  Floats are written as the
shortest decimal that parses back to the same double.
"""

import csv
from pathlib import Path

import numpy as np


def _fmt(x):
    return repr(float(x))


def _header(curve, long_format):
    cols = [curve.variable, curve.value_name, "ci_halfwidth", "trials", "seed", "status"]
    return (["curve"] + cols) if long_format else cols


def _rows(curve, long_format):
    ci = curve.ci_halfwidth
    for j in range(curve.grid.size):
        row = [_fmt(curve.grid[j]), _fmt(curve.values[j]), _fmt(ci[j]), str(curve.trials),
               str(curve.seed), "skipped" if curve.skipped[j] else "ok"]
        yield ([curve.label] + row) if long_format else row


def _write(path, header, rows):
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc.strerror or exc}") from exc


def split_paths(path, curves):
    """``out.csv`` -> ``out_<label>.csv`` per curve (labels made filename-safe)."""
    path = Path(path)
    out = []
    for i, c in enumerate(curves):
        tag = "".join(ch if ch.isalnum() or ch in "-." else "_" for ch in c.label) or str(i)
        out.append(path.with_name(f"{path.stem}_{tag}{path.suffix or '.csv'}"))
    return out


def emit_csv(curves, path, long_format=True):
    """Write one curve or a list of curves.

    A list is stacked in long format with a ``curve`` column, or written to
    one file per curve when ``long_format`` is false.  Returns the paths.
    """
    single = not isinstance(curves, (list, tuple))
    curves = [curves] if single else list(curves)
    if single:
        _write(path, _header(curves[0], False), _rows(curves[0], False))
        return [Path(path)]
    if not curves:
        _write(path, ["curve", "variable", "value", "ci_halfwidth", "trials", "seed",
                      "status"], [])
        return [Path(path)]
    if long_format:
        names = {(c.variable, c.value_name) for c in curves}
        if len(names) != 1:
            raise ValueError("long format needs curves over the same variable")
        rows = [r for c in curves for r in _rows(c, True)]
        _write(path, _header(curves[0], True), rows)
        return [Path(path)]
    paths = split_paths(path, curves)
    for c, p in zip(curves, paths):
        _write(p, _header(c, False), _rows(c, False))
    return paths


def read_csv(path):
    """Parse a file written by :func:`emit_csv` into a dict of columns."""
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    cols = {h: [r[i] for r in body] for i, h in enumerate(header)}
    out = {}
    for h, v in cols.items():
        if h in ("curve", "status"):
            out[h] = v
        elif h == "trials":
            out[h] = np.array([int(x) for x in v], dtype=np.int64)
        elif h == "seed":
            out[h] = np.array([int(x) for x in v], dtype=np.uint64)
        else:
            out[h] = np.array([float(x) for x in v])
    return header, out
