"""Sweep CSV files: fixed header, one row per grid point, shortest round-trip floats."""

import csv
import os
import tempfile

HEADER = ("n", "j", "gamma", "jz", "b", "t", "pair_a", "pair_b",
          "concurrence", "lambda1", "lambda2", "lambda3", "lambda4", "log_z")
INT_COLUMNS = {"n", "pair_a", "pair_b"}


def format_number(x):
    if isinstance(x, int):
        return str(x)
    return repr(float(x))


def atomic_write(path, write_rows):
    """Run ``write_rows(fileobj)`` on a temp file, then rename it onto ``path``."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".xyzchain-", suffix=".csv.tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            write_rows(fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_rows(path, header, rows):
    def write(fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([format_number(x) for x in row])

    atomic_write(path, write)


def write_sweep_csv(result, path):
    rows = ((int(r[0]), *r[1:6], int(r[6]), int(r[7]), *r[8:]) for r in result.rows())
    write_rows(path, HEADER, rows)


def read_sweep_csv(path):
    """Rows of a sweep CSV as dicts of ints and floats."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != HEADER:
            raise ValueError(f"unexpected CSV header {header}")
        out = []
        for row in reader:
            out.append({k: int(v) if k in INT_COLUMNS else float(v) for k, v in zip(header, row)})
    return out
