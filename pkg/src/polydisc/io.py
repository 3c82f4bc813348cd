"""Artifact files: atomic writes, CSV tables with a metadata header, JSON records.

CSV files start with ``# key=value`` comment lines.  The timestamp always
sits on the final comment line so two runs can be compared byte for byte
after dropping that one line.
"""
from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from datetime import datetime, timezone

CENSUS_FIELDS = ["n", "Q", "height", "s", "X", "count"]
VOLUME_FIELDS = ["n", "height", "s", "delta", "mean", "stderr", "samples", "hits", "seed"]


def timestamp():
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def atomic_write(path, text):
    """Write ``text`` to ``path`` through a temp file in the same directory plus rename."""
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=d)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def config_block(config):
    """Deterministic ``key=value`` lines for a resolved configuration."""
    return [f"{k}={_fmt(v)}" for k, v in sorted(config.items())]


def _fmt(v):
    if isinstance(v, (list, tuple)):
        return ",".join(_fmt(x) for x in v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def csv_text(rows, fields, config=None, stamp=None):
    buf = io.StringIO()
    for line in config_block(config or {}):
        buf.write(f"# {line}\n")
    buf.write(f"# timestamp={stamp or timestamp()}\n")
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: _fmt(r[k]) if isinstance(r[k], float) else r[k] for k in fields})
    return buf.getvalue()


def write_csv(path, rows, fields, config=None):
    atomic_write(path, csv_text(rows, fields, config))


def read_csv_text(text):
    """(metadata dict, list of row dicts) from the text produced by :func:`csv_text`."""
    meta = {}
    body = []
    for line in text.splitlines(keepends=True):
        if line.startswith("# "):
            k, _, v = line[2:].rstrip("\n").partition("=")
            meta[k] = v
        else:
            body.append(line)
    return meta, list(csv.DictReader(body))


def read_csv(path):
    with open(path, newline="") as fh:
        return read_csv_text(fh.read())


def json_text(payload, config=None, stamp=None):
    doc = dict(payload)
    doc["metadata"] = {"config": "\n".join(config_block(config or {})),
                       "timestamp": stamp or timestamp()}
    return json.dumps(doc, indent=2, sort_keys=True, default=_json_default) + "\n"


def _json_default(o):
    import numpy as np

    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"cannot serialise {type(o).__name__}")


def write_json(path, payload, config=None):
    atomic_write(path, json_text(payload, config))


def read_json(path):
    with open(path) as fh:
        return json.load(fh)


def strip_timestamp(text):
    """Text with the timestamp removed, for reproducibility comparisons."""
    out = []
    for line in text.splitlines(keepends=True):
        if line.startswith("# timestamp=") or line.lstrip().startswith('"timestamp":'):
            continue
        out.append(line)
    return "".join(out)


# ---------------------------------------------------------- table codecs

def census_rows(table):
    return list(table.records())


def volume_rows(estimates):
    rows = []
    for e in estimates:
        rows.append({"n": e.n, "height": e.height, "s": "all" if e.s is None else e.s,
                     "delta": float(e.delta), "mean": float(e.mean), "stderr": float(e.stderr),
                     "samples": e.samples, "hits": e.hits, "seed": e.seed})
    return rows


def parse_census_rows(rows):
    """{(n, Q, height, s, X): count} with exact integers."""
    return {(int(r["n"]), int(r["Q"]), r["height"], int(r["s"]), int(r["X"])): int(r["count"])
            for r in rows}
