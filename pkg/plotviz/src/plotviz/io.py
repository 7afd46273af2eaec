"""Readers for the simulator's on-disk formats.

Both formats are plain text and documented by the simulator package;
they are re-implemented here, not imported, so this package works
from the files alone.

Records CSV: lines starting with # are provenance comments, the first
remaining line is the column header, every later line is one row of
floats.

Snapshot (ssfield v1): one header line

    ssfield v1 m=<int> L=<float> t=<float>

followed by m rows of m whitespace-separated values, all finite.
"""

from __future__ import annotations

import numpy as np

__all__ = ["SnapshotFormatError", "read_records_csv", "read_snapshot"]

_MAGIC = "ssfield"
_VERSION = "v1"


class SnapshotFormatError(ValueError):
    """Snapshot file violates the ssfield v1 format."""


def read_records_csv(path) -> dict[str, np.ndarray]:
    """Read a records CSV as column arrays keyed by header name."""
    with open(path) as fh:
        lines = [ln for ln in fh if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise ValueError(f"no data in {path}")
    header = [c.strip() for c in lines[0].strip().split(",")]
    data = np.array(
        [[float(v) for v in ln.strip().split(",")] for ln in lines[1:]]
    )
    if data.ndim != 2 or data.shape[1] != len(header):
        raise ValueError(f"ragged records CSV {path}")
    return {name: data[:, k] for k, name in enumerate(header)}


def read_snapshot(path) -> tuple[np.ndarray, float, float]:
    """Read an ssfield v1 snapshot as (values, L, t).

    values is the m x m float64 array; the mesh spacing is L / m.
    """
    with open(path) as fh:
        header = fh.readline().rstrip("\n")
        parts = header.split()
        if len(parts) != 5 or parts[0] != _MAGIC or parts[1] != _VERSION:
            raise SnapshotFormatError(f"bad snapshot header: {header!r}")
        kv = {}
        for tok in parts[2:]:
            key, sep, val = tok.partition("=")
            if not sep:
                raise SnapshotFormatError(f"bad header token {tok!r}")
            kv[key] = val
        if set(kv) != {"m", "L", "t"}:
            raise SnapshotFormatError(
                f"header must carry m, L, t; got {sorted(kv)}"
            )
        try:
            m = int(kv["m"])
            L = float(kv["L"])
            t = float(kv["t"])
        except ValueError as exc:
            raise SnapshotFormatError(f"bad header values: {exc}") from exc
        if m < 1 or L <= 0.0:
            raise SnapshotFormatError(f"bad grid in header: m={m} L={L}")

        rows: list[list[float]] = []
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            vals = line.split()
            if len(vals) != m:
                raise SnapshotFormatError(
                    f"line {lineno}: expected {m} values, got {len(vals)}"
                )
            try:
                rows.append([float(v) for v in vals])
            except ValueError as exc:
                raise SnapshotFormatError(
                    f"line {lineno}: unparsable value ({exc})"
                ) from exc
        if len(rows) != m:
            raise SnapshotFormatError(
                f"expected {m} data rows, got {len(rows)}"
            )
    arr = np.array(rows, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise SnapshotFormatError("snapshot contains non-finite values")
    return arr, L, t
