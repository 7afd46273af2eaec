"""Plain-text field snapshots.

Format, one field per file:

    ssfield v1 m=<int> L=<float> t=<float>
    <m whitespace-separated values>     (row i = x index i)
    ... m lines total ...

Values carry 17 significant digits, so write -> read round trips are
bit-exact for finite float64 data. Readers reject malformed headers,
wrong counts, and non-finite values.
"""

from __future__ import annotations

import numpy as np

from .fields import CellField, GridSpec

__all__ = ["SnapshotFormatError", "write_snapshot", "read_snapshot"]

_MAGIC = "ssfield"
_VERSION = "v1"


class SnapshotFormatError(ValueError):
    """Snapshot file violates the ssfield v1 format."""


def write_snapshot(path, phi: CellField, t: float) -> None:
    """Write one cell field with its time stamp."""
    t = float(t)
    values = phi.values
    if not np.all(np.isfinite(values)):
        raise ValueError("refusing to write non-finite field values")
    with open(path, "w") as fh:
        fh.write(
            f"{_MAGIC} {_VERSION} m={phi.grid.m} L={phi.grid.L!r} t={t!r}\n"
        )
        for row in values:
            fh.write(" ".join(f"{v:.17g}" for v in row))
            fh.write("\n")


def read_snapshot(path) -> tuple[CellField, float]:
    """Read a snapshot back as (field, t)."""
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
            grid = GridSpec(m, L)
        except ValueError as exc:
            raise SnapshotFormatError(f"bad header values: {exc}") from exc

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
    return CellField(grid, arr, copy=False), t
