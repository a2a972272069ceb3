"""File formats: feature matrices, boundary/label lists, graph heatmaps.

Binary feature files (``.dgef``) are little-endian::

    b"DGEF"  uint32 version (=1)  uint64 N  uint64 n  float32[N*n] row-major

Boundary files hold one 0-based frame index per line.
"""

from __future__ import annotations

import logging
import struct
from pathlib import Path

import numpy as np

log = logging.getLogger(__name__)

MAGIC = b"DGEF"
VERSION = 1
_HEADER = struct.Struct("<4sIQQ")


class FormatError(ValueError):
    """Malformed input file; the message names the offending row or byte."""


def write_features_binary(X, path) -> None:
    X = np.asarray(X)
    if X.ndim != 2:
        raise ValueError("feature matrix must be 2-D")
    N, n = X.shape
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, N, n))
        fh.write(np.ascontiguousarray(X, dtype="<f4").tobytes())


def read_features_binary(path) -> np.ndarray:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise FormatError(f"{path}: truncated header ({len(raw)} bytes, need {_HEADER.size})")
    magic, version, N, n = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r} at byte 0")
    if version != VERSION:
        raise FormatError(f"{path}: unsupported version {version} at byte 4")
    expected = _HEADER.size + 4 * N * n
    if len(raw) != expected:
        raise FormatError(f"{path}: payload size mismatch at byte {min(len(raw), expected)}: "
                          f"file has {len(raw)} bytes, header implies {expected}")
    return np.frombuffer(raw, dtype="<f4", offset=_HEADER.size).reshape(N, n).copy()


def read_features_csv(path) -> np.ndarray:
    rows = []
    width = None
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                values = [float(v) for v in line.split(",")]
            except ValueError as exc:
                raise FormatError(f"{path}: row {lineno}: {exc}") from None
            if width is None:
                width = len(values)
            elif len(values) != width:
                raise FormatError(f"{path}: row {lineno} has {len(values)} columns, expected {width}")
            rows.append(values)
    if not rows:
        raise FormatError(f"{path}: no data rows")
    return np.array(rows, dtype=np.float64)


def write_features_csv(X, path) -> None:
    np.savetxt(path, np.asarray(X), delimiter=",", fmt="%.17g")


def load_features(path, format: str | None = None) -> np.ndarray:
    """Read a feature matrix; ``format`` is ``"csv"``, ``"binary"`` or auto."""
    if format is None:
        with open(path, "rb") as fh:
            format = "binary" if fh.read(4) == MAGIC else "csv"
    if format == "binary":
        return read_features_binary(path)
    if format == "csv":
        return read_features_csv(path)
    raise ValueError(f"unknown feature format {format!r}")


def load_indices(path, what: str = "boundary") -> np.ndarray:
    values = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                v = int(line)
            except ValueError:
                raise FormatError(f"{path}: line {lineno}: not an integer: {line!r}") from None
            values.append(v)
    return np.array(values, dtype=np.int64)


def load_boundaries(path) -> np.ndarray:
    """Read 0-based boundary indices; the result is sorted and deduplicated."""
    b = load_indices(path)
    if np.any(b < 0):
        raise FormatError(f"{path}: negative boundary index {int(b[b < 0][0])}")
    if np.any(np.diff(b) <= 0):
        log.warning("%s: boundary indices unsorted or duplicated; normalizing", path)
    return np.unique(b)


def save_boundaries(boundaries, path) -> None:
    with open(path, "w") as fh:
        fh.writelines(f"{int(b)}\n" for b in boundaries)


def load_labels(path) -> np.ndarray:
    return load_indices(path, "label")


def save_labels(labels, path) -> None:
    save_boundaries(labels, path)


def heatmap_pixels(G, threshold_fraction: float = 0.7) -> np.ndarray:
    """8-bit rendering of a graph with weak edges removed.

    Entries below ``threshold_fraction`` times the strongest off-diagonal
    edge become 0; the rest are scaled by ``255 / max`` and rounded.
    """
    if not 0.0 <= threshold_fraction <= 1.0:
        raise ValueError("threshold_fraction must lie in [0, 1]")
    G = np.asarray(G, dtype=np.float64)
    off = G[~np.eye(G.shape[0], dtype=bool)]
    strongest = off.max() if off.size else G.max()
    kept = np.where(G >= threshold_fraction * strongest, G, 0.0)
    top = kept.max()
    if top <= 0:
        return np.zeros(G.shape, dtype=np.uint8)
    return np.rint(255.0 * np.clip(kept, 0.0, None) / top).astype(np.uint8)


def dump_graph_heatmap(G, path, threshold_fraction: float = 0.7) -> None:
    """Write the graph as a binary PGM (``P5``) image."""
    pix = heatmap_pixels(G, threshold_fraction)
    h, w = pix.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(pix.tobytes())


def read_pgm(path) -> np.ndarray:
    """Read a PGM written by :func:`dump_graph_heatmap` (no header comments)."""
    raw = Path(path).read_bytes()
    magic, size, maxval, data = raw.split(b"\n", 3)
    if magic != b"P5":
        raise FormatError(f"{path}: not a binary PGM")
    w, h = (int(v) for v in size.split())
    if int(maxval) != 255:
        raise FormatError(f"{path}: unsupported maxval {int(maxval)}")
    return np.frombuffer(data, dtype=np.uint8, count=w * h).reshape(h, w)
