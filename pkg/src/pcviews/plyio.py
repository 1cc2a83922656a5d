"""Minimal PLY reader/writer for colored vertex clouds.

Supports ``format ascii 1.0`` and ``format binary_little_endian 1.0`` with
per-vertex x, y, z (float) and red, green, blue (uint8) properties.  Extra
scalar vertex properties are tolerated and ignored; list properties inside
the vertex element are not.
"""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np

_PLY_TYPES = {
    "char": "i1",
    "int8": "i1",
    "uchar": "u1",
    "uint8": "u1",
    "short": "i2",
    "int16": "i2",
    "ushort": "u2",
    "uint16": "u2",
    "int": "i4",
    "int32": "i4",
    "uint": "u4",
    "uint32": "u4",
    "float": "f4",
    "float32": "f4",
    "double": "f8",
    "float64": "f8",
}

_REQUIRED = ("x", "y", "z", "red", "green", "blue")


class PlyError(ValueError):
    """Raised for malformed or unsupported PLY files."""


def _parse_header(stream: io.BufferedReader):
    magic = stream.readline().strip()
    if magic != b"ply":
        raise PlyError("not a PLY file (missing 'ply' magic)")
    fmt = None
    elements = []  # list of (name, count, [(prop_name, type_str)])
    while True:
        raw = stream.readline()
        if not raw:
            raise PlyError("unexpected EOF in header")
        line = raw.decode("ascii", errors="replace").strip()
        if not line or line.startswith("comment") or line.startswith("obj_info"):
            continue
        if line == "end_header":
            break
        parts = line.split()
        if parts[0] == "format":
            if parts[1] not in ("ascii", "binary_little_endian"):
                raise PlyError(f"unsupported PLY format {parts[1]!r}")
            fmt = parts[1]
        elif parts[0] == "element":
            elements.append((parts[1], int(parts[2]), []))
        elif parts[0] == "property":
            if not elements:
                raise PlyError("property before any element")
            if parts[1] == "list":
                elements[-1][2].append((parts[-1], "list"))
            else:
                elements[-1][2].append((parts[-1], parts[1]))
    if fmt is None:
        raise PlyError("header missing 'format' line")
    return fmt, elements


def _vertex_dtype(props):
    fields = []
    for name, tname in props:
        if tname == "list":
            raise PlyError("list property inside vertex element is unsupported")
        if tname not in _PLY_TYPES:
            raise PlyError(f"unknown property type {tname!r}")
        fields.append((name, "<" + _PLY_TYPES[tname]))
    return np.dtype(fields)


def load_ply(path) -> tuple[np.ndarray, np.ndarray]:
    """Read a colored point cloud.

    Returns (positions, colors): float64 arrays of shape (N, 3), colors
    rescaled from 8-bit to [0, 1].
    """
    path = Path(path)
    with open(path, "rb") as stream:
        fmt, elements = _parse_header(stream)
        vertex = None
        preceding = []
        for elem in elements:
            if elem[0] == "vertex":
                vertex = elem
                break
            preceding.append(elem)
        if vertex is None:
            raise PlyError("no vertex element in header")
        _, count, props = vertex
        if count == 0:
            raise PlyError("vertex element has zero vertices")
        names = [p[0] for p in props]
        missing = [n for n in _REQUIRED if n not in names]
        if missing:
            raise PlyError(f"vertex element missing properties: {missing}")

        if fmt == "binary_little_endian":
            for _, n, pprops in preceding:
                # skip fixed-size elements that come before vertex
                dt = _vertex_dtype(pprops)
                stream.seek(n * dt.itemsize, io.SEEK_CUR)
            dtype = _vertex_dtype(props)
            data = np.frombuffer(stream.read(count * dtype.itemsize), dtype=dtype)
            if data.shape[0] != count:
                raise PlyError("truncated binary vertex data")
        else:
            for _, n, _pprops in preceding:
                for _ in range(n):
                    stream.readline()
            dtype = _vertex_dtype(props)
            rows = np.loadtxt(stream, dtype=np.float64, max_rows=count, ndmin=2)
            if rows.shape[0] != count or rows.shape[1] < len(names):
                raise PlyError("truncated or ragged ascii vertex data")
            data = np.zeros(count, dtype=dtype)
            for i, name in enumerate(names):
                data[name] = rows[:, i]

    positions = np.column_stack(
        [data["x"], data["y"], data["z"]]
    ).astype(np.float64)
    colors = np.column_stack(
        [data["red"], data["green"], data["blue"]]
    ).astype(np.float64) / 255.0
    if not np.isfinite(positions).all():
        raise PlyError("non-finite vertex position")
    return positions, colors


def save_ply(path, positions: np.ndarray, colors: np.ndarray, binary: bool = True) -> None:
    """Write a colored cloud; positions as float32, colors quantized to uint8."""
    positions = np.asarray(positions, dtype=np.float32)
    colors8 = np.clip(np.round(np.asarray(colors) * 255.0), 0, 255).astype(np.uint8)
    n = positions.shape[0]
    fmt = "binary_little_endian" if binary else "ascii"
    header = (
        "ply\n"
        f"format {fmt} 1.0\n"
        f"element vertex {n}\n"
        "property float x\n"
        "property float y\n"
        "property float z\n"
        "property uchar red\n"
        "property uchar green\n"
        "property uchar blue\n"
        "end_header\n"
    )
    with open(path, "wb") as stream:
        stream.write(header.encode("ascii"))
        if binary:
            rec = np.zeros(
                n,
                dtype=[("x", "<f4"), ("y", "<f4"), ("z", "<f4"),
                       ("red", "u1"), ("green", "u1"), ("blue", "u1")],
            )
            rec["x"], rec["y"], rec["z"] = positions.T
            rec["red"], rec["green"], rec["blue"] = colors8.T
            stream.write(rec.tobytes())
        else:
            lines = []
            for p, c in zip(positions, colors8):
                lines.append(f"{p[0]:.9g} {p[1]:.9g} {p[2]:.9g} {c[0]} {c[1]} {c[2]}\n")
            stream.write("".join(lines).encode("ascii"))
