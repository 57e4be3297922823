"""XYZ and PLY readers/writers.

A point cloud is a float64 array of shape (N, 3) holding x, y, z in meters,
row order preserved exactly. Binary PLY is written with ``double`` properties
so that write -> parse is bit-exact.
"""

from __future__ import annotations

import math

import numpy as np

from dfzcodec.errors import (
    BadMagic,
    EmptyCloud,
    MalformedHeader,
    MalformedLine,
    MissingProperty,
    NonFiniteCoordinate,
    TruncatedBody,
    UnsupportedFormat,
)

PointCloud = np.ndarray

_PLY_TYPES = {
    "char": "i1", "int8": "i1",
    "uchar": "u1", "uint8": "u1",
    "short": "i2", "int16": "i2",
    "ushort": "u2", "uint16": "u2",
    "int": "i4", "int32": "i4",
    "uint": "u4", "uint32": "u4",
    "float": "f4", "float32": "f4",
    "double": "f8", "float64": "f8",
}


def as_cloud(points) -> PointCloud:
    """Coerce to a contiguous (N, 3) float64 array, rejecting non-finite values."""
    arr = np.ascontiguousarray(points, dtype=np.float64)
    if arr.size == 0:
        return arr.reshape(0, 3)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise ValueError(f"expected shape (N, 3), got {arr.shape}")
    if not np.isfinite(arr).all():
        raise NonFiniteCoordinate("point cloud contains NaN or Inf")
    return arr


def parse_xyz(data: bytes) -> PointCloud:
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        # report the line holding the first bad byte
        raise MalformedLine(data[: exc.start].count(b"\n") + 1, "invalid UTF-8") from None

    rows = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = stripped.split()
        if len(fields) < 3:
            raise MalformedLine(line_no, "fewer than 3 fields")
        try:
            xyz = tuple(float(f) for f in fields[:3])
        except ValueError:
            raise MalformedLine(line_no, "unparsable coordinate") from None
        if not all(math.isfinite(c) for c in xyz):
            raise MalformedLine(line_no, "non-finite coordinate")
        rows.append(xyz)

    if not rows:
        raise EmptyCloud("no data lines in XYZ input")
    return np.array(rows, dtype=np.float64)


def write_xyz(cloud: PointCloud) -> bytes:
    cloud = as_cloud(cloud)
    if len(cloud) == 0:
        raise EmptyCloud()
    # repr round-trips float64 exactly
    return "".join(f"{x!r} {y!r} {z!r}\n" for x, y, z in cloud.tolist()).encode()


class _Element:
    def __init__(self, name: str, count: int):
        self.name = name
        self.count = count
        # (name, dtype) for scalars, (name, count_dtype, item_dtype) for lists
        self.props: list[tuple] = []

    @property
    def has_lists(self) -> bool:
        return any(len(p) == 3 for p in self.props)


def _read_header(data: bytes):
    if not (data.startswith(b"ply\n") or data.startswith(b"ply\r\n")):
        raise BadMagic("not a PLY file (missing 'ply' magic)")

    fmt = None
    elements: list[_Element] = []
    pos = data.index(b"\n") + 1
    while True:
        end = data.find(b"\n", pos)
        if end < 0:
            raise MalformedHeader("header not terminated by end_header")
        try:
            line = data[pos:end].decode("ascii").strip()
        except UnicodeDecodeError:
            raise MalformedHeader("non-ASCII byte in header") from None
        pos = end + 1
        words = line.split()
        if not words or words[0] in ("comment", "obj_info"):
            continue
        key = words[0]
        if key == "end_header":
            break
        if key == "format":
            if len(words) != 3 or words[2] != "1.0":
                raise MalformedHeader(f"bad format line: {line!r}")
            if words[1] not in ("ascii", "binary_little_endian"):
                raise UnsupportedFormat(f"unsupported PLY format {words[1]!r}")
            fmt = words[1]
        elif key == "element":
            if len(words) != 3 or not words[2].isdigit():
                raise MalformedHeader(f"bad element line: {line!r}")
            elements.append(_Element(words[1], int(words[2])))
        elif key == "property":
            if not elements:
                raise MalformedHeader("property before any element")
            if len(words) == 3 and words[1] in _PLY_TYPES:
                elements[-1].props.append((words[2], _PLY_TYPES[words[1]]))
            elif (
                len(words) == 5
                and words[1] == "list"
                and words[2] in _PLY_TYPES
                and words[3] in _PLY_TYPES
            ):
                elements[-1].props.append((words[4], _PLY_TYPES[words[2]], _PLY_TYPES[words[3]]))
            else:
                raise MalformedHeader(f"bad property line: {line!r}")
        else:
            raise MalformedHeader(f"unknown header keyword {key!r}")

    if fmt is None:
        raise MalformedHeader("missing format line")
    return fmt, elements, pos


def _vertex_columns(element: _Element) -> list[int]:
    names = [p[0] for p in element.props]
    cols = []
    for axis in ("x", "y", "z"):
        if axis not in names:
            raise MissingProperty(axis)
        idx = names.index(axis)
        if len(element.props[idx]) == 3:
            raise MalformedHeader(f"property {axis!r} is a list")
        cols.append(idx)
    return cols


def _skip_binary_lists(data: bytes, pos: int, element: _Element, keep: list[int] | None):
    """Walk an element with list properties row by row."""
    rows = []
    for _ in range(element.count):
        row = []
        for prop in element.props:
            if len(prop) == 2:
                dt = np.dtype("<" + prop[1])
                if pos + dt.itemsize > len(data):
                    raise TruncatedBody(f"element {element.name!r} ends early")
                row.append(np.frombuffer(data, dt, 1, pos)[0])
                pos += dt.itemsize
            else:
                cdt, idt = np.dtype("<" + prop[1]), np.dtype("<" + prop[2])
                if pos + cdt.itemsize > len(data):
                    raise TruncatedBody(f"element {element.name!r} ends early")
                n = int(np.frombuffer(data, cdt, 1, pos)[0])
                if n < 0:
                    raise MalformedHeader("negative list length")
                pos += cdt.itemsize + n * idt.itemsize
                if pos > len(data):
                    raise TruncatedBody(f"element {element.name!r} ends early")
                row.append(None)
        if keep is not None:
            rows.append([float(row[i]) for i in keep])
    return rows, pos


def _parse_binary(data: bytes, pos: int, elements: list[_Element]) -> PointCloud:
    for element in elements:
        is_vertex = element.name == "vertex"
        cols = _vertex_columns(element) if is_vertex else None
        if element.has_lists:
            rows, pos = _skip_binary_lists(data, pos, element, cols)
            if is_vertex:
                return np.array(rows, dtype=np.float64).reshape(-1, 3)
            continue
        dtype = np.dtype([(f"f{i}", "<" + p[1]) for i, p in enumerate(element.props)])
        nbytes = dtype.itemsize * element.count
        if pos + nbytes > len(data):
            raise TruncatedBody(f"element {element.name!r} needs {nbytes} bytes")
        if is_vertex:
            rec = np.frombuffer(data, dtype, element.count, pos)
            return np.column_stack([rec[f"f{i}"].astype(np.float64) for i in cols]).reshape(-1, 3)
        pos += nbytes
    raise MissingProperty("x")


def _parse_ascii(data: bytes, pos: int, elements: list[_Element]) -> PointCloud:
    try:
        lines = data[pos:].decode("ascii").splitlines()
    except UnicodeDecodeError:
        raise MalformedLine(0, "non-ASCII byte in body") from None
    header_lines = data[:pos].count(b"\n")
    cursor = 0

    def next_tokens():
        nonlocal cursor
        while cursor < len(lines):
            line = lines[cursor]
            cursor += 1
            if line.strip():
                return line.split(), header_lines + cursor
        raise TruncatedBody("ascii body ends early")

    for element in elements:
        is_vertex = element.name == "vertex"
        cols = _vertex_columns(element) if is_vertex else None
        rows = []
        for _ in range(element.count):
            tokens, line_no = next_tokens()
            if not is_vertex:
                continue
            values = []
            k = 0
            try:
                for prop in element.props:
                    if len(prop) == 2:
                        values.append(float(tokens[k]))
                        k += 1
                    else:
                        n = int(tokens[k])
                        values.append(None)
                        k += 1 + n
            except (IndexError, ValueError):
                raise MalformedLine(line_no, "bad vertex row") from None
            rows.append([values[i] for i in cols])
        if is_vertex:
            return np.array(rows, dtype=np.float64).reshape(-1, 3)
    raise MissingProperty("x")


def parse_ply(data: bytes) -> PointCloud:
    fmt, elements, pos = _read_header(data)
    if not any(e.name == "vertex" for e in elements):
        raise MissingProperty("x")
    if fmt == "ascii":
        cloud = _parse_ascii(data, pos, elements)
    else:
        cloud = _parse_binary(data, pos, elements)
    if not np.isfinite(cloud).all():
        raise NonFiniteCoordinate("PLY vertex data contains NaN or Inf")
    return np.ascontiguousarray(cloud)


def write_ply(cloud: PointCloud, binary: bool = True) -> bytes:
    cloud = as_cloud(cloud)
    if len(cloud) == 0:
        raise EmptyCloud()
    fmt = "binary_little_endian" if binary else "ascii"
    header = (
        "ply\n"
        f"format {fmt} 1.0\n"
        f"element vertex {len(cloud)}\n"
        "property double x\n"
        "property double y\n"
        "property double z\n"
        "end_header\n"
    ).encode("ascii")
    if binary:
        return header + cloud.astype("<f8").tobytes()
    return header + write_xyz(cloud)


def read_cloud(path, fmt: str | None = None) -> PointCloud:
    """Load a cloud from disk; format is taken from the extension unless given."""
    from pathlib import Path

    path = Path(path)
    fmt = fmt or path.suffix.lower().lstrip(".")
    data = path.read_bytes()
    if fmt == "xyz":
        return parse_xyz(data)
    if fmt == "ply":
        return parse_ply(data)
    raise UnsupportedFormat(f"cannot infer point-cloud format from {path.name!r}; use --format")
