"""Versioned binary container for built oracles.

Layout: magic "CDOK", u16 format version, u8 oracle kind, a JSON parameter
blob, a section table of named little-endian arrays, raw array payloads,
and a trailing CRC-32 of everything before it.  Loading reconstructs the
oracle from the stored arrays; only cheap deterministic structures (NNS
views, the merge tree, the RMQ table) are rebuilt, so a loaded oracle
answers queries bit-identically to the freshly built one.
"""

from __future__ import annotations

import io
import json
import struct
import zlib
from typing import Any

import numpy as np

from .acdo import CdoOracle
from .amcdoch import HierarchyOracle
from .core import ColorHierarchy, ColoredPointSet
from .errors import OracleFormatError
from .estar import EStarMatrix, EStarParams
from .nns import NnsIndex
from .rmq2d import Rmq2dIndex
from .rnns import RnnsIndex
from .snippets import TextIndex

MAGIC = b"CDOK"
VERSION = 1

KIND_POINTS = 1
KIND_HIERARCHY = 2
KIND_TEXT = 3

KIND_NAMES = {KIND_POINTS: "points", KIND_HIERARCHY: "hierarchy", KIND_TEXT: "text"}


def _write_sections(buf: io.BytesIO, params: dict[str, Any],
                    sections: dict[str, np.ndarray]):
    pblob = json.dumps(params, sort_keys=True).encode("utf-8")
    buf.write(struct.pack("<I", len(pblob)))
    buf.write(pblob)
    buf.write(struct.pack("<I", len(sections)))
    for name, arr in sections.items():
        arr = np.ascontiguousarray(arr)
        dt = arr.dtype.newbyteorder("<")
        payload = arr.astype(dt, copy=False).tobytes()
        nb = name.encode("utf-8")
        buf.write(struct.pack("<H", len(nb)))
        buf.write(nb)
        ds = dt.str.encode("ascii")
        buf.write(struct.pack("<H", len(ds)))
        buf.write(ds)
        buf.write(struct.pack("<B", arr.ndim))
        for d in arr.shape:
            buf.write(struct.pack("<Q", d))
        buf.write(struct.pack("<Q", len(payload)))
        buf.write(payload)


def _read_sections(buf: io.BytesIO) -> tuple[dict[str, Any], dict[str, np.ndarray]]:
    (plen,) = struct.unpack("<I", buf.read(4))
    params = json.loads(buf.read(plen).decode("utf-8"))
    (count,) = struct.unpack("<I", buf.read(4))
    sections: dict[str, np.ndarray] = {}
    for _ in range(count):
        (nlen,) = struct.unpack("<H", buf.read(2))
        name = buf.read(nlen).decode("utf-8")
        (dlen,) = struct.unpack("<H", buf.read(2))
        dtype = np.dtype(buf.read(dlen).decode("ascii"))
        (ndim,) = struct.unpack("<B", buf.read(1))
        shape = tuple(struct.unpack("<Q", buf.read(8))[0] for _ in range(ndim))
        (nbytes,) = struct.unpack("<Q", buf.read(8))
        arr = np.frombuffer(buf.read(nbytes), dtype=dtype).reshape(shape)
        sections[name] = arr.astype(dtype.newbyteorder("="))
    return params, sections


def _finish(body: bytes) -> bytes:
    return body + struct.pack("<I", zlib.crc32(body))


def _open(blob: bytes) -> tuple[int, io.BytesIO]:
    if len(blob) < 11 or blob[:4] != MAGIC:
        raise OracleFormatError("not a CDOK oracle file")
    body, (crc,) = blob[:-4], struct.unpack("<I", blob[-4:])
    if zlib.crc32(body) != crc:
        raise OracleFormatError("checksum mismatch: file is corrupt")
    buf = io.BytesIO(body)
    buf.read(4)
    (version,) = struct.unpack("<H", buf.read(2))
    if version != VERSION:
        raise OracleFormatError(f"unsupported format version {version}")
    (kind,) = struct.unpack("<B", buf.read(1))
    return kind, buf


def _cdo_payload(o: CdoOracle) -> tuple[dict[str, Any], dict[str, np.ndarray]]:
    s = o.point_set
    params = {
        "mode": o.mode,
        "epsilon": o.params.epsilon,
        "tau": o.params.tau,
        "w": o.params.w,
        "omega": o.omega,
        "num_colors": s.num_colors,
        "universe": s.universe_size,
    }
    sections = {
        "positions": s.positions,
        "colors": s.colors,
        "original_ids": s.original_ids,
        "heavy_ids": o.heavy_ids,
        "estar_values": o.estar.values,
        "estar_wa": o.estar.wa,
        "estar_wb": o.estar.wb,
    }
    return params, sections


def _cdo_restore(params: dict[str, Any], sec: dict[str, np.ndarray]) -> CdoOracle:
    s = ColoredPointSet(sec["positions"], sec["colors"],
                        int(params["num_colors"]), int(params["universe"]),
                        sec["original_ids"])
    est_params = EStarParams(epsilon=float(params["epsilon"]), tau=int(params["tau"]),
                             w=int(params["w"]), universe=s.universe_size)
    table = EStarMatrix(sec["estar_values"], sec["estar_wa"], sec["estar_wb"],
                        sec["heavy_ids"])
    nns = [NnsIndex.from_sorted(s.points_of(c)) for c in range(1, s.num_colors + 1)]
    return CdoOracle(s, params["mode"], est_params, sec["heavy_ids"], table,
                     nns, float(params["omega"]))


def _hierarchy_payload(o: HierarchyOracle) -> tuple[dict[str, Any], dict[str, np.ndarray]]:
    h = o.hierarchy
    params = {
        "mode": o.mode,
        "epsilon": o.epsilon,
        "tau": o.tau,
        "num_blocks": o.num_blocks,
    }
    sections = {
        "parent": h.parent,
        "leaf_color": h.leaf_color,
        "preorder": h.preorder_positions,
        "interval_lo": h.interval_lo,
        "interval_hi": h.interval_hi,
        "bhat": o.bhat,
        "bhat_wa": o.bhat_wa,
        "bhat_wb": o.bhat_wb,
    }
    return params, sections


def _hierarchy_restore(params: dict[str, Any], sec: dict[str, np.ndarray]) -> HierarchyOracle:
    h = ColorHierarchy(sec["parent"], sec["leaf_color"], sec["preorder"],
                       sec["interval_lo"], sec["interval_hi"])
    bhat = sec["bhat"]
    wa, wb = sec["bhat_wa"], sec["bhat_wb"]
    payload = list(zip(wa.reshape(-1).tolist(), wb.reshape(-1).tolist()))
    rmq = Rmq2dIndex.build(bhat, payload)
    rnns = RnnsIndex.build(h.preorder_positions)
    eps = params["epsilon"]
    return HierarchyOracle(h, rnns, int(params["tau"]), int(params["num_blocks"]),
                           bhat, wa, wb, rmq,
                           float(eps) if eps is not None else None, params["mode"])


def _text_payload(idx: TextIndex) -> tuple[dict[str, Any], dict[str, np.ndarray]]:
    params, sections = _hierarchy_payload(idx.oracle)
    sections = dict(sections)
    sections["text"] = np.frombuffer(idx.text, dtype=np.uint8)
    sections["sa"] = idx.sa
    sections["node_lo"] = idx.node_lo
    sections["node_hi"] = idx.node_hi
    sections["node_depth"] = idx.node_depth
    return params, sections


def _text_restore(params: dict[str, Any], sec: dict[str, np.ndarray]) -> TextIndex:
    oracle = _hierarchy_restore(params, sec)
    node_lo = sec["node_lo"]
    node_hi = sec["node_hi"]
    interval_color = {(int(lo), int(hi)): k + 1
                      for k, (lo, hi) in enumerate(zip(node_lo, node_hi))}
    return TextIndex(sec["text"].tobytes(), sec["sa"], node_lo, node_hi,
                     sec["node_depth"], interval_color, oracle)


def dump(obj: CdoOracle | HierarchyOracle | TextIndex) -> bytes:
    if isinstance(obj, CdoOracle):
        kind, (params, sections) = KIND_POINTS, _cdo_payload(obj)
    elif isinstance(obj, HierarchyOracle):
        kind, (params, sections) = KIND_HIERARCHY, _hierarchy_payload(obj)
    elif isinstance(obj, TextIndex):
        kind, (params, sections) = KIND_TEXT, _text_payload(obj)
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    buf = io.BytesIO()
    buf.write(MAGIC)
    buf.write(struct.pack("<H", VERSION))
    buf.write(struct.pack("<B", kind))
    _write_sections(buf, params, sections)
    return _finish(buf.getvalue())


def load(blob: bytes) -> CdoOracle | HierarchyOracle | TextIndex:
    kind, buf = _open(blob)
    params, sections = _read_sections(buf)
    if kind == KIND_POINTS:
        return _cdo_restore(params, sections)
    if kind == KIND_HIERARCHY:
        return _hierarchy_restore(params, sections)
    if kind == KIND_TEXT:
        return _text_restore(params, sections)
    raise OracleFormatError(f"unknown oracle kind {kind}")


def save_file(path: str, obj) -> None:
    with open(path, "wb") as fh:
        fh.write(dump(obj))


def load_file(path: str):
    with open(path, "rb") as fh:
        return load(fh.read())
