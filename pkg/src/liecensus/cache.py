"""Versioned binary cache of a built geometry and its opposition relation.

Layout (little-endian): 8-byte magic, u32 format version, then sections of
``tag[4] | u64 length | u32 crc32 | payload``.  Vectors are stored one byte
per coordinate; bitset rows are fixed-width little-endian integers.
"""

from __future__ import annotations

import hashlib
import json
import os
import struct
import zlib
from pathlib import Path

from . import __version__
from .fields import gf
from .forms import Form
from .geomspec import GeometrySpec
from .grassmann import OppositionContext, PointLineGeometry
from .linalg import Subspace
from .spaces import PolarSpace, ProjectiveSpace

MAGIC = b"LIEGEOM\x00"
FORMAT_VERSION = 1
ENV_VAR = "LIECENSUS_CACHE"


class CacheError(Exception):
    pass


def default_cache_dir() -> Path:
    return Path(os.environ.get(ENV_VAR) or Path.home() / ".cache" / "liecensus")


def cache_key(spec: GeometrySpec) -> str:
    spec = spec.normalized()
    h = hashlib.sha256(f"{spec}|{__version__}|{FORMAT_VERSION}".encode()).hexdigest()[:16]
    safe = str(spec).replace(" ", "_").replace(":", "-").replace("(", "_").replace(")", "").replace(",", "_")
    return f"{safe}.{h}.bin"


def _section(tag: bytes, payload: bytes) -> bytes:
    return tag + struct.pack("<QI", len(payload), zlib.crc32(payload)) + payload


def _rows(rows: list[int], width: int) -> bytes:
    nbytes = (width + 7) // 8
    return b"".join(r.to_bytes(nbytes, "little") for r in rows)


def _unrows(data: bytes, width: int) -> list[int]:
    nbytes = (width + 7) // 8
    if nbytes == 0:
        return []
    return [int.from_bytes(data[k:k + nbytes], "little") for k in range(0, len(data), nbytes)]


def _subspaces(subs: list[Subspace]) -> bytes:
    return b"".join(bytes(x for row in s.basis for x in row) for s in subs)


def _unsubspaces(data: bytes, n: int, k: int, field) -> list[Subspace]:
    out = []
    step = n * k
    for off in range(0, len(data), step):
        basis = tuple(tuple(data[off + j * n: off + (j + 1) * n]) for j in range(k))
        pivots = tuple(next(c for c, x in enumerate(row) if x) for row in basis)
        out.append(Subspace(n, basis, pivots, field))
    return out


def dumps(spec: GeometrySpec, geom: PointLineGeometry, opp: OppositionContext) -> bytes:
    sp = geom.space
    polar = isinstance(sp, PolarSpace)
    meta = {
        "spec": str(spec.normalized()),
        "code_version": __version__,
        "kind": geom.kind,
        "type_index": geom.type_index,
        "half_spin_class": geom.half_spin_class,
        "q": sp.field.q,
        "n": sp.n,
        "n_vertices": geom.n_vertices,
        "vertex_dim": geom.vertices[0].dim,
        "n_objects": opp.n_objects,
        "object_dim": opp.objects[0].dim,
        "symmetric": opp.symmetric,
        "line_size": geom.line_size,
        "n_lines": len(geom.lines),
        "n_points": len(sp.points),
    }
    if polar:
        f = sp.form
        meta.update(form_kind=f.kind, subkind=f.subkind, gram=[list(r) for r in f.gram],
                    rank=sp.rank, singular_dims=sorted(sp._singulars))
    else:
        meta["dim"] = sp.dim
    parts = [_section(b"META", json.dumps(meta, sort_keys=True).encode())]
    parts.append(_section(b"PNTS", bytes(x for v in sp.points for x in v)))
    if polar:
        parts.append(_section(b"ADJC", _rows(sp.adjacency, len(sp.points))))
        for d in meta["singular_dims"]:
            parts.append(_section(b"SG%02d" % d, _subspaces(sp._singulars[d])))
    parts.append(_section(b"VERT", _subspaces(geom.vertices)))
    parts.append(_section(b"OBJS", _subspaces(opp.objects)))
    parts.append(_section(b"LINE", b"".join(struct.pack(f"<{len(L)}I", *L) for L in geom.lines)))
    parts.append(_section(b"OPPR", _rows(opp.rows, opp.n_objects)))
    return MAGIC + struct.pack("<I", FORMAT_VERSION) + b"".join(parts)


def _read_sections(data: bytes) -> dict[bytes, bytes]:
    if data[:8] != MAGIC:
        raise CacheError("not a geometry cache file (bad magic)")
    (version,) = struct.unpack_from("<I", data, 8)
    if version != FORMAT_VERSION:
        raise CacheError(f"cache format {version}, expected {FORMAT_VERSION}")
    pos = 12
    out = {}
    while pos < len(data):
        if pos + 16 > len(data):
            raise CacheError("truncated section header")
        tag = data[pos:pos + 4]
        length, crc = struct.unpack_from("<QI", data, pos + 4)
        payload = data[pos + 16:pos + 16 + length]
        if len(payload) != length:
            raise CacheError(f"truncated section {tag!r}")
        if zlib.crc32(payload) != crc:
            raise CacheError(f"checksum mismatch in section {tag.decode(errors='replace')}")
        out[tag] = payload
        pos += 16 + length
    return out


def loads(data: bytes) -> tuple[dict, PointLineGeometry, OppositionContext]:
    sec = _read_sections(data)
    meta = json.loads(sec[b"META"])
    f = gf(meta["q"])
    n = meta["n"]
    raw = sec[b"PNTS"]
    points = [tuple(raw[k:k + n]) for k in range(0, len(raw), n)]
    if "rank" in meta:
        form = Form(meta["form_kind"], n, tuple(tuple(r) for r in meta["gram"]), f, meta["subkind"])
        adjacency = _unrows(sec[b"ADJC"], len(points))
        singulars = {d: _unsubspaces(sec[b"SG%02d" % d], n, d + 1, f) for d in meta["singular_dims"]}
        space = PolarSpace.restore(form, meta["rank"], points, adjacency, singulars)
    else:
        space = ProjectiveSpace(meta["dim"], f)
        if space.points != points:
            raise CacheError("stored point order differs from the canonical one")
    verts = _unsubspaces(sec[b"VERT"], n, meta["vertex_dim"], f)
    objs = _unsubspaces(sec[b"OBJS"], n, meta["object_dim"], f)
    k = meta["line_size"]
    flat = struct.unpack(f"<{len(sec[b'LINE']) // 4}I", sec[b"LINE"])
    lines = [tuple(flat[j:j + k]) for j in range(0, len(flat), k)]
    rows = _unrows(sec[b"OPPR"], meta["n_objects"])
    if len(rows) != len(verts) or len(lines) != meta["n_lines"]:
        raise CacheError("section sizes disagree with the header")
    vmasks = [space.point_mask(v) for v in verts]
    geom = PointLineGeometry(meta["kind"], space, meta["type_index"], verts, vmasks, lines,
                             meta["half_spin_class"])
    return meta, geom, OppositionContext(objs, rows, meta["symmetric"])


def save(path: Path, spec: GeometrySpec, geom: PointLineGeometry, opp: OppositionContext) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_bytes(dumps(spec, geom, opp))
    tmp.replace(path)
    return path


def load(path: Path) -> tuple[dict, PointLineGeometry, OppositionContext]:
    return loads(Path(path).read_bytes())


def load_or_build(spec: GeometrySpec, cache_dir: Path | None) -> tuple[PointLineGeometry, OppositionContext, bool]:
    """(geometry, opposition, hit) -- builds and stores on a miss when a directory is given."""
    if cache_dir is not None:
        path = Path(cache_dir) / cache_key(spec)
        if path.exists():
            _, geom, opp = load(path)
            return geom, opp, True
    geom, opp = spec.build()
    if cache_dir is not None:
        save(Path(cache_dir) / cache_key(spec), spec, geom, opp)
    return geom, opp, False


def list_entries(cache_dir: Path) -> list[tuple[str, dict, int]]:
    out = []
    d = Path(cache_dir)
    if not d.is_dir():
        return out
    for p in sorted(d.glob("*.bin")):
        try:
            meta = json.loads(_read_sections(p.read_bytes())[b"META"])
        except (CacheError, KeyError, ValueError):
            meta = {"spec": "?", "corrupt": True}
        out.append((p.name, meta, p.stat().st_size))
    return out
