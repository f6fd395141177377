"""Lie incidence geometries of type X_{n,i} and their opposition relation."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Sequence

from .forms import HYPERBOLIC, perp
from .linalg import Subspace, join, meet, subspaces_within
from .spaces import GeometryError, PolarSpace, ProjectiveSpace, bits, mask_of

PROJECTIVE = "projective_grassmannian"
POLAR = "polar_grassmannian"
DUAL_POLAR = "dual_polar"
HALF_SPIN = "half_spin"


@dataclass
class PointLineGeometry:
    kind: str
    space: PolarSpace | ProjectiveSpace
    type_index: int
    vertices: list[Subspace]
    vertex_masks: list[int]
    lines: list[tuple[int, ...]]
    half_spin_class: int | None = None
    _line_set: set | None = field(default=None, repr=False)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def line_size(self) -> int:
        return len(self.lines[0])

    @property
    def panel_thickness(self) -> int:
        return self.line_size - 1

    def line_set(self) -> set[tuple[int, ...]]:
        if self._line_set is None:
            self._line_set = set(self.lines)
        return self._line_set

    def describe(self) -> str:
        if self.kind == HALF_SPIN:
            return f"{self.space!r} half-spin {'AB'[self.half_spin_class]}"
        return f"{self.space!r} type {self.type_index}"


@dataclass
class OppositionContext:
    """Opposite-type objects and, per vertex, the bitset of objects opposite it."""

    objects: list[Subspace]
    rows: list[int]
    symmetric: bool

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    def columns(self) -> list[int]:
        """Per object, the bitset of vertices NOT opposite it."""
        cols = [0] * len(self.objects)
        full = (1 << len(self.objects)) - 1
        for v, row in enumerate(self.rows):
            for o in bits(full & ~row):
                cols[o] |= 1 << v
        return cols

    def opposite(self, v: int, o: int) -> bool:
        return bool(self.rows[v] >> o & 1)


def _group_lines(tops: Sequence[Subspace], top_ids: Sequence[int], vertex_dim: int,
                 base_dim: int, index: dict) -> list[tuple[int, ...]]:
    """Lines {V : U < V < W} for every flag U < W; U of dim base_dim, V of dim vertex_dim."""
    groups: dict[tuple, list[int]] = defaultdict(list)
    for top, tid in zip(tops, top_ids):
        for v in subspaces_within(top, vertex_dim):
            vi = index[v.basis]
            for u in subspaces_within(v, base_dim):
                groups[(tid, u.basis)].append(vi)
    return sorted({tuple(sorted(g)) for g in groups.values()})


def _pencils(members: Sequence[Subspace], member_ids: Sequence[int],
             base_dim: int) -> list[tuple[int, ...]]:
    """Lines {V : U < V} grouped by every base_dim-subspace U of a member."""
    groups: dict[tuple, list[int]] = defaultdict(list)
    for m, mid in zip(members, member_ids):
        for u in subspaces_within(m, base_dim):
            groups[u.basis].append(mid)
    return sorted(tuple(sorted(g)) for g in groups.values())


def projective_grassmannian(space: ProjectiveSpace, k: int) -> tuple[PointLineGeometry, OppositionContext]:
    """Projective k-spaces of PG(n, q); opposite objects are the (n-k-1)-spaces."""
    n = space.dim
    if not 0 <= k < n:
        raise GeometryError(f"type k={k} out of range for PG({n},q)")
    verts = space.subspaces(k)
    vmasks = space.masks(k)
    index = {v.basis: i for i, v in enumerate(verts)}
    tops = space.subspaces(k + 1)
    lines = _group_lines(tops, range(len(tops)), k + 1, k, index)
    geom = PointLineGeometry(PROJECTIVE, space, k + 1, verts, vmasks, lines)
    objs = space.subspaces(n - k - 1)
    omasks = space.masks(n - k - 1)
    rows = []
    for vm in vmasks:
        r = 0
        for o, om in enumerate(omasks):
            if not vm & om:
                r |= 1 << o
        rows.append(r)
    return geom, OppositionContext(objs, rows, symmetric=(2 * k + 1 == n))


def _polar_rows(space: PolarSpace, verts: Sequence[Subspace], vmasks: Sequence[int],
                objs: Sequence[Subspace], omasks: Sequence[int]) -> list[int]:
    operp = [space.perp_mask(o) for o in objs]
    rows = []
    for vm in vmasks:
        r = 0
        for o, op in enumerate(operp):
            if not vm & op:
                r |= 1 << o
        rows.append(r)
    return rows


def polar_grassmannian(space: PolarSpace, i: int) -> tuple[PointLineGeometry, OppositionContext]:
    """Singular (i-1)-spaces; the dual polar space when i equals the rank."""
    r = space.rank
    if not 1 <= i <= r:
        raise GeometryError(f"type {i} out of range for rank {r}")
    if space.form.subkind == HYPERBOLIC and i >= r - 1:
        raise GeometryError("types r-1 and r of a hyperbolic space belong to the half-spin geometries")
    verts = space.singulars(i - 1)
    vmasks = space.masks(i - 1)
    if i < r:
        index = space.singular_index(i - 1)
        tops = space.singulars(i)
        lines = _group_lines(tops, range(len(tops)), i, i - 1, index)
        kind = POLAR
    else:
        lines = _pencils(verts, range(len(verts)), r - 1)
        kind = DUAL_POLAR
    geom = PointLineGeometry(kind, space, i, verts, vmasks, lines)
    if i == 1:
        full = space.all_points
        rows = [full & ~row for row in space.adjacency]
    else:
        rows = _polar_rows(space, verts, vmasks, verts, vmasks)
    return geom, OppositionContext(verts, rows, symmetric=True)


def half_spin(space: PolarSpace, cls: int) -> tuple[PointLineGeometry, OppositionContext]:
    """One class of generators of a hyperbolic space of rank >= 3."""
    if space.form.subkind != HYPERBOLIC:
        raise GeometryError("half-spin geometries need a hyperbolic polar space")
    r = space.rank
    if r < 3:
        raise GeometryError("half-spin geometries need rank at least 3")
    if cls not in (0, 1):
        raise GeometryError("generator class must be 0 (A) or 1 (B)")
    gens = space.singulars(r - 1)
    gmasks = space.masks(r - 1)
    classes = space.generator_classes()
    ids = [g for g, c in enumerate(classes) if c == cls]
    verts = [gens[g] for g in ids]
    vmasks = [gmasks[g] for g in ids]
    lines = _pencils(verts, range(len(verts)), r - 2)
    geom = PointLineGeometry(HALF_SPIN, space, r if cls == 0 else r - 1, verts, vmasks, lines,
                             half_spin_class=cls)
    ocls = cls if r % 2 == 0 else 1 - cls
    oids = [g for g, c in enumerate(classes) if c == ocls]
    objs = [gens[g] for g in oids]
    omasks = [gmasks[g] for g in oids]
    rows = []
    for vm in vmasks:
        row = 0
        for o, om in enumerate(omasks):
            if not vm & om:
                row |= 1 << o
        rows.append(row)
    return geom, OppositionContext(objs, rows, symmetric=(r % 2 == 0))


def is_opposite_singular(space: PolarSpace, u: Subspace, w: Subspace) -> bool:
    """Equal-dimensional singular subspaces: no point of U is collinear to all of W."""
    if u.dim != w.dim:
        raise ValueError("opposition test needs subspaces of equal dimension")
    return meet(u, perp(space.form, w)).dim == 0


def is_locally_opposite(space: PolarSpace, u: Subspace, w: Subspace) -> bool:
    """Opposite in Res(U meet W): U ∩ W^perp and W ∩ U^perp both equal U ∩ W."""
    a = meet(u, w)
    f = space.form
    return meet(u, perp(f, w)) == a and meet(w, perp(f, u)) == a


def lemma_glue_check(space: PolarSpace, u: Subspace, w: Subspace, a: Subspace) -> bool | None:
    """Local-to-global opposition test through S = <A, A^perp ∩ W>.

    Returns None in the vacuous cases -- S not singular, or A meeting W (then
    A and B overlap and the local conditions no longer see the shared
    points) -- otherwise whether S is locally opposite U at A and W at B.
    """
    from .forms import is_singular
    from .linalg import contains
    if not contains(u, a):
        raise ValueError("A must be a subspace of U")
    if meet(a, w).dim:
        return None
    b = meet(perp(space.form, a), w)
    s = join(a, b)
    if not is_singular(space.form, s):
        return None
    at_a = meet(s, u) == a and is_locally_opposite(space, s, u)
    at_b = meet(s, w) == b and is_locally_opposite(space, s, w)
    return at_a and at_b


def common_subspace(vertices: Sequence[Subspace]) -> Subspace:
    it = iter(vertices)
    acc = next(it)
    for v in it:
        acc = meet(acc, v)
    return acc


def spanned_subspace(vertices: Sequence[Subspace]) -> Subspace:
    it = iter(vertices)
    acc = next(it)
    for v in it:
        acc = join(acc, v)
    return acc


def vertex_set_mask(members: Sequence[int]) -> int:
    return mask_of(members)
