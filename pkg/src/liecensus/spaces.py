"""Projective and polar spaces as concrete point-line geometries.

Point sets are Python ints used as bitsets over point indices.  The
collinearity relation of a polar space is stored as one bitset row per point,
with every point collinear to itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .fields import FieldSpec
from .forms import (ALTERNATING, ELLIPTIC, HERMITIAN, HYPERBOLIC, PARABOLIC, QUADRATIC,
                    Form, is_isotropic, is_singular, perp, restrict, standard_form, witt_index)
from .linalg import (Subspace, Vector, combine, coordinates, encode, enumerate_subspaces,
                     join, meet, projective_points, rref, subspaces_within, zero_space)


class GeometryError(ValueError):
    pass


def bits(mask: int) -> list[int]:
    """Indices of the set bits, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


class _PointIndex:
    """Shared plumbing: a list of normalized point vectors and a code index."""

    field: FieldSpec
    n: int
    points: list[Vector]
    index: dict[int, int]

    def point_index(self, vec: Sequence[int]) -> int:
        return self.index[encode(vec)]

    def point_mask(self, s: Subspace) -> int:
        idx = self.index
        m = 0
        for v in s.points():
            m |= 1 << idx[encode(v)]
        return m

    def point_subspace(self, i: int) -> Subspace:
        return rref([self.points[i]], self.field, self.n)


class ProjectiveSpace(_PointIndex):
    """PG(dim, q) with lazily enumerated subspace inventories."""

    def __init__(self, dim: int, field: FieldSpec):
        if dim < 1:
            raise GeometryError("projective dimension must be at least 1")
        self.dim = dim
        self.field = field
        self.n = dim + 1
        self.points = projective_points(self.n, field)
        self.index = {encode(v): i for i, v in enumerate(self.points)}
        self._subspaces: dict[int, list[Subspace]] = {}
        self._masks: dict[int, list[int]] = {}

    def __repr__(self) -> str:
        return f"PG({self.dim},{self.field.q})"

    @property
    def order(self) -> int:
        return self.field.q

    def subspaces(self, d: int) -> list[Subspace]:
        """Subspaces of projective dimension d, canonical order."""
        if d not in self._subspaces:
            self._subspaces[d] = enumerate_subspaces(self.n, d + 1, self.field)
        return self._subspaces[d]

    def masks(self, d: int) -> list[int]:
        if d not in self._masks:
            self._masks[d] = [self.point_mask(s) for s in self.subspaces(d)]
        return self._masks[d]


def build_projective(dim: int, field: FieldSpec) -> ProjectiveSpace:
    return ProjectiveSpace(dim, field)


class PolarSpace(_PointIndex):
    """The polar space of a nondegenerate form of Witt index >= 2."""

    def __init__(self, form: Form):
        self.form = form
        self.field = form.field
        self.n = form.n
        self.rank = witt_index(form)
        if self.rank < 2:
            raise GeometryError(f"Witt index {self.rank} < 2: the form defines no lines")
        self.points = [v for v in projective_points(self.n, self.field) if is_isotropic(form, v)]
        self.index = {encode(v): i for i, v in enumerate(self.points)}
        self.adjacency = self._collinearity()
        self.all_points = (1 << len(self.points)) - 1
        self._singulars: dict[int, list[Subspace]] = {
            0: [self.point_subspace(i) for i in range(len(self.points))]}
        self._masks: dict[int, list[int]] = {0: [1 << i for i in range(len(self.points))]}
        self._sindex: dict[int, dict[tuple, int]] = {}
        self._order: tuple[int, int] | None = None

    @classmethod
    def restore(cls, form: Form, rank: int, points: list, adjacency: list[int],
                singulars: dict[int, list[Subspace]]) -> "PolarSpace":
        """Rebuild from stored inventories without recomputing anything."""
        self = cls.__new__(cls)
        self.form = form
        self.field = form.field
        self.n = form.n
        self.rank = rank
        self.points = list(points)
        self.index = {encode(v): i for i, v in enumerate(self.points)}
        self.adjacency = list(adjacency)
        self.all_points = (1 << len(self.points)) - 1
        self._singulars = dict(singulars)
        self._singulars.setdefault(0, [self.point_subspace(i) for i in range(len(self.points))])
        self._masks = {d: [self.point_mask(s) for s in ss] for d, ss in self._singulars.items()}
        self._sindex = {}
        self._order = None
        return self

    def __repr__(self) -> str:
        return f"{self.family}({self.n - 1},{self.field.q})"

    @property
    def family(self) -> str:
        return self.form.family

    @property
    def kind(self) -> str:
        return self.form.kind

    @property
    def n_points(self) -> int:
        return len(self.points)

    def _collinearity(self) -> list[int]:
        f = self.field
        add, mul = f.add_table, f.mul_table
        pts = self.points
        funcs = [self.form.functional(v) for v in pts]
        rows = [1 << i for i in range(len(pts))]
        for i, c in enumerate(funcs):
            nz = [(j, cj) for j, cj in enumerate(c) if cj]
            row = rows[i]
            for k in range(i + 1, len(pts)):
                v = pts[k]
                acc = 0
                for j, cj in nz:
                    x = v[j]
                    if x:
                        acc = add[acc][mul[cj][x]]
                if not acc:
                    row |= 1 << k
                    rows[k] |= 1 << i
            rows[i] = row
        return rows

    def collinear(self, i: int, j: int) -> bool:
        return bool(self.adjacency[i] >> j & 1)

    def perp_mask(self, s: Subspace) -> int:
        """Polar points collinear to every point of the singular subspace s."""
        m = self.all_points
        for b in s.basis:
            m &= self.adjacency[self.point_index(b)]
        return m

    def singulars(self, d: int) -> list[Subspace]:
        """Singular subspaces of projective dimension d (0 <= d < rank)."""
        if not 0 <= d < self.rank:
            raise GeometryError(f"no singular subspaces of dimension {d} in rank {self.rank}")
        if d not in self._singulars:
            self._extend(d)
        return self._singulars[d]

    def masks(self, d: int) -> list[int]:
        self.singulars(d)
        return self._masks[d]

    def _extend(self, d: int) -> None:
        lower = self.singulars(d - 1)
        lower_masks = self._masks[d - 1]
        found: dict[tuple, tuple[Subspace, int]] = {}
        for s, smask in zip(lower, lower_masks):
            cand = self.perp_mask(s) & ~smask
            while cand:
                low = cand & -cand
                x = self.points[low.bit_length() - 1]
                e = rref(s.basis + (x,), self.field, self.n)
                emask = self.point_mask(e)
                cand &= ~emask
                if e.basis not in found:
                    found[e.basis] = (e, emask)
        items = sorted(found.values(), key=lambda t: t[0].flat())
        self._singulars[d] = [e for e, _ in items]
        self._masks[d] = [m for _, m in items]

    def singular_index(self, d: int) -> dict[tuple, int]:
        if d not in self._sindex:
            self._sindex[d] = {s.basis: i for i, s in enumerate(self.singulars(d))}
        return self._sindex[d]

    @property
    def lines(self) -> list[int]:
        return self.masks(1)

    @property
    def order(self) -> tuple[int, int]:
        """(s, t): s+1 points per line, t+1 generators per submaximal."""
        if self._order is None:
            s = bin(self.lines[0]).count("1") - 1
            r = self.rank
            gen = self.masks(r - 1)
            sub = self.masks(r - 2)
            first = sub[0]
            t = sum(1 for g in gen if first & ~g == 0) - 1
            self._order = (s, t)
        return self._order

    def generator_classes(self) -> list[int]:
        """0/1 class of each generator of a hyperbolic space (first one is class 0)."""
        if self.form.subkind != HYPERBOLIC:
            raise GeometryError("generator classes are only defined for hyperbolic spaces")
        gens = self.singulars(self.rank - 1)
        ref = gens[0]
        return [(self.rank - meet(ref, g).dim) % 2 for g in gens]


def build_polar(form: Form) -> PolarSpace:
    return PolarSpace(form)


def polar_space(family: str, proj_dim: int, field: FieldSpec) -> PolarSpace:
    return PolarSpace(standard_form(family, proj_dim, field))


def audit_axioms(space: PolarSpace) -> list[str]:
    """Exhaustively check the polar-space axioms; returns a list of failures."""
    problems = []
    lines = space.lines
    if not lines:
        problems.append("no lines")
    for li, line in enumerate(lines):
        if bin(line).count("1") < 3:
            problems.append(f"line {li} has fewer than 3 points")
    for p, row in enumerate(space.adjacency):
        for li, line in enumerate(lines):
            k = bin(row & line).count("1")
            if k != 1 and row & line != line:
                problems.append(f"point {p} sees {k} points of line {li}")
        if row == space.all_points:
            problems.append(f"point {p} is collinear to all points")
    return problems


def audit_order(space: PolarSpace) -> list[str]:
    s, t = space.order
    problems = []
    for li, line in enumerate(space.lines):
        if bin(line).count("1") != s + 1:
            problems.append(f"line {li} does not have {s + 1} points")
    r = space.rank
    gens = space.masks(r - 1)
    for ui, u in enumerate(space.masks(r - 2)):
        k = sum(1 for g in gens if u & ~g == 0)
        if k != t + 1:
            problems.append(f"submaximal {ui} lies in {k} generators, expected {t + 1}")
    return problems


def perp_set(space: PolarSpace, pts: Iterable[int]) -> int:
    """Bitset of points collinear to every point in pts."""
    m = space.all_points
    empty = True
    for p in pts:
        m &= space.adjacency[p]
        empty = False
    if empty:
        raise GeometryError("perp of an empty point set")
    return m


def perp_of_mask(space: PolarSpace, mask: int) -> int:
    m = space.all_points
    adj = space.adjacency
    while mask:
        low = mask & -mask
        m &= adj[low.bit_length() - 1]
        mask ^= low
    return m


def hyperbolic_line(space: PolarSpace, x: int, y: int) -> int:
    """{x, y}^perp^perp as a bitset; x and y must be non-collinear."""
    if space.collinear(x, y):
        raise GeometryError("hyperbolic lines need two non-collinear points")
    return perp_of_mask(space, space.adjacency[x] & space.adjacency[y])


def is_large_hyperbolic_line(space: PolarSpace, h: int) -> bool:
    pts = bits(h)
    if len(pts) < 2 or any(space.collinear(a, b) for i, a in enumerate(pts) for b in pts[i + 1:]):
        raise GeometryError("not a hyperbolic line")
    hp = bits(perp_of_mask(space, h))
    adj = space.adjacency
    for i, u in enumerate(hp):
        for v in hp[i + 1:]:
            if adj[u] & adj[v] != h:
                return False
    return True


def project(space: PolarSpace, u: Subspace, w: Subspace) -> Subspace:
    """proj_U(W) = W^perp meet U."""
    return meet(perp(space.form, w), u)


@dataclass
class ResidueMap:
    """Res(U) realized on a complement C of U inside U^perp.

    ``space`` is the residue polar space when its rank is at least 2; for a
    submaximal U it is None and ``pencil`` lists the residue points (the
    generators through U) instead.
    """

    ambient: PolarSpace
    base: Subspace
    complement: tuple[Vector, ...]
    form: Form
    space: PolarSpace | None
    pencil: list[Vector] | None

    @property
    def rank(self) -> int:
        return self.ambient.rank - self.base.dim

    def lift(self, s: Subspace) -> Subspace:
        """Residue subspace -> singular subspace of the ambient space through U."""
        f = self.ambient.field
        rows = [combine(f, r, self.complement) for r in s.basis]
        return rref(list(self.base.basis) + rows, f, self.ambient.n)

    def push(self, s: Subspace) -> Subspace:
        """Singular subspace through U -> subspace of the residue."""
        f = self.ambient.field
        full = list(self.base.basis) + list(self.complement)
        k = self.base.dim
        rows = []
        for b in s.basis:
            c = coordinates(f, b, full)
            rows.append(c[k:])
        return rref(rows, f, len(self.complement))

    def push_point(self, s: Subspace) -> int:
        """Index of push(s) among residue points (s one dimension above U)."""
        p = self.push(s)
        if p.dim != 1:
            raise GeometryError("subspace is not one dimension above the base")
        if self.space is not None:
            return self.space.point_index(p.basis[0])
        return self.pencil.index(p.basis[0])

    def push_singular(self, s: Subspace) -> int:
        """Index of push(s) in the residue's canonical singular inventory."""
        p = self.push(s)
        return self.space.singular_index(p.proj_dim)[p.basis]


def _complement(w: Subspace, u: Subspace) -> list[Vector]:
    f = w.field
    chosen: list[Vector] = []
    span = list(u.basis)
    for row in w.basis:
        trial = rref(span + [row], f, w.ambient_dim)
        if trial.dim > len(span):
            chosen.append(row)
            span = list(trial.basis)
    return chosen


def residue(space: PolarSpace, u: Subspace) -> ResidueMap:
    if not is_singular(space.form, u):
        raise GeometryError("residue base is not singular")
    if u.dim > space.rank - 1:
        raise GeometryError("residue base is a generator; its residue is empty")
    if u.dim == 0:
        basis = tuple(tuple(1 if j == i else 0 for j in range(space.n)) for i in range(space.n))
        return ResidueMap(space, u, basis, space.form, space, None)
    w = perp(space.form, u)
    comp = tuple(_complement(w, u))
    form = restrict(space.form, comp)
    if space.rank - u.dim >= 2:
        return ResidueMap(space, u, comp, form, PolarSpace(form), None)
    pencil = [v for v in projective_points(len(comp), space.field) if is_isotropic(form, v)]
    return ResidueMap(space, u, comp, form, None, pencil)
