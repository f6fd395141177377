"""Recognizers for the families of sets without a common opposite.

Each family is tested by its own predicate; ``classify`` tries them in the
fixed ``FamilyLabel`` order and returns the first that fires.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .forms import ALTERNATING, ELLIPTIC, HERMITIAN, HYPERBOLIC, PARABOLIC
from .grassmann import (DUAL_POLAR, HALF_SPIN, POLAR, PROJECTIVE, OppositionContext,
                        PointLineGeometry, common_subspace, spanned_subspace)
from .linalg import Subspace
from .spaces import (GeometryError, PolarSpace, ResidueMap, bits, hyperbolic_line, mask_of,
                     residue)


class FamilyLabel(str, enum.Enum):
    GrassmannLine = "GrassmannLine"
    DualPolarLine = "DualPolarLine"
    HalfSpinLine = "HalfSpinLine"
    HyperbolicLineInResidue = "HyperbolicLineInResidue"
    DualHyperbolicLineInResidue = "DualHyperbolicLineInResidue"
    OvoidInIdealSubGQ = "OvoidInIdealSubGQ"
    SpreadInSubGQ = "SpreadInSubGQ"
    GQOvoidInSubGQ = "GQOvoidInSubGQ"
    GQSpreadInSubGQ = "GQSpreadInSubGQ"
    Unclassified = "Unclassified"


LABEL_ORDER = list(FamilyLabel)
EXCEPTIONAL = {FamilyLabel.OvoidInIdealSubGQ, FamilyLabel.SpreadInSubGQ,
               FamilyLabel.GQOvoidInSubGQ, FamilyLabel.GQSpreadInSubGQ}


@dataclass
class Classification:
    label: FamilyLabel
    witness: dict = field(default_factory=dict)


# -- generalized quadrangles ------------------------------------------------

@dataclass
class Quadrangle:
    """Rank-2 incidence data: point bitsets per line and collinearity rows."""

    n_points: int
    lines: list[int]
    adjacency: list[int]

    @classmethod
    def of(cls, space: PolarSpace) -> "Quadrangle":
        if space.rank != 2:
            raise GeometryError("a quadrangle needs a rank-2 polar space")
        return cls(space.n_points, list(space.lines), list(space.adjacency))

    @property
    def order(self) -> tuple[int, int]:
        s = self.lines[0].bit_count() - 1
        t = sum(1 for L in self.lines if L & 1) - 1
        return s, t

    def dual(self) -> "Quadrangle":
        n_lines = len(self.lines)
        pencils = [0] * self.n_points
        for li, L in enumerate(self.lines):
            for p in bits(L):
                pencils[p] |= 1 << li
        adj = []
        for L in self.lines:
            row = 0
            for li, M in enumerate(self.lines):
                if L & M:
                    row |= 1 << li
            adj.append(row)
        return Quadrangle(n_lines, pencils, adj)


@dataclass
class SubQuadrangle:
    points: int
    lines: list[int]

    def order(self, adjacency: Sequence[int]) -> tuple[int, int] | None:
        """(s', t') if the structure satisfies the GQ axioms, else None."""
        if not self.lines:
            return None
        sizes = {L.bit_count() for L in self.lines}
        if len(sizes) != 1:
            return None
        s1 = sizes.pop() - 1
        per_point = {}
        for p in bits(self.points):
            per_point[p] = sum(1 for L in self.lines if L >> p & 1)
        degs = set(per_point.values())
        if len(degs) != 1:
            return None
        t1 = degs.pop() - 1
        if s1 < 1 or t1 < 1:
            return None
        for p in per_point:
            row = adjacency[p]
            for L in self.lines:
                if not L >> p & 1 and (row & L).bit_count() != 1:
                    return None
        return s1, t1


def subgq_closure(gq: Quadrangle, t_points: Sequence[int]) -> SubQuadrangle:
    """T together with x1^perp ∩ x2^perp over pairs of T, with induced lines."""
    pts = list(t_points)
    adj = gq.adjacency
    for i, a in enumerate(pts):
        for b in pts[i + 1:]:
            if adj[a] >> b & 1:
                raise GeometryError("closure needs pairwise non-collinear points")
    x = mask_of(pts)
    for i, a in enumerate(pts):
        for b in pts[i + 1:]:
            x |= adj[a] & adj[b]
    lines = [L & x for L in gq.lines if (L & x).bit_count() >= 2]
    return SubQuadrangle(x, lines)


def is_ovoid_in_ideal_subgq(gq: Quadrangle, t_points: Sequence[int]) -> tuple[bool, tuple | None]:
    """T is an ovoid of its closure, an ideal subquadrangle of order (s/t, t)."""
    adj = gq.adjacency
    pts = list(t_points)
    if any(adj[a] >> b & 1 for i, a in enumerate(pts) for b in pts[i + 1:]):
        return False, None
    sub = subgq_closure(gq, pts)
    order = sub.order(adj)
    if order is None:
        return False, None
    s, t = gq.order
    s1, t1 = order
    if t1 != t or s1 * t != s:
        return False, order
    tm = mask_of(pts)
    if any((L & tm).bit_count() != 1 for L in sub.lines):
        return False, order
    return True, order


def is_spread_in_subgq(gq: Quadrangle, t_lines: Sequence[int]) -> tuple[bool, tuple | None]:
    """Dual test on line indices; the order is reported in the original (s, t) terms."""
    ok, order = is_ovoid_in_ideal_subgq(gq.dual(), t_lines)
    return ok, (None if order is None else (order[1], order[0]))


def ovoid_profile(gq: Quadrangle, t_points: Sequence[int]) -> tuple[set[int], set[int]]:
    """Numbers of members of T collinear to points outside / inside the closure (T excluded)."""
    sub = subgq_closure(gq, t_points)
    tm = mask_of(t_points)
    outside, inside = set(), set()
    for p in range(gq.n_points):
        if tm >> p & 1:
            continue
        k = (gq.adjacency[p] & tm).bit_count()
        (inside if sub.points >> p & 1 else outside).add(k)
    return outside, inside


# -- predicates on the geometry ---------------------------------------------

def is_grassmann_line(geom: PointLineGeometry, t: Sequence[int]) -> bool:
    if len(t) != geom.line_size:
        raise ValueError(f"set of size {len(t)} cannot be a line of size {geom.line_size}")
    return tuple(sorted(t)) in geom.line_set()


def is_geometric_line(geom: PointLineGeometry, opp: OppositionContext, t: Sequence[int]) -> bool:
    """Every object is non-opposite exactly one or all members of T."""
    if len(t) < 2:
        raise ValueError("geometric lines have at least two members")
    full = (1 << opp.n_objects) - 1
    one = two = 0
    every = full
    for v in t:
        hit = full & ~opp.rows[v]
        two |= one & hit
        one |= hit
        every &= hit
    return one == full and not two & ~every


def spread_order_readings(space, order) -> dict[str, bool]:
    """Which of the two stated subquadrangle orders, (t, s/t) or (s, t/s), the measured order matches."""
    s, t = space.order
    got = tuple(Fraction(x) for x in order)
    return {"(t,s/t)": got == (Fraction(t), Fraction(s, t)),
            "(s,t/s)": got == (Fraction(s), Fraction(t, s))}


class Catalog:
    """Classifier bound to one geometry; caches residues and quadrangles."""

    def __init__(self, geom: PointLineGeometry, opp: OppositionContext):
        self.geom = geom
        self.opp = opp
        self._residues: dict[tuple, ResidueMap] = {}
        self._quads: dict[tuple, Quadrangle] = {}

    # helpers
    @property
    def space(self):
        return self.geom.space

    def residue(self, u: Subspace) -> ResidueMap:
        if u.basis not in self._residues:
            self._residues[u.basis] = residue(self.space, u)
        return self._residues[u.basis]

    def quadrangle(self, u: Subspace) -> Quadrangle:
        if u.basis not in self._quads:
            self._quads[u.basis] = Quadrangle.of(self.residue(u).space)
        return self._quads[u.basis]

    def members(self, t: Sequence[int]) -> list[Subspace]:
        return [self.geom.vertices[v] for v in t]

    def _polar(self) -> PolarSpace | None:
        return self.space if isinstance(self.space, PolarSpace) else None

    # family predicates
    def grassmann_line(self, t) -> Classification | None:
        g = self.geom
        if len(t) != g.line_size or not is_grassmann_line(g, t):
            return None
        ms = self.members(t)
        u = common_subspace(ms)
        if g.kind in (PROJECTIVE, POLAR):
            w = spanned_subspace(ms)
            return Classification(FamilyLabel.GrassmannLine,
                                  {"common": _basis(u), "span": _basis(w)})
        if g.kind == DUAL_POLAR:
            if u.dim != self.space.rank - 1:
                raise AssertionError("dual polar line without a common submaximal")
            return Classification(FamilyLabel.DualPolarLine, {"common": _basis(u)})
        if u.dim != self.space.rank - 2:
            raise AssertionError("half-spin line without a common codimension-2 subspace")
        return Classification(FamilyLabel.HalfSpinLine, {"common": _basis(u)})

    def hyperbolic_line_in_residue(self, t) -> Classification | None:
        sp = self._polar()
        g = self.geom
        if sp is None or sp.kind != ALTERNATING or g.kind != POLAR or g.type_index > sp.rank - 1:
            return None
        ms = self.members(t)
        u = common_subspace(ms)
        if u.dim != g.type_index - 1:
            return None
        res = self.residue(u)
        pts = [res.push_point(m) for m in ms]
        rs = res.space
        if any(rs.collinear(a, b) for i, a in enumerate(pts) for b in pts[i + 1:]):
            return None
        if hyperbolic_line(rs, pts[0], pts[1]) != mask_of(pts):
            return None
        return Classification(FamilyLabel.HyperbolicLineInResidue,
                              {"common": _basis(u), "residue": repr(rs)})

    def dual_hyperbolic_line_in_residue(self, t) -> Classification | None:
        sp = self._polar()
        g = self.geom
        if sp is None or g.kind not in (DUAL_POLAR, HALF_SPIN):
            return None
        parabolic_like = (sp.form.subkind in (PARABOLIC, HYPERBOLIC)
                          or (sp.kind == ALTERNATING and sp.field.p == 2))
        if not parabolic_like:
            return None
        ms = self.members(t)
        u = common_subspace(ms)
        if u.dim != sp.rank - 2:
            return None
        res = self.residue(u)
        rlines = res.space.lines
        tl = [rlines[res.push_singular(m)] for m in ms]
        if any(a & b for i, a in enumerate(tl) for b in tl[i + 1:]):
            return None
        trans = [M for M in rlines if all(M & L for L in tl)]
        if len(trans) != len(tl):
            return None
        back = [M for M in rlines if all(M & L for L in trans)]
        if sorted(back) != sorted(tl):
            return None
        return Classification(FamilyLabel.DualHyperbolicLineInResidue,
                              {"common": _basis(u), "residue": repr(res.space),
                               "transversals": len(trans)})

    def ovoid_in_residue(self, t) -> Classification | None:
        sp = self._polar()
        g = self.geom
        if (sp is None or sp.kind != HERMITIAN or sp.n % 2 or sp.rank < 3
                or sp.field.p != 2 or g.kind != POLAR or g.type_index != sp.rank - 1):
            return None
        ms = self.members(t)
        u = common_subspace(ms)
        if u.dim != sp.rank - 2:
            return None
        res = self.residue(u)
        pts = [res.push_point(m) for m in ms]
        ok, order = is_ovoid_in_ideal_subgq(self.quadrangle(u), pts)
        if not ok:
            return None
        return Classification(FamilyLabel.OvoidInIdealSubGQ,
                              {"common": _basis(u), "residue": repr(res.space),
                               "subgq_order": list(order)})

    def spread_in_residue(self, t) -> Classification | None:
        sp = self._polar()
        g = self.geom
        if (sp is None or sp.form.subkind != ELLIPTIC or sp.rank < 3 or sp.field.p != 2
                or g.kind != DUAL_POLAR):
            return None
        ms = self.members(t)
        u = common_subspace(ms)
        if u.dim != sp.rank - 2:
            return None
        res = self.residue(u)
        lines = [res.push_singular(m) for m in ms]
        ok, order = is_spread_in_subgq(self.quadrangle(u), lines)
        if not ok:
            return None
        return Classification(FamilyLabel.SpreadInSubGQ,
                              {"common": _basis(u), "residue": repr(res.space),
                               "subgq_order": list(order)})

    def gq_ovoid(self, t) -> Classification | None:
        sp = self._polar()
        if sp is None or sp.rank != 2 or self.geom.type_index != 1:
            return None
        ok, order = is_ovoid_in_ideal_subgq(Quadrangle.of(sp), list(t))
        if not ok:
            return None
        return Classification(FamilyLabel.GQOvoidInSubGQ, {"subgq_order": list(order)})

    def gq_spread(self, t) -> Classification | None:
        sp = self._polar()
        if sp is None or sp.rank != 2 or self.geom.type_index != 2:
            return None
        ok, order = is_spread_in_subgq(self._gq(), list(t))
        if not ok:
            return None
        return Classification(FamilyLabel.GQSpreadInSubGQ, {"subgq_order": list(order),
                                                            "order_readings": spread_order_readings(sp, order)})

    def _gq(self) -> Quadrangle:
        if () not in self._quads:
            self._quads[()] = Quadrangle.of(self.space)
        return self._quads[()]

    def predicates(self):
        return [self.grassmann_line, self.hyperbolic_line_in_residue,
                self.dual_hyperbolic_line_in_residue, self.ovoid_in_residue,
                self.spread_in_residue, self.gq_ovoid, self.gq_spread]

    def classify(self, t: Sequence[int]) -> Classification:
        t = tuple(t)
        for pred in self.predicates():
            c = pred(t)
            if c is not None:
                return c
        return Classification(FamilyLabel.Unclassified)

    def matching(self, t: Sequence[int]) -> list[FamilyLabel]:
        """Every family whose predicate fires (no first-match cut-off)."""
        out = []
        for pred in self.predicates():
            c = pred(tuple(t))
            if c is not None:
                out.append(c.label)
        return out


def classify(geom: PointLineGeometry, opp: OppositionContext, t: Sequence[int],
             catalog: Catalog | None = None) -> Classification:
    return (catalog or Catalog(geom, opp)).classify(t)


def is_hyperbolic_line_in_residue(geom: PointLineGeometry, t: Sequence[int]) -> tuple[bool, Subspace | None]:
    c = Catalog(geom, None).hyperbolic_line_in_residue(tuple(t))
    return (c is not None, None if c is None else common_subspace([geom.vertices[v] for v in t]))


def is_dual_hyperbolic_line_in_residue(geom: PointLineGeometry, t: Sequence[int]) -> tuple[bool, Subspace | None]:
    c = Catalog(geom, None).dual_hyperbolic_line_in_residue(tuple(t))
    return (c is not None, None if c is None else common_subspace([geom.vertices[v] for v in t]))


def _basis(s: Subspace) -> list[list[int]]:
    return [list(r) for r in s.basis]
