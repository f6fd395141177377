"""Exact linear algebra over small finite fields.

Subspaces are kept in reduced row-echelon form, which makes the basis a
canonical key: two equal subspaces have identical ``basis`` tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Iterator, Sequence

from .fields import FieldSpec

Vector = tuple[int, ...]


def encode(vec: Sequence[int]) -> int:
    """Pack a vector into an int, 4 bits per coordinate (order-preserving)."""
    code = 0
    for x in vec:
        code = (code << 4) | x
    return code


def decode(code: int, n: int) -> Vector:
    return tuple((code >> (4 * (n - 1 - i))) & 15 for i in range(n))


def normalize(field: FieldSpec, vec: Sequence[int]) -> Vector:
    """Scale so the first nonzero coordinate is 1 (projective point rep)."""
    for x in vec:
        if x:
            if x == 1:
                return tuple(vec)
            row = field.mul_table[field.inv_table[x]]
            return tuple(row[y] for y in vec)
    raise ValueError("the zero vector is not a projective point")


def vec_add(field: FieldSpec, u: Sequence[int], v: Sequence[int]) -> Vector:
    add = field.add_table
    return tuple(add[a][b] for a, b in zip(u, v))


def vec_scale(field: FieldSpec, c: int, v: Sequence[int]) -> Vector:
    row = field.mul_table[c]
    return tuple(row[x] for x in v)


def combine(field: FieldSpec, coeffs: Sequence[int], rows: Sequence[Sequence[int]]) -> Vector:
    n = len(rows[0])
    add, mul = field.add_table, field.mul_table
    out = [0] * n
    for c, row in zip(coeffs, rows):
        if c:
            mrow = mul[c]
            for j, x in enumerate(row):
                if x:
                    out[j] = add[out[j]][mrow[x]]
    return tuple(out)


def _reduce(field: FieldSpec, rows: list[list[int]], n: int) -> tuple[list[list[int]], list[int]]:
    add, mul, neg, inv = field.add_table, field.mul_table, field.neg_table, field.inv_table
    rows = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for col in range(n):
        piv = None
        for i in range(r, len(rows)):
            if rows[i][col]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        lead = rows[r][col]
        if lead != 1:
            m = mul[inv[lead]]
            rows[r] = [m[x] for x in rows[r]]
        prow = rows[r]
        for i in range(len(rows)):
            if i != r:
                c = rows[i][col]
                if c:
                    m = mul[neg[c]]
                    row = rows[i]
                    for j in range(col, n):
                        if prow[j]:
                            row[j] = add[row[j]][m[prow[j]]]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of GF(q)^n with canonical RREF basis."""

    ambient_dim: int
    basis: tuple[Vector, ...]
    pivots: tuple[int, ...]
    field: FieldSpec

    @property
    def dim(self) -> int:
        """Vector-space dimension."""
        return len(self.basis)

    @property
    def proj_dim(self) -> int:
        """Projective dimension; the zero space has dimension -1."""
        return len(self.basis) - 1

    def key(self) -> tuple[Vector, ...]:
        return self.basis

    def flat(self) -> tuple[int, ...]:
        return tuple(x for row in self.basis for x in row)

    def points(self) -> Iterator[Vector]:
        """Normalized vectors of all projective points of the subspace."""
        k = len(self.basis)
        q = self.field.q
        for lead in range(k):
            for tail in product(range(q), repeat=k - lead - 1):
                yield combine(self.field, (0,) * lead + (1,) + tail, self.basis)

    def n_points(self) -> int:
        q = self.field.q
        return (q ** self.dim - 1) // (q - 1)

    def __contains__(self, vec) -> bool:
        if not any(vec):
            return True
        return rank(self.field, list(self.basis) + [tuple(vec)], self.ambient_dim) == self.dim


def rref(rows: Iterable[Sequence[int]], field: FieldSpec, ambient_dim: int | None = None) -> Subspace:
    rows = [tuple(r) for r in rows]
    if ambient_dim is None:
        if not rows:
            raise ValueError("ambient dimension needed for an empty row list")
        ambient_dim = len(rows[0])
    for r in rows:
        if len(r) != ambient_dim:
            raise ValueError(f"ragged matrix: row of length {len(r)} in dimension {ambient_dim}")
        for x in r:
            if not 0 <= x < field.q:
                raise ValueError(f"{x} is not an element of {field!r}")
    reduced, pivots = _reduce(field, rows, ambient_dim)
    return Subspace(ambient_dim, tuple(tuple(r) for r in reduced), tuple(pivots), field)


def rank(field: FieldSpec, rows: Sequence[Sequence[int]], n: int | None = None) -> int:
    if not rows:
        return 0
    return len(_reduce(field, rows, n if n is not None else len(rows[0]))[1])


def zero_space(n: int, field: FieldSpec) -> Subspace:
    return Subspace(n, (), (), field)


def whole_space(n: int, field: FieldSpec) -> Subspace:
    basis = tuple(tuple(1 if j == i else 0 for j in range(n)) for i in range(n))
    return Subspace(n, basis, tuple(range(n)), field)


def _check_same(a: Subspace, b: Subspace) -> None:
    if a.ambient_dim != b.ambient_dim or a.field != b.field:
        raise ValueError("subspaces live in different ambient spaces")


def join(a: Subspace, b: Subspace) -> Subspace:
    _check_same(a, b)
    return rref(a.basis + b.basis, a.field, a.ambient_dim)


def meet(a: Subspace, b: Subspace) -> Subspace:
    """Intersection by the Zassenhaus sum-intersection trick."""
    _check_same(a, b)
    n, f = a.ambient_dim, a.field
    if not a.basis or not b.basis:
        return zero_space(n, f)
    zero = (0,) * n
    rows = [r + r for r in a.basis] + [r + zero for r in b.basis]
    reduced, _ = _reduce(f, rows, 2 * n)
    inter = [tuple(r[n:]) for r in reduced if not any(r[:n])]
    return rref(inter, f, n)


def contains(a: Subspace, b: Subspace) -> bool:
    """True iff b is a subspace of a."""
    _check_same(a, b)
    if b.dim > a.dim:
        return False
    return rank(a.field, list(a.basis) + list(b.basis), a.ambient_dim) == a.dim


def nullspace(field: FieldSpec, constraints: Sequence[Sequence[int]], n: int) -> Subspace:
    """All x with sum_j c_j x_j = 0 for every constraint row c."""
    reduced, pivots = _reduce(field, [list(c) for c in constraints], n) if constraints else ([], [])
    free = [j for j in range(n) if j not in pivots]
    neg = field.neg_table
    basis = []
    for fcol in free:
        v = [0] * n
        v[fcol] = 1
        for row, pcol in zip(reduced, pivots):
            v[pcol] = neg[row[fcol]]
        basis.append(v)
    return rref(basis, field, n)


def coordinates(field: FieldSpec, vec: Sequence[int], basis: Sequence[Sequence[int]]) -> Vector:
    """Coefficients c with sum c_i basis_i = vec (basis must be independent)."""
    k = len(basis)
    n = len(vec)
    # solve via the transposed augmented system
    cols = [[basis[i][j] for i in range(k)] + [vec[j]] for j in range(n)]
    reduced, pivots = _reduce(field, cols, k + 1)
    if k in pivots:
        raise ValueError("vector is not in the span of the basis")
    coeffs = [0] * k
    for row, pcol in zip(reduced, pivots):
        coeffs[pcol] = row[k]
    return tuple(coeffs)


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


@lru_cache(maxsize=None)
def _enumerate(n: int, k: int, field: FieldSpec) -> tuple[Subspace, ...]:
    q = field.q
    out = []
    for pivots in combinations(range(n), k):
        # free positions: right of the pivot, not in a pivot column
        free = [(i, j) for i, p in enumerate(pivots) for j in range(p + 1, n) if j not in pivots]
        for values in product(range(q), repeat=len(free)):
            rows = [[0] * n for _ in range(k)]
            for i, p in enumerate(pivots):
                rows[i][p] = 1
            for (i, j), x in zip(free, values):
                rows[i][j] = x
            out.append(Subspace(n, tuple(tuple(r) for r in rows), pivots, field))
    out.sort(key=Subspace.flat)
    return tuple(out)


def enumerate_subspaces(n: int, k: int, field: FieldSpec) -> list[Subspace]:
    """All k-dimensional subspaces of GF(q)^n, sorted by flattened RREF."""
    if not 0 <= k <= n:
        raise ValueError(f"dimension {k} out of range for GF(q)^{n}")
    return list(_enumerate(n, k, field))


def projective_points(n: int, field: FieldSpec) -> list[Vector]:
    """Normalized representatives of all points of PG(n-1, q), lex order."""
    q = field.q
    pts = []
    for lead in range(n):
        for tail in product(range(q), repeat=n - lead - 1):
            pts.append((0,) * lead + (1,) + tail)
    pts.sort()
    return pts


def subspaces_within(s: Subspace, k: int) -> list[Subspace]:
    """All k-dimensional subspaces of s, as subspaces of the ambient space."""
    out = []
    for c in _enumerate(s.dim, k, s.field):
        rows = [combine(s.field, r, s.basis) for r in c.basis]
        out.append(rref(rows, s.field, s.ambient_dim))
    return out
