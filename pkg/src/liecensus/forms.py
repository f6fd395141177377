"""Alternating, quadratic and Hermitian forms and their standard models."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import product
from typing import Sequence

from .fields import FieldSpec, conjugation_table
from .linalg import Subspace, nullspace, rref, zero_space, join

ALTERNATING = "alternating"
QUADRATIC = "quadratic"
HERMITIAN = "hermitian"

PARABOLIC = "parabolic"
HYPERBOLIC = "hyperbolic"
ELLIPTIC = "elliptic"

# family code -> (kind, subkind)
FAMILIES = {
    "W": (ALTERNATING, None),
    "Q": (QUADRATIC, PARABOLIC),
    "Q+": (QUADRATIC, HYPERBOLIC),
    "Q-": (QUADRATIC, ELLIPTIC),
    "H": (HERMITIAN, None),
}


class FormError(ValueError):
    pass


@dataclass(frozen=True)
class Form:
    """A reflexive form on GF(q)^n.

    For ``quadratic`` forms ``gram`` is the upper-triangular coefficient
    matrix of Q, never a symmetric Gram matrix; the polar bilinear form is
    derived in ``bilinear``.  For ``hermitian`` forms the field order must be
    a square and ``gram`` is the (conjugate-symmetric) Gram matrix.
    """

    kind: str
    n: int
    gram: tuple[tuple[int, ...], ...]
    field: FieldSpec
    subkind: str | None = None
    bilinear: tuple[tuple[int, ...], ...] = dc_field(init=False, repr=False, compare=False)
    conj: tuple[int, ...] | None = dc_field(init=False, repr=False, compare=False)

    def __post_init__(self):
        f, n, g = self.field, self.n, self.gram
        if len(g) != n or any(len(r) != n for r in g):
            raise FormError("gram matrix must be n x n")
        conj = None
        if self.kind == ALTERNATING:
            for i in range(n):
                if g[i][i]:
                    raise FormError("alternating form needs a zero diagonal")
                for j in range(n):
                    if g[i][j] != f.neg(g[j][i]):
                        raise FormError("alternating form must be antisymmetric")
            bil = g
        elif self.kind == QUADRATIC:
            for i in range(n):
                for j in range(i):
                    if g[i][j]:
                        raise FormError("quadratic coefficients must be upper triangular")
            bil = tuple(
                tuple(f.add(g[i][i], g[i][i]) if i == j else (g[i][j] if i < j else g[j][i])
                      for j in range(n))
                for i in range(n))
        elif self.kind == HERMITIAN:
            if not f.is_square_order():
                raise FormError("Hermitian forms need a field of square order")
            conj = conjugation_table(f)
            for i in range(n):
                for j in range(n):
                    if g[i][j] != conj[g[j][i]]:
                        raise FormError("Hermitian gram must equal its conjugate transpose")
            bil = g
        else:
            raise FormError(f"unknown form kind {self.kind!r}")
        object.__setattr__(self, "bilinear", bil)
        object.__setattr__(self, "conj", conj)
        if not self.is_nondegenerate():
            raise FormError(f"degenerate {self.kind} form")

    @property
    def family(self) -> str:
        if self.kind == ALTERNATING:
            return "W"
        if self.kind == HERMITIAN:
            return "H"
        return {PARABOLIC: "Q", HYPERBOLIC: "Q+", ELLIPTIC: "Q-"}.get(self.subkind, "Q")

    def functional(self, v: Sequence[int]) -> tuple[int, ...]:
        """Coefficients c with f(x, v) = sum_i c_i x_i (linear in x)."""
        f, b = self.field, self.bilinear
        if self.conj is not None:
            v = [self.conj[x] for x in v]
        add, mul = f.add_table, f.mul_table
        out = []
        for row in b:
            acc = 0
            for gij, x in zip(row, v):
                if gij and x:
                    acc = add[acc][mul[gij][x]]
            out.append(acc)
        return tuple(out)

    def radical(self) -> Subspace:
        return nullspace(self.field, [self.functional(e) for e in _unit_vectors(self.n)], self.n)

    def is_nondegenerate(self) -> bool:
        rad = self.radical()
        if self.kind != QUADRATIC:
            return rad.dim == 0
        # quadric: the null set must avoid the radical of the polar form
        return all(eval_quadratic(self, v) != 0 for v in rad.points())


def _unit_vectors(n: int):
    return [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]


def _check_vec(form: Form, v) -> None:
    if len(v) != form.n:
        raise ValueError(f"vector of length {len(v)} in a form of dimension {form.n}")


def eval_bilinear(form: Form, u: Sequence[int], v: Sequence[int]) -> int:
    """f(u, v); the polarization Q(u+v)-Q(u)-Q(v) for quadratic forms."""
    _check_vec(form, u)
    _check_vec(form, v)
    c = form.functional(v)
    f = form.field
    acc = 0
    for ci, x in zip(c, u):
        acc = f.add_table[acc][f.mul_table[ci][x]]
    return acc


def eval_quadratic(form: Form, v: Sequence[int]) -> int:
    if form.kind != QUADRATIC:
        raise ValueError(f"{form.kind} forms have no quadratic evaluation")
    _check_vec(form, v)
    f, g = form.field, form.gram
    add, mul = f.add_table, f.mul_table
    acc = 0
    for i, xi in enumerate(v):
        if not xi:
            continue
        row = g[i]
        for j in range(i, form.n):
            xj = v[j]
            if row[j] and xj:
                acc = add[acc][mul[mul[row[j]][xi]][xj]]
    return acc


def is_isotropic(form: Form, v: Sequence[int]) -> bool:
    """Singular vector: Q(v) = 0 for quadrics, f(v, v) = 0 otherwise."""
    if form.kind == QUADRATIC:
        return eval_quadratic(form, v) == 0
    if form.kind == ALTERNATING:
        return True
    return eval_bilinear(form, v, v) == 0


def perp(form: Form, s: Subspace) -> Subspace:
    if s.ambient_dim != form.n:
        raise ValueError("subspace and form have different ambient dimension")
    return nullspace(form.field, [form.functional(b) for b in s.basis], form.n)


def is_singular(form: Form, s: Subspace) -> bool:
    """Totally singular test on a basis and its pairwise sums."""
    basis = s.basis
    for i, u in enumerate(basis):
        if not is_isotropic(form, u):
            return False
        for v in basis[i + 1:]:
            if eval_bilinear(form, u, v):
                return False
    return True


def witt_index(form: Form) -> int:
    """Dimension of a maximal totally singular subspace (greedy extension).

    Maximal totally singular subspaces all have the same dimension, so any
    non-extendable one has maximum dimension.
    """
    s = zero_space(form.n, form.field)
    while True:
        nxt = None
        for v in perp(form, s).points():
            if is_isotropic(form, v) and v not in s:
                nxt = v
                break
        if nxt is None:
            return s.dim
        s = join(s, rref([nxt], form.field, form.n))


def least_irreducible_quadratic(field: FieldSpec) -> tuple[int, int]:
    """Least (b, c) in lex order with x^2 + b x + c irreducible over the field."""
    mul, add = field.mul_table, field.add_table
    for b, c in product(range(field.q), repeat=2):
        if all(add[add[mul[x][x]][mul[b][x]]][c] for x in range(field.q)):
            return b, c
    raise AssertionError("every finite field has an irreducible quadratic")


def standard_form(family: str, proj_dim: int, field: FieldSpec) -> Form:
    """The fixed coordinate model of W, Q, Q+, Q- or H in PG(proj_dim, q).

    W(2r-1): sum x_{2i} y_{2i+1} - x_{2i+1} y_{2i}
    Q+(2n-1): sum x_{2i} x_{2i+1}
    Q(2n): x_0^2 + sum x_{2i-1} x_{2i}
    Q-(2n+1): sum_{i<n} x_{2i} x_{2i+1} + g(x_{2n}, x_{2n+1})
    H(n): sum x_i conj(x_i)
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown polar family {family!r}")
    n = proj_dim + 1
    g = [[0] * n for _ in range(n)]
    one = 1
    if family == "W":
        if n % 2 or n < 4:
            raise ValueError("W(2r-1, q) needs odd projective dimension >= 3")
        minus = field.neg(one)
        for i in range(0, n, 2):
            g[i][i + 1] = one
            g[i + 1][i] = minus
        kind, sub = ALTERNATING, None
    elif family == "Q+":
        if n % 2 or n < 4:
            raise ValueError("Q+(2n-1, q) needs odd projective dimension >= 3")
        for i in range(0, n, 2):
            g[i][i + 1] = one
        kind, sub = QUADRATIC, HYPERBOLIC
    elif family == "Q":
        if n % 2 == 0 or n < 5:
            raise ValueError("Q(2n, q) needs even projective dimension >= 4")
        g[0][0] = one
        for i in range(1, n, 2):
            g[i][i + 1] = one
        kind, sub = QUADRATIC, PARABOLIC
    elif family == "Q-":
        if n % 2 or n < 4:
            raise ValueError("Q-(2n+1, q) needs odd projective dimension >= 3")
        for i in range(0, n - 2, 2):
            g[i][i + 1] = one
        b, c = least_irreducible_quadratic(field)
        g[n - 2][n - 2] = one
        g[n - 2][n - 1] = b
        g[n - 1][n - 1] = c
        kind, sub = QUADRATIC, ELLIPTIC
    else:
        if not field.is_square_order():
            raise ValueError("H(n, q^2) needs a field of square order")
        if n < 4:
            raise ValueError("H(n, q^2) needs projective dimension >= 3")
        for i in range(n):
            g[i][i] = one
        kind, sub = HERMITIAN, None
    return Form(kind, n, tuple(tuple(r) for r in g), field, sub)


def restrict(form: Form, basis: Sequence[Sequence[int]]) -> Form:
    """The form induced on span(basis), in the coordinates of that basis."""
    k = len(basis)
    f = form.field
    if form.kind == QUADRATIC:
        g = [[0] * k for _ in range(k)]
        for i in range(k):
            g[i][i] = eval_quadratic(form, basis[i])
            for j in range(i + 1, k):
                g[i][j] = eval_bilinear(form, basis[i], basis[j])
    else:
        g = [[eval_bilinear(form, basis[i], basis[j]) for j in range(k)] for i in range(k)]
    return Form(form.kind, k, tuple(tuple(r) for r in g), f, form.subkind)
