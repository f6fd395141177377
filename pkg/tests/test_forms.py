from itertools import product

import pytest

from liecensus.fields import gf
from liecensus.forms import (ALTERNATING, QUADRATIC, Form, FormError, eval_bilinear, eval_quadratic,
                             is_isotropic, is_singular, least_irreducible_quadratic, perp, standard_form,
                             witt_index)
from liecensus.linalg import rref, subspaces_within, whole_space, zero_space

F2, F3, F4 = gf(2), gf(3), gf(4)


def e(i, n):
    return tuple(1 if j == i else 0 for j in range(n))


def test_evaluation_examples():
    w = standard_form("W", 3, F2)
    assert eval_bilinear(w, e(0, 4), e(1, 4)) == 1
    qp = standard_form("Q+", 3, F2)
    assert eval_quadratic(qp, (1, 1, 0, 0)) == 1
    h = standard_form("H", 3, F4)
    # x = (1, w, 0, 0): 1*1 + w*w^2 = 1 + 1 = 0 in characteristic 2
    assert eval_bilinear(h, (1, 2, 0, 0), (1, 2, 0, 0)) == 0
    # (1, 1, 1, 0): three ones sum to 1
    assert eval_bilinear(h, (1, 1, 1, 0), (1, 1, 1, 0)) == 1


def test_evaluation_errors():
    w = standard_form("W", 3, F2)
    with pytest.raises(ValueError):
        eval_bilinear(w, (1, 0), (0, 1, 0, 0))
    with pytest.raises(ValueError):
        eval_quadratic(w, (1, 0, 0, 0))


def test_invalid_forms_rejected():
    with pytest.raises(FormError):
        Form(ALTERNATING, 2, ((1, 0), (0, 0)), F2)
    with pytest.raises(FormError):
        Form(ALTERNATING, 2, ((0, 0), (0, 0)), F2)   # degenerate
    with pytest.raises(FormError):
        Form(QUADRATIC, 2, ((0, 0), (1, 0)), F2)
    with pytest.raises(FormError):
        Form("hermitian", 2, ((1, 0), (0, 1)), F3)
    with pytest.raises(ValueError):
        standard_form("W", 4, F2)
    with pytest.raises(ValueError):
        standard_form("H", 3, F3)


@pytest.mark.parametrize("fam,n,q,r", [("W", 3, 2, 2), ("W", 5, 2, 3), ("Q", 4, 2, 2), ("Q+", 5, 2, 3),
                                       ("Q-", 5, 2, 2), ("Q-", 7, 2, 3), ("H", 3, 4, 2), ("H", 4, 4, 2),
                                       ("W", 3, 3, 2), ("Q", 4, 3, 2), ("Q-", 5, 3, 2)])
def test_witt_index_of_standard_models(fam, n, q, r):
    assert witt_index(standard_form(fam, n, gf(q))) == r


def test_witt_index_exhaustive_oracle_q_minus():
    f = standard_form("Q-", 5, F2)
    sing_lines = [s for s in subspaces_within(whole_space(6, F2), 2) if is_singular(f, s)]
    sing_planes = [s for s in subspaces_within(whole_space(6, F2), 3) if is_singular(f, s)]
    assert sing_lines and not sing_planes


def test_least_irreducible_quadratic():
    assert least_irreducible_quadratic(F2) == (1, 1)
    assert least_irreducible_quadratic(F3) == (0, 1)


def test_perp_examples():
    w4 = standard_form("W", 3, F2)
    assert perp(w4, zero_space(4, F2)).dim == 4
    p = rref([(1, 0, 0, 0)], F2)
    pp = perp(w4, p)
    assert pp.dim == 3
    w6 = standard_form("W", 5, F2)
    line = rref([(1, 0, 0, 0, 0, 0), (0, 0, 1, 0, 0, 0)], F2)
    assert is_singular(w6, line)
    lp = perp(w6, line)
    assert lp.dim == 4
    assert all(v in lp for v in line.basis)


@pytest.mark.parametrize("fam,n,q", [("W", 3, 3), ("Q+", 3, 2), ("H", 3, 4), ("Q", 4, 3)])
def test_perp_is_involutive_and_inclusion_reversing(fam, n, q):
    f = standard_form(fam, n, gf(q))
    dim = n + 1
    subs = subspaces_within(whole_space(dim, f.field), 2)[:40]
    for s in subs:
        assert perp(f, perp(f, s)) == s
        assert perp(f, s).dim == dim - s.dim
        for pnt in subspaces_within(s, 1):
            ps = perp(f, s)
            assert all(v in perp(f, pnt) for v in ps.basis)


@pytest.mark.parametrize("q", [2, 4])
def test_char2_polar_form_is_alternating(q):
    for fam in ("Q", "Q+", "Q-"):
        n = 4 if fam == "Q" else 5
        f = standard_form(fam, n, gf(q))
        for v in product(range(q), repeat=f.n):
            if q == 4 and any(x > 1 for x in v[:3]):
                continue  # keep the GF(4) sweep small
            assert eval_bilinear(f, v, v) == 0


def test_parabolic_char2_polar_radical_is_the_nucleus():
    f = standard_form("Q", 4, F2)
    rad = f.radical()
    assert rad.dim == 1
    assert eval_quadratic(f, rad.basis[0]) != 0


def test_singularity_inherited_by_subspaces():
    f = standard_form("Q+", 5, F2)
    plane = rref([(1, 0, 0, 0, 0, 0), (0, 0, 1, 0, 0, 0), (0, 0, 0, 0, 1, 0)], F2)
    assert is_singular(f, plane)
    for k in (1, 2):
        assert all(is_singular(f, s) for s in subspaces_within(plane, k))
    assert is_singular(f, zero_space(6, F2))


def test_every_point_isotropic_in_symplectic():
    f = standard_form("W", 3, F3)
    assert all(is_isotropic(f, v) for v in product(range(3), repeat=4))
