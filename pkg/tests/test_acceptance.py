"""Acceptance criteria A1-A11 (blocking) and A12 (stretch, non-blocking).

Run with ``pytest tests/test_acceptance.py`` (a PASS/FAIL line per criterion is
printed in the terminal summary) or directly with ``python3 tests/test_acceptance.py``.
Each criterion must also finish inside its wall-clock target.
"""

from __future__ import annotations

import random
import sys
import time
from math import comb
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import oracles as O  # noqa: E402
from liecensus.catalog import (FamilyLabel as F, Quadrangle, is_dual_hyperbolic_line_in_residue,  # noqa: E402
                               is_geometric_line, is_hyperbolic_line_in_residue, ovoid_profile)
from liecensus.census import CensusConfig, census, run_census, verify_minimality  # noqa: E402
from liecensus.fields import gf  # noqa: E402
from liecensus.forms import perp  # noqa: E402
from liecensus.geomspec import parse_spec  # noqa: E402
from liecensus.grassmann import (common_subspace, is_opposite_singular, lemma_glue_check,  # noqa: E402
                                 spanned_subspace)
from liecensus.linalg import subspaces_within  # noqa: E402
from liecensus.search import naive_search  # noqa: E402
from liecensus.spaces import (audit_axioms, audit_order, build_projective, hyperbolic_line,  # noqa: E402
                              is_large_hyperbolic_line, mask_of, polar_space)

ALL = 10 ** 9  # keep every witness
RESULTS: dict[str, tuple[str, float, float, str]] = {}
CRITERIA = {}


def criterion(cid: str, target: float):
    def deco(fn):
        CRITERIA[cid] = (fn, target)
        return fn
    return deco


def full_census(text: str, **kw):
    spec = parse_spec(text)
    geom, opp = spec.build()
    rep = census(geom, opp, CensusConfig(spec, witness_cap=ALL, **kw), spec)
    assert rep.complete, f"{text}: search incomplete"
    assert rep.unclassified == 0, f"{text}: {rep.unclassified} unclassified"
    assert rep.minimality["verified"], f"{text}: minimality not verified"
    return geom, opp, rep


def members(rep, label):
    return [t for t, lab in zip(rep.blockers, rep.labels) if lab == label]


def vertex_subspaces(geom, t):
    return [geom.vertices[v] for v in t]


# -- criteria ---------------------------------------------------------------

@criterion("A1", 1.0)
def a1():
    out = []
    for text, q in (("PG(2,2) i=1", 2), ("PG(2,3) i=1", 3)):
        geom, _, rep = full_census(text)
        assert rep.size == q + 1
        assert rep.family_counts() == {"GrassmannLine": q * q + q + 1}
        assert rep.blockers == sorted(geom.lines)
        out.append(f"{text.split()[0]}: {rep.total} lines")
    return "; ".join(out)


@criterion("A2", 5.0)
def a2():
    geom, _, rep = full_census("PG(3,2) i=2")
    pg = build_projective(3, gf(2))
    incident = sum(1 for p in pg.masks(0) for w in pg.masks(2) if p & ~w == 0)
    assert rep.family_counts() == {"GrassmannLine": incident}
    for t in rep.blockers:
        subs = vertex_subspaces(geom, t)
        assert common_subspace(subs).dim == 1 and spanned_subspace(subs).dim == 3
    return f"{rep.total} pencils = {incident} incident point-plane pairs"


@criterion("A3", 30.0)
def a3():
    out = []
    for q in (2, 3):
        geom, _, rep = full_census(f"W(3,{q})")
        sp = geom.space
        s, t = sp.order
        hyp = O.hyperbolic_line_count(O.Polar("W", 3, q))
        assert rep.family_counts() == {"GrassmannLine": (1 + t) * (1 + s * t), "HyperbolicLineInResidue": hyp}
        for tr in members(rep, F.HyperbolicLineInResidue):
            h = hyperbolic_line(sp, tr[0], tr[1])
            assert h == mask_of(tr) and is_large_hyperbolic_line(sp, h)
        out.append(f"W(3,{q}): {rep.family_counts()}")
    return "; ".join(out)


@criterion("A4", 10.0)
def a4():
    geom, _, rep = full_census("Q(4,2) i=2")
    P = O.Polar("Q", 4, 2)
    want = {"DualPolarLine": len(P.pts), "DualHyperbolicLineInResidue": O.regulus_count(P)}
    assert rep.family_counts() == want
    regs = [w for w in rep.witnesses[F.DualHyperbolicLineInResidue]]
    assert len(regs) == want["DualHyperbolicLineInResidue"]
    assert all(w["transversals"] == 3 for w in regs)
    return f"{want}; every regulus has 3 transversals"


def naive_count(fam, n, q, i, m):
    _, _, _, rows = O.polar_geometry(fam, n, q, i)
    return len(O.naive_blockers(rows, len(rows), m))


@criterion("A5", 120.0)
def a5():
    geom, opp, rep = full_census("H(3,4) i=1")
    sp = geom.space
    s, t = sp.order
    total = naive_count("H", 3, 4, 1, 5)
    lines = (1 + t) * (1 + s * t)
    assert rep.family_counts() == {"GrassmannLine": lines, "GQOvoidInSubGQ": total - lines}
    gq = Quadrangle.of(sp)
    for w in rep.witnesses[F.GQOvoidInSubGQ]:
        assert w["subgq_order"] == [s // t, t]
        assert ovoid_profile(gq, w["members"]) == ({1}, {1 + t})
    return f"{rep.family_counts()}; ovoids in subGQs of order (2,2), profile 1 outside / 3 inside"


@criterion("A6", 120.0)
def a6():
    geom, _, rep = full_census("Q-(5,2) i=2")
    sp = geom.space
    total = naive_count("Q-", 5, 2, 2, 5)
    assert rep.size == sp.order[1] + 1
    assert rep.family_counts() == {"DualPolarLine": sp.n_points, "GQSpreadInSubGQ": total - sp.n_points}
    for t in members(rep, F.DualPolarLine):
        assert common_subspace(vertex_subspaces(geom, t)).dim == 1
    assert all(w["subgq_order"] == [2, 2] for w in rep.witnesses[F.GQSpreadInSubGQ])
    return f"{rep.family_counts()}; spreads in subGQs of order (2,2)"


@criterion("A7", 10.0)
def a7():
    out = []
    for cls in "AB":
        geom, _, rep = full_census(f"Q+(5,2) halfspin:{cls}")
        assert set(rep.families) == {F.HalfSpinLine}
        assert rep.blockers == sorted(geom.lines)
        for t in rep.blockers:
            assert common_subspace(vertex_subspaces(geom, t)).dim == geom.vertices[0].dim - 2
        out.append(f"{cls}: {rep.total} half-spin lines")
    geom, _, rep = full_census("Q+(5,2) i=1")
    assert rep.family_counts() == {"GrassmannLine": len(geom.space.lines)}
    out.append(f"points: {rep.total} lines only")
    return "; ".join(out)


A1_TO_A7 = ["PG(2,2)", "PG(2,3)", "PG(3,2) i=2", "W(3,2)", "W(3,3)", "Q(4,2) i=2", "H(3,4)",
            "Q-(5,2) i=2", "Q+(5,2) halfspin:A", "Q+(5,2) halfspin:B", "Q+(5,2)"]


@criterion("A8", 30.0)
def a8():
    for text in A1_TO_A7:
        geom, opp = parse_spec(text).build()
        res = verify_minimality(geom, opp)
        assert res["verified"] and res["max_size"] == geom.line_size - 1
    return f"{len(A1_TO_A7)} instances: every set of size <= s has a common opposite"


@criterion("A9", 600.0)
def a9():
    res_hyp = O.hyperbolic_line_count(O.Polar("W", 3, 2))
    res_reg = O.regulus_count(O.Polar("W", 3, 2))
    sp = polar_space("W", 5, gf(2))
    n_pts, n_lines, n_planes = sp.n_points, len(sp.lines), len(sp.singulars(2))
    out = []
    geom, _, rep = full_census("W(5,2) i=1")
    assert rep.family_counts() == {"GrassmannLine": n_lines,
                                   "HyperbolicLineInResidue": O.hyperbolic_line_count(O.Polar("W", 5, 2))}
    out.append(f"(a) {rep.family_counts()}")
    geom, _, rep = full_census("W(5,2) i=2")
    # one pencil per incident (point, plane) pair; residues of points are copies of W(3,2)
    assert rep.family_counts() == {"GrassmannLine": n_planes * 7, "HyperbolicLineInResidue": n_pts * res_hyp}
    for t in members(rep, F.HyperbolicLineInResidue):
        ok, u = is_hyperbolic_line_in_residue(geom, t)
        assert ok and u.dim == 1
    out.append(f"(b) {rep.family_counts()}")
    geom, _, rep = full_census("W(5,2) i=3")
    assert rep.family_counts() == {"DualPolarLine": n_lines, "DualHyperbolicLineInResidue": n_pts * res_reg}
    for t in members(rep, F.DualHyperbolicLineInResidue):
        ok, u = is_dual_hyperbolic_line_in_residue(geom, t)
        assert ok and u.dim == 1
    out.append(f"(c) {rep.family_counts()}")
    return "; ".join(out)


@criterion("A10", 300.0)
def a10():
    out = []
    for text in ("PG(3,2) i=1", "PG(3,2) i=2", "W(3,3)", "W(5,3)"):
        rep = run_census(CensusConfig(text, check_theorem_b=True, witness_cap=1))
        tb = rep.theorem_b
        assert rep.passed and tb["verdict"] == "pass" and not tb["exceptions"]
        assert tb["geometric_lines"] == rep.total
        out.append(f"{text}: {rep.total}/{rep.total} geometric lines")
    geom, opp, rep = full_census("H(3,4)", check_theorem_b=True)
    tb = rep.theorem_b
    assert tb["parity_condition_needed"] and tb["exceptions"] == {"GQOvoidInSubGQ": 216}
    for t in members(rep, F.GQOvoidInSubGQ):
        assert not is_geometric_line(geom, opp, t)
    for t in members(rep, F.GrassmannLine):
        assert is_geometric_line(geom, opp, t)
    out.append("H(3,4): 216 ovoids are not geometric lines")
    return "; ".join(out)


ORACLE_INSTANCES = {
    "PG(2,2)": ("PG", 2, 2, 0), "PG(2,3)": ("PG", 2, 3, 0), "PG(3,2)": ("PG", 3, 2, 0),
    "PG(3,2) i=2": ("PG", 3, 2, 1), "W(3,2)": ("W", 3, 2, 1), "W(3,3)": ("W", 3, 3, 1),
    "Q(4,2) i=2": ("Q", 4, 2, 2), "Q+(5,2)": ("Q+", 5, 2, 1), "Q+(5,2) halfspin:A": ("HS", 5, 2, 0),
    "Q+(5,2) halfspin:B": ("HS", 5, 2, 1), "W(5,2)": ("W", 5, 2, 1), "W(5,2) i=3": ("W", 5, 2, 3),
}
GLUE_SEED = 20240601


def _oracle_blockers(key, geom):
    fam, n, q, i = key
    if fam == "PG":
        verts, _, rows = O.projective_geometry(n, q, i)
    elif fam == "HS":
        _, verts, _, rows = O.half_spin_geometry(n, q, i)
    else:
        _, verts, _, rows = O.polar_geometry(fam, n, q, i)
    pts = geom.space.points
    ours = [frozenset(pts[b] for b in range(m.bit_length()) if m >> b & 1) for m in geom.vertex_masks]
    where = {v: k for k, v in enumerate(ours)}
    to_pkg = [where[v] for v in verts]
    n_obj = max(r.bit_length() for r in rows)
    return sorted(tuple(sorted(to_pkg[k] for k in b)) for b in O.naive_blockers(rows, n_obj, geom.line_size))


@criterion("A11", 600.0)
def a11():
    checked = 0
    for text, key in ORACLE_INSTANCES.items():
        spec = parse_spec(text)
        geom, opp = spec.build()
        m = geom.line_size
        if comb(geom.n_vertices, m) > 10 ** 6:
            continue
        rep = census(geom, opp, CensusConfig(spec), spec)
        pruned = repr(rep.blockers).encode()
        assert pruned == repr(naive_search(opp.rows, opp.n_objects, m)).encode(), text
        assert pruned == repr(_oracle_blockers(key, geom)).encode(), text
        checked += 1
    # local-to-global opposition through A and A^perp ∩ W
    rng = random.Random(GLUE_SEED)
    glued = 0
    for fam, n, q, d in (("W", 5, 2, 1), ("W", 5, 2, 2), ("Q+", 5, 2, 2), ("H", 5, 4, 1), ("W", 5, 3, 1)):
        sp = polar_space(fam, n, gf(q))
        subs = sp.singulars(d)
        for _ in range(40):
            u, w = rng.choice(subs), rng.choice(subs)
            for a in subspaces_within(u, d):
                r = lemma_glue_check(sp, u, w, a)
                if r is not None:
                    assert r == is_opposite_singular(sp, u, w)
                    glued += 1
    # perp is an involution on every subspace of a non-degenerate form; axiom and order audits
    spaces = [polar_space(*k[:2], gf(k[2])) for k in
              (("W", 3, 2), ("W", 3, 3), ("Q", 4, 3), ("Q+", 5, 2), ("Q-", 5, 2), ("H", 3, 4), ("W", 5, 2))]
    for sp in spaces:
        assert sp.form.is_nondegenerate()
        for d in range(sp.rank):
            for s in sp.singulars(d)[:200]:
                assert perp(sp.form, perp(sp.form, s)) == s
        assert audit_axioms(sp) == [] and audit_order(sp) == []
    # panel thickness: every line of a geometry has the same size
    for text in ORACLE_INSTANCES:
        geom, _ = parse_spec(text).build()
        assert len({len(L) for L in geom.lines}) == 1
    return (f"{checked} instances byte-identical to naive + independent enumeration; "
            f"{glued} glue checks (seed {GLUE_SEED}); {len(spaces)} spaces audited")


# -- drivers ----------------------------------------------------------------

def run_criterion(cid: str) -> tuple[bool, str]:
    fn, target = CRITERIA[cid]
    t0 = time.perf_counter()
    try:
        detail = fn()
        ok = True
    except AssertionError as e:
        detail, ok = f"assertion failed: {e}", False
    dt = time.perf_counter() - t0
    if ok and dt > target:
        ok, detail = False, f"too slow ({detail})"
    RESULTS[cid] = ("PASS" if ok else "FAIL", dt, target, detail)
    return ok, detail


def result_line(cid: str) -> str:
    status, dt, target, detail = RESULTS[cid]
    return f"{status} {cid} [{dt:.2f} s / target {target:g} s] {detail}"


@pytest.mark.parametrize("cid", list(CRITERIA))
def test_criterion(cid):
    ok, detail = run_criterion(cid)
    print(result_line(cid))
    assert ok, detail


STRETCH_BUDGET = 300.0


def a12() -> tuple[bool, str]:
    """Q-(7,2) generators, size 5, through vertex 0 under asserted vertex-transitivity."""
    rep = run_census(CensusConfig("Q-(7,2) i=3", first=0, assume_transitive=True,
                                  time_budget=STRETCH_BUDGET, witness_cap=ALL))
    if not rep.complete:
        return False, f"PARTIAL after {STRETCH_BUDGET:g} s: {rep.family_counts()} (restricted)"
    sp = polar_space("Q-", 7, gf(2))
    want = {"DualPolarLine": len(sp.lines)}
    got = rep.family_counts()
    spreads = got.get("SpreadInSubGQ", 0)
    ok = (rep.unclassified == 0 and set(got) == {"DualPolarLine", "SpreadInSubGQ"}
          and got["DualPolarLine"] == want["DualPolarLine"] and spreads > 0
          and all(w["subgq_order"] == [2, 2] for w in rep.witnesses[F.SpreadInSubGQ]))
    return ok, f"{got} (restricted {rep.search['restricted_counts']})"


def test_a12_stretch():
    t0 = time.perf_counter()
    ok, detail = a12()
    RESULTS["A12"] = ("PASS" if ok else "INCOMPLETE", time.perf_counter() - t0, STRETCH_BUDGET,
                      f"(stretch, non-blocking) {detail}")
    print(result_line("A12"))
    if not ok:
        pytest.xfail(detail)


if __name__ == "__main__":
    failed = 0
    for cid in CRITERIA:
        ok, _ = run_criterion(cid)
        failed += not ok
        print(result_line(cid), flush=True)
    if "--stretch" in sys.argv:
        t0 = time.perf_counter()
        ok, detail = a12()
        RESULTS["A12"] = ("PASS" if ok else "INCOMPLETE", time.perf_counter() - t0, STRETCH_BUDGET,
                          f"(stretch, non-blocking) {detail}")
        print(result_line("A12"))
    sys.exit(1 if failed else 0)
