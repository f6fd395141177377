"""Census of vertex sets without a common opposite, with theorem-level checks."""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from .catalog import EXCEPTIONAL, LABEL_ORDER, Catalog, FamilyLabel, is_geometric_line
from .forms import ELLIPTIC, HERMITIAN
from .geomspec import GeometrySpec, parse_spec
from .grassmann import DUAL_POLAR, POLAR, OppositionContext, PointLineGeometry
from .search import SearchResult, hitting_search

SCHEMA_VERSION = 1
DEFAULT_WITNESS_CAP = 64


class TheoremViolation(AssertionError):
    """A finding that contradicts a theorem being checked; carries the witness."""

    def __init__(self, msg: str, witness=None):
        super().__init__(msg if witness is None else f"{msg}: {list(witness)}")
        self.witness = witness


@dataclass
class CensusConfig:
    geometry: GeometrySpec | str
    size: int | None = None
    jobs: int = 1
    witness_cap: int = DEFAULT_WITNESS_CAP
    time_budget: float | None = None
    first: int | None = None
    assume_transitive: bool = False
    check_theorem_b: bool = False

    def spec(self) -> GeometrySpec:
        g = self.geometry
        return parse_spec(g) if isinstance(g, str) else g.validate()


@dataclass
class CensusReport:
    geometry: dict
    size: int
    families: dict[FamilyLabel, int]
    witnesses: dict[FamilyLabel, list[dict]]
    minimality: dict
    search: dict
    overlaps: dict[str, int] = field(default_factory=dict)
    theorem_b: dict | None = None
    timing: dict = field(default_factory=dict)
    blockers: list[tuple[int, ...]] = field(default_factory=list, repr=False)
    labels: list[FamilyLabel] = field(default_factory=list, repr=False)

    @property
    def total(self) -> int:
        return sum(self.families.values())

    @property
    def complete(self) -> bool:
        return self.search["complete"]

    @property
    def unclassified(self) -> int:
        return self.families.get(FamilyLabel.Unclassified, 0)

    @property
    def passed(self) -> bool:
        ok = self.complete and self.unclassified == 0 and self.minimality["verified"]
        if self.theorem_b is not None:
            ok = ok and self.theorem_b["verdict"] == "pass"
        return ok

    def family_counts(self) -> dict[str, int]:
        return {lab.value: self.families[lab] for lab in LABEL_ORDER if lab in self.families}

    def to_json(self, timing: bool = True) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "geometry": self.geometry,
            "size": self.size,
            "total": self.total,
            "families": [
                {"label": lab.value, "count": self.families[lab], "witnesses": self.witnesses[lab]}
                for lab in LABEL_ORDER if lab in self.families
            ],
            "theorem_a": {"unclassified": self.unclassified, "confirmed": self.unclassified == 0},
            "minimality": self.minimality,
            "label_overlaps": self.overlaps,
            "search": self.search,
            "passed": self.passed,
        }
        if self.theorem_b is not None:
            out["theorem_b"] = self.theorem_b
        if timing:
            out["timing"] = self.timing
        return out


def geometry_info(geom: PointLineGeometry, opp: OppositionContext, spec: GeometrySpec | None = None) -> dict:
    sp = geom.space
    info = {
        "spec": str(spec) if spec is not None else geom.describe(),
        "kind": geom.kind,
        "family": getattr(sp, "family", "PG"),
        "rank": getattr(sp, "rank", getattr(sp, "dim", None)),
        "q": sp.field.q,
        "type": geom.type_index,
        "n_vertices": geom.n_vertices,
        "n_objects": opp.n_objects,
        "line_size": geom.line_size,
    }
    if hasattr(sp, "rank"):
        info["order"] = list(sp.order)
    if geom.half_spin_class is not None:
        info["half_spin_class"] = "AB"[geom.half_spin_class]
    return info


def find_blockers(geom: PointLineGeometry, opp: OppositionContext, m: int, *, jobs: int = 1,
                  first: int | None = None, time_budget: float | None = None) -> SearchResult:
    """Every m-set of vertices with no common opposite, as sorted index tuples."""
    if len(opp.rows) != geom.n_vertices:
        raise ValueError("opposition rows do not match the vertex set")
    return hitting_search(opp.rows, opp.columns(), m, jobs=jobs, first=first,
                          time_budget=time_budget)


def common_opposites(opp: OppositionContext, t: Sequence[int]) -> int:
    s = (1 << opp.n_objects) - 1
    for v in t:
        s &= opp.rows[v]
    return s


def verify_minimality(geom: PointLineGeometry, opp: OppositionContext, s_line: int | None = None,
                      time_budget: float | None = None) -> dict:
    """Check that no set of at most s_line vertices lacks a common opposite."""
    if s_line is None:
        s_line = geom.line_size - 1
    res = hitting_search(opp.rows, opp.columns(), s_line, time_budget=time_budget)
    bad = sorted(set(res.blockers) | set(res.violations))
    if bad:
        raise TheoremViolation(f"a set of at most {s_line} vertices has no common opposite", bad[0])
    return {"verified": res.complete, "max_size": s_line, "nodes": res.nodes,
            "complete": res.complete}


def theorem_b_exception(geom: PointLineGeometry) -> bool:
    """Geometries where the parity condition of the geometric-line theorem is needed."""
    sp = geom.space
    if not hasattr(sp, "rank"):
        return False
    r = sp.rank
    small_hermitian = sp.kind == HERMITIAN and sp.n % 2 == 0
    if small_hermitian and geom.kind == POLAR and geom.type_index == r - 1:
        return True
    return sp.form.subkind == ELLIPTIC and geom.kind == DUAL_POLAR


def verify_theorem_b(geom: PointLineGeometry, opp: OppositionContext, report: CensusReport) -> dict:
    """Compare census witnesses with the geometric-line predicate."""
    s = geom.line_size - 1
    lifted = s % 2 == 1 or not theorem_b_exception(geom)
    exceptions: Counter = Counter()
    geometric = 0
    for t, lab in zip(report.blockers, report.labels):
        g = is_geometric_line(geom, opp, t)
        geometric += g
        if lifted or lab not in EXCEPTIONAL:
            if not g:
                raise TheoremViolation(f"{lab.value} witness is not a geometric line", t)
        else:
            if g:
                raise TheoremViolation(f"exceptional {lab.value} witness is a geometric line", t)
            exceptions[lab.value] += 1
    return {
        "verdict": "pass",
        "s": s,
        "parity_condition_needed": not lifted,
        "geometric_lines": geometric,
        "exceptions": dict(sorted(exceptions.items())),
    }


def census(geom: PointLineGeometry, opp: OppositionContext, config: CensusConfig,
           spec: GeometrySpec | None = None) -> CensusReport:
    m = config.size if config.size is not None else geom.line_size
    if m < 1:
        raise ValueError("set size must be positive")
    t0 = time.perf_counter()
    res = find_blockers(geom, opp, m, jobs=config.jobs, first=config.first,
                        time_budget=config.time_budget)
    t1 = time.perf_counter()
    for t in res.blockers:
        if common_opposites(opp, t):
            raise AssertionError(f"search returned a set with a common opposite: {t}")
    cat = Catalog(geom, opp)
    counts: Counter = Counter()
    witnesses: dict[FamilyLabel, list[dict]] = {}
    labels = []
    overlaps: Counter = Counter()
    for t in res.blockers:
        c = cat.classify(t)
        labels.append(c.label)
        counts[c.label] += 1
        fired = cat.matching(t)
        if len(fired) > 1:
            overlaps["+".join(lab.value for lab in fired)] += 1
        ws = witnesses.setdefault(c.label, [])
        if len(ws) < config.witness_cap:
            ws.append({"members": list(t), **c.witness})
    t2 = time.perf_counter()
    families = {lab: counts[lab] for lab in LABEL_ORDER if counts[lab]}
    search = {"strategy": res.strategy, "nodes": res.nodes, "complete": res.complete,
              "jobs": config.jobs}
    if config.first is not None:
        search["first_member"] = config.first
        search["assume_transitive"] = config.assume_transitive
        if config.assume_transitive:
            scaled = {}
            for lab, k in families.items():
                num = k * geom.n_vertices
                if num % m:
                    raise TheoremViolation(f"{lab.value}: count {k} is inconsistent with transitivity")
                scaled[lab.value] = num // m
            search["restricted_counts"] = {lab.value: k for lab, k in families.items()}
            families = {FamilyLabel(k): v for k, v in scaled.items()}
    if res.violations:
        minimality = {"verified": False, "violations": [list(v) for v in res.violations[:config.witness_cap]]}
    else:
        minimality = {"verified": res.complete, "max_size": m - 1}
    report = CensusReport(
        geometry=geometry_info(geom, opp, spec),
        size=m,
        families=families,
        witnesses={lab: witnesses.get(lab, []) for lab in families},
        minimality=minimality,
        search=search,
        overlaps=dict(sorted(overlaps.items())),
        timing={"search_s": round(t1 - t0, 3), "classify_s": round(t2 - t1, 3)},
        blockers=res.blockers,
        labels=labels,
    )
    if config.check_theorem_b:
        report.theorem_b = verify_theorem_b(geom, opp, report)
    return report


def run_census(config: CensusConfig) -> CensusReport:
    spec = config.spec()
    t0 = time.perf_counter()
    geom, opp = spec.build()
    build_s = time.perf_counter() - t0
    report = census(geom, opp, config, spec)
    report.timing["build_s"] = round(build_s, 3)
    return report
