"""Command-line driver: build, census, classify, verify-suite, cache ls|rm.

Exit codes: 0 pass, 1 theorem violation or suite mismatch, 2 usage error,
3 time budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import __version__, cache
from .catalog import Catalog, FamilyLabel
from .census import CensusConfig, TheoremViolation, census
from .geomspec import GeometrySpec, SpecError, parse_spec

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
DEFAULT_VERTEX_LIMIT = 10 ** 5


class UsageError(Exception):
    pass


class OverLimit(UsageError):
    pass


def resolve_spec(text: str, type_index: int | None = None) -> GeometrySpec:
    spec = parse_spec(text)
    if type_index is not None:
        if spec.i is not None and spec.i != type_index:
            raise UsageError(f"--type {type_index} contradicts i={spec.i} in {text!r}")
        if spec.halfspin is not None:
            raise UsageError("--type cannot be combined with halfspin:")
        spec = spec.with_type(type_index).validate()
    return spec


def guard(spec: GeometrySpec, limit: int) -> int:
    est = spec.estimate_vertices()
    if est > limit:
        raise OverLimit(f"{spec}: estimated {est} vertices exceeds the limit {limit}")
    return est


def _cache_dir(args) -> Path | None:
    if getattr(args, "no_cache", False):
        return None
    return Path(args.cache) if args.cache else cache.default_cache_dir()


def report_csv(report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["family", "count"])
    for lab, k in report.family_counts().items():
        w.writerow([lab, k])
    return buf.getvalue()


def write_report(report, out: str | None, timing: bool = True) -> None:
    text = json.dumps(report.to_json(timing=timing), indent=2, sort_keys=False) + "\n"
    if out is None:
        sys.stdout.write(text)
        return
    base = Path(out)
    if base.suffix == ".json":
        base = base.with_suffix("")
    base.parent.mkdir(parents=True, exist_ok=True)
    base.with_suffix(".json").write_text(text, encoding="utf-8")
    base.with_suffix(".csv").write_text(report_csv(report), encoding="utf-8")


def _summary(report) -> str:
    fams = ", ".join(f"{k}:{v}" for k, v in report.family_counts().items()) or "none"
    status = "PASS" if report.passed else ("PARTIAL" if not report.complete else "FAIL")
    return f"{status} {report.geometry['spec']} size={report.size} families {fams}"


# -- subcommands ------------------------------------------------------------

def cmd_build(args) -> int:
    spec = resolve_spec(args.spec, args.type)
    est = guard(spec, args.max_vertices)
    d = _cache_dir(args)
    t0 = time.perf_counter()
    geom, opp, hit = cache.load_or_build(spec, d)
    info = {"spec": str(spec), "estimated_vertices": est, "vertices": geom.n_vertices,
            "lines": len(geom.lines), "line_size": geom.line_size, "objects": opp.n_objects,
            "cached": hit, "seconds": round(time.perf_counter() - t0, 3)}
    sp = geom.space
    if hasattr(sp, "rank"):
        info.update(points=sp.n_points, rank=sp.rank, order=list(sp.order))
    if d is not None:
        info["cache_file"] = str(d / cache.cache_key(spec))
    print(json.dumps(info, sort_keys=True))
    return EXIT_OK


def run_one(spec: GeometrySpec, cfg: CensusConfig, cache_dir: Path | None, limit: int):
    guard(spec, limit)
    t0 = time.perf_counter()
    geom, opp, _ = cache.load_or_build(spec, cache_dir)
    build_s = time.perf_counter() - t0
    report = census(geom, opp, cfg, spec)
    report.timing["build_s"] = round(build_s, 3)
    return report


def cmd_census(args) -> int:
    spec = resolve_spec(args.spec, args.type)
    if args.assume_transitive and args.first is None:
        raise UsageError("--assume-transitive needs --first")
    cfg = CensusConfig(spec, size=args.size, jobs=args.jobs, witness_cap=args.witness_cap,
                       time_budget=args.time_budget, first=args.first,
                       assume_transitive=args.assume_transitive,
                       check_theorem_b=args.check_theorem_b)
    try:
        report = run_one(spec, cfg, _cache_dir(args), args.max_vertices)
    except TheoremViolation as e:
        print(f"THEOREM VIOLATION: {e}", file=sys.stderr)
        return EXIT_VIOLATION
    write_report(report, args.out)
    print(_summary(report), file=sys.stderr)
    if not report.complete:
        return EXIT_BUDGET
    return EXIT_OK if report.passed else EXIT_VIOLATION


def cmd_classify(args) -> int:
    spec = resolve_spec(args.spec, args.type)
    guard(spec, args.max_vertices)
    geom, opp, _ = cache.load_or_build(spec, _cache_dir(args))
    try:
        members = sorted({int(x) for x in args.members.split(",") if x.strip()})
    except ValueError:
        raise UsageError("--members takes comma-separated vertex indices") from None
    if not members or members[-1] >= geom.n_vertices:
        raise UsageError(f"vertex indices must lie in 0..{geom.n_vertices - 1}")
    cat = Catalog(geom, opp)
    c = cat.classify(members)
    full = (1 << opp.n_objects) - 1
    for v in members:
        full &= opp.rows[v]
    out = {"spec": str(spec), "members": members, "label": c.label.value, "witness": c.witness,
           "common_opposites": full.bit_count(),
           "matching": [lab.value for lab in cat.matching(members)]}
    print(json.dumps(out, sort_keys=True))
    return EXIT_OK


def load_manifest(path: str) -> list[dict]:
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    entries = data.get("instance", [])
    for e in entries:
        if "geometry" not in e:
            raise UsageError(f"manifest entry {e.get('id', '?')} has no geometry")
    return entries


def check_entry(entry: dict, report) -> list[str]:
    """Mismatches between a census report and the manifest expectation."""
    problems = []
    got = report.family_counts()
    want = entry.get("families")
    if want is not None:
        for lab in want:
            if lab not in FamilyLabel.__members__:
                problems.append(f"unknown family {lab!r} in manifest")
        extra = sorted(set(got) - set(want))
        if extra:
            problems.append(f"unexpected families {extra}")
        for lab, k in want.items():
            if lab not in got:
                problems.append(f"missing family {lab}")
            elif k is not True and got[lab] != k:
                problems.append(f"{lab}: expected {k}, found {got[lab]}")
    if "total" in entry and report.total != entry["total"]:
        problems.append(f"total: expected {entry['total']}, found {report.total}")
    if report.complete and not report.minimality.get("verified"):
        problems.append("minimality not verified")
    if report.unclassified:
        problems.append(f"{report.unclassified} unclassified blockers")
    if not report.complete:
        problems.append("search incomplete (time budget)")
    return problems


def cmd_verify_suite(args) -> int:
    entries = load_manifest(args.manifest)
    results = []
    ok_all = True
    budget_hit = False
    for e in entries:
        ident = e.get("id", e["geometry"])
        row = {"id": ident, "geometry": e["geometry"]}
        try:
            spec = resolve_spec(e["geometry"], e.get("type"))
            cfg = CensusConfig(spec, size=e.get("size"), jobs=args.jobs,
                               witness_cap=args.witness_cap,
                               time_budget=e.get("time_budget", args.time_budget),
                               first=e.get("first"), assume_transitive=e.get("assume_transitive", False),
                               check_theorem_b=e.get("theorem_b", False))
            t0 = time.perf_counter()
            report = run_one(spec, cfg, _cache_dir(args), args.max_vertices)
            row["seconds"] = round(time.perf_counter() - t0, 3)
            row["families"] = report.family_counts()
            problems = check_entry(e, report)
            if report.theorem_b is not None:
                row["theorem_b"] = report.theorem_b
            budget_hit = budget_hit or not report.complete
        except OverLimit as exc:
            problems = [f"refused: {exc}"]
        except (SpecError, UsageError, TheoremViolation) as exc:
            problems = [str(exc)]
        row["pass"] = not problems
        row["problems"] = problems
        ok_all = ok_all and not problems
        results.append(row)
        mark = "PASS" if not problems else "FAIL"
        print(f"{mark} {ident}: {e['geometry']} " + ("; ".join(problems) if problems else
                                                      ", ".join(f"{k}:{v}" for k, v in row["families"].items())))
    summary = {"schema_version": 1, "manifest": str(args.manifest), "passed": ok_all,
               "n_instances": len(results), "results": results}
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")
    if ok_all:
        return EXIT_OK
    return EXIT_BUDGET if budget_hit and all(
        r["pass"] or r["problems"] == ["search incomplete (time budget)"] for r in results) else EXIT_VIOLATION


def cmd_cache(args) -> int:
    d = _cache_dir(args) or cache.default_cache_dir()
    if args.action == "ls":
        for name, meta, size in cache.list_entries(d):
            print(f"{meta.get('spec', '?'):28s} {size:>10d}  {name}")
        return EXIT_OK
    removed = 0
    targets = {str(parse_spec(t).normalized()) for t in args.specs}
    for name, meta, _ in cache.list_entries(d):
        if not targets or meta.get("spec") in targets:
            (d / name).unlink()
            removed += 1
    print(f"removed {removed} entries from {d}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="liecensus", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache", metavar="DIR",
                        help=f"cache directory (default ${cache.ENV_VAR} or ~/.cache/liecensus)")
    common.add_argument("--no-cache", action="store_true", help="neither read nor write the cache")
    common.add_argument("--max-vertices", type=int, default=DEFAULT_VERTEX_LIMIT,
                        help="refuse geometries with more estimated vertices")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", parents=[common], help="build a geometry into the cache")
    b.add_argument("spec")
    b.add_argument("--type", type=int)
    b.set_defaults(func=cmd_build)

    c = sub.add_parser("census", parents=[common], help="classify all blocking sets of a given size")
    c.add_argument("spec")
    c.add_argument("--type", type=int)
    c.add_argument("--size", type=int, help="set size (default: points per line)")
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--witness-cap", type=int, default=64)
    c.add_argument("--check-theorem-b", action="store_true")
    c.add_argument("--out", help="write OUT.json and OUT.csv instead of printing JSON")
    c.add_argument("--time-budget", type=float)
    c.add_argument("--first", type=int, help="only sets containing this vertex")
    c.add_argument("--assume-transitive", action="store_true",
                   help="scale --first counts to full counts (operator asserts a vertex-transitive group)")
    c.set_defaults(func=cmd_census)

    k = sub.add_parser("classify", parents=[common], help="label one vertex set")
    k.add_argument("spec")
    k.add_argument("--type", type=int)
    k.add_argument("--members", required=True, help="comma-separated vertex indices")
    k.set_defaults(func=cmd_classify)

    v = sub.add_parser("verify-suite", parents=[common], help="run every census in a manifest")
    v.add_argument("manifest")
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--witness-cap", type=int, default=8)
    v.add_argument("--time-budget", type=float)
    v.add_argument("--out", help="write the JSON summary here")
    v.set_defaults(func=cmd_verify_suite)

    ca = sub.add_parser("cache", parents=[common], help="list or remove cache entries")
    ca.add_argument("action", choices=["ls", "rm"])
    ca.add_argument("specs", nargs="*", help="geometries to remove (default: all)")
    ca.set_defaults(func=cmd_cache)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SpecError, UsageError, FileNotFoundError, tomllib.TOMLDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except cache.CacheError as e:
        print(f"cache error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
