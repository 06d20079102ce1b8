"""Command-line interface: ``flagorient <command> ...``.

Exit codes: 0 success, 1 usage/parse error, 2 verification mismatch,
3 Weyl-group size guard tripped.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Sequence

from . import __version__
from .classical import cross_validate, orientable_closed_form, parse_flag_dims, dims_to_theta, published_closed_form
from .orientability import (
    STABLE,
    UNSTABLE,
    BundleQuery,
    ChamberElement,
    OrientabilityReport,
    bundle_orientable,
    fixed_components_scan,
    flag_orientable,
    flag_orientable_full,
)
from .rootsys import (
    DEFAULT_WEYL_LIMIT,
    ParabolicSubset,
    RootSystem,
    RootSystemError,
    WeylElement,
    WeylLimitError,
    WeylWord,
    build_root_system,
    format_coeffs,
    longest_element,
    parse_type,
    parse_word,
    weyl_enumerate,
    weyl_order,
)
from .tables import reproduce_tables

SCHEMA_VERSION = "1.0"
CACHE_ENV = "FLAGORIENT_CACHE"
CACHE_MAX_RANK = 6

EXIT_OK, EXIT_PARSE, EXIT_MISMATCH, EXIT_LIMIT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # usage errors exit with 1, not argparse's 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------- parsing


def parse_theta(text: str, rank: int) -> ParabolicSubset:
    """``""`` is the empty set, ``all`` is every simple root, else 1-based indices."""
    text = text.strip()
    if text.lower() == "all":
        return ParabolicSubset(frozenset(range(1, rank + 1)))
    out = set()
    for part in filter(None, (p.strip() for p in text.split(","))):
        if not part.isdigit():
            raise RootSystemError(f"bad Theta entry {part!r} in {text!r}")
        out.add(int(part))
    return ParabolicSubset(frozenset(out)).validate(rank)


def parse_sign(text: str) -> str:
    table = {"-": STABLE, STABLE: STABLE, "+": UNSTABLE, UNSTABLE: UNSTABLE}
    if text not in table:
        raise RootSystemError(f"bad sign {text!r}; use + / - / stable / unstable")
    return table[text]


# ---------------------------------------------------------------- Weyl cache


def cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or Path.home() / ".cache"
    return Path(base) / "flagorient"


def cached_weyl_group(rs: RootSystem, limit: int, use_cache: bool = True) -> list[WeylElement]:
    """Enumerate W, memoizing groups of rank <= 6 as JSON keyed by type name.

    A cache file is used only if its element count equals |W|; anything else
    is treated as stale and rebuilt.
    """
    order = weyl_order(rs)
    if order > limit:
        raise WeylLimitError(order, limit, rs.type_name)
    if not use_cache or rs.rank > CACHE_MAX_RANK:
        return weyl_enumerate(rs, limit)
    path = cache_dir() / f"weyl-{rs.type_name}.json"
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
        if data.get("type") == rs.type_name and data.get("order") == order and len(data["elements"]) == order:
            return [
                WeylElement(WeylWord(tuple(word)), tuple(tuple(img) for img in images))
                for word, images in data["elements"]
            ]
    except (OSError, ValueError, KeyError, TypeError):
        pass
    elements = weyl_enumerate(rs, limit)
    payload = {
        "type": rs.type_name,
        "order": order,
        "elements": [[list(e.word.letters), [list(i) for i in e.images]] for e in elements],
    }
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(payload, separators=(",", ":")), encoding="utf-8")
        tmp.replace(path)
    except OSError:
        pass  # an unwritable cache only costs time
    return elements


# ---------------------------------------------------------------- payloads


class Timer:
    def __init__(self) -> None:
        self.phases: dict[str, float] = {}

    @contextmanager
    def phase(self, name: str) -> Iterator[None]:
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.phases[name] = round(time.perf_counter() - t0, 6)


def _sums_text(report: OrientabilityReport) -> str:
    return ";".join(f"{a}:{s}" for a, s in sorted(report.sums.items()))


def _report_payload(rs: RootSystem, report: OrientabilityReport) -> dict:
    d = report.to_dict()
    d["checked_roots"] = [format_coeffs(r.coeffs) for r in report.checked_roots]
    return d


def _csv(header: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _flag_row(theta: ParabolicSubset, report: OrientabilityReport) -> list:
    return [theta.mask, str(report.orientable).lower(), ";".join(map(str, report.failing)), _sums_text(report)]


FLAG_COLUMNS = ("theta_mask", "orientable", "failing_alphas", "sums")


# ---------------------------------------------------------------- commands


def cmd_orient_flag(args, timer: Timer) -> tuple[dict, dict, int]:
    with timer.phase("build"):
        rs = build_root_system(parse_type(args.type))
        theta = parse_theta(args.theta, rs.rank)
    with timer.phase("check"):
        report = flag_orientable(rs, theta, args.variant)
    query = {"command": "orient flag", "type": rs.token, "theta": sorted(theta), "variant": args.variant}
    result = {"theta": str(theta), "theta_mask": theta.mask, **_report_payload(rs, report)}
    result["_csv"] = (FLAG_COLUMNS, [_flag_row(theta, report)])
    return query, result, EXIT_OK


def cmd_orient_bundle(args, timer: Timer) -> tuple[dict, dict, int]:
    with timer.phase("build"):
        rs = build_root_system(parse_type(args.type))
        theta = parse_theta(args.theta, rs.rank)
        H = ChamberElement.parse(args.H).validate(rs.rank)
        sign = parse_sign(args.sign)
    query = {"command": "orient bundle", "type": rs.token, "theta": sorted(theta),
             "H": [str(v) for v in H.values], "sign": sign}
    if args.scan_w:
        query["w"] = "scan"
        with timer.phase("weyl"):
            elements = cached_weyl_group(rs, args.weyl_limit, not args.no_cache)
        with timer.phase("scan"):
            comps = fixed_components_scan(rs, theta, H, args.weyl_limit, elements)
        rows = []
        for c in comps:
            chosen = c.stable if sign == STABLE else c.unstable
            rows.append({
                "w": str(c.word),
                "orientable": chosen.orientable,
                "fiber_dimension": chosen.fiber_dimension,
                "stable_dimension": c.stable_dimension,
                "unstable_dimension": c.unstable_dimension,
                "stable_orientable": c.stable.orientable,
                "unstable_orientable": c.unstable.orientable,
                "sums": {str(k): v for k, v in sorted(chosen.sums.items())},
                "roots": [format_coeffs(r.coeffs) for r in chosen.checked_roots],
            })
        result = {
            "checked_alphas": sorted(H.theta),
            "components": rows,
            "all_orientable": all(r["orientable"] for r in rows),
            "non_orientable_w": [r["w"] for r in rows if not r["orientable"]],
        }
        header = ("w", "orientable", "fiber_dimension", "stable_dimension", "unstable_dimension", "sums")
        result["_csv"] = (header, [
            [r["w"], str(r["orientable"]).lower(), r["fiber_dimension"], r["stable_dimension"],
             r["unstable_dimension"], ";".join(f"{k}:{v}" for k, v in r["sums"].items())] for r in rows
        ])
        return query, result, EXIT_OK
    with timer.phase("word"):
        w = longest_element(rs) if args.w.strip() == "longest" else parse_word(args.w).validate(rs.rank)
    query["w"] = str(w)
    with timer.phase("check"):
        report = bundle_orientable(rs, BundleQuery(theta, H, w, sign))
    result = {"w": str(w), "checked_alphas": sorted(H.theta), **_report_payload(rs, report)}
    result["_csv"] = (FLAG_COLUMNS, [_flag_row(theta, report)])
    return query, result, EXIT_OK


def cmd_scan(args, timer: Timer) -> tuple[dict, dict, int]:
    with timer.phase("build"):
        rs = build_root_system(parse_type(args.type))
    if rs.rank > args.max_rank:
        raise RootSystemError(f"scan of rank {rs.rank} needs 2^{rs.rank} rows; raise --max-rank to allow it")
    rows = []
    with timer.phase("scan"):
        for mask in range(1 << rs.rank):
            theta = ParabolicSubset.from_mask(mask, rs.rank)
            rows.append((theta, flag_orientable(rs, theta, args.variant)))
    query = {"command": "scan", "type": rs.token, "variant": args.variant}
    result = {
        "rows": [
            {"theta_mask": t.mask, "theta": sorted(t), "orientable": r.orientable, "failing_alphas": list(r.failing),
             "sums": {str(k): v for k, v in sorted(r.sums.items())}}
            for t, r in rows
        ],
        "orientable_count": sum(r.orientable for _, r in rows),
    }
    result["_csv"] = (FLAG_COLUMNS, [_flag_row(t, r) for t, r in rows])
    return query, result, EXIT_OK


def cmd_tables(args, timer: Timer) -> tuple[dict, dict, int]:
    sigmas = None
    if args.sigma:
        sigmas = [s.strip() for chunk in args.sigma for s in chunk.split(",") if s.strip()]
        for s in sigmas:
            parse_type(s)
    with timer.phase("tables"):
        report = reproduce_tables(sigmas)
    if sigmas is not None and not report.rows and not report.census:
        raise RootSystemError(f"no golden table entries for {', '.join(sigmas)}")
    query = {"command": "tables", "sigma": sigmas or "all"}
    result = report.to_dict()
    header = ("key", "sigma", "delta_type", "alpha", "delta_link", "expected", "computed", "status")
    result["_csv"] = (header, [
        [r.key, r.sigma, r.delta_type, r.alpha, r.delta_link if r.delta_link else "",
         ";".join(map(str, r.expected)), r.computed, r.status] for r in report.rows
    ])
    return query, result, EXIT_OK if report.ok else EXIT_MISMATCH


def cmd_classical(args, timer: Timer) -> tuple[dict, dict, int]:
    with timer.phase("parse"):
        fd = parse_flag_dims(args.token)
        theta = dims_to_theta(fd)
    with timer.phase("closed_form"):
        closed = orientable_closed_form(fd)
    query = {"command": "classical", "flag": str(fd), "verify": args.verify}
    result = {
        "flag": str(fd),
        "theta": sorted(theta),
        "theta_mask": theta.mask,
        "orientable": closed,
        "published_rule": published_closed_form(fd),
    }
    code = EXIT_OK
    if args.verify:
        with timer.phase("verify"):
            general = flag_orientable_full(build_root_system(fd.type_name), theta)
        result["general_criterion"] = general.orientable
        result["agree"] = general.orientable == closed
        result["sums"] = {str(k): v for k, v in sorted(general.sums.items())}
        if not result["agree"]:
            code = EXIT_MISMATCH
    if args.cross_validate:
        with timer.phase("cross_validate"):
            bad = cross_validate(fd.family, fd.l)
        result["cross_validate"] = [d.to_dict() for d in bad]
        if bad:
            code = EXIT_MISMATCH
    header = ("flag", "theta_mask", "orientable", "general_criterion")
    result["_csv"] = (header, [[str(fd), theta.mask, str(closed).lower(),
                                str(result.get("general_criterion", "")).lower()]])
    return query, result, code


# ---------------------------------------------------------------- rendering


def _text(query: dict, result: dict) -> str:
    cmd = query["command"]
    lines = []
    if cmd in ("orient flag", "orient bundle") and "components" not in result:
        verdict = "orientable" if result["orientable"] else "NOT orientable"
        head = f"{query['type']} Theta={result.get('theta', set(query['theta']) or '{}')}"
        if cmd == "orient bundle":
            head += f" H=({','.join(query['H'])}) w={result['w']} sign={query['sign']}"
        lines.append(f"{head}: {verdict}" + (" (vacuous)" if result["vacuous"] else ""))
        lines.append(f"  criterion: {result['criterion']}  fiber dimension: {result['fiber_dimension']}")
        for a, s in result["sums"].items():
            lines.append(f"  alpha_{a}: sum = {s}" + ("  (odd)" if s % 2 else ""))
        if cmd == "orient bundle":
            lines.append(f"  roots: {', '.join(result['checked_roots']) or '-'}")
    elif "components" in result:
        lines.append(f"{query['type']} Theta={{{','.join(map(str, query['theta']))}}} "
                     f"H=({','.join(query['H'])}) sign={query['sign']}: {len(result['components'])} components")
        for c in result["components"]:
            lines.append(f"  w={c['w']:<12} dim={c['fiber_dimension']}  "
                         f"{'orientable' if c['orientable'] else 'NOT orientable'}  sums={c['sums']}")
    elif cmd == "scan":
        lines.append(f"{query['type']}: {result['orientable_count']}/{len(result['rows'])} orientable")
        for r in result["rows"]:
            theta = "{" + ",".join(map(str, r["theta"])) + "}"
            lines.append(f"  {r['theta_mask']:>4} {theta:<20} {'yes' if r['orientable'] else 'no ':<4} "
                         f"failing={r['failing_alphas']}")
    elif cmd == "tables":
        for r in result["rows"]:
            lines.append(f"  {r['key']:<36} expected {r['expected']} computed {r['computed']:>4}  {r['status']}")
        for c in result["table1"]:
            lines.append(f"  subdiagrams of {c['sigma']}: {c['found']}  {c['status']}")
        for k, m in result["attachment_maps"].items():
            lines.append(f"  attachments {k}: {m}")
        lines.append("all rows reproduced" if result["ok"] else f"MISMATCH: {', '.join(result['mismatch_keys'])}")
    elif cmd == "classical":
        lines.append(f"{result['flag']} (Theta={set(result['theta']) or '{}'}): "
                     f"{'orientable' if result['orientable'] else 'NOT orientable'}")
        if "general_criterion" in result:
            lines.append(f"  general criterion: {result['general_criterion']}  agree: {result['agree']}")
        if "cross_validate" in result:
            lines.append(f"  cross-validation discrepancies: {len(result['cross_validate'])}")
    return "\n".join(lines) + "\n"


def render(fmt: str, query: dict, result: dict, timings: dict) -> str:
    csv_spec = result.pop("_csv", None)
    if fmt == "json":
        env = {"schema_version": SCHEMA_VERSION, "query": query, "result": result, "timings": timings}
        return json.dumps(env, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        header, rows = csv_spec
        return _csv(header, rows)
    return _text(query, result)


# ---------------------------------------------------------------- argparse


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--weyl-limit", type=int, default=DEFAULT_WEYL_LIMIT,
                        help="refuse to enumerate Weyl groups larger than this")
    common.add_argument("--no-cache", action="store_true", help=f"ignore the ${CACHE_ENV} Weyl-group cache")

    p = _Parser(prog="flagorient", description="Orientability of real flag manifolds and their bundles.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    orient = sub.add_parser("orient", help="single orientability checks")
    osub = orient.add_subparsers(dest="what", required=True, parser_class=_Parser)
    flag = osub.add_parser("flag", parents=[common], help="orientability of F_Theta")
    flag.add_argument("--type", required=True, help="e.g. A3, B4:complex, BC2:mult=1,1,1")
    flag.add_argument("--theta", required=True, help='"" (empty), "all", or 1-based indices like 1,3')
    flag.add_argument("--variant", choices=("full", "reduced"), default="full")
    flag.set_defaults(func=cmd_orient_flag)

    bundle = osub.add_parser("bundle", parents=[common], help="stable/unstable bundle over a fixed-point component")
    bundle.add_argument("--type", required=True)
    bundle.add_argument("--theta", required=True)
    bundle.add_argument("--H", required=True, help="nonnegative rationals alpha_i(H), e.g. 3,0 or 1/2,1")
    bundle.add_argument("--w", default="", help='Weyl word like s1.s2, "" for identity, or "longest"')
    bundle.add_argument("--sign", default="-", help="- / stable or + / unstable")
    bundle.add_argument("--scan-w", action="store_true", help="scan every w in W (one row per component)")
    bundle.set_defaults(func=cmd_orient_bundle)

    scan = sub.add_parser("scan", parents=[common], help="verdict for every Theta")
    scan.add_argument("--type", required=True)
    scan.add_argument("--variant", choices=("full", "reduced"), default="full")
    scan.add_argument("--max-rank", type=int, default=10)
    scan.set_defaults(func=cmd_scan)

    tables = sub.add_parser("tables", parents=[common], help="reproduce the subdiagram contribution tables")
    tables.add_argument("--sigma", action="append", help="restrict to these ambient types (comma list, repeatable)")
    tables.set_defaults(func=cmd_tables)

    classical = sub.add_parser("classical", parents=[common], help="closed-form rule for classical flags")
    classical.add_argument("token", help="e.g. A4:2, B3:1,3, D5:2,l+,l-")
    classical.add_argument("--verify", action="store_true", help="compare with the general root criterion")
    classical.add_argument("--cross-validate", action="store_true",
                           help="compare every flag type of the family up to this rank")
    classical.set_defaults(func=cmd_classical)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    timer = Timer()
    try:
        query, result, code = args.func(args, timer)
    except WeylLimitError as exc:
        print(f"flagorient: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except RootSystemError as exc:
        print(f"flagorient: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    sys.stdout.write(render(args.format, query, result, timer.phases))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
