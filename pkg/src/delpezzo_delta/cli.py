"""Command-line front end.

    delpezzo-delta list [PREFIX]
    delpezzo-delta run ID | --file PATH
    delpezzo-delta verify-all [--only PREFIX]
    delpezzo-delta export ID --format json|csv [--samples N]

Exit status: 0 when every selected check passes, 1 on any mismatch,
2 on usage errors, unknown ids and unparsable files.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import feasibility, scenarios
from .errors import DeltaError, ParseError, UnknownCase, ValidationError
from .lattice import format_rational as fr
from .volume import format_poly as render_poly

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def decimal(value: Fraction, digits: int) -> str:
    """Round half away from zero to ``digits`` places, exactly."""
    scaled = abs(value) * 10**digits
    whole, rest = divmod(scaled.numerator, scaled.denominator)
    if 2 * rest >= scaled.denominator:
        whole += 1
    text = str(whole).rjust(digits + 1, "0")
    body = text if digits == 0 else f"{text[:-digits]}.{text[-digits:]}"
    return ("-" if value < 0 and whole else "") + body


class Out:
    def __init__(self, stream, digits):
        self.stream = stream
        self.digits = digits

    def line(self, text=""):
        self.stream.write(text + "\n")

    def value(self, v: Fraction) -> str:
        if self.digits is None:
            return fr(v)
        return f"{fr(v)} [~{decimal(v, self.digits)}, decimal, non-authoritative]"


# ---------------------------------------------------------------- resolution

def _find(item_id):
    try:
        return "scenario", scenarios.get(item_id)
    except UnknownCase:
        pass
    try:
        return "case", feasibility.get_case(item_id)
    except UnknownCase:
        raise UsageError(f"unknown id {item_id!r}; see 'list'") from None


def _load_file(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from None
    if isinstance(doc, dict) and "constraints" in doc:
        return "case", feasibility.case_from_document(doc)
    return "scenario", scenarios.from_document(doc)


# ---------------------------------------------------------------- commands

def cmd_list(args, out: Out) -> int:
    prefix = args.prefix or ""
    items = [(s.id, s.lemma, "scenario") for s in scenarios.catalog()]
    items += [(c.id, c.lemma, "case") for c in feasibility.case_catalog()]
    items = sorted(i for i in items if i[0].startswith(prefix))
    if args.json:
        out.line(json.dumps([{"id": i, "lemma": l, "kind": k} for i, l, k in items], indent=2))
    else:
        for item_id, lemma, _ in items:
            out.line(f"{item_id} Lemma[{lemma}]")
    return OK


def _case_passed(report: feasibility.CaseReport) -> bool:
    return report.matches_expected and report.replayed and report.derived_checked


def _render_scenario(s, report: scenarios.Report, out: Out):
    out.line(f"scenario  {s.id}")
    out.line(f"lemma     {s.lemma}")
    out.line(f"mode      {s.mode}")
    out.line(f"degree    {fr(s.degree)}")
    if report.computed_vol is not None:
        pw = report.computed_vol
        out.line(f"volume    vol(A - x*{s.F})" + ("" if pw.complete else f", up to mu = {fr(pw.end)}"))
        for lo, hi, c0, c1, c2 in pw.rows():
            out.line(f"  [{fr(lo)}, {fr(hi)}]  {render_poly((c0, c1, c2))}")
    if s.mode == "full":
        if report.tau is not None:
            declared = "" if s.declared_tau is None else f" (declared {fr(s.declared_tau)})"
            out.line(f"tau       {out.value(report.tau)}{declared}")
    else:
        t = s.truncation
        out.line(f"mu        {fr(t.mu)}")
        if report.tau is not None:
            out.line(f"tau upper {out.value(report.tau)}")
        if report.head is not None:
            out.line(f"head      {out.value(report.head)}")
        if report.tail is not None:
            out.line(f"tail      {out.value(report.tail)} ({t.tail})")
    if report.computed_bound is not None:
        out.line(f"bound     {out.value(report.computed_bound)} (expected {fr(report.expected_bound)})")
    checks = ", ".join(f"{name} {'ok' if ok else 'FAIL'}" for name, ok in report.checks)
    out.line(f"checks    {checks}")
    if report.error:
        out.line(f"error     {report.error}")
    if report.errata:
        out.line("errata")
        for note in report.errata:
            out.line(f"  - {note}")
    else:
        out.line("errata    none")
    out.line(f"result    {'PASS' if report.matches_expected else 'FAIL'}")


def _render_case(report: feasibility.CaseReport, out: Out):
    cert = report.certificate
    out.line(f"case      {report.case_id}")
    out.line(f"lemma     {report.lemma}")
    out.line(f"verdict   {report.verdict} (expected {report.expected})")
    out.line(f"order     {', '.join(cert.order)}")
    if cert.infeasible:
        out.line(f"terminal  {cert.terminal_statement()}")
        out.line("combination")
        for m, tag in cert.used_constraints():
            out.line(f"  {fr(m)} x [{tag}]")
    else:
        out.line("witness")
        for var, value in cert.witness.items():
            out.line(f"  {var} = {out.value(value)}")
    out.line(f"replay    {'ok' if report.replayed else 'FAIL'}")
    out.line(f"derived   {'ok' if report.derived_checked else 'FAIL'}")
    out.line(f"result    {'PASS' if _case_passed(report) else 'FAIL'}")


def cmd_run(args, out: Out) -> int:
    if (args.id is None) == (args.file is None):
        raise UsageError("run needs exactly one of ID or --file")
    kind, item = _find(args.id) if args.id is not None else _load_file(args.file)
    if kind == "scenario":
        report = scenarios.run(item)
        passed = report.matches_expected
        if args.json:
            out.line(json.dumps(report.to_dict(), indent=2))
        else:
            _render_scenario(item, report, out)
    else:
        report = feasibility.verify(item)
        passed = _case_passed(report)
        if args.json:
            out.line(json.dumps(report.to_dict(), indent=2))
        else:
            _render_case(report, out)
    return OK if passed else FAILED


def _aggregates(selected_scen, reports, selected_cases, case_reports):
    """Aggregate checks for each family that is fully selected."""
    all_scen = scenarios.catalog()
    chosen = {s.id for s in selected_scen}
    rows = []

    def covers(pred):
        family = {s.id for s in all_scen if pred(s)}
        return family and family <= chosen

    if covers(scenarios.is_cubic_point_scenario):
        agg = scenarios.cubic_aggregate(reports, selected_scen)
        rows.append((agg.name, agg.passed, agg.detail))
    if covers(scenarios.is_dp1_scenario):
        agg = scenarios.dp1_aggregate(reports, selected_scen)
        rows.append((agg.name, agg.passed, agg.detail))
    branch_ids = {c.id for c in feasibility.case_catalog() if c.id.startswith("case")}
    picked = {r.case_id: r for r in case_reports}
    if branch_ids and branch_ids <= set(picked):
        ok = all(_case_passed(picked[i]) and picked[i].verdict == "infeasible" for i in branch_ids)
        rows.append((
            "cubic delta >= 6/5", ok,
            f"all {len(branch_ids)} case branches infeasible for lambda < 6/5",
        ))
    return rows


def cmd_verify_all(args, out: Out) -> int:
    prefix = args.only or ""
    selected_scen = [s for s in scenarios.catalog() if s.id.startswith(prefix)]
    selected_cases = [c for c in feasibility.case_catalog() if c.id.startswith(prefix)]
    if not selected_scen and not selected_cases:
        raise UsageError(f"no scenario or case id starts with {prefix!r}")
    reports = scenarios.run_all(selected_scen)
    case_reports = [feasibility.verify(c) for c in selected_cases]
    aggregates = _aggregates(selected_scen, reports, selected_cases, case_reports)
    results = [
        ("scenario", r.scenario_id, r.matches_expected,
         "bound " + (fr(r.computed_bound) if r.computed_bound is not None else "error")
         + (f" ({len(r.errata)} errata)" if r.errata else ""))
        for r in reports
    ]
    results += [("case", r.case_id, _case_passed(r), r.verdict) for r in case_reports]
    results += [("aggregate", name, ok, detail) for name, ok, detail in aggregates]
    failures = sum(not ok for _, _, ok, _ in results)
    if args.json:
        out.line(json.dumps({
            "results": [
                {"kind": kind, "id": item_id, "passed": ok, "detail": detail}
                for kind, item_id, ok, detail in results
            ],
            "passed": len(results) - failures,
            "failed": failures,
        }, indent=2))
    else:
        for kind, item_id, ok, detail in results:
            out.line(f"{'PASS' if ok else 'FAIL'}  {kind:<9} {item_id:<28} {detail}")
        out.line(f"{len(results) - failures} passed, {failures} failed")
    return OK if failures == 0 else FAILED


def _samples(pw, n):
    if n <= 0:
        return []
    if n == 1:
        return [(pw.start, pw(pw.start))]
    width = pw.end - pw.start
    xs = [pw.start + width * Fraction(k, n - 1) for k in range(n)]
    return [(x, pw(x)) for x in xs]


def cmd_export(args, out: Out) -> int:
    if args.samples < 0:
        raise UsageError("--samples must be >= 0")
    try:
        s = scenarios.get(args.id)
    except UnknownCase:
        raise UsageError(f"unknown scenario {args.id!r}") from None
    report = scenarios.run(s)
    pw = report.computed_vol
    if pw is None:
        out.line(f"error: {report.error}")
        return FAILED
    samples = _samples(pw, args.samples)
    if args.format == "json":
        doc = {
            "id": s.id,
            "F": s.F,
            "complete": pw.complete,
            "pieces": [
                dict(zip(("x_from", "x_to", "c0", "c1", "c2"), map(fr, row))) for row in pw.rows()
            ],
        }
        if samples:
            doc["samples"] = [{"x": fr(x), "vol": fr(v)} for x, v in samples]
        out.line(json.dumps(doc, indent=2))
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["x_from", "x_to", "c0", "c1", "c2"])
        writer.writerows([list(map(fr, row)) for row in pw.rows()])
        if samples:
            writer.writerow([])
            writer.writerow(["x", "vol"])
            writer.writerows([[fr(x), fr(v)] for x, v in samples])
        out.stream.write(buf.getvalue())
    return OK


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable JSON output")
    common.add_argument("--decimal", type=int, metavar="K", default=argparse.SUPPRESS,
                        help="add K-digit decimal approximations (non-authoritative)")
    parser = argparse.ArgumentParser(
        prog="delpezzo-delta", parents=[common],
        description="Exact checks of expected vanishing orders and delta bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("list", parents=[common], help="list scenario and case ids")
    p.add_argument("prefix", nargs="?", default="")
    p.set_defaults(func=cmd_list)
    p = sub.add_parser("run", parents=[common], help="run one scenario or case")
    p.add_argument("id", nargs="?")
    p.add_argument("--file", type=Path)
    p.set_defaults(func=cmd_run)
    p = sub.add_parser("verify-all", parents=[common], help="run every scenario and case")
    p.add_argument("--only", metavar="PREFIX")
    p.set_defaults(func=cmd_verify_all)
    p = sub.add_parser("export", parents=[common], help="export a volume table")
    p.add_argument("id")
    p.add_argument("--format", choices=("json", "csv"), default="csv")
    p.add_argument("--samples", type=int, default=0, metavar="N")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    args.json = getattr(args, "json", False)
    digits = getattr(args, "decimal", None)
    if digits is not None and digits < 0:
        stderr.write("error: --decimal must be >= 0\n")
        return USAGE
    if args.json and args.command == "export":
        args.format = "json"
    out = Out(stdout, digits)
    try:
        return args.func(args, out)
    except UsageError as exc:
        stderr.write(f"error: {exc}\n")
        return USAGE
    except ParseError as exc:
        stderr.write(f"parse error: {exc}\n")
        return USAGE
    except ValidationError as exc:
        stderr.write(f"invalid document: {exc}\n")
        return FAILED
    except DeltaError as exc:
        stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return FAILED


if __name__ == "__main__":
    raise SystemExit(main())
