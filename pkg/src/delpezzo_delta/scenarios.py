"""Scenario catalog: curve configurations with the values they should reproduce.

Each scenario is a JSON document (see ``data/scenarios``) holding a curve
system, the curve ``F`` whose expected vanishing order is bounded, the
tables and constants printed for it, and either ``full`` mode (integrate
to the threshold) or ``truncated`` mode (integrate to ``mu`` and bound
the tail through a nef class).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

from .errors import DeltaError, ParseError, UnknownCase, ValidationError
from .lattice import (
    CurveSystem,
    DivisorClass,
    check_decomposition,
    format_rational,
    pair,
    pair_curve,
    to_rational,
)
from .volume import (
    TAIL_BOUNDS,
    PiecewisePoly,
    delta_from_mult_bound,
    integrate,
    format_poly,
    sweep,
    tau_upper_via_nef,
)

MODES = ("full", "truncated")
PRINTED_KEYS = (
    "head", "vol_at_mu", "tau_upper", "tail_coefficient", "tail", "integral", "nef_pairing", "integrand", "F",
)
FIELDS = (
    "id", "lemma", "degree", "curves", "gram", "a_dot", "F", "declared_tau", "declared_vol",
    "relations", "mode", "truncation", "expected_bound", "comment",
)


@dataclass(frozen=True)
class Truncation:
    mu: Fraction
    nef: DivisorClass
    tail: str


@dataclass(frozen=True)
class Scenario:
    id: str
    lemma: str
    system: CurveSystem
    F: str
    expected_bound: Fraction
    mode: str = "full"
    declared_tau: Fraction | None = None
    declared_vol: PiecewisePoly | None = None
    relations: tuple[tuple[DivisorClass, DivisorClass], ...] = ()
    truncation: Truncation | None = None
    comment: str = ""
    # constants printed along the way, keyed by PRINTED_KEYS; compared by run()
    printed: Mapping[str, Any] = field(default_factory=dict, compare=False, hash=False)

    @property
    def degree(self) -> Fraction:
        return self.system.degree

    def problems(self) -> list[str]:
        out = list(self.system.problems())
        if self.F not in self.system.curves:
            out.append(f"F = {self.F!r} is not a curve of the system")
        if self.mode not in MODES:
            out.append(f"mode must be one of {MODES}")
        if self.mode == "truncated" and self.truncation is None:
            out.append("truncated mode needs a truncation block")
        if self.mode == "full" and self.truncation is not None:
            out.append("full mode must not carry a truncation block")
        if self.truncation is not None and self.truncation.tail not in TAIL_BOUNDS:
            out.append(f"tail must be one of {sorted(TAIL_BOUNDS)}")
        if self.expected_bound <= 0:
            out.append("expected_bound must be positive")
        for k, (lhs, rhs) in enumerate(self.relations):
            if not out and not check_decomposition(self.system, lhs, rhs):
                out.append(f"relation {k} does not hold numerically")
        return out


@dataclass(frozen=True)
class Report:
    scenario_id: str
    lemma: str
    mode: str
    computed_vol: PiecewisePoly | None
    tau: Fraction | None
    computed_bound: Fraction | None
    expected_bound: Fraction
    matches_expected: bool
    checks: tuple[tuple[str, bool], ...] = ()
    errata: tuple[str, ...] = ()
    head: Fraction | None = None
    tail: Fraction | None = None
    error: str | None = None

    @property
    def tau_kind(self) -> str:
        return "tau" if self.mode == "full" else "tau_upper"

    def to_dict(self) -> dict:
        opt = lambda v: None if v is None else format_rational(v)  # noqa: E731
        return {
            "scenario": self.scenario_id,
            "lemma": self.lemma,
            "mode": self.mode,
            "volume": None if self.computed_vol is None else _table_doc(self.computed_vol),
            "volume_complete": None if self.computed_vol is None else self.computed_vol.complete,
            self.tau_kind: opt(self.tau),
            "head": opt(self.head),
            "tail": opt(self.tail),
            "computed_bound": opt(self.computed_bound),
            "expected_bound": format_rational(self.expected_bound),
            "matches_expected": self.matches_expected,
            "checks": {name: ok for name, ok in self.checks},
            "errata": list(self.errata),
            "error": self.error,
        }

    @classmethod
    def from_dict(cls, doc: Mapping) -> "Report":
        opt = lambda v: None if v is None else to_rational(v)  # noqa: E731
        mode = doc["mode"]
        vol = doc.get("volume")
        return cls(
            scenario_id=doc["scenario"],
            lemma=doc["lemma"],
            mode=mode,
            computed_vol=None if vol is None else _parse_table(vol, "volume", doc.get("volume_complete", True)),
            tau=opt(doc.get("tau" if mode == "full" else "tau_upper")),
            computed_bound=opt(doc.get("computed_bound")),
            expected_bound=to_rational(doc["expected_bound"]),
            matches_expected=bool(doc["matches_expected"]),
            checks=tuple((k, bool(v)) for k, v in doc.get("checks", {}).items()),
            errata=tuple(doc.get("errata", ())),
            head=opt(doc.get("head")),
            tail=opt(doc.get("tail")),
            error=doc.get("error"),
        )


# ---------------------------------------------------------------- parsing

def _rat(value, name):
    try:
        return to_rational(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(str(exc), field=name) from None


def _opt_rat(value, name):
    return None if value is None else _rat(value, name)


def _parse_table(rows, name, complete=True) -> PiecewisePoly:
    if not isinstance(rows, list) or not rows:
        raise ParseError("expected a non-empty list of pieces", field=name)
    parsed = []
    for k, row in enumerate(rows):
        if not isinstance(row, Mapping):
            raise ParseError("piece must be an object", field=f"{name}[{k}]")
        try:
            parsed.append(tuple(_rat(row[key], f"{name}[{k}].{key}") for key in ("from", "to", "c0", "c1", "c2")))
        except KeyError as exc:
            raise ParseError(f"missing key {exc.args[0]!r}", field=f"{name}[{k}]") from None
    try:
        return PiecewisePoly.from_rows(parsed, complete)
    except ValueError as exc:
        raise ValidationError(f"{name}: {exc}") from None


def _table_doc(pw: PiecewisePoly) -> list[dict]:
    return [
        dict(zip(("from", "to", "c0", "c1", "c2"), map(format_rational, row)))
        for row in pw.rows()
    ]


def _coeff_map(sys: CurveSystem, mapping, name) -> DivisorClass:
    if not isinstance(mapping, Mapping):
        raise ParseError("expected a coefficient map", field=name)
    for key in mapping:
        if key != "A" and key not in sys.curves:
            raise ValidationError(f"{name}: unknown curve {key!r}")
    return DivisorClass.from_map(sys, {k: _rat(v, f"{name}.{k}") for k, v in mapping.items()})


def _coeff_doc(sys: CurveSystem, cls: DivisorClass) -> dict:
    return {k: format_rational(v) for k, v in cls.to_map(sys).items()}


def _parse_printed(sys, raw) -> dict:
    if raw is None:
        return {}
    if not isinstance(raw, Mapping):
        raise ParseError("expected an object", field="printed")
    out = {}
    for key, value in raw.items():
        if key not in PRINTED_KEYS:
            raise ValidationError(f"printed: unknown key {key!r}")
        if key == "nef_pairing":
            out[key] = {
                "class": _coeff_map(sys, value["class"], "printed.nef_pairing.class"),
                "a": _rat(value["a"], "printed.nef_pairing.a"),
                "f": _rat(value["f"], "printed.nef_pairing.f"),
            }
        elif key == "integrand":
            if not isinstance(value, list) or not value:
                raise ParseError("expected a coefficient list", field="printed.integrand")
            out[key] = tuple(_rat(c, f"printed.integrand[{k}]") for k, c in enumerate(value))
        elif key == "F":
            if value not in sys.curves:
                raise ValidationError(f"printed.F: unknown curve {value!r}")
            out[key] = value
        else:
            out[key] = _rat(value, f"printed.{key}")
    return out


def from_document(doc: Mapping) -> Scenario:
    """Build and validate a scenario from a parsed document."""
    if not isinstance(doc, Mapping):
        raise ParseError("scenario document must be a JSON object")
    missing = [k for k in FIELDS if k not in doc]
    if missing:
        raise ParseError(f"missing fields {missing}")
    curves = doc["curves"]
    if not isinstance(curves, list) or not all(isinstance(c, str) for c in curves):
        raise ParseError("expected a list of names", field="curves")
    gram = doc["gram"]
    if not isinstance(gram, list) or not all(isinstance(r, list) for r in gram):
        raise ParseError("expected a list of rows", field="gram")
    if len(gram) != len(curves) or any(len(r) != len(curves) for r in gram):
        raise ValidationError(f"gram must be {len(curves)}x{len(curves)}")
    if not isinstance(doc["a_dot"], list) or len(doc["a_dot"]) != len(curves):
        raise ValidationError(f"a_dot must list {len(curves)} values")
    system = CurveSystem(
        _rat(doc["degree"], "degree"),
        tuple(curves),
        [[_rat(v, f"gram[{i}][{j}]") for j, v in enumerate(row)] for i, row in enumerate(gram)],
        [_rat(v, f"a_dot[{i}]") for i, v in enumerate(doc["a_dot"])],
    )
    sys_problems = system.problems()
    if sys_problems:
        raise ValidationError("; ".join(sys_problems))
    relations = []
    for k, rel in enumerate(doc["relations"] or []):
        relations.append((
            _coeff_map(system, rel["lhs"], f"relations[{k}].lhs"),
            _coeff_map(system, rel["rhs"], f"relations[{k}].rhs"),
        ))
    truncation = None
    if doc["truncation"] is not None:
        t = doc["truncation"]
        truncation = Truncation(
            _rat(t["mu"], "truncation.mu"),
            _coeff_map(system, t["nef"], "truncation.nef"),
            t["tail"],
        )
    mode = doc["mode"]
    declared_vol = None
    if doc["declared_vol"] is not None:
        declared_vol = _parse_table(doc["declared_vol"], "declared_vol", mode == "full")
    scenario = Scenario(
        id=str(doc["id"]),
        lemma=str(doc["lemma"]),
        system=system,
        F=str(doc["F"]),
        expected_bound=_rat(doc["expected_bound"], "expected_bound"),
        mode=mode,
        declared_tau=_opt_rat(doc["declared_tau"], "declared_tau"),
        declared_vol=declared_vol,
        relations=tuple(relations),
        truncation=truncation,
        comment=str(doc["comment"] or ""),
        printed=_parse_printed(system, doc.get("printed")),
    )
    problems = scenario.problems()
    if problems:
        raise ValidationError(f"{scenario.id}: " + "; ".join(problems))
    return scenario


def to_document(s: Scenario) -> dict:
    sys = s.system
    doc = {
        "id": s.id,
        "lemma": s.lemma,
        "degree": format_rational(sys.degree),
        "curves": list(sys.curves),
        "gram": [[format_rational(v) for v in row] for row in sys.gram],
        "a_dot": [format_rational(v) for v in sys.a_dot],
        "F": s.F,
        "declared_tau": None if s.declared_tau is None else format_rational(s.declared_tau),
        "declared_vol": None if s.declared_vol is None else _table_doc(s.declared_vol),
        "relations": [{"lhs": _coeff_doc(sys, l), "rhs": _coeff_doc(sys, r)} for l, r in s.relations],
        "mode": s.mode,
        "truncation": None if s.truncation is None else {
            "mu": format_rational(s.truncation.mu),
            "nef": _coeff_doc(sys, s.truncation.nef),
            "tail": s.truncation.tail,
        },
        "expected_bound": format_rational(s.expected_bound),
        "comment": s.comment,
    }
    if s.printed:
        printed = {}
        for key, value in s.printed.items():
            if key == "nef_pairing":
                printed[key] = {
                    "class": _coeff_doc(sys, value["class"]),
                    "a": format_rational(value["a"]),
                    "f": format_rational(value["f"]),
                }
            elif key == "integrand":
                printed[key] = [format_rational(c) for c in value]
            elif key == "F":
                printed[key] = value
            else:
                printed[key] = format_rational(value)
        doc["printed"] = printed
    return doc


def dumps(s: Scenario) -> str:
    return json.dumps(to_document(s), indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> Scenario:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from None
    return from_document(doc)


def load(source) -> Scenario:
    """Load a scenario from a path or an open text stream."""
    if hasattr(source, "read"):
        return loads(source.read())
    return loads(Path(source).read_text(encoding="utf-8"))


# ---------------------------------------------------------------- catalog

def _data_files(kind: str):
    root = resources.files("delpezzo_delta") / "data" / kind
    return sorted((p for p in root.iterdir() if p.name.endswith(".json")), key=lambda p: p.name)


@lru_cache(maxsize=None)
def _catalog() -> tuple[Scenario, ...]:
    scenarios = [loads(p.read_text(encoding="utf-8")) for p in _data_files("scenarios")]
    return tuple(sorted(scenarios, key=lambda s: s.id))


def catalog() -> list[Scenario]:
    """Built-in scenarios sorted by id."""
    return list(_catalog())


def get(scenario_id: str) -> Scenario:
    for s in _catalog():
        if s.id == scenario_id:
            return s
    raise UnknownCase(f"unknown scenario {scenario_id!r}")


# ---------------------------------------------------------------- running

def _compare(errata, label, printed, computed):
    if printed != computed:
        errata.append(
            f"{label}: printed {format_rational(printed)}, computed {format_rational(computed)}"
        )


def run(s: Scenario) -> Report:
    """Compute the bound for ``s`` and compare it with the declared values."""
    checks: list[tuple[str, bool]] = []
    errata: list[str] = []
    sys = s.system
    checks.append(("relations", all(check_decomposition(sys, l, r) for l, r in s.relations)))
    pw = tau_value = bound = head = tail = None
    try:
        if s.mode == "full":
            pw = sweep(sys, s.F).merged
            tau_value = pw.end
            head = bound = integrate(pw, 0, pw.end) / sys.degree
            if s.declared_tau is not None:
                checks.append(("tau", tau_value == s.declared_tau))
            if "integral" in s.printed:
                _compare(errata, "integral", s.printed["integral"], bound)
        else:
            t = s.truncation
            pw = sweep(sys, s.F, stop=t.mu).merged
            head = integrate(pw, 0, pw.end) / sys.degree
            tau_value = tau_upper_via_nef(sys, t.nef, s.F)
            if pw.complete:
                tail = Fraction(0)
            else:
                tail = TAIL_BOUNDS[t.tail](pw, t.mu, tau_value) / sys.degree
            bound = head + tail
            checks.append(("truncated-at-mu", not pw.complete and pw.end == t.mu))
            _check_printed_truncated(s, pw, tau_value, head, tail, errata)
        _check_printed_common(s, pw, errata)
        if s.declared_vol is not None:
            checks.append(("table", pw.same_table(s.declared_vol)))
        checks.append(("bound", bound == s.expected_bound))
    except DeltaError as exc:
        return Report(
            s.id, s.lemma, s.mode, pw, tau_value, None, s.expected_bound, False,
            tuple(checks), tuple(errata), error=f"{type(exc).__name__}: {exc}",
        )
    ok = all(passed for _, passed in checks)
    return Report(
        s.id, s.lemma, s.mode, pw, tau_value, bound, s.expected_bound, ok,
        tuple(checks), tuple(errata), head=head, tail=tail,
    )


def _check_printed_common(s, pw, errata):
    p = s.printed
    if "F" in p and p["F"] != s.F:
        errata.append(f"divisor named when bounding the vanishing order: printed {p['F']}, computed with {s.F}")
    if "integrand" in p:
        printed = tuple(p["integrand"])
        computed = [tuple(piece) for piece in pw.pieces]

        def trim(c):
            c = list(c)
            while len(c) > 1 and c[-1] == 0:
                c.pop()
            return tuple(c)

        if len(computed) != 1 or trim(printed) != trim(computed[0]):
            shown = "; ".join(format_poly(c) for c in computed)
            errata.append(f"integrand: printed {format_poly(printed)}, computed {shown}")


def _check_printed_truncated(s, pw, tau_upper, head, tail, errata):
    p, t, d = s.printed, s.truncation, s.system.degree
    factor = Fraction(2, 3) if t.tail == "barycenter" else Fraction(1)
    if "head" in p:
        _compare(errata, "integral up to mu over degree", p["head"], head)
    if "vol_at_mu" in p:
        _compare(errata, "vol at mu", p["vol_at_mu"], pw(t.mu))
    if "tau_upper" in p:
        _compare(errata, "tau upper bound", p["tau_upper"], tau_upper)
    if "tail_coefficient" in p:
        _compare(errata, "coefficient of (tau - mu) in the tail term", p["tail_coefficient"], factor * pw(t.mu) / d)
    if "tail" in p:
        _compare(errata, "tail term", p["tail"], tail)
    if "nef_pairing" in p:
        nef = p["nef_pairing"]
        sys = s.system
        with_a = pair(nef["class"], DivisorClass.anticanonical(sys), sys)
        with_f = pair_curve(nef["class"], sys.index(s.F), sys)
        if (with_a, with_f) != (nef["a"], nef["f"]):
            errata.append(
                "nef class pairing with A - x*{F}: printed {pa} - {pf}x, computed {ca} - {cf}x".format(
                    F=s.F, pa=format_rational(nef["a"]), pf=format_rational(nef["f"]),
                    ca=format_rational(with_a), cf=format_rational(with_f),
                )
            )


def run_all(scenarios=None) -> list[Report]:
    scenarios = catalog() if scenarios is None else scenarios
    return [run(s) for s in sorted(scenarios, key=lambda s: s.id)]


# ---------------------------------------------------------------- aggregates

def is_cubic_point_scenario(s: Scenario) -> bool:
    """Scenarios bounding mult_Q(pi^* D) at a point of a cubic surface."""
    return s.degree == 3 and s.F == "E2"


def is_dp1_scenario(s: Scenario) -> bool:
    return s.degree == 1


@dataclass(frozen=True)
class Aggregate:
    name: str
    value: Fraction
    target: Fraction
    passed: bool
    detail: str


def cubic_aggregate(reports: list[Report], scenarios: list[Scenario]) -> Aggregate:
    """Largest point bound over the cubic scenarios and the delta it implies."""
    by_id = {r.scenario_id: r for r in reports}
    bounds = [by_id[s.id].computed_bound for s in scenarios if is_cubic_point_scenario(s)]
    if any(b is None for b in bounds) or not bounds:
        return Aggregate("cubic delta", Fraction(0), Fraction(18, 17), False, "missing bounds")
    worst = max(bounds)
    delta = delta_from_mult_bound(worst)
    return Aggregate(
        "cubic delta", delta, Fraction(18, 17), worst == Fraction(17, 9) and delta == Fraction(18, 17),
        f"max point bound {format_rational(worst)}, delta >= 2/({format_rational(worst)}) = {format_rational(delta)}",
    )


def dp1_aggregate(reports: list[Report], scenarios: list[Scenario]) -> Aggregate:
    """Degree 1: 2/(worst infinitely-near bound) must reach 3/2."""
    by_id = {r.scenario_id: r for r in reports}
    q_bounds = [by_id[s.id].computed_bound for s in scenarios if is_dp1_scenario(s) and s.F == "E2"]
    p_bounds = [by_id[s.id].computed_bound for s in scenarios if is_dp1_scenario(s) and s.F == "E1"]
    if not q_bounds or any(b is None for b in q_bounds + p_bounds):
        return Aggregate("dp1 delta", Fraction(0), Fraction(3, 2), False, "missing bounds")
    worst = max(q_bounds)
    delta = delta_from_mult_bound(worst)
    return Aggregate(
        "dp1 delta", delta, Fraction(3, 2), delta >= Fraction(3, 2),
        f"max infinitely-near bound {format_rational(worst)}, delta >= 2/({format_rational(worst)}) "
        f"= {format_rational(delta)} >= 3/2",
    )
