"""Exact Fourier-Motzkin elimination with replayable certificates.

A constraint reads ``sum(coeffs[v] * v) REL constant`` with REL one of
``<=``, ``<``, ``=``.  Documents may also use ``>=`` and ``>``; those are
negated into the canonical form on load.  Every derived constraint keeps
its nonnegative multipliers over the original constraints, so an
infeasibility verdict can be re-checked by a single exact linear
combination without trusting the elimination itself.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

from .errors import ParseError, UnknownCase, ValidationError
from .lattice import format_rational, to_rational

RELATIONS = ("<=", "<", "=")
_FLIPPED = {">=": "<=", ">": "<"}
VERDICTS = ("infeasible", "feasible")
ROLES = ("hypothesis", "derived", "branch", "bound")


@dataclass(frozen=True)
class LinearConstraint:
    coeffs: Mapping[str, Fraction]
    constant: Fraction
    relation: str
    tag: str = ""
    role: str = "hypothesis"

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise ValueError(f"relation must be one of {RELATIONS}, got {self.relation!r}")
        clean = {v: to_rational(c) for v, c in sorted(self.coeffs.items()) if to_rational(c) != 0}
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "constant", to_rational(self.constant))

    @classmethod
    def parse(cls, coeffs, constant, relation, tag="", role="hypothesis") -> "LinearConstraint":
        """Accept ``>=`` and ``>`` by negating both sides."""
        if relation in _FLIPPED:
            coeffs = {v: -to_rational(c) for v, c in coeffs.items()}
            return cls(coeffs, -to_rational(constant), _FLIPPED[relation], tag, role)
        return cls(coeffs, constant, relation, tag, role)

    @property
    def strict(self) -> bool:
        return self.relation == "<"

    def holds(self, point: Mapping[str, Fraction]) -> bool:
        lhs = sum((c * point[v] for v, c in self.coeffs.items()), Fraction(0))
        if self.relation == "<":
            return lhs < self.constant
        if self.relation == "<=":
            return lhs <= self.constant
        return lhs == self.constant

    def render(self) -> str:
        return f"{render_linear(self.coeffs)} {self.relation} {format_rational(self.constant)}"


def render_linear(coeffs: Mapping[str, Fraction]) -> str:
    if not coeffs:
        return "0"
    out = []
    for k, (v, c) in enumerate(sorted(coeffs.items())):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        term = v if mag == 1 else f"{format_rational(mag)}*{v}"
        if k == 0:
            out.append(term if sign == "+" else f"-{term}")
        else:
            out.append(f"{sign} {term}")
    return " ".join(out)


@dataclass(frozen=True)
class CaseSystem:
    id: str
    variables: tuple[str, ...]
    constraints: tuple[LinearConstraint, ...]
    expected: str = "infeasible"
    lemma: str = ""
    comment: str = ""

    def __post_init__(self):
        if self.expected not in VERDICTS:
            raise ValueError(f"expected must be one of {VERDICTS}")
        known = set(self.variables)
        if len(known) != len(self.variables):
            raise ValueError("variables must be distinct")
        for c in self.constraints:
            extra = set(c.coeffs) - known
            if extra:
                raise ValueError(f"constraint {c.tag or c.render()!r} uses undeclared {sorted(extra)}")

    def without(self, predicate) -> "CaseSystem":
        """Copy with every constraint matching ``predicate`` dropped."""
        kept = tuple(c for c in self.constraints if not predicate(c))
        return CaseSystem(self.id, self.variables, kept, self.expected, self.lemma, self.comment)

    def with_constraints(self, constraints: Sequence[LinearConstraint]) -> "CaseSystem":
        return CaseSystem(self.id, self.variables, tuple(constraints), self.expected, self.lemma, self.comment)


# ---------------------------------------------------------------- elimination

@dataclass(frozen=True)
class Derived:
    """A derived row ``coeffs . x REL constant`` with its multipliers."""

    coeffs: Mapping[str, Fraction]
    constant: Fraction
    strict: bool
    multipliers: tuple[Fraction, ...]

    def key(self):
        return (tuple(sorted(self.coeffs.items())), self.constant, self.strict)


@dataclass(frozen=True)
class Step:
    variable: str
    # (upper row, lower row, upper multiplier, lower multiplier, new row) as row indices
    combinations: tuple[tuple[int, int, Fraction, Fraction, int], ...]
    carried: tuple[int, ...]


@dataclass(frozen=True)
class Certificate:
    system_id: str
    verdict: str
    order: tuple[str, ...]
    rows: tuple[Derived, ...]
    steps: tuple[Step, ...]
    terminal: int | None = None
    witness: Mapping[str, Fraction] | None = None
    tags: tuple[str, ...] = field(default=())

    @property
    def infeasible(self) -> bool:
        return self.verdict == "infeasible"

    def terminal_statement(self) -> str:
        if self.terminal is None:
            return ""
        row = self.rows[self.terminal]
        return f"0 {'<' if row.strict else '<='} {format_rational(row.constant)}"

    def used_constraints(self) -> list[tuple[Fraction, str]]:
        """Nonzero multipliers of the terminal contradiction with provenance tags."""
        if self.terminal is None:
            return []
        mult = self.rows[self.terminal].multipliers
        return [(m, self.tags[i]) for i, m in enumerate(mult) if m]


def _atoms(c: LinearConstraint) -> list[tuple[dict, Fraction, bool]]:
    if c.relation == "=":
        neg = {v: -x for v, x in c.coeffs.items()}
        return [(dict(c.coeffs), c.constant, False), (neg, -c.constant, False)]
    return [(dict(c.coeffs), c.constant, c.strict)]


def _unit(n, i, scale=Fraction(1)):
    out = [Fraction(0)] * n
    out[i] = scale
    return tuple(out)


def _initial_rows(system: CaseSystem) -> list[Derived]:
    n = len(system.constraints)
    rows = []
    for i, c in enumerate(system.constraints):
        signs = (1, -1) if c.relation == "=" else (1,)
        for sign, (coeffs, const, strict) in zip(signs, _atoms(c)):
            rows.append(Derived(coeffs, const, strict, _unit(n, i, Fraction(sign))))
    return rows


def _contradiction(row: Derived) -> bool:
    if row.coeffs:
        return False
    return row.constant < 0 or (row.strict and row.constant == 0)


def _trivial(row: Derived) -> bool:
    return not row.coeffs and not _contradiction(row)


def _combine(up: Derived, lo: Derived, var: str) -> tuple[Derived, Fraction, Fraction]:
    mu_up, mu_lo = -lo.coeffs[var], up.coeffs[var]
    coeffs: dict[str, Fraction] = {}
    for v in set(up.coeffs) | set(lo.coeffs):
        value = mu_up * up.coeffs.get(v, 0) + mu_lo * lo.coeffs.get(v, 0)
        if value:
            coeffs[v] = value
    coeffs.pop(var, None)
    mult = tuple(mu_up * a + mu_lo * b for a, b in zip(up.multipliers, lo.multipliers))
    row = Derived(dict(sorted(coeffs.items())), mu_up * up.constant + mu_lo * lo.constant,
                  up.strict or lo.strict, mult)
    return row, mu_up, mu_lo


def _direction(row: Derived):
    """Scale-free direction of a row and its scaled (constant, strict) bound."""
    if not row.coeffs:
        return (), (row.constant, row.strict)
    scale = abs(next(iter(sorted(row.coeffs.items())))[1])
    return tuple((v, c / scale) for v, c in sorted(row.coeffs.items())), (row.constant / scale, row.strict)


def _keep_tightest(best: dict, rows, idx):
    """Among rows with one direction keep the tightest; the others are implied by it."""
    direction, (const, strict) = _direction(rows[idx])
    if direction not in best:
        best[direction] = idx
        return
    _, (old_const, old_strict) = _direction(rows[best[direction]])
    if const < old_const or (const == old_const and strict and not old_strict):
        best[direction] = idx


def _support(row: Derived) -> int:
    return sum(1 for m in row.multipliers if m)


def fourier_motzkin(system: CaseSystem, order: Sequence[str] | None = None) -> Certificate:
    """Decide ``system`` by eliminating variables in ``order`` (lexicographic by default).

    Rows are first pruned with Chernikov's rule (after k eliminations a row
    built from more than k + 1 constraints is dropped).  Pruning can only
    lose contradictions, so an infeasible verdict stands as is and a
    feasible one is accepted once its witness satisfies every constraint;
    otherwise the elimination is redone without pruning.
    """
    order = tuple(sorted(system.variables) if order is None else order)
    if sorted(order) != sorted(system.variables):
        raise ValueError("order must be a permutation of the system variables")
    cert = _eliminate(system, order, prune=True)
    if cert.infeasible or all(c.holds(cert.witness) for c in system.constraints):
        return cert
    return _eliminate(system, order, prune=False)


def _eliminate(system: CaseSystem, order: tuple[str, ...], prune: bool) -> Certificate:
    tags = tuple(c.tag for c in system.constraints)
    rows = _initial_rows(system)
    active = list(range(len(rows)))
    stages: list[list[int]] = []
    steps: list[Step] = []

    def finish_infeasible(idx):
        return Certificate(system.id, "infeasible", order, tuple(rows), tuple(steps), terminal=idx, tags=tags)

    for idx in active:
        if _contradiction(rows[idx]):
            return finish_infeasible(idx)
    for k, var in enumerate(order, 1):
        stages.append(list(active))
        ups = [i for i in active if rows[i].coeffs.get(var, 0) > 0]
        los = [i for i in active if rows[i].coeffs.get(var, 0) < 0]
        carried = [i for i in active if var not in rows[i].coeffs]
        best: dict = {}
        for i in carried:
            _keep_tightest(best, rows, i)
        combos = []
        for u in ups:
            for l in los:
                row, mu_u, mu_l = _combine(rows[u], rows[l], var)
                rows.append(row)
                idx = len(rows) - 1
                combos.append((u, l, mu_u, mu_l, idx))
                if _contradiction(row):
                    steps.append(Step(var, tuple(combos), tuple(carried)))
                    return finish_infeasible(idx)
                if not _trivial(row) and not (prune and _support(row) > k + 1):
                    _keep_tightest(best, rows, idx)
        steps.append(Step(var, tuple(combos), tuple(carried)))
        active = sorted(i for i in best.values() if not _trivial(rows[i]))
    witness = _back_substitute(rows, stages, order)
    return Certificate(system.id, "feasible", order, tuple(rows), tuple(steps), witness=witness, tags=tags)


def _pick(lower, upper) -> Fraction:
    """A rational in the interval described by (value, strict) bound lists."""
    lo = max(lower, key=lambda b: (b[0], b[1])) if lower else None
    hi = min(upper, key=lambda b: (b[0], not b[1])) if upper else None
    if lo is None and hi is None:
        return Fraction(0)
    if hi is None:
        return lo[0] + 1 if lo[1] else lo[0]
    if lo is None:
        return hi[0] - 1 if hi[1] else hi[0]
    if lo[0] == hi[0]:
        return lo[0]
    return (lo[0] + hi[0]) / 2


def _back_substitute(rows, stages, order) -> dict[str, Fraction]:
    point: dict[str, Fraction] = {}
    for var, active in reversed(list(zip(order, stages))):
        lower, upper = [], []
        for i in active:
            row = rows[i]
            a = row.coeffs.get(var, 0)
            if not a:
                continue
            rest = row.constant - sum(c * point[v] for v, c in row.coeffs.items() if v != var)
            bound = rest / a
            (upper if a > 0 else lower).append((bound, row.strict))
        point[var] = _pick(lower, upper)
    return dict(sorted(point.items()))


# ---------------------------------------------------------------- replay

def replay(system: CaseSystem, cert: Certificate) -> bool:
    """Re-check ``cert`` against ``system`` using only exact arithmetic.

    Infeasible: every step row must equal the stated combination of its
    parents, and the terminal multipliers applied to the original
    constraints must give the terminal ground contradiction.  Feasible:
    the witness must satisfy every constraint.
    """
    if cert.verdict == "feasible":
        if cert.witness is None or set(cert.witness) != set(system.variables):
            return False
        return all(c.holds(cert.witness) for c in system.constraints)
    if cert.terminal is None:
        return False
    initial = _initial_rows(system)
    for mine, theirs in zip(initial, cert.rows):
        if (mine.key(), mine.multipliers) != (theirs.key(), theirs.multipliers):
            return False
    for step in cert.steps:
        for u, l, mu_u, mu_l, idx in step.combinations:
            if mu_u <= 0 or mu_l <= 0:
                return False
            row, _, _ = _combine(cert.rows[u], cert.rows[l], step.variable)
            if row.key() != cert.rows[idx].key() or row.multipliers != cert.rows[idx].multipliers:
                return False
    term = cert.rows[cert.terminal]
    if not _contradiction(term):
        return False
    return _direct_combination(system, term.multipliers) == (term.constant, term.strict)


def _direct_combination(system: CaseSystem, multipliers) -> tuple[Fraction, bool] | None:
    """Apply multipliers to the original constraints; None unless all variables cancel."""
    total: dict[str, Fraction] = {}
    const, strict = Fraction(0), False
    for m, c in zip(multipliers, system.constraints):
        if not m:
            continue
        if m < 0 and c.relation != "=":
            return None
        for v, a in c.coeffs.items():
            total[v] = total.get(v, 0) + m * a
        const += m * c.constant
        strict = strict or (c.strict and m > 0)
    if any(total.values()):
        return None
    return const, strict


# ---------------------------------------------------------------- case files

def _rat(value, name):
    try:
        return to_rational(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(str(exc), field=name) from None


def case_from_document(doc: Mapping) -> CaseSystem:
    if not isinstance(doc, Mapping):
        raise ParseError("case document must be a JSON object")
    for key in ("id", "variables", "constraints", "expected"):
        if key not in doc:
            raise ParseError(f"missing field {key!r}")
    constraints = []
    for k, raw in enumerate(doc["constraints"]):
        name = f"constraints[{k}]"
        if not isinstance(raw, Mapping) or "coeffs" not in raw or "rel" not in raw:
            raise ParseError("constraint needs coeffs and rel", field=name)
        rel = raw["rel"]
        if rel not in RELATIONS and rel not in _FLIPPED:
            raise ParseError(f"unknown relation {rel!r}", field=f"{name}.rel")
        role = raw.get("role", "hypothesis")
        if role not in ROLES:
            raise ValidationError(f"{name}: role must be one of {ROLES}")
        coeffs = {v: _rat(c, f"{name}.coeffs.{v}") for v, c in raw["coeffs"].items()}
        constraints.append(LinearConstraint.parse(
            coeffs, _rat(raw.get("const", "0"), f"{name}.const"), rel, raw.get("tag", ""), role,
        ))
    try:
        return CaseSystem(
            str(doc["id"]), tuple(doc["variables"]), tuple(constraints), doc["expected"],
            str(doc.get("lemma", "")), str(doc.get("comment", "")),
        )
    except ValueError as exc:
        raise ValidationError(str(exc)) from None


def load_case(source) -> CaseSystem:
    text = source.read() if hasattr(source, "read") else Path(source).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from None
    return case_from_document(doc)


@lru_cache(maxsize=None)
def _case_catalog() -> tuple[CaseSystem, ...]:
    root = resources.files("delpezzo_delta") / "data" / "cases"
    files = sorted((p for p in root.iterdir() if p.name.endswith(".json")), key=lambda p: p.name)
    return tuple(sorted((load_case(p.open(encoding="utf-8")) for p in files), key=lambda c: c.id))


def case_catalog() -> list[CaseSystem]:
    return list(_case_catalog())


def get_case(case_id: str) -> CaseSystem:
    for case in _case_catalog():
        if case.id == case_id:
            return case
    raise UnknownCase(f"unknown case {case_id!r}")


# ---------------------------------------------------------------- verification

@dataclass(frozen=True)
class CaseReport:
    case_id: str
    lemma: str
    expected: str
    verdict: str
    matches_expected: bool
    replayed: bool
    derived_checked: bool
    certificate: Certificate

    def to_dict(self) -> dict:
        cert = self.certificate
        return {
            "case": self.case_id,
            "lemma": self.lemma,
            "expected": self.expected,
            "verdict": self.verdict,
            "matches_expected": self.matches_expected,
            "replayed": self.replayed,
            "derived_checked": self.derived_checked,
            "order": list(cert.order),
            "terminal": cert.terminal_statement() or None,
            "combination": [
                {"multiplier": format_rational(m), "tag": tag} for m, tag in cert.used_constraints()
            ],
            "witness": None if cert.witness is None else {
                v: format_rational(x) for v, x in cert.witness.items()
            },
        }


def negate(c: LinearConstraint) -> LinearConstraint:
    """The complement of an inequality (equalities have no single-row negation)."""
    if c.relation == "=":
        raise ValueError("cannot negate an equality into one constraint")
    coeffs = {v: -a for v, a in c.coeffs.items()}
    rel = "<=" if c.strict else "<"
    return LinearConstraint(coeffs, -c.constant, rel, f"not {c.tag}", c.role)


def check_derived(system: CaseSystem) -> bool:
    """Each ``derived`` constraint follows from the ``hypothesis`` and ``bound`` rows.

    Checked by refuting hypotheses + negation with elimination; the base
    must itself be feasible so the check is not vacuous.
    """
    base = [c for c in system.constraints if c.role in ("hypothesis", "bound")]
    if not fourier_motzkin(system.with_constraints(base)).verdict == "feasible":
        return False
    for c in system.constraints:
        if c.role != "derived":
            continue
        probe = system.with_constraints(base + [negate(c)])
        cert = fourier_motzkin(probe)
        if not (cert.infeasible and replay(probe, cert)):
            return False
    return True


def verify(system: CaseSystem) -> CaseReport:
    cert = fourier_motzkin(system)
    return CaseReport(
        system.id, system.lemma, system.expected, cert.verdict,
        cert.verdict == system.expected, replay(system, cert), check_derived(system), cert,
    )


def verify_case(case_id: str) -> CaseReport:
    return verify(get_case(case_id))
