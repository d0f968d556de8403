"""One line per acceptance criterion; every comparison is exact."""

import random
from fractions import Fraction as F

import pytest

from delpezzo_delta import feasibility as fm
from delpezzo_delta import scenarios as sc
from delpezzo_delta.lattice import DivisorClass, is_negative_definite, pair, pair_curve
from delpezzo_delta.volume import integrate, sweep, volume_function
from delpezzo_delta.zariski import decompose


def report(n, ok, detail):
    line = f"CRITERION {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    return line


def emit(capsys, line):
    with capsys.disabled():
        print("\n" + line)


def expand(k, a, b):
    """k * (a + b x)^2 as (c0, c1, c2)."""
    k, a, b = F(k), F(a), F(b)
    return (k * a * a, 2 * k * a * b, k * b * b)


ECKARDT = [(0, 1, (3, 0, F(-1, 2))), (1, 2, (F(20, 6), F(-4, 6), F(-1, 6))), (2, 4, expand(F(1, 3), 4, -1))]
TWO_PIECE = [(0, 2, (3, 0, F(-1, 2))), (2, 3, expand(1, 3, -1))]

TABLES = {
    "eckardt-Q-on-line": ECKARDT,
    "tangential": ECKARDT,
    "twoline-Q-on-line": ECKARDT[:2] + [(2, 3, (4, F(-4, 3), 0))],
    "lineconic-Q-on-L": [ECKARDT[0], (1, F(14, 5), ECKARDT[1][2]), (F(14, 5), 3, expand(4, 3, -1))],
    "lineconic-Q-on-C": TWO_PIECE,
    "irreducible-Q-on-C": TWO_PIECE,
    "eckardt-Q-general": TWO_PIECE,
    "irreducible-general-cubic": [(0, F(12, 5), (3, 0, F(-1, 2))), (F(12, 5), F(5, 2), expand(3, 5, -2))],
    "dp1-ordinary": [(0, 1, (1, 0, -1))],
    "dp1-singular": [(0, F(1, 2), (1, 0, -1)), (F(1, 2), 2, expand(F(1, 3), -2, 1))],
    "dp1-Q-on-C": [(0, F(2, 3), (1, 0, F(-1, 2))), (F(2, 3), 3, expand(F(1, 7), 3, -1))],
    "dp1-Q-off-C": [(0, 1, (1, 0, F(-1, 2))), (1, 2, expand(F(1, 2), 2, -1))],
}

BOUNDS = {
    "cubic-line": F(5, 9), "eckardt-Q-on-line": F(17, 9), "twoline-Q-on-line": F(49, 27),
    "lineconic-Q-on-L": F(9, 5), "lineconic-Q-on-C": F(5, 3), "irreducible-Q-on-C": F(5, 3),
    "tangential": F(17, 9), "eckardt-Q-general": F(5, 3),
    "twoline-general-conic": F(59, 36), "irreducible-general-conic": F(59, 36),
    "irreducible-general-cubic": F(49, 30), "oneline-general-cubic": F(103, 63),
    "twoline-general-eckardt": F(5, 3), "irreducible-general-eckardt": F(5, 3),
    "twoline-general-generic": F(5, 3), "irreducible-general-generic": F(5, 3),
    "oneline-general-threelines": F(5, 3), "oneline-general-conic": F(89, 54),
    "dp1-ordinary": F(2, 3), "dp1-singular": F(5, 6), "dp1-Q-on-C": F(11, 9), "dp1-Q-off-C": F(1),
}

# (head, tail) split of the truncated bounds
SPLITS = {
    "twoline-general-generic": (F(79, 48), F(1, 48)),
    "irreducible-general-generic": (F(79, 48), F(1, 48)),
    "oneline-general-threelines": (F(89, 54), F(1, 54)),
    "oneline-general-conic": (F(709, 432), F(1, 144)),
}

BRANCHES = [
    "case1-O-on-E1", "case1-O-on-L1", "case2-O-on-E1", "case2-O-on-L1",
    "case3-O-on-E1", "case3-O-on-L", "case4-O-on-C", "case4-O-on-E1", "case4-O-on-L",
]


@pytest.fixture(scope="module")
def reports():
    return {s.id: sc.run(s) for s in sc.catalog()}


def test_criterion_1_volume_tables(capsys):
    bad = []
    for sid, rows in TABLES.items():
        s = sc.get(sid)
        got = volume_function(s.system, s.F).rows()
        want = [(F(lo), F(hi), *map(F, p)) for lo, hi, p in rows]
        if got != want:
            bad.append(sid)
    ok = not bad
    emit(capsys, report(1, ok, f"{len(TABLES) - len(bad)}/{len(TABLES)} volume tables exact" + (f"; mismatched {bad}" if bad else "")))
    assert ok


def test_criterion_2_bounds(capsys, reports):
    bad = [sid for sid, b in BOUNDS.items() if reports[sid].computed_bound != b or not reports[sid].matches_expected]
    for sid, (head, tail) in SPLITS.items():
        r = reports[sid]
        if (r.head, r.tail, r.head + r.tail) != (head, tail, BOUNDS[sid]):
            bad.append(sid + " (split)")
    conic = sc.get("oneline-general-conic")
    pw = volume_function(conic.system, "E2", stop=F(5, 2))
    if integrate(pw, 0, F(5, 2)) / 3 != F(709, 432):
        bad.append("oneline-general-conic integral")
    if not any("printed 1/48" in e for e in reports["oneline-general-conic"].errata):
        bad.append("oneline-general-conic erratum not flagged")
    ok = not bad
    emit(capsys, report(2, ok, f"{len(BOUNDS)} bounds, 4 truncated splits, 709/432 + 1/144 = 89/54, '/48' flagged"
                        + (f"; failures {bad}" if bad else "")))
    assert ok


def test_criterion_3_aggregates(capsys, reports):
    cat = sc.catalog()
    rs = [reports[s.id] for s in cat]
    cubic = sc.cubic_aggregate(rs, cat)
    dp1 = sc.dp1_aggregate(rs, cat)
    ok = (cubic.passed and cubic.value == F(18, 17) and dp1.passed and dp1.value == F(18, 11)
          and F(18, 11) >= F(3, 2))
    emit(capsys, report(3, ok, f"cubic delta >= {cubic.value}, dp1 delta >= {dp1.value} >= 3/2"))
    assert ok


def test_criterion_4_feasibility(capsys):
    bad = []
    for cid in BRANCHES + ["dp1-remark"]:
        case = fm.get_case(cid)
        rep = fm.verify(case)
        if not (rep.verdict == "infeasible" and rep.replayed and rep.derived_checked):
            bad.append(cid)
        if cid in BRANCHES:
            free = case.without(lambda c: c.role == "bound")
            cert = fm.fourier_motzkin(free)
            if cert.infeasible or not all(c.holds(cert.witness) for c in free.constraints):
                bad.append(cid + " (lambda free)")
    ok = not bad
    emit(capsys, report(4, ok, f"{len(BRANCHES)} branches infeasible for lambda < 6/5 with replayed certificates, "
                        f"feasible with lambda free; dp1-remark infeasible" + (f"; failures {bad}" if bad else "")))
    assert ok


def test_criterion_5_properties(capsys):
    rng = random.Random(5)
    counts = dict.fromkeys(["chambers", "volumes", "pairings", "certificates", "round trips"], 0)
    bad = []
    for s in sc.catalog():
        sys = s.system
        stop = s.truncation.mu if s.truncation else None
        for ch in sweep(sys, s.F, stop).chambers:
            x = (ch.lo + ch.hi) / 2
            D = DivisorClass.anticanonical(sys) - DivisorClass.curve(sys, s.F, x)
            z = decompose(sys, D)
            support = set(z.support)
            ok = all(
                (pair_curve(z.positive, i, sys) == 0) if i in support else (pair_curve(z.positive, i, sys) >= 0)
                for i in range(len(sys))
            )
            ok &= all(b >= 0 for b in z.coefficients)
            ok &= not z.support or is_negative_definite(sys, z.support)
            counts["chambers"] += 1
            if not ok:
                bad.append(f"{s.id} chamber {ch.lo}")
        pw = volume_function(sys, s.F, stop=stop)
        pts = sorted({*pw.breakpoints, *(F(rng.randint(0, 1000), 1000) * pw.end for _ in range(10))})
        vals = [pw(p) for p in pts]
        ok = pw.problems(s.degree) == [] and vals[0] == s.degree
        ok &= all(a >= b for a, b in zip(vals, vals[1:]))
        ok &= not pw.complete or vals[-1] == 0
        counts["volumes"] += 1
        if not ok:
            bad.append(f"{s.id} volume")
        n = len(sys)
        for _ in range(5):
            u, v, w = (DivisorClass(F(rng.randint(-5, 5)), tuple(F(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(n)))
                       for _ in range(3))
            k = F(rng.randint(-5, 5), rng.randint(1, 5))
            ok = pair(u + v * k, w, sys) == pair(u, w, sys) + k * pair(v, w, sys) and pair(u, w, sys) == pair(w, u, sys)
            counts["pairings"] += 1
            if not ok:
                bad.append(f"{s.id} pairing")
        counts["round trips"] += 1
        if sc.loads(sc.dumps(s)) != s:
            bad.append(f"{s.id} round trip")
    for case in fm.case_catalog():
        counts["certificates"] += 1
        if not fm.replay(case, fm.fourier_motzkin(case)):
            bad.append(case.id)
    ok = not bad
    detail = ", ".join(f"{v} {k}" for k, v in counts.items())
    emit(capsys, report(5, ok, detail + (f"; failures {bad}" if bad else "")))
    assert ok
