"""Write the inequality case files used by the feasibility checker.

    python tools/write_cases.py [--check]

Every system is linear: coefficients of D are already scaled by lambda
(``lambda D = a1 L1 + ... + Omega``), and ``w`` stands for the
intersection number of the distinguished line with Omega.  The
epsilon_k slack terms are dropped (their limit is 0).
"""

from __future__ import annotations

import argparse
import json
from fractions import Fraction
from pathlib import Path

OUT_DIR = Path(__file__).resolve().parents[1] / "src" / "delpezzo_delta" / "data" / "cases"


def q(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def row(coeffs, rel, const, tag, role="hypothesis"):
    return {
        "coeffs": {v: q(c) for v, c in coeffs.items()},
        "rel": rel,
        "const": q(const),
        "tag": tag,
        "role": role,
    }


def nonnegative(variables):
    out = [row({"lambda": 1}, ">", 0, "lambda > 0")]
    out += [row({v: 1}, ">=", 0, f"{v} >= 0") for v in variables if v != "lambda"]
    return out


LAMBDA_BOUND = "lambda < 6/5"


def lambda_bound(value=Fraction(6, 5)):
    return row({"lambda": 1}, "<", value, f"lambda < {q(value)}", "bound")


def three_line_family(case, lemma, line_coeffs, w_relation, inversion, lemma_bound, bound_value, mt_slope, mult_o):
    """Cases 1 and 2 share their shape; only the curve coefficients differ.

    ``line_coeffs``: coefficients in lambda*mult_P(D) (the E1 coefficient + 1).
    """
    mult_q = dict(line_coeffs)
    mult_q["a1"] = mult_q.get("a1", 0) + 1
    mult_q["mt"] = 1
    variables = sorted({"lambda", "m", "mt", "w", *line_coeffs})
    base = nonnegative(variables) + [
        lambda_bound(),
        row(mult_q, ">", 2, "mult_Q(pi^* D) > 2/lambda"),
        row({"a1": 1, "lambda": Fraction(-5, 9)}, "<=", 0, "a1 <= 5/9 lambda"),
        row(w_relation, "=", 0, "L1.Omega relation"),
        row(inversion, ">", 2, "inversion of adjunction along L1 at Q"),
        row({**mult_q, "lambda": -bound_value}, "<=", 0, lemma_bound),
        row({"mt": 1, "m": -1}, "<=", 0, "mt <= m"),
        row({"mt": 1, "lambda": -mt_slope}, "<", -1, f"mt < {q(mt_slope)} lambda - 1", "derived"),
        row(mult_q, "<", 3, "E2 coefficient < 1", "derived"),
    ]
    e1 = dict(line_coeffs)
    e1["mt"] = 1
    on_e1 = base + [row(e1, ">", 2, "inversion of adjunction along E2 at O", "branch")]
    kewei = {**{k: v for k, v in line_coeffs.items() if k != "m"}, "w": 1}
    kewei["a1"] = kewei.get("a1", 0) + 2
    on_l1 = base + [
        row({**mult_q, "mt": 2}, "<", 3, f"mult_O < {q(mult_o)} lambda - 3 < 1", "derived"),
        row(kewei, ">", 4, "local inequality along L1 at O", "branch"),
    ]
    return [
        (f"{case}-O-on-E1", lemma, variables, on_e1),
        (f"{case}-O-on-L1", lemma, variables, on_l1),
    ]


def case1():
    return three_line_family(
        "case1", "three lines through P",
        {"a1": 1, "a2": 1, "a3": 1, "m": 1},
        {"w": 1, "lambda": -1, "a1": -1, "a2": 1, "a3": 1},
        {"w": 1, "a1": 1, "a2": 1, "a3": 1},
        "2a1+a2+a3+m+mt <= 17/9 lambda", Fraction(17, 9), Fraction(13, 9), Fraction(10, 3),
    )


def case2():
    return three_line_family(
        "case2", "two of three coplanar lines through P",
        {"a1": 1, "a2": 1, "m": 1},
        {"w": 1, "lambda": -1, "a1": -1, "a2": 1},
        {"w": 1, "a1": 1, "a2": 1},
        "2a1+a2+m+mt <= 49/27 lambda", Fraction(49, 27), Fraction(38, 27), Fraction(29, 9),
    )


def case3():
    variables = ["a", "b", "lambda", "m", "mt", "w"]
    mult_q = {"a": 2, "b": 1, "m": 1, "mt": 1}
    base = nonnegative(variables) + [
        lambda_bound(),
        row(mult_q, ">", 2, "mult_Q(pi^* D) > 2/lambda"),
        row({"a": 1, "lambda": Fraction(-5, 9)}, "<=", 0, "a <= 5/9 lambda"),
        row({"w": 1, "lambda": -1, "a": -1, "b": 2}, "=", 0, "L.Omega relation"),
        row({"w": 1, "a": 1, "b": 1}, ">", 2, "inversion of adjunction along L at Q"),
        row({**mult_q, "lambda": Fraction(-9, 5)}, "<=", 0, "2a+b+m+mt <= 9/5 lambda"),
        row({"mt": 1, "m": -1}, "<=", 0, "mt <= m"),
        row({"mt": 1, "lambda": Fraction(-7, 5)}, "<", -1, "mt < 7/5 lambda - 1", "derived"),
        row(mult_q, "<", 3, "E2 coefficient < 1", "derived"),
    ]
    on_e1 = base + [row({"a": 1, "b": 1, "m": 1, "mt": 1}, ">", 2, "inversion of adjunction along E2 at O", "branch")]
    on_l = base + [
        row({**mult_q, "mt": 2}, "<", 3, "mult_O < 12/5 lambda - 3 < 1", "derived"),
        row({"w": 1, "a": 3, "b": 1}, ">", 4, "local inequality along L at O", "branch"),
    ]
    lemma = "line and conic meeting transversally at P"
    return [
        ("case3-O-on-E1", lemma, variables, on_e1),
        ("case3-O-on-L", lemma, variables, on_l),
    ]


def case4():
    variables = ["a", "b", "lambda", "m", "mt", "w"]
    mult_q = {"a": 2, "b": 2, "m": 1, "mt": 1}
    base = nonnegative(variables) + [
        lambda_bound(),
        row(mult_q, ">", 2, "mult_Q(pi^* D) > 2/lambda"),
        row({"a": 1, "b": 1, "m": 1}, ">", 1, "a+b+m > 1"),
        row({"a": 1, "lambda": Fraction(-5, 9)}, "<=", 0, "a <= 5/9 lambda"),
        row({"w": 1, "lambda": -1, "a": -1, "b": 2}, "=", 0, "L.Omega relation"),
        row({"w": 1, "a": 1, "b": 2}, ">", 2, "inversion of adjunction along L at Q"),
        row({**mult_q, "lambda": Fraction(-17, 9)}, "<=", 0, "2a+2b+m+mt <= 17/9 lambda"),
        row({"mt": 1, "m": -1}, "<=", 0, "mt <= m"),
        row({"mt": 1, "lambda": Fraction(-13, 9)}, "<", -1, "mt < 13/9 lambda - 1", "derived"),
        row(mult_q, "<", 3, "E2 coefficient < 1", "derived"),
    ]
    on_e1 = base + [row({"a": 1, "b": 1, "m": 1, "mt": 1}, ">", 2, "inversion of adjunction along E2 at O", "branch")]
    on_c = base + [row({"b": 1, "mt": 1}, ">", 1, "inversion of adjunction along E2 at O on C", "branch")]
    on_l = base + [
        row({**mult_q, "mt": 2}, "<", 3, "mult_O < 10/3 lambda - 3 < 1", "derived"),
        row({"w": 1, "a": 3, "b": 2}, ">", 4, "local inequality along L at O", "branch"),
    ]
    lemma = "line and conic meeting tangentially at P"
    return [
        ("case4-O-on-C", lemma, variables, on_c),
        ("case4-O-on-E1", lemma, variables, on_e1),
        ("case4-O-on-L", lemma, variables, on_l),
    ]


def dp1_remark():
    # u = lambda * a and v = lambda * m, where D = a C + Delta with C singular at P
    variables = ["lambda", "u", "v"]
    rows = nonnegative(variables) + [
        lambda_bound(Fraction(3, 2)),
        row({"u": 1, "lambda": Fraction(-1, 3)}, "<=", 0, "a <= 1/3"),
        row({"v": 1, "u": Fraction(1, 2), "lambda": Fraction(-1, 2)}, "<=", 0, "m <= (1 - a)/2"),
        row({"lambda": 1, "u": 4}, ">", 4, "lambda (1 + 4a) > 4", "branch"),
    ]
    return [("dp1-remark", "degree 1, anticanonical curve singular at P", variables, rows)]


COMMENTS = {
    "case1": "Eckardt point: all three lines of T_P pass through P, Q = L1~ meets E1. "
             "Variables: a_i = lambda ord_{L_i}(D), m = mult_P(Omega), mt = mult_Q(Omega~), w = L1.Omega.",
    "case2": "Two lines of T_P through P, Q = L1~ meets E1. Same variables as case 1 without a3.",
    "case3": "T_P = L + C transversal at P, Q = L~ meets E1. a, b = lambda ord of L, C; w = L.Omega. "
             "The local inequality reads w + 2a + b - 2 > 2 - a (L^.E2 = 1, L^.Omega^ = w - m - mt).",
    "case4": "T_P = L + C tangent at P, Q = L~ meets C~ on E1. a, b = lambda ord of L, C; w = L.Omega.",
    "dp1": "Remark on degree 1: u = lambda a and v = lambda m make the system linear; "
           "a <= 1/3 comes from integrating vol(-K - xC).",
}


def documents():
    out = []
    for cid, lemma, variables, rows in case1() + case2() + case3() + case4() + dp1_remark():
        out.append({
            "id": cid,
            "lemma": lemma,
            "variables": variables,
            "constraints": rows,
            "expected": "infeasible",
            "comment": COMMENTS[cid.split("-")[0]],
        })
    return out


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--check", action="store_true")
    parser.add_argument("--out", type=Path, default=OUT_DIR)
    args = parser.parse_args(argv)
    stale = []
    args.out.mkdir(parents=True, exist_ok=True)
    for doc in documents():
        path = args.out / f"{doc['id']}.json"
        text = json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
        if args.check:
            if not path.exists() or path.read_text(encoding="utf-8") != text:
                stale.append(path.name)
        else:
            path.write_text(text, encoding="utf-8")
    for name in stale:
        print(f"stale: {name}")
    return 1 if stale else 0


if __name__ == "__main__":
    raise SystemExit(main())
