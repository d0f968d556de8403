"""Derive the scenario catalog data files from the blowup lattice.

    python tools/derive_scenarios.py [--check]

Writes one JSON document per scenario into
``src/delpezzo_delta/data/scenarios``.  With ``--check`` it only reports
files whose committed contents differ from the derivation.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

from blowup_model import Lattice  # noqa: E402

OUT_DIR = Path(__file__).resolve().parents[1] / "src" / "delpezzo_delta" / "data" / "scenarios"


def q(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def table(*rows):
    return [dict(zip(("from", "to", "c0", "c1", "c2"), map(q, row))) for row in rows]


def coeffs(**kw):
    return {k: q(v) for k, v in kw.items()}


def document(spec, lat: Lattice):
    curves = spec["curves"]
    names = list(curves)
    A = lat.anticanonical
    gram = [[q(lat.dot(curves[a], curves[b])) for b in names] for a in names]
    a_dot = [q(lat.dot(A, curves[a])) for a in names]
    doc = {
        "id": spec["id"],
        "lemma": spec["lemma"],
        "degree": q(lat.dot(A, A)),
        "curves": names,
        "gram": gram,
        "a_dot": a_dot,
        "F": spec["F"],
        "declared_tau": spec.get("tau"),
        "declared_vol": spec.get("vol"),
        "relations": spec.get("relations", []),
        "mode": "truncated" if "truncation" in spec else "full",
        "truncation": spec.get("truncation"),
        "expected_bound": spec["bound"],
        "comment": spec["comment"],
    }
    if "printed" in spec:
        doc["printed"] = spec["printed"]
    if doc["declared_tau"] is not None:
        doc["declared_tau"] = q(doc["declared_tau"])
    return doc


def relation(lhs, rhs):
    return {"lhs": lhs, "rhs": rhs}


A_ONLY = {"A": "1"}

H = Fraction(1, 2)


def cubic_specs():
    lat = Lattice(6)
    A = lat.anticanonical
    t, E1h, E2 = lat.transform, lat.E1_hat, lat.e2
    specs = []

    # a line and nothing else
    L = lat.f(1)
    specs.append({
        "id": "cubic-line", "lemma": "a line on S", "F": "L",
        "curves": {"L": L}, "tau": 1,
        "vol": table((0, 1, 3, -2, -1)),
        "bound": "5/9",
        "comment": "F is the line itself on S (no blowup); the residual conic has square 0 and is not modeled.",
    })

    # Eckardt point P = L1 n L2 n L3
    L1, L2, L3 = lat.f(1), lat.g(2), lat.c(1, 2)
    specs.append({
        "id": "eckardt-Q-on-line", "lemma": "lines passing through P", "F": "E2",
        "curves": {"L1": t(L1, 1, 1), "L2": t(L2, 1), "L3": t(L3, 1), "E1": E1h, "E2": E2},
        "tau": 4,
        "vol": table((0, 1, 3, 0, -H), (1, 2, Fraction(20, 6), Fraction(-4, 6), Fraction(-1, 6)),
                     (2, 4, Fraction(16, 3), Fraction(-8, 3), Fraction(1, 3))),
        "relations": [relation(A_ONLY, coeffs(L1=1, L2=1, L3=1, E1=3, E2=4))],
        "bound": "17/9",
        "comment": "P is an Eckardt point; Q is the point of E1 on the proper transform of L1.",
    })
    specs.append({
        "id": "eckardt-Q-general", "lemma": "Q∉L̃₁∪L̃₂∪L̃₃", "F": "E2",
        "curves": {"L1": t(L1, 1), "L2": t(L2, 1), "L3": t(L3, 1), "E1": E1h, "E2": E2},
        "tau": 3,
        "vol": table((0, 2, 3, 0, -H), (2, 3, 9, -6, 1)),
        "relations": [relation(A_ONLY, coeffs(L1=1, L2=1, L3=1, E1=3, E2=3))],
        "bound": "5/3",
        "comment": "P is an Eckardt point; Q lies on none of the three lines.",
    })

    # two lines through P: P = L1 n L2, L3 the third coplanar line
    specs.append({
        "id": "twoline-Q-on-line", "lemma": "P=L₁∩L₂ and P∉L₃", "F": "E2",
        "curves": {"L1": t(L1, 1, 1), "L2": t(L2, 1), "L3": t(L3), "E1": E1h, "E2": E2},
        "tau": 3,
        "vol": table((0, 1, 3, 0, -H), (1, 2, Fraction(20, 6), Fraction(-4, 6), Fraction(-1, 6)),
                     (2, 3, 4, Fraction(-4, 3), 0)),
        "relations": [relation(A_ONLY, coeffs(L1=1, L2=1, L3=1, E1=2, E2=3))],
        "bound": "49/27",
        "comment": "T_P = L1 + L2 + L3 with P = L1 n L2; Q is on the proper transform of L1.",
    })

    # Geiser side for the two-line case: E1' is a line of S'; the residual
    # conic class of its plane is nu^*(-K_S') - e1 = A - 2e1 + L3.
    # M', N' are the lines of that plane: conics through P of classes A - c34 - e1, A - c56 - e1,
    # where {L3, c34, c56} is a second tritangent plane through L3 = c12.
    Zt = lat.add((1, A), (-2, lat.e1), (1, L3))
    Mt = lat.add((1, A), (-1, lat.c(3, 4)), (-1, lat.e1))
    Nt = lat.add((1, A), (-1, lat.c(5, 6)), (-1, lat.e1))
    base2 = {"L1": t(L1, 1), "L2": t(L2, 1), "L3": t(L3), "E1": E1h, "E2": E2}
    specs.append({
        "id": "twoline-general-conic", "lemma": "does not meet the lines", "F": "E2",
        "curves": {**base2, "Z": t(Zt, 0, 1)},
        "tau": Fraction(5, 2),
        "vol": table((0, 2, 3, 0, -H), (2, Fraction(5, 2), 5, -2, 0)),
        "relations": [
            relation(A_ONLY, coeffs(L1=1, L2=1, L3=1, E1=2, E2=2)),
            relation(A_ONLY, coeffs(Z=H, L1=H, L2=H, E1=2, E2=Fraction(5, 2))),
        ],
        "bound": "59/36",
        "comment": ("T_P = L1 + L2 + L3, P = L1 n L2, Q off L1 and L2; T'_Q = E1' + Z' with Z' a conic. "
                    "Z has class A - 2e1 + L3 - e2: the conic residual to E1' in nu^*(-K_S'), through Q', "
                    "missing P'."),
    })
    specs.append({
        "id": "twoline-general-eckardt", "lemma": "(3−x)², 2 ≤ x ≤ 3", "F": "E2",
        "curves": {**base2, "M": t(Mt, 0, 1), "N": t(Nt, 0, 1)},
        "tau": 3,
        "vol": table((0, 2, 3, 0, -H), (2, 3, 9, -6, 1)),
        "relations": [
            relation(A_ONLY, coeffs(L1=1, L2=1, L3=1, E1=2, E2=2)),
            relation(A_ONLY, coeffs(M=H, N=H, L1=H, L2=H, E1=2, E2=3)),
        ],
        "bound": "5/3",
        "comment": ("T'_Q = E1' + M' + N' with Q' an Eckardt point of S'. M, N are conics through P "
                    "(classes A - l - e1 for the lines l = c34, c56 coplanar with L3 = c12), both through Q."),
    })
    specs.append({
        "id": "twoline-general-generic", "lemma": "P=L₁∩L₂ and P∉L₃", "F": "E2",
        "curves": {**base2, "M": t(Mt, 0, 1), "N": t(Nt, 0)},
        "vol": table((0, 2, 3, 0, -H), (2, Fraction(5, 2), 7, -4, H)),
        "relations": [
            relation(A_ONLY, coeffs(L1=1, L2=1, L3=1, E1=2, E2=2)),
            relation(A_ONLY, coeffs(M=H, N=H, L1=H, L2=H, E1=2, E2=Fraction(5, 2))),
        ],
        "truncation": {"mu": "5/2", "nef": coeffs(E1=1, N=2, M=1), "tail": "simple"},
        "printed": {"head": "79/48", "vol_at_mu": "1/8", "tau_upper": "3", "tail_coefficient": "1/24",
                    "tail": "1/48", "nef_pairing": {"class": coeffs(E1=1, N=2, M=1), "a": "6", "f": "2"}},
        "bound": "5/3",
        "comment": ("T'_Q = E1' + M' + N' with Q' on M' only. Truncated at mu = 5/2 with the nef class "
                    "E1 + 2N + M. The printed proof gives (tau - 5/2)/24 <= 1/48, consistent with vol(5/2) = 1/8."),
    })

    # line and conic meeting transversally at P; C = A - L
    Lc = lat.f(1)
    Cc = lat.add((1, A), (-1, Lc))
    specs.append({
        "id": "lineconic-Q-on-L", "lemma": "meet transversally at P", "F": "E2",
        "curves": {"L": t(Lc, 1, 1), "C": t(Cc, 1), "E1": E1h, "E2": E2},
        "tau": 3,
        "vol": table((0, 1, 3, 0, -H), (1, Fraction(14, 5), Fraction(20, 6), Fraction(-4, 6), Fraction(-1, 6)),
                     (Fraction(14, 5), 3, 36, -24, 4)),
        "relations": [relation(A_ONLY, coeffs(L=1, C=1, E1=2, E2=3))],
        "bound": "9/5",
        "comment": "T_P = L + C meeting transversally at P; Q is on the proper transform of L.",
    })
    specs.append({
        "id": "lineconic-Q-on-C", "lemma": "Q = C̃∩E₁", "F": "E2",
        "curves": {"L": t(Lc, 1), "C": t(Cc, 1, 1), "E1": E1h, "E2": E2},
        "tau": 3,
        "vol": table((0, 2, 3, 0, -H), (2, 3, 9, -6, 1)),
        "relations": [relation(A_ONLY, coeffs(L=1, C=1, E1=2, E2=3))],
        "bound": "5/3",
        "comment": "T_P = L + C meeting transversally at P; Q is on the proper transform of C.",
    })
    specs.append({
        "id": "tangential", "lemma": "meet tangentially at P", "F": "E2",
        "curves": {"L": t(Lc, 1, 1), "C": t(Cc, 1, 1), "E1": E1h, "E2": E2},
        "tau": 4,
        "vol": table((0, 1, 3, 0, -H), (1, 2, Fraction(20, 6), Fraction(-4, 6), Fraction(-1, 6)),
                     (2, 4, Fraction(16, 3), Fraction(-8, 3), Fraction(1, 3))),
        "relations": [relation(A_ONLY, coeffs(L=1, C=1, E1=2, E2=4))],
        "bound": "17/9",
        "comment": ("T_P = L + C tangent at P, so the proper transforms of L and C meet E1 at the same "
                    "point Q and are disjoint after the second blowup."),
    })

    # one line + conic, Q general; Geiser contracts G = C~ = A - L - e1
    # l' (conic case): class A - l0 - e1 with l0 skew to L; Z' = nu^*(-K_S') - l'
    l0 = lat.f(3)
    Lg = lat.c(1, 2)
    Cg = lat.add((1, A), (-1, Lg))
    nuK = lat.add((2, A), (-1, Lg), (-2, lat.e1))
    base1 = {"L": t(Lg, 1), "C": t(Cg, 1), "E1": E1h, "E2": E2}
    specs.append({
        "id": "oneline-general-cubic", "lemma": "Q∉L̃∪C̃", "F": "E2",
        "curves": {**base1, "T": t(nuK, 0, 2)},
        "tau": Fraction(5, 2),
        "vol": table((0, 2, 3, 0, -H), (2, Fraction(17, 7), Fraction(44, 12), Fraction(-8, 12), Fraction(-4, 12)),
                     (Fraction(17, 7), Fraction(5, 2), 100, -80, 16)),
        "relations": [
            relation(A_ONLY, coeffs(L=1, C=1, E1=2, E2=2)),
            relation(A_ONLY, coeffs(T=H, L=H, E1=Fraction(3, 2), E2=Fraction(5, 2))),
        ],
        "bound": "103/63",
        "comment": ("T_P = L + C, Q off L and C; T'_Q irreducible, the pullback of -K_S' singular at Q', "
                    "class 2A - L - 2e1 - 2e2."),
    })
    lt = lat.add((1, A), (-1, l0), (-1, lat.e1))
    Zt1 = lat.add((1, nuK), (-1, lt))
    specs.append({
        "id": "oneline-general-conic", "lemma": "Q∉L̃∪C̃", "F": "E2",
        "curves": {**base1, "l": t(lt, 0, 1), "Z": t(Zt1, 0, 1)},
        "vol": table((0, 2, 3, 0, -H), (2, Fraction(5, 2), Fraction(34, 6), Fraction(-16, 6), Fraction(1, 6))),
        "relations": [
            relation(A_ONLY, coeffs(L=1, C=1, E1=2, E2=2)),
            relation(A_ONLY, coeffs(l=H, Z=H, L=H, E1=Fraction(3, 2), E2=Fraction(5, 2))),
        ],
        "truncation": {"mu": "5/2", "nef": coeffs(l=1, Z=2, L=1), "tail": "simple"},
        "printed": {"head": "709/432", "vol_at_mu": "1/24", "tau_upper": "3", "tail_coefficient": "1/48",
                    "tail": "1/96", "nef_pairing": {"class": coeffs(l=1, Z=2, L=1), "a": "9", "f": "3"}},
        "bound": "89/54",
        "comment": ("T'_Q = l' + Z' with l' a line and Z' a conic of S', Q' = l' n Z'. l is a conic "
                    "through P on S (class A - l0 - e1, l0 skew to L). The printed proof gives the tail as "
                    "(tau - 5/2)/48 <= 1/96, but vol(5/2) = 1/24 gives (tau - 5/2)/72 <= 1/144; "
                    "709/432 + 1/144 = 89/54 matches the printed total."),
    })
    # three lines: l is a line of S meeting L; M, N conics through P whose residual
    # lines m0, n0 lie in a plane with the third line t of the plane {L, l, t}
    lt3 = lat.f(1)  # meets L = c12, plane {f1, g2, c12}
    Mt3 = lat.add((1, A), (-1, lat.f(3)), (-1, lat.e1))
    Nt3 = lat.add((1, A), (-1, lat.c(2, 3)), (-1, lat.e1))
    specs.append({
        "id": "oneline-general-threelines", "lemma": "Q∉L̃∪C̃", "F": "E2",
        "curves": {**base1, "l": t(lt3), "M": t(Mt3, 0, 1), "N": t(Nt3, 0, 1)},
        "vol": table((0, 2, 3, 0, -H), (2, Fraction(5, 2), Fraction(92, 12), Fraction(-56, 12), Fraction(8, 12))),
        "relations": [
            relation(A_ONLY, coeffs(L=1, C=1, E1=2, E2=2)),
            relation(A_ONLY, coeffs(l=H, M=H, N=H, L=H, E1=Fraction(3, 2), E2=Fraction(5, 2))),
        ],
        "truncation": {"mu": "5/2", "nef": coeffs(l=2, M=1, N=1), "tail": "barycenter"},
        "printed": {"head": "89/54", "vol_at_mu": "1/6", "tau_upper": "3", "tail_coefficient": "1/27",
                    "tail": "1/54", "nef_pairing": {"class": coeffs(l=2, M=1, N=1), "a": "6", "f": "2"}},
        "bound": "5/3",
        "comment": ("T'_Q = l' + M' + N' with Q' = M' n N'. l is a line of S meeting L; M, N are conics "
                    "through P, with residual lines in a plane with the third line of the plane of L and l."),
    })

    # irreducible T_P, nodal or cuspidal at P: class A, proper transform A - 2e1
    Ct = lat.add((1, A), (-2, lat.e1))
    specs.append({
        "id": "irreducible-Q-on-C", "lemma": "T_P is an irreducible cubic", "F": "E2",
        "curves": {"C": t(A, 2, 1), "E1": E1h, "E2": E2},
        "tau": 3,
        "vol": table((0, 2, 3, 0, -H), (2, 3, 9, -6, 1)),
        "relations": [relation(A_ONLY, coeffs(C=1, E1=2, E2=3))],
        "bound": "5/3",
        "comment": "T_P irreducible with a double point at P; Q on the proper transform of T_P.",
    })
    nuK3 = lat.add((2, A), (-3, lat.e1))
    base3 = {"C": Ct, "E1": E1h, "E2": E2}
    specs.append({
        "id": "irreducible-general-cubic", "lemma": "T_P is an irreducible cubic", "F": "E2",
        "curves": {**base3, "T": t(nuK3, 0, 2)},
        "tau": Fraction(5, 2),
        "vol": table((0, Fraction(12, 5), 3, 0, -H), (Fraction(12, 5), Fraction(5, 2), 75, -60, 12)),
        "relations": [
            relation(A_ONLY, coeffs(C=1, E1=2, E2=2)),
            relation(A_ONLY, coeffs(T=H, E1=Fraction(3, 2), E2=Fraction(5, 2))),
        ],
        "bound": "49/30",
        "comment": "T_P irreducible, Q off its proper transform; T'_Q irreducible with class 2A - 3e1 - 2e2.",
    })
    # lines of S' off P' are conics A - t - e1 through P
    lc = lat.add((1, A), (-1, lat.f(1)), (-1, lat.e1))
    Zc = lat.add((1, nuK3), (-1, lc))
    specs.append({
        "id": "irreducible-general-conic", "lemma": "T_P is an irreducible cubic", "F": "E2",
        "curves": {**base3, "l": t(lc, 0, 1), "Z": t(Zc, 0, 1)},
        "tau": Fraction(5, 2),
        "vol": table((0, 2, 3, 0, -H), (2, Fraction(5, 2), 5, -2, 0)),
        "relations": [
            relation(A_ONLY, coeffs(C=1, E1=2, E2=2)),
            relation(A_ONLY, coeffs(l=H, Z=H, E1=Fraction(3, 2), E2=Fraction(5, 2))),
        ],
        "bound": "59/36",
        "comment": "T'_Q = l' + Z'; l has class A - f1 - e1 (a conic through P), Z = nu^*(-K_S') - l.",
    })
    tri = [lat.f(1), lat.g(2), lat.c(1, 2)]
    lm, mm, nm = (lat.add((1, A), (-1, x), (-1, lat.e1)) for x in tri)
    specs.append({
        "id": "irreducible-general-eckardt", "lemma": "T_P is an irreducible cubic", "F": "E2",
        "curves": {**base3, "l": t(lm, 0, 1), "M": t(mm, 0, 1), "N": t(nm, 0, 1)},
        "tau": 3,
        "vol": table((0, 2, 3, 0, -H), (2, 3, 9, -6, 1)),
        "relations": [
            relation(A_ONLY, coeffs(C=1, E1=2, E2=2)),
            relation(A_ONLY, coeffs(l=H, M=H, N=H, E1=Fraction(3, 2), E2=3)),
        ],
        "bound": "5/3",
        "comment": "T'_Q = l' + M' + N' concurrent at Q'; the three are conics A - t - e1 for a tritangent plane {t}.",
    })
    specs.append({
        "id": "irreducible-general-generic", "lemma": "T_P is an irreducible cubic", "F": "E2",
        "curves": {**base3, "l": t(lm), "M": t(mm, 0, 1), "N": t(nm, 0, 1)},
        "vol": table((0, 2, 3, 0, -H), (2, Fraction(5, 2), 7, -4, H)),
        "relations": [
            relation(A_ONLY, coeffs(C=1, E1=2, E2=2)),
            relation(A_ONLY, coeffs(l=H, M=H, N=H, E1=Fraction(3, 2), E2=Fraction(5, 2))),
        ],
        # the printed 2l + M + N pairs to 8 - 2x here (l has A-degree 2); adding the nef
        # class E1 + 2l + M + N (pairing 8 - 3x) twice recovers the printed bound tau <= 3
        "truncation": {"mu": "5/2", "nef": coeffs(E1=2, l=6, M=3, N=3), "tail": "simple"},
        "printed": {"head": "79/48", "vol_at_mu": "1/8", "tau_upper": "3", "tail_coefficient": "1/24",
                    "tail": "1/48", "nef_pairing": {"class": coeffs(l=2, M=1, N=1), "a": "6", "f": "2"}},
        "bound": "5/3",
        "comment": ("T'_Q = l' + M' + N' with Q' = M' n N' not on l'. The printed nef class 2l + M + N "
                    "pairs to 8 - 2x, not the printed 6 - 2x, because l is a conic through P on S. "
                    "The truncation uses 2E1 + 6l + 3M + 3N = 2(E1 + 2l + M + N) + (2l + M + N), which is "
                    "nef on the modeled curves and pairs to 24 - 8x, so tau <= 3 as printed. "
                    "E1 + 2l + M + N alone gives tau <= 8/3."),
    })
    return lat, specs


def dp1_specs():
    lat = Lattice(8)
    A = lat.anticanonical
    t, E1h, E2 = lat.transform, lat.E1_hat, lat.e2
    specs = [
        {
            "id": "dp1-ordinary", "lemma": "so that τ(E₁)=1", "F": "E1",
            "curves": {"E1": lat.e1}, "tau": 1,
            "vol": table((0, 1, 1, 0, -1)),
            "bound": "2/3",
            # the printed integrand is (1 - x^2)^2
            "printed": {"integral": "2/3", "integrand": ["1", "0", "-2", "0", "1"]},
            "comment": ("Degree 1, the anticanonical curve through P is smooth there; its proper transform "
                        "has square 0 and is not modeled. The integrand is printed as (1 - x^2)^2 but "
                        "the printed value 2/3 is the integral of 1 - x^2, which is used; the "
                        "printed integrand is logged as an erratum."),
        },
        {
            "id": "dp1-singular", "lemma": "so that τ(E₁)=2", "F": "E1",
            "curves": {"C": t(A, 2), "E1": lat.e1}, "tau": 2,
            "vol": table((0, H, 1, 0, -1), (H, 2, Fraction(4, 3), Fraction(-4, 3), Fraction(1, 3))),
            "relations": [relation(A_ONLY, coeffs(C=1, E1=2))],
            "bound": "5/6",
            "comment": "Degree 1, the anticanonical curve C through P is nodal or cuspidal at P.",
        },
        {
            "id": "dp1-Q-on-C", "lemma": "= 11/9", "F": "E2",
            "curves": {"C": t(A, 2, 1), "E1": E1h, "E2": E2}, "tau": 3,
            "vol": table((0, Fraction(2, 3), 1, 0, -H), (Fraction(2, 3), 3, Fraction(9, 7), Fraction(-6, 7), Fraction(1, 7))),
            "relations": [relation(A_ONLY, coeffs(C=1, E1=2, E2=3))],
            "bound": "11/9",
            "printed": {"F": "E1"},
            "comment": ("Degree 1, C singular at P, Q on the proper transform of C. The printed step names F = E1 "
                        "when applying the vanishing-order bound here; the displayed integrand uses E2, "
                        "which is what is modeled."),
        },
        {
            "id": "dp1-Q-off-C", "lemma": "dx = 1,", "F": "E2",
            "curves": {"C": t(A, 2), "E1": E1h, "E2": E2}, "tau": 2,
            "vol": table((0, 1, 1, 0, -H), (1, 2, 2, -2, H)),
            "relations": [relation(A_ONLY, coeffs(C=1, E1=2, E2=2))],
            "bound": "1",
            "printed": {"F": "E1"},
            "comment": ("Degree 1, C singular at P, Q off the proper transform of C. The printed step names F = E1 "
                        "at this step as well; E2 is modeled."),
        },
    ]
    return lat, specs


def all_documents():
    docs = []
    for lat, specs in (cubic_specs(), dp1_specs()):
        docs.extend(document(s, lat) for s in specs)
    return docs


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--check", action="store_true")
    parser.add_argument("--out", type=Path, default=OUT_DIR)
    args = parser.parse_args(argv)
    stale = []
    args.out.mkdir(parents=True, exist_ok=True)
    for doc in all_documents():
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
