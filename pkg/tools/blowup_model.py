"""Blowup lattice used to derive the committed scenario Gram data.

Pic of a del Pezzo surface of degree 9 - r is modeled as I_{1,r} with
basis h, f1..fr; the two point blowups add e1 (total transform of the
first exceptional curve) and e2.  A curve's proper transform is its
class minus multiplicity times the exceptional classes, so all Gram
entries follow from the diagonal form diag(1, -1, ..., -1).
"""

from __future__ import annotations

from fractions import Fraction


class Lattice:
    def __init__(self, r: int):
        self.r = r
        self.names = ["h"] + [f"f{i}" for i in range(1, r + 1)] + ["e1", "e2"]
        self.signs = [1] + [-1] * (r + 2)

    def vec(self, **coeffs) -> tuple[Fraction, ...]:
        out = [Fraction(0)] * len(self.names)
        for name, c in coeffs.items():
            out[self.names.index(name)] += Fraction(c)
        return tuple(out)

    def add(self, *terms):
        """``add((c1, v1), (c2, v2), ...)`` -> sum of c*v."""
        out = [Fraction(0)] * len(self.names)
        for c, v in terms:
            for k, x in enumerate(v):
                out[k] += Fraction(c) * x
        return tuple(out)

    def dot(self, u, v) -> Fraction:
        return sum((s * a * b for s, a, b in zip(self.signs, u, v)), Fraction(0))

    # classes on the del Pezzo surface
    @property
    def anticanonical(self):
        return self.vec(h=3, **{f"f{i}": -1 for i in range(1, self.r + 1)})

    def f(self, i):
        return self.vec(**{f"f{i}": 1})

    def c(self, i, j):
        return self.vec(h=1, **{f"f{i}": -1, f"f{j}": -1})

    def g(self, j):
        return self.vec(h=2, **{f"f{k}": -1 for k in range(1, self.r + 1) if k != j})

    @property
    def e1(self):
        return self.vec(e1=1)

    @property
    def e2(self):
        return self.vec(e2=1)

    def transform(self, cls, mult_p=0, mult_q=0):
        """Proper transform: subtract multiplicities at P (e1) and Q (e2)."""
        return self.add((1, cls), (-mult_p, self.e1), (-mult_q, self.e2))

    @property
    def E1_hat(self):
        """Proper transform of E1 after blowing up Q on it."""
        return self.add((1, self.e1), (-1, self.e2))
