"""Exact intersection pairings on a finite configuration of curves.

A :class:`CurveSystem` records the numerical data of a blown-up surface
that the rest of the engine needs: the degree ``A^2`` of the pulled-back
anticanonical class ``A``, the Gram matrix of a list of negative curves
and the degrees ``A . C_i``.  Divisor classes are rational combinations
of ``A`` and those curves.

Everything is computed with :class:`fractions.Fraction`; floats are
rejected at the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Mapping, Sequence

Rational = Fraction


def to_rational(value) -> Fraction:
    """Convert ``value`` to a Fraction, refusing floats and booleans.

    Strings may be integers or ``"p/q"``.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, _RationalABC):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(ch in text for ch in ".eE"):
            raise ValueError(f"not an exact rational: {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot use {type(value).__name__} {value!r} as an exact rational")


def format_rational(value: Fraction) -> str:
    """Render as ``"p/q"``, or ``"p"`` when the denominator is 1."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def determinant(matrix: Sequence[Sequence[Fraction]]) -> Fraction:
    """Exact determinant by fraction-valued Gaussian elimination."""
    rows = [list(map(Fraction, row)) for row in matrix]
    n = len(rows)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        p = rows[col][col]
        det *= p
        for r in range(col + 1, n):
            factor = rows[r][col] / p
            if factor:
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
    return det


def solve(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> list[Fraction]:
    """Solve ``matrix @ x = rhs`` exactly.

    Raises ZeroDivisionError if the matrix is singular.
    """
    n = len(matrix)
    aug = [list(map(Fraction, row)) + [Fraction(b)] for row, b in zip(matrix, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


@dataclass(frozen=True)
class CurveSystem:
    """Numerical data of ``A`` and a list of negative curves.

    ``gram[i][j]`` is ``C_i . C_j`` and ``a_dot[i]`` is ``A . C_i``.
    """

    degree: Fraction
    curves: tuple[str, ...]
    gram: tuple[tuple[Fraction, ...], ...]
    a_dot: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "degree", to_rational(self.degree))
        object.__setattr__(self, "curves", tuple(self.curves))
        object.__setattr__(
            self, "gram", tuple(tuple(to_rational(v) for v in row) for row in self.gram)
        )
        object.__setattr__(self, "a_dot", tuple(to_rational(v) for v in self.a_dot))

    @classmethod
    def from_pairings(
        cls,
        degree,
        curves: Sequence[str],
        self_intersections: Mapping[str, object],
        a_dot: Mapping[str, object],
        pairs: Mapping[tuple[str, str], object] = (),
    ) -> "CurveSystem":
        """Build a system from named data; unlisted off-diagonal pairs are 0."""
        index = {name: i for i, name in enumerate(curves)}
        n = len(curves)
        gram = [[Fraction(0)] * n for _ in range(n)]
        for name, value in self_intersections.items():
            gram[index[name]][index[name]] = to_rational(value)
        for (u, v), value in dict(pairs).items():
            gram[index[u]][index[v]] = gram[index[v]][index[u]] = to_rational(value)
        return cls(degree, tuple(curves), gram, [a_dot[name] for name in curves])

    def __len__(self):
        return len(self.curves)

    def index(self, name: str) -> int:
        try:
            return self.curves.index(name)
        except ValueError:
            raise KeyError(f"no curve named {name!r}") from None

    def problems(self) -> list[str]:
        """List violated invariants; empty when the system is well formed."""
        out = []
        n = len(self.curves)
        if len(set(self.curves)) != n:
            out.append("curve names are not unique")
        if len(self.gram) != n or any(len(row) != n for row in self.gram):
            out.append(f"gram must be {n}x{n}")
            return out
        if len(self.a_dot) != n:
            out.append(f"a_dot must have {n} entries")
        if self.degree <= 0:
            out.append("degree must be positive")
        for i in range(n):
            if self.gram[i][i] >= 0:
                out.append(f"curve {self.curves[i]} has non-negative self-intersection")
            for j in range(i + 1, n):
                if self.gram[i][j] != self.gram[j][i]:
                    out.append(f"gram is not symmetric at ({self.curves[i]}, {self.curves[j]})")
        for name, value in zip(self.curves, self.a_dot):
            if value < 0:
                out.append(f"A . {name} is negative")
        return out

    def submatrix(self, subset: Iterable[int]) -> list[list[Fraction]]:
        idx = list(subset)
        return [[self.gram[i][j] for j in idx] for i in idx]


@dataclass(frozen=True)
class DivisorClass:
    """``a_coeff * A + sum(curve_coeffs[i] * C_i)``."""

    a_coeff: Fraction
    curve_coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "a_coeff", to_rational(self.a_coeff))
        object.__setattr__(self, "curve_coeffs", tuple(to_rational(c) for c in self.curve_coeffs))

    @classmethod
    def anticanonical(cls, sys: CurveSystem, coeff=1) -> "DivisorClass":
        return cls(coeff, (Fraction(0),) * len(sys))

    @classmethod
    def curve(cls, sys: CurveSystem, which, coeff=1) -> "DivisorClass":
        i = sys.index(which) if isinstance(which, str) else which
        if not 0 <= i < len(sys):
            raise IndexError(f"curve index {i} out of range")
        coeffs = [Fraction(0)] * len(sys)
        coeffs[i] = to_rational(coeff)
        return cls(0, coeffs)

    @classmethod
    def from_map(cls, sys: CurveSystem, coeffs: Mapping[str, object]) -> "DivisorClass":
        """Build from ``{"A": a, "<curve>": c, ...}``."""
        curve_coeffs = [Fraction(0)] * len(sys)
        a_coeff = Fraction(0)
        for name, value in coeffs.items():
            if name == "A":
                a_coeff = to_rational(value)
            else:
                curve_coeffs[sys.index(name)] = to_rational(value)
        return cls(a_coeff, curve_coeffs)

    def to_map(self, sys: CurveSystem) -> dict[str, Fraction]:
        out = {}
        if self.a_coeff:
            out["A"] = self.a_coeff
        for name, c in zip(sys.curves, self.curve_coeffs):
            if c:
                out[name] = c
        return out

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        _check_dims(self, other)
        return DivisorClass(
            self.a_coeff + other.a_coeff,
            tuple(a + b for a, b in zip(self.curve_coeffs, other.curve_coeffs)),
        )

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(-self.a_coeff, tuple(-c for c in self.curve_coeffs))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        return self + (-other)

    def __mul__(self, scalar) -> "DivisorClass":
        s = to_rational(scalar)
        return DivisorClass(s * self.a_coeff, tuple(s * c for c in self.curve_coeffs))

    __rmul__ = __mul__


def _check_dims(u: DivisorClass, v: DivisorClass, sys: CurveSystem | None = None):
    n = len(u.curve_coeffs)
    if len(v.curve_coeffs) != n or (sys is not None and len(sys) != n):
        raise IndexError("divisor classes are indexed against different curve systems")


def pair(u: DivisorClass, v: DivisorClass, sys: CurveSystem) -> Fraction:
    """Intersection number of two classes on ``sys``."""
    _check_dims(u, v, sys)
    total = u.a_coeff * v.a_coeff * sys.degree
    for i, ai in enumerate(sys.a_dot):
        total += (u.a_coeff * v.curve_coeffs[i] + v.a_coeff * u.curve_coeffs[i]) * ai
    for i, ui in enumerate(u.curve_coeffs):
        if not ui:
            continue
        row = sys.gram[i]
        for j, vj in enumerate(v.curve_coeffs):
            if vj:
                total += ui * vj * row[j]
    return total


def pair_curve(u: DivisorClass, i: int, sys: CurveSystem) -> Fraction:
    """``u . C_i`` without building the basis class."""
    total = u.a_coeff * sys.a_dot[i]
    row = sys.gram[i]
    for j, c in enumerate(u.curve_coeffs):
        if c:
            total += c * row[j]
    return total


def leading_minors(matrix: Sequence[Sequence[Fraction]]) -> list[Fraction]:
    n = len(matrix)
    return [determinant([row[:k] for row in matrix[:k]]) for k in range(1, n + 1)]


def is_negative_definite(sys: CurveSystem, subset: Iterable[int]) -> bool:
    """Sylvester's criterion: ``(-1)^k`` times the k-th leading minor is positive."""
    idx = list(subset)
    if not idx:
        raise ValueError("subset must be non-empty")
    for i in idx:
        if not 0 <= i < len(sys):
            raise IndexError(f"curve index {i} out of range")
    minors = leading_minors(sys.submatrix(idx))
    return all((-1) ** k * m > 0 for k, m in enumerate(minors, start=1))


def check_decomposition(sys: CurveSystem, lhs: DivisorClass, rhs: DivisorClass) -> bool:
    """True iff ``lhs - rhs`` pairs to zero with ``A`` and every curve.

    This only sees the span of the modeled curves; it is a numerical
    consistency check, not a proof of linear equivalence.
    """
    diff = lhs - rhs
    basis = [DivisorClass.anticanonical(sys)] + [DivisorClass.curve(sys, i) for i in range(len(sys))]
    return all(pair(diff, w, sys) == 0 for w in basis)
