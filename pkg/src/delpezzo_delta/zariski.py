"""Zariski decomposition of a big class against a modeled curve set."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NotNegativeDefinite, PseudoeffectivityViolated
from .lattice import CurveSystem, DivisorClass, is_negative_definite, pair, pair_curve, solve


@dataclass(frozen=True)
class ZariskiDecomposition:
    """``D = positive + sum(coefficients[k] * C_support[k])``."""

    support: tuple[int, ...]
    coefficients: tuple[Fraction, ...]
    positive: DivisorClass
    volume: Fraction

    def negative_part(self, sys: CurveSystem) -> DivisorClass:
        out = DivisorClass(0, (Fraction(0),) * len(sys))
        for i, b in zip(self.support, self.coefficients):
            out = out + DivisorClass.curve(sys, i, b)
        return out


def nef_on_system(sys: CurveSystem, N: DivisorClass) -> bool:
    """Nef relative to the modeled curves: ``N . C_i >= 0`` for all i."""
    return all(pair_curve(N, i, sys) >= 0 for i in range(len(sys)))


def negative_coefficients(sys: CurveSystem, D: DivisorClass, support) -> list[Fraction]:
    """Solve ``(D - sum b_i C_i) . C_j = 0`` on ``support``.

    Raises NotNegativeDefinite when the support Gram matrix is not
    negative definite.
    """
    support = list(support)
    if not support:
        return []
    if not is_negative_definite(sys, support):
        names = ", ".join(sys.curves[i] for i in support)
        raise NotNegativeDefinite(f"intersection form of {{{names}}} is not negative definite")
    rhs = [pair_curve(D, i, sys) for i in support]
    return solve(sys.submatrix(support), rhs)


def decompose(sys: CurveSystem, D: DivisorClass) -> ZariskiDecomposition:
    """Zariski decomposition of ``D`` relative to the curves of ``sys``.

    All curves that pair negatively with the current positive part are
    added to the support at once; the loop ends when none remain.
    """
    if D.a_coeff <= 0:
        raise ValueError("D must have a positive coefficient on A")
    support: set[int] = {i for i in range(len(sys)) if pair_curve(D, i, sys) < 0}
    # each pass adds at least one curve
    for _ in range(len(sys) + 1):
        order = sorted(support)
        coeffs = negative_coefficients(sys, D, order)
        bad = [sys.curves[i] for i, b in zip(order, coeffs) if b < 0]
        if bad:
            raise PseudoeffectivityViolated(
                f"negative Zariski coefficient on {', '.join(bad)}"
            )
        N = D
        for i, b in zip(order, coeffs):
            N = N - DivisorClass.curve(sys, i, b)
        violating = {j for j in range(len(sys)) if j not in support and pair_curve(N, j, sys) < 0}
        if not violating:
            return ZariskiDecomposition(tuple(order), tuple(coeffs), N, pair(N, N, sys))
        support |= violating
    raise RuntimeError("Zariski support failed to stabilise")
