"""Piecewise-quadratic volume functions ``x -> vol(A - xF)`` and their integrals.

Inside a Zariski chamber the negative part of ``A - xF`` is affine in
``x``, so the volume is a quadratic polynomial.  :func:`sweep` walks the
chambers from ``x = 0`` and stops where the volume vanishes, or at a
caller-supplied truncation point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import (
    DegenerateBound,
    DeltaError,
    IncompleteSweep,
    IrrationalThreshold,
    NotNef,
    PseudoeffectivityViolated,
    RangeError,
)
from .lattice import CurveSystem, DivisorClass, format_rational, pair, pair_curve, to_rational
from .zariski import decompose, negative_coefficients, nef_on_system

Quadratic = tuple[Fraction, Fraction, Fraction]


def _poly(c0, c1=0, c2=0) -> Quadratic:
    return (to_rational(c0), to_rational(c1), to_rational(c2))


def evaluate(piece: Quadratic, x: Fraction) -> Fraction:
    c0, c1, c2 = piece
    return c0 + x * (c1 + x * c2)


def format_poly(coeffs) -> str:
    """Render ascending coefficients as ``3 - 1/2*x^2``."""
    terms = []
    for power, c in enumerate(coeffs):
        if c == 0:
            continue
        mag = abs(c)
        unit = "x" if power == 1 else f"x^{power}"
        if power == 0:
            body = format_rational(mag)
        elif mag == 1:
            body = unit
        else:
            body = f"{format_rational(mag)}*{unit}"
        terms.append(("-" if c < 0 else "+", body))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    out = [f"-{first}" if first_sign == "-" else first]
    out += [f"{sign} {body}" for sign, body in terms[1:]]
    return " ".join(out)


def _antiderivative(piece: Quadratic, x: Fraction) -> Fraction:
    c0, c1, c2 = piece
    return x * (c0 + x * (c1 / 2 + x * c2 / 3))


@dataclass(frozen=True)
class PiecewisePoly:
    """Quadratic pieces on ``[breakpoints[k], breakpoints[k+1]]``.

    ``complete`` is True when the last breakpoint is where the volume
    vanishes and False when the sweep was truncated there.
    """

    breakpoints: tuple[Fraction, ...]
    pieces: tuple[Quadratic, ...]
    complete: bool = True

    def __post_init__(self):
        bps = tuple(to_rational(b) for b in self.breakpoints)
        pieces = tuple(_poly(*p) for p in self.pieces)
        if len(bps) != len(pieces) + 1 or not pieces:
            raise ValueError("need one more breakpoint than pieces, and at least one piece")
        if any(a >= b for a, b in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "pieces", pieces)

    @classmethod
    def from_rows(cls, rows: Sequence[tuple], complete: bool = True) -> "PiecewisePoly":
        """Build from ``(from, to, c0, c1, c2)`` rows."""
        rows = [tuple(to_rational(v) for v in row) for row in rows]
        for (_, hi, *_), (lo, *_) in zip(rows, rows[1:]):
            if hi != lo:
                raise ValueError("pieces must be contiguous")
        bps = [rows[0][0]] + [row[1] for row in rows]
        return cls(tuple(bps), tuple(tuple(row[2:]) for row in rows), complete)

    def rows(self) -> list[tuple[Fraction, Fraction, Fraction, Fraction, Fraction]]:
        return [(lo, hi, *p) for lo, hi, p in zip(self.breakpoints, self.breakpoints[1:], self.pieces)]

    @property
    def start(self) -> Fraction:
        return self.breakpoints[0]

    @property
    def end(self) -> Fraction:
        return self.breakpoints[-1]

    def same_table(self, other: "PiecewisePoly") -> bool:
        return self.breakpoints == other.breakpoints and self.pieces == other.pieces

    def piece_index(self, x) -> int:
        x = to_rational(x)
        if not self.start <= x <= self.end:
            raise RangeError(f"x = {x} outside [{self.start}, {self.end}]")
        for k, hi in enumerate(self.breakpoints[1:]):
            if x <= hi:
                return k
        return len(self.pieces) - 1

    def __call__(self, x) -> Fraction:
        x = to_rational(x)
        return evaluate(self.pieces[self.piece_index(x)], x)

    def problems(self, degree=None) -> list[str]:
        """Violated invariants: continuity, monotonicity and endpoint values."""
        out = []
        for k in range(len(self.pieces) - 1):
            x = self.breakpoints[k + 1]
            if evaluate(self.pieces[k], x) != evaluate(self.pieces[k + 1], x):
                out.append(f"discontinuous at x = {x}")
        for k, (c0, c1, c2) in enumerate(self.pieces):
            lo, hi = self.breakpoints[k], self.breakpoints[k + 1]
            # a quadratic is non-increasing on [lo, hi] iff its derivative is <= 0 at both ends
            if c1 + 2 * c2 * lo > 0 or c1 + 2 * c2 * hi > 0:
                out.append(f"increasing somewhere on [{lo}, {hi}]")
        if degree is not None and self(self.start) != to_rational(degree):
            out.append(f"value at {self.start} is {self(self.start)}, expected {degree}")
        last = self(self.end)
        if self.complete and last != 0:
            out.append(f"complete sweep ends with value {last}")
        if not self.complete and last <= 0:
            out.append(f"truncated sweep ends with non-positive value {last}")
        return out


@dataclass(frozen=True)
class Chamber:
    """One Zariski chamber: the negative part is ``b_const + x * b_slope`` on ``support``."""

    lo: Fraction
    hi: Fraction
    support: tuple[int, ...]
    b_const: tuple[Fraction, ...]
    b_slope: tuple[Fraction, ...]
    volume: Quadratic

    def coefficients(self, x) -> tuple[Fraction, ...]:
        x = to_rational(x)
        return tuple(c + x * s for c, s in zip(self.b_const, self.b_slope))


@dataclass(frozen=True)
class Sweep:
    chambers: tuple[Chamber, ...]
    complete: bool
    merged: PiecewisePoly = field(init=False)

    def __post_init__(self):
        bps = [self.chambers[0].lo]
        pieces: list[Quadratic] = []
        for ch in self.chambers:
            if pieces and pieces[-1] == ch.volume:
                bps[-1] = ch.hi
            else:
                pieces.append(ch.volume)
                bps.append(ch.hi)
        object.__setattr__(self, "merged", PiecewisePoly(tuple(bps), tuple(pieces), self.complete))


def _divisor(sys: CurveSystem, f: int, x: Fraction) -> DivisorClass:
    return DivisorClass.anticanonical(sys) - DivisorClass.curve(sys, f, x)


def _affine_negative_part(sys, f, support, x0):
    """Affine coefficients ``b(x) = b_const + x * b_slope`` on ``support``."""
    if not support:
        return [], []
    # b(x0) fixes the value; the slope solves the same system with rhs d/dx (D . C_i)
    at_x0 = negative_coefficients(sys, _divisor(sys, f, x0), support)
    slope_rhs = DivisorClass.curve(sys, f, -1)
    slope = negative_coefficients(sys, slope_rhs, support)
    const = [b - x0 * s for b, s in zip(at_x0, slope)]
    return const, slope


def _pairing_affine(sys, f, support, const, slope, j):
    """``N(x) . C_j`` as ``(value at 0, slope)``."""
    v0 = sys.a_dot[j]
    v1 = -sys.gram[j][f]
    for i, c, s in zip(support, const, slope):
        v0 -= c * sys.gram[i][j]
        v1 -= s * sys.gram[i][j]
    return v0, v1


def _volume_poly(sys, f, support, const, slope) -> Quadratic:
    # vol = D^2 - sum b_i (D . C_i), with D . C_i = a_i - x F.C_i
    c0 = sys.degree
    c1 = -2 * sys.a_dot[f]
    c2 = sys.gram[f][f]
    for i, bc, bs in zip(support, const, slope):
        r0, r1 = sys.a_dot[i], -sys.gram[i][f]
        c0 -= bc * r0
        c1 -= bc * r1 + bs * r0
        c2 -= bs * r1
    return (c0, c1, c2)


def _rational_sqrt(value: Fraction):
    from math import isqrt

    if value < 0:
        return None
    n, d = value.numerator, value.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _first_root(poly: Quadratic, lo: Fraction, hi: Fraction):
    """Smallest root of ``poly`` in ``(lo, hi]`` given ``poly(lo) > 0``, or None."""
    c0, c1, c2 = poly
    at_hi = evaluate(poly, hi)
    crosses = at_hi <= 0
    if not crosses and c2 > 0:
        vertex = -c1 / (2 * c2)
        crosses = lo < vertex < hi and evaluate(poly, vertex) <= 0
    if not crosses:
        return None
    if c2 == 0:
        return -c0 / c1
    disc = c1 * c1 - 4 * c0 * c2
    root = _rational_sqrt(disc)
    if root is None:
        raise IrrationalThreshold(
            f"volume {c0} + {c1}x + {c2}x^2 vanishes at an irrational point in ({lo}, {hi}]"
        )
    candidates = sorted(r for r in ((-c1 - root) / (2 * c2), (-c1 + root) / (2 * c2)) if lo < r <= hi)
    return candidates[0]


def _resolve_support(sys, f, x0, support):
    """Adjust the support at ``x0`` to the chamber entered just after it."""
    support = set(support)
    for _ in range(2 * len(sys) + 2):
        order = sorted(support)
        const, slope = _affine_negative_part(sys, f, order, x0)
        changed = False
        for i, c, s in zip(order, const, slope):
            b = c + x0 * s
            if b < 0:
                raise PseudoeffectivityViolated(f"coefficient of {sys.curves[i]} is {b} at x = {x0}")
            if b == 0 and s < 0:
                support.discard(i)
                changed = True
        for j in range(len(sys)):
            if j in support:
                continue
            v0, v1 = _pairing_affine(sys, f, order, const, slope, j)
            value = v0 + x0 * v1
            if value < 0 or (value == 0 and v1 < 0):
                support.add(j)
                changed = True
        if not changed:
            return order, const, slope
    raise RuntimeError(f"chamber support did not stabilise at x = {x0}")


def sweep(sys: CurveSystem, F, stop=None) -> Sweep:
    """Walk the Zariski chambers of ``A - xF`` from ``x = 0``.

    The walk ends where the volume first vanishes or at ``stop``,
    whichever comes first.
    """
    f = sys.index(F) if isinstance(F, str) else F
    if sys.gram[f][f] >= 0:
        raise ValueError("F must have negative self-intersection")
    if sys.a_dot[f] < 0:
        raise ValueError("A . F must be non-negative")
    stop = None if stop is None else to_rational(stop)
    x0 = Fraction(0)
    support = decompose(sys, _divisor(sys, f, x0)).support
    chambers: list[Chamber] = []
    for _ in range(4 * len(sys) + 4):
        order, const, slope = _resolve_support(sys, f, x0, support)
        poly = _volume_poly(sys, f, order, const, slope)
        if evaluate(poly, x0) <= 0:
            raise DeltaError(f"volume is not positive at x = {x0}")
        walls = []
        for i, c, s in zip(order, const, slope):
            if s < 0:
                walls.append(-c / s)
        for j in range(len(sys)):
            if j not in order:
                v0, v1 = _pairing_affine(sys, f, order, const, slope, j)
                if v1 < 0:
                    walls.append(-v0 / v1)
        walls = [w for w in walls if w > x0]
        hi = min(walls) if walls else None
        if stop is not None and (hi is None or stop <= hi):
            hi = stop
        if hi is None:
            # no wall ahead: the volume must vanish in this chamber
            c0, c1, c2 = poly
            probe = x0 + 1
            while evaluate(poly, probe) > 0:
                if c2 >= 0 and c1 + 2 * c2 * probe >= 0:
                    raise DeltaError("volume never vanishes; F is not a contracting direction")
                probe = 2 * probe
            hi = probe
        root = _first_root(poly, x0, hi)
        done = root is not None
        end = root if done else hi
        chambers.append(Chamber(x0, end, tuple(order), tuple(const), tuple(slope), poly))
        if done:
            return Sweep(tuple(chambers), True)
        if stop is not None and end == stop:
            return Sweep(tuple(chambers), False)
        x0, support = end, order
    raise RuntimeError("volume sweep did not terminate")


def volume_function(sys: CurveSystem, F, stop=None) -> PiecewisePoly:
    """Merged piecewise volume of ``A - xF`` (see :func:`sweep`)."""
    return sweep(sys, F, stop).merged


def tau(sys: CurveSystem, F) -> Fraction:
    """Pseudo-effective threshold: where the volume first vanishes."""
    return volume_function(sys, F).end


def integrate(pw: PiecewisePoly, lo, hi) -> Fraction:
    lo, hi = to_rational(lo), to_rational(hi)
    if not pw.start <= lo <= hi <= pw.end:
        raise RangeError(f"[{lo}, {hi}] is not inside [{pw.start}, {pw.end}]")
    total = Fraction(0)
    for a, b, piece in zip(pw.breakpoints, pw.breakpoints[1:], pw.pieces):
        a, b = max(a, lo), min(b, hi)
        if a < b:
            total += _antiderivative(piece, b) - _antiderivative(piece, a)
    return total


def expected_vanishing_order(sys: CurveSystem, F) -> Fraction:
    """``(1/A^2) * integral of vol(A - xF)`` over ``[0, tau]``."""
    pw = volume_function(sys, F)
    if not pw.complete:
        raise IncompleteSweep("volume did not reach zero")
    return integrate(pw, 0, pw.end) / sys.degree


def _tail_args(pw, mu, tau_upper):
    mu, tau_upper = to_rational(mu), to_rational(tau_upper)
    if not 0 <= mu <= tau_upper:
        raise RangeError(f"need 0 <= mu <= tau_upper, got mu = {mu}, tau_upper = {tau_upper}")
    return mu, tau_upper, pw(mu)


def tail_bound_simple(pw: PiecewisePoly, mu, tau_upper) -> Fraction:
    """Upper bound for the tail integral from monotonicity of the volume."""
    mu, tau_upper, value = _tail_args(pw, mu, tau_upper)
    return (tau_upper - mu) * value


def tail_bound_barycenter(pw: PiecewisePoly, mu, tau_upper) -> Fraction:
    """The log-concavity improvement of :func:`tail_bound_simple`, factor 2/3."""
    mu, tau_upper, value = _tail_args(pw, mu, tau_upper)
    return Fraction(2, 3) * (tau_upper - mu) * value


TAIL_BOUNDS = {"simple": tail_bound_simple, "barycenter": tail_bound_barycenter}


def tau_upper_via_nef(sys: CurveSystem, nef_class: DivisorClass, F) -> Fraction:
    """Root of ``nef . (A - xF) = 0``, an upper bound for the threshold."""
    f = sys.index(F) if isinstance(F, str) else F
    if not nef_on_system(sys, nef_class):
        raise NotNef("class pairs negatively with a modeled curve")
    with_a = pair(nef_class, DivisorClass.anticanonical(sys), sys)
    with_f = pair_curve(nef_class, f, sys)
    if with_f <= 0:
        raise DegenerateBound(f"nef class pairs to {with_f} with {sys.curves[f]}")
    return with_a / with_f


def delta_from_mult_bound(max_mult) -> Fraction:
    """Lower bound on delta from a multiplicity bound at infinitely near points."""
    max_mult = to_rational(max_mult)
    if max_mult <= 0:
        raise ValueError("multiplicity bound must be positive")
    return 2 / max_mult
