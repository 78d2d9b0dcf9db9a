"""Exact geometry of the flat n-dimensional Klein bottle.

The space is the quotient of R^n (n >= 2) by the group generated by the unit
translations in the first n-1 coordinates together with the glide

    (x_1, ..., x_{n-1}, x_n)  |->  (1 - x_1, ..., 1 - x_{n-1}, x_n + 1).

Every group element acts as x_i -> (-1)^s x_i + v_i on the first n-1
coordinates and x_n -> x_n + t on the last, where s is a parity bit, v is an
integer vector and t is an integer with t == s (mod 2).  All arithmetic here
is exact over `fractions.Fraction`; nothing in this module touches floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence, Union

#: Exact rational scalar used throughout the package.
RatScalar = Fraction

#: A point of the universal cover R^n, always a tuple of Fractions.
LiftPoint = tuple[Fraction, ...]

Rational = Union[Fraction, int, str]

HALF = Fraction(1, 2)
ONE = Fraction(1)


def rat(value: Rational) -> Fraction:
    """Parse a rational scalar; accepts Fraction, int, or a 'p/q' string."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"not an exact rational: {value!r}")


def format_rat(x: Fraction, digits: int | None = None) -> str:
    """Render a rational as 'p/q' (digits=None) or as a fixed-point decimal."""
    x = Fraction(x)
    if digits is None:
        return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)
    scaled = x * 10**digits
    q, r = divmod(scaled.numerator, scaled.denominator)
    # round half away from zero, deterministically
    if 2 * abs(r) >= scaled.denominator:
        q += 1 if scaled >= 0 else -1
    sign = "-" if q < 0 else ""
    q = abs(q)
    if digits == 0:
        return f"{sign}{q}"
    return f"{sign}{q // 10**digits}.{q % 10**digits:0{digits}d}"


def as_point(coords: Sequence[Rational]) -> LiftPoint:
    """Coerce a coordinate sequence to an exact LiftPoint."""
    pt = tuple(rat(c) for c in coords)
    if len(pt) < 2:
        raise ValueError("points must have dimension at least 2")
    return pt


@dataclass(frozen=True)
class DeckElement:
    """A deck transformation (parity, shift, last_shift).

    Acts by x_i -> (-1)^parity * x_i + shift[i] for i < n and
    x_n -> x_n + last_shift.  The constraint last_shift == parity (mod 2)
    is exactly the relation imposed by the glide generator.
    """

    parity: int
    shift: tuple[int, ...]
    last_shift: int

    def __post_init__(self) -> None:
        if self.parity not in (0, 1):
            raise ValueError("parity must be 0 or 1")
        if any(not isinstance(v, int) for v in self.shift):
            raise ValueError("shift must be a tuple of ints")
        if (self.last_shift - self.parity) % 2 != 0:
            raise ValueError("last_shift must have the same parity as the parity bit")

    @property
    def n(self) -> int:
        return len(self.shift) + 1

    @staticmethod
    def identity(n: int) -> "DeckElement":
        return DeckElement(0, (0,) * (n - 1), 0)

    def compose(self, inner: "DeckElement") -> "DeckElement":
        """Return self o inner (apply `inner` first)."""
        if self.n != inner.n:
            raise ValueError("dimension mismatch")
        sign = -1 if self.parity else 1
        shift = tuple(s + sign * v for s, v in zip(self.shift, inner.shift))
        return DeckElement((self.parity + inner.parity) % 2, shift,
                           self.last_shift + inner.last_shift)

    def inverse(self) -> "DeckElement":
        sign = -1 if self.parity else 1
        return DeckElement(self.parity, tuple(-sign * v for v in self.shift),
                           -self.last_shift)

    def is_identity(self) -> bool:
        return self.parity == 0 and self.last_shift == 0 and not any(self.shift)


def apply_deck(g: DeckElement, x: Sequence[Rational]) -> LiftPoint:
    """Apply a deck transformation to a point of the universal cover."""
    pt = as_point(x)
    if len(pt) != g.n:
        raise ValueError("dimension mismatch")
    sign = -1 if g.parity else 1
    head = tuple(sign * c + v for c, v in zip(pt, g.shift))
    return head + (pt[-1] + g.last_shift,)


@dataclass(frozen=True)
class KleinPoint:
    """A point of the quotient, stored by its representative in [0,1)^n."""

    rep: LiftPoint

    def __post_init__(self) -> None:
        if any(not (0 <= c < 1) for c in self.rep):
            raise ValueError("representative must lie in [0,1)^n")

    @property
    def n(self) -> int:
        return len(self.rep)


def canonicalize(x: Sequence[Rational]) -> tuple[KleinPoint, DeckElement]:
    """Reduce a cover point into the fundamental domain [0,1)^n.

    Returns (point, g) with apply_deck(g, x) == point.rep.  The reduction is
    the fixed three-step recipe: bring the last coordinate into [0,2) with an
    even translation, apply the inverse glide once if it still is >= 1, then
    reduce the remaining coordinates mod 1.
    """
    pt = as_point(x)
    n = len(pt)
    g = DeckElement(0, (0,) * (n - 1), -2 * math.floor(pt[-1] / 2))
    cur = apply_deck(g, pt)
    if cur[-1] >= 1:
        unglide = DeckElement(1, (1,) * (n - 1), -1)
        g = unglide.compose(g)
        cur = apply_deck(unglide, cur)
    wrap = DeckElement(0, tuple(-math.floor(c) for c in cur[:-1]), 0)
    g = wrap.compose(g)
    cur = apply_deck(wrap, cur)
    return KleinPoint(cur), g


def project(x: Sequence[Rational]) -> KleinPoint:
    """The quotient map: forget which lift a cover point was."""
    return canonicalize(x)[0]


def equivalent(x: Sequence[Rational], y: Sequence[Rational]) -> bool:
    """True iff two cover points map to the same quotient point."""
    return canonicalize(x)[0] == canonicalize(y)[0]


def _dist_to_translates(u: Fraction, step: int, offset: int) -> Fraction:
    """Exact distance from u to the arithmetic progression offset + step*Z."""
    r = (u - offset) % step
    return min(r, step - r)


def squared_distance(y: KleinPoint, z: KleinPoint) -> Fraction:
    """Exact squared quotient distance between two points.

    Minimizing |q - g.p|^2 over the deck group splits, for each parity, into
    independent one-dimensional problems: distance of z_i - y_i (parity 0) or
    z_i + y_i (parity 1) to the integers in the first n-1 coordinates, and
    distance of z_n - y_n to the even (parity 0) or odd (parity 1) integers.
    """
    if y.n != z.n:
        raise ValueError("dimension mismatch")
    a, b = y.rep, z.rep
    even = sum((_dist_to_translates(bi - ai, 1, 0) ** 2 for ai, bi in zip(a[:-1], b[:-1])),
               start=_dist_to_translates(b[-1] - a[-1], 2, 0) ** 2)
    odd = sum((_dist_to_translates(bi + ai, 1, 0) ** 2 for ai, bi in zip(a[:-1], b[:-1])),
              start=_dist_to_translates(b[-1] - a[-1], 2, 1) ** 2)
    return min(even, odd)


def _nearest_in_progression(u: Fraction, step: int, offset: int) -> list[int]:
    """All members of offset + step*Z at minimal distance from u (1 or 2)."""
    lo = offset + step * math.floor((u - offset) / step)
    hi = lo + step
    d_lo, d_hi = u - lo, hi - u
    if d_lo < d_hi:
        return [lo]
    if d_hi < d_lo:
        return [hi]
    return [lo, hi]


def minimal_lifts(p: Sequence[Rational], z: KleinPoint) -> list[LiftPoint]:
    """All lifts of z at minimal Euclidean distance from the cover point p.

    Within each parity branch the candidate set is the Cartesian product of
    per-coordinate argmin sets (each of size 1 or 2); branches that do not
    attain the global minimum are discarded, and coincident lifts produced by
    both branches (possible only at half-integer coordinates) are deduplicated.
    The result is sorted lexicographically, hence deterministic.
    """
    pt = as_point(p)
    if len(pt) != z.n:
        raise ValueError("dimension mismatch")
    branches = []
    for parity in (0, 1):
        sign = -1 if parity else 1
        axis_choices: list[list[Fraction]] = []
        cost = Fraction(0)
        for pi, zi in zip(pt[:-1], z.rep[:-1]):
            vs = _nearest_in_progression(pi - sign * zi, 1, 0)
            axis_choices.append([sign * zi + v for v in vs])
            cost += (pi - sign * zi - vs[0]) ** 2
        ts = _nearest_in_progression(pt[-1] - z.rep[-1], 2, parity)
        axis_choices.append([z.rep[-1] + t for t in ts])
        cost += (pt[-1] - z.rep[-1] - ts[0]) ** 2
        branches.append((cost, axis_choices))
    best = min(cost for cost, _ in branches)
    lifts = {tuple(q) for cost, choices in branches if cost == best
             for q in product(*choices)}
    return sorted(lifts)


def neighbor_set(p: Sequence[Rational]) -> list[LiftPoint]:
    """The finite set of cover points whose bisectors with p carve out R(p).

    Defined for p in the closed cube [0,1]^{n-1} x R (the last coordinate is
    unconstrained).  Contains p +/- e_i for i < n, p +/- 2e_n, and the glide
    images (y_1, ..., y_{n-1}, x_n +/- 1) where y_i ranges over a one- or
    two-element set depending on which side of 1/2 the coordinate x_i lies.
    """
    pt = as_point(p)
    n = len(pt)
    if any(not (0 <= c <= 1) for c in pt[:-1]):
        raise ValueError("first n-1 coordinates must lie in [0,1]")
    out: list[LiftPoint] = []
    for i in range(n - 1):
        for s in (1, -1):
            out.append(pt[:i] + (pt[i] + s,) + pt[i + 1:])
    for s in (2, -2):
        out.append(pt[:-1] + (pt[-1] + s,))
    choices: list[list[Fraction]] = []
    for c in pt[:-1]:
        if c in (0, HALF, ONE):
            choices.append([c])
        elif c < HALF:
            choices.append([-c, 1 - c])
        else:
            choices.append([1 - c, 2 - c])
    for s in (1, -1):
        for head in product(*choices):
            out.append(tuple(head) + (pt[-1] + s,))
    return out


def geodesic_path(p: Sequence[Rational], q: Sequence[Rational],
                  samples: int) -> list[KleinPoint]:
    """Project the segment p->q into the quotient at `samples` uniform times.

    The segment must realize the quotient distance (q minimal among lifts as
    seen from p); otherwise the projected segment is not a geodesic and a
    ValueError is raised.  samples >= 2 so both endpoints appear.
    """
    a, b = as_point(p), as_point(q)
    if len(a) != len(b):
        raise ValueError("dimension mismatch")
    if samples < 2:
        raise ValueError("need at least two samples")
    seg_sq = sum((bi - ai) ** 2 for ai, bi in zip(a, b))
    if seg_sq != squared_distance(project(a), project(b)):
        raise ValueError("segment is not minimal: endpoint is not a closest lift")
    step = Fraction(1, samples - 1)
    return [project(tuple(ai + k * step * (bi - ai) for ai, bi in zip(a, b)))
            for k in range(samples)]
