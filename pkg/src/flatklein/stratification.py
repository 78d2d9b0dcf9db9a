"""Partition of base points by the sign pattern of the wall slacks K(S).

For a canonical point the horizontal coordinates split into "prism" values
({0, 1/2}) and "interval" values; each interval coordinate contributes
b_i = a_i - 1/4 (after folding into (0,1/2)), and the scaled slack of a
subset S of interval coordinates is

    K_S = (N + 4 - 2|S|)/16 + sum_{i in S} b_i^2 - sum_{i not in S} b_i^2,

whose sign agrees with the cell slack K(S) used by the vertex formulas.
Points with the same domain pattern and the same full sign vector form a
stratum; the cell combinatorics (which vertices exist, how faces match up)
is constant on each stratum.

Stratum dimension is a real-variety dimension computed in the squared
coordinates u_i = b_i^2 by exact linear programming: nonnegativity can
force coordinates to vanish, so naive rank counting over the zero-set
equations is wrong (a two-equation pattern at N = 6 pins four further
coordinates at 0 and the true dimension is 2, not 5).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from ._exact import LP_OPTIMAL, lp_maximize, mat_rank
from .klein_space import HALF, LiftPoint, Rational, as_point, format_rat, rat

__all__ = [
    "DomainDescriptor", "SignVector", "Stratum",
    "catalog", "classify", "same_stratum", "stratum_dimension",
]

INTERVAL = "interval"
PRISM = "prism"
POINT = "point"

_SIXTEENTH = Fraction(1, 16)


@dataclass(frozen=True)
class DomainDescriptor:
    """Per-coordinate domain pattern: interval/prism, and interval/point last."""

    kinds: tuple[str, ...]

    def __post_init__(self):
        if len(self.kinds) < 2:
            raise ValueError("need n >= 2 coordinates")
        for k in self.kinds[:-1]:
            if k not in (INTERVAL, PRISM):
                raise ValueError(f"bad horizontal kind {k!r}")
        if self.kinds[-1] not in (INTERVAL, POINT):
            raise ValueError(f"bad vertical kind {self.kinds[-1]!r}")

    @property
    def n(self) -> int:
        return len(self.kinds)

    @property
    def active(self) -> tuple[int, ...]:
        return tuple(i for i, k in enumerate(self.kinds[:-1]) if k == INTERVAL)

    @property
    def prism(self) -> tuple[int, ...]:
        return tuple(i for i, k in enumerate(self.kinds[:-1]) if k == PRISM)

    @classmethod
    def of_point(cls, p: Sequence[Rational]) -> "DomainDescriptor":
        pt = as_point(p)
        if any(not 0 <= c < 1 for c in pt):
            raise ValueError("expected a canonical point")
        kinds = [PRISM if c in (0, HALF) else INTERVAL for c in pt[:-1]]
        kinds.append(POINT if pt[-1] == 0 else INTERVAL)
        return cls(tuple(kinds))


def _subsets(items: tuple[int, ...]) -> list[tuple[int, ...]]:
    out = []
    for r in range(len(items) + 1):
        out.extend(itertools.combinations(items, r))
    return out


@dataclass(frozen=True)
class SignVector:
    """Sign of K_S for every subset S of the active index set."""

    active: tuple[int, ...]
    signs: tuple[int, ...]

    def __post_init__(self):
        if len(self.signs) != 2 ** len(self.active):
            raise ValueError("one sign per subset required")
        if any(s not in (-1, 0, 1) for s in self.signs):
            raise ValueError("signs are -1/0/+1")

    def sign_of(self, subset) -> int:
        key = tuple(sorted(subset))
        return self.signs[_subsets(self.active).index(key)]

    def items(self):
        return list(zip(_subsets(self.active), self.signs))


@dataclass(frozen=True)
class Stratum:
    domain: DomainDescriptor
    alpha: SignVector
    dim: int
    witness: LiftPoint
    coincidence: bool = False

    def to_json(self) -> dict:
        data = {
            "domain": list(self.domain.kinds),
            "alpha": [{"S": list(s), "sign": sign} for s, sign in self.alpha.items()],
            "dim": self.dim,
            "witness": [format_rat(c) for c in self.witness],
        }
        if self.coincidence:
            data["coincidence"] = True
        return data


def _k_row(n_active: int, subset_positions: frozenset[int]):
    """K_S as (constant, coefficient vector) over u-space positions."""
    const = Fraction(n_active + 4 - 2 * len(subset_positions), 16)
    coeffs = [Fraction(1) if j in subset_positions else Fraction(-1)
              for j in range(n_active)]
    return const, coeffs


def _degenerable(n_active: int, size: int) -> bool:
    # K_S has a fixed positive lower bound on the open box unless |S| >= 5,
    # or |S| = 4 with no coordinates left outside S.
    return size >= 5 or (size == 4 and size == n_active)


def _is_coincidence(n_active: int, signs: tuple[int, ...],
                    subsets: list[tuple[int, ...]]) -> bool:
    if n_active != 6:
        return False
    return all(s == 0 for sub, s in zip(subsets, signs) if len(sub) == 5)


@lru_cache(maxsize=4096)
def _dimension(n_active: int, signs: tuple[int, ...], last_interval: bool):
    """Affine-hull dimension of the stratum region, or None if empty."""
    positions = tuple(range(n_active))
    subsets = _subsets(positions)
    eq_rows, eq_rhs = [], []
    ub_rows, ub_rhs = [], []
    any_degenerable = False
    for sub, sign in zip(subsets, signs):
        if not _degenerable(n_active, len(sub)):
            if sign != 1:
                return None
            continue
        any_degenerable = True
        const, coeffs = _k_row(n_active, frozenset(sub))
        if sign == 0:
            eq_rows.append(coeffs)
            eq_rhs.append(-const)
        elif sign == 1:
            ub_rows.append([-c for c in coeffs] + [Fraction(1)])
            ub_rhs.append(const)
        else:
            ub_rows.append(coeffs + [Fraction(1)])
            ub_rhs.append(-const)
    if any_degenerable:
        # feasibility with uniform slack tau > 0 (u_i < 1/16 made strict too)
        for j in range(n_active):
            row = [Fraction(0)] * (n_active + 1)
            row[j] = Fraction(-1)
            ub_rows.append(list(row))
            ub_rhs.append(Fraction(0))
            row2 = [Fraction(0)] * (n_active + 1)
            row2[j] = Fraction(1)
            row2[-1] = Fraction(1)
            ub_rows.append(row2)
            ub_rhs.append(_SIXTEENTH)
        res = lp_maximize(
            [Fraction(0)] * n_active + [Fraction(1)],
            ub_rows, ub_rhs,
            [r + [Fraction(0)] for r in eq_rows], eq_rhs)
        if res.status != LP_OPTIMAL or res.objective <= 0:
            return None
    dim_u = n_active
    if eq_rows:
        # Implicit equalities of the closed region {equations, 0 <= u <= 1/16}
        # can only be coordinate vanishing (strict constraints cannot shrink
        # the affine hull of a nonempty convex region).
        box_rows, box_rhs = [], []
        for j in range(n_active):
            row = [Fraction(0)] * n_active
            row[j] = Fraction(-1)
            box_rows.append(list(row))
            box_rhs.append(Fraction(0))
            row2 = [Fraction(0)] * n_active
            row2[j] = Fraction(1)
            box_rows.append(row2)
            box_rhs.append(_SIXTEENTH)
        forced = []
        for j in range(n_active):
            c = [Fraction(0)] * n_active
            c[j] = Fraction(1)
            res = lp_maximize(c, box_rows, box_rhs, eq_rows, eq_rhs)
            assert res.status == LP_OPTIMAL
            if res.objective == 0:
                row = [Fraction(0)] * n_active
                row[j] = Fraction(1)
                forced.append(row)
        dim_u = n_active - mat_rank(eq_rows + forced)
    return dim_u + (1 if last_interval else 0)


def stratum_dimension(alpha: SignVector, domain: DomainDescriptor):
    """Dimension of the stratum, or None when the sign vector is infeasible."""
    if alpha.active != domain.active:
        raise ValueError("sign vector does not match the domain")
    return _dimension(len(alpha.active), alpha.signs,
                      domain.kinds[-1] == INTERVAL)


def classify(p: Sequence[Rational]) -> Stratum:
    """The stratum of a canonical point (exact signs, exact dimension)."""
    pt = as_point(p)
    domain = DomainDescriptor.of_point(pt)
    active = domain.active
    u = {}
    for i in active:
        c = pt[i] if pt[i] < HALF else 1 - pt[i]
        b = c - Fraction(1, 4)
        u[i] = b * b
    subsets = _subsets(active)
    signs = []
    n_active = len(active)
    for sub in subsets:
        const, _ = _k_row(n_active, frozenset(range(len(sub))))
        val = const + sum((u[i] for i in sub), start=Fraction(0)) \
            - sum((u[i] for i in active if i not in sub), start=Fraction(0))
        signs.append(0 if val == 0 else (1 if val > 0 else -1))
    alpha = SignVector(active, tuple(signs))
    dim = stratum_dimension(alpha, domain)
    assert dim is not None, "sign vector of a real point cannot be infeasible"
    positions = _subsets(tuple(range(n_active)))
    return Stratum(domain, alpha, dim, pt,
                   _is_coincidence(n_active, tuple(signs), positions))


def same_stratum(p: Sequence[Rational], q: Sequence[Rational]) -> bool:
    a, b = classify(p), classify(q)
    return a.domain == b.domain and a.alpha == b.alpha


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------

def _witness_b(n_active: int, signs: tuple[int, ...]) -> tuple[Fraction, ...]:
    """A rational b-vector realizing a feasible sign pattern (N <= 6)."""
    F = Fraction
    subsets = _subsets(tuple(range(n_active)))
    by_size = {}
    for sub, s in zip(subsets, signs):
        by_size.setdefault(len(sub), {})[sub] = s
    if n_active <= 3:
        return (F(0),) * n_active
    if n_active == 4:
        tau = by_size[4][(0, 1, 2, 3)]
        return (F(1, 5), F(0), F(0), F(0)) if tau == 1 else (F(0),) * 4
    if n_active == 5:
        tau = by_size[5][(0, 1, 2, 3, 4)]
        if tau == 1:
            return (F(1, 5), F(1, 5), F(0), F(0), F(0))
        if tau == 0:
            return (F(1, 5), F(3, 20), F(0), F(0), F(0))
        return (F(1, 10),) * 5
    if n_active == 6:
        tau = by_size[6][tuple(range(6))]
        sigma = {}
        for sub, s in by_size[5].items():
            (m,) = set(range(6)) - set(sub)
            sigma[m] = s
        zeros = sorted(m for m, s in sigma.items() if s == 0)
        negs = sorted(m for m, s in sigma.items() if s == -1)
        if tau == 1:
            return (F(1, 5),) * 6
        if tau == 0:
            return (F(1, 5), F(1, 5), F(1, 5), F(1, 20), F(1, 20), F(0))
        if len(zeros) == 6:
            return (F(0),) * 6  # fully degenerate center
        if negs:
            (k,) = negs
            return tuple(F(1, 5) if m == k else F(1, 20) for m in range(6))
        if len(zeros) == 1:
            (k,) = zeros
            rest = [m for m in range(6) if m != k]
            vals = {k: F(1, 5), rest[0]: F(3, 25), rest[1]: F(4, 25)}
            return tuple(vals.get(m, F(0)) for m in range(6))
        if len(zeros) == 2:
            return tuple(F(1, 10) if m in zeros else F(0) for m in range(6))
        return (F(1, 10),) * 6  # plain tau < 0, all sigma positive
    raise ValueError("witness table covers active sizes up to 6")


def _plausible_six(choice: dict, deg: list) -> bool:
    """Necessary conditions for a size-6 pattern, from sum(u) = Z.

    With Z = sum u_i, the top level is Z - 1/8 and the co-singleton levels
    are Z - 2 u_m.  A zero at level 5 pins u_m = Z/2, so two zeros exhaust
    the budget (all other u vanish), three or more force Z = 0, and a
    negative level (u_m > Z/2) cannot coexist with any zero or another
    negative.  tau >= 0 needs Z >= 1/8, while u_m < 1/16 keeps every
    co-singleton level strictly positive in that regime.
    """
    top = tuple(range(6))
    tau = choice[top]
    sigma = [choice[s] for s in deg if len(s) == 5]
    zeros = sigma.count(0)
    negs = sigma.count(-1)
    if tau >= 0:
        return zeros == 0 and negs == 0
    if negs > 1 or (negs and zeros):
        return False
    return zeros in (0, 1, 2) or zeros == 6


@lru_cache(maxsize=16)
def _strata_for_size(n_active: int):
    """All feasible sign patterns over subsets of range(n_active), with
    witnesses (as b-vectors) and coincidence flags."""
    positions = tuple(range(n_active))
    subsets = _subsets(positions)
    deg = [sub for sub in subsets if _degenerable(n_active, len(sub))]
    found = []
    for assignment in itertools.product((1, 0, -1), repeat=len(deg)):
        choice = dict(zip(deg, assignment))
        # monotone filter: S subset S' forces sign(S') <= sign(S), not both 0
        ok = True
        for s1, s2 in itertools.combinations(deg, 2):
            small, big = (s1, s2) if len(s1) < len(s2) else (s2, s1)
            if set(small) <= set(big):
                if choice[big] > choice[small] or choice[big] == choice[small] == 0:
                    ok = False
                    break
        if not ok:
            continue
        if n_active == 6 and not _plausible_six(choice, deg):
            continue
        signs = tuple(choice.get(sub, 1) for sub in subsets)
        if _dimension(n_active, signs, True) is not None:
            found.append(signs)
        if len(found) > 256:  # defensive: sizes beyond the supported range
            raise AssertionError("sign-pattern search exploded")
    out = []
    for signs in found:
        b = _witness_b(n_active, signs)
        out.append((signs, b, _is_coincidence(n_active, signs, subsets)))
    return out


def catalog(n: int) -> list[Stratum]:
    """All nonempty strata for dimension n (2 <= n <= 7), with witnesses."""
    if not 2 <= n <= 7:
        raise ValueError("catalog supports 2 <= n <= 7")
    out: list[Stratum] = []
    for horiz in itertools.product((INTERVAL, PRISM), repeat=n - 1):
        for last in (INTERVAL, POINT):
            domain = DomainDescriptor(horiz + (last,))
            active = domain.active
            for signs, b_vals, coin in _strata_for_size(len(active)):
                dim = _dimension(len(active), signs, last == INTERVAL)
                if dim is None:
                    continue
                witness = [Fraction(0)] * n
                for i, b in zip(active, b_vals):
                    witness[i] = Fraction(1, 4) + b
                for j in domain.prism:
                    witness[j] = Fraction(0)
                witness[n - 1] = Fraction(1, 3) if last == INTERVAL else Fraction(0)
                stratum = Stratum(domain, SignVector(active, signs), dim,
                                  tuple(witness), coin)
                check = classify(stratum.witness)
                if (check.domain, check.alpha) != (domain, stratum.alpha):
                    raise AssertionError(
                        f"witness fails to realize its sign pattern: {signs}")
                out.append(stratum)
    return out
