"""Independent brute-force references used to validate the fast paths.

Nothing here reuses the closed-form metric or vertex formulas from the rest
of the package: distances come from windowed enumeration of deck images,
vertex sets from exhaustive basis enumeration over halfspace subsets, and
certification from an exact double-description walk of the edge graph.
These routines are deliberately dumb and exact; they are the ground truth
the unit and acceptance tests compare against.

The exhaustive vertex enumerator first rescales coordinates and offsets so
the whole system is integral with small matrix entries, then runs its hot
loop in float64 (determinants, all integers below 2**53) and 64-bit integer
arithmetic (feasibility residuals), so no rounding ever occurs.  If an
instance exceeds the magnitude bounds we fall back to a Fraction pipeline.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from ._exact import gcd_reduce, integerize_row, invert_square, mat_rank

Halfspace = tuple[Sequence[Fraction], Fraction]

_FLOAT_EXACT_LIMIT = 1 << 53


def _coords(point) -> tuple[Fraction, ...]:
    rep = getattr(point, "rep", point)
    return tuple(Fraction(x) for x in rep)


# ---------------------------------------------------------------------------
# Windowed distance / geodesic enumeration
# ---------------------------------------------------------------------------

def _axis_minima(target: Fraction, base: Fraction, flip: bool, step: int,
                 offset: int, window: int) -> tuple[Fraction, list[Fraction]]:
    """Min of (s*base + k*step + offset - target)^2 over a shift window.

    Returns the minimum and every transformed coordinate value achieving it.
    Raises if the minimum only occurs on the window boundary, which means
    the window was too small for the given inputs.
    """
    s = -base if flip else base
    lo = -window * step + offset
    hi = window * step + offset
    best: Fraction | None = None
    hits: list[tuple[int, Fraction]] = []
    k = lo
    while k <= hi:
        val = s + k - target
        sq = val * val
        if best is None or sq < best:
            best, hits = sq, [(k, s + k)]
        elif sq == best:
            hits.append((k, s + k))
        k += step
    if any(k in (lo, hi) for k, _ in hits):
        raise ValueError("enumeration window too small for these points")
    return best, [v for _, v in hits]


def brute_minimal_images(y, z, window: int = 3):
    """All deck images of z at minimal distance from y, by enumeration.

    Returns (squared_distance, images) with images sorted.  Both orientation
    branches are scanned over a shift window of +-window per coordinate
    (+-2*window on the last, which moves in even or odd steps).
    """
    if window < 3:
        raise ValueError("window must be at least 3")
    a = _coords(y)
    b = _coords(z)
    if len(a) != len(b) or len(a) < 2:
        raise ValueError("points must share a dimension n >= 2")
    n = len(a)
    best: Fraction | None = None
    pools: list[list[list[Fraction]]] = []
    for parity in (0, 1):
        cost = Fraction(0)
        axes: list[list[Fraction]] = []
        for i in range(n):
            if i < n - 1:
                m, hits = _axis_minima(a[i], b[i], parity == 1, 1, 0, window)
            else:
                m, hits = _axis_minima(a[i], b[i], False, 2, parity, window)
            cost += m
            axes.append(hits)
        if best is None or cost < best:
            best, pools = cost, [axes]
        elif cost == best:
            pools.append(axes)
    images = {tuple(combo) for axes in pools
              for combo in itertools.product(*axes)}
    return best, sorted(images)


def brute_distance(y, z, window: int = 3) -> Fraction:
    """Squared quotient distance by windowed enumeration of deck images."""
    return brute_minimal_images(y, z, window)[0]


def brute_geodesic_count(y, z, window: int = 3) -> int:
    """Number of distinct minimizing deck images (= shortest geodesics)."""
    return len(brute_minimal_images(y, z, window)[1])


# ---------------------------------------------------------------------------
# Exhaustive vertex enumeration
# ---------------------------------------------------------------------------

_subset_cache: dict[tuple[int, int], np.ndarray] = {}


def _subsets_array(m: int, n: int) -> np.ndarray:
    key = (m, n)
    if key not in _subset_cache:
        combos = list(itertools.combinations(range(m), n))
        _subset_cache[key] = np.array(combos, dtype=np.intp)
    return _subset_cache[key]


def _det_grid(grid: list[list[np.ndarray]]) -> np.ndarray:
    """Batched determinants by subset-DP Laplace expansion along rows.

    `grid[r][j]` holds entry (r, j) for the whole batch as a contiguous
    vector.  Exact whenever all intermediates stay integral below 2**53;
    callers are responsible for the magnitude precheck.
    """
    k = len(grid)
    minors = {1 << j: grid[0][j].copy() for j in range(k)}
    tmp = np.empty_like(grid[0][0])
    for r in range(1, k):
        nxt: dict[int, np.ndarray] = {}
        row = grid[r]
        for cols in itertools.combinations(range(k), r + 1):
            mask = 0
            for j in cols:
                mask |= 1 << j
            acc = None
            for pos, j in enumerate(cols):
                sub = minors[mask ^ (1 << j)]
                if acc is None:
                    acc = row[j] * sub
                    if pos % 2 != (r % 2):
                        np.negative(acc, out=acc)
                elif pos % 2 == (r % 2):
                    np.multiply(row[j], sub, out=tmp)
                    acc += tmp
                else:
                    np.multiply(row[j], sub, out=tmp)
                    acc -= tmp
            nxt[mask] = acc
        minors = nxt
    return minors[(1 << k) - 1]


def _as_grid(mats: np.ndarray) -> list[list[np.ndarray]]:
    _, k, _ = mats.shape
    tr = mats.transpose(1, 2, 0)
    return [[np.ascontiguousarray(tr[r, j]) for j in range(k)]
            for r in range(k)]


def _det_batch(mats: np.ndarray) -> np.ndarray:
    """Determinants of a (B, k, k) float64 batch; see _det_grid."""
    return _det_grid(_as_grid(mats))


def _integerized(halfspaces: Sequence[Halfspace]):
    rows, offs = [], []
    for normal, offset in halfspaces:
        r, o = integerize_row(normal, offset)
        rows.append(r)
        offs.append(o)
    return rows, offs


def brute_vertices(halfspaces: Sequence[Halfspace],
                   chunk: int = 120_000) -> list[tuple[Fraction, ...]]:
    """All vertices of {x : normal.x <= offset}, by exhaustive bases.

    Every n-subset of the constraints is solved exactly; solutions that
    satisfy all constraints are deduplicated and returned sorted.  The
    polytope is assumed bounded (callers pass cells that always are); the
    routine itself never assumes anything about where vertices lie.
    """
    normals = [tuple(Fraction(c) for c in normal) for normal, _ in halfspaces]
    betas = [Fraction(off) for _, off in halfspaces]
    m = len(normals)
    if not m:
        return []
    n = len(normals[0])
    if m < n:
        return []
    if math.comb(m, n) > 3_000_000:
        raise ValueError("too many constraint subsets for exhaustive search")

    # Substitute x_j = (q_j / d) * w_j, with q_j clearing the denominators of
    # column j and d those of the offsets.  The system becomes integral with
    # small matrix entries (column denominators never mix), which keeps the
    # fast pipeline exact on far larger instances than per-row scaling would.
    qs = []
    for j in range(n):
        q = 1
        for row in normals:
            q = q * row[j].denominator // math.gcd(q, row[j].denominator)
        qs.append(q)
    rows = [[int(row[j] * qs[j]) for j in range(n)] for row in normals]
    d = 1
    for b in betas:
        d = d * b.denominator // math.gcd(d, b.denominator)
    offs = [int(b * d) for b in betas]

    big_m = max(1, max(abs(v) for row in rows for v in row))
    big_b = max(1, max(abs(o) for o in offs))
    det_bound = math.factorial(n) * big_m ** n
    num_bound = math.factorial(n) * big_b * big_m ** (n - 1)
    resid_bound = n * big_m * num_bound + big_b * det_bound
    if 2 * num_bound >= _FLOAT_EXACT_LIMIT or resid_bound >= 1 << 62:
        raw = _brute_vertices_fractions(rows, offs, n)
    else:
        raw = _brute_vertices_fast(rows, offs, n, chunk)
    scale = [Fraction(q, d) for q in qs]
    return sorted(tuple(w * s for w, s in zip(ws, scale)) for ws in raw)


def _brute_vertices_fast(rows, offs, n, chunk) -> list[tuple[Fraction, ...]]:
    """Batched basis enumeration for an all-integer system.

    Determinants and Cramer numerators come out of the float64 batch (exact
    below 2**53); feasibility residuals are re-evaluated in int64, where the
    caller's magnitude precheck guarantees no overflow.
    """
    rows_np = np.array(rows, dtype=np.float64)
    offs_np = np.array(offs, dtype=np.float64)
    rows_i64 = np.array(rows, dtype=np.int64)
    offs_i64 = np.array(offs, dtype=np.int64)
    subsets = _subsets_array(len(rows), n)
    found: dict[tuple[Fraction, ...], None] = {}
    for start in range(0, len(subsets), chunk):
        sel = subsets[start:start + chunk]
        grid = _as_grid(rows_np[sel])            # entries of the (B, n, n) batch
        rhs = offs_np[sel]                       # (B, n)
        dets = _det_grid(grid)
        nz = dets != 0
        if not nz.any():
            continue
        dets = dets[nz]
        grid = [[col[nz] for col in row] for row in grid]
        rhs_cols = [np.ascontiguousarray(rhs[nz, r]) for r in range(n)]
        nums = np.empty((dets.shape[0], n))
        for j in range(n):
            # Cramer numerator: column j replaced by the right-hand side
            repl = [[rhs_cols[r] if c == j else row[c]
                     for c in range(n)] for r, row in enumerate(grid)]
            nums[:, j] = _det_grid(repl)
        # exact feasibility: normalise to det > 0, then test in int64
        sign = np.where(dets > 0, 1, -1).astype(np.int64)
        nums_i = nums.astype(np.int64) * sign[:, None]
        dets_i = dets.astype(np.int64) * sign
        resid = nums_i @ rows_i64.T - offs_i64[None, :] * dets_i[:, None]
        feas = (resid <= 0).all(axis=1)
        for numv, det in zip(nums_i[feas], dets_i[feas]):
            point = tuple(Fraction(int(v), int(det)) for v in numv)
            found.setdefault(point, None)
    return list(found)


def _brute_vertices_fractions(rows, offs, n) -> list[tuple[Fraction, ...]]:
    """Plain-Fraction fallback for instances beyond the float-exact bound."""
    from ._exact import solve_square

    found: dict[tuple[Fraction, ...], None] = {}
    for sel in itertools.combinations(range(len(rows)), n):
        x = solve_square([rows[i] for i in sel], [offs[i] for i in sel])
        if x is None:
            continue
        if all(sum(r * v for r, v in zip(row, x)) <= off
               for row, off in zip(rows, offs)):
            found.setdefault(tuple(x), None)
    return sorted(found)


# ---------------------------------------------------------------------------
# Vertex-set certification via exact edge walking
# ---------------------------------------------------------------------------

@dataclass
class CertificationReport:
    """Outcome of certifying a claimed vertex list against halfspaces."""

    ok: bool
    vertex_count: int
    edge_count: int
    problems: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def _cone_rays(active_rows: list[tuple[int, ...]], n: int) -> list[tuple[int, ...]]:
    """Extreme rays of the pointed cone {d : row.d <= 0} (rows rank n).

    Double description: start from a rank-n subset (a simplicial cone that
    contains the target) and insert the remaining rows one at a time, with
    the usual combinatorial adjacency test on zero sets.
    """
    basis: list[int] = []
    for i, row in enumerate(active_rows):
        if mat_rank([active_rows[j] for j in basis] + [row]) > len(basis):
            basis.append(i)
            if len(basis) == n:
                break
    assert len(basis) == n, "cone is not pointed"
    inv = invert_square([active_rows[i] for i in basis])
    assert inv is not None
    rays: list[tuple[int, ...]] = []
    zerosets: list[int] = []
    for j in range(n):
        col = [-inv[i][j] for i in range(n)]
        den = 1
        for f in col:
            den = den * f.denominator // math.gcd(den, f.denominator)
        ray = gcd_reduce([int(f * den) for f in col])
        rays.append(ray)
        zerosets.append(sum(1 << basis[i] for i in range(n) if i != j))

    def dot(row: Sequence[int], d: Sequence[int]) -> int:
        return sum(r * v for r, v in zip(row, d))

    processed = set(basis)
    for i, row in enumerate(active_rows):
        if i in basis:
            continue
        vals = [dot(row, r) for r in rays]
        keep = [j for j, v in enumerate(vals) if v <= 0]
        pos = [j for j, v in enumerate(vals) if v > 0]
        neg = [j for j, v in enumerate(vals) if v < 0]
        new_rays: list[tuple[int, ...]] = []
        for p in pos:
            for q in neg:
                meet = zerosets[p] & zerosets[q]
                adjacent = all(
                    (meet & zerosets[r]) != meet
                    for r in range(len(rays)) if r not in (p, q))
                if not adjacent:
                    continue
                combo = [vals[p] * rays[q][t] - vals[q] * rays[p][t]
                         for t in range(n)]
                new_rays.append(gcd_reduce(combo))
        processed.add(i)
        rays = [rays[j] for j in keep] + new_rays
        zerosets = [sum(1 << t for t in processed if dot(active_rows[t], ray) == 0)
                    for ray in rays]
    return rays


def certify_vertices(halfspaces: Sequence[Halfspace],
                     claimed: Iterable[Sequence[Fraction]]) -> CertificationReport:
    """Certify that `claimed` is exactly the vertex set of the polytope.

    Checks, all in exact arithmetic: every claimed point is feasible and has
    a rank-n active set; every edge leaving a claimed vertex (extreme ray of
    its supporting cone, followed to the ratio-test boundary) lands on
    another claimed vertex; and the resulting edge graph is connected.
    Since the true edge graph of a bounded polytope is connected, a clean
    report implies the claimed set is the complete vertex set.
    """
    rows, offs = _integerized(halfspaces)
    n = len(rows[0]) if rows else 0
    problems: list[str] = []
    index: dict[tuple[Fraction, ...], int] = {}
    points: list[tuple[Fraction, ...]] = []
    for p in claimed:
        t = tuple(Fraction(x) for x in p)
        if t in index:
            problems.append(f"duplicate vertex {t}")
            continue
        index[t] = len(points)
        points.append(t)
    if not points:
        return CertificationReport(False, 0, 0, ["no vertices supplied"])

    scaled: list[tuple[tuple[int, ...], int]] = []
    for t in points:
        den = 1
        for f in t:
            den = den * f.denominator // math.gcd(den, f.denominator)
        scaled.append((tuple(int(f * den) for f in t), den))

    active_sets: list[list[int]] = []
    for vi, ((vnum, vden), t) in enumerate(zip(scaled, points)):
        act = []
        feasible = True
        for ri, (row, off) in enumerate(zip(rows, offs)):
            lhs = sum(r * v for r, v in zip(row, vnum))
            rhs = off * vden
            if lhs > rhs:
                problems.append(f"vertex {t} violates constraint {ri}")
                feasible = False
                break
            if lhs == rhs:
                act.append(ri)
        if feasible and mat_rank([rows[i] for i in act]) < n:
            problems.append(f"vertex {t} has active rank < {n}")
            feasible = False
        active_sets.append(act if feasible else [])

    parent = list(range(len(points)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    edges: set[tuple[int, int]] = set()
    for vi, act in enumerate(active_sets):
        if not act:
            continue
        vnum, vden = scaled[vi]
        for ray in _cone_rays([rows[i] for i in act], n):
            lam: Fraction | None = None
            for row, off in zip(rows, offs):
                step = sum(r * d for r, d in zip(row, ray))
                if step > 0:
                    gap = Fraction(off * vden - sum(r * v for r, v in zip(row, vnum)),
                                   vden * step)
                    if lam is None or gap < lam:
                        lam = gap
            if lam is None:
                problems.append(f"unbounded edge direction at vertex {points[vi]}")
                continue
            endpoint = tuple(Fraction(v, vden) + lam * d
                             for v, d in zip(vnum, ray))
            vj = index.get(endpoint)
            if vj is None:
                problems.append(
                    f"edge from {points[vi]} reaches unlisted vertex {endpoint}")
                continue
            edges.add((min(vi, vj), max(vi, vj)))
            parent[find(vi)] = find(vj)
    roots = {find(i) for i in range(len(points))}
    if len(roots) > 1 and not problems:
        problems.append("claimed vertex set splits into disconnected components")
    return CertificationReport(not problems, len(points), len(edges), problems)
