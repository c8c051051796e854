"""Exact and Monte Carlo evaluators of the extreme L_p discrepancy.

All evaluators return the unnormalized value

    L_p = ( integral over {a <= b} of |local_discrepancy(a, b)|^p )^(1/p)

and its p = infinity analogue, the essential supremum.  Exact finite-p
evaluation is supported for p = 2 (closed form) and all even integers
(piecewise-polynomial cell integration); other finite p go through Monte
Carlo.  The sup norm has an exact grid enumeration and a sampled hard
lower bound.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .core import (
    CHUNK,
    BudgetExceededError,
    DiscrepancyResult,
    InternalConsistencyError,
    InvalidInputError,
    Method,
    PointSet,
    WeightSet,
    local_discrepancy_batch,
    sample_box_pairs,
    substream,
)

DEFAULT_CELL_BUDGET = 10**7
DEFAULT_BOX_BUDGET = 10**8

# squared-total clamp for the closed-form L2 path; anything more negative
# indicates a real inconsistency, not roundoff
_L2_NEG_TOL = 1e-12


def _check_pair(ps: PointSet, ws: WeightSet) -> None:
    if ws.n != ps.n:
        raise InvalidInputError("point set and weight set sizes differ")


# ---------------------------------------------------------------------------
# cell decomposition shared by the exact engines


@dataclass
class CellDecomposition:
    """Per-dimension breakpoint grids induced by a point set.

    gammas[j] is the sorted union of {0, 1} and the j-th coordinates; the
    local discrepancy restricted to boxes whose anchors stay inside one
    cell of the induced product partition has a constant weighted count.
    pos[j][k] is the index of point k's j-th coordinate inside gammas[j].
    """

    gammas: list[np.ndarray]
    pos: list[np.ndarray]

    @classmethod
    def from_points(cls, ps: PointSet) -> "CellDecomposition":
        gammas, pos = [], []
        for j in range(ps.d):
            g = np.unique(np.concatenate(([0.0, 1.0], ps.coords[:, j])))
            gammas.append(g)
            pos.append(np.searchsorted(g, ps.coords[:, j]))
        return cls(gammas, pos)

    def interval_pair_count(self) -> int:
        """Cells for finite-p integration: ordered interval pairs per axis."""
        total = 1
        for g in self.gammas:
            m = len(g) - 1
            total *= m * (m + 1) // 2
        return total

    def grid_pair_count(self) -> int:
        """Candidate boxes for sup-norm enumeration: ordered grid pairs."""
        total = 1
        for g in self.gammas:
            b = len(g)
            total *= b * (b + 1) // 2
        return total


def _ordered_pairs(m: int) -> tuple[np.ndarray, np.ndarray]:
    """All index pairs (s, t) with 0 <= s <= t < m, lexicographic."""
    s, t = np.triu_indices(m)
    return s, t


def _count_tensor(weights: np.ndarray, mats: list[np.ndarray]) -> np.ndarray:
    """Weighted point counts over the cartesian product of per-dim pair sets.

    mats[j] has shape (P_j, n); entry [i, k] is 1.0 when point k satisfies
    the j-th membership condition of pair i.  Returns shape (P_0, ..., P_r).
    """
    if len(mats) == 1:
        return mats[0] @ weights
    if len(mats) == 2:
        return np.einsum("ak,bk,k->ab", mats[0], mats[1], weights, optimize=True)
    out = np.empty(tuple(m.shape[0] for m in mats))
    for a in range(mats[0].shape[0]):
        out[a] = _count_tensor(weights * mats[0][a], mats[1:])
    return out


# ---------------------------------------------------------------------------
# exact L2 (closed form)


def _mix_kernel_1d(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.minimum.outer(x, y) - np.outer(x, y)


def extreme_l2_exact(ps: PointSet, ws: WeightSet) -> DiscrepancyResult:
    """Closed-form L2 value in O(n^2 d) operations.

    Squaring the local discrepancy and integrating each term over the
    anchor domain gives a pairwise kernel sum, a one-body cross term and
    the constant 12^-d:

        L2^2 = sum_jk c_j c_k prod_i (min(x_ji, x_ki) - x_ji x_ki)
             - 2 sum_k c_k prod_i (1 - x_ki^3 - (1 - x_ki)^3) / 6
             + 12^-d
    """
    _check_pair(ps, ws)
    n, d = ps.n, ps.d
    if n:
        kern = np.ones((n, n))
        for j in range(d):
            kern *= _mix_kernel_1d(ps.coords[:, j], ps.coords[:, j])
        pair_term = float(ws.values @ kern @ ws.values)
        g = (1.0 - ps.coords**3 - (1.0 - ps.coords) ** 3) / 6.0
        cross_term = float(ws.values @ np.prod(g, axis=1))
    else:
        pair_term = cross_term = 0.0
    sq = pair_term - 2.0 * cross_term + 12.0**-d
    if sq < -_L2_NEG_TOL:
        raise InternalConsistencyError(f"squared L2 total {sq} is negative")
    return DiscrepancyResult(math.sqrt(max(sq, 0.0)), 2.0, Method.L2_EXACT)


# ---------------------------------------------------------------------------
# exact even p


def _interval_tables(
    g: np.ndarray, pos_j: np.ndarray, p: int
) -> tuple[np.ndarray, np.ndarray]:
    """Per-axis tables for one dimension of the even-p cell sum.

    For each ordered interval pair (s, t) the anchor constraint is
    a in [g_s, g_{s+1}], b in [g_t, g_{t+1}], a <= b.  Returns
      integrals: shape (p + 1, npairs), entry [i, q] = integral of
                 (b - a)^i over pair q's anchor region;
      member:    shape (npairs, n), 1.0 when the point's coordinate lies
                 in [g_{s+1}, g_t], i.e. inside every box of the cell.
    """
    m = len(g) - 1
    s, t = _ordered_pairs(m)
    a0, a1, b0, b1 = g[s], g[s + 1], g[t], g[t + 1]
    tri = s == t
    integrals = np.empty((p + 1, len(s)))
    for i in range(p + 1):
        k = i + 2
        den = (i + 1) * (i + 2)
        rect = ((b1 - a0) ** k - (b1 - a1) ** k - (b0 - a0) ** k + (b0 - a1) ** k) / den
        integrals[i] = np.where(tri, (a1 - a0) ** k / den, rect)
    member = ((s[:, None] < pos_j[None, :]) & (pos_j[None, :] <= t[:, None])).astype(
        np.float64
    )
    return integrals, member


def extreme_lp_exact_even_p(
    ps: PointSet, ws: WeightSet, p: int, cell_budget: int = DEFAULT_CELL_BUDGET
) -> DiscrepancyResult:
    """Exact L_p for even integer p by cell-wise polynomial integration.

    On each cell the weighted count C is constant, so the binomial theorem
    reduces the cell integral of (C - vol)^p to 1-d moments of (b - a)^i
    which tensorize across dimensions.  Work grows with the product over
    axes of the interval pair counts; `cell_budget` caps that product.
    """
    _check_pair(ps, ws)
    if not (isinstance(p, (int, np.integer)) and p >= 2 and p % 2 == 0):
        raise InvalidInputError("even-p engine needs an even integer p >= 2")
    p = int(p)
    cd = CellDecomposition.from_points(ps)
    ncells = cd.interval_pair_count()
    if ncells > cell_budget:
        raise BudgetExceededError(
            f"{ncells} cells exceed budget {cell_budget}; use extreme_lp_mc instead"
        )
    tables = [
        _interval_tables(cd.gammas[j], cd.pos[j], p) for j in range(ps.d)
    ]
    coeffs = [math.comb(p, i) * (-1) ** i for i in range(p + 1)]
    parts: list[float] = []
    if ps.d == 1:
        integrals, member = tables[0]
        counts = member @ ws.values
        for i in range(p + 1):
            parts.append(coeffs[i] * float(np.sum(counts ** (p - i) * integrals[i])))
    else:
        head_int, head_mem = tables[0]
        rest_mem = [t[1] for t in tables[1:]]
        rest_out = [
            reduce(np.multiply.outer, [t[0][i] for t in tables[1:]])
            for i in range(p + 1)
        ]
        for a in range(head_mem.shape[0]):
            counts = _count_tensor(ws.values * head_mem[a], rest_mem)
            for i in range(p + 1):
                parts.append(
                    coeffs[i]
                    * head_int[i][a]
                    * float(np.sum(counts ** (p - i) * rest_out[i]))
                )
    total = math.fsum(parts)
    if total < -_L2_NEG_TOL:
        raise InternalConsistencyError(f"p-th power total {total} is negative")
    return DiscrepancyResult(max(total, 0.0) ** (1.0 / p), float(p), Method.EVEN_P_EXACT)


# ---------------------------------------------------------------------------
# exact sup norm


def _grid_tables(
    g: np.ndarray, pos_j: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-axis tables for sup-norm enumeration over grid anchor pairs.

    For grid pair (u, v), u <= v: side length g_v - g_u, closed membership
    g_u <= x <= g_v, and strictly open membership g_u < x < g_v.  The
    positive side of the supremum is attained as a closed count minus the
    volume; the negative side as the volume minus an open count (boxes can
    shrink onto a cell closure from inside, excluding boundary points).
    """
    u, v = _ordered_pairs(len(g))
    side = g[v] - g[u]
    closed = ((u[:, None] <= pos_j[None, :]) & (pos_j[None, :] <= v[:, None])).astype(
        np.float64
    )
    opened = ((u[:, None] < pos_j[None, :]) & (pos_j[None, :] < v[:, None])).astype(
        np.float64
    )
    return side, closed, opened


def extreme_linf_exact(
    ps: PointSet, ws: WeightSet, box_budget: int = DEFAULT_BOX_BUDGET
) -> DiscrepancyResult:
    """Exact sup-norm discrepancy by enumerating breakpoint-grid boxes.

    The supremum over all boxes of +-(count - volume) is attained in the
    limit at boxes whose closures have all faces on the per-axis grids, so
    scanning every ordered grid pair with closed counts (positive side)
    and open counts (negative side) is exact for any real weights.
    """
    _check_pair(ps, ws)
    cd = CellDecomposition.from_points(ps)
    nboxes = cd.grid_pair_count()
    if nboxes > box_budget:
        raise BudgetExceededError(
            f"{nboxes} boxes exceed budget {box_budget}; use extreme_linf_lower_mc instead"
        )
    tables = [_grid_tables(cd.gammas[j], cd.pos[j]) for j in range(ps.d)]
    best = 0.0
    if ps.d == 1:
        side, closed, opened = tables[0]
        pos_side = (closed @ ws.values) - side
        neg_side = side - (opened @ ws.values)
        best = max(float(pos_side.max()), float(neg_side.max()))
    else:
        head_side, head_closed, head_open = tables[0]
        rest_side = reduce(np.multiply.outer, [t[0] for t in tables[1:]])
        rest_closed = [t[1] for t in tables[1:]]
        rest_open = [t[2] for t in tables[1:]]
        for a in range(len(head_side)):
            vol = head_side[a] * rest_side
            pos_side = _count_tensor(ws.values * head_closed[a], rest_closed) - vol
            neg_side = vol - _count_tensor(ws.values * head_open[a], rest_open)
            best = max(best, float(pos_side.max()), float(neg_side.max()))
    return DiscrepancyResult(best, math.inf, Method.LINF_EXACT)


# ---------------------------------------------------------------------------
# Monte Carlo


def _chunk_sizes(samples: int) -> list[int]:
    full, rem = divmod(samples, CHUNK)
    return [CHUNK] * full + ([rem] if rem else [])


def _map_chunks(fn, nchunks: int, workers: int) -> list:
    """Evaluate fn(0..nchunks-1), results ordered by chunk index."""
    if workers <= 1 or nchunks <= 1:
        return [fn(i) for i in range(nchunks)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(nchunks)))


def extreme_lp_mc(
    ps: PointSet,
    ws: WeightSet,
    p: float,
    samples: int,
    seed: int,
    workers: int = 1,
) -> DiscrepancyResult:
    """Monte Carlo estimate of the finite-p extreme discrepancy.

    Boxes are drawn from the triangle sampler in fixed chunks keyed by the
    seed and chunk index; partial sums reduce in chunk order, so the result
    is bit-identical for any worker count.  The standard error of the root
    is propagated from the mean of |delta|^p by the delta method.
    """
    _check_pair(ps, ws)
    p = float(p)
    if not (1.0 <= p < math.inf):
        raise InvalidInputError("Monte Carlo engine needs 1 <= p < inf")
    if samples < 2:
        raise InvalidInputError("need at least 2 samples")
    if workers < 1:
        raise InvalidInputError("workers must be >= 1")
    sizes = _chunk_sizes(samples)
    coords, weights, d = ps.coords, ws.values, ps.d

    def one_chunk(i: int) -> tuple[float, float]:
        rng = substream(seed, i)
        lo, hi = sample_box_pairs(rng, sizes[i], d)
        y = np.abs(local_discrepancy_batch(coords, weights, lo, hi)) ** p
        return float(np.sum(y)), float(np.sum(y * y))

    stats = _map_chunks(one_chunk, len(sizes), workers)
    total = math.fsum(s[0] for s in stats)
    total_sq = math.fsum(s[1] for s in stats)
    mean = total / samples
    var = max(total_sq - total * total / samples, 0.0) / (samples - 1)
    se_mean = math.sqrt(var / samples)
    scale = 2.0**-d
    raw = scale * mean
    if raw > 0.0:
        value = raw ** (1.0 / p)
        stderr = (1.0 / p) * raw ** (1.0 / p - 1.0) * scale * se_mean
    else:
        # degenerate sample: report the raw-mean stderr, the delta method
        # has no finite slope at zero
        value = 0.0
        stderr = scale * se_mean
    return DiscrepancyResult(value, p, Method.MC, stderr=stderr, samples=samples, seed=seed)


def extreme_linf_lower_mc(
    ps: PointSet,
    ws: WeightSet,
    samples: int,
    seed: int,
    workers: int = 1,
) -> DiscrepancyResult:
    """Sampled hard lower bound of the sup-norm discrepancy.

    The maximum of |delta| over sampled boxes never exceeds the essential
    supremum, so the reported value is a certified lower bound; stderr is
    0.0 by convention since a sample maximum carries no error estimate.
    """
    _check_pair(ps, ws)
    if samples < 1:
        raise InvalidInputError("need at least 1 sample")
    if workers < 1:
        raise InvalidInputError("workers must be >= 1")
    sizes = _chunk_sizes(samples)
    coords, weights, d = ps.coords, ws.values, ps.d

    def one_chunk(i: int) -> float:
        rng = substream(seed, i)
        lo, hi = sample_box_pairs(rng, sizes[i], d)
        return float(np.max(np.abs(local_discrepancy_batch(coords, weights, lo, hi))))

    best = max(_map_chunks(one_chunk, len(sizes), workers))
    return DiscrepancyResult(
        best, math.inf, Method.LINF_SAMPLED, stderr=0.0, samples=samples, seed=seed
    )
