"""Closed forms for the integration problem dual to the extreme discrepancy.

The quadrature error of a weighted rule over the unit ball of the associated
box-integrand space equals the extreme L_p discrepancy of its nodes.  This
module provides the pieces of that correspondence that admit closed forms:

* the unit-norm worst-case integrand h (product of a fixed 1-d profile),
* the minimal-norm spline interpolating h at a single node y,
* the extremal coefficient function c* saturating the error bound,
* a numeric applier of the coefficient-to-integrand operator for checks.

Finite p is the discrepancy exponent; q = p/(p-1) is the conjugate
exponent measuring coefficient norms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    InvalidInputError,
    PointSet,
    WeightSet,
    local_discrepancy_batch,
    sample_box_pairs,
    substream,
)
from .engines import (
    _chunk_sizes,
    _map_chunks,
    extreme_l2_exact,
    extreme_lp_exact_even_p,
    extreme_lp_mc,
)


def conjugate_exponent(p: float) -> float:
    """Hölder conjugate q with 1/p + 1/q = 1; maps 1 <-> inf."""
    p = float(p)
    if math.isinf(p):
        return 1.0
    if p == 1.0:
        return math.inf
    if p < 1.0:
        raise InvalidInputError("exponent must satisfy p >= 1")
    return p / (p - 1.0)


@dataclass(frozen=True)
class HolderPair:
    """A conjugate exponent pair; construct from either side."""

    p: float
    q: float

    @classmethod
    def from_p(cls, p: float) -> "HolderPair":
        return cls(float(p), conjugate_exponent(p))

    @classmethod
    def from_q(cls, q: float) -> "HolderPair":
        return cls(conjugate_exponent(q), float(q))


def _check_finite_p(p: float) -> float:
    p = float(p)
    if not (1.0 <= p < math.inf):
        raise InvalidInputError("need a finite exponent p in [1, inf)")
    return p


def _profile_scale(p: float) -> float:
    """Leading factor of the 1-d worst-case profile."""
    return (p + 2.0) / p * ((p + 1.0) * (p + 2.0)) ** (-1.0 / p)


def initial_error(p: float, d: int) -> float:
    """Extreme L_p discrepancy of the empty rule, ((p+1)(p+2))^(-d/p).

    This is also the integral of the d-dim worst-case integrand, i.e. the
    error the zero algorithm makes on it.  For p = inf the value is 1.
    """
    if d < 1:
        raise InvalidInputError("dimension must be at least 1")
    p = float(p)
    if math.isinf(p):
        return 1.0
    _check_finite_p(p)
    return ((p + 1.0) * (p + 2.0)) ** (-d / p)


def worst_case_1d(p: float, x):
    """Unit-norm 1-d worst-case integrand, vanishing at 0 and 1.

    h(x) = ((p+2)/p) ((p+1)(p+2))^(-1/p) (1 - x^(p+1) - (1-x)^(p+1)),
    maximized at x = 1/2.
    """
    p = _check_finite_p(p)
    x = np.asarray(x, dtype=np.float64)
    if x.size and (np.min(x) < 0.0 or np.max(x) > 1.0):
        raise InvalidInputError("arguments must lie in [0, 1]")
    v = _profile_scale(p) * (1.0 - x ** (p + 1.0) - (1.0 - x) ** (p + 1.0))
    return float(v) if v.ndim == 0 else v


def worst_case_nd(p: float, x) -> float:
    """Product-form d-dim worst-case integrand at one point x in [0,1]^d."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.size < 1:
        raise InvalidInputError("x must be a 1-d coordinate vector")
    return float(np.prod(worst_case_1d(p, x)))


# ---------------------------------------------------------------------------
# minimal-norm interpolating spline at one node


def _mix_kernel(x, y):
    """min(x, y) - x y, the mass of boxes covering both x and y."""
    return np.minimum(x, y) - x * y


def spline_eval(p: float, y: float, x):
    """Minimal-norm interpolant of the worst-case profile at node y.

    s_y(x) = h(y) (min(x, y) - x y) / (y (1 - y)); it matches h at y, is
    piecewise linear with a kink at y, and vanishes at the cube edges.
    For y in {0, 1} the spline degenerates to zero.
    """
    p = _check_finite_p(p)
    y = float(y)
    if not (0.0 <= y <= 1.0):
        raise InvalidInputError("node must lie in [0, 1]")
    x = np.asarray(x, dtype=np.float64)
    if x.size and (np.min(x) < 0.0 or np.max(x) > 1.0):
        raise InvalidInputError("arguments must lie in [0, 1]")
    if y == 0.0 or y == 1.0:
        v = np.zeros_like(x)
    else:
        v = worst_case_1d(p, y) * _mix_kernel(x, y) / (y * (1.0 - y))
    return float(v) if v.ndim == 0 else v


def spline_norm(p: float, y):
    """Norm of the node-y spline: h(y) / (y (1 - y))^(1/p), 0 at the edges.

    This equals the ratio of the spline's norm to the (unit) worst-case
    norm, the quantity whose maximum over y drives the curse bounds.
    """
    p = _check_finite_p(p)
    y = np.asarray(y, dtype=np.float64)
    if y.size and (np.min(y) < 0.0 or np.max(y) > 1.0):
        raise InvalidInputError("nodes must lie in [0, 1]")
    interior = (y > 0.0) & (y < 1.0)
    mass = np.where(interior, y * (1.0 - y), 1.0)
    v = np.where(interior, worst_case_1d(p, y) * mass ** (-1.0 / p), 0.0)
    return float(v) if v.ndim == 0 else v


def spline_integral(p: float, y: float) -> float:
    """Integral over [0, 1] of the node-y spline, h(y) / 2."""
    p = _check_finite_p(p)
    y = float(y)
    if not (0.0 <= y <= 1.0):
        raise InvalidInputError("node must lie in [0, 1]")
    return 0.5 * worst_case_1d(p, y)


# ---------------------------------------------------------------------------
# extremal coefficient function


def representer_value(p: float, delta, norm_p: float):
    """Pointwise extremal coefficient |delta|^(p-2) delta / norm^(p-1).

    Pairing it against the local discrepancy integrates to +norm, and its
    conjugate-norm is 1.  For p = 1 the limit is sign(delta); zero local
    discrepancy maps to zero.
    """
    p = _check_finite_p(p)
    delta = np.asarray(delta, dtype=np.float64)
    if p == 1.0:
        v = np.sign(delta)
        return float(v) if v.ndim == 0 else v
    if not (norm_p > 0.0):
        raise InvalidInputError("norm_p must be positive for p > 1")
    # |delta|^(p-2) delta written as sign(delta) |delta|^(p-1) so that
    # delta = 0 evaluates to 0 for every p > 1 without special-casing
    v = np.sign(delta) * np.abs(delta) ** (p - 1.0) / norm_p ** (p - 1.0)
    return float(v) if v.ndim == 0 else v


def extremal_representer(
    ps: PointSet, ws: WeightSet, p: float, norm_p: float, lower, upper
) -> float:
    """Extremal coefficient of a rule, evaluated at one box pair."""
    lower = np.asarray(lower, dtype=np.float64)
    upper = np.asarray(upper, dtype=np.float64)
    delta = local_discrepancy_batch(ps.coords, ws.values, lower[None, :], upper[None, :])
    return float(representer_value(p, delta[0], norm_p))


# ---------------------------------------------------------------------------
# numeric coefficient-to-integrand operator (1-d)


def box_operator_1d(c, x: float, panels: int = 8, order: int = 16, breakpoints=()) -> float:
    """Numeric value at x of the integrand with box coefficient c.

    Integrates c(a, b) over a in [0, x], b in [x, 1], the set of boxes
    covering x.  Tensor Gauss-Legendre panels; pass the locations where c
    jumps through `breakpoints` so panel edges align with them, otherwise
    the rule converges slowly.  c must accept numpy array arguments.
    """
    x = float(x)
    if not (0.0 <= x <= 1.0):
        raise InvalidInputError("x must lie in [0, 1]")
    if panels < 1 or order < 1:
        raise InvalidInputError("panels and order must be >= 1")
    nodes, wts = np.polynomial.legendre.leggauss(order)

    def segment_nodes(lo: float, hi: float):
        cuts = [lo] + sorted(b for b in breakpoints if lo < b < hi) + [hi]
        xs, ws_ = [], []
        for s0, s1 in zip(cuts[:-1], cuts[1:]):
            edges = np.linspace(s0, s1, panels + 1)
            for e0, e1 in zip(edges[:-1], edges[1:]):
                half = 0.5 * (e1 - e0)
                xs.append(0.5 * (e0 + e1) + half * nodes)
                ws_.append(half * wts)
        return np.concatenate(xs), np.concatenate(ws_)

    if x == 0.0 or x == 1.0:
        # one side of the anchor domain degenerates to a point
        return 0.0
    a_nodes, a_wts = segment_nodes(0.0, x)
    b_nodes, b_wts = segment_nodes(x, 1.0)
    vals = c(a_nodes[:, None], b_nodes[None, :])
    return float(a_wts @ vals @ b_wts)


# ---------------------------------------------------------------------------
# Monte Carlo duality check


@dataclass(frozen=True)
class DualityCheck:
    """Sampled verification that the extremal coefficient saturates duality.

    pairing estimates the integral of c* times the local discrepancy and
    should match norm; qnorm_pow estimates the q-th power of the conjugate
    norm of c* and should match 1.  z-scores use the sample stderr.
    """

    p: float
    q: float
    norm: float
    norm_method: str
    pairing: float
    pairing_stderr: float
    qnorm_pow: float
    qnorm_stderr: float
    samples: int
    seed: int

    @property
    def pairing_z(self) -> float:
        return _zscore(self.pairing, self.norm, self.pairing_stderr)

    @property
    def qnorm_z(self) -> float:
        return _zscore(self.qnorm_pow, 1.0, self.qnorm_stderr)


def _zscore(est: float, target: float, se: float) -> float:
    if se == 0.0:
        return 0.0 if est == target else math.inf
    return (est - target) / se

# substream indices >= this are reserved for the norm estimate so its
# samples never overlap the pairing samples
_NORM_STREAM_OFFSET = 1 << 32


def duality_gap_mc(
    ps: PointSet,
    ws: WeightSet,
    p: float,
    samples: int,
    seed: int,
    workers: int = 1,
) -> DualityCheck:
    """Monte Carlo audit of the duality identities for one rule.

    The norm is computed exactly when p is 2 or an even integer and by an
    independent Monte Carlo stream otherwise.  The pairing and the
    conjugate-norm power then come from fresh sampled boxes; both have
    known targets (norm and 1), reported with delta-free z-scores.
    """
    p = _check_finite_p(p)
    if p == 1.0:
        raise InvalidInputError("duality audit needs p > 1 (q finite)")
    if samples < 2:
        raise InvalidInputError("need at least 2 samples")
    if p == 2.0:
        norm, norm_method = extreme_l2_exact(ps, ws).value, "l2-exact"
    elif p == int(p) and int(p) % 2 == 0:
        norm, norm_method = extreme_lp_exact_even_p(ps, ws, int(p)).value, "even-exact"
    else:
        res = extreme_lp_mc(ps, ws, p, samples, seed + _NORM_STREAM_OFFSET, workers)
        norm, norm_method = res.value, "mc"
    if norm <= 0.0:
        raise InvalidInputError("rule has zero discrepancy, nothing to audit")
    q = conjugate_exponent(p)

    sizes = _chunk_sizes(samples)
    coords, weights, d = ps.coords, ws.values, ps.d

    def one_chunk(i: int):
        rng = substream(seed, i)
        lo, hi = sample_box_pairs(rng, sizes[i], d)
        delta = local_discrepancy_batch(coords, weights, lo, hi)
        cstar = representer_value(p, delta, norm)
        y1 = cstar * delta
        y2 = np.abs(cstar) ** q
        return (
            float(np.sum(y1)),
            float(np.sum(y1 * y1)),
            float(np.sum(y2)),
            float(np.sum(y2 * y2)),
        )

    stats = _map_chunks(one_chunk, len(sizes), workers)
    scale = 2.0**-d

    def reduce_pair(idx: int):
        tot = math.fsum(s[idx] for s in stats)
        tot_sq = math.fsum(s[idx + 1] for s in stats)
        mean = tot / samples
        var = max(tot_sq - tot * tot / samples, 0.0) / (samples - 1)
        return scale * mean, scale * math.sqrt(var / samples)

    pairing, pairing_se = reduce_pair(0)
    qnorm, qnorm_se = reduce_pair(2)
    return DualityCheck(
        p=p,
        q=q,
        norm=norm,
        norm_method=norm_method,
        pairing=pairing,
        pairing_stderr=pairing_se,
        qnorm_pow=qnorm,
        qnorm_stderr=qnorm_se,
        samples=samples,
        seed=seed,
    )
