"""Point sets, weights, box pairs, and the local discrepancy function.

Conventions used throughout the package:

* Points live in the half-open cube [0, 1)^d.
* A box pair (a, b) with a <= b coordinatewise names the half-open box
  [a, b); membership is a_j <= x_j < b_j in every coordinate.
* The collection of box pairs is a subset of [0,1]^{2d} with Lebesgue mass
  2^-d.  It is deliberately left unnormalized: an integral over it equals
  2^-d times the expectation under the triangle sampler `sample_box_pair`.
* All floating point work is binary64.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

# Samples per RNG substream.  Monte Carlo estimators draw chunk i from the
# counter-based stream keyed by (seed, i) and reduce the per-chunk partials
# in index order, so results do not depend on how chunks are scheduled.
CHUNK = 1 << 16

_WEIGHT_TOL = 0.0  # QMC classification is exact: weights must equal 1/n bitwise


class InvalidInputError(ValueError):
    """Bad user input: malformed files, out-of-range values, wrong exponents."""


class BudgetExceededError(RuntimeError):
    """An exact enumeration would exceed its configured work budget."""


class InternalConsistencyError(RuntimeError):
    """A quantity violated an internal invariant beyond numerical noise."""


class WeightKind(enum.Enum):
    GENERAL = "general"
    NONNEG = "nonneg"
    QMC = "qmc"


class Method(enum.Enum):
    """Evaluation method tags; values double as CLI tokens."""

    L2_EXACT = "l2-exact"
    EVEN_P_EXACT = "even-exact"
    MC = "mc"
    LINF_EXACT = "linf-exact"
    LINF_SAMPLED = "linf-mc"


_RANDOMIZED = frozenset({Method.MC, Method.LINF_SAMPLED})


@dataclass(frozen=True)
class PointSet:
    """An ordered list of points in [0, 1)^d, immutable after construction."""

    coords: np.ndarray

    def __post_init__(self) -> None:
        arr = np.ascontiguousarray(np.asarray(self.coords, dtype=np.float64))
        if arr.ndim != 2:
            raise InvalidInputError("coords must be a 2-d array of shape (n, d)")
        if arr.shape[1] < 1:
            raise InvalidInputError("dimension must be at least 1")
        if arr.size and (not np.all(np.isfinite(arr)) or arr.min() < 0.0 or arr.max() >= 1.0):
            raise InvalidInputError("coordinates must lie in [0, 1)")
        arr.flags.writeable = False
        object.__setattr__(self, "coords", arr)

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def d(self) -> int:
        return self.coords.shape[1]


@dataclass(frozen=True)
class WeightSet:
    """Per-point quadrature weights together with their sign class.

    QMC means every weight equals 1/n exactly; NONNEG means all weights are
    >= 0; GENERAL places no sign restriction.  The kind is part of the value
    because several bounds are only valid for nonnegative rules.
    """

    values: np.ndarray
    kind: WeightKind

    def __post_init__(self) -> None:
        arr = np.ascontiguousarray(np.asarray(self.values, dtype=np.float64))
        if arr.ndim != 1:
            raise InvalidInputError("weights must be a 1-d array")
        if arr.size and not np.all(np.isfinite(arr)):
            raise InvalidInputError("weights must be finite")
        if self.kind is WeightKind.QMC:
            if arr.size == 0:
                raise InvalidInputError("QMC weights need at least one point")
            if not np.all(arr == 1.0 / arr.size):
                raise InvalidInputError("QMC weights must all equal 1/n exactly")
        elif self.kind is WeightKind.NONNEG:
            if arr.size and arr.min() < 0.0:
                raise InvalidInputError("NONNEG weights must be >= 0")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def n(self) -> int:
        return self.values.shape[0]


def classify_weights(values: np.ndarray) -> WeightKind:
    """Most specific kind the given weight vector satisfies."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.size and np.all(arr == 1.0 / arr.size):
        return WeightKind.QMC
    if arr.size == 0 or arr.min() >= 0.0:
        return WeightKind.NONNEG
    return WeightKind.GENERAL


def equal_weights(n: int) -> WeightSet:
    if n < 1:
        raise InvalidInputError("equal weights need n >= 1")
    return WeightSet(np.full(n, 1.0 / n), WeightKind.QMC)


@dataclass(frozen=True)
class BoxPair:
    """Anchors (lower, upper) of a half-open box [lower, upper)."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self) -> None:
        lo = np.ascontiguousarray(np.asarray(self.lower, dtype=np.float64))
        hi = np.ascontiguousarray(np.asarray(self.upper, dtype=np.float64))
        if lo.ndim != 1 or lo.shape != hi.shape:
            raise InvalidInputError("box anchors must be 1-d arrays of equal length")
        if lo.size < 1:
            raise InvalidInputError("box dimension must be at least 1")
        ok = np.all(lo >= 0.0) and np.all(hi <= 1.0) and np.all(lo <= hi)
        if not (ok and np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            raise InvalidInputError("need 0 <= lower <= upper <= 1 coordinatewise")
        lo.flags.writeable = False
        hi.flags.writeable = False
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def d(self) -> int:
        return self.lower.shape[0]

    def volume(self) -> float:
        return float(np.prod(self.upper - self.lower))


@dataclass(frozen=True)
class DiscrepancyResult:
    """Outcome of a discrepancy evaluation.

    stderr/samples/seed are present exactly for the randomized methods.  For
    LINF_SAMPLED the value is a hard lower bound of the sup norm, so stderr
    is reported as 0.0.
    """

    value: float
    p: float
    method: Method
    stderr: float | None = None
    samples: int | None = None
    seed: int | None = None

    def __post_init__(self) -> None:
        if not (self.value >= 0.0):
            raise InternalConsistencyError(f"negative discrepancy value {self.value}")
        randomized = self.method in _RANDOMIZED
        have = (self.stderr is not None, self.samples is not None, self.seed is not None)
        if randomized and not all(have):
            raise InvalidInputError("randomized results need stderr, samples and seed")
        if not randomized and any(have):
            raise InvalidInputError("exact results must not carry stderr, samples or seed")

    def to_json_dict(self, task: str, d: int, n: int) -> dict:
        out: dict = {
            "task": task,
            "p": "inf" if math.isinf(self.p) else self.p,
            "d": d,
            "n": n,
            "method": self.method.value,
            "value": self.value,
        }
        if self.stderr is not None:
            out["stderr"] = self.stderr
        if self.samples is not None:
            out["samples"] = self.samples
        if self.seed is not None:
            out["seed"] = self.seed
        return out


# ---------------------------------------------------------------------------
# local discrepancy


def local_discrepancy(ps: PointSet, ws: WeightSet, box: BoxPair) -> float:
    """Weighted count of points in [lower, upper) minus the box volume."""
    if ws.n != ps.n:
        raise InvalidInputError("point set and weight set sizes differ")
    if box.d != ps.d:
        raise InvalidInputError("box dimension does not match point set")
    delta = local_discrepancy_batch(
        ps.coords, ws.values, box.lower[None, :], box.upper[None, :]
    )
    return float(delta[0])


def local_discrepancy_batch(
    coords: np.ndarray, weights: np.ndarray, lower: np.ndarray, upper: np.ndarray
) -> np.ndarray:
    """Vectorized local discrepancy for a batch of boxes, shape (m,)."""
    inside = np.all(
        (lower[:, None, :] <= coords[None, :, :]) & (coords[None, :, :] < upper[:, None, :]),
        axis=2,
    )
    counts = inside.astype(np.float64) @ weights
    return counts - np.prod(upper - lower, axis=1)


# ---------------------------------------------------------------------------
# box sampling


def substream(seed: int, index: int) -> np.random.Generator:
    """Counter-based generator for chunk `index` of the stream named `seed`.

    Streams for distinct (seed, index) pairs are statistically independent,
    and reconstructing a stream is O(1), so chunks can be evaluated in any
    order or on any worker with identical output.
    """
    if index < 0:
        raise InvalidInputError("substream index must be >= 0")
    key = [int(seed) & 0xFFFFFFFFFFFFFFFF, int(index) & 0xFFFFFFFFFFFFFFFF]
    return np.random.Generator(np.random.Philox(key=key))


def sample_box_pairs(rng, m: int, d: int) -> tuple[np.ndarray, np.ndarray]:
    """Draw m box pairs uniformly from the ordered-anchor domain.

    Per coordinate, two independent uniforms are drawn and sorted; the joint
    density of (lower, upper) is then 2^d on the set lower <= upper.
    """
    u = rng.random((2, m, d))
    return np.minimum(u[0], u[1]), np.maximum(u[0], u[1])


def sample_box_pair(rng, d: int) -> BoxPair:
    lo, hi = sample_box_pairs(rng, 1, d)
    return BoxPair(lo[0], hi[0])


# ---------------------------------------------------------------------------
# CSV point file format
#
# Lines starting with '#' are comments.  An optional header row must read
# x1,...,xd or x1,...,xd,weight.  Without a header every column is a
# coordinate and the rule is an equal-weight (QMC) rule; a weight column is
# recognized only through the header.  Floats are written with repr so a
# save/load round trip is bit exact.

_HEADER_COORD = re.compile(r"x(\d+)$")


def _split(line: str) -> list[str]:
    return [f.strip() for f in line.split(",")]


def _parse_header(fields: list[str], lineno: int) -> tuple[int, bool]:
    has_weight = fields[-1].lower() == "weight"
    coord_fields = fields[:-1] if has_weight else fields
    if not coord_fields:
        raise InvalidInputError(f"line {lineno}: header has no coordinate columns")
    for i, f in enumerate(coord_fields):
        m = _HEADER_COORD.match(f.lower())
        if not m or int(m.group(1)) != i + 1:
            raise InvalidInputError(
                f"line {lineno}: header column {i + 1} is {f!r}, expected x{i + 1}"
            )
    return len(coord_fields), has_weight


def load_points(path: str | Path, d: int | None = None) -> tuple[PointSet, WeightSet]:
    """Read a CSV point file; returns the points and classified weights.

    `d` is only needed to fix the dimension of files with no header and no
    data rows; otherwise it cross-checks the file.
    """
    rows: list[tuple[int, list[str]]] = []
    header: tuple[int, bool] | None = None
    seen_data = False
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = _split(line)
            if not seen_data and header is None and any(not _is_float(f) for f in fields):
                header = _parse_header(fields, lineno)
                continue
            seen_data = True
            rows.append((lineno, fields))

    if header is not None:
        file_d, has_weight = header
    elif rows:
        file_d, has_weight = len(rows[0][1]), False
    elif d is not None:
        file_d, has_weight = d, False
    else:
        raise InvalidInputError(f"{path}: empty file and no dimension given")
    if d is not None and d != file_d:
        raise InvalidInputError(f"{path}: file dimension {file_d} but d={d} requested")

    width = file_d + (1 if has_weight else 0)
    coords = np.empty((len(rows), file_d))
    weights = np.empty(len(rows))
    for r, (lineno, fields) in enumerate(rows):
        if len(fields) != width:
            raise InvalidInputError(
                f"line {lineno}: expected {width} fields, found {len(fields)}"
            )
        for c, f in enumerate(fields):
            try:
                v = float(f)
            except ValueError:
                raise InvalidInputError(
                    f"line {lineno}, column {c + 1}: {f!r} is not a number"
                ) from None
            if c < file_d:
                if not (0.0 <= v < 1.0):
                    raise InvalidInputError(
                        f"line {lineno}, column {c + 1}: coordinate {v} outside [0, 1)"
                    )
                coords[r, c] = v
            else:
                weights[r] = v

    ps = PointSet(coords)
    if not has_weight:
        if ps.n == 0:
            # no 1/n weights exist for n = 0; the empty rule is vacuously nonneg
            return ps, WeightSet(np.empty(0), WeightKind.NONNEG)
        return ps, equal_weights(ps.n)
    kind = classify_weights(weights)
    return ps, WeightSet(weights, kind)


def points_csv(ps: PointSet, ws: WeightSet) -> str:
    """Render the CSV point format; QMC rules omit the weight column."""
    if ws.n != ps.n:
        raise InvalidInputError("point set and weight set sizes differ")
    with_weight = ws.kind is not WeightKind.QMC
    head = [f"x{j + 1}" for j in range(ps.d)]
    if with_weight:
        head.append("weight")
    lines = [",".join(head)]
    for k in range(ps.n):
        fields = [repr(float(v)) for v in ps.coords[k]]
        if with_weight:
            fields.append(repr(float(ws.values[k])))
        lines.append(",".join(fields))
    return "\n".join(lines) + "\n"


def save_points(path: str | Path, ps: PointSet, ws: WeightSet) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(points_csv(ps, ws))


def _is_float(s: str) -> bool:
    try:
        float(s)
    except ValueError:
        return False
    return True
