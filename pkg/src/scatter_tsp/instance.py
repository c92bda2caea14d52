"""Point-set instances: metric evaluation, tours, scatter, and file I/O.

An instance is n points (n >= 3) with one of three metrics:

    lp        coordinates in R^dim under the l_p norm, 1 <= p <= inf
    hamming   0/1 coordinate vectors, distance = number of differing positions
    explicit  a symmetric nonnegative matrix with zero diagonal

A tour is a permutation of 0..n-1 read cyclically; its scatter is the
minimum distance between consecutive points, closing edge included.
"""

import json
import math

import numpy as np

REL_TOL = 1e-9          # threshold comparisons absorb this much relative roundoff
DEDUP_REL_TOL = 1e-12   # distances closer than this (relatively) are one candidate

_METRIC_KINDS = ("lp", "hamming", "explicit")


class ContractViolation(RuntimeError):
    """An internal invariant failed; aborting beats returning a wrong answer."""


def threshold_tolerance(ell: float) -> float:
    return REL_TOL * max(1.0, abs(ell))


def meets_threshold(d, ell: float):
    """True where d >= ell up to the global tolerance; d may be an array."""
    return d >= ell - threshold_tolerance(ell)


class Instance:
    """Immutable point set plus metric. Build via Instance.lp / .hamming / .explicit."""

    def __init__(self, metric_kind: str, points=None, matrix=None, p=None,
                 strict_metric: bool = False):
        if metric_kind not in _METRIC_KINDS:
            raise ValueError(f"unknown metric kind {metric_kind!r}")
        self.metric_kind = metric_kind
        self.p = None
        self.points = None
        self.matrix = None

        if metric_kind == "explicit":
            if matrix is None:
                raise ValueError("explicit metric requires a matrix")
            m = np.asarray(matrix, dtype=float)
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise ValueError(f"matrix must be square, got shape {m.shape}")
            if not np.array_equal(m, m.T):
                raise ValueError("matrix is not symmetric")
            if np.any(np.diag(m) != 0.0):
                raise ValueError("matrix diagonal must be zero")
            if np.any(m < 0.0):
                raise ValueError("matrix entries must be nonnegative")
            self.n = m.shape[0]
            self.dim = 0
            if self.n < 3:
                raise ValueError(f"need at least 3 points, got {self.n}")
            if strict_metric:
                _check_triangle(m)
            m.setflags(write=False)
            self.matrix = m
            return

        if points is None:
            raise ValueError(f"{metric_kind} metric requires points")
        if metric_kind == "hamming":
            pts = np.asarray(points)
            if pts.ndim != 2:
                raise ValueError("points must be a list of equal-length vectors")
            if not np.isin(pts, (0, 1)).all():
                raise ValueError("hamming coordinates must be 0 or 1")
            pts = pts.astype(np.uint8)
        else:
            if p is None:
                p = 2.0
            p = float(p)
            if not (p >= 1.0):  # rejects NaN too
                raise ValueError(f"lp metric requires p >= 1, got {p}")
            self.p = p
            pts = np.asarray(points, dtype=float)
            if pts.ndim != 2:
                raise ValueError("points must be a list of equal-length vectors")
            if not np.isfinite(pts).all():
                raise ValueError("coordinates must be finite")
        self.n, self.dim = pts.shape
        if self.n < 3:
            raise ValueError(f"need at least 3 points, got {self.n}")
        pts.setflags(write=False)
        self.points = pts

    @classmethod
    def lp(cls, points, p=2.0) -> "Instance":
        return cls("lp", points=points, p=p)

    @classmethod
    def hamming(cls, points) -> "Instance":
        return cls("hamming", points=points)

    @classmethod
    def explicit(cls, matrix, strict_metric: bool = False) -> "Instance":
        return cls("explicit", matrix=matrix, strict_metric=strict_metric)

    def distance_rows(self, ids) -> np.ndarray:
        """Distances from each point in `ids` to every point, as a len(ids) x n block.

        This is the workhorse all bulk distance computations go through; callers
        keep blocks small enough that the temporary arrays stay cheap.
        """
        ids = np.asarray(ids, dtype=np.intp)
        if self.metric_kind == "explicit":
            return self.matrix[ids]
        if self.metric_kind == "hamming":
            a = self.points[ids].astype(np.float64)
            b = self.points.astype(np.float64)
            # 0/1 vectors: d_H(a, b) = |a| + |b| - 2 a.b, exact in float64
            ra = a.sum(axis=1)[:, None]
            rb = b.sum(axis=1)[None, :]
            d = ra + rb - 2.0 * (a @ b.T)
            np.maximum(d, 0.0, out=d)
            return d
        a = self.points[ids]
        b = self.points
        p = self.p
        if p == 2.0:
            acc = np.zeros((len(ids), self.n))
            for c in range(self.dim):
                diff = a[:, c][:, None] - b[:, c][None, :]
                acc += diff * diff
            return np.sqrt(acc)
        if p == 1.0 or math.isinf(p):
            acc = np.zeros((len(ids), self.n))
            for c in range(self.dim):
                diff = np.abs(a[:, c][:, None] - b[:, c][None, :])
                if math.isinf(p):
                    np.maximum(acc, diff, out=acc)
                else:
                    acc += diff
            return acc
        acc = np.zeros((len(ids), self.n))
        for c in range(self.dim):
            acc += np.abs(a[:, c][:, None] - b[:, c][None, :]) ** p
        return acc ** (1.0 / p)

    def full_matrix(self) -> np.ndarray:
        """All pairwise distances; intended for small n only."""
        return self.distance_rows(np.arange(self.n))

    def has_duplicate_points(self) -> bool:
        if self.metric_kind == "explicit":
            off = self.matrix + np.eye(self.n)
            return bool(np.any(off == 0.0))
        return len(np.unique(self.points, axis=0)) < self.n

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        if self.metric_kind != other.metric_kind or self.p != other.p:
            return False
        if self.metric_kind == "explicit":
            return np.array_equal(self.matrix, other.matrix)
        return self.points.dtype == other.points.dtype and np.array_equal(
            self.points, other.points)

    def __repr__(self):
        met = self.metric_kind if self.p is None else f"l{self.p:g}"
        return f"Instance({met}, n={self.n}, dim={self.dim})"


def _check_triangle(m: np.ndarray) -> None:
    n = m.shape[0]
    tol = REL_TOL * np.maximum(1.0, m)
    for k in range(n):
        if np.any(m > m[:, [k]] + m[[k], :] + tol):
            i, j = np.argwhere(m > m[:, [k]] + m[[k], :] + tol)[0]
            raise ValueError(
                f"triangle inequality fails: d({i},{j}) > d({i},{k}) + d({k},{j})")


def distance(instance: Instance, i: int, j: int) -> float:
    """Metric distance between points i and j."""
    n = instance.n
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"point index out of range: ({i}, {j}), n={n}")
    return float(instance.distance_rows([i])[0, j])


def validate_tour(n: int, tour) -> np.ndarray:
    order = np.asarray(tour, dtype=np.intp)
    if order.shape != (n,) or not np.array_equal(np.sort(order), np.arange(n)):
        raise ValueError("tour must be a permutation of 0..n-1")
    return order


def tour_edge_lengths(instance: Instance, tour) -> np.ndarray:
    """Lengths of the n cyclic edges of a tour, in tour order."""
    order = validate_tour(instance.n, tour)
    nxt = np.roll(order, -1)
    if instance.metric_kind == "explicit":
        return instance.matrix[order, nxt]
    if instance.metric_kind == "hamming":
        a = instance.points[order].astype(np.float64)
        b = instance.points[nxt].astype(np.float64)
        return np.abs(a - b).sum(axis=1)
    diff = np.abs(instance.points[order] - instance.points[nxt])
    p = instance.p
    if p == 2.0:
        return np.sqrt((diff * diff).sum(axis=1))
    if math.isinf(p):
        return diff.max(axis=1)
    if p == 1.0:
        return diff.sum(axis=1)
    return (diff ** p).sum(axis=1) ** (1.0 / p)


def scatter(instance: Instance, tour) -> float:
    """Minimum cyclic adjacent distance of the tour."""
    return float(tour_edge_lengths(instance, tour).min())


_CANDIDATE_BLOCK = 256


def candidate_distances(instance: Instance) -> np.ndarray:
    """Sorted distinct positive pairwise distances, plus 0 when duplicates exist.

    Values within relative tolerance DEDUP_REL_TOL are merged, keeping the
    smallest representative. The optimum scatter is always one of these.
    """
    n = instance.n
    uniq = []
    for lo in range(0, n, _CANDIDATE_BLOCK):
        ids = np.arange(lo, min(lo + _CANDIDATE_BLOCK, n))
        uniq.append(np.unique(instance.distance_rows(ids)))
    vals = np.unique(np.concatenate(uniq))
    vals = vals[vals > 0.0]
    if instance.has_duplicate_points():
        vals = np.concatenate(([0.0], vals))
    kept = []
    for v in vals:
        if not kept or v - kept[-1] > DEDUP_REL_TOL * max(1.0, v):
            kept.append(float(v))
    return np.array(kept)


def generate(kind: str, n: int, dim: int, seed: int, p: float = 2.0,
             **params) -> Instance:
    """Deterministic instance generators for tests and benchmarks.

    kinds:
      uniform    points uniform in [0, box]^dim                 (box=1.0)
      clustered  one tight cluster of > n/2 points plus far outliers
                 (cluster_frac=0.66, spread=0.01, far=10.0)
      line       collinear points spaced `spacing` apart on the first axis
      grid       the first n points of a `spacing`-spaced lattice
    """
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    if dim < 1:
        raise ValueError(f"need dim >= 1, got {dim}")
    rng = np.random.default_rng(seed)
    if kind == "uniform":
        box = float(params.pop("box", 1.0))
        _reject_params(kind, params)
        pts = rng.uniform(0.0, box, size=(n, dim))
    elif kind == "clustered":
        frac = float(params.pop("cluster_frac", 0.66))
        spread = float(params.pop("spread", 0.01))
        far = float(params.pop("far", 10.0))
        _reject_params(kind, params)
        m = max(int(round(frac * n)), n // 2 + 1)
        if m >= n:
            m = n - 1
        cluster = rng.uniform(-spread, spread, size=(m, dim))
        raw = rng.normal(size=(n - m, dim))
        raw /= np.linalg.norm(raw, axis=1, keepdims=True)
        radii = far * rng.uniform(1.0, 2.0, size=(n - m, 1))
        pts = np.vstack([cluster, raw * radii])
    elif kind == "line":
        spacing = float(params.pop("spacing", 1.0))
        _reject_params(kind, params)
        pts = np.zeros((n, dim))
        pts[:, 0] = spacing * np.arange(n)
    elif kind == "grid":
        spacing = float(params.pop("spacing", 1.0))
        _reject_params(kind, params)
        side = int(math.ceil(n ** (1.0 / dim)))
        idx = np.arange(n)
        cols = []
        for _ in range(dim):
            cols.append(idx % side)
            idx = idx // side
        pts = spacing * np.stack(cols, axis=1).astype(float)
    else:
        raise ValueError(f"unknown generator kind {kind!r}")
    return Instance.lp(pts, p=p)


def _reject_params(kind, params):
    if params:
        raise ValueError(f"unknown parameters for kind {kind!r}: {sorted(params)}")


def write_instance(instance: Instance, path) -> None:
    doc = {"version": 1}
    if instance.metric_kind == "lp":
        doc["metric"] = {"type": "lp",
                         "p": "inf" if math.isinf(instance.p) else instance.p}
        doc["points"] = [list(map(float, row)) for row in instance.points]
    elif instance.metric_kind == "hamming":
        doc["metric"] = {"type": "hamming"}
        doc["points"] = [list(map(int, row)) for row in instance.points]
    else:
        doc["metric"] = {"type": "explicit"}
        doc["matrix"] = [list(map(float, row)) for row in instance.matrix]
    with open(path, "w") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def read_instance(path, strict_metric: bool = False) -> Instance:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as e:
        raise ValueError(f"{path}: line {e.lineno} col {e.colno}: {e.msg}") from e
    if not isinstance(doc, dict):
        raise ValueError(f"{path}: expected a JSON object at top level")
    version = doc.get("version")
    if version != 1:
        raise ValueError(f"{path}: field 'version': expected 1, got {version!r}")
    metric = doc.get("metric")
    if not isinstance(metric, dict) or "type" not in metric:
        raise ValueError(f"{path}: field 'metric': expected an object with 'type'")
    kind = metric["type"]
    try:
        if kind == "explicit":
            if "matrix" not in doc:
                raise ValueError("field 'matrix' is required for explicit metric")
            return Instance.explicit(doc["matrix"], strict_metric=strict_metric)
        if "points" not in doc:
            raise ValueError("field 'points' is required")
        if kind == "hamming":
            return Instance.hamming(doc["points"])
        if kind == "lp":
            p = metric.get("p", 2.0)
            if p == "inf":
                p = math.inf
            return Instance.lp(doc["points"], p=p)
    except ValueError as e:
        raise ValueError(f"{path}: {e}") from e
    raise ValueError(f"{path}: field 'metric.type': unknown kind {kind!r}")
