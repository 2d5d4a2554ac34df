"""Estimators over Monte Carlo replicas.

Integer statistics (edge and motif counts) are accumulated exactly as Python
ints: sums, sums of squares and the cross sum with the edge count.  Moments
are formed in rational arithmetic and converted to float once, so results do
not depend on merge order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .ensemble import EnsembleSpec, edge_budget
from .errors import DomainError
from .moments import as_probability
from .motif import Motif, automorphism_order
from .simulate import ReplicaBlock, run_replicas

BOOTSTRAP_RESAMPLES = 1000
BOOTSTRAP_LEVEL = 0.99
SIGMA_BAND = 4.0


@dataclass(frozen=True)
class Summary:
    count: int
    mean: Fraction | float
    variance: Fraction | float | None
    stderr: float | None


def _is_integral(values) -> bool:
    if isinstance(values, np.ndarray):
        return np.issubdtype(values.dtype, np.integer)
    return all(isinstance(x, (int, np.integer, Fraction)) and not isinstance(x, bool) for x in values)


def summarize(values) -> Summary:
    """Mean, unbiased variance and standard error of the mean.

    Integer or Fraction input is handled exactly (mean and variance come back
    as Fractions); floats go through ``math.fsum``.
    """
    R = len(values)
    if R == 0:
        raise DomainError("no values to summarize")
    if _is_integral(values):
        if isinstance(values, np.ndarray):
            values = values.tolist()
        vals = [x if isinstance(x, Fraction) else Fraction(int(x)) for x in values]
        s1 = sum(vals, Fraction(0))
        mean = s1 / R
        if R < 2:
            return Summary(R, mean, None, None)
        var = (sum((x * x for x in vals), Fraction(0)) - s1 * s1 / R) / (R - 1)
        return Summary(R, mean, var, math.sqrt(var / R))
    vals = [float(x) for x in values]
    mean = math.fsum(vals) / R
    if R < 2:
        return Summary(R, mean, None, None)
    var = math.fsum((x - mean) ** 2 for x in vals) / (R - 1)
    return Summary(R, mean, var, math.sqrt(var / R))


def sample_variance(values) -> float:
    s = summarize(values)
    if s.variance is None:
        raise DomainError("variance needs at least two values")
    return float(s.variance)


def _int_sum(a: np.ndarray) -> int:
    return int(np.sum(a, dtype=np.int64)) if a.size and int(np.abs(a).max()) * a.size < 2**62 else sum(int(x) for x in a.tolist())


def _int_dot(a: np.ndarray, b: np.ndarray) -> int:
    if a.size == 0:
        return 0
    bound = int(np.abs(a).max()) * int(np.abs(b).max()) * a.size
    if bound < 2**62:
        return int(np.dot(a.astype(np.int64), b.astype(np.int64)))
    return sum(x * y for x, y in zip(a.tolist(), b.tolist()))


@dataclass
class MomentAccumulator:
    """Exact (count, sums, squares, cross sum) tuple for one motif and T_E.

    ``merge`` is associative and commutative.
    """

    count: int = 0
    sum_h: int = 0
    sum_h2: int = 0
    sum_e: int = 0
    sum_e2: int = 0
    sum_he: int = 0

    @classmethod
    def from_arrays(cls, h, e) -> "MomentAccumulator":
        h = np.asarray(h, dtype=np.int64)
        e = np.asarray(e, dtype=np.int64)
        return cls(len(h), _int_sum(h), _int_dot(h, h), _int_sum(e), _int_dot(e, e), _int_dot(h, e))

    def merge(self, other: "MomentAccumulator") -> "MomentAccumulator":
        return MomentAccumulator(
            self.count + other.count,
            self.sum_h + other.sum_h,
            self.sum_h2 + other.sum_h2,
            self.sum_e + other.sum_e,
            self.sum_e2 + other.sum_e2,
            self.sum_he + other.sum_he,
        )

    def _co(self, sxy: int, sx: int, sy: int) -> Fraction:
        if self.count < 2:
            raise DomainError("need at least two replicas")
        return (Fraction(sxy) - Fraction(sx * sy, self.count)) / (self.count - 1)

    def mean(self) -> Fraction:
        return Fraction(self.sum_h, self.count)

    def mean_edges(self) -> Fraction:
        return Fraction(self.sum_e, self.count)

    def var(self) -> Fraction:
        return self._co(self.sum_h2, self.sum_h, self.sum_h)

    def var_edges(self) -> Fraction:
        return self._co(self.sum_e2, self.sum_e, self.sum_e)

    def cov(self) -> Fraction:
        return self._co(self.sum_he, self.sum_h, self.sum_e)

    def stderr(self) -> float:
        return math.sqrt(self.var() / self.count)

    def residual_variance(self) -> tuple[Fraction, bool]:
        """(Var(T_H) - Cov^2/Var(T_E), degenerate); degenerate when Var(T_E) = 0."""
        ve = self.var_edges()
        if ve == 0:
            return self.var(), True
        c = self.cov()
        return self.var() - c * c / ve, False


@dataclass(frozen=True)
class ReplicaRecord:
    replica_index: int
    counts: dict = field(hash=False)
    edges: int = 0

    def __post_init__(self):
        if self.edges < 0 or any(v < 0 for v in self.counts.values()):
            raise DomainError("replica counts must be nonnegative")


def records_from_block(block: ReplicaBlock) -> list[ReplicaRecord]:
    keys = list(block.counts)
    return [
        ReplicaRecord(block.start + r, {k: int(block.counts[k][r]) for k in keys}, int(block.edges[r]))
        for r in range(len(block))
    ]


@dataclass(frozen=True)
class ResidualEstimate:
    value: float
    degenerate: bool


def empirical_residual_variance(records: Sequence[ReplicaRecord], key: str | None = None) -> ResidualEstimate:
    """Sample Var(T_H) - Cov(T_H, T_E)^2 / Var(T_E).

    With constant T_E (a fixed-edge ensemble) this is just the sample variance
    of T_H, flagged ``degenerate``.
    """
    if len(records) < 3:
        raise DomainError("need at least three records")
    if key is None:
        key = next(iter(records[0].counts))
    h = [r.counts[key] for r in records]
    e = [r.edges for r in records]
    if _is_integral(h):
        h = [int(x) for x in h]
        e = [int(x) for x in e]
        acc = MomentAccumulator(
            len(h), sum(h), sum(x * x for x in h), sum(e), sum(x * x for x in e), sum(x * y for x, y in zip(h, e))
        )
        value, degenerate = acc.residual_variance()
        return ResidualEstimate(float(value), degenerate)
    hs, es = summarize(h), summarize(e)
    if es.variance == 0:
        return ResidualEstimate(float(hs.variance), True)
    cov = math.fsum((x - hs.mean) * (y - es.mean) for x, y in zip(h, e)) / (len(h) - 1)
    return ResidualEstimate(float(hs.variance) - cov * cov / float(es.variance), False)


def bootstrap_variance_interval(
    values,
    resamples: int = BOOTSTRAP_RESAMPLES,
    level: float = BOOTSTRAP_LEVEL,
    seed: int = 0,
) -> tuple[float, float]:
    """Percentile bootstrap interval for the unbiased sample variance."""
    x = np.asarray(values, dtype=np.float64)
    R = len(x)
    if R < 2:
        raise DomainError("bootstrap needs at least two values")
    x = x - x.mean()
    rng = np.random.Generator(np.random.Philox(key=np.array([seed, 2**64 - 1], dtype=np.uint64)))
    stats = np.empty(resamples)
    for b in range(resamples):
        s = x[rng.integers(0, R, size=R)]
        stats[b] = s.var(ddof=1)
    tail = (1 - level) / 2
    lo, hi = np.quantile(stats, [tail, 1 - tail])
    return float(lo), float(hi)


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    E: int | None
    replicas: int
    mean: float
    variance: float
    scaled_mean: float
    scaled_mean_stderr: float
    surface_statistic: float
    surface_stderr: float
    scaled_std: float


def convergence_row(m: Motif, n: int, p, acc: MomentAccumulator, E: int | None = None) -> ConvergenceRow:
    p = as_probability(p)
    v = m.vertex_count
    volume = p**m.ell / automorphism_order(m)
    mean = acc.mean()
    var = acc.var() if acc.count >= 2 else Fraction(0)
    sd = math.sqrt(var)
    stderr = sd / math.sqrt(acc.count)
    scaled = mean / n**v
    return ConvergenceRow(
        n=n,
        E=E,
        replicas=acc.count,
        mean=float(mean),
        variance=float(var),
        scaled_mean=float(scaled),
        scaled_mean_stderr=stderr / n**v,
        surface_statistic=float(n * (scaled - volume)),
        surface_stderr=stderr / n ** (v - 1),
        scaled_std=sd / n ** (v - 1.5),
    )


def ensemble_for(family: str, n: int, p) -> EnsembleSpec:
    if family == "dependent":
        return EnsembleSpec("dependent", n=n, E=edge_budget(n, p))
    if family == "independent":
        return EnsembleSpec("independent", n=n, p=as_probability(p))
    raise DomainError(f"convergence tables need 'dependent' or 'independent', got {family!r}")


def convergence_table(
    m: Motif,
    family: str,
    p,
    n_grid: Iterable[int],
    replicas: int,
    seed: int,
    threads: int | None = 1,
) -> list[ConvergenceRow]:
    """Scaled-mean and surface statistics over an n-grid; the dependent family uses E = edge_budget(n, p)."""
    grid = list(n_grid)
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("n-grid must be strictly increasing")
    if replicas < 100:
        raise DomainError("convergence tables need at least 100 replicas")
    rows = []
    for n in grid:
        spec = ensemble_for(family, n, p)
        block = run_replicas(spec, [m], replicas, seed, threads)
        acc = MomentAccumulator.from_arrays(block.counts[m.label()], block.edges)
        rows.append(convergence_row(m, n, p, acc, spec.E))
    return rows


@dataclass(frozen=True)
class ExponentFit:
    exponent: float
    half_width: float


def growth_exponent_fit(pairs: Iterable[tuple[float, float]]) -> ExponentFit:
    """Least-squares slope of log(statistic) on log(n), with its standard error."""
    pts = [(float(n), float(y)) for n, y in pairs]
    if len(pts) < 4:
        raise DomainError("need at least four grid points")
    if any(y <= 0 for _, y in pts) or any(n <= 0 for n, _ in pts):
        raise DomainError("statistic and n must be positive")
    x = np.log([n for n, _ in pts])
    y = np.log([y for _, y in pts])
    X = np.column_stack([np.ones_like(x), x])
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ coef
    dof = len(pts) - 2
    s2 = float(resid @ resid) / dof
    sxx = float(((x - x.mean()) ** 2).sum())
    return ExponentFit(float(coef[1]), math.sqrt(s2 / sxx))


def z_score(sample_mean: float, exact_mean, stderr: float) -> float:
    diff = float(sample_mean) - float(exact_mean)
    if stderr == 0:
        return 0.0 if diff == 0 else math.copysign(math.inf, diff)
    return diff / stderr
