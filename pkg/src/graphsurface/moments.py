"""Exact and asymptotic moments of motif counts in the two edge ensembles.

Everything here is exact rational arithmetic. The dependent ensemble is the
uniform distribution on graphs with exactly E edges; the independent one has
every edge present with probability p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .census import overlap_counts, overlap_polynomial
from .errors import DomainError
from .motif import Motif, automorphism_order, copies_in_complete
from .poly import Poly

DEPENDENT = "dependent"
INDEPENDENT = "independent"


def pair_count(n: int) -> int:
    """N_n = n(n-1)/2."""
    n = int(n)
    return n * (n - 1) // 2


def as_probability(p) -> Fraction:
    if isinstance(p, float):
        p = Fraction(p).limit_denominator(10**12)
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise DomainError(f"probability {p} outside [0, 1]")
    return p


@dataclass(frozen=True)
class EdgeBudget:
    n: int
    E: int | None = None
    p: Fraction | None = None

    def __post_init__(self):
        object.__setattr__(self, "n", int(self.n))
        if self.E is not None:
            object.__setattr__(self, "E", int(self.E))
        if (self.E is None) == (self.p is None):
            raise DomainError("give exactly one of E or p")
        if self.E is not None and not 0 <= self.E <= self.N:
            raise DomainError(f"E={self.E} outside [0, {self.N}]")
        if self.p is not None:
            object.__setattr__(self, "p", as_probability(self.p))

    @property
    def N(self) -> int:
        return pair_count(self.n)

    @property
    def p_n(self) -> Fraction:
        if self.E is not None:
            return Fraction(self.E, self.N) if self.N else Fraction(0)
        return self.p


@dataclass(frozen=True)
class MomentReport:
    motif: Motif
    ensemble: str
    n: int
    mean: Fraction
    variance: Fraction
    E: int | None = None
    p: Fraction | None = None
    covariance_with_edges: Fraction | None = None
    residual_variance: Fraction | None = None


def falling_prob(E: int, N: int, k: int) -> Fraction:
    """Probability that k given edges all appear among E uniformly chosen of N."""
    E, N, k = int(E), int(N), int(k)
    if k < 0 or not 0 <= E <= N:
        raise DomainError(f"need 0 <= E <= N and k >= 0, got E={E}, N={N}, k={k}")
    if k > N:
        raise DomainError(f"k={k} exceeds N={N}")
    if k > E:
        return Fraction(0)
    num = den = 1
    for i in range(k):
        num *= E - i
        den *= N - i
    return Fraction(num, den)


def mean_dependent(m: Motif, n: int, E: int) -> Fraction:
    budget = EdgeBudget(n, E=E)
    c = copies_in_complete(m, n)
    if c == 0:
        return Fraction(0)
    return c * falling_prob(E, budget.N, m.ell)


def second_moment_dependent(m: Motif, n: int, E: int) -> Fraction:
    N = EdgeBudget(n, E=E).N
    ell = m.ell
    total = Fraction(0)
    for k, ck in enumerate(overlap_counts(m, n)):
        # C_k > 0 implies the union of the two copies (2l - k edges) fits in K_n
        if ck:
            total += ck * falling_prob(E, N, 2 * ell - k)
    return total


def variance_dependent_exact(m: Motif, n: int, E: int) -> Fraction:
    mu = mean_dependent(m, n, E)
    return second_moment_dependent(m, n, E) - mu * mu


def variance_dependent_asymptotic(m: Motif, p) -> Poly:
    """C_2(n) p^(2l-2)(1-p)^2 + C_3(n) p^(2l-3)(1-3p^2+2p^3), as a polynomial in n.

    Equals the dependent-model variance up to O(n^(2v-4)).
    """
    p = as_probability(p)
    ell = m.ell
    out = Poly()
    if ell >= 2:
        out = out + overlap_polynomial(m, 2).poly * (p ** (2 * ell - 2) * (1 - p) ** 2)
    if ell >= 3:
        out = out + overlap_polynomial(m, 3).poly * (p ** (2 * ell - 3) * (1 - 3 * p**2 + 2 * p**3))
    return out


def mean_indep(m: Motif, n: int, p) -> Fraction:
    p = as_probability(p)
    return copies_in_complete(m, n) * p**m.ell


def variance_indep_exact(m: Motif, n: int, p) -> Fraction:
    p = as_probability(p)
    ell = m.ell
    full = p ** (2 * ell)
    counts = overlap_counts(m, n)
    return sum((ck * (p ** (2 * ell - k) - full) for k, ck in enumerate(counts) if k), Fraction(0))


def covariance_with_edges_indep(m: Motif, n: int, p) -> Fraction:
    p = as_probability(p)
    return copies_in_complete(m, n) * m.ell * p**m.ell * (1 - p)


def residual_variance_indep(m: Motif, n: int, p) -> Fraction:
    """Var(T_H) - Cov(T_H, T_E)^2 / Var(T_E) in the independent ensemble."""
    p = as_probability(p)
    if p in (0, 1):
        raise DomainError("residual variance needs 0 < p < 1")
    N = pair_count(n)
    if N == 0:
        raise DomainError("residual variance needs n >= 2")
    cov = covariance_with_edges_indep(m, n, p)
    return variance_indep_exact(m, n, p) - cov * cov / (N * p * (1 - p))


def residual_variance_indep_sum(m: Motif, n: int, p) -> Fraction:
    """The same quantity written as a single sum over the overlap census."""
    p = as_probability(p)
    ell = m.ell
    full = p ** (2 * ell)
    lin = p ** (2 * ell - 1) - full
    counts = overlap_counts(m, n)
    return sum((ck * (p ** (2 * ell - k) - full - k * lin) for k, ck in enumerate(counts)), Fraction(0))


def exact_report(m: Motif, n: int, *, E: int | None = None, p=None) -> MomentReport:
    if E is not None:
        return MomentReport(m, DEPENDENT, n, mean_dependent(m, n, E), variance_dependent_exact(m, n, E), E=E)
    p = as_probability(p)
    resvar = None
    if 0 < p < 1 and n >= 2:
        resvar = residual_variance_indep(m, n, p)
    return MomentReport(
        m,
        INDEPENDENT,
        n,
        mean_indep(m, n, p),
        variance_indep_exact(m, n, p),
        p=p,
        covariance_with_edges=covariance_with_edges_indep(m, n, p),
        residual_variance=resvar,
    )


@dataclass(frozen=True)
class Sqrt2Scaled:
    """An exact number ``rational * 2**(half_powers / 2)``."""

    rational: Fraction
    half_powers: int = 0

    def __float__(self) -> float:
        return float(self.rational) * math.sqrt(2) ** self.half_powers

    def __str__(self) -> str:
        if self.half_powers == 0 or self.rational == 0:
            return str(self.rational)
        return f"{self.rational}*2^({Fraction(self.half_powers, 2)})"


@dataclass(frozen=True)
class AsymptoticExpansion:
    motif: Motif
    ensemble: str
    p: Fraction
    size_parameter: str
    volume_coefficient: Sqrt2Scaled
    volume_exponent: Fraction
    surface_coefficient: Sqrt2Scaled
    surface_exponent: Fraction
    variance_growth_exponent: Fraction
    std_exponent: Fraction
    surface_significant: bool


def asymptotic_report(m: Motif, p, ensemble: str = DEPENDENT, size_parameter: str = "n") -> AsymptoticExpansion:
    """Leading and subleading terms of <T_H>, against the growth of its standard deviation.

    In n: <T_H> = p^l/|S_H| [n^v - v(v-1)/2 n^(v-1)] + O(n^(v-2)) in both
    ensembles.  Substituting n = sqrt(2N) + 1/2 + O(N^(-1/2)) gives, in N,
    p^l/|S_H| [2^(v/2) N^(v/2) - 2^(v/2 - 3/2) v(v-2) N^(v/2 - 1/2)].
    """
    p = as_probability(p)
    if ensemble not in (DEPENDENT, INDEPENDENT):
        raise DomainError(f"unknown ensemble {ensemble!r}")
    v, aut = m.vertex_count, automorphism_order(m)
    base = p**m.ell / aut
    var_exp = Fraction(2 * v - 3 if ensemble == DEPENDENT else 2 * v - 2)
    if size_parameter == "n":
        volume = Sqrt2Scaled(base)
        surface = Sqrt2Scaled(-base * v * (v - 1) / 2)
        vol_exp, surf_exp = Fraction(v), Fraction(v - 1)
    elif size_parameter == "N":
        # 2^(v/2) and 2^(v/2 - 3/2) as powers of sqrt(2)
        volume = Sqrt2Scaled(base, v)
        surface = Sqrt2Scaled(-base * v * (v - 2), v - 3)
        vol_exp, surf_exp = Fraction(v, 2), Fraction(v - 1, 2)
        var_exp = var_exp / 2
    else:
        raise DomainError(f"size_parameter must be 'n' or 'N', got {size_parameter!r}")
    std_exp = var_exp / 2
    return AsymptoticExpansion(
        motif=m,
        ensemble=ensemble,
        p=p,
        size_parameter=size_parameter,
        volume_coefficient=volume,
        volume_exponent=vol_exp,
        surface_coefficient=surface,
        surface_exponent=surf_exp,
        variance_growth_exponent=var_exp,
        std_exponent=std_exp,
        surface_significant=std_exp < surf_exp,
    )
