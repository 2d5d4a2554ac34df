"""Overlap census: ordered pairs of copies of a motif in K_n, binned by shared edges.

Two routes compute the same table:

* ``method="orbit"`` (default) fixes one copy H0 and classifies every
  injective placement of the motif by which of its vertices land on H0 and
  where.  All copies of H in K_n are equivalent under vertex relabeling, so
  C_k = c_n * D_k where D_k counts copies sharing k edges with H0.  The cost
  depends only on v, not on n.
* ``method="pairs"`` enumerates the c_n copies as edge sets and intersects
  every ordered pair.  It is the brute-force oracle and refuses to run past
  ``PAIR_GUARD`` pairs.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError, FeasibilityExceeded, VerificationFailed
from .motif import Motif, automorphism_order, copies_in_complete, falling_factorial
from .poly import Poly, interpolate

PAIR_GUARD = 10**9
ORBIT_GUARD = 2 * 10**6


@dataclass(frozen=True)
class OverlapTable:
    motif: Motif
    n: int
    counts: tuple[int, ...]

    @property
    def copies(self) -> int:
        return copies_in_complete(self.motif, self.n)

    def sumk_ok(self) -> bool:
        """Check sum C_k = c_n^2 and sum k C_k = l^2 c_n^2 / N_n exactly."""
        c = self.copies
        ell = self.motif.ell
        if sum(self.counts) != c * c:
            return False
        weighted = sum(k * ck for k, ck in enumerate(self.counts))
        big_n = self.n * (self.n - 1) // 2
        if big_n == 0:
            return weighted == 0 and c == 0
        return Fraction(weighted) == Fraction(ell * ell * c * c, big_n)


@dataclass(frozen=True)
class OverlapPolynomial:
    motif: Motif
    k: int
    poly: Poly

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return self.poly.coeffs

    @property
    def degree(self) -> int:
        return self.poly.degree

    def __call__(self, n: int) -> Fraction:
        return self.poly(n)


def _orbit_work(v: int) -> int:
    return sum(math.comb(v, s) * falling_factorial(v, s) for s in range(v + 1))


@lru_cache(maxsize=256)
def _orbit_weights(m: Motif) -> tuple[tuple[int, int, int], ...]:
    """Triples (inside, shared, multiplicity) over partial placements onto H0.

    A placement maps each motif vertex either onto a distinct vertex of the
    fixed copy H0 (the motif itself on host vertices 0..v-1) or outside it.
    ``inside`` is the number mapped onto H0; ``shared`` the edges that land on
    edges of H0.  Placements of the outside vertices are counted later by a
    falling factorial in n - v.
    """
    v = m.vertex_count
    if _orbit_work(v) > ORBIT_GUARD:
        raise FeasibilityExceeded(f"orbit enumeration for v={v} exceeds {ORBIT_GUARD}")
    es = m.edge_set
    # earlier neighbours only, so each edge is scored once
    back = [[b for b in m.neighbors[a] if b < a] for a in range(v)]
    tally: Counter = Counter()
    image = [-1] * v

    def walk(a: int, used: int, inside: int, shared: int) -> None:
        if a == v:
            tally[(inside, shared)] += 1
            return
        image[a] = -1
        walk(a + 1, used, inside, shared)
        for x in range(v):
            if used >> x & 1:
                continue
            gain = 0
            for b in back[a]:
                y = image[b]
                if y >= 0 and ((x, y) if x < y else (y, x)) in es:
                    gain += 1
            image[a] = x
            walk(a + 1, used | (1 << x), inside + 1, shared + gain)
            image[a] = -1

    walk(0, 0, 0, 0)
    return tuple(sorted((s, k, w) for (s, k), w in tally.items()))


def _orbit_table(m: Motif, n: int) -> tuple[int, ...]:
    ell, v = m.ell, m.vertex_count
    counts = [0] * (ell + 1)
    c = copies_in_complete(m, n)
    if c == 0:
        return tuple(counts)
    aut = automorphism_order(m)
    for inside, shared, mult in _orbit_weights(m):
        counts[shared] += mult * falling_factorial(n - v, v - inside)
    out = []
    for raw in counts:
        q, r = divmod(raw, aut)
        if r:
            raise VerificationFailed("placement count not divisible by |Aut(H)|")
        out.append(c * q)
    return tuple(out)


def enumerate_copies(m: Motif, n: int) -> list[frozenset]:
    """Every copy of ``m`` in K_n as a frozenset of host edges."""
    seen: set[frozenset] = set()
    for verts in itertools.permutations(range(n), m.vertex_count):
        seen.add(frozenset((min(verts[i], verts[j]), max(verts[i], verts[j])) for i, j in m.edges))
    return sorted(seen, key=sorted)


def _pairs_table(m: Motif, n: int) -> tuple[int, ...]:
    c = copies_in_complete(m, n)
    if c * c > PAIR_GUARD:
        raise FeasibilityExceeded(f"{c * c} ordered pairs exceeds guard {PAIR_GUARD}")
    copies = enumerate_copies(m, n)
    assert len(copies) == c
    counts = [0] * (m.ell + 1)
    for a in copies:
        for b in copies:
            counts[len(a & b)] += 1
    return tuple(counts)


def overlap_table(m: Motif, n: int, method: str = "orbit") -> OverlapTable:
    if n < 0:
        raise DomainError("n must be nonnegative")
    if method == "orbit":
        counts = _orbit_table(m, n)
    elif method == "pairs":
        counts = _pairs_table(m, n)
    else:
        raise DomainError(f"unknown census method {method!r}")
    return OverlapTable(m, n, counts)


@lru_cache(maxsize=256)
def _overlap_polys(m: Motif) -> tuple[Poly, ...]:
    v = m.vertex_count
    nodes = list(range(v, v + 2 * v + 1))
    extra = [nodes[-1] + 1, nodes[-1] + 2]
    tables = {n: overlap_table(m, n).counts for n in nodes + extra}
    polys = []
    for k in range(m.ell + 1):
        p = interpolate(nodes, [tables[n][k] for n in nodes])
        for n in extra:
            if p(n) != tables[n][k]:
                raise VerificationFailed(f"C_{k} is not a polynomial of degree <= {2 * v} at n={n}")
        polys.append(p)
    return tuple(polys)


def overlap_polynomial(m: Motif, k: int) -> OverlapPolynomial:
    """C_k as an exact polynomial in n, fitted through 2v+1 consecutive nodes."""
    if not 0 <= k <= m.ell:
        raise DomainError(f"k must lie in [0, {m.ell}]")
    return OverlapPolynomial(m, k, _overlap_polys(m)[k])


def overlap_counts(m: Motif, n: int) -> tuple[int, ...]:
    """C_0..C_l at any n, via the fitted polynomials (valid for all n >= 0)."""
    polys = _overlap_polys(m)
    out = []
    for p in polys:
        val = p(n)
        assert val.denominator == 1
        out.append(int(val))
    return tuple(out)
