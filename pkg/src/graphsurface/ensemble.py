"""Seeded samplers for the fixed-edge-count and independent-edge ensembles.

Reproducibility contract
------------------------
Replica ``r`` of a run with master seed ``s`` draws from
``numpy.random.Philox`` (Philox4x64-10) with 128-bit key ``(s, r)`` and a
zero counter.  A replica's stream therefore depends only on ``(s, r)``, never
on how replicas are batched or split across workers.

Host edges are indexed by the bijection ``{i, j}, i < j  <->  j(j-1)/2 + i``.

Fixed-count sampling is a partial Fisher-Yates shuffle of ``range(N)``: with
``K = min(E, N - E)`` the replica draws ``r_t ~ U[t, N)`` for ``t < K`` in one
vectorised call, swaps position ``t`` with ``r_t``, and keeps the first ``K``
slots (or their complement when ``E > N/2``).  The single-sample path keeps
the shuffle in a sparse dict; the batched path keeps a dense array per
replica.  Both consume the same draws and return the same edge set.

Independent edges with ``p = a/q`` are drawn as ``U{0..q-1} < a`` per edge so
the inclusion probability is exactly ``p``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DomainError
from .moments import as_probability, pair_count

U64 = 2**64
_EXACT_DENOMINATOR_LIMIT = 2**62


@dataclass(frozen=True)
class SeedStream:
    master_seed: int
    replica_index: int

    def __post_init__(self):
        if not 0 <= self.master_seed < U64:
            raise DomainError("master_seed must be a 64-bit unsigned integer")
        if not 0 <= self.replica_index < U64:
            raise DomainError("replica_index must be a 64-bit unsigned integer")

    def generator(self) -> np.random.Generator:
        key = np.array([self.master_seed, self.replica_index], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))


def edge_index(i: int, j: int) -> int:
    if i > j:
        i, j = j, i
    return j * (j - 1) // 2 + i


def decode_edges(idx) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised inverse of :func:`edge_index`; returns (i, j) arrays with i < j."""
    idx = np.asarray(idx, dtype=np.int64)
    j = ((1 + np.sqrt(1 + 8 * idx.astype(np.float64))) / 2).astype(np.int64)
    # float rounding can land one off either way
    j = np.where(j * (j - 1) // 2 > idx, j - 1, j)
    j = np.where((j + 1) * j // 2 <= idx, j + 1, j)
    return idx - j * (j - 1) // 2, j


@dataclass(frozen=True)
class GraphSample:
    """A simple graph on vertices 0..n-1, optionally vertex-coloured."""

    n: int
    edges: tuple[tuple[int, int], ...]
    colors: tuple[int, ...] | None = None

    def __post_init__(self):
        seen = set()
        for i, j in self.edges:
            if i == j:
                raise DomainError(f"self-loop at {i}")
            if not (0 <= i < j < self.n):
                raise DomainError(f"edge ({i}, {j}) must be ordered and within 0..{self.n - 1}")
            seen.add((i, j))
        if len(seen) != len(self.edges):
            raise DomainError("duplicate edge")
        object.__setattr__(self, "edges", tuple(sorted(self.edges)))
        if self.colors is not None and len(self.colors) != self.n:
            raise DomainError("colors must give one entry per vertex")

    @classmethod
    def from_edges(cls, n: int, edges, colors=None) -> "GraphSample":
        normed = sorted({(min(a, b), max(a, b)) for a, b in edges})
        return cls(int(n), tuple((int(a), int(b)) for a, b in normed), None if colors is None else tuple(int(c) for c in colors))

    @classmethod
    def from_indices(cls, n: int, idx, colors=None) -> "GraphSample":
        idx = np.sort(np.asarray(idx, dtype=np.int64))
        ii, jj = decode_edges(idx)
        return cls(int(n), tuple(zip(ii.tolist(), jj.tolist())), None if colors is None else tuple(int(c) for c in colors))

    @classmethod
    def complete(cls, n: int) -> "GraphSample":
        return cls(n, tuple((i, j) for j in range(n) for i in range(j)))

    def edge_indices(self) -> np.ndarray:
        return np.array(sorted(edge_index(i, j) for i, j in self.edges), dtype=np.int64)


@dataclass(frozen=True)
class EnsembleSpec:
    """One of the four ensembles.

    ``kind`` is ``dependent`` (n, E), ``independent`` (n, p),
    ``block_dependent`` (sizes, E matrix) or ``block_independent``
    (sizes, p matrix).  Block colours are contiguous: the first ``sizes[0]``
    vertices have colour 0, and so on.
    """

    kind: str
    n: int | None = None
    E: int | None = None
    p: Fraction | None = None
    sizes: tuple[int, ...] | None = None
    matrix: tuple[tuple, ...] | None = None

    def __post_init__(self):
        if self.kind in ("dependent", "independent"):
            if self.n is None or self.n < 0:
                raise DomainError("n must be a nonnegative integer")
            N = pair_count(self.n)
            if self.kind == "dependent":
                if self.E is None or not 0 <= self.E <= N:
                    raise DomainError(f"E={self.E} must lie in [0, {N}]")
            else:
                object.__setattr__(self, "p", as_probability(self.p))
        elif self.kind in ("block_dependent", "block_independent"):
            if not self.sizes or any(s < 0 for s in self.sizes):
                raise DomainError("block sizes must be nonnegative")
            sizes = tuple(int(s) for s in self.sizes)
            B = len(sizes)
            if self.matrix is None or len(self.matrix) != B or any(len(row) != B for row in self.matrix):
                raise DomainError(f"matrix must be {B}x{B}")
            mat = [list(row) for row in self.matrix]
            for a in range(B):
                for b in range(B):
                    if mat[a][b] != mat[b][a]:
                        raise DomainError("block matrix must be symmetric")
            if self.kind == "block_dependent":
                for a in range(B):
                    for b in range(a, B):
                        cap = block_capacity(sizes, a, b)
                        if not 0 <= int(mat[a][b]) <= cap:
                            raise DomainError(f"E[{a}][{b}]={mat[a][b]} exceeds capacity {cap}")
                mat = [[int(x) for x in row] for row in mat]
            else:
                mat = [[as_probability(x) for x in row] for row in mat]
            object.__setattr__(self, "sizes", sizes)
            object.__setattr__(self, "matrix", tuple(tuple(row) for row in mat))
            object.__setattr__(self, "n", sum(sizes))
        else:
            raise DomainError(f"unknown ensemble kind {self.kind!r}")

    @property
    def is_block(self) -> bool:
        return self.kind.startswith("block")

    @property
    def colors(self) -> tuple[int, ...] | None:
        if not self.is_block:
            return None
        return tuple(c for c, s in enumerate(self.sizes) for _ in range(s))

    def total_edges(self) -> int | None:
        """The fixed edge count, when the ensemble has one."""
        if self.kind == "dependent":
            return self.E
        if self.kind == "block_dependent":
            B = len(self.sizes)
            return sum(self.matrix[a][b] for a in range(B) for b in range(a, B))
        return None


def block_capacity(sizes: Sequence[int], a: int, b: int) -> int:
    if a == b:
        return sizes[a] * (sizes[a] - 1) // 2
    return sizes[a] * sizes[b]


def edge_budget(n: int, p) -> int:
    """round(p * N_n) with halves rounded up."""
    p = as_probability(p)
    return math.floor(p * pair_count(n) + Fraction(1, 2))


def _shuffle_draws(rng: np.random.Generator, N: int, K: int) -> np.ndarray:
    if K == 0:
        return np.empty(0, dtype=np.int64)
    return rng.integers(np.arange(K, dtype=np.int64), N)


def choose_indices(rng: np.random.Generator, N: int, E: int) -> np.ndarray:
    """E distinct indices from range(N), uniformly, sorted; sparse partial Fisher-Yates."""
    if not 0 <= E <= N:
        raise DomainError(f"cannot choose {E} of {N}")
    K = min(E, N - E)
    draws = _shuffle_draws(rng, N, K)
    slots: dict[int, int] = {}
    picked = []
    for t, r in enumerate(draws.tolist()):
        a = slots.get(t, t)
        b = slots.get(r, r)
        slots[r] = a
        picked.append(b)
    picked = np.array(picked, dtype=np.int64)
    if K == E:
        return np.sort(picked)
    keep = np.ones(N, dtype=bool)
    keep[picked] = False
    return np.flatnonzero(keep)


def bernoulli_mask(rng: np.random.Generator, size: int, p) -> np.ndarray:
    p = as_probability(p)
    if p == 0:
        return np.zeros(size, dtype=bool)
    if p.denominator <= _EXACT_DENOMINATOR_LIMIT:
        return rng.integers(0, p.denominator, size=size, dtype=np.int64) < p.numerator
    return rng.random(size) < float(p)


def sample_dependent(n: int, E: int, s: SeedStream) -> GraphSample:
    N = pair_count(n)
    if not 0 <= E <= N:
        raise DomainError(f"E={E} must lie in [0, {N}]")
    return GraphSample.from_indices(n, choose_indices(s.generator(), N, E))


def sample_independent(n: int, p, s: SeedStream) -> GraphSample:
    mask = bernoulli_mask(s.generator(), pair_count(n), p)
    return GraphSample.from_indices(n, np.flatnonzero(mask))


def _block_pair_indices(sizes: Sequence[int], a: int, b: int) -> np.ndarray:
    """Global edge indices of all vertex pairs between blocks a and b (a <= b)."""
    offsets = np.concatenate([[0], np.cumsum(sizes)])
    va = np.arange(offsets[a], offsets[a + 1], dtype=np.int64)
    vb = np.arange(offsets[b], offsets[b + 1], dtype=np.int64)
    if a == b:
        iu, ju = np.triu_indices(len(va), k=1)
        lo, hi = va[iu], va[ju]
    else:
        lo = np.repeat(va, len(vb))
        hi = np.tile(vb, len(va))
    return np.sort(hi * (hi - 1) // 2 + lo)


def _block_mask(spec: EnsembleSpec, rng: np.random.Generator, pair_tables) -> np.ndarray:
    mask = np.zeros(pair_count(spec.n), dtype=bool)
    B = len(spec.sizes)
    for a in range(B):
        for b in range(a, B):
            cand = pair_tables[(a, b)]
            if spec.kind == "block_dependent":
                chosen = choose_indices(rng, len(cand), spec.matrix[a][b])
                mask[cand[chosen]] = True
            else:
                mask[cand[bernoulli_mask(rng, len(cand), spec.matrix[a][b])]] = True
    return mask


def block_pair_tables(spec: EnsembleSpec) -> dict:
    B = len(spec.sizes)
    return {(a, b): _block_pair_indices(spec.sizes, a, b) for a in range(B) for b in range(a, B)}


def sample_block(spec: EnsembleSpec, s: SeedStream) -> GraphSample:
    if not spec.is_block:
        raise DomainError("sample_block needs a block ensemble")
    mask = _block_mask(spec, s.generator(), block_pair_tables(spec))
    return GraphSample.from_indices(spec.n, np.flatnonzero(mask), spec.colors)


def sample(spec: EnsembleSpec, s: SeedStream) -> GraphSample:
    if spec.kind == "dependent":
        return sample_dependent(spec.n, spec.E, s)
    if spec.kind == "independent":
        return sample_independent(spec.n, spec.p, s)
    return sample_block(spec, s)


def sample_masks(spec: EnsembleSpec, master_seed: int, start: int, stop: int) -> np.ndarray:
    """Edge-indicator rows for replicas ``start..stop-1``, shape (R, N_n).

    Row r equals the edge set of ``sample(spec, SeedStream(master_seed, start + r))``.
    """
    N = pair_count(spec.n)
    R = stop - start
    masks = np.zeros((R, N), dtype=bool)
    gens = (SeedStream(master_seed, r).generator() for r in range(start, stop))
    if spec.kind == "independent":
        for row, rng in enumerate(gens):
            masks[row] = bernoulli_mask(rng, N, spec.p)
    elif spec.kind == "dependent":
        E = spec.E
        K = min(E, N - E)
        if K:
            draws = np.stack([_shuffle_draws(rng, N, K) for rng in gens])
            perm = np.tile(np.arange(N, dtype=np.int64), (R, 1))
            rows = np.arange(R)
            for t in range(K):
                col = draws[:, t]
                a = perm[:, t].copy()
                perm[:, t] = perm[rows, col]
                perm[rows, col] = a
            masks[rows[:, None], perm[:, :K]] = True
        if K != E:
            masks = ~masks
    else:
        tables = block_pair_tables(spec)
        for row, rng in enumerate(gens):
            masks[row] = _block_mask(spec, rng, tables)
    return masks


def dump_sample(g: GraphSample) -> str:
    """One line: ``[colors=<digits> ]n E i1-j1 i2-j2 ...`` (colours in base 36)."""
    body = " ".join([str(g.n), str(len(g.edges))] + [f"{i}-{j}" for i, j in g.edges])
    if g.colors is not None:
        return "colors=" + "".join(np.base_repr(c, 36).lower() for c in g.colors) + " " + body
    return body


def parse_sample(line: str) -> GraphSample:
    parts = line.split()
    colors = None
    if parts and parts[0].startswith("colors="):
        colors = [int(ch, 36) for ch in parts[0][len("colors="):]]
        parts = parts[1:]
    try:
        n, E = int(parts[0]), int(parts[1])
        edges = [tuple(int(x) for x in tok.split("-")) for tok in parts[2:]]
    except (IndexError, ValueError) as exc:
        raise DomainError(f"malformed sample line: {exc}") from None
    if len(edges) != E:
        raise DomainError(f"edge count {E} does not match {len(edges)} listed edges")
    return GraphSample.from_edges(n, edges, colors)
