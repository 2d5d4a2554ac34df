"""Counting copies of a motif in a host graph.

A copy is an edge subset of the host isomorphic to the motif (non-induced).
The generic counter enumerates injective homomorphisms by backtracking over
Python-int bitsets and divides by |Aut(H)|.  Batched counters work on
edge-indicator matrices from :func:`graphsurface.ensemble.sample_masks`.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .ensemble import GraphSample, decode_edges
from .errors import DomainError
from .motif import BUILTINS, Motif, automorphism_order, make_builtin
from .moments import pair_count


def adjacency_bits(g: GraphSample) -> list[int]:
    adj = [0] * g.n
    for i, j in g.edges:
        adj[i] |= 1 << j
        adj[j] |= 1 << i
    return adj


@lru_cache(maxsize=256)
def _match_order(m: Motif) -> tuple[tuple[int, tuple[int, ...]], ...]:
    """Motif vertices in matching order, each with its already-placed neighbours.

    Highest degree first, then greedily the vertex with most placed neighbours,
    so candidate sets are intersections as early as possible.
    """
    nb = m.neighbors
    order: list[int] = []
    remaining = set(range(m.vertex_count))
    while remaining:
        best = max(remaining, key=lambda a: (len(nb[a] & set(order)), len(nb[a]), -a))
        order.append(best)
        remaining.remove(best)
    pos = {a: i for i, a in enumerate(order)}
    return tuple((a, tuple(b for b in nb[a] if pos[b] < pos[a])) for a in order)


def count_homomorphisms(adj: list[int], m: Motif, allowed: list[int] | None = None) -> int:
    """Injective homomorphisms of ``m`` into the host given by bitset ``adj``.

    ``allowed[a]``, when given, is a bitset of host vertices motif vertex ``a``
    may map to.
    """
    n = len(adj)
    if n < m.vertex_count:
        return 0
    everyone = (1 << n) - 1
    # host vertices in descending degree order for the unconstrained first pick
    by_degree = sorted(range(n), key=lambda x: (-adj[x].bit_count(), x))
    plan = _match_order(m)
    image = [0] * m.vertex_count
    v = m.vertex_count

    def extend(step: int, used: int) -> int:
        if step == v:
            return 1
        a, placed = plan[step]
        if placed:
            cand = adj[image[placed[0]]]
            for b in placed[1:]:
                cand &= adj[image[b]]
        else:
            cand = everyone
        cand &= ~used
        if allowed is not None:
            cand &= allowed[a]
        total = 0
        if not placed:
            for x in by_degree:
                if cand >> x & 1:
                    image[a] = x
                    total += extend(step + 1, used | (1 << x))
            return total
        while cand:
            low = cand & -cand
            x = low.bit_length() - 1
            image[a] = x
            total += extend(step + 1, used | low)
            cand ^= low
        return total

    return extend(0, 0)


def count_motif(g: GraphSample, m: Motif) -> int:
    homs = count_homomorphisms(adjacency_bits(g), m)
    q, r = divmod(homs, automorphism_order(m))
    if r:
        raise AssertionError("homomorphism count not divisible by |Aut(H)|")
    return q


def count_edges(g: GraphSample) -> int:
    return len(g.edges)


def count_two_stars(g: GraphSample) -> int:
    deg = [0] * g.n
    for i, j in g.edges:
        deg[i] += 1
        deg[j] += 1
    return sum(d * (d - 1) // 2 for d in deg)


def count_triangles(g: GraphSample) -> int:
    """Sum over edges (i, j) of common neighbours above j."""
    adj = adjacency_bits(g)
    total = 0
    for i, j in g.edges:
        total += ((adj[i] & adj[j]) >> (j + 1)).bit_count()
    return total


def colorings(m: Motif, num_colors: int) -> list[tuple[int, ...]]:
    """One representative per Aut(H)-orbit of vertex colourings of ``m``."""
    seen = set()
    reps = []
    for alpha in itertools.product(range(num_colors), repeat=m.vertex_count):
        if alpha in seen:
            continue
        orbit = {tuple(alpha[perm[a]] for a in range(m.vertex_count)) for perm in m.automorphisms}
        seen |= orbit
        reps.append(min(orbit))
    return sorted(reps)


def color_stabilizer_order(m: Motif, alpha) -> int:
    return sum(1 for perm in m.automorphisms if all(alpha[perm[a]] == alpha[a] for a in range(m.vertex_count)))


def count_colored_motif(g: GraphSample, m: Motif, coloring) -> int:
    """Copies of ``m`` whose vertex colours match ``coloring`` up to automorphism."""
    if g.colors is None:
        raise DomainError("graph carries no vertex colours")
    alpha = tuple(int(c) for c in coloring)
    if len(alpha) != m.vertex_count:
        raise DomainError("coloring must give one colour per motif vertex")
    by_color: dict[int, int] = {}
    for x, c in enumerate(g.colors):
        by_color[c] = by_color.get(c, 0) | (1 << x)
    allowed = [by_color.get(c, 0) for c in alpha]
    homs = count_homomorphisms(adjacency_bits(g), m, allowed)
    q, r = divmod(homs, color_stabilizer_order(m, alpha))
    if r:
        raise AssertionError("coloured homomorphism count not divisible by stabiliser order")
    return q


# ---------------------------------------------------------------------------
# batched counting over edge-indicator rows


def _adjacency_batch(masks: np.ndarray, n: int) -> np.ndarray:
    iu, ju = decode_edges(np.arange(pair_count(n)))
    A = np.zeros((masks.shape[0], n, n), dtype=np.float32)
    A[:, iu, ju] = masks
    A[:, ju, iu] = masks
    return A


def batch_counts(masks: np.ndarray, n: int, motifs: list[Motif]) -> dict[str, np.ndarray]:
    """Edge count and motif counts for every row of ``masks``; int64 arrays keyed by label.

    Triangles, two-stars, squares and single edges use matrix identities;
    anything else falls back to :func:`count_motif` row by row.
    """
    out = {"edges": masks.sum(axis=1, dtype=np.int64)}
    if not motifs:
        return out
    A = _adjacency_batch(masks, n)
    A2 = None
    deg = A.sum(axis=2, dtype=np.float64)
    for m in motifs:
        key = m.label()
        kind = _builtin_kind(m)
        if kind == "edge":
            out[key] = out["edges"].copy()
        elif kind == "two_star":
            out[key] = np.rint((deg * (deg - 1) / 2).sum(axis=1)).astype(np.int64)
        elif kind in ("triangle", "square"):
            if A2 is None:
                A2 = A @ A
            if kind == "triangle":
                closed = (A * A2).sum(axis=(1, 2), dtype=np.float64)
                out[key] = np.rint(closed / 6).astype(np.int64)
            else:
                co = A2.astype(np.float64)
                idx = np.arange(n)
                co[:, idx, idx] = 0
                # each 4-cycle is counted once per diagonal pair, twice per ordered pair
                out[key] = np.rint((co * (co - 1) / 2).sum(axis=(1, 2)) / 4).astype(np.int64)
        else:
            rows = []
            for row in masks:
                g = GraphSample.from_indices(n, np.flatnonzero(row))
                rows.append(count_motif(g, m))
            out[key] = np.array(rows, dtype=np.int64)
    return out


@lru_cache(maxsize=None)
def _builtin_shapes() -> dict:
    return {name: make_builtin(name) for name in BUILTINS}


def _builtin_kind(m: Motif) -> str | None:
    """Name of the builtin isomorphic to ``m``, if any."""
    for name, ref in _builtin_shapes().items():
        if ref.vertex_count == m.vertex_count and ref.ell == m.ell:
            if _isomorphic(ref, m):
                return name
    return None


def _isomorphic(a: Motif, b: Motif) -> bool:
    return any(a.relabel(perm).edge_set == b.edge_set for perm in itertools.permutations(range(a.vertex_count)))
