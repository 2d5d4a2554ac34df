"""Small fixed graphs (motifs), their automorphisms, and copies in K_n."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable

from .errors import DomainError

MAX_VERTICES = 8

Edge = tuple[int, int]


def _norm_edge(i: int, j: int) -> Edge:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class Motif:
    """A fixed graph H on vertices ``0..vertex_count-1`` without isolated vertices."""

    vertex_count: int
    edges: tuple[Edge, ...]
    name: str | None = field(default=None, compare=False)

    def __init__(self, vertex_count: int, edges: Iterable[Edge], name: str | None = None):
        normed = []
        for i, j in edges:
            i, j = int(i), int(j)
            if i == j:
                raise DomainError(f"self-loop at vertex {i}")
            normed.append(_norm_edge(i, j))
        if len(set(normed)) != len(normed):
            raise DomainError("duplicate edge in motif")
        if not normed:
            raise DomainError("motif needs at least one edge")
        if not 1 <= vertex_count <= MAX_VERTICES:
            raise DomainError(f"vertex_count must be in [1, {MAX_VERTICES}], got {vertex_count}")
        covered = {x for e in normed for x in e}
        if covered != set(range(vertex_count)):
            raise DomainError("vertices must be exactly 0..v-1, each on at least one edge")
        object.__setattr__(self, "vertex_count", vertex_count)
        object.__setattr__(self, "edges", tuple(sorted(normed)))
        object.__setattr__(self, "name", name)

    @property
    def v(self) -> int:
        return self.vertex_count

    @property
    def ell(self) -> int:
        """Number of edges."""
        return len(self.edges)

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    @cached_property
    def neighbors(self) -> tuple[frozenset[int], ...]:
        nbrs: list[set[int]] = [set() for _ in range(self.vertex_count)]
        for i, j in self.edges:
            nbrs[i].add(j)
            nbrs[j].add(i)
        return tuple(frozenset(s) for s in nbrs)

    @cached_property
    def automorphisms(self) -> tuple[tuple[int, ...], ...]:
        """All vertex permutations mapping the edge set onto itself."""
        es = self.edge_set
        degs = [len(s) for s in self.neighbors]
        out = []
        for perm in itertools.permutations(range(self.vertex_count)):
            if any(degs[perm[x]] != degs[x] for x in range(self.vertex_count)):
                continue
            if all(_norm_edge(perm[i], perm[j]) in es for i, j in self.edges):
                out.append(perm)
        return tuple(out)

    def relabel(self, perm: Iterable[int]) -> "Motif":
        perm = list(perm)
        return Motif(self.vertex_count, [(perm[i], perm[j]) for i, j in self.edges], self.name)

    def has_triangle(self) -> bool:
        nb = self.neighbors
        return any(nb[i] & nb[j] for i, j in self.edges)

    def label(self) -> str:
        if self.name:
            return self.name
        return "v%d:" % self.vertex_count + ",".join(f"{i}-{j}" for i, j in self.edges)

    def to_edgelist(self) -> str:
        lines = [str(self.vertex_count)] + [f"{i} {j}" for i, j in self.edges]
        return "\n".join(lines) + "\n"


BUILTINS = {
    "edge": (2, [(0, 1)]),
    "two_star": (3, [(0, 1), (0, 2)]),
    "triangle": (3, [(0, 1), (0, 2), (1, 2)]),
    "square": (4, [(0, 1), (1, 2), (2, 3), (0, 3)]),
}


def make_builtin(name: str) -> Motif:
    try:
        v, edges = BUILTINS[name]
    except KeyError:
        raise DomainError(f"unknown builtin motif {name!r}; choose from {sorted(BUILTINS)}") from None
    return Motif(v, edges, name=name)


def automorphism_order(m: Motif) -> int:
    return len(m.automorphisms)


def falling_factorial(x: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= x - i
    return out


def copies_in_complete(m: Motif, n: int) -> int:
    """c_n: the number of copies of ``m`` in the complete graph K_n."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    if n < m.vertex_count:
        return 0
    ff = falling_factorial(n, m.vertex_count)
    q, r = divmod(ff, automorphism_order(m))
    assert r == 0
    return q


def parse_edgelist(text: str, name: str | None = None) -> Motif:
    """Parse the text format: first line ``v``, then one ``i j`` pair per line."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise DomainError("empty motif file")
    try:
        v = int(lines[0])
        edges = []
        for ln in lines[1:]:
            a, b = ln.split()
            edges.append((int(a), int(b)))
    except ValueError as exc:
        raise DomainError(f"malformed edge list: {exc}") from None
    for i, j in edges:
        if not 0 <= i < j < v:
            raise DomainError(f"edge line '{i} {j}' must satisfy 0 <= i < j < {v}")
    return Motif(v, edges, name=name)


def load_motif(spec: str) -> Motif:
    """Resolve a builtin name or a path to an edge-list file."""
    if spec in BUILTINS:
        return make_builtin(spec)
    path = Path(spec)
    if not path.is_file():
        raise DomainError(f"{spec!r} is neither a builtin motif nor a readable file")
    return parse_edgelist(path.read_text(), name=path.stem)


def random_motif(rng, max_vertices: int = 5) -> Motif:
    """Draw a random motif with 2..max_vertices vertices and no isolated vertex."""
    while True:
        v = int(rng.integers(2, max_vertices + 1))
        pairs = list(itertools.combinations(range(v), 2))
        mask = rng.random(len(pairs)) < 0.5
        edges = [e for e, keep in zip(pairs, mask) if keep]
        if edges and {x for e in edges for x in e} == set(range(v)):
            return Motif(v, edges)


__all__ = [
    "Motif",
    "BUILTINS",
    "make_builtin",
    "automorphism_order",
    "copies_in_complete",
    "falling_factorial",
    "parse_edgelist",
    "load_motif",
    "random_motif",
]
