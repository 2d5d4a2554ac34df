import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from graphsurface.counting import (
    batch_counts,
    colorings,
    count_colored_motif,
    count_motif,
    count_triangles,
    count_two_stars,
)
from graphsurface.ensemble import EnsembleSpec, GraphSample, sample, sample_masks, SeedStream
from graphsurface.errors import DomainError
from graphsurface.moments import pair_count
from graphsurface.motif import Motif, copies_in_complete, make_builtin, random_motif

from conftest import brute_count

PATH3 = Motif(4, [(0, 1), (1, 2), (2, 3)], name="path3")
KITE = Motif(4, [(0, 1), (0, 2), (1, 2), (2, 3)], name="kite")


def random_graph(rng, n):
    pairs = list(itertools.combinations(range(n), 2))
    keep = rng.random(len(pairs)) < rng.uniform(0.2, 0.8)
    return GraphSample.from_edges(n, [e for e, k in zip(pairs, keep) if k])


def test_generic_counter_matches_brute_force():
    rng = np.random.default_rng(0)
    motifs = [make_builtin(x) for x in ("edge", "two_star", "triangle", "square")] + [PATH3, KITE]
    for _ in range(200):
        n = int(rng.integers(0, 8))
        g = random_graph(rng, n)
        for m in motifs:
            assert count_motif(g, m) == brute_count(n, g.edges, m)


def test_random_motifs_match_brute_force():
    rng = np.random.default_rng(1)
    for _ in range(30):
        m = random_motif(rng, 5)
        g = random_graph(rng, 7)
        assert count_motif(g, m) == brute_count(7, g.edges, m)


@pytest.mark.parametrize("n", [0, 3, 6, 9])
def test_complete_graph_counts(builtin, n):
    assert count_motif(GraphSample.complete(n), builtin) == copies_in_complete(builtin, n)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 25))
def test_specialised_counters(seed, n):
    g = random_graph(np.random.default_rng(seed), n)
    assert count_triangles(g) == count_motif(g, make_builtin("triangle"))
    assert count_two_stars(g) == count_motif(g, make_builtin("two_star"))


def test_batch_counts_match_single_counts():
    spec = EnsembleSpec("independent", n=12, p=0.4)
    masks = sample_masks(spec, 3, 0, 50)
    motifs = [make_builtin(x) for x in ("edge", "two_star", "triangle", "square")] + [KITE]
    out = batch_counts(masks, 12, motifs)
    for r, row in enumerate(masks):
        g = GraphSample.from_indices(12, np.flatnonzero(row))
        assert out["edges"][r] == len(g.edges)
        for m in motifs:
            assert out[m.label()][r] == count_motif(g, m)


def test_relabelled_builtin_uses_same_count():
    sq = make_builtin("square")
    other = Motif(4, sq.relabel([2, 0, 3, 1]).edges, name="sq2")
    masks = sample_masks(EnsembleSpec("dependent", n=10, E=20), 0, 0, 20)
    out = batch_counts(masks, 10, [sq, other])
    assert np.array_equal(out[sq.label()], out["sq2"])


def colored_brute(g, m, alpha):
    found = set()
    for image in itertools.permutations(range(g.n), m.v):
        if any(g.colors[image[a]] != alpha[a] for a in range(m.v)):
            continue
        mapped = frozenset(tuple(sorted((image[a], image[b]))) for a, b in m.edges)
        if mapped <= set(g.edges):
            found.add(mapped)
    return len(found)


@pytest.mark.parametrize("name", ["two_star", "triangle", "square"])
def test_colored_counts_match_brute_force_and_add_up(name):
    m = make_builtin(name)
    spec = EnsembleSpec("block_independent", sizes=(3, 4), matrix=((0.6, 0.5), (0.5, 0.7)))
    alphas = colorings(m, 2)
    for r in range(15):
        g = sample(spec, SeedStream(5, r))
        per = [count_colored_motif(g, m, a) for a in alphas]
        assert per == [colored_brute(g, m, a) for a in alphas]
        assert sum(per) == count_motif(g, m)


def test_colorings_are_orbit_representatives():
    # triangle with 2 colours: multisets of size 3 -> 4 orbits
    assert len(colorings(make_builtin("triangle"), 2)) == 4
    # square with 2 colours: 6 necklaces under the dihedral group
    assert len(colorings(make_builtin("square"), 2)) == 6


def test_colored_count_needs_colours():
    with pytest.raises(DomainError):
        count_colored_motif(GraphSample.complete(4), make_builtin("triangle"), (0, 0, 0))
