import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats as sps

from graphsurface.ensemble import (
    EnsembleSpec,
    GraphSample,
    SeedStream,
    decode_edges,
    dump_sample,
    edge_budget,
    edge_index,
    parse_sample,
    sample,
    sample_masks,
)
from graphsurface.errors import DomainError
from graphsurface.moments import pair_count

SPECS = [
    EnsembleSpec("dependent", n=9, E=11),
    EnsembleSpec("dependent", n=9, E=30),
    EnsembleSpec("independent", n=9, p=Fraction(3, 10)),
    EnsembleSpec("block_dependent", sizes=(4, 5), matrix=((3, 7), (7, 4))),
    EnsembleSpec("block_independent", sizes=(3, 3), matrix=((Fraction(1, 2), Fraction(1, 5)), (Fraction(1, 5), 1))),
]


@given(st.integers(0, 10**6))
def test_edge_index_bijection(idx):
    i, j = decode_edges(np.array([idx]))
    assert i[0] < j[0]
    assert edge_index(int(i[0]), int(j[0])) == idx


def test_edge_index_enumerates_pairs_in_order():
    n = 30
    seen = sorted(edge_index(i, j) for j in range(n) for i in range(j))
    assert seen == list(range(pair_count(n)))


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.kind)
def test_batched_path_matches_single_samples(spec):
    masks = sample_masks(spec, 42, 10, 40)
    for r, row in enumerate(masks):
        g = sample(spec, SeedStream(42, 10 + r))
        assert np.array_equal(np.flatnonzero(row), g.edge_indices())


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.kind)
def test_same_seed_same_graph(spec):
    a = sample(spec, SeedStream(3, 5))
    b = sample(spec, SeedStream(3, 5))
    assert a == b
    other = [sample(spec, SeedStream(4, 5)), sample(spec, SeedStream(3, 6))]
    assert any(o.edges != a.edges for o in other)


def test_dependent_edge_count_is_exact():
    spec = EnsembleSpec("dependent", n=12, E=40)
    assert set(sample_masks(spec, 0, 0, 200).sum(axis=1)) == {40}


@pytest.mark.parametrize("E", [2, 3, 4])
def test_dependent_uniform_over_graphs(E):
    """Chi-square over all C(6, E) graphs on four vertices."""
    spec = EnsembleSpec("dependent", n=4, E=E)
    R = 20_000
    masks = sample_masks(spec, 11, 0, R)
    keys = Counter(int(np.packbits(row, bitorder="little")[0]) for row in masks)
    cells = math.comb(6, E)
    assert len(keys) == cells
    res = sps.chisquare(list(keys.values()))
    assert res.pvalue > 1e-4


def test_independent_edge_marginals():
    p = Fraction(3, 10)
    spec = EnsembleSpec("independent", n=10, p=p)
    R = 20_000
    masks = sample_masks(spec, 1, 0, R)
    counts = masks.sum(axis=1)
    N = pair_count(10)
    se = math.sqrt(N * 0.3 * 0.7 / R)
    assert abs(counts.mean() - N * 0.3) < 4 * se
    assert abs(counts.var(ddof=1) / (N * 0.21) - 1) < 0.05
    per_edge = masks.mean(axis=0)
    assert np.all(np.abs(per_edge - 0.3) < 4 * math.sqrt(0.21 / R))


def test_independent_extreme_probabilities():
    assert sample_masks(EnsembleSpec("independent", n=6, p=0), 0, 0, 5).sum() == 0
    assert np.all(sample_masks(EnsembleSpec("independent", n=6, p=1), 0, 0, 5))


def test_replicas_uncorrelated_across_indices():
    spec = EnsembleSpec("independent", n=10, p=Fraction(1, 2))
    R = 10_000
    e = sample_masks(spec, 9, 0, R).sum(axis=1).astype(float)
    r = np.corrcoef(e[:-1], e[1:])[0, 1]
    assert abs(r) < 4 / math.sqrt(R)


def test_block_dependent_pair_counts_exact():
    spec = EnsembleSpec("block_dependent", sizes=(5, 6), matrix=((4, 13), (13, 9)))
    colors = spec.colors
    for r in range(50):
        g = sample(spec, SeedStream(0, r))
        assert g.colors == colors
        tally = Counter(tuple(sorted((colors[i], colors[j]))) for i, j in g.edges)
        assert tally == {(0, 0): 4, (0, 1): 13, (1, 1): 9}


def test_block_independent_respects_zero_and_one():
    spec = EnsembleSpec("block_independent", sizes=(4, 4), matrix=((1, 0), (0, Fraction(1, 2))))
    g = sample(spec, SeedStream(2, 0))
    inside0 = [(i, j) for i, j in g.edges if j < 4]
    cross = [(i, j) for i, j in g.edges if i < 4 <= j]
    assert len(inside0) == 6 and not cross


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(kind="dependent", n=4, E=7),
        dict(kind="independent", n=4, p=Fraction(3, 2)),
        dict(kind="block_dependent", sizes=(2, 2), matrix=((1, 5), (5, 1))),
        dict(kind="block_dependent", sizes=(2, 2), matrix=((1, 2), (3, 1))),
        dict(kind="nonsense", n=3),
    ],
)
def test_invalid_specs(kwargs):
    with pytest.raises(DomainError):
        EnsembleSpec(**kwargs)


def test_edge_budget_rounds_half_up():
    assert edge_budget(4, Fraction(1, 4)) == 2  # 6/4 = 1.5
    assert edge_budget(64, Fraction(3, 10)) == 605


@settings(max_examples=50)
@given(st.integers(0, 12), st.data())
def test_dump_parse_round_trip(n, data):
    N = pair_count(n)
    idx = data.draw(st.lists(st.integers(0, max(N - 1, 0)), unique=True, max_size=N)) if N else []
    colors = data.draw(st.none() | st.lists(st.integers(0, 35), min_size=n, max_size=n))
    g = GraphSample.from_indices(n, idx, colors)
    assert parse_sample(dump_sample(g)) == g


def test_parse_rejects_mismatched_count():
    with pytest.raises(DomainError):
        parse_sample("4 2 0-1")
