import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from graphsurface.census import overlap_counts, overlap_polynomial, overlap_table
from graphsurface.errors import FeasibilityExceeded
from graphsurface.moments import pair_count
from graphsurface.motif import copies_in_complete, make_builtin, random_motif


def naive_overlaps(m, n):
    """Independent oracle: list every copy in K_n, then histogram pairwise intersections."""
    copies = set()
    for image in itertools.permutations(range(n), m.v):
        copies.add(frozenset(tuple(sorted((image[a], image[b]))) for a, b in m.edges))
    counts = [0] * (m.ell + 1)
    for a in copies:
        for b in copies:
            counts[len(a & b)] += 1
    return counts


@pytest.mark.parametrize("n", range(0, 7))
def test_orbit_method_matches_naive_oracle(builtin, n):
    assert list(overlap_table(builtin, n).counts) == naive_overlaps(builtin, n)


def test_random_motifs_match_naive_oracle():
    rng = np.random.default_rng(5)
    for _ in range(6):
        m = random_motif(rng, 4)
        for n in (4, 5, 6):
            assert list(overlap_table(m, n).counts) == naive_overlaps(m, n)


@pytest.mark.parametrize("n", range(0, 9))
def test_pairs_and_orbit_agree(builtin, n):
    assert overlap_table(builtin, n, "pairs").counts == overlap_table(builtin, n, "orbit").counts


def test_pairs_guard_raises():
    with pytest.raises(FeasibilityExceeded):
        overlap_table(make_builtin("square"), 60, "pairs")


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 14))
def test_sum_identities_random_motifs(seed, n):
    m = random_motif(np.random.default_rng(seed), 5)
    t = overlap_table(m, n)
    c = copies_in_complete(m, n)
    assert sum(t.counts) == c * c
    if pair_count(n):
        assert Fraction(sum(k * x for k, x in enumerate(t.counts))) == Fraction(m.ell**2 * c * c, pair_count(n))
    assert t.sumk_ok()


def test_polynomial_degrees(builtin):
    # pairs sharing k >= 1 edges span at most 2v - 2 vertices; disjoint pairs span 2v
    v = builtin.v
    assert overlap_polynomial(builtin, 0).degree == 2 * v
    assert overlap_polynomial(builtin, builtin.ell).degree == v
    for k in range(1, builtin.ell + 1):
        assert overlap_polynomial(builtin, k).degree <= 2 * v - 2


@pytest.mark.parametrize("n", [20, 64, 96])
def test_polynomials_evaluate_to_exact_counts(builtin, n):
    counts = overlap_counts(builtin, n)
    c = copies_in_complete(builtin, n)
    assert sum(counts) == c * c
    assert sum(k * x for k, x in enumerate(counts)) * pair_count(n) == builtin.ell**2 * c * c
    if n == 20:
        assert counts == overlap_table(builtin, n).counts
