import numpy as np
import pytest

from graphsurface.errors import DomainError
from graphsurface.motif import (
    Motif,
    automorphism_order,
    copies_in_complete,
    falling_factorial,
    load_motif,
    make_builtin,
    parse_edgelist,
    random_motif,
)


@pytest.mark.parametrize(
    "name, v, ell, aut",
    [("edge", 2, 1, 2), ("two_star", 3, 2, 2), ("triangle", 3, 3, 6), ("square", 4, 4, 8)],
)
def test_builtin_shapes(name, v, ell, aut):
    m = make_builtin(name)
    assert (m.v, m.ell, automorphism_order(m)) == (v, ell, aut)


def test_copies_in_complete_small_cases():
    assert copies_in_complete(make_builtin("triangle"), 4) == 4
    assert copies_in_complete(make_builtin("square"), 4) == 3
    assert copies_in_complete(make_builtin("two_star"), 4) == 12
    assert copies_in_complete(make_builtin("triangle"), 2) == 0


def test_falling_factorial():
    assert falling_factorial(6, 3) == 120
    assert falling_factorial(2, 3) == 0
    assert falling_factorial(5, 0) == 1


@pytest.mark.parametrize(
    "edges, v",
    [
        ([(0, 0)], 2),
        ([(0, 1), (1, 0)], 2),
        ([], 2),
        ([(0, 1)], 3),  # isolated vertex
        ([(0, 9)], 2),
    ],
)
def test_invalid_motifs_rejected(edges, v):
    with pytest.raises(DomainError):
        Motif(v, edges)


def test_too_many_vertices():
    with pytest.raises(DomainError):
        Motif(9, [(i, i + 1) for i in range(8)])


def test_edgelist_round_trip(tmp_path):
    m = Motif(4, [(0, 1), (1, 2), (2, 3), (0, 2)])
    again = parse_edgelist(m.to_edgelist())
    assert again.edge_set == m.edge_set
    path = tmp_path / "kite.txt"
    path.write_text(m.to_edgelist())
    assert load_motif(str(path)).edge_set == m.edge_set
    with pytest.raises(DomainError):
        load_motif(str(tmp_path / "missing.txt"))


def test_edgelist_rejects_bad_order():
    with pytest.raises(DomainError):
        parse_edgelist("3\n2 1\n0 1\n")


def test_automorphisms_are_automorphisms():
    rng = np.random.default_rng(1)
    for _ in range(20):
        m = random_motif(rng)
        for perm in m.automorphisms:
            assert m.relabel(perm).edge_set == m.edge_set
