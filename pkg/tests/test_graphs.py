import numpy as np
import pytest

from conftest import count_edges_between

from matdisc import (
    FormatError,
    Graph,
    NotBinaryError,
    SymmetricMatrix,
    complete_graph,
    cycle_graph,
    e_xy,
    from_adjacency,
    gnp_random_graph,
    read_graph,
    star_graph,
    vol,
    write_graph,
)


def test_edges_canonicalized():
    g = Graph(4, ((3, 1), (2, 4), (1, 2)))
    assert g.edges == ((1, 2), (1, 3), (2, 4))
    assert g.m == 3


def test_bad_edges_rejected():
    with pytest.raises(ValueError):
        Graph(3, ((1, 1),))
    with pytest.raises(ValueError):
        Graph(3, ((1, 4),))
    with pytest.raises(ValueError):
        Graph(3, ((1, 2), (2, 1)))
    with pytest.raises(ValueError):
        Graph(0, ())


def test_complete_graph():
    g = complete_graph(6)
    assert g.m == 15
    assert g.is_regular()
    assert np.all(g.degrees == 5)
    assert g.density() == 1.0


def test_cycle_and_star():
    c = cycle_graph(5)
    assert c.m == 5
    assert np.all(c.degrees == 2)
    s = star_graph(5)
    assert s.n == 6
    assert s.degrees[0] == 5
    assert np.all(s.degrees[1:] == 1)
    assert not s.is_regular()


def test_adjacency_round_trip():
    g = Graph(5, ((1, 2), (2, 3), (4, 5)))
    back = from_adjacency(g.adjacency)
    assert back.edges == g.edges


def test_from_adjacency_rejects():
    with pytest.raises(NotBinaryError):
        from_adjacency(SymmetricMatrix(np.full((2, 2), 0.5)))
    with pytest.raises(ValueError):
        from_adjacency(SymmetricMatrix(np.eye(3)))


def test_e_xy_matches_pair_count():
    rng = np.random.default_rng(7)
    for _ in range(20):
        n = int(rng.integers(2, 9))
        g = gnp_random_graph(n, 0.5, rng)
        kx = int(rng.integers(1, n + 1))
        ky = int(rng.integers(1, n + 1))
        X = [int(v) for v in rng.choice(n, size=kx, replace=False) + 1]
        Y = [int(v) for v in rng.choice(n, size=ky, replace=False) + 1]
        assert e_xy(g, X, Y) == count_edges_between(g.adjacency.a, X, Y)


def test_e_xy_counts_internal_edges_twice():
    g = complete_graph(4)
    # every ordered pair of distinct vertices is an edge slot
    assert e_xy(g, [1, 2, 3, 4], [1, 2, 3, 4]) == 12
    assert e_xy(g, [1, 2], [1, 2]) == 2


def test_vol():
    s = star_graph(4)
    assert vol(s, [1]) == 4
    assert vol(s, [2, 3]) == 2
    assert vol(s, range(1, 6)) == 2 * s.m
    with pytest.raises(ValueError):
        vol(s, [9])


def test_write_read_round_trip(tmp_path):
    g = gnp_random_graph(12, 0.4, np.random.default_rng(3))
    path = tmp_path / "g.txt"
    write_graph(g, path)
    back = read_graph(path)
    assert back.n == g.n and back.edges == g.edges


def test_read_graph_rejects(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("sym 3\n0 1 0\n1 0 0\n0 0 0\n")
    with pytest.raises(FormatError):
        read_graph(p)
    p.write_text("graph 3 2\n1 2\n")
    with pytest.raises(FormatError):
        read_graph(p)
    p.write_text("graph 3 1\n1 1\n")
    with pytest.raises(FormatError):
        read_graph(p)


def test_gnp_deterministic_and_density():
    a = gnp_random_graph(40, 0.3, np.random.default_rng(123))
    b = gnp_random_graph(40, 0.3, np.random.default_rng(123))
    assert a.edges == b.edges
    assert 0.15 < a.density() < 0.45
    empty = gnp_random_graph(10, 0.0, np.random.default_rng(1))
    assert empty.m == 0
    full = gnp_random_graph(10, 1.0, np.random.default_rng(1))
    assert full.m == 45
