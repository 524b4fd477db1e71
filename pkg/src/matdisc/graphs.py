"""Simple undirected graphs with 1-based vertex labels.

Graphs here are deliberately small-scale and dense-friendly: every graph
carries a cached adjacency matrix, and pair counts are computed with
indicator vectors. Vertices are 1..n on every public surface.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import FormatError, NotBinaryError
from .linalg import SymmetricMatrix


def _canonical_edges(n: int, edges) -> tuple:
    seen = set()
    out = []
    for e in edges:
        try:
            u, v = e
        except (TypeError, ValueError) as exc:
            raise ValueError(f"edge {e!r} is not a pair") from exc
        u, v = int(u), int(v)
        if not (1 <= u <= n and 1 <= v <= n):
            raise ValueError(f"edge ({u}, {v}) leaves vertex range 1..{n}")
        if u == v:
            raise ValueError(f"loop at vertex {u} not allowed")
        if u > v:
            u, v = v, u
        if (u, v) in seen:
            raise ValueError(f"duplicate edge ({u}, {v})")
        seen.add((u, v))
        out.append((u, v))
    out.sort()
    return tuple(out)


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple graph on vertices 1..n with a canonical sorted edge tuple."""

    n: int
    edges: tuple

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("graph needs at least one vertex")
        object.__setattr__(self, "edges", _canonical_edges(self.n, self.edges))

    @property
    def m(self) -> int:
        """Number of edges."""
        return len(self.edges)

    @cached_property
    def adjacency(self) -> SymmetricMatrix:
        a = np.zeros((self.n, self.n))
        for u, v in self.edges:
            a[u - 1, v - 1] = 1.0
            a[v - 1, u - 1] = 1.0
        return SymmetricMatrix(a)

    @cached_property
    def degrees(self) -> np.ndarray:
        """Degree of vertex i+1 at index i."""
        d = self.adjacency.a.sum(axis=1).astype(np.int64)
        d.setflags(write=False)
        return d

    def is_regular(self) -> bool:
        d = self.degrees
        return bool(np.all(d == d[0]))

    def density(self) -> float:
        """2m / (n (n-1)); zero for the one-vertex graph."""
        if self.n < 2:
            return 0.0
        return 2.0 * self.m / (self.n * (self.n - 1))


def from_adjacency(A: SymmetricMatrix) -> Graph:
    """Graph whose adjacency matrix is the given 0/1 matrix."""
    if not A.is_binary():
        raise NotBinaryError("adjacency entries must be exactly 0 or 1")
    if np.any(np.diag(A.a) != 0.0):
        raise ValueError("adjacency diagonal must be zero")
    iu, ju = np.nonzero(np.triu(A.a, k=1))
    edges = tuple((int(i) + 1, int(j) + 1) for i, j in zip(iu, ju))
    return Graph(A.n, edges)


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs at least 3 vertices")
    edges = [(i, i + 1) for i in range(1, n)] + [(1, n)]
    return Graph(n, tuple(edges))


def star_graph(leaves: int) -> Graph:
    """Center vertex 1 joined to vertices 2..leaves+1."""
    if leaves < 1:
        raise ValueError("star needs at least one leaf")
    return Graph(leaves + 1, tuple((1, i) for i in range(2, leaves + 2)))


def gnp_random_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    """Binomial random graph: each pair is an edge independently with prob p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability {p} outside [0, 1]")
    edges = []
    for i in range(1, n + 1):
        draws = rng.random(n - i)
        for off in np.nonzero(draws < p)[0]:
            edges.append((i, i + 1 + int(off)))
    return Graph(n, tuple(edges))


def _indicator(n: int, S) -> np.ndarray:
    x = np.zeros(n)
    for v in S:
        v = int(v)
        if not 1 <= v <= n:
            raise ValueError(f"vertex {v} outside 1..{n}")
        x[v - 1] = 1.0
    return x


def e_xy(G: Graph, X, Y) -> int:
    """Ordered-pair edge count: #{(x, y) in X x Y : xy is an edge}.

    Edges with both ends in X and Y contribute twice, once per
    orientation, matching the bilinear form 1_X^T A 1_Y.
    """
    ix = _indicator(G.n, X)
    iy = _indicator(G.n, Y)
    return int(round(float(ix @ G.adjacency.a @ iy)))


def vol(G: Graph, X) -> int:
    """Sum of degrees over X."""
    ix = _indicator(G.n, X)
    return int((G.degrees * ix).sum())


def write_graph(G: Graph, path) -> None:
    """Write the text format: 'graph <n> <m>' then one 'u v' line per edge."""
    with open(path, "w") as fh:
        fh.write(f"graph {G.n} {G.m}\n")
        for u, v in G.edges:
            fh.write(f"{u} {v}\n")


def read_graph(path) -> Graph:
    """Parse the 'graph' text format, rejecting loops and repeats."""
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 3 or header[0] != "graph":
            raise FormatError("graph file must start with 'graph <n> <m>'")
        try:
            n, m = int(header[1]), int(header[2])
        except ValueError as exc:
            raise FormatError(f"bad graph header {header!r}") from exc
        if n < 1 or m < 0:
            raise FormatError("graph header out of range")
        tokens = fh.read().split()
    if len(tokens) != 2 * m:
        raise FormatError(f"expected {m} edges, found {len(tokens) // 2} lines of data")
    try:
        flat = [int(t) for t in tokens]
    except ValueError as exc:
        raise FormatError(f"non-integer vertex label: {exc}") from exc
    pairs = list(zip(flat[0::2], flat[1::2]))
    try:
        return Graph(n, tuple(pairs))
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
