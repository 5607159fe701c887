"""Undirected weighted graphs and exact cosine k-NN graph construction."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

log = logging.getLogger(__name__)

# Slack between the BLAS shortlist and exact re-ranking; GEMM rounding on unit
# vectors is orders of magnitude below this.
_SHORTLIST_MARGIN = 1e-9
_BLOCK_ELEMENTS = 1 << 22


class WeightedGraph:
    """Simple undirected graph on nodes ``0..n-1`` with positive edge weights."""

    def __init__(self, n_nodes, edges=()):
        if n_nodes < 0:
            raise ValueError("negative node count")
        self._adj = [dict() for _ in range(n_nodes)]
        for u, v, w in edges:
            self.add_edge(u, v, w)

    def __len__(self):
        return len(self._adj)

    @property
    def nodes(self):
        return range(len(self._adj))

    def _check(self, u):
        if not 0 <= u < len(self._adj):
            raise KeyError(f"unknown node {u}")

    def add_edge(self, u, v, w):
        """Insert ``{u, v}``; an existing edge keeps the larger weight."""
        self._check(u)
        self._check(v)
        if u == v:
            raise ValueError(f"self-loop on node {u}")
        w = float(w)
        if not w > 0:
            raise ValueError(f"edge weight must be positive, got {w}")
        if w > self._adj[u].get(v, 0.0):
            self._adj[u][v] = w
            self._adj[v][u] = w

    def has_edge(self, u, v):
        self._check(u)
        return v in self._adj[u]

    def weight(self, u, v):
        self._check(u)
        return self._adj[u][v]

    def neighbors(self, u):
        self._check(u)
        return sorted(self._adj[u].items())

    def degree(self, u):
        self._check(u)
        return len(self._adj[u])

    def edges(self):
        """Edges as ``(u, v, w)`` with ``u < v``, sorted."""
        return [(u, v, w) for u in self.nodes for v, w in sorted(self._adj[u].items()) if u < v]

    def num_edges(self):
        return sum(len(a) for a in self._adj) // 2

    def subgraph(self, nodes):
        """Induced subgraph relabelled ``0..len(nodes)-1`` in the given order."""
        local = {u: i for i, u in enumerate(nodes)}
        sub = WeightedGraph(len(local))
        for u, i in local.items():
            for v, w in self._adj[u].items():
                j = local.get(v)
                if j is not None and i < j:
                    sub.add_edge(i, j, w)
        return sub


def neighbors(g, node):
    return g.neighbors(node)


def _row_norms(X):
    return np.array([math.sqrt(math.fsum((r * r).tolist())) for r in X])


def _exact_sims(unit, q, cand):
    # fsum is correctly rounded, so sim(q, c) == sim(c, q) and equal rows
    # score identically whatever block or thread computed them.
    prods = (unit[cand] * unit[q]).tolist()
    return [math.fsum(p) for p in prods]


def _knn_block(unit, k, start, stop):
    n = len(unit)
    S = unit[start:stop] @ unit.T
    local = np.arange(stop - start)
    S[local, local + start] = -np.inf
    kth = np.partition(S, n - k, axis=1)[:, n - k]
    out = []
    for r in local:
        q = start + int(r)
        cand = np.flatnonzero(S[r] >= kth[r] - _SHORTLIST_MARGIN)
        cand = cand[cand != q]
        sims = _exact_sims(unit, q, cand)
        ranked = sorted(zip(sims, cand.tolist()), key=lambda p: (-p[0], p[1]))
        out.append([(c, s) for s, c in ranked[:k]])
    return out


def knn_lists(rows, k, threads=1):
    """Exact top-``k`` cosine neighbours of every row.

    Ties at the k-th rank go to the smaller node id. Returns one list of
    ``(neighbour, cosine)`` per row, best first.
    """
    X = np.asarray(rows, dtype=np.float64)
    n = len(X)
    norms = _row_norms(X)
    if (norms == 0).any():
        raise ValueError(f"zero vector at row {int(np.flatnonzero(norms == 0)[0])}")
    unit = X / norms[:, None]
    block = max(1, min(256, _BLOCK_ELEMENTS // n))
    starts = range(0, n, block)
    work = lambda s: _knn_block(unit, k, s, min(s + block, n))
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            blocks = list(pool.map(work, starts))
    else:
        blocks = [work(s) for s in starts]
    return [nbrs for b in blocks for nbrs in b]


def build_knn_graph(rows, k=10, mutual=False, threads=1):
    """Symmetrized cosine k-NN graph; non-positive similarities are dropped.

    With ``mutual`` an edge needs both endpoints in each other's lists,
    otherwise the union of the directed lists is taken.
    """
    n = len(rows)
    if n < 2:
        raise ValueError("need at least two rows")
    if k < 1:
        raise ValueError("k must be positive")
    if k >= n:
        log.warning("k=%d clamped to %d (only %d rows)", k, n - 1, n)
        k = n - 1
    lists = knn_lists(rows, k, threads=threads)

    directed = {}
    for q, nbrs in enumerate(lists):
        for c, s in nbrs:
            if s > 0:
                directed[(q, c)] = s
    g = WeightedGraph(n)
    for (q, c), s in directed.items():
        if mutual and (c, q) not in directed:
            continue
        g.add_edge(q, c, s)
    return g


def write_edge_list(f, g, labels=None):
    """``u\\tv\\tweight`` per edge with ``u < v``; ``labels`` renames nodes."""
    for u, v, w in g.edges():
        if labels is not None:
            u, v = labels[u], labels[v]
        f.write(f"{u}\t{v}\t{w!r}\n")


def read_edge_list(f, n_nodes=None):
    edges = []
    for lineno, line in enumerate(f, 1):
        line = line.rstrip("\r\n")
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise ValueError(f"line {lineno}: expected 3 fields")
        edges.append((int(fields[0]), int(fields[1]), float(fields[2])))
    if n_nodes is None:
        n_nodes = 1 + max((max(u, v) for u, v, _ in edges), default=-1)
    return WeightedGraph(n_nodes, edges)
