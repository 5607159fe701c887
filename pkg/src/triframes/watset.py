"""Watset fuzzy graph clustering.

Each node is split into senses by clustering its ego-network, every edge is
re-attached to the best-matching senses of its endpoints, and the resulting
sense graph is clustered globally. Projecting sense clusters back to nodes
lets an ambiguous hub belong to several clusters.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .cw import chinese_whispers
from .graph import WeightedGraph

_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class Sense:
    node: int
    index: int
    context: dict = field(hash=False)  # neighbour -> edge weight to ``node``

    @property
    def label(self):
        return f"{self.node}#{self.index}"


@dataclass
class FuzzyClustering:
    clusters: list

    def __len__(self):
        return len(self.clusters)


def node_senses(g, u, seed=0, max_iters=20):
    nbrs = [v for v, _ in g.neighbors(u)]
    if not nbrs:
        return [Sense(u, 0, {})]
    ego = g.subgraph(nbrs)
    local = chinese_whispers(ego, max_iters=max_iters, seed=(seed ^ u) & _SEED_MASK)
    groups = sorted(local.clusters, key=min)
    return [Sense(u, i, {nbrs[j]: g.weight(u, nbrs[j]) for j in grp})
            for i, grp in enumerate(groups)]


def induce_senses(g, seed=0, max_iters=20, threads=1):
    """Senses of every node, ordered by node then sense index."""
    work = lambda u: node_senses(g, u, seed, max_iters)
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_node = list(pool.map(work, g.nodes, chunksize=64))
    else:
        per_node = [work(u) for u in g.nodes]
    return [s for senses in per_node for s in senses]


def _context_vector(sense):
    vec = dict(sense.context)
    vec[sense.node] = max(sense.context.values(), default=1.0)
    return vec


def _sparse_cosine(a, b):
    if len(a) > len(b):
        a, b = b, a
    dot = math.fsum(w * b[k] for k, w in sorted(a.items()) if k in b)
    if dot == 0.0:
        return 0.0
    na = math.sqrt(math.fsum(w * w for w in a.values()))
    nb = math.sqrt(math.fsum(w * w for w in b.values()))
    return dot / (na * nb)


def build_sense_graph(g, senses):
    """Map every edge ``(u, v)`` with ``u < v`` onto one sense edge.

    The sense of ``u`` is the one whose context holds ``v``; the sense of
    ``v`` is the one whose context (plus ``v`` itself) is most similar to
    that of ``u``, the lower sense index winning ties.
    """
    by_node = [[] for _ in g.nodes]
    owner = {}
    for sid, s in enumerate(senses):
        by_node[s.node].append(sid)
        for v in s.context:
            owner[(s.node, v)] = sid
    vectors = [_context_vector(s) for s in senses]

    sg = WeightedGraph(len(senses))
    for u, v, w in g.edges():
        try:
            su = owner[(u, v)]
        except KeyError:
            raise RuntimeError(f"node {v} missing from every sense context of {u}") from None
        best, best_sim = None, -1.0
        for sv in by_node[v]:
            sim = _sparse_cosine(vectors[su], vectors[sv])
            if sim > best_sim:
                best, best_sim = sv, sim
        sg.add_edge(su, best, w)
    return sg


def watset(g, seed=0, max_iters=20, threads=1):
    senses = induce_senses(g, seed=seed, max_iters=max_iters, threads=threads)
    sg = build_sense_graph(g, senses)
    global_ = chinese_whispers(sg, max_iters=max_iters, seed=seed)
    clusters = [sorted({senses[sid].node for sid in members}) for members in global_.clusters]
    return FuzzyClustering(clusters)


def write_sense_graph(f, sg, senses):
    """Debug dump of the sense graph with ``node#k`` labels."""
    for a, b, w in sg.edges():
        f.write(f"{senses[a].label}\t{senses[b].label}\t{w!r}\n")
