"""Chinese Whispers hard clustering and the trivial Singletons/Whole partitions."""

from dataclasses import dataclass

import numpy as np


@dataclass
class HardClustering:
    """Partition given as ``node -> label``; labels are node ids."""

    assignment: dict

    @property
    def clusters(self):
        groups = {}
        for node in sorted(self.assignment):
            groups.setdefault(self.assignment[node], []).append(node)
        return [groups[label] for label in sorted(groups)]

    def __len__(self):
        return len(set(self.assignment.values()))


def chinese_whispers(g, max_iters=20, seed=0, callback=None):
    """Cluster ``g`` by asynchronous label propagation.

    Every node starts in its own class. Each sweep visits the nodes in a fresh
    seeded permutation and moves each one to the label with the largest summed
    edge weight among its neighbours, the smallest label winning ties. Stops
    after ``max_iters`` sweeps or a sweep without changes. ``callback(sweep,
    labels)`` sees a copy of the labels after every sweep.
    """
    if max_iters < 1:
        raise ValueError("max_iters must be at least 1")
    n = len(g)
    adj = [g.neighbors(u) for u in range(n)]
    labels = list(range(n))
    rng = np.random.default_rng(seed)
    for sweep in range(max_iters):
        changed = False
        for u in rng.permutation(n).tolist():
            if not adj[u]:
                continue
            mass = {}
            for v, w in adj[u]:
                lv = labels[v]
                mass[lv] = mass.get(lv, 0.0) + w
            best = min(mass, key=lambda l: (-mass[l], l))
            if best != labels[u]:
                labels[u] = best
                changed = True
        if callback is not None:
            callback(sweep, list(labels))
        if not changed:
            break
    return HardClustering(dict(enumerate(labels)))


def singleton_clustering(nodes):
    nodes = list(nodes)
    if not nodes:
        raise ValueError("empty node set")
    return HardClustering({u: u for u in nodes})


def whole_clustering(nodes):
    nodes = list(nodes)
    if not nodes:
        raise ValueError("empty node set")
    first = min(nodes)
    return HardClustering({u: first for u in nodes})


def _as_clusters(clustering):
    return clustering.clusters if hasattr(clustering, "clusters") else clustering


def write_clustering_tsv(f, clustering):
    """``cluster_id\\tnode_id`` rows; a node may repeat for fuzzy clusterings."""
    for cid, members in enumerate(_as_clusters(clustering)):
        for node in members:
            f.write(f"{cid}\t{node}\n")


def read_clustering_tsv(f):
    clusters = {}
    for lineno, line in enumerate(f, 1):
        line = line.rstrip("\r\n")
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            raise ValueError(f"line {lineno}: expected cluster_id and node_id")
        clusters.setdefault(fields[0], []).append(int(fields[1]))
    return list(clusters.values())


def write_clusters_readable(f, clustering, names=None):
    """One cluster per line, members space-separated."""
    for members in _as_clusters(clustering):
        f.write(" ".join(str(names[u] if names else u) for u in members) + "\n")
