"""Normalized modified purity, normalized inverse purity and their F1.

A cluster is a ``dict`` mapping an element (word, typed pair, ...) to its
weight. Scores for triple clusterings are computed per mode: ``verb``,
``subject`` and ``object`` project clusters onto one slot, ``frame`` turns
every triple into typed ``(word, role)`` pairs.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass

log = logging.getLogger(__name__)

MODES = ("verb", "subject", "object", "frame")
_SLOT = {"subject": 0, "verb": 1, "object": 2}
# system and gold triples are typed by position in frame mode
POSITIONAL_ROLES = ("role1", "FEE", "role2")


@dataclass(frozen=True)
class Scores:
    nmpu: float
    nipu: float
    f1: float


@dataclass(frozen=True)
class GoldInstance:
    frame: str
    subject: str
    role1: str
    verb: str
    object: str
    role2: str
    weight: float = 1.0

    @property
    def words(self):
        return (self.subject, self.verb, self.object)


def _total(clusters):
    return sum(w for c in clusters for w in c.values())


def _index(clusters):
    idx = defaultdict(list)
    for j, c in enumerate(clusters):
        for e in c:
            idx[e].append(j)
    return idx


def _best_overlaps(clusters, others):
    """For each cluster, max over ``others`` of its own weight on the intersection."""
    idx = _index(others)
    best = []
    for c in clusters:
        overlap = defaultdict(float)
        for e, w in c.items():
            for j in idx.get(e, ()):
                overlap[j] += w
        best.append(max(overlap.values(), default=0.0))
    return best


def nmpu(K, G):
    """Precision side; clusters with a single distinct element score zero."""
    if not G:
        raise ValueError("empty gold standard")
    if not K:
        log.warning("empty clustering scores nmPU 0")
        return 0.0
    n = _total(K)
    best = _best_overlaps(K, G)
    return min(1.0, sum(b for c, b in zip(K, best) if len(c) > 1) / n)


def nipu(K, G):
    if not G:
        raise ValueError("empty gold standard")
    n = _total(G)
    return min(1.0, sum(_best_overlaps(G, K)) / n)


def f1(p, r):
    if p == 0 or r == 0:
        return 0.0
    return 2 * p * r / (p + r)


def score(K, G):
    p, r = nmpu(K, G), nipu(K, G)
    return Scores(p, r, f1(p, r))


def frame_tuples(instances):
    """Union of typed ``(word, role)`` pairs over ``(pairs, weight)`` instances."""
    cluster = defaultdict(float)
    for pairs, weight in instances:
        for word, role in pairs:
            if not role:
                raise ValueError(f"missing role label for {word!r}")
            cluster[(word, role)] += weight
    return dict(cluster)


def _slot_cluster(word_weights, dedup):
    cluster = defaultdict(float)
    for word, w in word_weights:
        cluster[word] += w
    if dedup:
        return {word: 1.0 for word in cluster}
    return dict(cluster)


def _convert(groups, mode, dedup):
    """``groups`` is a list of clusters, each a list of ``((s, v, o), weight)``."""
    if mode == "frame":
        return [frame_tuples((tuple(zip(words, POSITIONAL_ROLES)), w) for words, w in g)
                for g in groups]
    if mode not in _SLOT:
        raise ValueError(f"unknown evaluation mode {mode!r}")
    slot = _SLOT[mode]
    return [_slot_cluster(((words[slot], w) for words, w in g), dedup) for g in groups]


def gold_groups(instances):
    frames = {}
    for inst in instances:
        frames.setdefault(inst.frame, []).append((inst.words, inst.weight))
    return list(frames.values())


def complete_clusters(clusters, n):
    """Append singleton clusters for ids ``0..n-1`` no cluster covers."""
    covered = {i for c in clusters for i in c}
    return [list(c) for c in clusters] + [[i] for i in range(n) if i not in covered]


def evaluate(clusters, triples, gold, mode, dedup_slot=False):
    """Score clusters of triple ids against gold instances in one mode."""
    if mode not in MODES:
        raise ValueError(f"unknown evaluation mode {mode!r}")
    system = [[(triples[i].words, triples[i].weight) for i in c] for c in clusters]
    K = _convert(system, mode, dedup_slot)
    G = _convert(gold_groups(gold), mode, dedup_slot)
    return score(K, G)


def read_gold(f):
    """``frame\\tsubject\\trole1\\tverb\\tobject\\trole2[\\tweight]`` rows."""
    gold = []
    for lineno, line in enumerate(f, 1):
        line = line.rstrip("\r\n")
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) not in (6, 7):
            raise ValueError(f"line {lineno}: expected 6 or 7 fields, got {len(fields)}")
        weight = float(fields[6]) if len(fields) == 7 else 1.0
        if not weight > 0:
            raise ValueError(f"line {lineno}: weight must be positive")
        gold.append(GoldInstance(*fields[:6], weight))
    return gold


def _fmt_weight(w):
    return str(int(w)) if float(w).is_integer() else repr(float(w))


def write_gold(f, gold):
    f.write("# frame_id\tsubject\trole1\tverb\tobject\trole2\tweight\n")
    for g in gold:
        f.write(f"{g.frame}\t{g.subject}\t{g.role1}\t{g.verb}\t{g.object}\t{g.role2}\t{_fmt_weight(g.weight)}\n")


def write_report(f, rows):
    """CSV of ``(mode, Scores)`` rows as percentages with two decimals."""
    f.write("mode,nmpu,nipu,f1\n")
    for mode, s in rows:
        f.write(f"{mode},{100 * s.nmpu:.2f},{100 * s.nipu:.2f},{100 * s.f1:.2f}\n")
