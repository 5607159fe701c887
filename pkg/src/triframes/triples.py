"""SVO triples with corpus frequencies and their concatenated embeddings."""

import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

log = logging.getLogger(__name__)


class TripleFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Triple:
    subject: str
    verb: str
    object: str
    weight: float = 1.0

    def __post_init__(self):
        if not (self.subject and self.verb and self.object):
            raise ValueError("triple words must be nonempty")
        if not self.weight > 0:
            raise ValueError(f"triple weight must be positive, got {self.weight}")

    @property
    def words(self):
        return (self.subject, self.verb, self.object)

    def __str__(self):
        return " ".join(self.words)


def merge_triples(triples):
    """Merge duplicates by summing weights; first occurrence fixes the order."""
    merged = {}
    for t in triples:
        merged[t.words] = merged.get(t.words, 0.0) + t.weight
    return [Triple(s, v, o, w) for (s, v, o), w in merged.items()]


def load_triples(source, lowercase=False, min_freq=1.0):
    """Read ``subject\\tverb\\tobject[\\tfrequency]`` lines.

    Blank and ``#`` lines are skipped. Duplicates are merged before the
    ``min_freq`` threshold applies to the merged weight.
    """
    raw = []
    for lineno, line in enumerate(source, 1):
        if isinstance(line, bytes):
            line = line.decode("utf-8")
        line = line.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) not in (3, 4):
            raise TripleFormatError(f"line {lineno}: expected 3 or 4 fields, got {len(fields)}")
        weight = 1.0
        if len(fields) == 4:
            try:
                weight = float(fields[3])
            except ValueError:
                raise TripleFormatError(f"line {lineno}: non-numeric frequency {fields[3]!r}") from None
        s, v, o = (f.strip() for f in fields[:3])
        if lowercase:
            s, v, o = s.lower(), v.lower(), o.lower()
        try:
            raw.append(Triple(s, v, o, weight))
        except ValueError as e:
            raise TripleFormatError(f"line {lineno}: {e}") from None
    triples = merge_triples(raw)
    if min_freq > 0:
        kept = [t for t in triples if t.weight >= min_freq]
        if len(kept) < len(triples):
            log.info("min-freq %g kept %d of %d triples", min_freq, len(kept), len(triples))
        triples = kept
    return triples


def load_triples_file(path, **kwargs):
    with open(path, encoding="utf-8") as f:
        return load_triples(f, **kwargs)


def embed_triple(model, t):
    """Concatenate subject, verb and object vectors; ``None`` if any is OOV."""
    parts = [model.vector(w) for w in t.words]
    if any(p is None for p in parts):
        return None
    return np.concatenate(parts)


class EmbeddedStore(NamedTuple):
    matrix: np.ndarray  # one 3d-dimensional row per retained triple
    kept: list  # input index of each matrix row
    dropped: list  # (input index, triple, missing words)


class EmptyEmbeddingSpace(ValueError):
    pass


def embed_store(model, triples):
    rows, kept, dropped = [], [], []
    for i, t in enumerate(triples):
        missing = tuple(w for w in dict.fromkeys(t.words) if w not in model)
        if missing:
            dropped.append((i, t, missing))
            continue
        rows.append(embed_triple(model, t))
        kept.append(i)
    if not rows:
        raise EmptyEmbeddingSpace("empty embedding space: every triple has an out-of-vocabulary word")
    return EmbeddedStore(np.vstack(rows), kept, dropped)


def write_node_table(f, triples):
    """One ``id\\tsubject\\tverb\\tobject\\tweight`` line per triple."""
    for i, t in enumerate(triples):
        f.write(f"{i}\t{t.subject}\t{t.verb}\t{t.object}\t{float(t.weight)!r}\n")


def read_node_table(f):
    triples = []
    for lineno, line in enumerate(f, 1):
        line = line.rstrip("\r\n")
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 5 or int(fields[0]) != len(triples):
            raise TripleFormatError(f"line {lineno}: bad node table row")
        triples.append(Triple(fields[1], fields[2], fields[3], float(fields[4])))
    return triples
