"""Dense word vectors in the text word2vec format."""

import gzip
import logging
import math
from pathlib import Path

import numpy as np

log = logging.getLogger(__name__)


class EmbeddingFormatError(ValueError):
    pass


class EmbeddingModel:
    """Immutable word -> vector table backed by one float64 matrix."""

    def __init__(self, words, matrix):
        matrix = np.asarray(matrix, dtype=np.float64)
        if matrix.ndim != 2 or matrix.shape[1] < 1:
            raise ValueError("matrix must be 2-D with at least one column")
        if len(words) != matrix.shape[0]:
            raise ValueError("one row per word required")
        self._index = {}
        for i, w in enumerate(words):
            if w in self._index:
                raise ValueError(f"duplicate word {w!r}")
            self._index[w] = i
        self._words = list(words)
        self._matrix = matrix
        self._matrix.setflags(write=False)

    @property
    def dimension(self) -> int:
        return self._matrix.shape[1]

    @property
    def words(self):
        return list(self._words)

    def __len__(self):
        return len(self._words)

    def __contains__(self, word):
        return word in self._index

    def vector(self, word):
        i = self._index.get(word)
        return None if i is None else self._matrix[i]


def vector(model: EmbeddingModel, word: str):
    """Exact, case-sensitive lookup; ``None`` for an out-of-vocabulary word."""
    return model.vector(word)


def cosine(a, b) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    na = math.sqrt(math.fsum((a * a).tolist()))
    nb = math.sqrt(math.fsum((b * b).tolist()))
    if na == 0.0 or nb == 0.0:
        raise ValueError("cosine undefined for a zero vector")
    c = math.fsum((a * b).tolist()) / (na * nb)
    return max(-1.0, min(1.0, c))


def _is_header(tokens):
    if len(tokens) != 2:
        return False
    try:
        return int(tokens[0]) >= 0 and int(tokens[1]) > 0
    except ValueError:
        return False


def load_embeddings(source, format="text-word2vec") -> EmbeddingModel:
    """Parse a word2vec text stream (bytes or text).

    An optional ``<count> <dim>`` header fixes the dimension, otherwise the
    first row does. Duplicate words keep their first occurrence and all-zero
    vectors are skipped, since cosine is undefined for them.
    """
    if format != "text-word2vec":
        raise ValueError(f"unsupported embedding format {format!r}")

    dim = None
    words, rows = [], []
    seen = set()
    zero = 0
    for lineno, line in enumerate(source, 1):
        if isinstance(line, bytes):
            line = line.decode("utf-8")
        tokens = line.split()
        if not tokens:
            continue
        if lineno == 1 and _is_header(tokens):
            dim = int(tokens[1])
            continue
        word, values = tokens[0], tokens[1:]
        if dim is None:
            if not values:
                raise EmbeddingFormatError(f"line {lineno}: no vector components")
            dim = len(values)
        if len(values) != dim:
            raise EmbeddingFormatError(
                f"line {lineno}: expected {dim} components, got {len(values)}")
        try:
            vec = [float(x) for x in values]
        except ValueError as e:
            raise EmbeddingFormatError(f"line {lineno}: {e}") from None
        if word in seen:
            continue
        seen.add(word)
        if not any(vec):
            zero += 1
            continue
        words.append(word)
        rows.append(vec)

    if not words:
        raise EmbeddingFormatError("no word vectors in input")
    if zero:
        log.warning("skipped %d all-zero vectors", zero)
    return EmbeddingModel(words, np.array(rows, dtype=np.float64))


def load_embeddings_file(path) -> EmbeddingModel:
    path = Path(path)
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "rt", encoding="utf-8") as f:
        return load_embeddings(f)
