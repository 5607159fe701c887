"""Gold triple clusters from sentence-level frame annotations.

Input rows are ``sentence_id\\tframe\\tfee\\trole\\tword`` with one filler word
per row; a row with only the first three fields declares an annotation
without roles. A filler containing whitespace spans several words.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations

from .evaluation import GoldInstance

log = logging.getLogger(__name__)


@dataclass
class FrameAnnotation:
    sentence_id: str
    frame: str
    fee: str
    role_fillers: list = field(default_factory=list)  # (role, [word, ...])

    def add(self, role, word):
        for r, words in self.role_fillers:
            if r == role:
                words.append(word)
                return
        self.role_fillers.append((role, [word]))


def read_annotations(f):
    annotations = {}
    for lineno, line in enumerate(f, 1):
        line = line.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) not in (3, 5):
            raise ValueError(f"line {lineno}: expected 3 or 5 fields, got {len(fields)}")
        key = tuple(fields[:3])
        ann = annotations.get(key)
        if ann is None:
            ann = annotations[key] = FrameAnnotation(*key)
        if len(fields) == 5:
            if not fields[3] or not fields[4].strip():
                raise ValueError(f"line {lineno}: empty role or filler")
            ann.add(fields[3], fields[4].strip())
    return list(annotations.values())


def _single_word_roles(ann):
    roles = {}
    for role, words in ann.role_fillers:
        single = [w for w in dict.fromkeys(words) if len(w.split()) == 1]
        if single:
            roles[role] = single
    return roles


def select_roles(role_sets):
    """Most frequently co-occurring role pair, ties to the smaller name pair."""
    counts = Counter(pair for roles in role_sets for pair in combinations(sorted(roles), 2))
    return min(counts, key=lambda p: (-counts[p], p))


def build_gold(annotations):
    """Role-typed gold triples, one cluster per frame, frames sorted by name.

    Multi-word fillers and annotations left with fewer than two roles are
    dropped. Each frame keeps its most frequently co-occurring role pair
    (lexicographic order gives role1 and role2), and every combination of
    their fillers yields a triple. Repeated triples merge into one weighted
    instance.
    """
    by_frame = {}
    for ann in annotations:
        if len(ann.fee.split()) != 1:
            log.warning("sentence %s: dropping multi-token FEE %r", ann.sentence_id, ann.fee)
            continue
        roles = _single_word_roles(ann)
        if len(roles) < 2:
            continue
        by_frame.setdefault(ann.frame, []).append((ann.fee, roles))

    gold = []
    for frame in sorted(by_frame):
        items = by_frame[frame]
        role1, role2 = select_roles(roles for _, roles in items)
        counts = {}
        for fee, roles in items:
            if role1 not in roles or role2 not in roles:
                continue
            for w1 in roles[role1]:
                for w2 in roles[role2]:
                    counts[(w1, fee, w2)] = counts.get((w1, fee, w2), 0) + 1
        for (s, v, o), n in counts.items():
            gold.append(GoldInstance(frame, s, role1, v, o, role2, float(n)))
    return gold
