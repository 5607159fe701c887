"""Aggregation of triple clusters into triframes."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Triframe:
    subjects: frozenset
    verbs: frozenset
    objects: frozenset
    member_triples: frozenset


def aggregate_frames(triples, clustering):
    """One triframe per cluster of triple ids, in cluster order.

    ``clustering`` is a list of id lists or any object with ``.clusters``;
    a triple shared by fuzzy clusters shows up in each of their frames.
    """
    clusters = clustering.clusters if hasattr(clustering, "clusters") else clustering
    frames = []
    for members in clusters:
        members = list(members)
        for i in members:
            if not 0 <= i < len(triples):
                raise IndexError(f"triple id {i} out of range (store has {len(triples)})")
        ts = [triples[i] for i in members]
        frames.append(Triframe(
            subjects=frozenset(t.subject for t in ts),
            verbs=frozenset(t.verb for t in ts),
            objects=frozenset(t.object for t in ts),
            member_triples=frozenset(members),
        ))
    return frames


def write_frames(f, frames):
    for n, frame in enumerate(frames):
        f.write(f"# frame {n}\n")
        f.write("subjects: " + " ".join(sorted(frame.subjects)) + "\n")
        f.write("verbs: " + " ".join(sorted(frame.verbs)) + "\n")
        f.write("objects: " + " ".join(sorted(frame.objects)) + "\n")
        f.write("\n")
