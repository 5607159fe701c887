import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from synthetic import purity_oracle, random_purity_instance
from triframes.evaluation import (GoldInstance, Scores, complete_clusters, evaluate, f1, frame_tuples, nipu,
                                  nmpu, read_gold, score, write_gold, write_report)
from triframes.triples import Triple


def unit(*clusters):
    return [{e: 1.0 for e in c} for c in clusters]


def test_nmpu_examples():
    assert nmpu(unit("a", "b", "c", "d"), unit("ab", "cd")) == 0.0
    assert nmpu(unit("ab", "cd"), unit("ab", "cd")) == 1.0
    assert nmpu(unit("abc"), unit("ab", "cd")) == pytest.approx(2 / 3, abs=1e-12)


def test_nipu_examples():
    assert nipu(unit("abcd"), unit("ab", "cd")) == 1.0
    assert nipu(unit("ab", "cd"), unit("ab", "cd")) == 1.0
    assert nipu(unit("a", "b", "c", "d"), unit("ab", "cd")) == 0.5


def test_f1_examples():
    assert f1(1, 1) == 1
    assert f1(0, 0.7) == 0
    assert f1(2 / 3, 0.5) == pytest.approx(4 / 7, abs=1e-15)


def test_empty_inputs(caplog):
    assert nmpu([], unit("ab")) == 0.0
    assert "empty clustering" in caplog.text
    with pytest.raises(ValueError):
        nipu(unit("ab"), [])


def test_weighted_overlap_uses_each_sides_weights():
    K = [{"a": 3.0, "b": 1.0}]
    G = [{"a": 1.0, "b": 1.0}, {"c": 2.0}]
    # precision weights come from K, recall weights from G
    assert nmpu(K, G) == 1.0
    assert nipu(K, G) == 0.5


@settings(max_examples=200)
@given(st.integers(0, 2**32 - 1))
def test_matches_brute_force(seed):
    K, G = random_purity_instance(np.random.default_rng(seed))
    p, r = purity_oracle(K, G)
    assert abs(nmpu(K, G) - p) <= 1e-9
    assert abs(nipu(K, G) - r) <= 1e-9
    assert 0 <= nmpu(K, G) <= 1 and 0 <= nipu(K, G) <= 1


def _hard_instance(rng):
    n = int(rng.integers(2, 12))
    labels = rng.integers(0, 4, size=n)
    K = [{f"e{i}": float(rng.uniform(0.5, 2)) for i in np.flatnonzero(labels == l)} for l in np.unique(labels)]
    _, G = random_purity_instance(rng, max_elements=n)
    return K, G


@settings(max_examples=200)
@given(st.integers(0, 2**32 - 1))
def test_merging_non_singletons_never_raises_nmpu(seed):
    rng = np.random.default_rng(seed)
    K, G = _hard_instance(rng)
    big = [c for c in K if len(c) > 1]
    if len(big) < 2:
        return
    rest = [c for c in K if len(c) <= 1]
    merged = [{**big[0], **big[1]}] + big[2:] + rest
    assert nmpu(merged, G) <= nmpu(K, G) + 1e-12


@settings(max_examples=200)
@given(st.integers(0, 2**32 - 1))
def test_splitting_never_raises_nipu(seed):
    rng = np.random.default_rng(seed)
    K, G = _hard_instance(rng)
    c = K[0]
    if len(c) < 2:
        return
    items = list(c.items())
    cut = int(rng.integers(1, len(items)))
    split = [dict(items[:cut]), dict(items[cut:])] + K[1:]
    assert nipu(split, G) <= nipu(K, G) + 1e-12


def test_merging_singletons_can_raise_nmpu():
    # the monotonicity above needs non-singleton clusters: singletons score zero
    assert nmpu(unit("a", "b"), unit("ab")) == 0.0
    assert nmpu(unit("ab"), unit("ab")) == 1.0


def test_frame_tuples():
    freddy = (("Freddy", "Predator"), ("kidnap", "FEE"), ("kid", "Victim"))
    assert frame_tuples([(freddy, 1.0)]) == {("Freddy", "Predator"): 1.0, ("kidnap", "FEE"): 1.0,
                                             ("kid", "Victim"): 1.0}
    other = (("alien", "Predator"), ("kidnap", "FEE"), ("child", "Victim"))
    assert frame_tuples([(freddy, 1.0), (other, 1.0)])[("kidnap", "FEE")] == 2.0
    four_roles = freddy + (("forest", "Location"),)
    assert ("forest", "Location") in frame_tuples([(four_roles, 1.0)])
    with pytest.raises(ValueError):
        frame_tuples([((("Freddy", ""),), 1.0)])


# two gold frames of two triples; the system splits the first one
TOY_TRIPLES = [Triple("a", "x", "b"), Triple("c", "x", "d"), Triple("e", "y", "f"), Triple("g", "z", "f")]
TOY_GOLD = [GoldInstance("F1", "a", "R1", "x", "b", "R2"), GoldInstance("F1", "c", "R1", "x", "d", "R2"),
            GoldInstance("F2", "e", "R1", "y", "f", "R2"), GoldInstance("F2", "g", "R1", "z", "f", "R2")]
TOY_SYSTEM = [[0], [1], [2, 3]]
# worked by hand: (nmPU, niPU, F1)
TOY_TABLE = {
    "verb": (1 / 2, 1.0, 2 / 3),
    "subject": (1 / 2, 3 / 4, 3 / 5),
    "object": (0.0, 3 / 4, 0.0),
    "frame": (1.0, 5 / 6, 10 / 11),
}


@pytest.mark.parametrize("mode", sorted(TOY_TABLE))
def test_toy_table(mode):
    s = evaluate(TOY_SYSTEM, TOY_TRIPLES, TOY_GOLD, mode)
    for got, want in zip((s.nmpu, s.nipu, s.f1), TOY_TABLE[mode]):
        assert abs(got - want) <= 1e-9


def test_perfect_system_scores_one_in_every_mode():
    triples = [Triple("a", "x", "b"), Triple("c", "y", "d"), Triple("e", "z", "f"), Triple("g", "w", "h")]
    gold = [GoldInstance("F1" if i < 2 else "F2", t.subject, "R1", t.verb, t.object, "R2")
            for i, t in enumerate(triples)]
    for mode in ("verb", "subject", "object", "frame"):
        assert evaluate([[0, 1], [2, 3]], triples, gold, mode) == Scores(1.0, 1.0, 1.0)


def test_singletons_verb_mode():
    s = evaluate([[i] for i in range(4)], TOY_TRIPLES, TOY_GOLD, "verb")
    assert s.nmpu == 0.0 and s.f1 == 0.0


def test_frame_mode_permutation_invariance():
    a = evaluate([[0], [1], [2, 3]], TOY_TRIPLES, TOY_GOLD, "frame")
    b = evaluate([[3, 2], [1], [0]], TOY_TRIPLES, TOY_GOLD[::-1], "frame")
    assert (a.nmpu, a.nipu) == pytest.approx((b.nmpu, b.nipu), abs=1e-12)


def test_verb_mode_equals_fee_only_frame_tuples():
    system = [[0, 2], [1, 3]]
    verb = evaluate(system, TOY_TRIPLES, TOY_GOLD, "verb")
    fee = lambda ts: frame_tuples(((((t[1], "FEE"),), w) for t, w in ts))
    K = [fee((TOY_TRIPLES[i].words, TOY_TRIPLES[i].weight) for i in c) for c in system]
    G = [fee((g.words, g.weight) for g in TOY_GOLD if g.frame == f) for f in ("F1", "F2")]
    assert score(K, G) == verb


def test_dedup_slot():
    triples = [Triple("a", "x", "b", 3.0), Triple("c", "x", "d", 1.0), Triple("e", "y", "f", 1.0)]
    gold = [GoldInstance("F1", "a", "R1", "x", "b", "R2"), GoldInstance("F1", "c", "R1", "x", "d", "R2"),
            GoldInstance("F2", "e", "R1", "y", "f", "R2")]
    # summed: K = {x: 4, y: 1}, G = {x: 2}, {y: 1}
    assert evaluate([[0, 1, 2]], triples, gold, "verb") == Scores(0.8, 1.0, f1(0.8, 1.0))
    # deduplicated: K = {x: 1, y: 1}, G = {x: 1}, {y: 1}
    assert evaluate([[0, 1, 2]], triples, gold, "verb", dedup_slot=True) == Scores(0.5, 1.0, f1(0.5, 1.0))


def test_unknown_mode():
    with pytest.raises(ValueError):
        evaluate(TOY_SYSTEM, TOY_TRIPLES, TOY_GOLD, "role")


def test_complete_clusters_adds_missing_ids_as_singletons():
    assert complete_clusters([[0, 2]], 4) == [[0, 2], [1], [3]]


def test_gold_io_round_trip():
    buf = io.StringIO()
    write_gold(buf, TOY_GOLD + [GoldInstance("F3", "h", "A", "w", "i", "B", 2.5)])
    text = buf.getvalue()
    assert text.splitlines()[1] == "F1\ta\tR1\tx\tb\tR2\t1"
    assert read_gold(io.StringIO(text))[-1].weight == 2.5
    assert read_gold(io.StringIO("F\ta\tR1\tx\tb\tR2\n"))[0].weight == 1.0
    with pytest.raises(ValueError):
        read_gold(io.StringIO("F\ta\tR1\tx\tb\n"))


def test_report_format():
    buf = io.StringIO()
    write_report(buf, [("verb", Scores(0.0, 1.0, 0.0)), ("frame", Scores(2 / 3, 0.5, 4 / 7))])
    assert buf.getvalue() == "mode,nmpu,nipu,f1\nverb,0.00,100.00,0.00\nframe,66.67,50.00,57.14\n"
