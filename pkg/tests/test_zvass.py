import itertools
import random

import pytest
from hypothesis import given, strategies as st

from seplab.gadgets import anb2n, anbn, anbn_pa
from seplab.oracles import bfs_run_search, bounded_word_lang, random_pa, random_zvass
from seplab.presburger import parse
from seplab.semilinear import LinearSet, SemilinearRep
from seplab.zvass import (
    DeterminismError, MalformedRunError, ParikhAutomaton, Transition, ZVass, determinize_pair, emptiness,
    is_deterministic, pa_complement_det, pa_to_zvass, product, run_check, run_word, trim,
)


def one_state():
    ts = (Transition("q", "a", (1,), "q"), Transition("q", "b", (-1,), "q"))
    return ZVass(("q",), ("a", "b"), ts, "q", "q", 1)


def test_run_check_examples():
    V = one_state()
    assert run_check(V, (0, 1), [0])
    assert not run_check(V, (0, 0, 1), [0])
    assert run_check(V, (0, 1), [])
    with pytest.raises(MalformedRunError):
        run_check(anbn(), (1, 0), [0])


def test_emptiness_examples():
    assert emptiness(one_state(), [0]).counts == (0, 0)
    V = ZVass(("i", "f"), (), (Transition("i", None, (1,), "f"),), "i", "f", 1)
    assert emptiness(V, [0]) is None
    w = emptiness(anbn(), [0])
    assert w is not None and run_check(anbn(), w.run, [0])
    assert run_word(anbn(), w.run) == ("a", "b")


def test_emptiness_needs_connected_support():
    # a zero-effect cycle disconnected from the accepting path must not help
    ts = (Transition("i", None, (1,), "f"), Transition("c", None, (-1,), "d"), Transition("d", None, (0,), "c"),
          Transition("i", None, (0,), "x"), Transition("x", None, (0,), "i"))
    V = ZVass(("i", "f", "c", "d", "x"), (), ts, "i", "f", 1)
    assert emptiness(V, [0]) is None


def test_json_round_trip():
    V = anbn()
    assert ZVass.from_json(V.to_json()) == V
    P = anbn_pa()
    Q = ParikhAutomaton.from_json(P.to_json())
    assert bounded_word_lang(Q, maxlen=4) == bounded_word_lang(P, maxlen=4)


def test_determinize_pair_structure():
    V1, V2 = anbn(), anb2n()
    dp = determinize_pair(V1, V2)
    assert is_deterministic(dp.w1) and is_deterministic(dp.w2)
    assert set(dp.v1_relabeled.states) == set(V1.states)
    assert len(dp.v1_relabeled.alphabet) == len(V1.transitions)
    eps = ZVass(("p", "r"), ("a",), (Transition("p", None, (0,), "r"), Transition("r", "a", (0,), "r")), "p", "r", 1)
    dp2 = determinize_pair(one_state(), eps)
    assert any(dp2.h[s] is None for s in dp2.w2.alphabet)


def test_product_examples():
    V1 = anbn()
    full = ZVass(("u",), ("a", "b"), (Transition("u", "a", (), "u"), Transition("u", "b", (), "u")), "u", "u", 0)
    V, I1, I2 = product(V1, full)
    assert bounded_word_lang(V, I1, maxlen=4) == bounded_word_lang(V1, maxlen=4)
    V, I1, I2 = product(anbn(), anb2n())
    assert I1 == {0} and I2 == {1}
    run = next(r for r in itertools.product(range(len(V.transitions)), repeat=3)
               if run_word(V, r) == ("a", "b", "b") and _is_path(V, r))
    assert not run_check(V, run, I1) and run_check(V, run, I2)
    with pytest.raises(DeterminismError):
        product(ZVass(("q",), (), (Transition("q", None, (0,), "q"),), "q", "q", 1), full)


def _is_path(V, run):
    try:
        return run_check(V, run, []) or True
    except MalformedRunError:
        return False


def test_trim_keeps_only_useful_part():
    ts = (Transition("i", "a", (0,), "f"), Transition("i", "b", (0,), "dead"))
    Vt, keep = trim(ZVass(("i", "f", "dead"), ("a", "b"), ts, "i", "f", 1))
    assert keep == (0,) and "dead" not in Vt.states


def test_pa_to_zvass_examples():
    ts = (Transition("p", "a", (1,), "p"),)
    P = ParikhAutomaton(("p",), ("a",), ts, "p", {"p": SemilinearRep(1, (LinearSet((2,), ((2,),)),))}, 1, True)
    V, I = pa_to_zvass(P)
    words = bounded_word_lang(V, I, maxlen=4)
    assert ("a", "a") in words and ("a", "a", "a") not in words and ("a",) * 4 in words
    empty = ParikhAutomaton(("p",), ("a",), ts, "p", {}, 1, True)
    V, I = pa_to_zvass(empty)
    assert emptiness(V, I) is None


def test_complement_examples():
    ts = (Transition("p", "a", (0,), "p"),)
    P = ParikhAutomaton(("p",), ("a", "b"), ts, "p", {"p": parse("vars x. true")}, 1, True)
    comp = bounded_word_lang(pa_complement_det(P), maxlen=3)
    assert all("b" in w for w in comp) and ("a", "b") in comp
    C = bounded_word_lang(pa_complement_det(anbn_pa()), maxlen=4)
    assert ("a", "b", "b") in C and ("a",) in C and () not in C and ("a", "b") not in C


@pytest.mark.parametrize("seed", range(15))
def test_random_pa_word_languages_are_preserved(seed):
    P = random_pa(random.Random(seed))
    V, I = pa_to_zvass(P)
    assert bounded_word_lang(V, I, maxlen=3, counter_bound=6) == bounded_word_lang(P, maxlen=3)


@pytest.mark.parametrize("seed", range(15))
def test_double_complement_is_identity_on_words(seed):
    P = random_pa(random.Random(seed))
    CC = pa_complement_det(pa_complement_det(P))
    assert bounded_word_lang(CC, maxlen=4) == bounded_word_lang(P, maxlen=4)


@given(st.integers(0, 10**6))
def test_emptiness_against_bfs(seed):
    rng = random.Random(seed)
    V = random_zvass(rng, max_states=3, max_trans=5, dim=2)
    I = [0, 1]
    w = emptiness(V, I)
    if w is not None:
        assert run_check(V, w.run, I)
    else:
        assert bfs_run_search(V, I, 8) is None
