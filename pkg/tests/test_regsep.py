import random
from collections import Counter

import pytest

from seplab.gadgets import anb2n, anbn, anbn_pa, anbnc, astar_pa, ends_in_dfa
from seplab.oracles import random_det_instance
from seplab.presburger import parse
from seplab.regsep import (
    DFA, RegsepCertificate, ResourceCapError, Skeleton, bi_cancelable_by_automata, bi_cancelable_set, build_W,
    cycle_space_system, enumerate_skeletons, explain_regsep_certificate, prepare_pair, regsep, regsep_oracle_path,
    regularity_det_pa, short_cycles, skel, skeleton_transitions, verify_regular_separator,
    verify_regular_separator_pair,
)
from seplab.zvass import DeterminismError, ParikhAutomaton, Transition, ZVass, emptiness, trim


def loops(effects, dim=1, labels="ab"):
    ts = tuple(Transition("q", labels[i], e, "q") for i, e in enumerate(effects))
    return ZVass(("q",), tuple(labels[:len(effects)]), ts, "q", "q", dim)


def test_skel_examples():
    V = loops([(0,), (0,)])
    assert skel(V, (0, 1)) == ((0,), Counter({(1,): 1}))
    path = ZVass(("a", "b", "c"), ("x",), (Transition("a", "x", (0,), "b"), Transition("b", "x", (0,), "c")),
                 "a", "c", 1)
    assert skel(path, (0, 1)) == ((0, 1), Counter())
    rho, _ = skel(anbn(), (0, 1, 2))
    assert skel(anbn(), rho) == (rho, Counter())


def test_enumerate_skeletons_examples():
    dag = ZVass(("i", "m", "f"), ("a", "b"),
                (Transition("i", "a", (0,), "m"), Transition("m", "b", (0,), "f"), Transition("i", "b", (0,), "f")),
                "i", "f", 1)
    assert sorted(s.path for s in enumerate_skeletons(dag)) == [(0, 1), (2,)]
    two = ZVass(("i", "f"), ("a", "b"), (Transition("i", "a", (0,), "f"), Transition("i", "b", (0,), "f")),
                "i", "f", 1)
    assert len(enumerate_skeletons(two)) == 2
    # position 0 is the start state, so single loops are skeletons next to the empty path
    assert [s.path for s in enumerate_skeletons(loops([(0,), (0,)]))] == [(), (0,), (1,)]


def test_skeleton_cap():
    with pytest.raises(ResourceCapError):
        enumerate_skeletons(anbn(), cap=1)


def test_bi_cancelable_examples():
    assert bi_cancelable_set(loops([(0,)]), [0], [0]) == {0}
    assert bi_cancelable_set(loops([(1,)]), [0], [0]) == frozenset()
    assert bi_cancelable_set(loops([(1,), (-1,)]), [0], [0]) == {0, 1}
    V = loops([(1, 0), (0, -1), (-1, 1)], dim=2, labels="abc")
    for I1, I2 in (([0], [1]), ([0, 1], [1]), ([0], [0])):
        assert bi_cancelable_set(V, I1, I2) == bi_cancelable_by_automata(V, I1, I2)


def test_build_W_state_count():
    V = ZVass(("q",), ("a",), (Transition("q", "a", (0,), "q"),), "q", "q", 1)
    sk = Skeleton((0,), frozenset({"q"}))
    W = build_W(V, sk, frozenset(), [0], [0])
    assert len(W.zvass.states) == 18


def test_W_without_cycles_checks_the_skeleton_effect():
    ts = (Transition("i", "a", (1, 0), "f"),)
    V = ZVass(("i", "f"), ("a",), ts, "i", "f", 2)
    sk = enumerate_skeletons(V)[0]
    assert emptiness(build_W(V, sk, frozenset(), [1], [1]).zvass, range(8)) is not None
    assert emptiness(build_W(V, sk, frozenset(), [0], [1]).zvass, range(8)) is None


def test_hand_pairs():
    V, I1, I2, _ = prepare_pair(anbn(), anb2n())
    v = regsep(V, I1, I2)
    assert not v.separable and explain_regsep_certificate(V, I1, I2, v.certificate) == []
    assert not regsep_oracle_path(V, I1, I2).separable
    V, I1, I2, _ = prepare_pair(anbn(), anbnc())
    assert regsep(V, I1, I2).separable and regsep_oracle_path(V, I1, I2).separable


def test_empty_side_is_separable():
    empty = ZVass(("i", "f"), ("a", "b"), (Transition("i", "a", (1,), "f"),), "i", "f", 1)
    V, I1, I2, _ = prepare_pair(empty, anbn())
    assert regsep(V, I1, I2).separable


def test_input_must_be_deterministic():
    V = ZVass(("q",), ("a",), (Transition("q", "a", (0,), "q"), Transition("q", "a", (1,), "q")), "q", "q", 1)
    with pytest.raises(DeterminismError):
        regsep(V, [0], [0])


def test_no_counters_means_plain_emptiness():
    V = loops([(0,), (0,)])
    assert not regsep(V, [], []).separable
    assert not regsep_oracle_path(V, [], []).separable


def test_skeleton_with_no_cycles():
    ts = (Transition("i", "a", (1,), "f"),)
    V = ZVass(("i", "f"), ("a",), ts, "i", "f", 1)
    sk = enumerate_skeletons(V)[0]
    assert short_cycles(V, sk.states, skeleton_transitions(V, sk), 2) == []
    sys = cycle_space_system(V, sk.path, [], [0])
    assert sys.ncols == 0 and sys.rhs == (-1,)
    assert regsep(V, [0], [0]).separable == regsep_oracle_path(V, [0], [0]).separable


def test_certificate_tampering_is_detected():
    V, I1, I2, _ = prepare_pair(anbn(), anb2n())
    c = regsep(V, I1, I2).certificate
    assert RegsepCertificate.from_json(c.to_json()) == c
    assert explain_regsep_certificate(V, I1, I2, RegsepCertificate(c.skeleton, ())) != []
    assert explain_regsep_certificate(V, I1, I2, RegsepCertificate(c.skeleton[:-1], c.cycles)) != []


def test_hand_separator_dfa():
    R = ends_in_dfa("c", "abc")
    assert verify_regular_separator_pair(anbnc(), anbn(), R)
    assert verify_regular_separator_pair(anbn(), anbnc(), ends_in_dfa("c", "abc", negate=True))
    assert not verify_regular_separator_pair(anbn(), anbnc(), R)
    V, I1, I2, dp = prepare_pair(anbn(), anbnc())
    assert regsep(V, I1, I2).separable


def test_verify_on_product_with_dfa_over_its_alphabet():
    V = loops([(1,), (-1,)])
    everything = DFA(("s",), "s", frozenset({"s"}), {"s": {"a": "s", "b": "s"}})
    nothing = DFA(("s",), "s", frozenset(), {"s": {"a": "s", "b": "s"}})
    assert not verify_regular_separator(V, [0], [0], everything)
    assert verify_regular_separator(V, [0], [], everything) is False
    assert verify_regular_separator(ZVass(("q", "f"), ("a", "b"), (), "q", "f", 1), [0], [0], nothing)
    with pytest.raises(ValueError):
        verify_regular_separator(V, [0], [0], DFA(("s",), "s", frozenset(), {"s": {"a": "s"}}))


def test_regularity_examples():
    assert regularity_det_pa(anbn_pa()) is False
    assert regularity_det_pa(astar_pa()) is True
    ts = (Transition("p", "a", (1,), "p"),)
    even = ParikhAutomaton(("p",), ("a",), ts, "p", {"p": parse("vars x. x = 0 mod 2")}, 1, True)
    assert regularity_det_pa(even) is True


def test_threads_do_not_change_verdicts():
    V, I1, I2, _ = prepare_pair(anbn(), anb2n())
    a, b = regsep(V, I1, I2), regsep(V, I1, I2, workers=3)
    assert a.separable == b.separable and a.certificate == b.certificate


@pytest.mark.parametrize("seed", range(15))
def test_random_dual_path(seed):
    V, I1, I2 = random_det_instance(random.Random(seed))
    v = regsep(V, I1, I2)
    assert v.separable == regsep_oracle_path(V, I1, I2).separable
    if not v.separable:
        assert explain_regsep_certificate(V, I1, I2, v.certificate) == []


@pytest.mark.parametrize("seed", range(15))
def test_random_bicancel(seed):
    V, I1, I2 = random_det_instance(random.Random(100 + seed))
    Vt, _ = trim(V)
    if len(Vt.transitions) <= 5:
        assert bi_cancelable_set(Vt, I1, I2) == bi_cancelable_by_automata(Vt, I1, I2)


@pytest.mark.parametrize("seed", range(10))
def test_skeleton_invariants(seed):
    V, _, _ = random_det_instance(random.Random(200 + seed))
    Vt, _ = trim(V)
    n = len(Vt.states)
    for sk in enumerate_skeletons(Vt):
        assert len(sk.path) <= n * n
        assert skel(Vt, sk.path) == (sk.path, Counter())


@pytest.mark.parametrize("seed", range(12))
def test_circulation_prefilter_matches_witness_automaton(seed):
    V, I1, I2 = random_det_instance(random.Random(300 + seed))
    assert regsep(V, I1, I2).separable == regsep(V, I1, I2, always_build_w=True).separable


def test_circulation_prefilter_on_hand_pair():
    V, I1, I2, _ = prepare_pair(anbn(), anb2n())
    assert not regsep(V, I1, I2, always_build_w=True).separable


def _all_paths(V, max_len):
    out = [()]
    frontier = [((), V.initial)]
    for _ in range(max_len):
        nxt = []
        for path, q in frontier:
            for i, t in enumerate(V.transitions):
                if t.src == q:
                    nxt.append((path + (i,), t.dst))
        frontier = nxt
        out += [p for p, q in nxt]
    return [p for p in out if (V.transitions[p[-1]].dst if p else V.initial) == V.final]


@pytest.mark.parametrize("seed", range(10))
def test_skeleton_enumeration_matches_path_enumeration(seed):
    V, _, _ = random_det_instance(random.Random(400 + seed), max_states=3, dim=1)
    Vt, _ = trim(V)
    skels = {s.path for s in enumerate_skeletons(Vt)}
    longest = max(len(s) for s in skels)
    images = {skel(Vt, p)[0] for p in _all_paths(Vt, longest + 3)}
    assert images == skels
