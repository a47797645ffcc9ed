"""Acceptance suite: one test per criterion, with pinned seeds and time limits."""
import json
import random
import time

from seplab.cli import main
from seplab.diophantine import minimal_solutions
from seplab.gadgets import anb2n, anbn, anbn_pa, anbnc, astar_pa, ends_in_dfa
from seplab.monadic import check_certificate, insep_hyperlinear, insep_systems, mondec_qf
from seplab.oracles import (
    bfs_run_search, bounded_word_lang, brute_minimal_solutions, hyperlinear_system, oracle_battery,
    random_det_instance, random_hyperlinear, random_pa, random_system, random_zvass, simk_pair,
)
from seplab.presburger import negate_qf, parse
from seplab.regsep import (
    bi_cancelable_by_automata, bi_cancelable_set, enumerate_skeletons, prepare_pair, regsep,
    regsep_oracle_path, regularity_det_pa, skeleton_transitions, verify_regular_separator_pair,
)
from seplab.semilinear import HyperlinearRep, formula_to_semilinear
from seplab.zvass import emptiness, pa_complement_det, run_check, trim

# time limits in seconds
LIMIT_1, LIMIT_2, LIMIT_3, LIMIT_4 = 1.0, 5.0, 300.0, 120.0
LIMIT_5, LIMIT_6, LIMIT_8 = 120.0, 600.0, 60.0

SEED_3, SEED_4, SEED_5, SEED_6 = 3003, 4004, 5005, 6006
N_3, N_4, N_5, N_6 = 200, 100, 100, 50
MAX_BICANCEL_T = 5
BFS_LEN = 12


def _criterion_6_instances():
    rng = random.Random(SEED_6)
    return [random_det_instance(rng, max_states=3, dim=2) for _ in range(N_6)]


def _cli(argv, tmp_path, name):
    out = tmp_path / f"{name}.json"
    code = main(argv + ["--output", str(out)])
    return code, json.loads(out.read_text())


def _write(tmp_path, name, rep):
    p = tmp_path / name
    p.write_text(json.dumps(rep.to_json()))
    return str(p)


def test_criterion_1_worked_example(tmp_path):
    s1 = _write(tmp_path, "s1.json", HyperlinearRep(3, ((0, 0, 0),), ((1, 1, 0),)))
    s2 = _write(tmp_path, "s2.json", HyperlinearRep(3, ((0, 0, 1),), ((1, 2, 0),)))
    p1 = _write(tmp_path, "p1.json", HyperlinearRep(2, ((0, 0),), ((1, 1),)))
    p2 = _write(tmp_path, "p2.json", HyperlinearRep(2, ((0, 0),), ((1, 2),)))
    t = time.perf_counter()
    code, rep = _cli(["sep-semilinear", "--lhs", s1, "--rhs", s2], tmp_path, "sep")
    assert time.perf_counter() - t < LIMIT_1
    assert code == 0 and rep["separable"] is True
    t = time.perf_counter()
    code, rep = _cli(["sep-semilinear", "--lhs", p1, "--rhs", p2], tmp_path, "insep")
    assert time.perf_counter() - t < LIMIT_1
    assert code == 0 and rep["separable"] is False
    code, cert = _cli(["certify", "--report", str(tmp_path / "insep.json"), "--lhs", p1, "--rhs", p2],
                      tmp_path, "cert")
    assert code == 0 and cert["verified"] is True


def test_criterion_2_monadic_decomposability():
    t = time.perf_counter()
    diag = parse("vars x y. x = y")
    assert mondec_qf(diag) is False
    assert mondec_qf(parse("vars x y. x >= 3 /\\ y <= 1")) is True
    K, L = formula_to_semilinear(diag), formula_to_semilinear(negate_qf(diag))
    for k in range(1, 9):
        assert simk_pair(K, L, k) is not None, f"no ~_{k} pair"
    assert time.perf_counter() - t < LIMIT_2


def test_criterion_3_dual_path_semilinear():
    t = time.perf_counter()
    rng = random.Random(SEED_3)
    disagreements, violations, insep = [], [], 0
    for n in range(N_3):
        d = rng.randint(1, 3)
        R = random_hyperlinear(rng, d, max_bases=2, max_periods=2, max_entry=3)
        S = random_hyperlinear(rng, d, max_bases=2, max_periods=2, max_entry=3)
        vh = insep_hyperlinear(R, S)
        vs = insep_systems(hyperlinear_system(R), hyperlinear_system(S))
        if vh.separable != vs.separable:
            disagreements.append(n)
        if not vh.separable:
            insep += 1
            if not check_certificate(vh.certificate, R, S):
                violations.append((n, "certificate"))
        bat = oracle_battery(R, S, vh.separable, max_k=8, B=4, P=4)
        violations += [(n, v) for v in bat["violations"]]
    assert disagreements == []
    assert violations == []
    assert 0 < insep < N_3
    assert time.perf_counter() - t < LIMIT_3


def test_criterion_4_minimal_solutions_brute_force():
    t = time.perf_counter()
    rng = random.Random(SEED_4)
    bad = []
    for n in range(N_4):
        sys = random_system(rng, max_rows=2, max_cols=4, lo=-3, hi=3)
        if minimal_solutions(sys) != brute_minimal_solutions(sys):
            bad.append(n)
    assert bad == []
    assert time.perf_counter() - t < LIMIT_4


def test_criterion_5_zvass_emptiness():
    t = time.perf_counter()
    rng = random.Random(SEED_5)
    nonempty = 0
    for n in range(N_5):
        V = random_zvass(rng, max_states=3, max_trans=6, dim=rng.randint(1, 2))
        I = [i for i in range(V.dim) if rng.random() < 0.8]
        w = emptiness(V, I)
        if w is not None:
            nonempty += 1
            assert run_check(V, w.run, I), f"instance {n}: witness does not replay"
        else:
            assert bfs_run_search(V, I, BFS_LEN) is None, f"instance {n}: BFS contradicts empty"
    assert 0 < nonempty < N_5
    assert time.perf_counter() - t < LIMIT_5


def test_criterion_6_regular_separability_dual_path():
    t = time.perf_counter()
    V, I1, I2, _ = prepare_pair(anbn(), anb2n())
    assert regsep(V, I1, I2).separable is False
    assert regsep_oracle_path(V, I1, I2).separable is False
    V, I1, I2, _ = prepare_pair(anbn(), anbnc())
    assert regsep(V, I1, I2).separable is True
    assert regsep_oracle_path(V, I1, I2).separable is True
    assert verify_regular_separator_pair(anbnc(), anbn(), ends_in_dfa("c", "abc"))
    disagreements, verdicts = [], set()
    for n, (V, I1, I2) in enumerate(_criterion_6_instances()):
        a = regsep(V, I1, I2).separable
        b = regsep_oracle_path(V, I1, I2).separable
        verdicts.add(a)
        if a != b:
            disagreements.append(n)
    assert disagreements == []
    assert verdicts == {True, False}
    assert time.perf_counter() - t < LIMIT_6


def test_criterion_7_bicancel_appendix_automaton():
    checked, bad = 0, []
    for n, (V, I1, I2) in enumerate(_criterion_6_instances()):
        Vt, _ = trim(V)
        subsets = {tuple(skeleton_transitions(Vt, sk)) for sk in enumerate_skeletons(Vt)}
        subsets.add(tuple(range(len(Vt.transitions))))
        for T in subsets:
            if len(T) > MAX_BICANCEL_T:
                continue
            checked += 1
            if bi_cancelable_set(Vt, I1, I2, T) != bi_cancelable_by_automata(Vt, I1, I2, T):
                bad.append((n, T))
    assert bad == []
    assert checked >= 20


def test_criterion_8_regularity():
    t = time.perf_counter()
    assert regularity_det_pa(anbn_pa()) is False
    assert regularity_det_pa(astar_pa()) is True
    pas = [anbn_pa(), astar_pa()] + [random_pa(random.Random(800 + i)) for i in range(10)]
    for P in pas:
        CC = pa_complement_det(pa_complement_det(P))
        assert bounded_word_lang(CC, maxlen=4) == bounded_word_lang(P, maxlen=4)
    assert time.perf_counter() - t < LIMIT_8
