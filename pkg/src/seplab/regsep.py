"""Regular separability of Z-VASS languages and regularity of deterministic PA.

Pipeline for a deterministic V with acceptance index sets I1, I2: enumerate
skeletons; per skeleton restrict V to the skeleton's states, compute the
bi-cancelable transitions C and test the 4d-dimensional witness automaton W
for emptiness. L(V, I1) and L(V, I2) are inseparable iff some W is nonempty.
"""
from __future__ import annotations

import itertools
from collections import Counter, deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from seplab.diophantine import EqSystem, SupportConstraint, SystemBuilder, feasible
from seplab.monadic import SepVerdict, insep_hyperlinear
from seplab.semilinear import system_to_hyperlinear
from seplab.vecnum import add, check_index_set, restrict, vsum
from seplab.zvass import (
    DeterminismError, ParikhAutomaton, ResourceCapError, Transition, ZVass, determinize_pair, emptiness,
    is_deterministic, pa_complement_det, pa_to_zvass, product, run_path_end, trim,
)

DEFAULT_SKELETON_CAP = 10**5
DEFAULT_CYCLE_CAP = 40
Y = ((1, 3), (2, 3), (1, 4), (2, 4))


# ---------------------------------------------------------------- skeletons


def _path_states(V: ZVass, start, path: Sequence[int]) -> set:
    out = {start}
    out.update(V.transitions[i].dst for i in path)
    return out


def skel_step(V: ZVass, start, prefix: tuple, t: int) -> tuple:
    """One step of the skel map: (new prefix, folded cycle or None)."""
    if not prefix:
        return (t,), None
    target = V.transitions[t].dst
    k = None
    for pos in range(len(prefix), 0, -1):
        if V.transitions[prefix[pos - 1]].dst == target:
            k = pos
            break
    if k is None and start == target:
        # position 0 stands for the path's start state
        k = 0
    if k is None:
        return prefix + (t,), None
    cycle = prefix[k:] + (t,)
    cyc_states = {V.transitions[i].dst for i in cycle}
    if cyc_states <= _path_states(V, start, prefix[:k]):
        return prefix[:k], cycle
    return prefix + (t,), None


def skel(V: ZVass, path: Sequence[int], start=None) -> tuple:
    """(skeleton, Counter of folded cycles) for a path of V from ``start`` (default initial)."""
    start = V.initial if start is None else start
    run_path_end(ZVass(V.states, V.alphabet, V.transitions, start, V.final, V.dim), path)
    prefix: tuple = ()
    counts: Counter = Counter()
    for t in path:
        prefix, cyc = skel_step(V, start, prefix, t)
        if cyc is not None:
            counts[cyc] += 1
    return prefix, counts


@dataclass(frozen=True)
class Skeleton:
    path: tuple
    states: frozenset


def enumerate_skeletons(V: ZVass, cap: int = DEFAULT_SKELETON_CAP) -> list:
    """All skeletons of V (images of skel over initial -> final paths), sorted by (length, path)."""
    out_of: dict = {}
    for i, t in enumerate(V.transitions):
        out_of.setdefault(t.src, []).append(i)
    ends = {}

    def end(prefix):
        return V.transitions[prefix[-1]].dst if prefix else V.initial

    seen = {()}
    queue = deque([()])
    while queue:
        prefix = queue.popleft()
        q = end(prefix)
        if q == V.final:
            ends[prefix] = True
        for t in out_of.get(q, ()):
            nxt, _ = skel_step(V, V.initial, prefix, t)
            if nxt not in seen:
                seen.add(nxt)
                if len(seen) > cap:
                    raise ResourceCapError(f"more than {cap} skeleton prefixes")
                queue.append(nxt)
    skels = [Skeleton(p, frozenset(_path_states(V, V.initial, p))) for p in ends]
    return sorted(skels, key=lambda s: (len(s.path), s.path))


def skeleton_transitions(V: ZVass, sk: Skeleton) -> list:
    """Indices of transitions with both endpoints among the skeleton's states."""
    return [i for i, t in enumerate(V.transitions) if t.src in sk.states and t.dst in sk.states]


# ---------------------------------------------------------------- flows and bi-cancelability


def _flow_system(V: ZVass, D: Sequence[int], I: Iterable[int], rhs_eff: Optional[Sequence[int]] = None):
    """Flows over the transitions D with Delta_I(f) = -rhs_eff (default 0)."""
    sb = SystemBuilder()
    x = sb.block(len(D))
    states = sorted({V.transitions[i].src for i in D} | {V.transitions[i].dst for i in D}, key=str)
    for q in states:
        row: dict = {}
        for k, i in zip(x, D):
            t = V.transitions[i]
            if t.dst == q:
                row[k] = row.get(k, 0) + 1
            if t.src == q:
                row[k] = row.get(k, 0) - 1
        sb.add_row({k: a for k, a in row.items() if a}, 0)
    for c in sorted(I):
        b = 0 if rhs_eff is None else -rhs_eff[c]
        sb.add_row({k: V.transitions[i].effect[c] for k, i in zip(x, D) if V.transitions[i].effect[c]}, b)
    return sb.system()


def maxflowsupp(V: ZVass, I: Iterable[int], D: Sequence[int]) -> frozenset:
    """Union of supports of flows inside D whose effect vanishes on I."""
    D = sorted(D)
    if not D:
        return frozenset()
    sys = _flow_system(V, D, I)
    covered: set = set()
    for k, t in enumerate(D):
        if t in covered:
            continue
        w = feasible(sys, SupportConstraint(must_be_positive=frozenset([k])))
        if w is not None:
            covered |= {D[j] for j, c in enumerate(w) if c}
    return frozenset(covered)


def bi_cancelable_set(V: ZVass, I1: Iterable[int], I2: Iterable[int],
                      allowed: Optional[Iterable[int]] = None) -> frozenset:
    """Greatest fixpoint of D -> maxflowsupp_I1(D) & maxflowsupp_I2(D)."""
    I1, I2 = list(I1), list(I2)
    D = frozenset(range(len(V.transitions)) if allowed is None else allowed)
    while True:
        nD = maxflowsupp(V, I1, D) & maxflowsupp(V, I2, D)
        if nD == D:
            return D
        D = nD


def bicancel_automaton(V: ZVass, I1: Iterable[int], I2: Iterable[int], U: Sequence[int]) -> ZVass:
    """The 2(d+|U|)-dimensional Z-VASS that is nonempty iff two cancelling flows have support exactly U.

    Coordinates: counts over U (side 1), effect (side 1), counts over U
    (side 2), effect (side 2). The support check subtracts one from every
    count, the resets subtract further occurrences.
    """
    d, n = V.dim, len(U)
    I1, I2 = set(I1), set(I2)
    dim = 2 * (d + n)
    zero = (0,) * dim
    states = [0, 1] + [(p, q, s) for p in V.states for q in V.states for s in (1, 2)]
    ts = []

    def vec(parts):
        v = [0] * dim
        for off, vals in parts:
            for j, a in enumerate(vals):
                v[off + j] += a
        return tuple(v)

    for q in V.states:
        for side in (1, 2):
            ts.append(Transition(0, None, zero, (q, q, side)))
            ts.append(Transition((q, q, side), None, zero, 0))
    for k, i in enumerate(U):
        t = V.transitions[i]
        e = [0] * n
        e[k] = 1
        eff1 = vec([(0, e), (n, restrict(t.effect, I1))])
        eff2 = vec([(n + d, e), (2 * n + d, restrict(t.effect, I2))])
        for p in V.states:
            ts.append(Transition((p, t.src, 1), None, eff1, (p, t.dst, 1)))
            ts.append(Transition((p, t.src, 2), None, eff2, (p, t.dst, 2)))
    ts.append(Transition(0, None, vec([(0, [-1] * n), (n + d, [-1] * n)]), 1))
    for k in range(n):
        e = [0] * n
        e[k] = -1
        ts.append(Transition(1, None, vec([(0, e)]), 1))
        ts.append(Transition(1, None, vec([(n + d, e)]), 1))
    return ZVass(tuple(states), (), tuple(ts), 0, 1, dim)


def bi_cancelable_by_automata(V: ZVass, I1: Iterable[int], I2: Iterable[int],
                              allowed: Optional[Iterable[int]] = None, max_transitions: int = 8) -> frozenset:
    """Oracle: t is bi-cancelable iff some U containing t has a nonempty support automaton."""
    T = sorted(range(len(V.transitions)) if allowed is None else allowed)
    if len(T) > max_transitions:
        raise ResourceCapError(f"{len(T)} transitions exceed the subset-enumeration cap")
    out: set = set()
    I1, I2 = list(I1), list(I2)
    for r in range(1, len(T) + 1):
        for U in itertools.combinations(T, r):
            if set(U) <= out:
                continue
            W = bicancel_automaton(V, I1, I2, U)
            if emptiness(W, range(W.dim)) is not None:
                out |= set(U)
    return frozenset(out)


# ---------------------------------------------------------------- witness automaton


@dataclass
class WitnessAutomaton:
    zvass: ZVass
    meta: list
    skeleton: Skeleton
    nQ: int


def _blocks(x: Sequence[int], X: Sequence[int], I1: set, I2: set) -> tuple:
    d = len(x)
    out = []
    for k, Ik in zip((1, 2, 3, 4), (I1, I2, I2, I1)):
        out.extend(x[i] if (k in X and i in Ik) else 0 for i in range(d))
    return tuple(out)


def build_W(V: ZVass, sk: Skeleton, C: Iterable[int], I1: Iterable[int], I2: Iterable[int]) -> WitnessAutomaton:
    """The 4d-dimensional witness automaton of a skeleton.

    States: 0..l for the skeleton positions and (i, q, j, X) for a cycle
    opened at position i, currently in q with budget j in [0, |Q|], feeding
    the counter blocks in X. |Q| is the number of skeleton states.
    """
    I1, I2, C = set(I1), set(I2), set(C)
    rho = sk.path
    if rho:
        run_path_end(V, rho)
    ell = len(rho)
    pos_state = [V.initial] + [V.transitions[i].dst for i in rho]
    Qr = sorted(sk.states, key=str)
    nQ = len(Qr)
    Tr = skeleton_transitions(V, sk)
    d = V.dim
    zero = (0,) * (4 * d)
    states = list(range(ell + 1))
    states += [(i, q, j, X) for i in range(ell + 1) for q in Qr for j in range(nQ + 1) for X in Y]
    ts, meta = [], []
    for i, t in enumerate(rho, start=1):
        x = V.transitions[t].effect
        eff = tuple(restrict(x, I1)) + (0,) * d + tuple(restrict(x, I2)) + (0,) * d
        ts.append(Transition(i - 1, f"t{t}", eff, i))
        meta.append(("T1", i - 1, None, t))
    for i in range(ell + 1):
        for X in Y:
            ts.append(Transition(i, None, zero, (i, pos_state[i], nQ, X)))
            meta.append(("T2", i, X, None))
    for i in range(ell + 1):
        for X in Y:
            for t in Tr:
                if X != (1, 3) and t not in C:
                    continue
                tr = V.transitions[t]
                eff = _blocks(tr.effect, X, I1, I2)
                for s in range(1, nQ + 1):
                    ts.append(Transition((i, tr.src, s, X), f"t{t}", eff, (i, tr.dst, s - 1, X)))
                    meta.append(("T3", i, X, t))
                    if tr.dst == pos_state[i]:
                        ts.append(Transition((i, tr.src, s, X), f"t{t}", eff, i))
                        meta.append(("T4", i, X, t))
    W = ZVass(tuple(states), (), tuple(ts), 0, ell, 4 * d)
    return WitnessAutomaton(W, meta, sk, nQ)


def decode_W_run(W: WitnessAutomaton, run: Sequence[int]) -> list:
    """The simulated cycles of a W run as (cycle, X) pairs, in run order."""
    cycles = []
    cur: Optional[list] = None
    X = None
    for idx in run:
        kind, _, x, t = W.meta[idx]
        if kind == "T2":
            cur, X = [], x
        elif kind == "T3":
            cur.append(t)
        elif kind == "T4":
            cur.append(t)
            cycles.append((tuple(cur), X))
            cur = None
    return cycles


@dataclass(frozen=True)
class RegsepCertificate:
    """Skeleton plus decoded cycle multisets u1..u4 (over original transition indices)."""

    skeleton: tuple
    cycles: tuple

    def multisets(self) -> tuple:
        us = [Counter(), Counter(), Counter(), Counter()]
        for c, X in self.cycles:
            for k in X:
                us[k - 1][tuple(c)] += 1
        return tuple(us)

    def to_json(self) -> dict:
        return {"kind": "regsep", "skeleton": list(self.skeleton),
                "cycles": [{"cycle": list(c), "X": list(X)} for c, X in self.cycles]}

    @classmethod
    def from_json(cls, data: dict) -> "RegsepCertificate":
        return cls(tuple(data["skeleton"]), tuple((tuple(c["cycle"]), tuple(c["X"])) for c in data["cycles"]))


def _delta(V: ZVass, u: Mapping[tuple, int], I: set) -> tuple:
    acc = [0] * V.dim
    for c, n in u.items():
        for t in c:
            for i in I:
                acc[i] += n * V.transitions[t].effect[i]
    return tuple(acc)


def explain_regsep_certificate(V: ZVass, I1: Iterable[int], I2: Iterable[int], cert: RegsepCertificate) -> list:
    fails: list = []
    I1, I2 = set(I1), set(I2)
    try:
        if run_path_end(V, cert.skeleton) != V.final:
            fails.append("skeleton does not end in the final state")
        rho, folded = skel(V, cert.skeleton)
        if rho != tuple(cert.skeleton) or folded:
            fails.append("path is not a skeleton")
        sk = Skeleton(tuple(cert.skeleton), frozenset(_path_states(V, V.initial, cert.skeleton)))
        nQ = len(sk.states)
        for c, X in cert.cycles:
            if tuple(X) not in Y:
                fails.append(f"bad block pair {X}")
            if not c or len(c) > nQ:
                fails.append(f"cycle {c} is empty or longer than {nQ}")
                continue
            start = V.transitions[c[0]].src
            sub = ZVass(V.states, V.alphabet, V.transitions, start, start, V.dim)
            if run_path_end(sub, c) != start:
                fails.append(f"cycle {c} is not closed")
            if not _path_states(V, start, c) <= sk.states:
                fails.append(f"cycle {c} leaves the skeleton states")
        if fails:
            return fails
        u1, u2, u3, u4 = cert.multisets()
        if u1 + u2 != u3 + u4:
            fails.append("u1 + u2 != u3 + u4")
        rho_eff = vsum((V.transitions[t].effect for t in cert.skeleton), V.dim)
        if any(add(restrict(rho_eff, I1), _delta(V, u1, I1))):
            fails.append("Delta_I1(rho) + Delta_I1(u1) != 0")
        if any(_delta(V, u2, I2)):
            fails.append("Delta_I2(u2) != 0")
        if any(add(restrict(rho_eff, I2), _delta(V, u3, I2))):
            fails.append("Delta_I2(rho) + Delta_I2(u3) != 0")
        if any(_delta(V, u4, I1)):
            fails.append("Delta_I1(u4) != 0")
        C = bi_cancelable_set(V, I1, I2, skeleton_transitions(V, sk))
        for u, name in ((u2, "u2"), (u4, "u4")):
            if any(t not in C for c in u for t in c):
                fails.append(f"{name} uses a transition that is not bi-cancelable")
    except (ValueError, IndexError, TypeError) as e:
        fails.append(f"malformed certificate: {e}")
    return fails


# ---------------------------------------------------------------- deciders


def _m_nonempty(V: ZVass, sk: Skeleton, Tr: Sequence[int], I: Iterable[int]) -> bool:
    """M(I) nonempty iff some flow over the skeleton's transitions cancels Delta_I(rho)."""
    rho_eff = vsum((V.transitions[t].effect for t in sk.path), V.dim)
    I = list(I)
    if not Tr:
        return not any(rho_eff[i] for i in I)
    return feasible(_flow_system(V, Tr, I, rho_eff)) is not None


def block_flow_system(V: ZVass, sk: Skeleton, Tr: Sequence[int], C: Iterable[int],
                      I1: Iterable[int], I2: Iterable[int]) -> EqSystem:
    """Four circulations g13, g23, g14, g24 whose sums satisfy the witness equations.

    Every simple cycle of the restricted automaton visits a skeleton state,
    so W is nonempty iff this system is feasible (W only adds the cycle
    decomposition, which circulations always have).
    """
    C = set(C)
    rho_eff = vsum((V.transitions[t].effect for t in sk.path), V.dim)
    sb = SystemBuilder()
    blocks = {X: sb.block(len(Tr)) for X in Y}
    states = sorted(sk.states, key=str)
    for X, cols in blocks.items():
        for q in states:
            row: dict = {}
            for k, i in zip(cols, Tr):
                t = V.transitions[i]
                row[k] = row.get(k, 0) + (t.dst == q) - (t.src == q)
            sb.add_row({k: a for k, a in row.items() if a}, 0)
        if X != (1, 3):
            for k, i in zip(cols, Tr):
                if i not in C:
                    sb.add_row({k: 1}, 0)
    for block, I, with_rho in ((1, I1, True), (2, I2, False), (3, I2, True), (4, I1, False)):
        for c in sorted(I):
            row = {}
            for X, cols in blocks.items():
                if block in X:
                    for k, i in zip(cols, Tr):
                        if V.transitions[i].effect[c]:
                            row[k] = V.transitions[i].effect[c]
            sb.add_row(row, -rho_eff[c] if with_rho else 0)
    return sb.system()


def _check_input(V: ZVass, I1, I2) -> tuple:
    if not is_deterministic(V):
        raise DeterminismError("regsep needs a deterministic Z-VASS (use determinize_pair and product)")
    return sorted(check_index_set(I1, V.dim)), sorted(check_index_set(I2, V.dim))


def _skeleton_verdict(V: ZVass, sk: Skeleton, I1, I2, Ccache: dict, use_w: bool = False) -> Optional[list]:
    Tr = skeleton_transitions(V, sk)
    if not _m_nonempty(V, sk, Tr, I1) or not _m_nonempty(V, sk, Tr, I2):
        return None
    if sk.states not in Ccache:
        Ccache[sk.states] = bi_cancelable_set(V, I1, I2, Tr)
    C = Ccache[sk.states]
    if not use_w and feasible(block_flow_system(V, sk, Tr, C, I1, I2)) is None:
        return None
    W = build_W(V, sk, C, I1, I2)
    w = emptiness(W.zvass, range(W.zvass.dim))
    if w is None:
        if not use_w:
            raise AssertionError("circulation system feasible but the witness automaton is empty")
        return None
    return decode_W_run(W, w.run)


def regsep(V: ZVass, I1: Iterable[int], I2: Iterable[int], cap: int = DEFAULT_SKELETON_CAP,
           workers: int = 1, always_build_w: bool = False) -> SepVerdict:
    """Regular separability of L(V, I1) and L(V, I2) for deterministic V.

    W is only built for skeletons whose circulation system is feasible; it
    then yields the certificate. ``always_build_w`` skips that prefilter and
    decides every skeleton by emptiness of W alone.
    """
    I1, I2 = _check_input(V, I1, I2)
    Vt, keep = trim(V)
    if Vt.final not in set(Vt.states) or (Vt.initial != Vt.final and not Vt.transitions):
        return SepVerdict(True, details={"skeletons": 0})
    skels = enumerate_skeletons(Vt, cap)
    Ccache: dict = {}

    def work(sk):
        return _skeleton_verdict(Vt, sk, I1, I2, Ccache, always_build_w)

    results: list = []
    if workers > 1:
        # chunks in canonical order keep the reported skeleton independent of the pool size
        with ThreadPoolExecutor(max_workers=workers) as ex:
            for start in range(0, len(skels), workers):
                results.extend(ex.map(work, skels[start:start + workers]))
                if any(r is not None for r in results[start:]):
                    break
    else:
        for sk in skels:
            results.append(work(sk))
            if results[-1] is not None:
                break
    for n, (sk, cycles) in enumerate(zip(skels, results)):
        if cycles is not None:
            cert = RegsepCertificate(tuple(keep[t] for t in sk.path),
                                     tuple((tuple(keep[t] for t in c), X) for c, X in cycles))
            return SepVerdict(False, certificate=cert, details={"skeletons": len(skels), "skeleton_index": n})
    return SepVerdict(True, details={"skeletons": len(skels)})


def short_cycles(V: ZVass, states: Iterable, transitions: Sequence[int], max_len: int) -> list:
    """All closed walks of length 1..max_len over the given transitions (every rotation counted)."""
    out_of: dict = {}
    for i in transitions:
        out_of.setdefault(V.transitions[i].src, []).append(i)
    out = []
    for q in sorted(states, key=str):
        stack = [(q, ())]
        while stack:
            cur, path = stack.pop()
            for t in out_of.get(cur, ()):
                npath = path + (t,)
                nxt = V.transitions[t].dst
                if nxt == q:
                    out.append(npath)
                if len(npath) < max_len:
                    stack.append((nxt, npath))
    return sorted(set(out), key=lambda c: (len(c), c))


def cycle_types(V: ZVass, cycles: Sequence[tuple]) -> list:
    """Cycles grouped by transition multiset; one representative effect vector per group."""
    groups: dict = {}
    for c in cycles:
        key = tuple(sorted(Counter(c).items()))
        groups.setdefault(key, c)
    return [groups[k] for k in sorted(groups)]


def cycle_space_system(V: ZVass, rho: Sequence[int], cycles: Sequence[tuple], I: Iterable[int]) -> EqSystem:
    """M(I) = {u in N^S : Delta_I(rho) + Delta_I(u) = 0} as an equation system."""
    rho_eff = vsum((V.transitions[t].effect for t in rho), V.dim)
    effs = [vsum((V.transitions[t].effect for t in c), V.dim) for c in cycles]
    matrix, rhs = [], []
    for i in sorted(I):
        matrix.append([e[i] for e in effs])
        rhs.append(-rho_eff[i])
    return EqSystem(matrix, rhs, len(cycles), len(cycles))


def regsep_oracle_path(V: ZVass, I1: Iterable[int], I2: Iterable[int], cap: int = DEFAULT_SKELETON_CAP,
                       cycle_cap: int = DEFAULT_CYCLE_CAP) -> SepVerdict:
    """Independent route: per skeleton build M(I1), M(I2) over cycle counts and decide them directly.

    Cycles with the same transition multiset are merged into one coordinate
    (membership in M(I) only depends on that multiset).
    """
    I1, I2 = _check_input(V, I1, I2)
    Vt, keep = trim(V)
    if Vt.final not in set(Vt.states) or (Vt.initial != Vt.final and not Vt.transitions):
        return SepVerdict(True, details={"skeletons": 0})
    skels = enumerate_skeletons(Vt, cap)
    for n, sk in enumerate(skels):
        Tr = skeleton_transitions(Vt, sk)
        cyc = cycle_types(Vt, short_cycles(Vt, sk.states, Tr, len(sk.states)))
        if len(cyc) > cycle_cap:
            raise ResourceCapError(f"{len(cyc)} cycle types exceed the oracle cap {cycle_cap}")
        M1 = system_to_hyperlinear(cycle_space_system(Vt, sk.path, cyc, I1))
        M2 = system_to_hyperlinear(cycle_space_system(Vt, sk.path, cyc, I2))
        v = insep_hyperlinear(M1, M2)
        if not v.separable:
            v.details.update({"skeleton_index": n, "skeleton": [keep[t] for t in sk.path],
                              "cycles": [[keep[t] for t in c] for c in cyc]})
            return v
    return SepVerdict(True, details={"skeletons": len(skels)})


# ---------------------------------------------------------------- pairs, PA, separators


def prepare_pair(V1: ZVass, V2: ZVass) -> tuple:
    """(V, I1, I2, determinized pair) ready for regsep."""
    dp = determinize_pair(V1, V2)
    V, I1, I2 = product(dp.w1, dp.w2)
    return V, I1, I2, dp


def regsep_pair(V1: ZVass, V2: ZVass, **kw) -> SepVerdict:
    V, I1, I2, _ = prepare_pair(V1, V2)
    return regsep(V, I1, I2, **kw)


def regularity_det_pa(P: ParikhAutomaton, **kw) -> bool:
    return regularity_verdict(P, **kw).separable


def regularity_verdict(P: ParikhAutomaton, **kw) -> SepVerdict:
    if not P.deterministic:
        raise DeterminismError("regularity needs a deterministic Parikh automaton")
    V1, _ = pa_to_zvass(P)
    V2, _ = pa_to_zvass(pa_complement_det(P))
    return regsep_pair(V1, V2, **kw)


@dataclass(frozen=True)
class DFA:
    states: tuple
    initial: object
    accepting: frozenset
    delta: dict

    def step(self, q, a):
        return self.delta.get(q, {}).get(a)

    def accepts(self, word: Sequence[str]) -> bool:
        q = self.initial
        for a in word:
            q = self.step(q, a)
            if q is None:
                return False
        return q in self.accepting

    def check_total(self, alphabet: Iterable[str]) -> None:
        for q in self.states:
            for a in alphabet:
                if self.step(q, a) is None:
                    raise ValueError(f"partial DFA: no move from {q!r} on {a!r}")

    @classmethod
    def from_json(cls, data: dict) -> "DFA":
        return cls(tuple(data["states"]), data["initial"], frozenset(data["accepting"]),
                   {q: dict(m) for q, m in data["delta"].items()})


def _with_dfa(V: ZVass, R: DFA, accepting: bool) -> ZVass:
    """V x R with a fresh final state entered from (f, r) for r in (or outside) R's accepting set."""
    states = [(q, r) for q in V.states for r in R.states]
    ts = []
    for t in V.transitions:
        for r in R.states:
            r2 = r if t.label is None else R.step(r, t.label)
            ts.append(Transition((t.src, r), t.label, t.effect, (t.dst, r2)))
    fin = "#accept"
    states.append(fin)
    for r in R.states:
        if (r in R.accepting) == accepting:
            ts.append(Transition((V.final, r), None, (0,) * V.dim, fin))
    return ZVass(tuple(states), V.alphabet, tuple(ts), (V.initial, R.initial), fin, V.dim)


def verify_regular_separator(V: ZVass, I1: Iterable[int], I2: Iterable[int], R: DFA) -> bool:
    """L(V, I1) inside L(R) and L(R) disjoint from L(V, I2)."""
    R.check_total(V.alphabet)
    if emptiness(_with_dfa(V, R, accepting=False), I1) is not None:
        return False
    return emptiness(_with_dfa(V, R, accepting=True), I2) is None


def verify_regular_separator_pair(V1: ZVass, V2: ZVass, R: DFA) -> bool:
    """L(V1) inside L(R) and L(R) disjoint from L(V2), all counters accepting at zero."""
    R.check_total(set(V1.alphabet) | set(V2.alphabet))
    if emptiness(_with_dfa(V1, R, accepting=False), range(V1.dim)) is not None:
        return False
    return emptiness(_with_dfa(V2, R, accepting=True), range(V2.dim)) is None
