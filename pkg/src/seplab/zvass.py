"""Z-VASS and Parikh automata: runs, emptiness, determinization, products."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from seplab.diophantine import SupportConstraint, SystemBuilder, feasible
from seplab.presburger import TRUE, Formula, is_quantifier_free, negate_qf, parse
from seplab.semilinear import SemilinearRep, qf_formula_to_semilinear, rep_from_json
from seplab.vecnum import DimensionError, check_index_set, int_vec, neg, restrict, vsum


class MalformedRunError(ValueError):
    """A transition sequence that is not a path from the initial state."""


class ResourceCapError(RuntimeError):
    """A configured search or enumeration cap was exceeded; no verdict is given."""


class DeterminismError(ValueError):
    pass


@dataclass(frozen=True)
class Transition:
    src: object
    label: Optional[str]
    effect: tuple
    dst: object

    def __post_init__(self):
        object.__setattr__(self, "effect", int_vec(self.effect))


@dataclass(frozen=True)
class ZVass:
    states: tuple
    alphabet: tuple
    transitions: tuple
    initial: object
    final: object
    dim: int

    def __post_init__(self):
        states = tuple(self.states)
        sset = set(states)
        if len(sset) != len(states):
            raise ValueError("duplicate state names")
        if self.initial not in sset or self.final not in sset:
            raise ValueError("initial and final must be states")
        ts = tuple(self.transitions)
        alph = set(self.alphabet)
        for t in ts:
            if t.src not in sset or t.dst not in sset:
                raise ValueError(f"transition {t} uses an unknown state")
            if len(t.effect) != self.dim:
                raise DimensionError(f"transition effect {t.effect} is not of dimension {self.dim}")
            if t.label is not None:
                alph.add(t.label)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "transitions", ts)
        object.__setattr__(self, "alphabet", tuple(sorted(alph, key=str)))

    def to_json(self) -> dict:
        name = _state_namer(self.states)
        return {
            "dim": self.dim, "states": [name[q] for q in self.states],
            "alphabet": list(self.alphabet),
            "initial": name[self.initial], "final": name[self.final],
            "transitions": [{"from": name[t.src], "label": t.label, "effect": list(t.effect),
                             "to": name[t.dst]} for t in self.transitions],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ZVass":
        dim = int(data["dim"])
        ts = tuple(Transition(t["from"], t.get("label"), tuple(t["effect"]), t["to"])
                   for t in data["transitions"])
        return cls(tuple(data["states"]), tuple(data.get("alphabet", ())), ts,
                   data["initial"], data["final"], dim)


def _state_namer(states) -> dict:
    return {q: q if isinstance(q, str) else str(q) for q in states}


# ---------------------------------------------------------------- runs


def run_path_end(V: ZVass, run: Sequence[int]) -> object:
    q = V.initial
    for pos, idx in enumerate(run):
        if not 0 <= idx < len(V.transitions):
            raise MalformedRunError(f"step {pos}: no transition with index {idx}")
        t = V.transitions[idx]
        if t.src != q:
            raise MalformedRunError(f"step {pos}: transition {idx} leaves {t.src!r}, run is in {q!r}")
        q = t.dst
    return q


def run_effect(V: ZVass, run: Sequence[int]) -> tuple:
    return vsum((V.transitions[i].effect for i in run), V.dim)


def run_word(V: ZVass, run: Sequence[int]) -> tuple:
    return tuple(V.transitions[i].label for i in run if V.transitions[i].label is not None)


def run_check(V: ZVass, run: Sequence[int], I: Iterable[int]) -> bool:
    """True iff the run goes initial -> final with effect zero on I.

    Raises MalformedRunError when the sequence is not a path from the initial state.
    """
    I = check_index_set(I, V.dim)
    end = run_path_end(V, run)
    return end == V.final and not any(restrict(run_effect(V, run), I))


# ---------------------------------------------------------------- emptiness


@dataclass(frozen=True)
class EmptinessWitness:
    counts: tuple
    run: tuple


def useful_states(V: ZVass, allowed: Optional[set] = None) -> set:
    """States on some path initial -> final (through allowed transitions)."""
    ts = [t for i, t in enumerate(V.transitions) if allowed is None or i in allowed]
    fwd, bwd = {V.initial}, {V.final}
    changed = True
    while changed:
        changed = False
        for t in ts:
            if t.src in fwd and t.dst not in fwd:
                fwd.add(t.dst)
                changed = True
            if t.dst in bwd and t.src not in bwd:
                bwd.add(t.src)
                changed = True
    return fwd & bwd


def _reached(V: ZVass, used: Sequence[int]) -> set:
    out_of: dict = {}
    for i in used:
        t = V.transitions[i]
        out_of.setdefault(t.src, []).append(t.dst)
    seen = {V.initial}
    stack = [V.initial]
    while stack:
        q = stack.pop()
        for r in out_of.get(q, ()):
            if r not in seen:
                seen.add(r)
                stack.append(r)
    return seen


def euler_run(V: ZVass, counts: Sequence[int]) -> tuple:
    """Hierholzer: a path from the initial state using each transition counts[i] times."""
    out: dict = {}
    for i, c in enumerate(counts):
        if c:
            out.setdefault(V.transitions[i].src, []).append(i)
    remaining = list(counts)
    ptr = {q: 0 for q in out}
    stack = [(V.initial, None)]
    path = []
    while stack:
        q, t_in = stack[-1]
        lst = out.get(q, [])
        k = ptr.get(q, 0)
        while k < len(lst) and remaining[lst[k]] == 0:
            k += 1
        if q in ptr:
            ptr[q] = k
        if k < len(lst):
            t = lst[k]
            remaining[t] -= 1
            stack.append((V.transitions[t].dst, t))
        else:
            stack.pop()
            if t_in is not None:
                path.append(t_in)
    return tuple(reversed(path))


def _flow_system(V: ZVass, tidx: Sequence[int], states: Sequence, I: Sequence[int]):
    sb = SystemBuilder()
    x = sb.block(len(tidx))
    for q in states:
        row: dict = {}
        for k, i in zip(x, tidx):
            t = V.transitions[i]
            if t.dst == q:
                row[k] = row.get(k, 0) + 1
            if t.src == q:
                row[k] = row.get(k, 0) - 1
        rhs = (1 if q == V.final else 0) - (1 if q == V.initial else 0)
        sb.add_row({k: a for k, a in row.items() if a}, rhs)
    for i in I:
        sb.add_row({k: V.transitions[t].effect[i] for k, t in zip(x, tidx) if V.transitions[t].effect[i]}, 0)
    return sb.system()


def emptiness(V: ZVass, I: Iterable[int], max_nodes: int = 100000) -> Optional[EmptinessWitness]:
    """A witness of L(V, I) nonempty, or None when empty.

    Flow ILP plus connectivity: when the support of the relaxation leaves a
    component K unreachable, branch on either zeroing every transition that
    touches K or forcing one transition entering K (zeroing the earlier ones).
    Each branch adds a constraint on a fresh transition, so the search is finite.
    """
    I = sorted(check_index_set(I, V.dim))
    nT = len(V.transitions)
    if V.initial == V.final:
        return EmptinessWitness((0,) * nT, ())
    useful = useful_states(V)
    tidx = [i for i, t in enumerate(V.transitions) if t.src in useful and t.dst in useful]
    if V.final not in useful:
        return None
    states = sorted(useful, key=str)
    sys = _flow_system(V, tidx, states, I)
    local = {i: k for k, i in enumerate(tidx)}
    stack = [(frozenset(), frozenset())]
    nodes = 0
    while stack:
        nodes += 1
        if nodes > max_nodes:
            raise ResourceCapError("emptiness branching budget exhausted")
        zero, pos = stack.pop()
        y = feasible(sys, SupportConstraint(frozenset(local[i] for i in zero), frozenset(local[i] for i in pos)))
        if y is None:
            continue
        counts = [0] * nT
        for k, i in enumerate(tidx):
            counts[i] = y[k]
        used = [i for i in tidx if counts[i]]
        reached = _reached(V, used)
        touched = {V.transitions[i].src for i in used} | {V.transitions[i].dst for i in used}
        K = touched - reached
        if not K:
            run = euler_run(V, counts)
            assert run_check(V, run, I), "emptiness witness failed to replay"
            return EmptinessWitness(tuple(counts), run)
        # pick one component of the unreached part (weakly connected within used transitions)
        comp = _component(V, used, K)
        touching = frozenset(i for i in tidx if V.transitions[i].src in comp or V.transitions[i].dst in comp)
        entering = [i for i in tidx if V.transitions[i].dst in comp and V.transitions[i].src not in comp
                    and i not in zero]
        children = []
        if not touching & pos:
            children.append((zero | touching, pos))
        for n, t in enumerate(entering):
            children.append((zero | frozenset(entering[:n]), pos | {t}))
        stack.extend(reversed(children))
    return None


def _component(V: ZVass, used: Sequence[int], K: set) -> set:
    adj: dict = {}
    for i in used:
        t = V.transitions[i]
        if t.src in K and t.dst in K:
            adj.setdefault(t.src, set()).add(t.dst)
            adj.setdefault(t.dst, set()).add(t.src)
    start = min(K, key=str)
    comp = {start}
    stack = [start]
    while stack:
        q = stack.pop()
        for r in adj.get(q, ()):
            if r not in comp:
                comp.add(r)
                stack.append(r)
    return comp


# ---------------------------------------------------------------- determinism, products


def is_deterministic(V) -> bool:
    seen = set()
    for t in V.transitions:
        if t.label is None:
            return False
        key = (t.src, t.label)
        if key in seen:
            return False
        seen.add(key)
    return True


@dataclass(frozen=True)
class DeterminizedPair:
    w1: ZVass
    w2: ZVass
    h: dict
    h1: dict
    h2: dict
    v1_relabeled: ZVass
    v2_preimage: ZVass

    def image(self, word: Sequence[str]) -> tuple:
        return tuple(self.h[a] for a in word if self.h[a] is not None)


def _relabel(V: ZVass, prefix: str) -> tuple:
    letters = tuple(f"{prefix}{i}" for i in range(len(V.transitions)))
    ts = tuple(Transition(t.src, letters[i], t.effect, t.dst) for i, t in enumerate(V.transitions))
    table = {letters[i]: t.label for i, t in enumerate(V.transitions)}
    return ZVass(V.states, letters, ts, V.initial, V.final, V.dim), table


def _preimage(V: ZVass, table: Mapping[str, Optional[str]], letters: Sequence[str]) -> ZVass:
    """h^{-1}(V): letters mapped to eps become zero loops; V's own eps moves stay eps."""
    zero = (0,) * V.dim
    ts = []
    by_label: dict = {}
    for t in V.transitions:
        by_label.setdefault(t.label, []).append(t)
    for x in letters:
        img = table[x]
        if img is None:
            ts.extend(Transition(p, x, zero, p) for p in V.states)
        else:
            ts.extend(Transition(t.src, x, t.effect, t.dst) for t in by_label.get(img, ()))
    ts.extend(by_label.get(None, ()))
    return ZVass(V.states, tuple(letters), tuple(ts), V.initial, V.final, V.dim)


def determinize_pair(V1: ZVass, V2: ZVass) -> DeterminizedPair:
    v1r, h1 = _relabel(V1, "t")
    v2p = _preimage(V2, h1, v1r.alphabet)
    w2, h2 = _relabel(v2p, "s")
    w1 = _preimage(v1r, h2, w2.alphabet)
    assert is_deterministic(w1) and is_deterministic(w2)
    h = {s: (h1[h2[s]] if h2[s] is not None else None) for s in w2.alphabet}
    return DeterminizedPair(w1, w2, h, h1, h2, v1r, v2p)


def product(V1: ZVass, V2: ZVass) -> tuple:
    """(V, I1, I2): synchronous product of deterministic automata, effects stacked."""
    if not is_deterministic(V1) or not is_deterministic(V2):
        raise DeterminismError("product needs deterministic inputs")
    d1, d2 = V1.dim, V2.dim
    states = tuple((p, q) for p in V1.states for q in V2.states)
    by_label: dict = {}
    for t in V2.transitions:
        by_label.setdefault(t.label, []).append(t)
    ts = []
    for t1 in V1.transitions:
        for t2 in by_label.get(t1.label, ()):
            ts.append(Transition((t1.src, t2.src), t1.label, t1.effect + t2.effect, (t1.dst, t2.dst)))
    alphabet = tuple(sorted(set(V1.alphabet) | set(V2.alphabet), key=str))
    V = ZVass(states, alphabet, tuple(ts), (V1.initial, V2.initial), (V1.final, V2.final), d1 + d2)
    return V, frozenset(range(d1)), frozenset(range(d1, d1 + d2))


def trim(V: ZVass) -> tuple:
    """(V', index map) keeping states on initial -> final paths; V' transitions map to V indices."""
    useful = useful_states(V)
    keep = [i for i, t in enumerate(V.transitions) if t.src in useful and t.dst in useful]
    if V.initial not in useful:
        useful = {V.initial, V.final}
        keep = []
    states = tuple(q for q in V.states if q in useful)
    ts = tuple(V.transitions[i] for i in keep)
    return ZVass(states, V.alphabet, ts, V.initial, V.final, V.dim), tuple(keep)


# ---------------------------------------------------------------- Parikh automata


@dataclass(frozen=True, eq=False)
class ParikhAutomaton:
    """Counters in N^dim; a word is accepted in state q when the counters lie in targets[q].

    Targets are SemilinearRep or quantifier-free Formula values; states with
    no target accept nothing.
    """

    states: tuple
    alphabet: tuple
    transitions: tuple
    initial: object
    targets: dict
    dim: int
    deterministic: bool = False
    _reps: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        sset = set(self.states)
        if self.initial not in sset:
            raise ValueError("initial state unknown")
        alph = set(self.alphabet)
        for t in self.transitions:
            if t.src not in sset or t.dst not in sset:
                raise ValueError(f"transition {t} uses an unknown state")
            if len(t.effect) != self.dim or any(e < 0 for e in t.effect):
                raise ValueError(f"transition {t} needs a natural effect of dimension {self.dim}")
            if t.label is None:
                raise ValueError("Parikh automata have no epsilon transitions here")
            alph.add(t.label)
        for q, tgt in self.targets.items():
            if q not in sset:
                raise ValueError(f"target for unknown state {q!r}")
            d = len(tgt.free) if isinstance(tgt, Formula) else tgt.dim
            if d != self.dim:
                raise DimensionError(f"target of state {q!r} has dimension {d}")
        object.__setattr__(self, "alphabet", tuple(sorted(alph, key=str)))
        if self.deterministic and not is_deterministic(self):
            raise DeterminismError("automaton flagged deterministic is not")

    def target_rep(self, q) -> SemilinearRep:
        if q not in self._reps:
            tgt = self.targets.get(q)
            if tgt is None:
                rep = SemilinearRep(self.dim, ())
            elif isinstance(tgt, Formula):
                rep = qf_formula_to_semilinear(tgt)
            else:
                rep = tgt
            self._reps[q] = rep
        return self._reps[q]

    def to_json(self) -> dict:
        def tgt(v):
            return str(v) if isinstance(v, Formula) else v.to_json()
        return {
            "dim": self.dim, "states": list(self.states), "alphabet": list(self.alphabet),
            "initial": self.initial, "deterministic": self.deterministic,
            "transitions": [{"from": t.src, "label": t.label, "effect": list(t.effect), "to": t.dst}
                            for t in self.transitions],
            "targets": {q: tgt(v) for q, v in self.targets.items()},
        }

    @classmethod
    def from_json(cls, data: dict) -> "ParikhAutomaton":
        targets = {}
        for q, v in data.get("targets", {}).items():
            if isinstance(v, str):
                targets[q] = parse(v)
            elif isinstance(v, dict) and "formula" in v:
                targets[q] = parse(v["formula"])
            else:
                targets[q] = rep_from_json(v)
        ts = tuple(Transition(t["from"], t.get("label"), tuple(t["effect"]), t["to"]) for t in data["transitions"])
        return cls(tuple(data["states"]), tuple(data.get("alphabet", ())), ts, data["initial"], targets,
                   int(data["dim"]), bool(data.get("deterministic", False)))


FINAL = "#final"
SINK = "#sink"


def pa_to_zvass(P: ParikhAutomaton) -> tuple:
    """(V, I): P's transitions plus an epsilon phase per accepting state.

    From q: subtract one component's base, loop subtracting its periods, then
    move to the single final state; I is every coordinate.
    """
    states = list(P.states)
    ts = list(P.transitions)
    for q in P.states:
        for k, comp in enumerate(P.target_rep(q).components):
            s = f"{q}#{k}"
            states.append(s)
            ts.append(Transition(q, None, neg(comp.base), s))
            ts.extend(Transition(s, None, neg(p), s) for p in comp.periods)
            ts.append(Transition(s, None, (0,) * P.dim, FINAL))
    states.append(FINAL)
    V = ZVass(tuple(states), P.alphabet, tuple(ts), P.initial, FINAL, P.dim)
    return V, frozenset(range(P.dim))


def pa_complement_det(P: ParikhAutomaton) -> ParikhAutomaton:
    """Complete P with a sink and negate every target (quantifier-free formulas only)."""
    if not P.deterministic and not is_deterministic(P):
        raise DeterminismError("complement needs a deterministic Parikh automaton")
    header = None
    for q in P.states:
        tgt = P.targets.get(q)
        if tgt is None:
            continue
        if not isinstance(tgt, Formula) or not is_quantifier_free(tgt.body):
            raise ValueError(f"target of state {q!r} must be a quantifier-free formula")
        header = header or tgt.free
    header = header or tuple(f"x{i + 1}" for i in range(P.dim))
    full = Formula(header, TRUE)
    present = {(t.src, t.label) for t in P.transitions}
    ts = list(P.transitions)
    states = list(P.states)
    zero = (0,) * P.dim
    missing = [(q, a) for q in P.states for a in P.alphabet if (q, a) not in present]
    targets = {}
    for q in P.states:
        tgt = P.targets.get(q)
        targets[q] = full if tgt is None else negate_qf(tgt)
    if missing:
        sink = SINK
        while sink in set(states):
            sink += "'"
        states.append(sink)
        ts.extend(Transition(q, a, zero, sink) for q, a in missing)
        ts.extend(Transition(sink, a, zero, sink) for a in P.alphabet)
        targets[sink] = full
    return ParikhAutomaton(tuple(states), P.alphabet, tuple(ts), P.initial, targets, P.dim, True)
