"""Brute-force and search oracles, plus seeded instance generators.

None of these routines share code with the deciders they check beyond
vector arithmetic and plain feasibility calls.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from seplab.diophantine import EqSystem, SystemBuilder, cutoff_bound, feasible
from seplab.semilinear import HyperlinearRep, as_hyperlinear_parts
from seplab.vecnum import add, leq, sim_k

# ---------------------------------------------------------------- minimal solutions


def _rref(matrix: list, rhs: list) -> tuple:
    """Reduced row echelon form over Q: (rows, rhs, pivot columns) or None if inconsistent."""
    rows = [[Fraction(a) for a in r] for r in matrix]
    b = [Fraction(x) for x in rhs]
    n = len(rows[0]) if rows else 0
    pivots: list = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        b[r], b[piv] = b[piv], b[r]
        f = rows[r][c]
        rows[r] = [a / f for a in rows[r]]
        b[r] /= f
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                g = rows[i][c]
                rows[i] = [a - g * p for a, p in zip(rows[i], rows[r])]
                b[i] -= g * b[r]
        pivots.append(c)
        r += 1
    if any(bi != 0 for bi in b[r:]):
        return None
    return rows[:r], b[:r], pivots


def _compositions(total_max: int, k: int):
    """All k-tuples of naturals with sum <= total_max."""
    if k == 0:
        yield ()
        return
    for first in range(total_max + 1):
        for rest in _compositions(total_max - first, k - 1):
            yield (first,) + rest


def _solutions_in_ball(matrix, rhs, n, bound) -> list:
    if not matrix:
        return [x for x in _compositions(bound, n)]
    red = _rref(matrix, rhs)
    if red is None:
        return []
    rows, b, pivots = red
    free = [j for j in range(n) if j not in pivots]
    out = []
    for vals in _compositions(bound, len(free)):
        x = [0] * n
        for j, v in zip(free, vals):
            x[j] = v
        ok = True
        for row, bi, pc in zip(rows, b, pivots):
            val = bi - sum(row[j] * x[j] for j in free)
            if val.denominator != 1 or val < 0:
                ok = False
                break
            x[pc] = int(val)
        if ok and sum(x) <= bound:
            out.append(tuple(x))
    return out


def _minimal(vectors: Iterable[tuple]) -> list:
    vs = sorted(set(vectors), key=sum)
    out: list = []
    for v in vs:
        if not any(leq(w, v) for w in out):
            out.append(v)
    return sorted(out)


def brute_minimal_solutions(sys: EqSystem, bound: Optional[int] = None) -> tuple:
    """Minimal solutions and Hilbert basis by enumeration of the |x|_1 <= B ball.

    B defaults to :func:`seplab.diophantine.cutoff_bound`.
    """
    B = cutoff_bound(sys) if bound is None else bound
    n = sys.ncols
    rows = [list(r) for r in sys.matrix]
    inhom = _minimal(_solutions_in_ball(rows, list(sys.rhs), n, B))
    hom = [x for x in _solutions_in_ball(rows, [0] * len(rows), n, B) if any(x)]
    return tuple(inhom), tuple(_minimal(hom))


# ---------------------------------------------------------------- congruence cells


def _cls(a: int, n0: int, p: int) -> int:
    return a if a < n0 else n0 + (a - n0) % p


def reachable_cells(parts: Sequence[HyperlinearRep], n0s: Sequence[int], ps: Sequence[int]) -> dict:
    """Cells of the (n0, p) congruence met by the union of parts, each with a witness vector."""
    cells: dict = {}
    for rep in parts:
        queue = []
        for b in rep.bases:
            c = tuple(_cls(a, n0, p) for a, n0, p in zip(b, n0s, ps))
            if c not in cells:
                cells[c] = b
                queue.append(c)
        # closure under adding periods: the class of c + period only depends on c
        while queue:
            c = queue.pop()
            w = cells[c]
            for per in rep.periods:
                c2 = tuple(_cls(a + q, n0, p) for a, q, n0, p in zip(c, per, n0s, ps))
                if c2 not in cells:
                    cells[c2] = add(w, per)
                    queue.append(c2)
    return cells


def simk_pair(rep1, rep2, k: int) -> Optional[tuple]:
    """Some (x, y) in rep1 x rep2 with x ~_k y, or None. Exact."""
    if k < 1:
        raise ValueError("k must be positive")
    p1, p2 = as_hyperlinear_parts(rep1), as_hyperlinear_parts(rep2)
    if not p1 or not p2:
        return None
    d = p1[0].dim
    n0s, ps = [k + 1] * d, [k] * d
    c1 = reachable_cells(p1, n0s, ps)
    c2 = reachable_cells(p2, n0s, ps)
    for c in sorted(c1):
        if c in c2:
            x, y = c1[c], c2[c]
            assert sim_k(x, y, k)
            return x, y
    return None


@dataclass(frozen=True)
class MonadicSeparatorDesc:
    """Union of products of ultimately periodic sets.

    Coordinate i uses threshold thresholds[i] and period periods[i]; each
    component holds one membership bitmap per coordinate over
    [0, threshold + period).
    """

    thresholds: tuple
    periods: tuple
    components: tuple

    def contains(self, v: Sequence[int]) -> bool:
        c = [_cls(a, n0, p) for a, n0, p in zip(v, self.thresholds, self.periods)]
        return any(all(bm[ci] for bm, ci in zip(comp, c)) for comp in self.components)

    def cells(self) -> set:
        out = set()
        for comp in self.components:
            choices = [[i for i, bit in enumerate(bm) if bit] for bm in comp]
            out.update(itertools.product(*choices))
        return out

    def to_json(self) -> dict:
        return {"thresholds": list(self.thresholds), "periods": list(self.periods),
                "components": [[[int(b) for b in bm] for bm in comp] for comp in self.components]}


def _merge_cells(cells: set, d: int) -> list:
    comps = [tuple(frozenset([a]) for a in c) for c in sorted(cells)]
    changed = True
    while changed:
        changed = False
        for i in range(d):
            groups: dict = {}
            for comp in comps:
                key = comp[:i] + comp[i + 1:]
                groups.setdefault(key, set()).update(comp[i])
            if len(groups) < len(comps):
                comps = [key[:i] + (frozenset(vals),) + key[i:] for key, vals in groups.items()]
                changed = True
    return sorted(comps, key=lambda c: [sorted(s) for s in c])


def describe_cells(cells: set, n0s: Sequence[int], ps: Sequence[int]) -> MonadicSeparatorDesc:
    d = len(n0s)
    comps = []
    for comp in _merge_cells(cells, d):
        comps.append(tuple(tuple(j in s for j in range(n0 + p)) for s, n0, p in zip(comp, n0s, ps)))
    return MonadicSeparatorDesc(tuple(n0s), tuple(ps), tuple(comps))


def bounded_separator_search(rep1, rep2, B: int = 4, P: int = 4,
                             max_components: Optional[int] = None) -> Optional[MonadicSeparatorDesc]:
    """A recognizable separator with thresholds <= B and periods <= P, or None.

    Refining the congruence never hurts, so only threshold B and the periods
    in (P/2, P] (maximal under divisibility) are tried.
    """
    p1, p2 = as_hyperlinear_parts(rep1), as_hyperlinear_parts(rep2)
    if not p1:
        d = p2[0].dim if p2 else 0
        return MonadicSeparatorDesc((B,) * d, (1,) * d, ())
    d = p1[0].dim
    top = [p for p in range(1, P + 1) if 2 * p > P]
    for ps in itertools.product(top, repeat=d):
        n0s = [B] * d
        c1 = reachable_cells(p1, n0s, ps)
        c2 = reachable_cells(p2, n0s, ps) if p2 else {}
        if any(c in c2 for c in c1):
            continue
        desc = describe_cells(set(c1), n0s, ps)
        if max_components is None or len(desc.components) <= max_components:
            return desc
    return None


def _cell_hit(rep: HyperlinearRep, cell: Sequence[int], n0s, ps) -> bool:
    """ILP: does rep meet the given congruence cell?"""
    if rep.is_empty:
        return False
    sb = SystemBuilder()
    beta = sb.block(len(rep.bases))
    lam = sb.block(len(rep.periods))
    z = sb.block(rep.dim)
    for i in range(rep.dim):
        row = {k: b[i] for k, b in zip(beta, rep.bases) if b[i]}
        for k, per in zip(lam, rep.periods):
            if per[i]:
                row[k] = per[i]
        if cell[i] >= n0s[i]:
            row[z[i]] = -ps[i]
        sb.add_row(row, cell[i])
    sb.add_row({k: 1 for k in beta}, 1)
    return feasible(sb.system()) is not None


def verify_separator(desc: MonadicSeparatorDesc, rep1, rep2) -> bool:
    """rep1 inside S and S disjoint from rep2, one ILP per congruence cell."""
    n0s, ps = desc.thresholds, desc.periods
    inside = desc.cells()
    grid = itertools.product(*[range(n0 + p) for n0, p in zip(n0s, ps)])
    for cell in grid:
        if cell in inside:
            if any(_cell_hit(r, cell, n0s, ps) for r in as_hyperlinear_parts(rep2)):
                return False
        elif any(_cell_hit(r, cell, n0s, ps) for r in as_hyperlinear_parts(rep1)):
            return False
    return True


def oracle_battery(lhs, rhs, separable: bool, max_k: int = 8, B: int = 4, P: int = 4) -> dict:
    """One-sided checks of a verdict; ``violations`` lists contradictions."""
    violations = []
    missing_k = [k for k in range(1, max_k + 1) if simk_pair(lhs, rhs, k) is None]
    sep = bounded_separator_search(lhs, rhs, B, P)
    if not separable:
        violations += [f"no ~_{k} pair for an inseparable verdict" for k in missing_k]
        if sep is not None:
            violations.append("separator found for an inseparable verdict")
    return {"violations": violations, "simk_missing": missing_k, "separator_found": sep is not None,
            "max_k": max_k, "B": B, "P": P}


# ---------------------------------------------------------------- automata


def _is_pa(A) -> bool:
    return hasattr(A, "targets")


def bounded_word_lang(A, I: Optional[Iterable[int]] = None, maxlen: int = 4,
                      counter_bound: Optional[int] = None) -> set:
    """All accepted words of length <= maxlen (tuples of letters).

    Z-VASS: acceptance needs the counters in I (default all) to be zero at
    the final state; counter values are kept within +-counter_bound
    (default maxlen * largest absolute effect entry, at least 1).
    Parikh automata: the counter vector must lie in the state's target.
    """
    if _is_pa(A):
        return _pa_words(A, maxlen)
    I = sorted(range(A.dim) if I is None else I)
    big = max([abs(e[i]) for t in A.transitions for e in [t.effect] for i in I] or [0])
    bound = counter_bound if counter_bound is not None else max(1, maxlen) * max(big, 1)
    letters = sorted({t.label for t in A.transitions if t.label is not None})

    def proj(e):
        return tuple(e[i] for i in I)

    eps = [(t.src, proj(t.effect), t.dst) for t in A.transitions if t.label is None]
    by_letter: dict = {}
    for t in A.transitions:
        if t.label is not None:
            by_letter.setdefault(t.label, []).append((t.src, proj(t.effect), t.dst))

    def ok(c):
        return all(abs(x) <= bound for x in c)

    def closure(confs):
        seen = set(confs)
        stack = list(confs)
        while stack:
            q, c = stack.pop()
            for s, e, dst in eps:
                if s == q:
                    nc = tuple(a + b for a, b in zip(c, e))
                    if ok(nc) and (dst, nc) not in seen:
                        seen.add((dst, nc))
                        stack.append((dst, nc))
        return frozenset(seen)

    zero = (0,) * len(I)
    out = set()
    level = {(): closure({(A.initial, zero)})}
    for n in range(maxlen + 1):
        nxt = {}
        for w, confs in level.items():
            if (A.final, zero) in confs:
                out.add(w)
            if n == maxlen:
                continue
            for a in letters:
                step = set()
                for q, c in confs:
                    for s, e, dst in by_letter.get(a, ()):
                        if s == q:
                            nc = tuple(x + y for x, y in zip(c, e))
                            if ok(nc):
                                step.add((dst, nc))
                if step:
                    nxt[w + (a,)] = closure(step)
        level = nxt
    return out


def _pa_words(P, maxlen: int) -> set:
    from seplab.presburger import Formula, holds_at
    from seplab.semilinear import member

    def accepts(q, c):
        tgt = P.targets.get(q)
        if tgt is None:
            return False
        if isinstance(tgt, Formula):
            return holds_at(tgt, c)
        return member(tgt, c)

    zero = (0,) * P.dim
    out = set()
    level = {(): {(P.initial, zero)}}
    letters = sorted(P.alphabet)
    for n in range(maxlen + 1):
        nxt = {}
        for w, confs in level.items():
            if any(accepts(q, c) for q, c in confs):
                out.add(w)
            if n == maxlen:
                continue
            for a in letters:
                step = {(t.dst, add(c, t.effect)) for q, c in confs for t in P.transitions
                        if t.src == q and t.label == a}
                if step:
                    nxt[w + (a,)] = step
        level = nxt
    return out


def bfs_run_search(V, I: Iterable[int], maxlen: int = 12) -> Optional[tuple]:
    """An accepting run (transition indices) of length <= maxlen, or None."""
    I = sorted(I)
    start = (V.initial, (0,) * len(I))
    if V.initial == V.final:
        return ()
    parent = {start: None}
    frontier = [start]
    for _ in range(maxlen):
        nxt = []
        for conf in frontier:
            q, c = conf
            for idx, t in enumerate(V.transitions):
                if t.src != q:
                    continue
                nc = tuple(a + t.effect[i] for a, i in zip(c, I))
                n = (t.dst, nc)
                if n in parent:
                    continue
                parent[n] = (conf, idx)
                if t.dst == V.final and not any(nc):
                    run = []
                    cur = n
                    while parent[cur] is not None:
                        cur, i = parent[cur]
                        run.append(i)
                    return tuple(reversed(run))
                nxt.append(n)
        frontier = nxt
    return None


# ---------------------------------------------------------------- generators


def random_system(rng: random.Random, max_rows: int = 2, max_cols: int = 4,
                  lo: int = -3, hi: int = 3, proj_dim: Optional[int] = None) -> EqSystem:
    s = rng.randint(1, max_rows)
    r = rng.randint(1, max_cols)
    matrix = [[rng.randint(lo, hi) for _ in range(r)] for _ in range(s)]
    rhs = [rng.randint(lo, hi) for _ in range(s)]
    m = r if proj_dim is None else min(proj_dim, r)
    return EqSystem(matrix, rhs, m, r)


def random_hyperlinear(rng: random.Random, dim: int, max_bases: int = 2, max_periods: int = 2,
                       max_entry: int = 3, allow_empty: bool = False) -> HyperlinearRep:
    nb = rng.randint(0 if allow_empty else 1, max_bases)
    npr = rng.randint(0, max_periods)
    bases = [tuple(rng.randint(0, max_entry) for _ in range(dim)) for _ in range(nb)]
    periods = []
    for _ in range(npr):
        # sparse periods make support interplay interesting
        periods.append(tuple(rng.randint(0, max_entry) if rng.random() < 0.6 else 0 for _ in range(dim)))
    return HyperlinearRep(dim, tuple(bases), tuple(periods))


def hyperlinear_system(rep: HyperlinearRep) -> EqSystem:
    from seplab.semilinear import rep_to_system
    return rep_to_system(rep)


def random_zvass(rng: random.Random, max_states: int = 3, max_trans: int = 6, dim: int = 2,
                 lo: int = -2, hi: int = 2, alphabet: Sequence[str] = ("a", "b"), eps_prob: float = 0.2):
    from seplab.zvass import Transition, ZVass
    n = rng.randint(1, max_states)
    states = tuple(f"q{i}" for i in range(n))
    ts = []
    for _ in range(rng.randint(0, max_trans)):
        label = None if rng.random() < eps_prob else rng.choice(list(alphabet))
        eff = tuple(rng.randint(lo, hi) for _ in range(dim))
        ts.append(Transition(rng.choice(states), label, eff, rng.choice(states)))
    return ZVass(states, tuple(alphabet), tuple(ts), states[0], rng.choice(states), dim)


def random_det_zvass(rng: random.Random, max_states: int = 3, dim: int = 1, lo: int = -2, hi: int = 2,
                     alphabet: Sequence[str] = ("a", "b"), density: float = 0.7):
    from seplab.zvass import Transition, ZVass
    n = rng.randint(1, max_states)
    states = tuple(f"q{i}" for i in range(n))
    ts = []
    for q in states:
        for a in alphabet:
            if rng.random() < density:
                eff = tuple(rng.randint(lo, hi) for _ in range(dim))
                ts.append(Transition(q, a, eff, rng.choice(states)))
    return ZVass(states, tuple(alphabet), tuple(ts), states[0], rng.choice(states), dim)


def random_pa(rng: random.Random, max_states: int = 2, dim: int = 2, alphabet: Sequence[str] = ("a", "b"),
              max_const: int = 3):
    """Deterministic PA with small quantifier-free targets."""
    from seplab.presburger import parse
    from seplab.zvass import ParikhAutomaton, Transition
    n = rng.randint(1, max_states)
    states = tuple(f"q{i}" for i in range(n))
    names = ["x", "y", "z"][:dim]
    ts = []
    for q in states:
        for a in alphabet:
            if rng.random() < 0.75:
                eff = tuple(rng.randint(0, 1) for _ in range(dim))
                ts.append(Transition(q, a, eff, rng.choice(states)))
    targets = {}
    for q in states:
        kind = rng.randint(0, 3)
        if kind == 0:
            body = "true"
        elif kind == 1:
            body = f"{rng.choice(names)} >= {rng.randint(0, max_const)}"
        elif kind == 2:
            body = f"{rng.choice(names)} = {rng.randint(0, 1)} mod {rng.randint(2, 3)}"
        else:
            a, b = rng.sample(names, 2) if dim > 1 else (names[0], names[0])
            body = f"{a} <= {b} + {rng.randint(0, max_const)}"
        targets[q] = parse(f"vars {' '.join(names)}. {body}")
    return ParikhAutomaton(states, tuple(alphabet), tuple(ts), states[0], targets, dim, True)


def random_det_instance(rng: random.Random, max_states: int = 3, dim: int = 2, lo: int = -2, hi: int = 2):
    """(V, I1, I2) with V deterministic, initial != final and a nonempty trimmed automaton."""
    from seplab.zvass import trim
    subsets = [frozenset(s) for r in range(1, dim + 1) for s in itertools.combinations(range(dim), r)]
    while True:
        V = random_det_zvass(rng, max_states=max_states, dim=dim, lo=lo, hi=hi)
        if V.initial == V.final or not trim(V)[0].transitions:
            continue
        return V, rng.choice(subsets), rng.choice(subsets)
