"""Recognizable (monadic) separability of semilinear sets.

Two sets are inseparable iff they meet after each is widened by the other's
periods supported inside the strongly unbounded coordinates J. Both the
representation route (:func:`insep_hyperlinear`) and the system route
(:func:`insep_systems`) are implemented and can be cross-checked.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from seplab.diophantine import EqSystem, SupportConstraint, SystemBuilder, feasible, system_member
from seplab.presburger import Formula, dnf_branches, branch_to_system, negate_qf, normalize
from seplab.semilinear import HyperlinearRep, as_hyperlinear_parts, member, system_to_hyperlinear
from seplab.vecnum import (
    DimensionError, add, from_one_based, lincomb, scale, sim_k, support, to_one_based,
)


@dataclass(frozen=True)
class Decomposition:
    """One side of the intersection point.

    hyperlinear kind: ``base`` is a base vector, ``coeffs`` the coefficients
    over the own periods, ``cross`` over the other side's periods.
    system kind: ``base`` is a full solution of the own system, ``coeffs`` is
    empty and ``cross`` a homogeneous solution of the other system.
    """

    base: tuple
    coeffs: tuple
    cross: tuple


@dataclass(frozen=True)
class InsepCertificate:
    kind: str
    point: tuple
    J: frozenset
    lhs: Decomposition
    rhs: Decomposition
    pump: tuple
    parts: tuple = ()

    def to_json(self) -> dict:
        def dec(d):
            return {"base": list(d.base), "coeffs": list(d.coeffs), "cross": list(d.cross)}
        return {
            "kind": self.kind, "point": list(self.point), "J": to_one_based(self.J),
            "lhs": dec(self.lhs), "rhs": dec(self.rhs),
            "pump": [list(self.pump[0]), list(self.pump[1])], "parts": list(self.parts),
        }

    @classmethod
    def from_json(cls, data: dict) -> "InsepCertificate":
        def dec(d):
            return Decomposition(tuple(d["base"]), tuple(d["coeffs"]), tuple(d["cross"]))
        return cls(data["kind"], tuple(data["point"]), from_one_based(data["J"]),
                   dec(data["lhs"]), dec(data["rhs"]),
                   (tuple(data["pump"][0]), tuple(data["pump"][1])), tuple(data.get("parts", ())))


@dataclass
class SepVerdict:
    separable: bool
    certificate: Optional[object] = None
    separator: Optional[object] = None
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.certificate is not None and self.separable:
            raise ValueError("a separable verdict cannot carry an inseparability certificate")


def _check_dims(R: HyperlinearRep, S: HyperlinearRep) -> None:
    if R.dim != S.dim:
        raise DimensionError(f"dimension mismatch: {R.dim} vs {S.dim}")


# ---------------------------------------------------------------- representation route


def maxsupp(periods: Sequence[Sequence[int]], J: frozenset) -> frozenset:
    out: set = set()
    for p in periods:
        s = support(p)
        if s <= J:
            out |= s
    return frozenset(out)


def strongly_unbounded(R: HyperlinearRep, S: HyperlinearRep) -> tuple:
    """(J, (p, q)): greatest fixpoint J and period-coefficient realizers with support J."""
    _check_dims(R, S)
    J = frozenset(range(R.dim))
    while True:
        nJ = maxsupp(R.periods, J) & maxsupp(S.periods, J)
        if nJ == J:
            break
        J = nJ
    p = tuple(1 if support(u) <= J else 0 for u in R.periods)
    q = tuple(1 if support(v) <= J else 0 for v in S.periods)
    return J, (p, q)


def cor2_intersection(R: HyperlinearRep, S: HyperlinearRep, J: frozenset) -> Optional[tuple]:
    """A point of (A + U* + V_J*) meet (B + V* + U_J*) with its decompositions, or None.

    The base choice is a one-hot coefficient vector, so this is one
    conjunctive ILP instead of one per base pair.
    """
    _check_dims(R, S)
    if R.is_empty or S.is_empty:
        return None
    d = R.dim
    U, V = R.periods, S.periods
    UJ = [i for i, u in enumerate(U) if support(u) <= J]
    VJ = [i for i, v in enumerate(V) if support(v) <= J]
    sb = SystemBuilder()
    beta = sb.block(len(R.bases))
    lam = sb.block(len(U))
    mu_ = sb.block(len(VJ))
    gamma = sb.block(len(S.bases))
    mu = sb.block(len(V))
    lam_ = sb.block(len(UJ))
    for i in range(d):
        row: dict = {}
        for k, a in zip(beta, R.bases):
            row[k] = row.get(k, 0) + a[i]
        for k, u in zip(lam, U):
            row[k] = row.get(k, 0) + u[i]
        for k, vi in zip(mu_, VJ):
            row[k] = row.get(k, 0) + V[vi][i]
        for k, b in zip(gamma, S.bases):
            row[k] = row.get(k, 0) - b[i]
        for k, v in zip(mu, V):
            row[k] = row.get(k, 0) - v[i]
        for k, ui in zip(lam_, UJ):
            row[k] = row.get(k, 0) - U[ui][i]
        sb.add_row(row, 0)
    sb.add_row({k: 1 for k in beta}, 1)
    sb.add_row({k: 1 for k in gamma}, 1)
    x = feasible(sb.system())
    if x is None:
        return None
    a = R.bases[next(i for i, k in enumerate(beta) if x[k])]
    b = S.bases[next(i for i, k in enumerate(gamma) if x[k])]
    lam_v = tuple(x[k] for k in lam)
    mu_v = tuple(x[k] for k in mu)
    cross_l = [0] * len(V)
    for k, vi in zip(mu_, VJ):
        cross_l[vi] = x[k]
    cross_r = [0] * len(U)
    for k, ui in zip(lam_, UJ):
        cross_r[ui] = x[k]
    point = add(add(a, lincomb(lam_v, U, d)), lincomb(cross_l, V, d))
    return point, Decomposition(a, lam_v, tuple(cross_l)), Decomposition(b, mu_v, tuple(cross_r))


def insep_hyperlinear(R: HyperlinearRep, S: HyperlinearRep) -> SepVerdict:
    _check_dims(R, S)
    if R.is_empty or S.is_empty:
        return SepVerdict(True, details={"reason": "empty input"})
    J, pump = strongly_unbounded(R, S)
    hit = cor2_intersection(R, S, J)
    if hit is None:
        return SepVerdict(True, details={"J": to_one_based(J)})
    point, lhs, rhs = hit
    cert = InsepCertificate("hyperlinear", point, J, lhs, rhs, pump)
    return SepVerdict(False, certificate=cert, details={"J": to_one_based(J)})


# ---------------------------------------------------------------- system route


def _support_sets_systems(sys: EqSystem, J: frozenset) -> tuple:
    """Projected coordinates j in J carried by some p with Ap = 0, pi(p) inside J.

    One support-constrained feasibility call per j not already covered by an
    earlier witness. Returns (coords, {j: witness}).
    """
    m = sys.proj_dim
    hom = sys.homogeneous()
    outside = frozenset(i for i in range(m) if i not in J)
    found: set = set()
    witnesses: dict = {}
    for j in sorted(J):
        if j in found:
            continue
        w = feasible(hom, SupportConstraint(outside, frozenset([j])))
        if w is None:
            continue
        witnesses[j] = w
        found |= {i for i in range(m) if w[i]}
    return frozenset(found), witnesses


def systems_fixpoint(sys1: EqSystem, sys2: EqSystem) -> tuple:
    """(J, p, q) for the projected sets of two systems; p, q full homogeneous solutions."""
    m = sys1.proj_dim
    J = frozenset(range(m))
    while True:
        s1, w1 = _support_sets_systems(sys1, J)
        s2, w2 = _support_sets_systems(sys2, J)
        nJ = s1 & s2
        if nJ == J:
            break
        J = nJ
    p = tuple(map(sum, zip(*w1.values()))) if w1 else (0,) * sys1.ncols
    q = tuple(map(sum, zip(*w2.values()))) if w2 else (0,) * sys2.ncols
    return J, p, q


def insep_systems(sys1: EqSystem, sys2: EqSystem) -> SepVerdict:
    if sys1.proj_dim != sys2.proj_dim:
        raise DimensionError(f"projection dimensions differ: {sys1.proj_dim} vs {sys2.proj_dim}")
    if feasible(sys1) is None or feasible(sys2) is None:
        return SepVerdict(True, details={"reason": "empty input"})
    m = sys1.proj_dim
    J, p, q = systems_fixpoint(sys1, sys2)
    r1, r2 = sys1.ncols, sys2.ncols
    sb = SystemBuilder()
    x = sb.block(r1)
    y = sb.block(r2)
    u = sb.block(r1)
    v = sb.block(r2)
    for block, sys, homog in ((x, sys1, False), (y, sys2, False), (u, sys1, True), (v, sys2, True)):
        for row, b in zip(sys.matrix, sys.rhs):
            sb.add_row({block[j]: a for j, a in enumerate(row) if a}, 0 if homog else b)
    for i in range(m):
        sb.add_row({x[i]: 1, v[i]: 1, y[i]: -1, u[i]: -1}, 0)
    zero = frozenset(blk[i] for blk in (u, v) for i in range(m) if i not in J)
    w = feasible(sb.system(), SupportConstraint(zero))
    if w is None:
        return SepVerdict(True, details={"J": to_one_based(J)})
    xs, ys = tuple(w[k] for k in x), tuple(w[k] for k in y)
    us, vs = tuple(w[k] for k in u), tuple(w[k] for k in v)
    point = tuple(xs[i] + vs[i] for i in range(m))
    cert = InsepCertificate("system", point, J, Decomposition(xs, (), vs), Decomposition(ys, (), us), (p, q))
    return SepVerdict(False, certificate=cert, details={"J": to_one_based(J)})


# ---------------------------------------------------------------- certificates


def _pieces(c: InsepCertificate, R, S) -> tuple:
    """(lhs base point, lhs cross point, rhs base point, rhs cross point, R pump, S pump)."""
    if c.kind == "hyperlinear":
        d = R.dim
        return (add(c.lhs.base, lincomb(c.lhs.coeffs, R.periods, d)),
                lincomb(c.lhs.cross, S.periods, d),
                add(c.rhs.base, lincomb(c.rhs.coeffs, S.periods, d)),
                lincomb(c.rhs.cross, R.periods, d),
                lincomb(c.pump[0], R.periods, d),
                lincomb(c.pump[1], S.periods, d))
    m = R.proj_dim
    return (c.lhs.base[:m], c.lhs.cross[:m], c.rhs.base[:m], c.rhs.cross[:m], c.pump[0][:m], c.pump[1][:m])


def materialize(c: InsepCertificate, R, S, k: int) -> tuple:
    """(u_k, v_k) in R x S with u_k ~_k v_k, built from the pump pair."""
    lb, lc, rb, rc, pr, ps = _pieces(c, R, S)
    u_k = add(add(lb, scale(2 * k, pr)), scale(k - 1, rc))
    v_k = add(add(rb, scale(2 * k, ps)), scale(k - 1, lc))
    return u_k, v_k


def _in_side(side, point) -> bool:
    if isinstance(side, EqSystem):
        return system_member(side, point) is not None
    return member(side, point)


def explain_certificate(c: InsepCertificate, R, S, ks: Sequence[int] = (2, 3, 5)) -> list:
    """Empty list iff the certificate verifies; otherwise one message per failed check."""
    fails: list = []
    try:
        if c.kind == "hyperlinear":
            if not (isinstance(R, HyperlinearRep) and isinstance(S, HyperlinearRep)):
                return ["hyperlinear certificate needs hyperlinear representations"]
            d = R.dim
            if S.dim != d or len(c.point) != d:
                return ["dimension mismatch"]
            if c.lhs.base not in R.bases:
                fails.append("lhs base is not a base of R")
            if c.rhs.base not in S.bases:
                fails.append("rhs base is not a base of S")
            shapes = [(c.lhs.coeffs, R.periods), (c.lhs.cross, S.periods), (c.rhs.coeffs, S.periods),
                      (c.rhs.cross, R.periods), (c.pump[0], R.periods), (c.pump[1], S.periods)]
            if any(len(a) != len(b) for a, b in shapes):
                return fails + ["coefficient vector of wrong length"]
            if any(x < 0 for a, _ in shapes for x in a):
                fails.append("negative coefficient")
            if any(x and not support(S.periods[i]) <= c.J for i, x in enumerate(c.lhs.cross)):
                fails.append("lhs cross uses an S-period outside J")
            if any(x and not support(R.periods[i]) <= c.J for i, x in enumerate(c.rhs.cross)):
                fails.append("rhs cross uses an R-period outside J")
        elif c.kind == "system":
            if not (isinstance(R, EqSystem) and isinstance(S, EqSystem)):
                return ["system certificate needs equation systems"]
            m = R.proj_dim
            if S.proj_dim != m or len(c.point) != m:
                return ["dimension mismatch"]
            hR, hS = R.homogeneous(), S.homogeneous()
            for name, sys, vec in (("lhs base", R, c.lhs.base), ("rhs base", S, c.rhs.base),
                                   ("rhs cross", hR, c.rhs.cross), ("lhs cross", hS, c.lhs.cross),
                                   ("R pump", hR, c.pump[0]), ("S pump", hS, c.pump[1])):
                if not sys.solves(vec):
                    fails.append(f"{name} does not solve its system")
            if fails:
                return fails
            if not support(c.rhs.cross[:m]) <= c.J or not support(c.lhs.cross[:m]) <= c.J:
                fails.append("cross support outside J")
        else:
            return [f"unknown certificate kind {c.kind!r}"]
        lb, lc, rb, rc, pr, ps = _pieces(c, R, S)
        if add(lb, lc) != tuple(c.point):
            fails.append("lhs decomposition does not sum to the point")
        if add(rb, rc) != tuple(c.point):
            fails.append("rhs decomposition does not sum to the point")
        if support(pr) != c.J:
            fails.append("R pump support differs from J")
        if support(ps) != c.J:
            fails.append("S pump support differs from J")
        if fails:
            return fails
        for k in ks:
            u_k, v_k = materialize(c, R, S, k)
            if not sim_k(u_k, v_k, k):
                fails.append(f"materialized pair is not ~_{k}")
            if not _in_side(R, u_k):
                fails.append(f"u_{k} not in R")
            if not _in_side(S, v_k):
                fails.append(f"v_{k} not in S")
    except (DimensionError, IndexError, TypeError) as e:
        fails.append(f"malformed certificate: {e}")
    return fails


def check_certificate(c: InsepCertificate, R, S) -> bool:
    return not explain_certificate(c, R, S)


# ---------------------------------------------------------------- top level


def separability_reps(K, L) -> SepVerdict:
    """Union reps: inseparable iff some component pair is."""
    Ks, Ls = as_hyperlinear_parts(K), as_hyperlinear_parts(L)
    if Ks and Ls and Ks[0].dim != Ls[0].dim:
        raise DimensionError(f"dimension mismatch: {Ks[0].dim} vs {Ls[0].dim}")
    for i, R in enumerate(Ks):
        for j, S in enumerate(Ls):
            v = insep_hyperlinear(R, S)
            if not v.separable:
                c = v.certificate
                v.certificate = InsepCertificate(c.kind, c.point, c.J, c.lhs, c.rhs, c.pump, (i, j))
                v.details["parts"] = [i, j]
                return v
    return SepVerdict(True)


def _lazy(it):
    cache: list = []

    def get(i):
        while len(cache) <= i:
            try:
                cache.append(next(it))
            except StopIteration:
                return None
        return cache[i]
    return get


def branch_systems(f: Formula) -> list:
    return [branch_to_system(b, f.free) for b in dnf_branches(normalize(f))]


def separability_formulas(phi: Formula, psi: Formula, path: str = "systems",
                          cross_check: bool = False) -> SepVerdict:
    """Decide separability of two existential formulas over the same header.

    ``path`` selects ``"systems"`` or ``"hyperlinear"``; with ``cross_check``
    both run on every branch pair and a disagreement raises AssertionError.
    """
    if tuple(phi.free) != tuple(psi.free):
        raise ValueError(f"header mismatch: {phi.free} vs {psi.free}")
    if path not in ("systems", "hyperlinear"):
        raise ValueError(f"unknown path {path!r}")
    left = _lazy(branch_to_system(b, phi.free) for b in dnf_branches(normalize(phi)))
    right = _lazy(branch_to_system(b, psi.free) for b in dnf_branches(normalize(psi)))
    hyper: dict = {}

    def as_rep(side, i, sys):
        key = (side, i)
        if key not in hyper:
            hyper[key] = system_to_hyperlinear(sys)
        return hyper[key]

    i = 0
    while (s1 := left(i)) is not None:
        if feasible(s1) is not None:
            j = 0
            while (s2 := right(j)) is not None:
                if path == "systems" or cross_check:
                    vs = insep_systems(s1, s2)
                if path == "hyperlinear" or cross_check:
                    vh = insep_hyperlinear(as_rep(0, i, s1), as_rep(1, j, s2))
                if cross_check and vs.separable != vh.separable:
                    raise AssertionError(f"paths disagree on branch pair ({i}, {j})")
                v = vs if path == "systems" else vh
                if not v.separable:
                    c = v.certificate
                    v.certificate = InsepCertificate(c.kind, c.point, c.J, c.lhs, c.rhs, c.pump, (i, j))
                    v.details["parts"] = [i, j]
                    return v
                j += 1
        i += 1
    return SepVerdict(True)


def certificate_sides(c: InsepCertificate, lhs, rhs) -> tuple:
    """The component pair (R, S) a certificate refers to, from the original inputs."""
    i, j = c.parts if c.parts else (0, 0)
    if isinstance(lhs, Formula):
        if c.kind == "system":
            return branch_systems(lhs)[i], branch_systems(rhs)[j]
        return system_to_hyperlinear(branch_systems(lhs)[i]), system_to_hyperlinear(branch_systems(rhs)[j])
    return as_hyperlinear_parts(lhs)[i], as_hyperlinear_parts(rhs)[j]


def mondec_qf(f: Formula) -> bool:
    return separability_formulas(f, negate_qf(f)).separable
