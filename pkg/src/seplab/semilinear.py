"""Linear, semilinear and hyperlinear subsets of N^d."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from seplab.diophantine import EqSystem, feasible, minimal_solutions, solve_nat
from seplab.presburger import Formula, FragmentError, dnf_branches, branch_to_system, is_quantifier_free, normalize
from seplab.vecnum import DimensionError, nat_vec


def _clean_periods(periods: Iterable[Sequence[int]], dim: int) -> tuple:
    out = set()
    for p in periods:
        p = nat_vec(p)
        if len(p) != dim:
            raise DimensionError(f"period {p} is not of dimension {dim}")
        if any(p):
            out.add(p)
    return tuple(sorted(out))


@dataclass(frozen=True)
class LinearSet:
    """base + periods*"""

    base: tuple
    periods: tuple = ()

    def __post_init__(self):
        base = nat_vec(self.base)
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "periods", _clean_periods(self.periods, len(base)))

    @property
    def dim(self) -> int:
        return len(self.base)


@dataclass(frozen=True)
class HyperlinearRep:
    """bases + periods*: every base shares the period cone."""

    dim: int
    bases: tuple = ()
    periods: tuple = ()

    def __post_init__(self):
        bases = set()
        for b in self.bases:
            b = nat_vec(b)
            if len(b) != self.dim:
                raise DimensionError(f"base {b} is not of dimension {self.dim}")
            bases.add(b)
        object.__setattr__(self, "bases", tuple(sorted(bases)))
        object.__setattr__(self, "periods", _clean_periods(self.periods, self.dim))

    @property
    def is_empty(self) -> bool:
        return not self.bases

    def components(self) -> list:
        return [LinearSet(b, self.periods) for b in self.bases]

    def to_json(self) -> dict:
        return {"dim": self.dim, "bases": [list(b) for b in self.bases],
                "periods": [list(p) for p in self.periods]}


@dataclass(frozen=True)
class SemilinearRep:
    """A finite union of linear sets (possibly none, the empty set)."""

    dim: int
    components: tuple = ()

    def __post_init__(self):
        comps = tuple(self.components)
        for c in comps:
            if c.dim != self.dim:
                raise DimensionError(f"component of dimension {c.dim} in a rep of dimension {self.dim}")
        object.__setattr__(self, "components", comps)

    @property
    def is_empty(self) -> bool:
        return not self.components

    def hyperlinear_parts(self) -> list:
        return [HyperlinearRep(self.dim, (c.base,), c.periods) for c in self.components]

    def union(self, other: "SemilinearRep") -> "SemilinearRep":
        if other.dim != self.dim:
            raise DimensionError("union of reps of different dimension")
        return SemilinearRep(self.dim, self.components + other.components)

    def to_json(self) -> dict:
        return {"dim": self.dim, "components": [
            {"base": list(c.base), "periods": [list(p) for p in c.periods]} for c in self.components]}

    @classmethod
    def from_json(cls, data: dict) -> "SemilinearRep":
        dim = int(data["dim"])
        return cls(dim, tuple(LinearSet(c["base"], tuple(c.get("periods", ()))) for c in data["components"]))


def rep_from_json(data: dict):
    """SemilinearRep for {"components": ...}, HyperlinearRep for {"bases": ...}."""
    if "components" in data:
        return SemilinearRep.from_json(data)
    if "bases" in data:
        return HyperlinearRep(int(data["dim"]), tuple(data["bases"]), tuple(data.get("periods", ())))
    raise ValueError("expected a rep with 'components' or 'bases'")


def as_hyperlinear_parts(rep) -> list:
    if isinstance(rep, HyperlinearRep):
        return [rep]
    if isinstance(rep, SemilinearRep):
        return rep.hyperlinear_parts()
    if isinstance(rep, LinearSet):
        return [HyperlinearRep(rep.dim, (rep.base,), rep.periods)]
    raise TypeError(f"not a set representation: {rep!r}")


# ---------------------------------------------------------------- membership


def _cone_member(periods: Sequence[Sequence[int]], target: Sequence[int]) -> Optional[tuple]:
    """Coefficients lam >= 0 with sum lam_i periods_i = target, or None."""
    if any(t < 0 for t in target):
        return None
    d = len(target)
    matrix = [[p[i] for p in periods] for i in range(d)]
    return solve_nat(matrix, list(target), len(periods))


def member_witness(rep, v: Sequence[int]) -> Optional[tuple]:
    """(component base, coefficient vector over its periods) or None."""
    v = tuple(v)
    for part in as_hyperlinear_parts(rep):
        if len(v) != part.dim:
            raise DimensionError(f"point of dimension {len(v)} for a set of dimension {part.dim}")
        for b in part.bases:
            lam = _cone_member(part.periods, [x - y for x, y in zip(v, b)])
            if lam is not None:
                return b, lam
    return None


def member(rep, v: Sequence[int]) -> bool:
    return member_witness(rep, v) is not None


# ---------------------------------------------------------------- conversions


def system_to_hyperlinear(sys: EqSystem) -> HyperlinearRep:
    inhom, hilbert = minimal_solutions(sys)
    m = sys.proj_dim
    return HyperlinearRep(m, tuple(x[:m] for x in inhom), tuple(h[:m] for h in hilbert))


def hyperlinear_to_semilinear(rep: HyperlinearRep) -> SemilinearRep:
    return SemilinearRep(rep.dim, tuple(rep.components()))


def formula_to_hyperlinear_parts(f: Formula) -> list:
    """One hyperlinear rep per (nonempty) branch of an existential formula."""
    out = []
    for b in dnf_branches(normalize(f)):
        sys = branch_to_system(b, f.free)
        if feasible(sys) is None:
            continue
        out.append(system_to_hyperlinear(sys))
    return out


def qf_formula_to_semilinear(f: Formula) -> SemilinearRep:
    if not is_quantifier_free(f.body):
        raise FragmentError("qf_formula_to_semilinear needs a quantifier-free formula")
    return formula_to_semilinear(f)


def formula_to_semilinear(f: Formula) -> SemilinearRep:
    comps = []
    seen = set()
    for part in formula_to_hyperlinear_parts(f):
        for c in part.components():
            if c not in seen:
                seen.add(c)
                comps.append(c)
    return SemilinearRep(len(f.free), tuple(comps))


def rep_to_system(rep: HyperlinearRep) -> EqSystem:
    """K = pi({(v, beta, lam) : v = sum beta_b b + sum lam_p p, sum beta = 1})."""
    d, nb, np_ = rep.dim, len(rep.bases), len(rep.periods)
    ncols = d + nb + np_
    matrix, rhs = [], []
    for i in range(d):
        row = [0] * ncols
        row[i] = 1
        for k, b in enumerate(rep.bases):
            row[d + k] = -b[i]
        for k, p in enumerate(rep.periods):
            row[d + nb + k] = -p[i]
        matrix.append(row)
        rhs.append(0)
    row = [0] * ncols
    for k in range(nb):
        row[d + k] = 1
    matrix.append(row)
    rhs.append(1)
    return EqSystem(matrix, rhs, d, ncols)
