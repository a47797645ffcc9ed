"""Separability of Presburger-definable sets and of Z-VASS languages."""

from seplab.kernels import BACKEND
from seplab.monadic import SepVerdict, insep_hyperlinear, insep_systems, mondec_qf, separability_formulas
from seplab.presburger import parse
from seplab.regsep import regsep, regsep_oracle_path, regularity_det_pa, verify_regular_separator
from seplab.semilinear import HyperlinearRep, LinearSet, SemilinearRep
from seplab.zvass import ParikhAutomaton, Transition, ZVass, emptiness

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "HyperlinearRep", "LinearSet", "ParikhAutomaton", "SemilinearRep", "SepVerdict", "Transition",
    "ZVass", "emptiness", "insep_hyperlinear", "insep_systems", "mondec_qf", "parse", "regsep",
    "regsep_oracle_path", "regularity_det_pa", "separability_formulas", "verify_regular_separator",
]
