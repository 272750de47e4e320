"""Variational statics toolkit.

Finite-dimensional static systems as constraint sets plus work forms,
with jet-based stability tests, constitutive sets via the virtual-work
inequality, partially controlled systems, composition, and a discrete
variational dynamics solver.
"""

from .geometry import Covector, EuclideanSpace, Point, Vector, pair, product_space
from .jets import Jet, JetSign, classify
from .legendre import Containment, ConstitutiveSet, skate_constitutive
from .processes import AdmissibilityError, Process, WorkSamples, work_along, work_jet
from .systems import StaticSystem
from .equilibrium import EquilibriumStatus, EquilibriumVerdict, jet_equilibrium_check, virtual_work_check

__all__ = [
    "AdmissibilityError",
    "Containment",
    "ConstitutiveSet",
    "Covector",
    "EquilibriumStatus",
    "EquilibriumVerdict",
    "EuclideanSpace",
    "Jet",
    "JetSign",
    "Point",
    "Process",
    "StaticSystem",
    "Vector",
    "WorkSamples",
    "classify",
    "jet_equilibrium_check",
    "pair",
    "product_space",
    "skate_constitutive",
    "virtual_work_check",
    "work_along",
    "work_jet",
]

__version__ = "0.1.0"
