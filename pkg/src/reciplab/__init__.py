"""Exact arithmetic for abelian compatible systems over cyclotomic fields of class number one.

Modules: ``nf`` (field arithmetic), ``residue`` (degree-one reductions),
``primes`` (split primes), ``hecke`` (type A0 characters), ``compsys``
(datasets), ``reconstruct`` (characters from datasets), ``kummer``
(ell-th power checks) and ``cli``.
"""

from .compsys import CompatibleSystemDataset, generate_dataset, verify_compatibility
from .errors import ReciprocityError
from .hecke import FiniteOrderCharacter, HeckeCharacter, PrimeComponent, TwoPart
from .nf import CyclotomicField, FieldElement
from .primes import SplitPrime
from .reconstruct import ReconstructConfig, reconstruct_system

__all__ = [
    "CompatibleSystemDataset", "CyclotomicField", "FieldElement", "FiniteOrderCharacter", "HeckeCharacter",
    "PrimeComponent", "ReciprocityError", "ReconstructConfig", "SplitPrime", "TwoPart", "generate_dataset",
    "reconstruct_system", "verify_compatibility",
]

__version__ = "0.1.0"
