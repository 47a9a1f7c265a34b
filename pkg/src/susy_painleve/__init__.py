"""SUSY partner potentials of exactly solvable oscillators and the
Painleve IV/V solutions and coherent states they generate."""

from . import coherent, errors, painleve4, painleve5, schrodinger, specfun, susy, wronskian
from .schrodinger import SeedSolution, SusyChain, SystemSpec, ladder_chain, seed_eval

__all__ = [
    "coherent",
    "errors",
    "painleve4",
    "painleve5",
    "schrodinger",
    "specfun",
    "susy",
    "wronskian",
    "SeedSolution",
    "SusyChain",
    "SystemSpec",
    "ladder_chain",
    "seed_eval",
]

__version__ = "0.1.0"
