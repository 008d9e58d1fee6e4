"""Exact noncontextuality tests for prepare-transform-measure scenarios."""

from .elimination import IneqSystem, eliminate, eliminate_all, to_original
from .fragment import DataTable, GptFragment, lump, predict, stabilizer_qubit_fragment, validate
from .identities import IdentitySet, all_identities
from .model import OntModel, build, verify
from .polytopes import HPolytope, VRep, enumerate_vertices
from .program import NcInequality, NcProgram, certify, nc_bound, program_for, witness_to_inequality
from .robustness import robustness

__all__ = [
    "DataTable", "GptFragment", "HPolytope", "IdentitySet", "IneqSystem", "NcInequality",
    "NcProgram", "OntModel", "VRep", "all_identities", "build", "certify", "eliminate",
    "eliminate_all", "enumerate_vertices", "lump", "nc_bound", "predict", "program_for",
    "robustness", "stabilizer_qubit_fragment", "to_original", "validate", "verify",
    "witness_to_inequality",
]
