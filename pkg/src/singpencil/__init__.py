"""Regular eigenvalues of singular matrix pencils.

The main entry points are :func:`project_solve`, :func:`augment_solve` and
:func:`perturb_solve`, followed by :func:`classify_spectrum` to separate finite
from infinite true eigenvalues and :func:`diagnose_rank` to check the normal
rank that was used.
"""

from .applications import (DeltaPencils, DeterminantalRep, NoCommonMu, Root2D, ShapeMismatch,
                           build_delta_pencils, build_double_eig_pencil, find_double_eigs,
                           recover_mu, solve_bivariate_lambda, transmission_zeros, uniform_rep)
from .backend import BackendFailure, eig_triplets
from .classify import ClassifierConfig, FlagReason, classify_spectrum, compute_gaps, extract_finite
from .kcf import KcfSpec, SingularTransform, build_canonical, generate
from .nrank import RankDiagnosis, Verdict, diagnose_rank, estimate_normal_rank
from .pencil import Pencil, PencilError, ProjectiveValue, chordal_distance, to_tall
from .solvers import (ClassifiedSpectrum, EigClass, InvalidRank, Method, SolverConfig,
                      augment_solve, perturb_solve, project_solve, project_solve_permutation,
                      reducing_subspace_basis, solve)

__version__ = "0.1.0"

__all__ = [
    "BackendFailure", "ClassifiedSpectrum", "ClassifierConfig", "DeltaPencils",
    "DeterminantalRep", "EigClass", "FlagReason", "InvalidRank", "KcfSpec", "Method",
    "NoCommonMu", "Pencil", "PencilError", "ProjectiveValue", "RankDiagnosis", "Root2D",
    "ShapeMismatch", "SingularTransform", "SolverConfig", "Verdict", "augment_solve",
    "build_canonical", "build_delta_pencils", "build_double_eig_pencil", "chordal_distance",
    "classify_spectrum", "compute_gaps", "diagnose_rank", "eig_triplets",
    "estimate_normal_rank", "extract_finite", "find_double_eigs", "generate",
    "perturb_solve", "project_solve", "project_solve_permutation", "recover_mu",
    "reducing_subspace_basis", "solve", "solve_bivariate_lambda", "to_tall",
    "transmission_zeros", "uniform_rep",
]
