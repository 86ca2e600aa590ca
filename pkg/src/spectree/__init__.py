"""Trees with prescribed maximum degree and spectral radius, built from checkable certificates."""
from .alg import AlgReal, FieldSpec, parse, sqrt_of
from .chains import half_sum_tree, ratio_certificate, r_min, sqrt_tree, zero_certificate
from .spectra import (char_poly, check_bounds, check_eigen_exact, check_is_sqrt_k,
                      spectral_radius_numeric)
from .treekit import Tree, WeightedDiTree, materialize, phi_from_omega, relabel_ratios, to_undirected
from .wset import Certificate, SearchLimits, WContext, check_certificate, check_step, closure_search

__all__ = [
    "AlgReal", "FieldSpec", "parse", "sqrt_of",
    "half_sum_tree", "ratio_certificate", "r_min", "sqrt_tree", "zero_certificate",
    "char_poly", "check_bounds", "check_eigen_exact", "check_is_sqrt_k", "spectral_radius_numeric",
    "Tree", "WeightedDiTree", "materialize", "phi_from_omega", "relabel_ratios", "to_undirected",
    "Certificate", "SearchLimits", "WContext", "check_certificate", "check_step", "closure_search",
]
