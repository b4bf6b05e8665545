"""Conformal Killing-Yano form spaces on metric Lie algebras.

The package solves, for a finite-dimensional Lie algebra with an inner
product, the linear equations cutting out conformal Killing-Yano
p-forms and their closed, coclosed and parallel refinements; classifies
the solutions through their associated vector; builds the catalog of
5-dimensional families realizing strict solutions; and verifies the
catalog's claimed dimensions, printed tensors and holonomy.
"""

from .liealg import (MetricLieAlgebra, Subspace, ToleranceConfig, ad_matrix,
                     algebra_from_dict, algebra_to_dict, bracket,
                     build_structure, center, derived_algebra, is_unimodular,
                     jacobi_residual)
from .forms import (PForm, codifferential, endo_of_form, evaluate,
                    exterior_derivative, flat, form_from_dict, form_from_terms,
                    form_gram, form_inner, form_norm, form_of_endo,
                    form_to_dict, hodge_star, interior, sharp, volume_form,
                    wedge, zero_form)
from .connection import (Connection, HolonomyReport, curvature,
                         curvature_operators, holonomy_algebra, levi_civita)
from .cky import (CKYClassification, IdentityReport, SolutionSpace,
                  assemble_cky_system, cky_residual, extract_associated_vector,
                  solve_form_space, structural_identity_report,
                  symmetrized_residual)
from .catalog import (FAMILY_IDS, BasisChangeReport, FamilyInstance,
                      FamilySpec, basis_change_verify, build_family,
                      catalog_rows, central_extension, sample_grid,
                      table1_ingredients)
from .verify import (RunReport, run_verify, verify_all, verify_grs,
                     verify_holonomy, verify_identities, verify_tables)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
