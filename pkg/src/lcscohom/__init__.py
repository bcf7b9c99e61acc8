"""Exact cohomology of left-invariant lcs structures on Lie algebras.

All arithmetic is over the rationals (gmpy2.mpq).  The main entry points:

>>> from lcscohom import builtin, full_table
>>> e = builtin("rh3")
>>> full_table(e.structure, [0], ["deRham"]).dim_of("deRham", 1, 0)
3
"""

from .catalog import CatalogEntry, GoldenTable, builtin, golden_diff, load_golden
from .cohomology import (THEORIES, CohomologyGroup, CohomologyTable, cohomology, critical_weights,
                         duality_bc_aeppli, full_table, has_delta_closed_representative, hlc_bc_aeppli,
                         laplacian_kernels, lcs_hlc_check, natural_maps, poincare_hodge,
                         poincare_symplectic, satisfies_lemma, verify_image_equalities)
from .exterior import (AlmostComplexStructure, Bivector, Form, GradedOperator, Metric, canonical_sign,
                       hodge_star, interior_product, j_on_forms, lefschetz_decompose, lefschetz_operators,
                       omega_inverse, subspace_ops, symplectic_star, wedge)
from .lcs import (LcsStructure, OperatorPencil, adjoint, compatible_triple, d_pencil, darboux_basis,
                  delta_pencil, lee_form, twisted_leibniz_check, verify_bidifferential, verify_commutations)
from .liealg import LieAlgebra, ce_differential, check_jacobi, is_unimodular, load_algebra, parse_salamon
from .linalg import Matrix, Subspace

__version__ = "0.1.0"

__all__ = [
    "AlmostComplexStructure", "Bivector", "CatalogEntry", "CohomologyGroup", "CohomologyTable", "Form",
    "GoldenTable", "GradedOperator", "LcsStructure", "LieAlgebra", "Matrix", "Metric", "OperatorPencil",
    "Subspace", "THEORIES", "adjoint", "builtin", "canonical_sign", "ce_differential", "check_jacobi",
    "cohomology", "compatible_triple", "critical_weights", "d_pencil", "darboux_basis", "delta_pencil",
    "duality_bc_aeppli", "full_table", "golden_diff", "has_delta_closed_representative", "hlc_bc_aeppli",
    "hodge_star", "interior_product", "is_unimodular", "j_on_forms", "laplacian_kernels", "lcs_hlc_check",
    "lee_form", "lefschetz_decompose", "lefschetz_operators", "load_algebra", "load_golden", "natural_maps",
    "omega_inverse", "parse_salamon", "poincare_hodge", "poincare_symplectic", "satisfies_lemma",
    "subspace_ops", "symplectic_star", "twisted_leibniz_check", "verify_bidifferential",
    "verify_commutations", "verify_image_equalities", "wedge",
]
