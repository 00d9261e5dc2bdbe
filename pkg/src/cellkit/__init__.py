"""Kazhdan-Lusztig cells, the a-function and based rings of finite Coxeter groups."""

from .coxeter import CoxeterSpec, CoxeterSystem, build_system, parse_spec
from .polys import LaurentPoly, Poly
from .hecke import (CONVENTION_VERSION, CacheError, KLTable, SizePolicyError, a_function,
                    a_value_of_cell, build_kl_table, cbasis_product, left_products,
                    load_kl_table, naive_kl_polynomial, save_kl_table)
from .cells import (CellDecomposition, CellPredicateReport, cell_report, compute_cells,
                    h_cell, h_cell_involutions, is_nice, is_regular, is_strongly_regular,
                    parabolic_longest_elements)
from .based_rings import (BasedModule, BasedRing, EnumerationResult, QuotientError,
                          basis_cells, cell_quotient_ring, dihedral_small_quotient_ring,
                          enumerate_transitive_modules, nice_reduced_ring, quadratic_ring,
                          small_quotient_ring, special_value, trivial_ring)
from .graphs import Graph, ade_census, classify_spectral_graphs

__version__ = "0.1.0"
