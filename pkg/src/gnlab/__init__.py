"""Exact construction and machine verification of a triangular chain of
Lie algebras, their determinant Casimir invariants, and the integrable
Hamiltonian systems those invariants generate."""

from .algebra import (GnAlgebra, GnBasis, Generator, InvariantCount,
                      beltrametti_blasi, build_gn, canonical_order,
                      check_jacobi, check_levi, check_structure,
                      check_subalgebra_chain, commutator_matrix,
                      compute_centre, ideal_complement, triangular)
from .casimir import (AnsatzSolution, CasimirResult, casimir, casimir_matrix,
                      check_grading, check_uniqueness, solve_ansatz,
                      verify_annihilation, verify_intertwining)
from .coalgebra import (IndependenceResult, IntegralSet, PhaseContext,
                        TensorSpace, building_block,
                        building_block_expansion, canonical_bracket,
                        check_independence, check_involution,
                        check_realization_homomorphism,
                        check_route_equivalence, check_vanishing,
                        harmonic_hamiltonian, integral_set,
                        integrals_via_coproduct, integrals_via_sum_of_squares,
                        primitive_coproduct, window)
from .dynamics import (DriftStats, HamiltonianSystem, Trajectory,
                       compile_evaluator, drift_report, integrate)
from .poly import (BudgetExceeded, MissingVariable, Polynomial, PolyMatrix,
                   RegistryMismatch, VarId, VarRegistry, det, exact_div,
                   nullspace, parse_polynomial, rank, rank_rational, rref,
                   sparse_nullspace)
from .reports import Report
from .representations import (CoadjointField, MatrixRep, apply_field,
                              build_coadjoint, build_faithful_rep,
                              build_quotient_rep, check_field_homomorphism,
                              check_homomorphism)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
