"""Two-state-vector nonlinear quantum dynamics with complex coupling ``g = a + i b``.

The pair ``(psi, phi)`` evolves under

    i dpsi/dt = H psi + g   <phi|psi> phi
    i dphi/dt = H phi + g^* <psi|phi> psi

Modules: :mod:`~nlqm.hilbert` (states, operators, observables),
:mod:`~nlqm.reduced` (four scalar observables and their closed forms),
:mod:`~nlqm.analytic` (closed-form pair, asymptotics, S matrix),
:mod:`~nlqm.integrator` (numerical integration), :mod:`~nlqm.appendix`
(single-state and real-g special cases), :mod:`~nlqm.spatial` (1D grid
solver) and :mod:`~nlqm.cli` (command line).
"""

from .analytic import (AnalyticSolutionSpec, AsymptoticPair, SMatrix, asymptotic_pair, density_matrix_analytic,
                       exceptional_solution, interaction_picture, random_orthonormal_pair, s_matrix,
                       spec_from_directions, state_pair_at, validate_spec)
from .errors import (ContractViolation, DegenerateInputError, ExistenceWindowError, IntegrationError, NLQMError,
                     ValidationError, WrongCaseError)
from .hilbert import (Coupling, DensityMatrix, HermitianOperator, ReducedState, StateVector, density_matrix,
                      evolve_linear, inner_product, purity, random_hermitian, reduced_observables,
                      schwarz_parameter)
from .integrator import Trajectory, integrate, integrate_linearized, nonlinear_rhs
from .reduced import (BranchReport, ReducedParams, classify_branch, gamma_analytic, integrate_reduced,
                      omega0_from_state, reduced_rhs, tau_delta_analytic)
from .stepper import IntegratorConfig, solve

__all__ = [
    "AnalyticSolutionSpec", "AsymptoticPair", "BranchReport", "ContractViolation", "Coupling", "DegenerateInputError",
    "DensityMatrix", "ExistenceWindowError", "HermitianOperator", "IntegrationError", "IntegratorConfig",
    "NLQMError", "ReducedParams", "ReducedState", "SMatrix", "StateVector", "Trajectory", "ValidationError",
    "WrongCaseError", "asymptotic_pair", "classify_branch", "density_matrix", "density_matrix_analytic",
    "evolve_linear", "exceptional_solution", "gamma_analytic", "inner_product", "integrate", "integrate_linearized",
    "integrate_reduced", "interaction_picture", "nonlinear_rhs", "omega0_from_state", "purity", "random_hermitian",
    "random_orthonormal_pair", "reduced_observables", "reduced_rhs", "s_matrix", "schwarz_parameter", "solve",
    "spec_from_directions", "state_pair_at", "tau_delta_analytic", "validate_spec",
]
