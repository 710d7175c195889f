"""Measurement incompatibility, joint measurability and Fisher-information tradeoffs."""

from __future__ import annotations

__version__ = "0.1.0"

from .bell import ChshResult, chsh_commutator_bound, chsh_max_general, chsh_max_qubit, restricted_tau
from .chamber import (MeasurementSchedule, chamber_export, gm_wmse_bound, membership_qubit,
                      optimal_fisher, realize_qubit)
from .errors import (CapExceededError, IncompatError, InfeasibleAdjustmentError, NotPSDError,
                     RankDeficiencyError, SingularModelError, SolverError, UnsupportedInputError,
                     ValidationError)
from .estimation import (ParamPoint, central_point, fisher_matrix, frame_superoperators,
                         full_param_point, gm_trace, metric_adjusted, qfi_matrix, qubit_param_point,
                         sld)
from .linalg import (OperatorBasis, gell_mann_basis, psd_functions, spectral_decompose, trace_norm,
                     unvectorize, vectorize)
from .measures import (IncompatReport, RobustnessResult, busch_criterion, criterion_at_point,
                       noise_threshold, robustness, tau, tau_complementary, tau_doubly_stochastic,
                       tau_qubit_pair, tau_von_neumann, tau_von_neumann_noisy, uncertainty_check,
                       uncertainty_check_eta)
from .povm import (Povm, SharpObservable, coarse_grain, depolarize, epsilon_smooth, fourier_pair,
                   from_observable, pauli_povm, qubit_binary_povm, qubit_mub_triple, trine_qubit,
                   validate)
from .sdp import JointSolution, SdpSolution, joint_feasibility, min_trace_dominating, verify_solution
