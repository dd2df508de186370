"""Entanglement-assisted classical capacity of the depolarizing qubit channel.

Exact two-qubit density-matrix evolution, Monte Carlo coincidence counting,
mutual-information estimation with Poisson error bars, and the closed-form
capacity to compare against.
"""

__version__ = "0.1.0"

from .channels import (
    DepolarizingParams,
    LcTimingModel,
    depolarize_qubit_a,
    effective_noise,
    residual_noise,
    timing_to_pexp,
    werner_input,
)
from .experiment import (
    CountsTable,
    EstimationError,
    ExperimentConfig,
    SweepRecord,
    estimate_conditionals,
    estimate_mutual_information,
    run_sweep,
    simulate_counts,
    true_cell_probabilities,
)
from .information import (
    ConditionalTable,
    MutualInfoResult,
    analytic_conditional,
    eacc,
    mutual_information,
    mutual_information_uniform,
)
from .quantum_core import (
    BellState,
    DensityMatrix,
    PauliOp,
    apply_on_qubit_a,
    bell_density,
    bell_measurement_probs,
    encode_message,
    pauli_matrix,
)
