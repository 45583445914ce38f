"""Mean-field variational inference, batched Gibbs sampling and iterative MLE
for community detection under the two-parameter stochastic block model."""

from .exceptions import (
    DegeneratePartitionError,
    DegenerateSeparationError,
    DivergenceError,
    DomainError,
    InputError,
    NumericalError,
    ParseError,
    RegimeError,
    SBMError,
)
from .gibbs import gibbs, sample_beta, sample_categorical, sample_rows
from .initializers import corrupt_truth, spectral_init
from .loss import l1_loss, misclustered_count
from .mle import h_prime, iterative_mle
from .model import (
    AdjacencyMatrix,
    BlockParams,
    HardAssignment,
    PriorConfig,
    SoftAssignment,
    assignment_from_labels,
    harden,
    labels_from_assignment,
    sample_assignment,
    sample_sbm,
)
from .numerics import BetaParams, digamma, kl_beta, kl_categorical, log_gamma
from .theory import (
    RateReport,
    chernoff_identity_check,
    contraction_and_budget,
    minimax_bound,
    rate_report,
    renyi_I,
    t_lambda_star,
)
from .trace import IterationRecord, IterationTrace
from .variational import (
    VariationalState,
    bcavi,
    cavi_sequential,
    elbo,
    h_update,
    t_lambda_digamma,
    t_lambda_log,
    update_beta_params,
)

__version__ = "0.1.0"
