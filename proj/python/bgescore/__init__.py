"""BGe marginal-likelihood scoring for Gaussian DAG models."""

from bgescore._core import (
    BiasStudyConfig,
    ConfigError,
    CyclicGraphError,
    Dag,
    Dataset,
    DomainError,
    IllegalMoveError,
    McmcConfig,
    NotPositiveDefiniteError,
    ParseError,
    PriorConfig,
    SchemaError,
    ScoreContext,
    ScoreMode,
    SearchConfig,
    bias_study,
    dag_log_score,
    default_prior,
    hill_climb,
    is_acyclic,
    load_dag,
    load_dataset,
    local_log_score,
    log_marginal_subset,
    log_multigamma,
    markov_equivalent,
    parse_dag,
    random_dag,
    sample_gaussian_data,
    score_mode_from_string,
    structure_mcmc,
)

__all__ = [
    "BiasStudyConfig",
    "ConfigError",
    "CyclicGraphError",
    "Dag",
    "Dataset",
    "DomainError",
    "IllegalMoveError",
    "McmcConfig",
    "NotPositiveDefiniteError",
    "ParseError",
    "PriorConfig",
    "SchemaError",
    "ScoreContext",
    "ScoreMode",
    "SearchConfig",
    "bias_study",
    "dag_log_score",
    "default_prior",
    "hill_climb",
    "is_acyclic",
    "load_dag",
    "load_dataset",
    "local_log_score",
    "log_marginal_subset",
    "log_multigamma",
    "markov_equivalent",
    "parse_dag",
    "random_dag",
    "sample_gaussian_data",
    "score_mode_from_string",
    "structure_mcmc",
]

__version__ = "0.1.0"
