"""Standard, ensemble and boosting Nystrom low-rank kernel approximation."""

from ._core import (
    BoostnysError,
    NystromFactor,
    boosting_nystrom,
    ensemble_nystrom,
    frobenius_norm,
    gram_full,
    parse_method_name,
    pinv_rank_k,
    relative_error,
    ridge_solve,
    run_experiment,
    standard_nystrom,
    standardize_columns,
    sym_eig,
    welch_t_test,
)

__all__ = [
    "BoostnysError",
    "NystromFactor",
    "boosting_nystrom",
    "ensemble_nystrom",
    "frobenius_norm",
    "gram_full",
    "parse_method_name",
    "pinv_rank_k",
    "relative_error",
    "ridge_solve",
    "run_experiment",
    "standard_nystrom",
    "standardize_columns",
    "sym_eig",
    "welch_t_test",
]
