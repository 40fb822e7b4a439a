"""Boosted-tree prediction of activated reserves with exact additive explanations.

Thin wrapper over the C++ core. The heavy lifting (feature engineering,
histogram boosting under L2 or pinball loss, path-dependent attribution with
a brute-force verification oracle, the evaluation protocol) lives in
`afrrcast._core`; this package just re-exports it.
"""

__version__ = "0.1.0"

from afrrcast._core import (
    DataError,
    Features,
    FitReport,
    Manifest,
    Model,
    Table,
    UsageError,
    coverage,
    engineer_features,
    fit,
    fit_validated,
    importance_table,
    load_table,
    make_splits,
    mean_quantile_loss,
    quantile_linear,
    r2,
    select_variant,
    subset,
    synth_generate,
)

__all__ = [
    "DataError",
    "Features",
    "FitReport",
    "Manifest",
    "Model",
    "Table",
    "UsageError",
    "coverage",
    "engineer_features",
    "fit",
    "fit_validated",
    "importance_table",
    "load_table",
    "make_splits",
    "mean_quantile_loss",
    "quantile_linear",
    "r2",
    "select_variant",
    "subset",
    "synth_generate",
]
