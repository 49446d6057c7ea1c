"""Python bindings for the wellvoice feature pipeline and regressor."""

from ._core import (
    ACOUSTIC_DIM,
    FUNCTIONAL_NAMES,
    MEASUREMENTS,
    READ_RESPONSE_DIM,
    SESSION_DIM,
    SPONTANEOUS_RESPONSE_DIM,
    WellvoiceError,
    ccc,
    cross_validate,
    extract,
    frame_features,
    functionals,
    load_dataset,
    pearson,
    permutation_p,
    predict,
    read_wav,
    select_top_n,
    significance_stars,
    synth,
    train,
)

__all__ = [
    "ACOUSTIC_DIM",
    "FUNCTIONAL_NAMES",
    "MEASUREMENTS",
    "READ_RESPONSE_DIM",
    "SESSION_DIM",
    "SPONTANEOUS_RESPONSE_DIM",
    "WellvoiceError",
    "ccc",
    "cross_validate",
    "extract",
    "frame_features",
    "functionals",
    "load_dataset",
    "pearson",
    "permutation_p",
    "predict",
    "read_wav",
    "select_top_n",
    "significance_stars",
    "synth",
    "train",
]
