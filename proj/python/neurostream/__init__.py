"""Bi-hemispheric EEG emotion classification toolkit.

Thin python layer over the C++ core: dataset synthesis and I/O,
preprocessing, spectral features, the two model variants, the training
harness, the 8-interval temporal scan, and the gradient audit.
"""

from ._core import (
    CHANNELS,
    EMOTIONS,
    ComparisonTable,
    ConfigError,
    DataError,
    Dataset,
    EvalReport,
    ExperimentConfig,
    FilterSpec,
    GradSuiteRow,
    IntervalResult,
    LossCurvePoint,
    Manifest,
    ModelConfig,
    ModelParams,
    NumericError,
    Prediction,
    PreprocessConfig,
    Recording,
    ShapeError,
    SpectralConfig,
    SynthSpec,
    TemporalScanReport,
    TrainResult,
    VariantRow,
    __version__,
    band_bin_indices,
    compare_variants,
    evaluate,
    fft,
    fft_real,
    gen_synthetic,
    hann_window,
    ifft,
    left_channels,
    load_csv,
    load_manifest,
    load_model,
    mirror_channels,
    param_count,
    predict,
    preprocess_dataset,
    right_channels,
    run_gradient_suite,
    save_csv,
    save_manifest,
    save_model,
    save_scan_csv,
    stft_band_magnitudes,
    temporal_scan,
    train,
)

__all__ = [
    "CHANNELS",
    "EMOTIONS",
    "ComparisonTable",
    "ConfigError",
    "DataError",
    "Dataset",
    "EvalReport",
    "ExperimentConfig",
    "FilterSpec",
    "GradSuiteRow",
    "IntervalResult",
    "LossCurvePoint",
    "Manifest",
    "ModelConfig",
    "ModelParams",
    "NumericError",
    "Prediction",
    "PreprocessConfig",
    "Recording",
    "ShapeError",
    "SpectralConfig",
    "SynthSpec",
    "TemporalScanReport",
    "TrainResult",
    "VariantRow",
    "__version__",
    "band_bin_indices",
    "compare_variants",
    "evaluate",
    "fft",
    "fft_real",
    "gen_synthetic",
    "hann_window",
    "ifft",
    "left_channels",
    "load_csv",
    "load_manifest",
    "load_model",
    "mirror_channels",
    "param_count",
    "predict",
    "preprocess_dataset",
    "right_channels",
    "run_gradient_suite",
    "save_csv",
    "save_manifest",
    "save_model",
    "save_scan_csv",
    "stft_band_magnitudes",
    "temporal_scan",
    "train",
]
