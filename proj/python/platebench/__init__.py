"""License-plate OCR preprocessing benchmark.

Thin Python surface over the C++ core: image codecs, the preprocessing
kernels (grayscale, CLAHE in RGB, bilateral filter), synthetic plate
generation, the recognizer backends, and the statistics suite.
"""

from ._platebench import (
    PlatebenchError,
    anova_oneway,
    apply_pipeline,
    bilateral_filter,
    builtin_recognize,
    clahe_rgb,
    classify_format,
    evaluate,
    external_recognize,
    gaussian_pdf,
    generate_dataset,
    generate_plate,
    ingest_convert,
    load_image,
    mock_recognize,
    normalize_plate,
    perturb,
    roc_curve,
    runtime_summary,
    save_image,
    to_grayscale,
)

__all__ = [
    "PlatebenchError",
    "anova_oneway",
    "apply_pipeline",
    "bilateral_filter",
    "builtin_recognize",
    "clahe_rgb",
    "classify_format",
    "evaluate",
    "external_recognize",
    "gaussian_pdf",
    "generate_dataset",
    "generate_plate",
    "ingest_convert",
    "load_image",
    "mock_recognize",
    "normalize_plate",
    "perturb",
    "roc_curve",
    "runtime_summary",
    "save_image",
    "to_grayscale",
]
