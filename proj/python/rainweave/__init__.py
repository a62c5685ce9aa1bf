"""Exemplar-based rain structure transfer (Python bindings)."""

from ._core import (  # noqa: F401
    ConfigError,
    DimensionError,
    ExtractionError,
    FormatError,
    IoError,
    PatchBank,
    RainweaveError,
    TransferConfig,
    default_overlap,
    enumerate_valid_positions,
    generate_pairs,
    load_image,
    load_mask,
    min_cut_horizontal,
    min_cut_vertical,
    overlap_error_surface,
    plan_grid,
    residual_of,
    sample_rain_patches,
    save_image,
    transfer,
)

__version__ = "0.1.0"
