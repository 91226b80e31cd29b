"""Separate two overlapping tissue layers in a grayscale microscopy image."""

from ._core import (
    Checker,
    Constant,
    CropWindow,
    ErrorSurface,
    FromImage,
    InpaintConfig,
    LayerPair,
    LayersplitError,
    Metrics,
    Orientation,
    SceneSpec,
    SolveConfig,
    SolveReport,
    Stripes,
    WeightPair,
    __version__,
    apply_weights,
    best_weights,
    bounding_window,
    compose,
    compose_field,
    descend,
    dz_dx,
    dz_dy,
    error_surface,
    evaluate,
    fill_hole,
    gradient,
    initialize_layers,
    objective,
    render_layers,
    separate,
    set_thread_count,
    simulate_overlap,
    thread_count,
    validate_regions,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
