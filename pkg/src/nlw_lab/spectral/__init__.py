"""Radial grids, transforms, multipliers and norms."""

from .grid import RadialField, RadialGrid, SpectralField, sphere_area
from .io import field_from_bytes, field_to_bytes, read_field, write_field, write_field_csv
from .operators import (
    DecayError,
    LPBand,
    apply_multiplier,
    besov_norm_half,
    check_decay,
    dual_weights,
    fractional_derivative,
    l2_norm,
    lp_band_norms,
    lp_block,
    lp_cutoff,
    lp_multiplier,
    lp_range,
    physical_weights,
    radial_derivative,
    sobolev_norm,
    spectral_l2_norm,
    weighted_L2_norm,
)
from .transforms import forward_samples, forward_transform, hankel_kernel, inverse_samples, inverse_transform

__all__ = [
    "RadialGrid",
    "RadialField",
    "SpectralField",
    "LPBand",
    "DecayError",
    "sphere_area",
    "forward_transform",
    "inverse_transform",
    "forward_samples",
    "inverse_samples",
    "hankel_kernel",
    "fractional_derivative",
    "apply_multiplier",
    "radial_derivative",
    "lp_block",
    "lp_band_norms",
    "lp_cutoff",
    "lp_multiplier",
    "lp_range",
    "besov_norm_half",
    "sobolev_norm",
    "l2_norm",
    "spectral_l2_norm",
    "weighted_L2_norm",
    "physical_weights",
    "dual_weights",
    "check_decay",
    "field_to_bytes",
    "field_from_bytes",
    "write_field",
    "read_field",
    "write_field_csv",
]
