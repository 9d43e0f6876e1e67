"""Flux-form semi-Lagrangian schemes for linear and nonlinear diffusion."""
from .advection1d import advdiff_step, ffsl_advection_step, sl_advdiff_step
from .diffusion1d import (
    ffsl_diffusion_flux,
    ffsl_diffusion_step,
    ffsl_nonlinear_step,
    interface_displacement,
    nonlinear_interface_displacement,
    sl_diffusion_step,
    sl_displacement,
)
from .grid import Grid1D, Grid2D, make_grid_1d, make_grid_2d, wrap_point
from .models import (
    ConstantDiffusivity,
    ConstantVelocity,
    PowerLawDiffusivity,
    SpaceTimeDiffusivity,
    SpaceTimeVelocity,
)
from .multidim import DiagonalDiffusivity2D, facet_displacement_2d, ffsl_diffusion_step_2d
from .reconstruct import (
    PiecewiseReconstruction,
    build_reconstruction,
    integrate_reconstruction,
    lagrange_interpolate,
    sliding_average,
)

__version__ = "0.1.0"
