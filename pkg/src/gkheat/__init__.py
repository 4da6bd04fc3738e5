"""Heat conduction with flux relaxation and nonlocal flux diffusion on a
finite interval: a contour-integral solver with series and finite-difference
cross-checks."""

from .contour import (ContourNode, ContourSpec, build_contour,
                      build_contour_pair, cardano_root, contour_height,
                      default_spec, tail_nodes, validate_contour)
from .fd import FdGrid, FdInstabilityError, fd_energy_audit, fd_solve, grid_for
from .params import (ConditioningError, DegenerateRootsError, DerivedParams,
                     PhysicalParams, derive_params, dispersion_roots,
                     eigen_matrices)
from .series import (FourierCoeffs, SeriesMode, fourier_coeffs,
                     mode_frequencies, series_initial_data, series_laser_flash)
from .signals import (SourceTerm, SpaceProfile, TimeSignal, finite_fourier,
                      load_profile_csv, load_signal_csv, time_transform)
from .solver import (Scenario, StateField, evaluate_fastpath_laserflash,
                     evaluate_solution, fastpath_trace_transforms,
                     global_relation_residual, solution_fourier, solve_field)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
