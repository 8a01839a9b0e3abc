"""Coherence analysis and sampling design for Wigner-D and spherical-harmonic sensing matrices."""
from .coherence import (CoherenceReport, SensingMatrix, build_sensing_matrix, coherence_report,
                        max_equal_order_product, mutual_coherence, theorem_lower_bound, welch_bound)
from .grids import Grid, ModeIndex, enumerate_modes, min_samples, mode_count
from .optimize import OptimizerConfig, OptimizerRun, pnorm_objective, run
from .specfun import spherical_harmonic, wigner_d, wigner_D
from .wigner3j import threej

__version__ = "0.1.0"

__all__ = [
    "CoherenceReport", "Grid", "ModeIndex", "OptimizerConfig", "OptimizerRun", "SensingMatrix",
    "build_sensing_matrix", "coherence_report", "enumerate_modes", "max_equal_order_product",
    "min_samples", "mode_count", "mutual_coherence", "pnorm_objective", "run", "spherical_harmonic",
    "theorem_lower_bound", "threej", "welch_bound", "wigner_D", "wigner_d",
]
