"""Configuration settings for the SemiLab system.

This module contains all configuration settings that can be
customized for SemiLab through environment variables.
"""
import os
from typing import Dict, Any

# Logging configuration
LOG_LEVEL = os.environ.get("SEMILAB_LOG_LEVEL", "INFO")
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

# Report output
OUTPUT_DIR = os.environ.get("SEMILAB_OUTPUT_DIR", "reports")
REPORT_FORMATS = ("json", "csv")

# Numerical tolerances
EQ_TOL = float(os.environ.get("SEMILAB_EQ_TOL", 1e-10))
ARGMAX_TOL = float(os.environ.get("SEMILAB_ARGMAX_TOL", 1e-12))
SPECTRAL_TOL = float(os.environ.get("SEMILAB_SPECTRAL_TOL", 1e-8))
EXP_TOL = float(os.environ.get("SEMILAB_EXP_TOL", 1e-12))

# Solver limits
EIG_MAX_DIM = int(os.environ.get("SEMILAB_EIG_MAX_DIM", 512))
POWER_ITER_CAP = int(os.environ.get("SEMILAB_POWER_ITER_CAP", 10000))
TAYLOR_TERM_CAP = 200

# Spectral artifact detection
TAIL_FRACTION = 0.25
ARTIFACT_THRESHOLD = 0.99

# Sampling
DEFAULT_SEED = int(os.environ.get("SEMILAB_DEFAULT_SEED", 0))
DEFAULT_TRIALS = int(os.environ.get("SEMILAB_DEFAULT_TRIALS", 1000))

# Default run parameters for the CLI
DEFAULT_DIM = 64
DEFAULT_DIMS = (8, 32, 128)
DEFAULT_GRID = "0:10:0.1"
DEFAULT_OMEGA = (1.0, -2.0, 3.141592)


# Get full configuration dictionary
def get_config() -> Dict[str, Any]:
    """Get the complete configuration dictionary.

    Returns:
        Dictionary containing all configuration settings.
    """
    return {
        "logging": {
            "level": LOG_LEVEL,
            "format": LOG_FORMAT,
        },
        "output": {
            "dir": OUTPUT_DIR,
            "formats": list(REPORT_FORMATS),
        },
        "tolerances": {
            "eq_tol": EQ_TOL,
            "argmax_tol": ARGMAX_TOL,
            "spectral_tol": SPECTRAL_TOL,
            "exp_tol": EXP_TOL,
        },
        "solvers": {
            "eig_max_dim": EIG_MAX_DIM,
            "power_iter_cap": POWER_ITER_CAP,
            "taylor_term_cap": TAYLOR_TERM_CAP,
        },
        "spectral": {
            "tail_fraction": TAIL_FRACTION,
            "artifact_threshold": ARTIFACT_THRESHOLD,
        },
        "sampling": {
            "seed": DEFAULT_SEED,
            "trials": DEFAULT_TRIALS,
        },
        "defaults": {
            "dim": DEFAULT_DIM,
            "dims": list(DEFAULT_DIMS),
            "grid": DEFAULT_GRID,
            "omega": list(DEFAULT_OMEGA),
        },
    }
