"""Constants and utilities related to the checks a run can execute."""

from src.checks.catmap import run_catmap
from src.checks.convex import run_convex
from src.checks.dimensions import run_asymptotics, run_spin, run_verlinde
from src.checks.torus_check import run_torus_check
from src.checks.weil_check import run_weil_check

SPIN_COLUMNS = ["genus", "r", "N", "character_class", "multiplicity", "dimension"]

# Define check configuration - single source of truth
EXPERIMENT_CONFIG = {
    "torus-check": {
        "display_name": "Torus Quantization",
        "check_func": run_torus_check,
        "order": 0,
        "csv_columns": ["N", "morphism_defect", "hermiticity_defect", "commutation_defect", "trace_defect", "xn_value", "commutant_dim", "norm_ok"],
    },
    "weil-check": {
        "display_name": "Weil Representation",
        "check_func": run_weil_check,
        "order": 1,
        "csv_columns": ["N", "unitarity_defect", "projective_defect", "s4_defect", "st3_defect", "egorov_defect", "parity"],
    },
    "catmap": {
        "display_name": "Cat Map Ergodicity",
        "check_func": run_catmap,
        "order": 2,
        "csv_columns": ["N", "fraction", "barycenter_distance", "n_outliers"],
    },
    "convex": {
        "display_name": "Convex Concentration",
        "check_func": run_convex,
        "order": 3,
        "csv_columns": ["trial", "kind", "premise", "weight", "delta", "bound"],
    },
    "verlinde": {
        "display_name": "Verlinde Dimensions",
        "check_func": run_verlinde,
        "order": 4,
        "csv_columns": SPIN_COLUMNS,
    },
    "spin": {
        "display_name": "Spin Decomposition",
        "check_func": run_spin,
        "order": 5,
        "csv_columns": SPIN_COLUMNS,
    },
    "asymptotics": {
        "display_name": "Dimension Asymptotics",
        "check_func": run_asymptotics,
        "order": 6,
        "csv_columns": ["genus", "r", "estimate", "ratio"],
    },
}

# Derive EXPERIMENT_ORDER from EXPERIMENT_CONFIG
EXPERIMENT_ORDER = [(config["display_name"], key) for key, config in sorted(EXPERIMENT_CONFIG.items(), key=lambda x: x[1]["order"])]


def get_check(name: str):
    """Get the runner function of a check by its subcommand name."""
    if name not in EXPERIMENT_CONFIG:
        raise ValueError(f"unknown check {name!r}; expected one of {', '.join(key for _, key in EXPERIMENT_ORDER)}")
    return EXPERIMENT_CONFIG[name]["check_func"]
