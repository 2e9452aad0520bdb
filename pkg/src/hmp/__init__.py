"""Quasi-static planning for contact-rich manipulation.

The package simulates a grasped book pushed into a crowded shelf as a
sequence of potential-energy equilibria, measures control effort with the
felt-stiffness metric, and improves insertion policies by reward-weighted
sampling.  ``scenario`` loads and resolves scene files, ``rollout``
integrates policies, ``optimizer`` searches policy space, ``analysis``
measures the results, and ``cli`` drives full experiments from the shell.
"""

from .dmp import DmpParams
from .errors import (
    BranchViolation,
    HmpError,
    NonConvergence,
    ParseError,
    ScenarioInfeasible,
    SingularHessian,
    UnknownPreset,
    ValidationError,
)
from .optimizer import BboConfig, OptimizerTrace, optimize
from .rollout import Rollout, RolloutConfig, Termination, cost, integrate
from .scenario import Scenario, load, preset, preset_names

__version__ = "0.1.0"

__all__ = [
    "BboConfig",
    "BranchViolation",
    "DmpParams",
    "HmpError",
    "NonConvergence",
    "OptimizerTrace",
    "ParseError",
    "Rollout",
    "RolloutConfig",
    "Scenario",
    "ScenarioInfeasible",
    "SingularHessian",
    "Termination",
    "UnknownPreset",
    "ValidationError",
    "cost",
    "integrate",
    "load",
    "optimize",
    "preset",
    "preset_names",
    "__version__",
]
