"""Root finding for smooth one-to-one functions through the area identity
``b f(b) - a f(a) = int_a^b f + int_{f(a)}^{f(b)} f^-1``."""

from .catalog import FamilySpec, instantiate, list_families, make
from .errors import InvRootError
from .expr import parse_expression, to_function_model
from .identity import offset_sweep, rectangle_residual, root_residual
from .model import FunctionModel, laisant_antiderivative, validate_model
from .numeric import Interval, Tolerance, check_monotone, differentiate_numeric, integrate, invert_monotone
from .solver import RootResult, SolverConfig, compare_methods, solve_identity, solve_oracle_bisect

__version__ = "0.1.0"

__all__ = [
    "FamilySpec",
    "FunctionModel",
    "Interval",
    "InvRootError",
    "RootResult",
    "SolverConfig",
    "Tolerance",
    "check_monotone",
    "compare_methods",
    "differentiate_numeric",
    "instantiate",
    "integrate",
    "invert_monotone",
    "laisant_antiderivative",
    "list_families",
    "make",
    "offset_sweep",
    "parse_expression",
    "rectangle_residual",
    "root_residual",
    "solve_identity",
    "solve_oracle_bisect",
    "to_function_model",
    "validate_model",
]
