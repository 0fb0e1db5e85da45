"""Numerical workbench for SU(2)-equivariant fuzzy-sphere module bridges."""
from .bridge import BridgeBounds, bridge_instance, decision_quantity, defect_norm_closed, expected_defect
from .errors import (
    ConfigError,
    DimensionError,
    DomainError,
    FuzzySphereError,
    NoPathError,
    PreconditionError,
    SingularityError,
)
from .modules import highest_weight_vector, module_projection
from .su2 import GroupElement, lift, make_irrep, quotient_metric

__version__ = "0.1.0"
