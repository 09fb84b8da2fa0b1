from .deformation import Deformation, DeformationFlags, DReport
from .space import ComposeCheck, FockOperator, TruncatedFock, Window, assembled_term, compose_check, composition_window, identity_operator
from .tower import RawTower

__all__ = [
    "ComposeCheck",
    "Deformation",
    "DeformationFlags",
    "DReport",
    "FockOperator",
    "RawTower",
    "TruncatedFock",
    "Window",
    "assembled_term",
    "compose_check",
    "composition_window",
    "identity_operator",
]
