"""Reversible RAM synthesis and verification toolkit."""
from .gates import GateSpec, apply_gate, builtin_gate, is_bijective
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["GateSpec", "apply_gate", "builtin_gate", "is_bijective", "BACKEND", "__version__"]
