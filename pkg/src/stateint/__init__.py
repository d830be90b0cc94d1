"""State-integral partition functions of shaped triangulated pseudo 3-manifolds."""

from .qdl import ModularParameter, li2, log_phi_b, phi_b

__all__ = ["ModularParameter", "li2", "log_phi_b", "phi_b"]
__version__ = "0.1.0"
