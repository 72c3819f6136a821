from .paving import PavingEngine, PavingResult, pave, verify_paving
from .quiver import Quiver, classify
from .rep import Representation

__all__ = ["PavingEngine", "PavingResult", "pave", "verify_paving", "Quiver", "classify", "Representation"]
