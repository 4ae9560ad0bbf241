from .base import (
    CURVATURE_FLAT,
    CURVATURE_NONNEGATIVE_COMPLETE,
    CURVATURE_NONNEGATIVE_INCOMPLETE,
    Manifold,
)
from .bures_wasserstein import BuresWasserstein, BWTangent, STEP_SAFETY
from .positive_orthant import PositiveOrthant
from .sphere import Sphere

__all__ = [
    "Manifold",
    "Sphere",
    "BuresWasserstein",
    "BWTangent",
    "PositiveOrthant",
    "STEP_SAFETY",
    "CURVATURE_FLAT",
    "CURVATURE_NONNEGATIVE_COMPLETE",
    "CURVATURE_NONNEGATIVE_INCOMPLETE",
]
