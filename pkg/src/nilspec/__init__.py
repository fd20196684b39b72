"""Spectral geometry of Heisenberg-type nilpotent groups.

Clifford representation data, two-step nilpotent groups and their solvable
extensions, curvature, Ginsburg-Landau-Zeeman spectra, twisted Z-Fourier
and Hankel machinery, wave-operator decompositions, and isospectrality
verification.
"""

__version__ = "0.1.0"

from .algebra import TwoStepAlgebra, htype_group, from_representation
from .clifford import (
    CliffordModule,
    EndomorphismSpace,
    build_generators,
    endomorphism_space,
    irreducible_dimension,
)
from .geometry import SolvableExtension
from .glz import RadialGLZOperator, SpectrumRecord

__all__ = [
    "__version__",
    "TwoStepAlgebra",
    "htype_group",
    "from_representation",
    "CliffordModule",
    "EndomorphismSpace",
    "build_generators",
    "endomorphism_space",
    "irreducible_dimension",
    "SolvableExtension",
    "RadialGLZOperator",
    "SpectrumRecord",
]
