"""Exact lattice and class-group computations for singular K3 surfaces and
their supersingular reductions."""

from .binary_forms import Form, FormClass, Orientation, class_group, compose, reduce
from .errors import (
    CapacityError, InvalidArgument, K3LatticeError, NotFundamental, PreconditionError,
    TheoremViolation,
)
from .lattices_fqf import EvenLattice, FiniteQuadraticForm, disc_form, fqf_isomorphic
from .quad_ideals import QuadIdeal, QuadInt, ideal_from_form, psi

__version__ = "0.1.0"

__all__ = [
    "CapacityError", "EvenLattice", "FiniteQuadraticForm", "Form", "FormClass", "InvalidArgument",
    "K3LatticeError", "NotFundamental", "Orientation", "PreconditionError", "QuadIdeal", "QuadInt",
    "TheoremViolation", "class_group", "compose", "disc_form", "fqf_isomorphic", "ideal_from_form",
    "psi", "reduce",
]
