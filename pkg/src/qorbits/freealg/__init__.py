"""Free associative algebras and degree-bounded ideal calculus."""

from .element import Alphabet, AlphabetMismatch, FreeElement, commutator, free_arith
from .ideal import (
    BoundTooSmall,
    BoundedSpan,
    DegreeBoundedQuotient,
    ExactField,
    IdealError,
    IdealSpec,
    SpecializedField,
    TooLarge,
    fields_for,
    filtered_dimension,
    graded_dimension,
    ideal_membership,
    ideal_membership_many,
    normal_form,
)

__all__ = [
    "Alphabet", "AlphabetMismatch", "FreeElement", "commutator", "free_arith",
    "BoundTooSmall", "BoundedSpan", "DegreeBoundedQuotient", "ExactField", "IdealError",
    "IdealSpec", "SpecializedField", "TooLarge", "fields_for", "filtered_dimension",
    "graded_dimension", "ideal_membership", "ideal_membership_many", "normal_form",
]
