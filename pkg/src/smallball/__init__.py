"""smallball: exact anti-concentration probabilities of random signed sums
and forms, Fourier/Diophantine upper bounds with soundness checks, GAP
structure fitting, and random-matrix experiments at desk scale."""

__version__ = "0.1.0"

from .types import (  # noqa: F401
    BudgetError,
    CoefficientMultiset,
    ExactDistribution,
    SignDistribution,
    SoundnessError,
    ValidationError,
    parse_rational,
)
