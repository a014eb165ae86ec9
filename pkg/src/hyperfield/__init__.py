"""Exact computation over finite hyperfields."""

from hyperfield.core import (
    AxiomReport,
    ESet,
    FiniteHyperfield,
    HyperfieldError,
    Report,
    hadd,
    hsum,
    inv,
    mul,
    neg,
    scale_set,
    verify_axioms,
)

__version__ = "0.1.0"
