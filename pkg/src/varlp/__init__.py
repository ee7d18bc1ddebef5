"""Numerical toolkit for variable-exponent Lebesgue spaces and nuclear traces.

Modules
-------
measure
    Finite atomic measure spaces, grid functions, partitions.
exponents
    Variable exponents, conjugates, Hölder triples.
norms
    Modular, Luxemburg norm, sequence norms, Hölder check.
approx
    Partition-averaging operators and refinement chains.
nuclear
    Nuclear representations, kernels, traces, Schatten quasi-norms.
torus
    Toroidal DFT, quantization, symbol traces, Lidskii reports.
cli
    Command-line front end.
"""
from . import _backend
from .errors import (AliasingError, ConvergenceError, DomainMismatchError,
                     NumericalError, PreconditionError)
from .exponents import VariableExponent, conjugate, holder_triple_valid
from .measure import (GridFunction, GridMeasureSpace, Partition, common_refinement,
                      duality_pairing, integrate, partition_refines)
from .norms import NormResult, holder_check, luxemburg_norm, modular, seq_norm

__version__ = "0.1.0"
BACKEND = _backend.NAME

__all__ = [
    "AliasingError", "ConvergenceError", "DomainMismatchError", "NumericalError",
    "PreconditionError", "VariableExponent", "conjugate", "holder_triple_valid",
    "GridFunction", "GridMeasureSpace", "Partition", "common_refinement",
    "duality_pairing", "integrate", "partition_refines", "NormResult",
    "holder_check", "luxemburg_norm", "modular", "seq_norm", "BACKEND",
]
