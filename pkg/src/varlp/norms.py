"""Modular, Luxemburg norm, variable-exponent sequence norms and Hölder checks.

The Luxemburg norm ``inf{lam > 0 : rho(f/lam) <= 1}`` is found by bracketed
bisection on the monotone map ``lam -> rho(f/lam)``. The loop runs in the
compiled kernel when available (see :mod:`varlp._backend`).
"""
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import PreconditionError
from .exponents import holder_triple_valid
from .measure import check_same_space

__all__ = [
    "NormResult", "HolderCheck", "modular", "luxemburg_norm", "norm_value",
    "batch_norms", "seq_norm", "holder_check", "DEFAULT_TOL", "DEFAULT_MAX_ITER",
]

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 200


@dataclass(frozen=True)
class NormResult:
    """Outcome of a Luxemburg-norm computation.

    ``bracket_width`` is the width of the final bisection bracket; it is at
    most ``tol * value``. ``saturated_at_infinity_atoms`` is set when the
    norm equals the supremum of ``|f|`` over atoms with infinite exponent.
    """

    value: float
    iterations: int
    bracket_width: float
    saturated_at_infinity_atoms: bool

    def __float__(self):
        return self.value


@dataclass(frozen=True)
class HolderCheck:
    lhs: float
    rhs: float
    holds: bool


def modular(f, p):
    """Integral of ``|f|^p``; an infinite-exponent atom contributes 0 if ``|f| <= 1``, else inf."""
    check_same_space(f.space, p.space, "function and exponent")
    return _backend.kernels.modular_scaled(f.abs(), p.values, f.space.weights, 1.0)


def _check_tol(tol, max_iter):
    if not tol > 0:
        raise PreconditionError("tol must be positive")
    if max_iter < 1:
        raise PreconditionError("max_iter must be at least 1")


def luxemburg_norm(f, p, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER, kernels=None):
    """Luxemburg norm of ``f`` in the variable-exponent space of ``p``.

    Parameters
    ----------
    f : GridFunction
    p : VariableExponent
        Same space as ``f``.
    tol : float
        Relative bracket width at which bisection stops.
    max_iter : int
        Cap on modular evaluations (bracket expansion plus bisection).
    kernels : module, optional
        Kernel backend; defaults to the one selected at import.

    Returns
    -------
    NormResult

    Raises
    ------
    ConvergenceError
        If the bracket is still wider than ``tol * value`` after ``max_iter``
        evaluations; the exception carries the last bracket.
    """
    check_same_space(f.space, p.space, "function and exponent")
    _check_tol(tol, max_iter)
    k = kernels or _backend.kernels
    value, iterations, width, saturated = k.luxemburg(
        f.abs(), p.values, f.space.weights, tol, max_iter)
    return NormResult(float(value), int(iterations), float(width), bool(saturated))


def norm_value(f, p, tol=DEFAULT_TOL):
    return luxemburg_norm(f, p, tol).value


def batch_norms(rows, p, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    """Norms of many functions (rows of a value array) against one exponent."""
    _check_tol(tol, max_iter)
    rows = np.abs(np.atleast_2d(rows))
    return _backend.kernels.luxemburg_batch(rows, p.values, p.space.weights, tol, max_iter)


def seq_norm(h, p, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    """Norm of a finite sequence in the variable-exponent sequence space (counting measure)."""
    h = np.asarray(h, dtype=complex).ravel()
    p = np.asarray(p, dtype=float).ravel()
    if h.shape != p.shape:
        raise PreconditionError("sequence and exponent lengths differ")
    if np.any(np.isnan(p)) or np.any(p < 1):
        raise PreconditionError("sequence exponents must be >= 1")
    _check_tol(tol, max_iter)
    value, iterations, width, saturated = _backend.kernels.luxemburg(
        np.abs(h), p, np.ones(h.size), tol, max_iter)
    return NormResult(float(value), int(iterations), float(width), bool(saturated))


def holder_check(f, g, p, q, s, tol=1e-10, norm_tol=DEFAULT_TOL):
    """Evaluate both sides of ``||fg||_s <= 2 ||f||_p ||g||_q``."""
    if not holder_triple_valid(s, p, q):
        raise PreconditionError("exponents do not satisfy 1/s = 1/p + 1/q")
    check_same_space(f.space, g.space, "functions")
    lhs = luxemburg_norm(f * g, s, norm_tol).value
    rhs = 2.0 * luxemburg_norm(f, p, norm_tol).value * luxemburg_norm(g, q, norm_tol).value
    return HolderCheck(lhs, rhs, lhs <= rhs + tol)

