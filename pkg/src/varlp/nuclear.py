"""Nuclear representations ``T = sum_n g_n (x) h_n`` on grid spaces.

``T f = sum_n <f, h_n> g_n`` with the bilinear pairing. The trace of a
representation is ``sum_n <g_n, h_n>``; it equals the weighted integral of
the kernel diagonal and, at finite rank, the sum of the eigenvalues.

Two kinds of quasi-norm appear here and should not be confused:

* :func:`rep_quasinorm_sum` is the r-sum of norm products of one particular
  representation. It is an upper bound for ``n_r(T)^r``, never the infimum.
* :func:`schatten_quasinorm` is computed from singular values in the weighted
  L^2 geometry and equals ``n_r(T)`` when the exponent is 2.
"""
from dataclasses import dataclass

import numpy as np

from ._pykernels import ordered_sum
from .errors import DomainMismatchError, NumericalError, PreconditionError
from .exponents import VariableExponent
from .measure import GridFunction, check_same_space, duality_pairing, integrate
from .norms import DEFAULT_TOL, luxemburg_norm

__all__ = [
    "NuclearRepresentation", "KernelMatrix", "OloffCheck",
    "rep_apply", "rep_kernel", "kernel_apply", "rep_quasinorm_sum", "rep_trace",
    "kernel_trace", "schatten_quasinorm", "oloff_check",
]


class NuclearRepresentation:
    """Ordered, finite list of factor pairs ``(g_n, h_n)``.

    ``g_n`` live on ``out_space`` and ``h_n`` on ``in_space``.
    """

    def __init__(self, terms, out_space=None, in_space=None):
        terms = tuple((g, h) for g, h in terms)
        if not terms:
            raise ValueError("a representation needs at least one term")
        self.out_space = out_space or terms[0][0].space
        self.in_space = in_space or terms[0][1].space
        for g, h in terms:
            check_same_space(self.out_space, g.space, "output factors")
            check_same_space(self.in_space, h.space, "input factors")
        self.terms = terms

    @classmethod
    def from_arrays(cls, g_values, h_values, out_space, in_space=None):
        """Build from arrays of shape (terms, atoms)."""
        in_space = in_space or out_space
        g_values = np.atleast_2d(g_values)
        h_values = np.atleast_2d(h_values)
        if g_values.shape[0] != h_values.shape[0]:
            raise ValueError("g and h need the same number of terms")
        return cls([(GridFunction(out_space, g), GridFunction(in_space, h))
                    for g, h in zip(g_values, h_values)], out_space, in_space)

    def g_matrix(self):
        return np.array([g.values for g, _ in self.terms])

    def h_matrix(self):
        return np.array([h.values for _, h in self.terms])

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"NuclearRepresentation(terms={len(self)})"


class KernelMatrix:
    """Kernel values ``k(x_i, y_j)``; rows on ``row_space``, columns on ``col_space``."""

    def __init__(self, values, row_space, col_space):
        values = np.asarray(values, dtype=complex)
        if values.shape != (row_space.size, col_space.size):
            raise ValueError("kernel shape does not match the spaces")
        self.values = values
        self.row_space = row_space
        self.col_space = col_space

    def operator_matrix(self):
        """Matrix acting on value vectors: ``k(x_i, y_j) * w_j``."""
        return self.values * self.col_space.weights[None, :]

    def diagonal(self):
        if not self.row_space.same_as(self.col_space):
            raise DomainMismatchError("diagonal needs equal row and column spaces")
        return GridFunction(self.row_space, np.diag(self.values))


def rep_apply(rep, f):
    """``sum_n <f, h_n> g_n``, terms accumulated in representation order."""
    check_same_space(rep.in_space, f.space, "representation input and function")
    out = np.zeros(rep.out_space.size, dtype=complex)
    for g, h in rep.terms:
        out = out + duality_pairing(f, h) * g.values
    return GridFunction(rep.out_space, out)


def rep_kernel(rep):
    """Kernel ``k(x_i, y_j) = sum_n g_n(x_i) h_n(y_j)`` in term order."""
    k = np.zeros((rep.out_space.size, rep.in_space.size), dtype=complex)
    for g, h in rep.terms:
        k = k + np.outer(g.values, h.values)
    return KernelMatrix(k, rep.out_space, rep.in_space)


def kernel_apply(kernel, f):
    """``(Kf)(x_i) = sum_j k(x_i, y_j) f(y_j) w_j`` in ascending j."""
    check_same_space(kernel.col_space, f.space, "kernel and function")
    products = kernel.values * (kernel.col_space.weights * f.values)[None, :]
    return GridFunction(kernel.row_space, np.add.accumulate(products, axis=1)[:, -1])


def rep_quasinorm_sum(rep, r, p_out, p_in_conj, tol=DEFAULT_TOL):
    """``sum_n ||g_n||^r ||h_n||^r`` with g in L^{p_out} and h in L^{p_in_conj}.

    An upper-bound certificate for ``n_r(T)^r`` from this representation.
    """
    if not 0 < r <= 1:
        raise PreconditionError(f"r must lie in (0, 1], got {r}")
    check_same_space(rep.out_space, p_out.space, "output space and exponent")
    check_same_space(rep.in_space, p_in_conj.space, "input space and exponent")
    products = [
        (luxemburg_norm(g, p_out, tol).value * luxemburg_norm(h, p_in_conj, tol).value) ** r
        for g, h in rep.terms
    ]
    return float(ordered_sum(np.array(products)))


def rep_trace(rep):
    """``sum_n <g_n, h_n>`` in term order."""
    if not rep.out_space.same_as(rep.in_space):
        raise DomainMismatchError("trace needs equal input and output spaces")
    pairings = np.array([duality_pairing(g, h) for g, h in rep.terms])
    return complex(ordered_sum(pairings))


def kernel_trace(kernel):
    """Weighted integral of the kernel diagonal."""
    return integrate(kernel.diagonal())


def schatten_quasinorm(operator, r, weights):
    """``(sum_j s_j^r)^(1/r)`` of an operator matrix in the weighted L^2 geometry.

    ``operator`` acts on value vectors (see :meth:`KernelMatrix.operator_matrix`);
    singular values are taken after conjugating by ``diag(sqrt(weights))``.
    """
    operator = np.asarray(operator, dtype=complex)
    weights = np.asarray(weights, dtype=float)
    if operator.ndim != 2 or operator.shape[0] != operator.shape[1]:
        raise PreconditionError("operator matrix must be square")
    if operator.shape[0] != weights.size:
        raise PreconditionError("weights do not match the operator size")
    if not 0 < r <= 1:
        raise PreconditionError(f"r must lie in (0, 1], got {r}")
    root = np.sqrt(weights)
    similar = root[:, None] * operator / root[None, :]
    try:
        s = np.linalg.svd(similar, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("singular value decomposition failed",
                             shape=operator.shape, cause=str(exc)) from exc
    if s.size == 0 or s[0] == 0.0:
        return 0.0
    # drop roundoff-level singular values; they would dominate s^r for small r
    s = s[s > s[0] * operator.shape[0] * np.finfo(float).eps]
    return float(ordered_sum(s ** r) ** (1.0 / r))


@dataclass(frozen=True)
class OloffCheck:
    """Singular-value quasi-norm against the r-sum of one representation.

    ``holds`` is ``schatten <= rep_bound ** (1/r) * (1 + 1e-8)``.
    """

    schatten: float
    rep_bound: float
    holds: bool
    r: float

    @property
    def rep_bound_root(self):
        return self.rep_bound ** (1.0 / self.r)


def oloff_check(rep, r, tol=DEFAULT_TOL):
    """Compare the Schatten quasi-norm with a representation sum at exponent 2."""
    if not rep.out_space.same_as(rep.in_space):
        raise DomainMismatchError("Oloff check needs equal input and output spaces")
    two = VariableExponent.constant(rep.in_space, 2.0)
    bound = rep_quasinorm_sum(rep, r, two, two, tol)
    kernel = rep_kernel(rep)
    schatten = schatten_quasinorm(kernel.operator_matrix(), r, rep.in_space.weights)
    return OloffCheck(schatten, bound, schatten <= bound ** (1.0 / r) * (1 + 1e-8), r)
