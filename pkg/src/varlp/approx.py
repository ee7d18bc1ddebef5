"""Partition-averaging operators and their approximation of the identity.

For a partition into cells of positive mass, the averaging operator

    L f = sum_k mu(cell_k)^{-1} <f, 1_k> 1_k

is a finite-rank projection. On a variable-exponent space whose exponent is
constant on each cell it has norm at most 2, and along a refining chain it
reproduces any simple function exactly once the chain resolves its level sets.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._pykernels import ordered_sum
from .errors import PreconditionError
from .measure import (GridFunction, Partition, check_same_space,
                      require_refining_chain)
from .norms import DEFAULT_TOL, luxemburg_norm

__all__ = [
    "FiniteRankOperator", "NormEstimate", "BapStep",
    "partition_operator", "apply", "operator_norm_estimate", "bap_demo",
    "random_simple_function",
]


class FiniteRankOperator:
    """Dense operator on the values of grid functions.

    ``matrix[i, j]`` is the coefficient of ``f(x_j)`` in ``(Tf)(x_i)``.
    Partition operators keep their partition so they can be applied as
    cell averages.
    """

    def __init__(self, space, matrix, rank_bound=None, partition=None):
        matrix = np.asarray(matrix)
        if matrix.shape != (space.size, space.size):
            raise ValueError(f"matrix must be {space.size}x{space.size}")
        matrix = matrix.copy()
        matrix.flags.writeable = False
        self.space = space
        self.matrix = matrix
        self.rank_bound = space.size if rank_bound is None else int(rank_bound)
        self.partition = partition

    @classmethod
    def identity(cls, space):
        return cls(space, np.eye(space.size), space.size)

    def __matmul__(self, other):
        check_same_space(self.space, other.space, "operators")
        return FiniteRankOperator(self.space, self.matrix @ other.matrix,
                                  min(self.rank_bound, other.rank_bound))

    def __repr__(self):
        return f"FiniteRankOperator(size={self.space.size}, rank_bound={self.rank_bound})"


def partition_operator(partition):
    """Averaging operator of ``partition``; entry (i, j) is w_j / mu(cell) on shared cells."""
    w = partition.space.weights
    masses = partition.cell_masses()
    labels = partition.labels
    same = labels[:, None] == labels[None, :]
    matrix = np.where(same, w[None, :] / masses[labels][:, None], 0.0)
    return FiniteRankOperator(partition.space, matrix, len(partition), partition)


def _cell_average(partition, values):
    out = np.empty_like(values)
    w = partition.space.weights
    for cell in partition.cells:
        v = values[cell]
        if np.all(v == v[0]):
            # the average of a constant is that constant, without rounding
            out[cell] = v[0]
        else:
            out[cell] = ordered_sum(w[cell] * v) / ordered_sum(w[cell])
    return out


def apply(op, f):
    """Apply ``op`` to ``f`` with sums in ascending atom order."""
    check_same_space(op.space, f.space, "operator and function")
    if op.partition is not None:
        return GridFunction(f.space, _cell_average(op.partition, f.values))
    products = op.matrix * f.values[None, :]
    return GridFunction(f.space, np.add.accumulate(products, axis=1)[:, -1])


@dataclass(frozen=True)
class NormEstimate:
    """Sampled lower bound on an operator norm, with the maximizing input."""

    lower_bound: float
    argmax_function: GridFunction
    trials: int


def random_simple_function(partition, rng, complex_values=False):
    """Cell-wise uniform values on [-1, 1] (real) or on the complex unit disc."""
    k = len(partition)
    if complex_values:
        radius = np.sqrt(rng.uniform(0.0, 1.0, k))
        cell_values = radius * np.exp(2j * np.pi * rng.uniform(0.0, 1.0, k))
    else:
        cell_values = rng.uniform(-1.0, 1.0, k)
    return GridFunction(partition.space, cell_values[partition.labels])


def _trial_ratio(op, p, partition, seed, trial, complex_values, tol):
    rng = np.random.default_rng([seed, trial])
    f = random_simple_function(partition, rng, complex_values)
    f_norm = luxemburg_norm(f, p, tol).value
    if f_norm == 0.0:
        return 0.0, f
    f = f / f_norm
    return luxemburg_norm(apply(op, f), p, tol).value / luxemburg_norm(f, p, tol).value, f


def operator_norm_estimate(op, p, trials, seed, partition=None,
                           complex_values=False, tol=DEFAULT_TOL, threads=1):
    """Monte-Carlo lower bound on the operator norm of ``op`` on L^p.

    Each trial draws a random simple function on ``partition`` (default:
    one cell per atom), normalizes it to unit norm and records the norm of
    its image. The result is the maximum over trials, a lower bound on the
    true norm. Trial ``t`` uses the RNG stream ``(seed, t)``, so the result
    does not depend on ``threads``.
    """
    if trials < 1:
        raise PreconditionError("trials must be at least 1")
    check_same_space(op.space, p.space, "operator and exponent")
    partition = partition or Partition.atoms(op.space)

    def run(trial):
        return _trial_ratio(op, p, partition, seed, trial, complex_values, tol)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, range(trials)))
    else:
        results = [run(t) for t in range(trials)]
    best = max(range(trials), key=lambda t: results[t][0])
    return NormEstimate(results[best][0], results[best][1], trials)


@dataclass(frozen=True)
class BapStep:
    partition_index: int
    cells: int
    error: float


def bap_demo(f, p, chain, tol=DEFAULT_TOL):
    """Approximation errors ``||f - L_P f||`` along an increasing chain of partitions."""
    require_refining_chain(chain)
    check_same_space(f.space, p.space, "function and exponent")
    steps = []
    for i, part in enumerate(chain):
        residual = f - apply(partition_operator(part), f)
        steps.append(BapStep(i, len(part), luxemburg_norm(residual, p, tol).value))
    return steps
