"""Finite atomic measure spaces, grid functions and partitions.

Every quantity in the package is evaluated on a finite set of atoms with
positive weights. Sums over atoms always run in ascending atom order so
results are reproducible bit for bit.
"""
import numpy as np

from ._pykernels import ordered_sum
from .errors import DomainMismatchError, PreconditionError

__all__ = [
    "GridMeasureSpace", "GridFunction", "Partition",
    "integrate", "duality_pairing", "partition_refines", "common_refinement",
    "level_set_partition", "dyadic_chain", "check_same_space",
]


def _frozen(array):
    array = np.array(array, copy=True)
    array.flags.writeable = False
    return array


class GridMeasureSpace:
    """Finite measure space: sample points with positive weights.

    Parameters
    ----------
    points : array_like, shape (m,) or (m, dim)
        Atom coordinates.
    weights : array_like, shape (m,)
        Mass of each atom; all strictly positive and finite.
    """

    def __init__(self, points, weights):
        points = np.asarray(points, dtype=float)
        if points.ndim == 1:
            points = points[:, None]
        if points.ndim != 2:
            raise ValueError("points must be a 1-D or 2-D array")
        weights = np.asarray(weights, dtype=float)
        if weights.ndim != 1:
            raise ValueError("weights must be 1-D")
        if points.shape[0] == 0:
            raise ValueError("a measure space needs at least one atom")
        if points.shape[0] != weights.shape[0]:
            raise ValueError(f"{points.shape[0]} points but {weights.shape[0]} weights")
        if not np.all(np.isfinite(points)):
            raise ValueError("atom coordinates must be finite")
        if not np.all(np.isfinite(weights)) or np.any(weights <= 0):
            raise ValueError("atom weights must be finite and strictly positive")
        self._points = _frozen(points)
        self._weights = _frozen(weights)

    @classmethod
    def uniform_interval(cls, n, dim=1):
        """Midpoint grid on ``[0, 1]^dim`` with ``n`` atoms per axis and equal weights."""
        if n < 1 or dim < 1:
            raise ValueError("need n >= 1 and dim >= 1")
        axis = (np.arange(n) + 0.5) / n
        mesh = np.meshgrid(*([axis] * dim), indexing="ij")
        points = np.stack([g.ravel() for g in mesh], axis=1)
        return cls(points, np.full(n ** dim, float(n) ** -dim))

    @property
    def points(self):
        return self._points

    @property
    def weights(self):
        return self._weights

    @property
    def dim(self):
        return self._points.shape[1]

    @property
    def size(self):
        return self._points.shape[0]

    @property
    def total_mass(self):
        return float(ordered_sum(self._weights))

    def same_as(self, other):
        if self is other:
            return True
        return (isinstance(other, GridMeasureSpace)
                and self._points.shape == other._points.shape
                and np.array_equal(self._points, other._points)
                and np.array_equal(self._weights, other._weights))

    def function(self, values):
        return GridFunction(self, values)

    def sample(self, fn):
        """Evaluate ``fn`` at the atoms. ``fn`` gets the (m, dim) point array."""
        return GridFunction(self, fn(self._points))

    def constant(self, c):
        return GridFunction(self, np.full(self.size, c, dtype=complex))

    def __repr__(self):
        return f"{type(self).__name__}(size={self.size}, dim={self.dim})"


def check_same_space(a, b, what="operands"):
    if not a.same_as(b):
        raise DomainMismatchError(f"{what} live on different measure spaces")


class GridFunction:
    """Complex-valued function on the atoms of a :class:`GridMeasureSpace`."""

    def __init__(self, space, values):
        values = np.asarray(values, dtype=complex)
        if values.ndim == 0:
            values = np.full(space.size, values)
        if values.shape != (space.size,):
            raise ValueError(f"expected {space.size} values, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("grid function values must be finite")
        self.space = space
        self._values = _frozen(values)

    @property
    def values(self):
        return self._values

    @property
    def real(self):
        return self._values.real

    def abs(self):
        return np.abs(self._values)

    def is_zero(self):
        return not np.any(self._values)

    def _coerce(self, other):
        if isinstance(other, GridFunction):
            check_same_space(self.space, other.space)
            return other._values
        return other

    def __add__(self, other):
        return GridFunction(self.space, self._values + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return GridFunction(self.space, self._values - self._coerce(other))

    def __rsub__(self, other):
        return GridFunction(self.space, self._coerce(other) - self._values)

    def __mul__(self, other):
        return GridFunction(self.space, self._values * self._coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, c):
        return GridFunction(self.space, self._values / c)

    def __neg__(self):
        return GridFunction(self.space, -self._values)

    def conj(self):
        return GridFunction(self.space, np.conj(self._values))

    def __repr__(self):
        return f"GridFunction(size={self.space.size})"


def integrate(f):
    """Return the weighted sum of ``f`` over the atoms, in ascending atom order."""
    return complex(ordered_sum(f.space.weights * f.values))


def duality_pairing(f, g):
    """Bilinear pairing <f, g> = integral of f*g (no complex conjugation)."""
    check_same_space(f.space, g.space, "pairing arguments")
    return complex(ordered_sum(f.space.weights * (f.values * g.values)))


class Partition:
    """Disjoint nonempty cells of atom indices covering the whole space.

    Cells are stored as sorted index arrays, ordered by their smallest atom.
    """

    def __init__(self, space, cells):
        m = space.size
        labels = np.full(m, -1, dtype=np.int64)
        normalized = []
        for cell in cells:
            idx = np.unique(np.asarray(cell, dtype=np.int64))
            if idx.size == 0:
                raise ValueError("partition cells must be nonempty")
            if idx[0] < 0 or idx[-1] >= m:
                raise ValueError("cell index out of range")
            if np.any(labels[idx] >= 0):
                raise ValueError("partition cells overlap")
            labels[idx] = len(normalized)
            normalized.append(idx)
        if np.any(labels < 0):
            raise ValueError("partition cells do not cover every atom")
        order = sorted(range(len(normalized)), key=lambda k: normalized[k][0])
        self.space = space
        self._cells = tuple(_frozen(normalized[k]) for k in order)
        relabel = np.empty(len(order), dtype=np.int64)
        relabel[order] = np.arange(len(order))
        self._labels = _frozen(relabel[labels])

    @classmethod
    def from_labels(cls, space, labels):
        labels = np.asarray(labels)
        if labels.shape != (space.size,):
            raise ValueError("one label per atom required")
        _, inverse = np.unique(labels, return_inverse=True)
        inverse = inverse.ravel()
        return cls(space, [np.flatnonzero(inverse == k) for k in range(inverse.max() + 1)])

    @classmethod
    def whole(cls, space):
        return cls(space, [np.arange(space.size)])

    @classmethod
    def atoms(cls, space):
        return cls(space, [[j] for j in range(space.size)])

    @classmethod
    def equal_intervals(cls, space, k):
        """Split ``[0, 1)^dim`` (or the torus) into ``k`` equal intervals per axis.

        Empty boxes are dropped.
        """
        if k < 1:
            raise ValueError("k must be positive")
        pts = np.mod(space.points, 1.0)
        box = np.minimum(np.floor(pts * k).astype(np.int64), k - 1)
        flat = np.ravel_multi_index(box.T, (k,) * space.dim)
        return cls.from_labels(space, flat)

    @classmethod
    def from_breakpoints(cls, space, breaks, axis=0):
        """Cells ``[b_i, b_{i+1})`` along one axis; the last interval is closed."""
        breaks = np.asarray(breaks, dtype=float)
        x = space.points[:, axis]
        labels = np.searchsorted(breaks, x, side="right")
        return cls.from_labels(space, labels)

    @property
    def cells(self):
        return self._cells

    @property
    def labels(self):
        """Cell index of each atom."""
        return self._labels

    def __len__(self):
        return len(self._cells)

    def cell_masses(self):
        w = self.space.weights
        return np.array([ordered_sum(w[c]) for c in self._cells])

    def indicator(self, k):
        values = np.zeros(self.space.size, dtype=complex)
        values[self._cells[k]] = 1.0
        return GridFunction(self.space, values)

    def is_constant_on_cells(self, f):
        v = f.values
        return all(np.all(v[c] == v[c[0]]) for c in self._cells)

    def same_cells(self, other):
        """Equality up to cell order."""
        if not self.space.same_as(other.space) or len(self) != len(other):
            return False
        return all(np.array_equal(a, b) for a, b in zip(self._cells, other._cells))

    def __repr__(self):
        return f"Partition(cells={len(self)}, atoms={self.space.size})"


def partition_refines(coarse, fine):
    """True iff every cell of ``coarse`` is a union of cells of ``fine``."""
    check_same_space(coarse.space, fine.space, "partitions")
    lab = coarse.labels
    return all(np.all(lab[c] == lab[c[0]]) for c in fine.cells)


def common_refinement(p1, p2):
    """Partition into all nonempty intersections of a cell of ``p1`` with one of ``p2``."""
    check_same_space(p1.space, p2.space, "partitions")
    pairs = p1.labels * len(p2) + p2.labels
    return Partition.from_labels(p1.space, pairs)


def level_set_partition(f):
    """Partition of the atoms by the distinct values of ``f``."""
    _, inverse = np.unique(f.values, return_inverse=True)
    return Partition.from_labels(f.space, inverse.ravel())


def dyadic_chain(space, depth):
    """Increasing chain of equal-interval partitions with 1, 2, 4, ... cells per axis."""
    return [Partition.equal_intervals(space, 2 ** d) for d in range(depth + 1)]


def require_refining_chain(chain):
    for i in range(1, len(chain)):
        if not partition_refines(chain[i - 1], chain[i]):
            raise PreconditionError(
                f"partition {i} does not refine partition {i - 1}")
