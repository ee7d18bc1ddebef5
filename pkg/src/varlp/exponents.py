"""Variable exponents and their pointwise conjugates."""
import numpy as np

from .measure import check_same_space

__all__ = ["VariableExponent", "conjugate", "holder_triple_valid", "reciprocal"]

INF = np.inf


class VariableExponent:
    """Exponent p(x) in [1, inf] per atom; ``np.inf`` marks infinite atoms.

    Attributes
    ----------
    p_minus, p_plus : float
        Minimum and maximum over the atoms (``p_plus`` may be ``inf``).
    """

    def __init__(self, space, values, bounded=False):
        values = np.asarray(values, dtype=float)
        if values.ndim == 0:
            values = np.full(space.size, float(values))
        if values.shape != (space.size,):
            raise ValueError(f"expected {space.size} exponent values, got {values.shape}")
        if np.any(np.isnan(values)) or np.any(values < 1):
            raise ValueError("exponent values must lie in [1, inf]")
        values = values.copy()
        values.flags.writeable = False
        self.space = space
        self._values = values
        self.p_minus = float(values.min())
        self.p_plus = float(values.max())
        if bounded and not self.is_bounded:
            raise ValueError("exponent declared bounded but p_plus is infinite")

    @classmethod
    def constant(cls, space, p):
        return cls(space, np.full(space.size, float(p)))

    @classmethod
    def from_function(cls, space, fn):
        """Sample a closed-form exponent at the atom coordinates."""
        return cls(space, np.asarray(fn(space.points), dtype=float).reshape(space.size))

    @classmethod
    def piecewise(cls, partition, cell_values):
        cell_values = np.asarray(cell_values, dtype=float)
        if cell_values.shape != (len(partition),):
            raise ValueError("one exponent value per cell required")
        return cls(partition.space, cell_values[partition.labels])

    @property
    def values(self):
        return self._values

    @property
    def is_bounded(self):
        return bool(np.isfinite(self.p_plus))

    def __repr__(self):
        return f"VariableExponent(p_minus={self.p_minus}, p_plus={self.p_plus})"


def reciprocal(p):
    """Pointwise 1/p with 1/inf = 0."""
    values = p.values if isinstance(p, VariableExponent) else np.asarray(p, dtype=float)
    out = np.zeros_like(values)
    finite = np.isfinite(values)
    out[finite] = 1.0 / values[finite]
    return out


def conjugate(p):
    """Pointwise conjugate exponent: p' = p/(p-1), with 1 <-> inf."""
    v = p.values
    out = np.empty_like(v)
    one = v == 1.0
    inf = np.isinf(v)
    mid = ~(one | inf)
    out[one] = INF
    out[inf] = 1.0
    out[mid] = v[mid] / (v[mid] - 1.0)
    return VariableExponent(p.space, out)


def holder_triple_valid(s, p, q, tol=1e-12):
    """True iff 1/s = 1/p + 1/q holds at every atom within ``tol``."""
    check_same_space(s.space, p.space, "exponents")
    check_same_space(s.space, q.space, "exponents")
    gap = reciprocal(s) - reciprocal(p) - reciprocal(q)
    return bool(np.all(np.abs(gap) <= tol))
