"""Toroidal Fourier analysis and quantization on uniform grids.

A symbol ``sigma(x, xi)`` is tabulated on the atoms ``x = j/N`` of a uniform
torus grid and on the lattice points ``|xi|_inf <= radius`` of a frequency
box. With ``N >= 2 * radius + 1`` the grid characters are exactly orthogonal,
so the quantized matrix

    M[i, j] = N^-n sum_xi exp(2 pi i (x_i - x_j) . xi) sigma(x_i, xi)

represents the truncated operator without aliasing, and the symbol trace,
the matrix trace and the eigenvalue sum agree up to roundoff.
"""
import itertools
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._pykernels import ordered_sum
from .errors import AliasingError, DomainMismatchError, NumericalError, PreconditionError
from .measure import GridFunction, GridMeasureSpace, check_same_space
from .norms import DEFAULT_TOL, batch_norms, luxemburg_norm
from .nuclear import NuclearRepresentation

__all__ = [
    "TorusGrid", "FrequencyBox", "ToroidalSymbol", "SpectralReport", "SummabilityResult",
    "characters", "dft_forward", "dft_inverse", "quantize", "apply_symbol",
    "symbol_nuclear_decomposition", "symbol_summability", "summability_predicate",
    "symbol_trace", "bessel_symbol", "bessel_values", "bessel_partial_sum",
    "multiplier_compose", "spectrum", "lidskii_report", "partial_sum_difference",
    "shell_decay_ratio", "check_aliasing",
]


class TorusGrid(GridMeasureSpace):
    """Uniform grid on the n-torus: atoms ``j/N`` (row-major) with weight ``N^-n``."""

    def __init__(self, dim, n_points):
        if dim < 1 or n_points < 1:
            raise ValueError("need dim >= 1 and n_points >= 1")
        self.n_points = int(n_points)
        index = np.array(list(itertools.product(range(n_points), repeat=dim)),
                         dtype=np.int64).reshape(-1, dim)
        self.multi_index = index
        super().__init__(index / n_points, np.full(index.shape[0], float(n_points) ** -dim))

    @property
    def total_mass(self):
        return 1.0

    def __repr__(self):
        return f"TorusGrid(dim={self.dim}, n_points={self.n_points})"


class FrequencyBox:
    """Lattice points ``xi`` with ``max_j |xi_j| <= radius`` in lexicographic order."""

    def __init__(self, dim, radius):
        if dim < 1 or radius < 0:
            raise ValueError("need dim >= 1 and radius >= 0")
        self.dim = int(dim)
        self.radius = int(radius)
        axis = range(-self.radius, self.radius + 1)
        points = np.array(list(itertools.product(axis, repeat=self.dim)),
                          dtype=np.int64).reshape(-1, self.dim)
        points.flags.writeable = False
        self.points = points

    def __len__(self):
        return self.points.shape[0]

    def shell(self):
        """Max-norm ``|xi|_inf`` of each lattice point."""
        return np.abs(self.points).max(axis=1)

    def euclid_sq(self):
        return (self.points.astype(float) ** 2).sum(axis=1)

    def index_of(self, xi):
        xi = np.atleast_1d(np.asarray(xi, dtype=np.int64))
        return int(np.ravel_multi_index(xi + self.radius, (2 * self.radius + 1,) * self.dim))

    def __repr__(self):
        return f"FrequencyBox(dim={self.dim}, radius={self.radius})"


def check_aliasing(grid, box):
    if grid.dim != box.dim:
        raise DomainMismatchError(f"grid is {grid.dim}-D but frequency box is {box.dim}-D")
    if grid.n_points < 2 * box.radius + 1:
        raise AliasingError(
            f"N = {grid.n_points} < 2*radius+1 = {2 * box.radius + 1}; frequencies alias")


def characters(grid, box):
    """``E[j, k] = exp(2 pi i x_j . xi_k)`` with the phase reduced mod 1 in integers."""
    phase = np.mod(grid.multi_index @ box.points.T, grid.n_points) / grid.n_points
    return np.exp(2j * np.pi * phase)


class ToroidalSymbol:
    """Table ``values[j, k] = sigma(x_j, xi_k)`` over a grid and frequency box.

    Set ``multiplier=True`` for x-independent symbols; constant columns are
    then enforced. ``tag`` carries closed-form metadata such as
    ``{"family": "bessel", "tau": 2.0}``.
    """

    def __init__(self, grid, box, values, multiplier=False, tag=None):
        values = np.asarray(values, dtype=complex)
        if values.shape != (grid.size, len(box)):
            raise ValueError(f"symbol table must be {grid.size}x{len(box)}, got {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("symbol values must be finite")
        if grid.dim != box.dim:
            raise DomainMismatchError("grid and frequency box dimensions differ")
        if multiplier and not np.all(values == values[:1]):
            raise ValueError("multiplier symbol has x-dependent columns")
        values = values.copy()
        values.flags.writeable = False
        self.grid = grid
        self.box = box
        self.values = values
        self.multiplier = bool(multiplier)
        self.tag = dict(tag or {})

    @classmethod
    def from_function(cls, grid, box, fn, **kwargs):
        """Tabulate ``fn(x, xi)``; ``x`` is (m, 1, n) and ``xi`` is (1, K, n)."""
        x = grid.points[:, None, :]
        xi = box.points[None, :, :].astype(float)
        return cls(grid, box, np.broadcast_to(fn(x, xi), (grid.size, len(box))), **kwargs)

    @classmethod
    def from_multiplier(cls, grid, box, values, tag=None):
        values = np.asarray(values, dtype=complex)
        if values.shape != (len(box),):
            raise ValueError("one multiplier value per lattice point required")
        return cls(grid, box, np.tile(values, (grid.size, 1)), multiplier=True, tag=tag)

    def column(self, k):
        return GridFunction(self.grid, self.values[:, k])

    def __repr__(self):
        return f"ToroidalSymbol(grid={self.grid!r}, box={self.box!r}, tag={self.tag})"


def dft_forward(f, box):
    """Fourier coefficients ``N^-n sum_j exp(-2 pi i x_j . xi) f(x_j)`` on the box (FFT)."""
    grid = f.space
    if not isinstance(grid, TorusGrid):
        raise DomainMismatchError("dft_forward needs a function on a TorusGrid")
    check_aliasing(grid, box)
    shape = (grid.n_points,) * grid.dim
    spectrum_ = np.fft.fftn(f.values.reshape(shape)) / grid.size
    idx = np.mod(box.points, grid.n_points)
    return spectrum_[tuple(idx.T)]


def dft_inverse(coeffs, grid, box):
    """``f(x_j) = sum_xi exp(2 pi i x_j . xi) c(xi)`` evaluated by inverse FFT."""
    check_aliasing(grid, box)
    coeffs = np.asarray(coeffs, dtype=complex)
    if coeffs.shape != (len(box),):
        raise ValueError("one coefficient per lattice point required")
    shape = (grid.n_points,) * grid.dim
    full = np.zeros(shape, dtype=complex)
    full[tuple(np.mod(box.points, grid.n_points).T)] = coeffs
    return GridFunction(grid, (np.fft.ifftn(full) * grid.size).ravel())


def quantize(symbol):
    """Dense matrix of the quantized operator acting on grid values."""
    check_aliasing(symbol.grid, symbol.box)
    e = characters(symbol.grid, symbol.box)
    return (e * symbol.values) @ e.conj().T / symbol.grid.size


def apply_symbol(symbol, f):
    """Apply the quantized operator by the Fourier route, row by row."""
    check_same_space(symbol.grid, f.space, "symbol grid and function")
    coeffs = dft_forward(f, symbol.box)
    e = characters(symbol.grid, symbol.box)
    return GridFunction(f.space, (e * symbol.values) @ coeffs)


def symbol_nuclear_decomposition(symbol):
    """One term per lattice point: ``g(x) = e(x.xi) sigma(x, xi)``, ``h(y) = e(-y.xi)``."""
    check_aliasing(symbol.grid, symbol.box)
    e = characters(symbol.grid, symbol.box)
    g = (e * symbol.values).T
    h = e.conj().T
    return NuclearRepresentation.from_arrays(g, h, symbol.grid)


def symbol_trace(symbol):
    """``N^-n sum_j sum_xi sigma(x_j, xi)``."""
    rows = np.add.accumulate(symbol.values, axis=1)[:, -1]
    return complex(ordered_sum(symbol.grid.weights * rows))


def bessel_values(tau, points):
    """``(1 + 4 pi^2 |xi|^2)^(-tau/2)`` at integer lattice points."""
    xi2 = (np.asarray(points, dtype=float) ** 2).sum(axis=-1)
    return (1.0 + 4.0 * np.pi ** 2 * xi2) ** (-tau / 2.0)


def bessel_symbol(tau, grid, box):
    """Multiplier symbol of ``(I - Laplacian)^(-tau/2)``."""
    if not tau > 0:
        raise PreconditionError("tau must be positive")
    return ToroidalSymbol.from_multiplier(grid, box, bessel_values(tau, box.points),
                                          tag={"family": "bessel", "tau": float(tau)})


def bessel_partial_sum(tau, radius, dim=1, power=1.0):
    """``sum_{|xi|_inf <= radius} sigma(xi)^power`` for the Bessel symbol; no grid needed."""
    box = FrequencyBox(dim, radius)
    return float(ordered_sum(bessel_values(tau, box.points) ** power))


def multiplier_compose(alpha, base):
    """Symbol ``alpha(x) * sigma(xi)`` of multiplication composed with a multiplier."""
    if not base.multiplier:
        raise PreconditionError("base symbol must be x-independent")
    check_same_space(base.grid, alpha.space, "multiplier grid and function")
    values = alpha.values[:, None] * base.values[0][None, :]
    tag = {"family": "multiplier", "base": base.tag}
    return ToroidalSymbol(base.grid, base.box, values, tag=tag)


@dataclass(frozen=True)
class SummabilityResult:
    """Truncated ``sum_xi ||sigma(., xi)||^r`` and the part from the outermost shell."""

    sum: float
    last_shell: float


def symbol_summability(symbol, r, p_conj, tol=DEFAULT_TOL, use_multiplier=True):
    """Sum of ``||sigma(., xi)||^r`` in L^{p_conj} over the frequency box.

    For multiplier symbols the column norms are ``|sigma(xi)| * ||1||``; pass
    ``use_multiplier=False`` to compute every column norm directly.
    """
    if not 0 < r <= 1:
        raise PreconditionError(f"r must lie in (0, 1], got {r}")
    check_same_space(symbol.grid, p_conj.space, "symbol grid and exponent")
    if symbol.multiplier and use_multiplier:
        unit = luxemburg_norm(GridFunction(symbol.grid, np.ones(symbol.grid.size)),
                              p_conj, tol).value
        norms = np.abs(symbol.values[0]) * unit
    else:
        norms = batch_norms(symbol.values.T, p_conj, tol)
    terms = norms ** r
    outer = symbol.box.shell() == symbol.box.radius
    return SummabilityResult(float(ordered_sum(terms)), float(ordered_sum(terms[outer])))


def summability_predicate(r, tau, n):
    """Whether ``sum_xi (1 + 4 pi^2 |xi|^2)^(-r tau/2)`` converges, i.e. ``r tau > n``.

    Compared in exact rationals so that, e.g., ``r = 2/3, tau = 1.5`` is the
    boundary case rather than a rounding accident.
    """
    if not 0 < r <= 1:
        raise PreconditionError(f"r must lie in (0, 1], got {r}")
    if not tau > 0:
        raise PreconditionError("tau must be positive")
    exact = Fraction(r).limit_denominator(10 ** 9) * Fraction(tau).limit_denominator(10 ** 9)
    return exact > n


def partial_sum_difference(r, tau, n, small=500, large=1000):
    """Change in the truncated Bessel r-sum between two box radii."""
    return (bessel_partial_sum(tau, large, n, power=r)
            - bessel_partial_sum(tau, small, n, power=r))


def shell_decay_ratio(r, tau, n, radius=250):
    """Ratio of the sum increments over [2R, 4R] and [R, 2R].

    Tends to ``2^(n - r tau)``: below one for convergent series, one at the
    boundary (logarithmic growth) and above one for divergent series.
    """
    s1, s2, s4 = (bessel_partial_sum(tau, k * radius, n, power=r) for k in (1, 2, 4))
    return (s4 - s2) / (s2 - s1)


def _sort_spectrum(values):
    order = np.lexsort((np.angle(values), -np.abs(values)))
    return values[order], order


def spectrum(matrix, weights=None, return_vectors=False):
    """All eigenvalues, by descending modulus and then argument.

    ``weights`` (atom masses) switch to the weighted L^2 similarity; the
    eigenvalues are unchanged. With ``return_vectors`` the residuals
    ``||Mv - lam v||`` are checked against ``1e-8 ||M||``.
    """
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise PreconditionError("spectrum needs a square matrix")
    work = matrix
    if weights is not None:
        root = np.sqrt(np.asarray(weights, dtype=float))
        work = root[:, None] * matrix / root[None, :]
    try:
        if return_vectors:
            values, vectors = np.linalg.eig(work)
        else:
            values = np.linalg.eigvals(work)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("eigensolver did not converge", shape=matrix.shape,
                             cause=str(exc)) from exc
    values, order = _sort_spectrum(values)
    if not return_vectors:
        return values
    vectors = vectors[:, order]
    if weights is not None:
        vectors = vectors / root[:, None]
        vectors = vectors / np.linalg.norm(vectors, axis=0)
    scale = np.linalg.norm(matrix, 2)
    residual = np.linalg.norm(matrix @ vectors - vectors * values[None, :], axis=0)
    if np.any(residual > 1e-8 * max(scale, np.finfo(float).tiny)):
        raise NumericalError("eigenpair residual too large",
                             max_residual=float(residual.max()), norm=float(scale))
    return values, vectors


@dataclass(frozen=True)
class SpectralReport:
    """Eigenvalues of the quantized operator and the three traces compared."""

    eigenvalues: np.ndarray
    eigen_sum: complex
    matrix_trace: complex
    symbol_trace: complex
    discrepancies: dict
    r: float
    tau: float | None
    radius: int
    n_points: int
    grothendieck_regime: bool
    summable: bool | None = None
    extras: dict = field(default_factory=dict)

    def max_discrepancy(self):
        return max(self.discrepancies.values())


def _bessel_tau(symbol):
    tag = symbol.tag
    if tag.get("family") == "bessel":
        return tag["tau"]
    if tag.get("family") == "multiplier" and tag.get("base", {}).get("family") == "bessel":
        return tag["base"]["tau"]
    return None


def lidskii_report(symbol, r):
    """Eigenvalue sum, matrix trace and symbol trace of one quantized symbol.

    For Bessel-type symbols a warning is issued when ``r * tau <= n``, since
    the untruncated operator is then not r-nuclear through this symbol.
    """
    if not 0 < r <= 1:
        raise PreconditionError(f"r must lie in (0, 1], got {r}")
    matrix = quantize(symbol)
    eigenvalues = spectrum(matrix)
    eigen_sum = complex(ordered_sum(eigenvalues))
    matrix_trace = complex(ordered_sum(np.diag(matrix)))
    sym_trace = symbol_trace(symbol)
    tau = _bessel_tau(symbol)
    summable = None
    if tau is not None:
        summable = summability_predicate(r, tau, symbol.grid.dim)
        if not summable:
            warnings.warn(f"r*tau = {r * tau:g} <= n = {symbol.grid.dim}: "
                          "the symbol is not r-summable", RuntimeWarning, stacklevel=2)
    discrepancies = {
        "eigen_vs_matrix": abs(eigen_sum - matrix_trace),
        "eigen_vs_symbol": abs(eigen_sum - sym_trace),
        "matrix_vs_symbol": abs(matrix_trace - sym_trace),
    }
    return SpectralReport(
        eigenvalues=eigenvalues, eigen_sum=eigen_sum, matrix_trace=matrix_trace,
        symbol_trace=sym_trace, discrepancies=discrepancies, r=float(r), tau=tau,
        radius=symbol.box.radius, n_points=symbol.grid.n_points,
        grothendieck_regime=Fraction(r).limit_denominator(10 ** 9) <= Fraction(2, 3),
        summable=summable,
    )
