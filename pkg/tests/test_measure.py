import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from varlp.errors import DomainMismatchError, PreconditionError
from varlp.measure import (GridFunction, GridMeasureSpace, Partition, common_refinement,
                           duality_pairing, dyadic_chain, integrate, level_set_partition,
                           partition_refines, require_refining_chain)


def test_space_validation():
    with pytest.raises(ValueError):
        GridMeasureSpace([0.0, 1.0], [1.0])
    with pytest.raises(ValueError):
        GridMeasureSpace([0.0], [0.0])
    with pytest.raises(ValueError):
        GridMeasureSpace([], [])
    sp = GridMeasureSpace([0.1, 0.2], [0.5, 2.0])
    assert sp.total_mass == 2.5 and sp.dim == 1


def test_function_rejects_nonfinite(unit4):
    with pytest.raises(ValueError):
        GridFunction(unit4, [1, 2, np.nan, 4])
    with pytest.raises(ValueError):
        GridFunction(unit4, [1, 2, 3])


def test_uniform_interval_midpoints(unit4):
    np.testing.assert_array_equal(unit4.points[:, 0], [1 / 8, 3 / 8, 5 / 8, 7 / 8])
    assert unit4.total_mass == 1.0


def test_integrate_examples(unit4):
    assert integrate(unit4.constant(1)) == 1
    assert integrate(unit4.sample(lambda x: x[:, 0])) == 0.5
    assert integrate(unit4.constant(0)) == 0


def test_pairing_examples(unit4):
    halves = Partition.equal_intervals(unit4, 2)
    assert duality_pairing(unit4.constant(1), halves.indicator(1)) == 0.5
    assert duality_pairing(unit4.sample(lambda x: x[:, 0]), unit4.constant(1)) == 0.5
    assert duality_pairing(unit4.constant(0), unit4.sample(lambda x: x[:, 0] ** 3)) == 0


def test_pairing_is_bilinear_not_sesquilinear(unit4):
    f = unit4.constant(1j)
    assert duality_pairing(f, f) == -1


def test_space_mismatch(unit4):
    other = GridMeasureSpace.uniform_interval(4, 1)
    shifted = GridMeasureSpace(unit4.points + 0.01, unit4.weights)
    # equal content counts as the same space
    duality_pairing(unit4.constant(1), other.constant(1))
    with pytest.raises(DomainMismatchError):
        duality_pairing(unit4.constant(1), shifted.constant(1))
    with pytest.raises(DomainMismatchError):
        partition_refines(Partition.whole(unit4), Partition.whole(shifted))


def test_refines_examples(unit4):
    whole = Partition.whole(unit4)
    halves = Partition.from_breakpoints(unit4, [0.5])
    thirds = Partition.from_breakpoints(unit4, [1 / 3])
    assert partition_refines(whole, halves)
    assert not partition_refines(halves, thirds)
    assert partition_refines(halves, halves)


def test_common_refinement_examples():
    sp = GridMeasureSpace.uniform_interval(8)
    a = Partition.from_breakpoints(sp, [0.5])
    b = Partition.from_breakpoints(sp, [0.25])
    expected = Partition.from_breakpoints(sp, [0.25, 0.5])
    assert common_refinement(a, b).same_cells(expected)
    assert common_refinement(a, a).same_cells(a)
    assert common_refinement(Partition.whole(sp), b).same_cells(b)


def test_partition_validation(unit4):
    with pytest.raises(ValueError, match="overlap"):
        Partition(unit4, [[0, 1], [1, 2, 3]])
    with pytest.raises(ValueError, match="cover"):
        Partition(unit4, [[0, 1], [2]])
    with pytest.raises(ValueError, match="nonempty"):
        Partition(unit4, [[0, 1, 2, 3], []])


def test_level_sets_and_chain():
    sp = GridMeasureSpace.uniform_interval(8)
    f = sp.sample(lambda x: np.where(x[:, 0] < 0.5, 1.0, 2.0))
    assert len(level_set_partition(f)) == 2
    chain = dyadic_chain(sp, 3)
    assert [len(c) for c in chain] == [1, 2, 4, 8]
    require_refining_chain(chain)
    with pytest.raises(PreconditionError):
        require_refining_chain(chain[::-1])


def test_equal_intervals_2d():
    sp = GridMeasureSpace.uniform_interval(4, dim=2)
    part = Partition.equal_intervals(sp, 2)
    assert len(part) == 4
    assert all(c.size == 4 for c in part.cells)


# -- properties ---------------------------------------------------------------

def random_space(seed, m):
    rng = np.random.default_rng(seed)
    return GridMeasureSpace(np.sort(rng.uniform(0, 1, m)), rng.uniform(0.01, 2.0, m))


def random_partition(space, seed, max_cells):
    rng = np.random.default_rng(seed)
    return Partition.from_labels(space, rng.integers(0, max_cells, space.size))


@given(st.integers(0, 2 ** 32), st.integers(1, 40),
       st.complex_numbers(max_magnitude=1e3), st.complex_numbers(max_magnitude=1e3))
def test_integrate_linear(seed, m, a, b):
    sp = random_space(seed, m)
    rng = np.random.default_rng(seed + 1)
    f = sp.function(rng.normal(size=m) + 1j * rng.normal(size=m))
    g = sp.function(rng.normal(size=m))
    lhs = integrate(a * f + b * g)
    rhs = a * integrate(f) + b * integrate(g)
    scale = abs(a) * integrate(f.__class__(sp, f.abs())).real + abs(b) * integrate(
        g.__class__(sp, g.abs())).real
    assert abs(lhs - rhs) <= 1e-12 * max(scale, 1e-300) + 1e-300


@given(st.integers(0, 2 ** 32), st.integers(1, 30))
def test_refinement_partial_order(seed, m):
    sp = random_space(seed, m)
    p1 = random_partition(sp, seed + 1, 4)
    p2 = common_refinement(p1, random_partition(sp, seed + 2, 4))
    p3 = common_refinement(p2, random_partition(sp, seed + 3, 4))
    assert partition_refines(p1, p1)
    assert partition_refines(p1, p2) and partition_refines(p2, p3)
    assert partition_refines(p1, p3)
    # antisymmetry
    q = random_partition(sp, seed + 4, 5)
    if partition_refines(p1, q) and partition_refines(q, p1):
        assert p1.same_cells(q)


@given(st.integers(0, 2 ** 32), st.integers(1, 30))
def test_common_refinement_refines_both(seed, m):
    sp = random_space(seed, m)
    a, b = random_partition(sp, seed + 1, 5), random_partition(sp, seed + 2, 5)
    c = common_refinement(a, b)
    assert partition_refines(a, c) and partition_refines(b, c)


@given(st.integers(0, 2 ** 32), st.integers(1, 50))
def test_cell_masses_sum_to_total(seed, m):
    sp = random_space(seed, m)
    part = random_partition(sp, seed + 1, 7)
    assert np.isclose(part.cell_masses().sum(), sp.total_mass, rtol=1e-12, atol=0)


def test_reproducible_summation(rng):
    sp = GridMeasureSpace(rng.uniform(size=1000), rng.uniform(0.1, 1, 1000))
    f = sp.function(rng.normal(size=1000))
    first = integrate(f)
    for _ in range(3):
        assert integrate(f) == first
