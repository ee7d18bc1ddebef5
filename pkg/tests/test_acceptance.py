"""Acceptance gate: every criterion at its stated tolerance and time limit.

Each test appends one PASS/FAIL line to ``conftest.ACCEPTANCE_LINES``; the
lines are printed in the terminal summary.
"""
import math
import time
from fractions import Fraction

import numpy as np
import pytest

import conftest
from oracles import classical_lp_norm, half_coth_half, modular_fsum
from varlp.approx import apply, operator_norm_estimate, partition_operator
from varlp.exponents import VariableExponent
from varlp.measure import GridMeasureSpace, Partition, level_set_partition
from varlp.norms import holder_check, luxemburg_norm, modular, seq_norm
from varlp.nuclear import NuclearRepresentation, oloff_check, rep_kernel, rep_trace
from varlp.torus import (FrequencyBox, TorusGrid, bessel_partial_sum, bessel_symbol,
                         bessel_values, lidskii_report, multiplier_compose,
                         partial_sum_difference, summability_predicate)

INF = np.inf


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.start


def record(number, name, ok, detail, seconds=None, limit=None):
    timing = ""
    if seconds is not None:
        ok = ok and (limit is None or seconds < limit)
        timing = f" [{seconds:.2f}s" + (f" < {limit:g}s]" if limit else "]")
    line = f"{'PASS' if ok else 'FAIL'}  {number:>2}. {name}: {detail}{timing}"
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def random_space(rng, m):
    return GridMeasureSpace(np.sort(rng.uniform(size=m)), rng.uniform(0.02, 1.0, m))


def random_simple(rng, space, cells):
    part = Partition.from_labels(space, rng.integers(0, cells, space.size))
    k = len(part)
    values = rng.normal(size=k) + 1j * rng.normal(size=k)
    values[rng.uniform(size=k) < 0.15] = 0
    return space.function(values[part.labels]), part


def test_01_constant_exponent_consistency():
    rng = np.random.default_rng(101)
    worst, count = 0.0, 0
    with Timer() as t:
        for _ in range(200):
            sp = random_space(rng, int(rng.integers(1, 40)))
            f, _ = random_simple(rng, sp, 6)
            for p0 in (1.0, 1.5, 2.0, 3.0):
                got = luxemburg_norm(f, VariableExponent.constant(sp, p0)).value
                want = classical_lp_norm(f.values, sp.weights, p0)
                worst = max(worst, abs(got - want) / (1 + want))
                count += 1
    record(1, "constant-exponent consistency", worst <= 1e-10,
           f"{count} cases, max |diff|/(1+classical) = {worst:.2e} (<= 1e-10)", t.seconds, 5)


def test_02_unit_modular():
    rng = np.random.default_rng(102)
    worst = 0.0
    with Timer() as t:
        for _ in range(200):
            sp = random_space(rng, int(rng.integers(1, 40)))
            f, _ = random_simple(rng, sp, 6)
            if f.is_zero():
                f = f + 1
            _, part = random_simple(rng, sp, 5)
            p = VariableExponent.piecewise(part, rng.uniform(1, 10, len(part)))
            rho = modular(f / luxemburg_norm(f, p).value, p)
            worst = max(worst, abs(rho - 1))
    record(2, "unit-modular property", worst <= 1e-8,
           f"200 functions, max |rho(f/||f||) - 1| = {worst:.2e} (<= 1e-8)", t.seconds, 5)


def test_03_golden_ratio():
    # root of 1/lam + 1/lam^2 = 1, i.e. lam^2 - lam - 1 = 0
    golden = (1 + math.sqrt(5)) / 2
    got = seq_norm([1, 1], [1, 2]).value
    record(3, "golden-ratio sequence norm", abs(got - golden) <= 1e-10,
           f"{got!r} vs {golden!r}, diff {abs(got - golden):.1e} (<= 1e-10)")


def _exponent_from_inverse(space, inv):
    with np.errstate(divide="ignore"):
        return VariableExponent(space, np.where(inv > 0, 1.0 / np.maximum(inv, 1e-300), INF))


def test_04_holder_factor_two():
    rng = np.random.default_rng(104)
    violations, worst = 0, 0.0
    with Timer() as t:
        for _ in range(1000):
            m = int(rng.integers(1, 20))
            sp = random_space(rng, m)
            f, _ = random_simple(rng, sp, 5)
            g, _ = random_simple(rng, sp, 5)
            inv_s = rng.uniform(0, 1, m)
            inv_s[rng.uniform(size=m) < 0.1] = 1.0
            split = rng.uniform(0, 1, m)
            split[rng.uniform(size=m) < 0.1] = 0.0
            inv_p, inv_q = inv_s * split, inv_s * (1 - split)
            res = holder_check(f, g, _exponent_from_inverse(sp, inv_p),
                               _exponent_from_inverse(sp, inv_q), _exponent_from_inverse(sp, inv_s))
            violations += not res.holds
            if res.rhs > 0:
                worst = max(worst, res.lhs / res.rhs)
    record(4, "factor-2 Hoelder inequality", violations == 0,
           f"1000 triples, {violations} violations, max lhs/rhs = {worst:.4f}", t.seconds, 30)


def test_05_bap_bound():
    rng = np.random.default_rng(105)
    worst_general, worst_two, worst_repro = 0.0, 0.0, 0.0
    with Timer() as t:
        for case in range(20):
            sp = random_space(rng, int(rng.integers(4, 24)))
            _, part = random_simple(rng, sp, 6)
            op = partition_operator(part)
            # bounded exponent, constant on the cells of the partition
            p = VariableExponent.piecewise(part, rng.uniform(1, 10, len(part)))
            # sampled on single atoms, so the averaging actually moves mass
            est = operator_norm_estimate(op, p, 500, case, complex_values=bool(case % 2))
            worst_general = max(worst_general, est.lower_bound)
            two = VariableExponent.constant(sp, 2)
            est = operator_norm_estimate(op, two, 500, 1000 + case, complex_values=bool(case % 2))
            worst_two = max(worst_two, est.lower_bound)
            f, _ = random_simple(rng, sp, 5)
            fine = level_set_partition(f)
            err = np.abs(apply(partition_operator(fine), f).values - f.values).max()
            worst_repro = max(worst_repro, err)
    ok = worst_general <= 2 + 1e-8 and worst_two <= 1 + 1e-8 and worst_repro <= 1e-12
    record(5, "partition-operator bound", ok,
           f"20 cases x 500 samples: max ||L f|| = {worst_general:.12f} (<= 2), "
           f"p=2 max = {worst_two:.12f} (<= 1), reproduction error {worst_repro:.1e}",
           t.seconds, 60)


def test_06_lidskii_bessel():
    with Timer() as t:
        grid, box = TorusGrid(1, 129), FrequencyBox(1, 64)
        rep = lidskii_report(bessel_symbol(2, grid, box), 2 / 3)
        want = np.sort(bessel_values(2, box.points))
        eig = rep.eigenvalues
        nonzero = eig[np.abs(eig) > 1e-10]
        spectral_err = INF
        if nonzero.size == want.size:
            spectral_err = max(np.abs(np.sort(nonzero.real) - want).max(), np.abs(nonzero.imag).max())
    ok = rep.max_discrepancy() <= 1e-8 and spectral_err <= 1e-10
    record(6, "finite-dimensional Lidskii (Bessel)", ok,
           f"traces {rep.eigen_sum.real:.15f}, max pairwise diff {rep.max_discrepancy():.1e} (<= 1e-8); "
           f"spectrum error {spectral_err:.1e} (<= 1e-10)", t.seconds, 10)


def test_07_closed_form_trace_target():
    with Timer() as t:
        s = bessel_partial_sum(2, 1000)
    target = half_coth_half()
    gap = abs(s - target)
    record(7, "closed-form trace target", gap <= 5e-5,
           f"sum = {s:.10f}, 0.5 coth(0.5) = {target:.10f}, gap {gap:.4e} (<= 5e-5)", t.seconds, 1)


def test_08_multiplier_factorization():
    with Timer() as t:
        grid, box = TorusGrid(1, 129), FrequencyBox(1, 64)
        alpha = grid.sample(lambda x: 2 + np.sin(2 * np.pi * x[:, 0]))
        rep = lidskii_report(multiplier_compose(alpha, bessel_symbol(2, grid, box)), 2 / 3)
        want = 2 * bessel_partial_sum(2, 64)
        worst = max(abs(v - want) for v in (rep.eigen_sum, rep.matrix_trace, rep.symbol_trace))
    record(8, "multiplier trace factorization", worst <= 1e-8,
           f"2 * sum sigma = {want:.15f}, max |trace - target| = {worst:.1e} (<= 1e-8)", t.seconds, 10)


def _orthogonal_rep(rng, sp, k):
    root = np.sqrt(sp.weights)
    qg, _ = np.linalg.qr(rng.normal(size=(sp.size, k)) + 1j * rng.normal(size=(sp.size, k)))
    qh, _ = np.linalg.qr(rng.normal(size=(sp.size, k)))
    g = (qg / root[:, None]).T * rng.uniform(0.1, 3, k)[:, None]
    return NuclearRepresentation.from_arrays(g, (qh / root[:, None]).T, sp)


def _random_rep(rng, sp, terms):
    shape = (terms, sp.size)
    return NuclearRepresentation.from_arrays(rng.normal(size=shape) + 1j * rng.normal(size=shape),
                                             rng.normal(size=shape) + 1j * rng.normal(size=shape), sp)


def test_09_oloff_one_sided():
    rng = np.random.default_rng(109)
    failures, worst_eq = 0, 0.0
    with Timer() as t:
        for _ in range(100):
            sp = random_space(rng, int(rng.integers(2, 16)))
            rep = _random_rep(rng, sp, int(rng.integers(1, 9)))
            for r in (0.5, 2 / 3, 1.0):
                failures += not oloff_check(rep, r).holds
        for _ in range(20):
            sp = random_space(rng, int(rng.integers(8, 16)))
            for rep in (_random_rep(rng, sp, 1), _orthogonal_rep(rng, sp, int(rng.integers(2, 8)))):
                for r in (0.5, 2 / 3, 1.0):
                    chk = oloff_check(rep, r)
                    worst_eq = max(worst_eq, abs(chk.schatten / chk.rep_bound_root - 1))
    ok = failures == 0 and worst_eq <= 1e-8
    record(9, "Oloff one-sided check", ok,
           f"300 checks, {failures} violations; equality cases max rel diff {worst_eq:.1e} (<= 1e-8)",
           t.seconds, 30)


def test_10_representation_invariance():
    rng = np.random.default_rng(110)
    worst = 0.0
    with Timer() as t:
        for _ in range(100):
            sp = random_space(rng, int(rng.integers(2, 16)))
            rep = _random_rep(rng, sp, int(rng.integers(1, 8)))
            pieces = []
            for k in rng.permutation(len(rep)):
                g, h = rep.terms[k]
                a = rng.uniform(-1, 2)
                pieces += [(g * a, h), (g * (1 - a), h)] if rng.uniform() < 0.5 else [(g, h)]
            z = sp.function(rng.normal(size=sp.size))
            pieces.insert(int(rng.integers(0, len(pieces) + 1)), (z, z))
            pieces.append((-z, z))
            other = NuclearRepresentation(pieces)
            assert np.abs(rep_kernel(other).values - rep_kernel(rep).values).max() <= 1e-12
            worst = max(worst, abs(rep_trace(other) - rep_trace(rep)))
    record(10, "trace well-definedness", worst <= 1e-10,
           f"100 regrouped representations, max trace diff {worst:.1e} (<= 1e-10)", t.seconds)


def test_11_summability_criterion():
    mismatches, boundary_bad, rows = [], [], 0
    with Timer() as t:
        for r in (Fraction(1, 2), Fraction(2, 3), Fraction(1)):
            for tau in (Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3)):
                predicted = summability_predicate(float(r), float(tau), 1)
                if r * tau == 1:
                    if predicted:
                        boundary_bad.append((float(r), float(tau)))
                    continue
                rows += 1
                diff = partial_sum_difference(float(r), float(tau), 1, 500, 1000)
                if predicted != (diff < 1e-4):
                    mismatches.append(f"r={float(r):.3g},tau={float(tau):g} (D={diff:.2e})")
    ok = not mismatches and not boundary_bad
    detail = f"{rows} off-boundary pairs, {len(mismatches)} mismatches"
    if mismatches:
        detail += ": " + "; ".join(mismatches)
    detail += f"; boundary pairs divergent: {not boundary_bad}"
    record(11, "summability criterion vs partial sums", ok, detail, t.seconds)
