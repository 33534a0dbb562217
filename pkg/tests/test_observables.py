import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mdbench.backend import BackendSelector
from mdbench.core import COMPUTE, ParticleState
from mdbench.observables import (kinetic_energy_and_temperature,
                                 potential_energy_total, reduce_sum,
                                 total_momentum)


def reference_tree_sum(values):
    # independent restatement of the documented grouping: adjacent pairs,
    # odd leftover carried to the next level unchanged
    vals = [float(v) for v in values]
    while len(vals) > 1:
        nxt = [vals[k] + vals[k + 1] for k in range(0, len(vals) - 1, 2)]
        if len(vals) % 2:
            nxt.append(vals[-1])
        vals = nxt
    return vals[0]


def blocked_reference(values, block=4096):
    partials = [reference_tree_sum(values[lo:lo + block])
                for lo in range(0, len(values), block)]
    return reference_tree_sum(partials)


def test_empty_sum_is_exactly_zero():
    assert reduce_sum(np.array([])) == 0.0
    assert reduce_sum(np.array([]), mode="fast") == 0.0


def test_deterministic_sum_matches_documented_grouping():
    gen = np.random.default_rng(3)
    for size in (1, 2, 3, 7, 64, 1000, 4096, 4097, 10000):
        a = gen.normal(size=size) * 10.0 ** gen.integers(-8, 8, size=size)
        expect = (reference_tree_sum(a) if size <= 4096
                  else blocked_reference(a.tolist()))
        assert reduce_sum(a) == expect, size


def test_deterministic_sum_close_to_fsum():
    gen = np.random.default_rng(4)
    a = gen.normal(size=1_000_000) * 10.0 ** gen.integers(-8, 8,
                                                          size=1_000_000)
    exact = math.fsum(a)
    assert reduce_sum(a) == pytest.approx(exact, rel=1e-13)
    assert reduce_sum(a, mode="fast") == pytest.approx(exact, rel=1e-12)


def test_parallel_reduction_is_identical_to_sequential():
    gen = np.random.default_rng(5)
    a = gen.normal(size=30000)
    seq = reduce_sum(a)
    par = reduce_sum(a, backend=BackendSelector(kind="parallel",
                                                worker_count=4))
    assert par == seq


def test_unknown_mode_rejected():
    with pytest.raises(ValueError):
        reduce_sum(np.ones(3), mode="sloppy")


@given(st.lists(st.floats(-1e12, 1e12), min_size=0, max_size=300))
@settings(max_examples=100, deadline=None)
def test_deterministic_sum_is_permutation_sensitive_but_reproducible(vals):
    a = np.array(vals)
    assert reduce_sum(a) == reduce_sum(a.copy())


def test_kinetic_energy_and_temperature_hand_values():
    state = ParticleState(np.zeros((2, 3)) + 0.5,
                          velocities=np.array([[1.0, 2.0, 3.0],
                                               [0.0, 0.0, 1.0]]),
                          masses=np.array([2.0, 4.0]))
    ke, temp = kinetic_energy_and_temperature(state)
    assert ke == 0.5 * 2.0 * 14.0 + 0.5 * 4.0 * 1.0
    assert temp == 2.0 * ke / (3.0 * 2)


def test_temperature_uses_all_momentum_degrees():
    # 3n degrees of freedom, nothing subtracted for the center of mass
    n = 500
    gen = np.random.default_rng(6)
    state = ParticleState(np.zeros((n, 3)) + 0.5,
                          velocities=gen.normal(size=(n, 3)))
    ke, temp = kinetic_energy_and_temperature(state)
    assert temp == pytest.approx(2.0 * ke / (3.0 * n), rel=1e-15)


def test_potential_energy_total_sums_half_shares():
    state = ParticleState(np.zeros((3, 3)) + 0.5)
    state.per_particle_potential.acquire_write(COMPUTE)[:] = [1.0, 2.0, 4.0]
    assert potential_energy_total(state) == 7.0


def test_total_momentum_componentwise():
    state = ParticleState(np.zeros((2, 3)) + 0.5,
                          velocities=np.array([[1.0, 0.0, -1.0],
                                               [0.5, 2.0, 1.0]]),
                          masses=np.array([2.0, 4.0]))
    p = total_momentum(state)
    assert np.array_equal(p, [2.0 + 2.0, 8.0, -2.0 + 4.0])
