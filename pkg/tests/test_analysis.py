import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bcnkit.analysis import (
    AttractorReport,
    NonStandardFormError,
    NotAnAttractorError,
    absorption_horizon,
    fixed_points,
    is_global_attractor,
    limit_cycles,
    reconstructibility,
)
from bcnkit.network import Bcn, Bn, StateSpace, simulate
from bcnkit.stp import LogicalMatrix, identity

from oracles import (
    brute_force_reconstructibility,
    cycle_states_by_powers,
    matrix_power_attractor,
    random_bcn,
    refine_outputs,
    simulated_horizon,
)


def bn(succ):
    n = len(succ)
    return Bn(StateSpace.flat("x", n), LogicalMatrix(n, n, succ))


@st.composite
def bn_and_set(draw, max_n=12):
    n = draw(st.integers(1, max_n))
    succ = draw(st.lists(st.integers(1, n), min_size=n, max_size=n))
    target = draw(st.sets(st.integers(1, n)))
    return succ, target


def test_fixed_point_examples():
    assert list(fixed_points(bn([1, 2, 3]))) == [1, 2, 3]
    assert list(fixed_points(bn([2, 3, 1]))) == []
    rng = np.random.default_rng(1)
    succ = rng.integers(1, 10_001, size=10_000)
    net = Bn(StateSpace.flat("x", 10_000), LogicalMatrix(10_000, 10_000, succ))
    assert list(fixed_points(net)) == [i for i in range(1, 10_001) if succ[i - 1] == i]


def test_limit_cycle_examples():
    assert limit_cycles(bn([2, 3, 1])) == [[1, 2, 3]]
    assert limit_cycles(bn([2, 2])) == [[2]]
    assert limit_cycles(bn([3, 1, 2, 5, 4, 6])) == [[1, 3, 2], [4, 5], [6]]


@settings(max_examples=200, deadline=None)
@given(bn_and_set())
def test_cycles_match_power_oracle(case):
    succ, _ = case
    net = bn(succ)
    cycles = limit_cycles(net)
    flat = [v for c in cycles for v in c]
    assert len(flat) == len(set(flat))
    assert set(flat) == cycle_states_by_powers(succ)
    assert set(fixed_points(net)) <= set(flat)
    for c in cycles:
        assert [succ[v - 1] for v in c] == c[1:] + c[:1]


def test_attractor_examples():
    r = is_global_attractor(bn([2, 2]), [2])
    assert r == AttractorReport(True, 1, None)
    r = is_global_attractor(bn([2, 3, 1]), [1])
    assert not r.is_global_attractor and r.violating_cycle == [1, 2, 3] and r.horizon is None
    assert absorption_horizon(bn([2, 3, 1]), [1, 2, 3]) == 0
    assert absorption_horizon(bn([2, 2]), [2]) == 1
    with pytest.raises(NotAnAttractorError):
        absorption_horizon(bn([2, 3, 1]), [1])


def test_report_invariants_enforced():
    with pytest.raises(ValueError):
        AttractorReport(True, None, None)
    with pytest.raises(ValueError):
        AttractorReport(False, 2, [1])


@settings(max_examples=200, deadline=None)
@given(bn_and_set())
def test_attractor_matches_matrix_power(case):
    succ, target = case
    report = is_global_attractor(bn(succ), target)
    assert report.is_global_attractor == matrix_power_attractor(succ, target)
    if report.is_global_attractor:
        assert report.horizon == simulated_horizon(succ, target)
    else:
        assert not set(report.violating_cycle) <= target


def test_horizon_matches_simulation_large():
    rng = random.Random(12)
    for _ in range(10):
        n = rng.randint(200, 1000)
        # a random forest draining into a few absorbing states
        roots = set(rng.sample(range(1, n + 1), 3))
        succ = [v if v in roots else rng.randint(1, n) for v in range(1, n + 1)]
        net = bn(succ)
        target = {v for c in limit_cycles(net) for v in c} | set(rng.sample(range(1, n + 1), n // 3))
        report = is_global_attractor(net, target)
        assert report.is_global_attractor
        assert report.horizon == simulated_horizon(succ, target)
        for x0 in rng.sample(range(1, n + 1), 50):
            traj = simulate(net, x0, horizon=report.horizon + n).state_indices()
            assert set(traj[report.horizon :]) <= target


@settings(max_examples=150, deadline=None)
@given(bn_and_set(), st.sets(st.integers(1, 12)))
def test_superset_stays_attractor(case, extra):
    succ, target = case
    net = bn(succ)
    report = is_global_attractor(net, target)
    bigger = target | {v for v in extra if v <= len(succ)}
    if report.is_global_attractor:
        wider = is_global_attractor(net, bigger)
        assert wider.is_global_attractor and wider.horizon <= report.horizon


def test_violating_cycle_is_least():
    net = bn([2, 1, 4, 3, 5])
    assert is_global_attractor(net, [5]).violating_cycle == [1, 2]
    assert is_global_attractor(net, [1, 2, 5]).violating_cycle == [3, 4]


# reconstructibility


def flat_bcn(n, m, p, trans, out):
    return Bcn(StateSpace.flat("u", m), StateSpace.flat("x", n), StateSpace.flat("y", p),
               LogicalMatrix(n, n * m, trans), LogicalMatrix(p, n, out))


def test_canonical_reconstructibility_cases():
    ident = flat_bcn(3, 2, 3, [1, 2, 3] * 2, [1, 2, 3])
    r = reconstructibility(ident)
    assert r.reconstructible and r.horizon == 0 and r.witness is None

    const = flat_bcn(3, 2, 1, [1] * 6, [1, 1, 1])
    r = reconstructibility(const)
    assert r.reconstructible and r.horizon == 1

    swap = flat_bcn(2, 2, 1, [2, 1, 2, 1], [1, 1])
    r = reconstructibility(swap)
    assert not r.reconstructible and r.horizon is None
    assert r.witness.pair == (1, 2) and len(r.witness.inputs) >= 1


def test_witness_keeps_pair_ambiguous():
    rng = random.Random(21)
    found = 0
    for _ in range(300):
        net = random_bcn(rng, rng.randint(2, 8), rng.randint(1, 3), rng.randint(1, 3))
        r = reconstructibility(net)
        if r.reconstructible:
            continue
        found += 1
        a, b = r.witness.pair
        out, trans, n = net.output_map.col_index, net.transition.col_index, net.n_states
        for _ in range(3):
            for i in r.witness.inputs:
                assert out[a - 1] == out[b - 1] and a != b
                a, b = trans[(i - 1) * n + a - 1], trans[(i - 1) * n + b - 1]
        assert {a, b} == set(r.witness.pair)
    assert found > 10


def test_reconstructibility_matches_brute_force():
    rng = random.Random(5)
    for _ in range(150):
        net = random_bcn(rng, rng.randint(1, 8), rng.randint(1, 3), rng.randint(1, 4))
        r = reconstructibility(net)
        ok, least = brute_force_reconstructibility(net)
        assert r.reconstructible == ok
        assert r.horizon == least


def test_output_refinement_is_monotone():
    rng = random.Random(6)
    for _ in range(150):
        net = random_bcn(rng, rng.randint(1, 8), rng.randint(1, 3), rng.randint(1, 3))
        finer = refine_outputs(rng, net)
        if reconstructibility(net).reconstructible:
            r = reconstructibility(finer)
            assert r.reconstructible and r.horizon <= reconstructibility(net).horizon


def test_non_standard_form_rejected():
    two = StateSpace.flat("u", 2)
    net = Bcn(two, StateSpace.flat("x", 2), StateSpace.flat("y", 2), LogicalMatrix(2, 4, [1, 2, 1, 2]),
              LogicalMatrix(2, 4, [1, 2, 2, 1]), output_depends_on_input=True)
    with pytest.raises(NonStandardFormError):
        reconstructibility(net)
    fed = Bcn(StateSpace.flat("y", 2), StateSpace.flat("x", 2), StateSpace.flat("y", 2),
              LogicalMatrix(2, 4, [1, 2, 1, 2]), identity(2))
    with pytest.raises(NonStandardFormError):
        reconstructibility(fed)
