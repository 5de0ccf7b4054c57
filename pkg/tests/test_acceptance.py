"""Exit criteria, each at its stated size and time budget.

A summary line per criterion is printed at the end of the run.
"""

import itertools
import json
import random
import time
import tracemalloc
from pathlib import Path

import numpy as np
import pytest

from bcnkit.analysis import is_global_attractor, reconstructibility
from bcnkit.casestudy import H_PREDICATE, closed_loop, model_source, redirect_out_of
from bcnkit.cli import main
from bcnkit.dsl import ModelError, compile_model, interpret, parse, round_trip, spaces
from bcnkit.feedback import compose, state_set
from bcnkit.network import Bcn, Bn, StateSpace
from bcnkit.stp import LogicalMatrix, delta, identity, kron, power_reducing_matrix, stp, stp_vec, swap_matrix

from oracles import (
    all_assignments,
    brute_force_reconstructibility,
    dense,
    dense_stp,
    lockstep,
    matrix_power_attractor,
    random_bcn,
    random_logical,
    random_model,
)

pytestmark = pytest.mark.acceptance

BAD = Path(__file__).parent / "fixtures" / "bad"


class Budget:
    def __init__(self, seconds):
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.seconds, f"took {self.elapsed:.2f} s, budget {self.seconds} s"


def test_ac1_stp_algebra_suite():
    rng = random.Random(1)
    with Budget(10):
        for _ in range(1000):
            a = random_logical(rng, rng.randint(1, 16), rng.randint(1, 16))
            b = random_logical(rng, rng.randint(1, 16), rng.randint(1, 16))
            da, db = dense(a), dense(b)
            assert np.array_equal(dense(stp(a, b)), dense_stp(da, db))
            assert np.array_equal(dense(kron(a, b)), np.kron(da, db))
            x, y = a.column(rng.randint(1, a.cols)), b.column(rng.randint(1, b.cols))
            assert np.array_equal(dense(stp_vec(x, y).as_matrix()), np.kron(dense(x.as_matrix()), dense(y.as_matrix())))
        for m, n in itertools.product(range(1, 7), repeat=2):
            w = swap_matrix(m, n)
            for i, j in itertools.product(range(1, m + 1), range(1, n + 1)):
                assert w.apply(stp_vec(delta(i, m), delta(j, n))) == stp_vec(delta(j, n), delta(i, m))
            assert stp(w, swap_matrix(n, m)) == identity(m * n)
        for n in range(1, 7):
            phi = power_reducing_matrix(n)
            for i in range(1, n + 1):
                assert phi.apply(delta(i, n)) == stp_vec(delta(i, n), delta(i, n))
        for _ in range(200):
            a, b, c = (random_logical(rng, rng.randint(1, 8), rng.randint(1, 8)) for _ in range(3))
            assert stp(stp(a, b), c) == stp(a, stp(b, c))


def test_ac2_dimension_reproduction():
    tracemalloc.start()
    try:
        with Budget(30):
            context = compile_model(parse(model_source("patient_context")))
            plant = compile_model(parse(model_source("patient_model")))
            cl = compose(context, plant)
        _, peak = tracemalloc.get_traced_memory()
    finally:
        tracemalloc.stop()
    assert (context.n_states, plant.n_states, context.n_inputs, context.n_outputs) == (270, 1944, 27, 18)
    assert cl.transition.shape == (524_880, 524_880)
    assert peak < 1 << 30, f"peak {peak / 2**20:.0f} MiB"


def test_ac3_attractor_method_equivalence():
    rng = random.Random(3)
    agree = {True: 0, False: 0}
    with Budget(20):
        for _ in range(200):
            n = rng.randint(1, 12)
            succ = [rng.randint(1, n) for _ in range(n)]
            target = {v for v in range(1, n + 1) if rng.random() < 0.6}
            net = Bn(StateSpace.flat("x", n), LogicalMatrix(n, n, succ))
            verdict = is_global_attractor(net, target).is_global_attractor
            assert verdict == matrix_power_attractor(succ, target)
            agree[verdict] += 1
    assert agree[True] > 10 and agree[False] > 10


def _flat(n, m, p, trans, out):
    return Bcn(StateSpace.flat("u", m), StateSpace.flat("x", n), StateSpace.flat("y", p),
               LogicalMatrix(n, n * m, trans), LogicalMatrix(p, n, out))


def test_ac4_reconstructibility_oracle_equivalence():
    rng = random.Random(4)
    with Budget(60):
        for _ in range(200):
            net = random_bcn(rng, rng.randint(1, 8), rng.randint(1, 3), rng.randint(1, 4))
            report = reconstructibility(net)
            ok, least = brute_force_reconstructibility(net)
            assert report.reconstructible == ok
            assert report.horizon == least
        assert reconstructibility(_flat(4, 2, 4, list(range(1, 5)) * 2, [1, 2, 3, 4])).reconstructible
        assert reconstructibility(_flat(4, 2, 2, [1] * 8, [1, 2, 1, 2])).reconstructible
        swap = reconstructibility(_flat(2, 2, 1, [2, 1, 2, 1], [1, 1]))
        assert not swap.reconstructible and swap.witness.pair == (1, 2)


def test_ac5_closed_loop_semantic_equivalence():
    rng = random.Random(5)
    with Budget(30):
        for k in range(100):
            n_u, n_x, n_y, n_s = (rng.randint(1, 6) for _ in range(4))
            reads_u = k % 4 != 0
            context = Bcn(StateSpace.flat("u", n_u), StateSpace.flat("x", n_x), StateSpace.flat("y", n_y),
                          random_logical(rng, n_x, n_x * n_u), random_logical(rng, n_y, n_x))
            in_space = StateSpace.flat("y", n_y)
            if reads_u:
                in_space = in_space.concat(StateSpace.flat("u", n_u))
            plant = Bcn(in_space, StateSpace.flat("s", n_s), StateSpace.flat("w", n_u),
                        random_logical(rng, n_s, n_s * in_space.dim), random_logical(rng, n_u, n_s))
            cl = compose(context, plant)
            succ = cl.bn.successors.tolist()
            horizon = 2 * cl.n_states
            for s0, x0 in itertools.product(range(1, n_s + 1), range(1, n_x + 1)):
                v = (s0 - 1) * n_x + x0
                for s, x in lockstep(context, plant, s0, x0, horizon, reads_u):
                    assert v == (s - 1) * n_x + x
                    v = succ[v - 1]


def test_ac6_case_study_verification(capsys):
    with Budget(60):
        code = main(["--json", "casestudy", "verify"])
        doc = json.loads(capsys.readouterr().out)
        assert code == 0 and doc["verdict"] is True
        res = doc["result"]
        for key in ("correct_diagnosis", "successful_therapy"):
            assert res[key]["is_global_attractor"] and isinstance(res[key]["horizon"], int)
        assert res["healthy_subset_of_correct"] is True

        code = main(["--json", "casestudy", "verify", "--mutant"])
        doc = json.loads(capsys.readouterr().out)
        assert code == 1 and doc["verdict"] is False
        cycle = doc["result"]["successful_therapy"]["violating_cycle"]
        assert cycle and len(cycle) >= 1

        # the same negative control as a single redirected column of the healthy loop
        cl = closed_loop()
        h = state_set(cl.combined_space, H_PREDICATE)
        mutated, entry, _ = redirect_out_of(cl.bn, h)
        assert int((mutated.successors != cl.bn.successors).sum()) == 1
        report = is_global_attractor(mutated, h)
        assert not report.is_global_attractor and report.violating_cycle


def _equivalent(ast):
    net = compile_model(ast)
    in_space, st_space, out_space = spaces(ast)
    trans, outm = net.transition.col_index, net.output_map.col_index
    col = 0
    for inputs in all_assignments(in_space):
        for xi, state in enumerate(all_assignments(st_space)):
            nxt, out = interpret(ast, inputs, state)
            assert trans[col] == st_space.encode(nxt).index
            o = outm[col] if net.output_depends_on_input else outm[xi]
            assert o == out_space.encode(out).index
            col += 1
    return col


def test_ac7_dsl_correctness():
    rng = random.Random(7)
    checked = _equivalent(parse(model_source("patient_context")))
    assert checked == 7290
    for _ in range(200):
        _equivalent(random_model(rng))
    big = random_model(random.Random(70), max_product=100_000, min_product=30_000, n_states=(7, 9))
    assert _equivalent(big) >= 30_000

    for _ in range(500):
        ast = random_model(rng)
        assert parse(round_trip(ast)) == ast

    fixtures = sorted(BAD.glob("*.bcn"))
    assert len(fixtures) >= 10
    for path in fixtures:
        with pytest.raises(ModelError) as info:
            parse(path.read_text())
        assert info.value.line >= 1 and info.value.column >= 1, path.name
