"""Verification passes over networks.

Attractor questions are answered on the functional graph of a network:
a set is a global attractor iff every state lying on a cycle belongs to
it.  This is what the row-support test on the ``N``-th transition power
checks, since the rows that survive ``N`` steps are exactly the cycle
states.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Iterable, Optional, Union

import numpy as np

from .feedback import ClosedLoop, StateSet, comparison_output
from .network import Bcn, Bn

__all__ = [
    "AttractorReport",
    "ReconstructibilityReport",
    "NotAnAttractorError",
    "NonStandardFormError",
    "fixed_points",
    "limit_cycles",
    "is_global_attractor",
    "absorption_horizon",
    "reconstructibility",
    "correct_diagnosis_set",
    "healthy_set",
    "verify_correct_diagnosis",
    "verify_successful_therapy",
]


class NotAnAttractorError(ValueError):
    pass


class NonStandardFormError(ValueError):
    pass


@dataclass(frozen=True)
class AttractorReport:
    is_global_attractor: bool
    horizon: Optional[int] = None
    violating_cycle: Optional[list[int]] = None

    def __post_init__(self):
        if self.is_global_attractor != (self.horizon is not None) or (self.horizon is None) == (
            self.violating_cycle is None
        ):
            raise ValueError("exactly one of horizon / violating_cycle must be set, matching the verdict")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ReconstructibilityWitness:
    """Two distinct states with equal outputs and an input cycle that keeps them so forever."""

    pair: tuple[int, int]
    inputs: list[int]


@dataclass(frozen=True)
class ReconstructibilityReport:
    reconstructible: bool
    horizon: Optional[int] = None
    witness: Optional[ReconstructibilityWitness] = None

    def __post_init__(self):
        if self.reconstructible != (self.horizon is not None) or self.reconstructible == (self.witness is not None):
            raise ValueError("horizon is present iff reconstructible; witness iff not")

    def to_dict(self) -> dict:
        doc = asdict(self)
        if self.witness is not None:
            doc["witness"] = {"pair": list(self.witness.pair), "inputs": list(self.witness.inputs)}
        return doc


def _successors0(net: Union[Bn, np.ndarray, Iterable[int]]) -> list[int]:
    if isinstance(net, Bn):
        return (net.successors - 1).tolist()
    return (np.asarray(net, dtype=np.int64) - 1).tolist()


def _functional_graph(succ: list[int]):
    """Cycles of a functional graph plus an order listing every node after its successor.

    Cycle nodes come before the tree nodes hanging off them, so a single
    pass over ``order`` can propagate values from cycles outward.
    """
    n = len(succ)
    state = [0] * n  # 0 unseen, 1 on the current walk, 2 finished
    on_cycle = [False] * n
    cycles, order = [], []
    for start in range(n):
        if state[start]:
            continue
        path = []
        v = start
        while state[v] == 0:
            state[v] = 1
            path.append(v)
            v = succ[v]
        tree = path
        if state[v] == 1:
            k = path.index(v)
            cyc = path[k:]
            for w in cyc:
                on_cycle[w] = True
            cycles.append(cyc)
            order.extend(cyc)
            tree = path[:k]
        order.extend(reversed(tree))
        for w in path:
            state[w] = 2
    return cycles, on_cycle, order


def _canonical_cycle(cyc: list[int]) -> list[int]:
    k = cyc.index(min(cyc))
    return [w + 1 for w in cyc[k:] + cyc[:k]]


def fixed_points(net: Bn) -> StateSet:
    succ = net.successors
    return StateSet(net.state_space, np.flatnonzero(succ == np.arange(1, succ.size + 1)) + 1)


def limit_cycles(net: Bn) -> list[list[int]]:
    """Every cycle once, rotated to start at its least state; sorted by that state.

    Fixed points appear as cycles of length one.
    """
    cycles, _, _ = _functional_graph(_successors0(net))
    return sorted((_canonical_cycle(c) for c in cycles), key=lambda c: c[0])


def _as_mask(net: Bn, s) -> np.ndarray:
    if isinstance(s, StateSet):
        if s.space.dim != net.n_states:
            raise ValueError("state set belongs to a different space")
        return s.mask()
    mask = np.zeros(net.n_states, dtype=bool)
    idx = np.asarray(list(s), dtype=np.int64)
    if idx.size and (idx.min() < 1 or idx.max() > net.n_states):
        raise ValueError(f"state indices must lie in [1, {net.n_states}]")
    mask[idx - 1] = True
    return mask


def _horizon(succ: list[int], on_cycle: list[bool], order: list[int], inside: list[bool]) -> int:
    # h[v]: least T with the trajectory from v inside the set for all t >= T
    h = [0] * len(succ)
    best = 0
    for v in order:
        if on_cycle[v]:
            continue
        nxt = h[succ[v]]
        h[v] = nxt + 1 if nxt > 0 else (0 if inside[v] else 1)
        if h[v] > best:
            best = h[v]
    return best


def is_global_attractor(net: Bn, s) -> AttractorReport:
    """Whether every trajectory of ``net`` ends up in ``s`` and stays there.

    On success the report carries the least horizon ``T``; otherwise the
    cycle with the smallest least state among those leaving ``s``.
    """
    succ = _successors0(net)
    inside = _as_mask(net, s).tolist()
    cycles, on_cycle, order = _functional_graph(succ)
    bad = [c for c in cycles if not all(inside[w] for w in c)]
    if bad:
        worst = min((_canonical_cycle(c) for c in bad), key=lambda c: c[0])
        return AttractorReport(False, None, worst)
    return AttractorReport(True, _horizon(succ, on_cycle, order, inside), None)


def absorption_horizon(net: Bn, s) -> int:
    report = is_global_attractor(net, s)
    if not report.is_global_attractor:
        raise NotAnAttractorError(f"set is not a global attractor; cycle {report.violating_cycle} leaves it")
    return report.horizon


# reconstructibility


def _check_standard_form(net: Bcn) -> None:
    if net.output_depends_on_input:
        raise NonStandardFormError("reconstructibility needs a state-only output map")
    fed_back = set(net.output_space.names) & set(net.input_space.names)
    if fed_back:
        raise NonStandardFormError(
            f"inputs {sorted(fed_back)} are the network's own outputs; apply reduce_plant first"
        )


def _pair_graph(net: Bcn):
    n, m = net.n_states, net.n_inputs
    out = net.output_map.col_index - 1
    order = np.argsort(out, kind="stable")
    bounds = np.flatnonzero(np.diff(out[order])) + 1
    lo_parts, hi_parts = [], []
    for group in np.split(order, bounds):
        if group.size < 2:
            continue
        g = np.sort(group)
        i, j = np.triu_indices(g.size, k=1)
        lo_parts.append(g[i])
        hi_parts.append(g[j])
    if not lo_parts:
        return np.empty(0, np.int64), np.empty(0, np.int64), np.empty(0, np.int64), np.empty(0, np.int64), np.empty(0, np.int64)
    lo = np.concatenate(lo_parts)
    hi = np.concatenate(hi_parts)
    keys = lo * n + hi
    sort = np.argsort(keys)
    lo, hi, keys = lo[sort], hi[sort], keys[sort]

    trans = net.transition.col_index - 1
    src, dst, lab = [], [], []
    for i in range(m):
        a = trans[i * n + lo]
        b = trans[i * n + hi]
        keep = (a != b) & (out[a] == out[b])
        na, nb = np.minimum(a[keep], b[keep]), np.maximum(a[keep], b[keep])
        src.append(np.flatnonzero(keep))
        dst.append(np.searchsorted(keys, na * n + nb))
        lab.append(np.full(int(keep.sum()), i + 1, dtype=np.int64))
    return lo, hi, np.concatenate(src), np.concatenate(dst), np.concatenate(lab)


def reconstructibility(net: Bcn) -> ReconstructibilityReport:
    """Decide whether input/output records determine the final state.

    Nodes of the pair graph are unordered pairs of distinct states with
    the same output; input ``i`` links a pair to the pair of successors
    when these stay distinct and share their output.  Ambiguity can last
    ``T`` steps iff the graph has a path with ``T`` edges, so the network
    is reconstructible iff the graph is acyclic, and the reported horizon
    is the number of nodes on its longest path.
    """
    _check_standard_form(net)
    lo, hi, src, dst, lab = _pair_graph(net)
    k = lo.size
    if k == 0:
        return ReconstructibilityReport(True, 0)

    # peel sinks repeatedly; level[v] = nodes on the longest path from v
    outdeg = np.bincount(src, minlength=k)
    rev_order = np.argsort(dst, kind="stable")
    rev_src = src[rev_order].tolist()
    rev_ptr = np.concatenate([[0], np.cumsum(np.bincount(dst, minlength=k))]).tolist()
    level = [0] * k
    deg = outdeg.tolist()
    stack = [v for v in range(k) if deg[v] == 0]
    for v in stack:
        level[v] = 1
    seen = len(stack)
    while stack:
        w = stack.pop()
        lw = level[w] + 1
        for p in rev_src[rev_ptr[w] : rev_ptr[w + 1]]:
            if lw > level[p]:
                level[p] = lw
            deg[p] -= 1
            if deg[p] == 0:
                stack.append(p)
                seen += 1
    if seen == k:
        return ReconstructibilityReport(True, int(max(level)))

    # nodes left over each keep an edge into the leftover set; walk to a cycle
    alive = np.array(deg) > 0
    fwd = np.lexsort((dst, lab, src))
    f_src, f_dst, f_lab = src[fwd], dst[fwd], lab[fwd]
    f_ptr = np.concatenate([[0], np.cumsum(np.bincount(f_src, minlength=k))])
    v = int(np.flatnonzero(alive)[0])
    walk, where = [], {}
    while v not in where:
        where[v] = len(walk)
        for e in range(f_ptr[v], f_ptr[v + 1]):
            if alive[f_dst[e]]:
                walk.append((v, int(f_lab[e])))
                v = int(f_dst[e])
                break
    cycle = walk[where[v] :]
    start = cycle[0][0]
    witness = ReconstructibilityWitness((int(lo[start]) + 1, int(hi[start]) + 1), [i for _, i in cycle])
    return ReconstructibilityReport(False, None, witness)


# case-study style targets on closed loops


def correct_diagnosis_set(cl: ClosedLoop, plant_var: str = "S1", context_var: str = "X1", correspondence=None) -> StateSet:
    c = comparison_output(cl.plant.state_space, cl.context.state_space, plant_var, context_var, correspondence)
    return StateSet(cl.combined_space, np.flatnonzero(c.col_index == 1) + 1, f"{plant_var} ~ {context_var}")


def healthy_set(cl: ClosedLoop, plant_var: str = "S1", context_var: str = "X1", healthy: str = "H") -> StateSet:
    space = cl.combined_space
    pos = space.positions()
    pv, cv = space.variable(plant_var), space.variable(context_var)
    mask = (pos[:, space.index_of(plant_var)] == pv.position(healthy) - 1) & (
        pos[:, space.index_of(context_var)] == cv.position(healthy) - 1
    )
    return StateSet.from_mask(space, mask, f"{plant_var} == {healthy} && {context_var} == {healthy}")


def verify_correct_diagnosis(cl: ClosedLoop, plant_var: str = "S1", context_var: str = "X1", correspondence=None) -> AttractorReport:
    """Is the set where the estimated status matches the actual one a global attractor?"""
    return is_global_attractor(cl.bn, correct_diagnosis_set(cl, plant_var, context_var, correspondence))


def verify_successful_therapy(cl: ClosedLoop, plant_var: str = "S1", context_var: str = "X1", healthy: str = "H") -> AttractorReport:
    h = healthy_set(cl, plant_var, context_var, healthy)
    cd = correct_diagnosis_set(cl, plant_var, context_var)
    if not h.issubset(cd):
        raise ValueError("the healthy set is not contained in the correct-diagnosis set")
    return is_global_attractor(cl.bn, h)
