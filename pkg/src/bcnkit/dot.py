"""Graphviz rendering of functional graphs."""

from __future__ import annotations

from typing import Optional

from .feedback import StateSet
from .network import Bn

MAX_DOT_STATES = 10_000


def to_dot(net: Bn, labels: bool = False, highlight: Optional[StateSet] = None) -> str:
    """DOT text with one node per canonical index and one edge per transition.

    With ``labels`` each node also shows its decoded assignment.  States in
    ``highlight`` are filled.
    """
    n = net.n_states
    if n > MAX_DOT_STATES:
        raise ValueError(f"{n} states is too many to draw (limit {MAX_DOT_STATES})")
    marked = highlight.mask() if highlight is not None else None
    lines = [f'digraph "{net.name or "bn"}" {{', "  rankdir=LR;", "  node [shape=circle];"]
    for i in range(1, n + 1):
        attrs = []
        if labels:
            text = "\\n".join(f"{k}={v}" for k, v in net.state_space.decode_dict(i).items())
            attrs.append(f'label="{i}\\n{text}"')
        if marked is not None and marked[i - 1]:
            attrs.append("style=filled")
        lines.append(f"  {i}" + (f" [{', '.join(attrs)}]" if attrs else "") + ";")
    for i, j in enumerate(net.successors.tolist(), start=1):
        lines.append(f"  {i} -> {j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
