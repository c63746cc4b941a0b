"""Graphviz DOT rendering of weighted DOM trees."""

from __future__ import annotations

from typing import Sequence

from .dna import WeightedNode
from .tree import DomTree


def _escape(label: str) -> str:
    return label.replace("\\", "\\\\").replace('"', '\\"')


def to_dot(
    tree: DomTree,
    weights: Sequence[WeightedNode] | None = None,
    show_weights: bool = False,
) -> str:
    """Render the tree as a DOT digraph, one vertex per node.

    Vertices are named by count number (names repeat, count numbers do
    not); labels carry name, count number, descendant count, and, when
    requested, the weight rounded to four decimals. Output is byte-stable
    for identical inputs.
    """
    if show_weights and weights is None:
        raise ValueError("show_weights requires the weighted node list")
    lines = ["digraph hdna {"]
    for rec in tree.nodes:
        label = f"{rec.name} n={rec.n} d={rec.d}"
        if show_weights:
            label += f" w={weights[rec.n].weight:.4f}"
        lines.append(f'  n{rec.n} [label="{_escape(label)}"];')
    for rec in tree.nodes:
        for child in rec.children:
            lines.append(f"  n{rec.n} -> n{child};")
    lines.append("}")
    return "\n".join(lines) + "\n"
