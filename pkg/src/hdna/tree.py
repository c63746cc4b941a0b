"""Indexed DOM tree with level-order numbering and structural measures.

Every node gets a count number (its breadth-first position, root = 0), a
depth (edges from the root), and a descendant count (proper descendants,
so leaves count 0).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .preprocess import CleanDocument


@dataclass(frozen=True)
class NodeRecord:
    name: str
    n: int
    depth: int
    d: int
    parent: int | None
    children: tuple[int, ...]


@dataclass(frozen=True)
class DomTree:
    nodes: tuple[NodeRecord, ...]
    source_label: str = field(default="", compare=False)


def build_tree(doc: CleanDocument, source_label: str = "") -> DomTree:
    """Number a cleaned document breadth-first and measure every node.

    The synthetic document root becomes node 0; children keep their
    document order, so numbering within a level runs left to right.
    """
    elements = []
    parents: list[int | None] = []
    queue = deque([(doc.root, None)])
    while queue:
        element, parent_n = queue.popleft()
        n = len(elements)
        elements.append(element)
        parents.append(parent_n)
        for child in element.children:
            queue.append((child, n))

    count = len(elements)
    depths = [0] * count
    children: list[list[int]] = [[] for _ in range(count)]
    for i in range(1, count):
        parent = parents[i]
        depths[i] = depths[parent] + 1
        children[parent].append(i)

    descendants = [0] * count
    for i in range(count - 1, 0, -1):
        descendants[parents[i]] += descendants[i] + 1

    nodes = tuple(
        NodeRecord(
            name=elements[i].name,
            n=i,
            depth=depths[i],
            d=descendants[i],
            parent=parents[i],
            children=tuple(children[i]),
        )
        for i in range(count)
    )
    return DomTree(nodes=nodes, source_label=source_label)


def node_count(tree: DomTree) -> int:
    return len(tree.nodes)


def tree_from_triples(triples, source_label: str = "") -> DomTree:
    """Rebuild the full tree from (d, n, a) triples in count-number order.

    Level order plus per-node descendant counts determine the shape
    uniquely: each node's children are the next unassigned nodes, consumed
    until their subtree sizes add up to the parent's descendant count.

    Raises ValueError if the sequence is not a well-formed level-order
    encoding of a tree.
    """
    triples = list(triples)
    count = len(triples)
    if count == 0:
        raise ValueError("empty triple sequence")
    for i, t in enumerate(triples):
        if t.n != i:
            raise ValueError(f"count numbers out of order at position {i}")
        if t.d < 0 or t.d >= count:
            raise ValueError(f"descendant count out of range at node {i}")

    parents: list[int | None] = [None] * count
    next_child = 1
    for i in range(count):
        remaining = triples[i].d
        while remaining > 0:
            if next_child >= count:
                raise ValueError("descendant counts exceed node count")
            parents[next_child] = i
            remaining -= triples[next_child].d + 1
            next_child += 1
        if remaining != 0:
            raise ValueError(f"inconsistent descendant count at node {i}")
    if next_child != count:
        raise ValueError("descendant counts leave unassigned nodes")

    depths = [0] * count
    children: list[list[int]] = [[] for _ in range(count)]
    for i in range(1, count):
        depths[i] = depths[parents[i]] + 1
        children[parents[i]].append(i)

    nodes = tuple(
        NodeRecord(
            name=triples[i].a,
            n=i,
            depth=depths[i],
            d=triples[i].d,
            parent=parents[i],
            children=tuple(children[i]),
        )
        for i in range(count)
    )
    return DomTree(nodes=nodes, source_label=source_label)
