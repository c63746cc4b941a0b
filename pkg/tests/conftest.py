from __future__ import annotations

import random
from pathlib import Path

import pytest

from hdna.parsing import Element
from hdna.preprocess import CleanDocument

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def corpus_dir() -> Path:
    return FIXTURES / "corpus"


def random_document(rng: random.Random, max_nodes: int = 200) -> CleanDocument:
    """A random tree with unique node names t0..t{k-1}.

    Each new node attaches under a uniformly chosen earlier node, so index
    order is a valid insertion order but not level order — which is what
    makes it a useful numbering test case. Unique names let tests match
    nodes between representations without relying on the numbering under
    test.
    """
    size = rng.randint(1, max_nodes)
    nodes = [Element(f"t{i}") for i in range(size)]
    for i in range(1, size):
        nodes[rng.randrange(0, i)].children.append(nodes[i])
    return CleanDocument(root=nodes[0])


def document_from_parents(parents: list[int | None]) -> CleanDocument:
    nodes = [Element(f"t{i}") for i in range(len(parents))]
    for i, parent in enumerate(parents):
        if parent is not None:
            nodes[parent].children.append(nodes[i])
    return CleanDocument(root=nodes[0])


def delete_random_leaf(doc: CleanDocument, rng: random.Random) -> CleanDocument | None:
    """Copy the tree minus one random leaf; None if only the root is left."""

    def copy(el: Element) -> Element:
        return Element(el.name, None, [copy(c) for c in el.children])

    root = copy(doc.root)
    leaves: list[tuple[Element, int]] = []

    def collect(el: Element) -> None:
        for i, child in enumerate(el.children):
            if not child.children:
                leaves.append((el, i))
            else:
                collect(child)

    collect(root)
    if not leaves:
        return None
    parent, index = leaves[rng.randrange(len(leaves))]
    del parent.children[index]
    return CleanDocument(root=root)
