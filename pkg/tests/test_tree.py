"""Level-order numbering, depth, and descendant counts, checked against
independently written oracles on randomized trees."""

from __future__ import annotations

import random

import pytest

from hdna.dna import DnaTriple
from hdna.pipeline import profile
from hdna.preprocess import preprocess
from hdna.tree import build_tree, node_count, tree_from_triples

from conftest import document_from_parents, random_document
from oracles import depth_by_name, descendants_by_name, level_order_names


def test_five_node_page_numbering():
    tree = build_tree(preprocess(b"<html><head></head><body><p>hi</p></body></html>"))
    got = [(r.name, r.n, r.depth, r.d) for r in tree.nodes]
    assert got == [
        ("document", 0, 0, 4),
        ("html", 1, 1, 3),
        ("head", 2, 2, 0),
        ("body", 3, 2, 1),
        ("p", 4, 3, 0),
    ]


def test_numbering_is_level_order_not_document_order():
    # title (depth 2) must be numbered before the two divs (depth 2's
    # children at depth... divs are depth 2 under body) — level order puts
    # head's child after body itself but before body's children
    tree = build_tree(
        preprocess(
            b"<html><head><title>t</title></head>"
            b"<body><div>a</div><div>b</div></body></html>"
        )
    )
    assert [(r.name, r.n) for r in tree.nodes] == [
        ("document", 0),
        ("html", 1),
        ("head", 2),
        ("body", 3),
        ("title", 4),
        ("div", 5),
        ("div", 6),
    ]


def test_lone_root_tree():
    doc = document_from_parents([None])
    tree = build_tree(doc)
    assert len(tree.nodes) == 1
    rec = tree.nodes[0]
    assert (rec.n, rec.depth, rec.d, rec.parent) == (0, 0, 0, None)


def test_linear_chain_counts():
    doc = document_from_parents([None, 0, 1, 2, 3])
    tree = build_tree(doc)
    assert [r.d for r in tree.nodes] == [4, 3, 2, 1, 0]
    assert [r.depth for r in tree.nodes] == [0, 1, 2, 3, 4]


def test_star_counts():
    doc = document_from_parents([None, 0, 0, 0, 0, 0])
    tree = build_tree(doc)
    assert tree.nodes[0].d == 5
    assert all(r.d == 0 and r.depth == 1 for r in tree.nodes[1:])


def test_children_keep_document_order():
    doc = document_from_parents([None, 0, 0, 1, 1, 2])
    tree = build_tree(doc)
    assert [r.name for r in tree.nodes] == ["t0", "t1", "t2", "t3", "t4", "t5"]
    assert tree.nodes[0].children == (1, 2)
    assert tree.nodes[1].children == (3, 4)
    assert tree.nodes[2].children == (5,)


@pytest.mark.parametrize("seed", range(25))
def test_random_tree_matches_oracles(seed):
    rng = random.Random(seed)
    doc = random_document(rng, max_nodes=120)
    tree = build_tree(doc)

    assert [r.name for r in tree.nodes] == level_order_names(doc.root)

    depths = depth_by_name(doc.root)
    counts = descendants_by_name(doc.root)
    for rec in tree.nodes:
        assert rec.n == tree.nodes.index(rec)
        assert rec.depth == depths[rec.name]
        assert rec.d == counts[rec.name]


@pytest.mark.parametrize("seed", range(10))
def test_parent_child_links_are_consistent(seed):
    rng = random.Random(1000 + seed)
    tree = build_tree(random_document(rng))
    for rec in tree.nodes:
        for child_n in rec.children:
            assert tree.nodes[child_n].parent == rec.n
            assert tree.nodes[child_n].depth == rec.depth + 1
        if rec.parent is not None:
            assert rec.n in tree.nodes[rec.parent].children
    # d equals direct recursion over the children links
    memo: dict[int, int] = {}
    for rec in reversed(tree.nodes):
        memo[rec.n] = sum(memo[c] + 1 for c in rec.children)
    assert all(rec.d == memo[rec.n] for rec in tree.nodes)


def test_node_count(fixtures_dir):
    page = profile((fixtures_dir / "minimal.html").read_bytes())
    assert node_count(page.tree) == 5


# -- reconstruction from (name, n, d) triples ------------------------------


@pytest.mark.parametrize("seed", range(25))
def test_reconstruction_inverts_numbering(seed):
    rng = random.Random(2000 + seed)
    tree = build_tree(random_document(rng))
    triples = [DnaTriple(d=r.d, n=r.n, a=r.name) for r in tree.nodes]
    rebuilt = tree_from_triples(triples)
    assert [(r.name, r.n, r.depth, r.d, r.parent, r.children) for r in tree.nodes] == [
        (r.name, r.n, r.depth, r.d, r.parent, r.children) for r in rebuilt.nodes
    ]


def test_reconstruction_rejects_gapped_numbering():
    with pytest.raises(ValueError):
        tree_from_triples([DnaTriple(1, 0, "a"), DnaTriple(0, 2, "b")])


def test_reconstruction_rejects_overclaimed_descendants():
    with pytest.raises(ValueError):
        tree_from_triples([DnaTriple(5, 0, "a"), DnaTriple(0, 1, "b")])


def test_reconstruction_rejects_underclaimed_descendants():
    with pytest.raises(ValueError):
        tree_from_triples([DnaTriple(0, 0, "a"), DnaTriple(0, 1, "b")])
