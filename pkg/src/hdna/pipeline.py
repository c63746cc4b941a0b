"""End-to-end page analysis: bytes in, weighted fingerprint out."""

from __future__ import annotations

from dataclasses import dataclass

from .dna import (
    Fingerprint,
    WeightedNode,
    dna_of,
    fingerprint,
    parse_canonical,
    total_weight,
)
from .parsing import RawHtml
from .preprocess import preprocess
from .tree import DomTree, build_tree, tree_from_triples


@dataclass(frozen=True)
class PageProfile:
    tree: DomTree
    nodes: tuple[WeightedNode, ...]
    fingerprint: Fingerprint

    @property
    def total_weight(self) -> float:
        return total_weight(self.nodes)


def profile(raw: RawHtml | bytes | str, source_label: str = "") -> PageProfile:
    """Preprocess, number, weigh, and fingerprint a page in one step."""
    tree = build_tree(preprocess(raw), source_label)
    return PageProfile(
        tree=tree,
        nodes=tuple(dna_of(tree)),
        fingerprint=fingerprint(tree),
    )


def profile_from_canonical(canonical: str, source_label: str = "") -> PageProfile:
    """Rebuild a full profile from a stored canonical string.

    The canonical encodes the complete tree shape, so depths and weights
    are recomputed exactly as they were at fingerprint time.
    """
    tree = tree_from_triples(parse_canonical(canonical), source_label)
    return PageProfile(
        tree=tree,
        nodes=tuple(dna_of(tree)),
        fingerprint=fingerprint(tree),
    )
