"""Per-node DNA triples, structural weights, and whole-page fingerprints.

Each node is identified by the triple (d, n, a): descendant count, count
number, tag name. A node's weight is d / (n * depth), so large subtrees
hanging high in the tree dominate; the root, where the formula is
undefined, weighs its own descendant count. Chaining all triples in count
order gives a canonical string whose SHA-256 digest is the page
fingerprint.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Sequence

from .tree import DomTree

FINGERPRINT_VERSION = "hdna1"


@dataclass(frozen=True)
class DnaTriple:
    d: int
    n: int
    a: str


@dataclass(frozen=True)
class WeightedNode:
    triple: DnaTriple
    depth: int
    weight: float


@dataclass(frozen=True)
class Fingerprint:
    version: str
    entries: tuple[DnaTriple, ...]
    canonical: str
    digest: str


def dna_of(tree: DomTree) -> list[WeightedNode]:
    """One weighted triple per node, in count-number order."""
    out = []
    for rec in tree.nodes:
        triple = DnaTriple(d=rec.d, n=rec.n, a=rec.name)
        if rec.n == 0:
            weight = float(rec.d)  # n and depth are both 0 at the root
        else:
            weight = rec.d / (rec.n * rec.depth)
        out.append(WeightedNode(triple=triple, depth=rec.depth, weight=weight))
    return out


def render_canonical(entries: Sequence[DnaTriple]) -> str:
    body = ";".join(f"{t.a}:{t.n}:{t.d}" for t in entries)
    return f"{FINGERPRINT_VERSION}|{body}"


def fingerprint(tree: DomTree) -> Fingerprint:
    """Deterministic whole-page fingerprint: equal trees give byte-identical
    canonicals and digests; any change of shape or name changes both."""
    entries = tuple(DnaTriple(d=rec.d, n=rec.n, a=rec.name) for rec in tree.nodes)
    canonical = render_canonical(entries)
    digest = hashlib.sha256(canonical.encode("utf-8")).hexdigest()
    return Fingerprint(
        version=FINGERPRINT_VERSION,
        entries=entries,
        canonical=canonical,
        digest=digest,
    )


def parse_canonical(canonical: str) -> tuple[DnaTriple, ...]:
    """Inverse of render_canonical, with validation.

    Raises ValueError on a wrong version tag, malformed entries, or count
    numbers that are not exactly 0..k-1.
    """
    version, sep, body = canonical.partition("|")
    if not sep or version != FINGERPRINT_VERSION:
        raise ValueError(f"unsupported fingerprint canonical: {version!r}")
    entries = []
    for i, part in enumerate(body.split(";")):
        try:
            a, n_text, d_text = part.rsplit(":", 2)
            n = int(n_text)
            d = int(d_text)
        except ValueError:
            raise ValueError(f"malformed canonical entry {part!r}") from None
        if not a or n != i or d < 0:
            raise ValueError(f"invalid canonical entry {part!r} at position {i}")
        entries.append(DnaTriple(d=d, n=n, a=a))
    return tuple(entries)


def fingerprint_from_canonical(canonical: str) -> Fingerprint:
    entries = parse_canonical(canonical)
    digest = hashlib.sha256(canonical.encode("utf-8")).hexdigest()
    return Fingerprint(
        version=FINGERPRINT_VERSION,
        entries=entries,
        canonical=canonical,
        digest=digest,
    )


def total_weight(nodes: Sequence[WeightedNode]) -> float:
    """Sum of non-root weights; the normalization denominator for diffs."""
    return sum(node.weight for node in nodes if node.triple.n >= 1)
