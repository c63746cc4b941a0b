"""Positional diff between two fingerprinted pages.

Nodes correspond when they share a count number; each differing position
contributes the baseline-side weight (new-side for additions). The
normalized score divides by the larger page's total weight and clamps to
[0, 1], giving thresholds a scale-free unit. Alignment is positional by
design: an early insertion shifts every later count number and shows up as
a large diff, which is the honest behavior of the scheme.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .dna import DnaTriple, Fingerprint, WeightedNode, total_weight

CHANGED = "changed"
ADDED = "added"
REMOVED = "removed"


class VersionMismatch(ValueError):
    """Fingerprints with different version tags cannot be compared."""


@dataclass(frozen=True)
class ChangeEntry:
    n: int
    status: str
    old: DnaTriple | None
    new: DnaTriple | None
    weight_contribution: float

    def to_dict(self) -> dict:
        def triple(t):
            return None if t is None else {"d": t.d, "n": t.n, "a": t.a}

        return {
            "n": self.n,
            "status": self.status,
            "old": triple(self.old),
            "new": triple(self.new),
            "weight_contribution": self.weight_contribution,
        }


@dataclass(frozen=True)
class DiffReport:
    entries: tuple[ChangeEntry, ...]
    raw_score: float
    normalized_score: float
    identical: bool

    def to_dict(self) -> dict:
        return {
            "identical": self.identical,
            "raw_score": self.raw_score,
            "normalized_score": self.normalized_score,
            "entries": [entry.to_dict() for entry in self.entries],
        }


def quick_changed(a: Fingerprint, b: Fingerprint) -> bool:
    """Digest-only change check; constant-size comparison."""
    if a.version != b.version:
        raise VersionMismatch(f"{a.version!r} vs {b.version!r}")
    return a.digest != b.digest


def diff(old: Sequence[WeightedNode], new: Sequence[WeightedNode]) -> DiffReport:
    """Align by count number and report every differing position.

    Positions present on both sides with unequal triples are ``changed``;
    tail positions only in old are ``removed``, only in new ``added``.
    """
    entries = []
    for i in range(max(len(old), len(new))):
        o = old[i] if i < len(old) else None
        w = new[i] if i < len(new) else None
        if o is not None and w is not None:
            if o.triple != w.triple:
                entries.append(ChangeEntry(i, CHANGED, o.triple, w.triple, o.weight))
        elif o is not None:
            entries.append(ChangeEntry(i, REMOVED, o.triple, None, o.weight))
        else:
            entries.append(ChangeEntry(i, ADDED, None, w.triple, w.weight))

    raw_score = sum(entry.weight_contribution for entry in entries)
    identical = not entries
    denominator = max(total_weight(old), total_weight(new))
    if denominator > 0:
        normalized = min(1.0, raw_score / denominator)
    else:
        normalized = 0.0 if identical else 1.0
    return DiffReport(
        entries=tuple(entries),
        raw_score=raw_score,
        normalized_score=normalized,
        identical=identical,
    )
