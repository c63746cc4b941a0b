"""Flat-directory persistence for per-URL baseline fingerprints.

One JSON file per URL, named by the URL's SHA-256 digest; replacement is
write-temp-then-rename so readers never see a partial record. Loads verify
that the stored digest still matches the canonical.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .dna import parse_canonical
from .pipeline import PageProfile
from .preprocess import PREPROCESS_VERSION
from .tree import tree_from_triples


class CorruptBaseline(ValueError):
    """Stored record is unparseable or fails its integrity check."""


@dataclass(frozen=True)
class BaselineRecord:
    url: str
    version: str
    canonical: str
    digest: str
    weights: tuple[tuple[int, float], ...]
    total_weight: float
    created_at: str
    preprocess_version: str


def make_baseline(url: str, page: PageProfile, created_at: str | None = None) -> BaselineRecord:
    fp = page.fingerprint
    return BaselineRecord(
        url=url,
        version=fp.version,
        canonical=fp.canonical,
        digest=fp.digest,
        weights=tuple((node.triple.n, node.weight) for node in page.nodes),
        total_weight=page.total_weight,
        created_at=created_at or datetime.now(timezone.utc).isoformat(),
        preprocess_version=PREPROCESS_VERSION,
    )


def baseline_filename(url: str) -> str:
    return hashlib.sha256(url.encode("utf-8")).hexdigest() + ".json"


def baseline_path(store_path: Path, url: str) -> Path:
    return Path(store_path) / baseline_filename(url)


def save_baseline(store_path: Path, record: BaselineRecord) -> None:
    """Atomically write the record; any prior record is fully superseded."""
    store = Path(store_path)
    store.mkdir(parents=True, exist_ok=True)
    target = store / baseline_filename(record.url)
    payload = {
        "url": record.url,
        "version": record.version,
        "canonical": record.canonical,
        "digest": record.digest,
        "weights": [[n, w] for n, w in record.weights],
        "total_weight": record.total_weight,
        "created_at": record.created_at,
        "preprocess_version": record.preprocess_version,
    }
    tmp = target.with_name(target.name + ".tmp")
    with open(tmp, "w", encoding="utf-8") as handle:
        json.dump(payload, handle)
        handle.flush()
        os.fsync(handle.fileno())
    os.replace(tmp, target)


def load_baseline(store_path: Path, url: str) -> BaselineRecord | None:
    """Return the record for url, or None if absent.

    Corrupt files are an error, not absent: unparseable JSON, missing
    fields, a digest that no longer matches the canonical, or a canonical
    that does not decode to a well-formed tree all raise CorruptBaseline.
    """
    target = baseline_path(store_path, url)
    try:
        text = target.read_text(encoding="utf-8")
    except FileNotFoundError:
        return None
    try:
        payload = json.loads(text)
        record = BaselineRecord(
            url=payload["url"],
            version=payload["version"],
            canonical=payload["canonical"],
            digest=payload["digest"],
            weights=tuple((int(n), float(w)) for n, w in payload["weights"]),
            total_weight=float(payload["total_weight"]),
            created_at=payload["created_at"],
            preprocess_version=payload["preprocess_version"],
        )
    except (ValueError, KeyError, TypeError) as exc:
        raise CorruptBaseline(f"{target}: {exc}") from exc
    recomputed = hashlib.sha256(record.canonical.encode("utf-8")).hexdigest()
    if recomputed != record.digest:
        raise CorruptBaseline(f"{target}: digest does not match canonical")
    try:
        tree_from_triples(parse_canonical(record.canonical))
    except ValueError as exc:
        raise CorruptBaseline(f"{target}: {exc}") from exc
    return record
