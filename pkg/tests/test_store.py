"""Baseline persistence: round trips, atomic replacement, corruption."""

from __future__ import annotations

import json
import random

import pytest

import hdna.store as store_module
from hdna.pipeline import profile
from hdna.store import (
    BaselineRecord,
    CorruptBaseline,
    baseline_filename,
    baseline_path,
    load_baseline,
    make_baseline,
    save_baseline,
)

from conftest import random_document

PAGE = b"<html><head><title>t</title></head><body><div><p>x</p></div></body></html>"
URL = "https://example.org/page"


def fresh_record(url: str = URL, raw: bytes = PAGE) -> BaselineRecord:
    return make_baseline(url, profile(raw, url))


def test_round_trip(tmp_path):
    record = fresh_record()
    save_baseline(tmp_path, record)
    assert load_baseline(tmp_path, URL) == record


def test_unknown_url_is_absent(tmp_path):
    assert load_baseline(tmp_path, "https://example.org/other") is None


def test_last_write_wins(tmp_path):
    save_baseline(tmp_path, fresh_record())
    second = fresh_record(raw=b"<body><p>different</p></body>")
    save_baseline(tmp_path, second)
    assert load_baseline(tmp_path, URL) == second


def test_save_creates_store_directory(tmp_path):
    nested = tmp_path / "deep" / "store"
    save_baseline(nested, fresh_record())
    assert load_baseline(nested, URL) is not None


def test_record_carries_documented_fields(tmp_path):
    record = fresh_record()
    save_baseline(tmp_path, record)
    payload = json.loads(baseline_path(tmp_path, URL).read_text())
    assert list(payload.keys()) == [
        "url",
        "version",
        "canonical",
        "digest",
        "weights",
        "total_weight",
        "created_at",
        "preprocess_version",
    ]
    assert payload["url"] == URL
    assert payload["version"] == "hdna1"
    assert payload["preprocess_version"] == "pp1"


def test_filename_is_url_digest(tmp_path):
    import hashlib

    name = baseline_filename(URL)
    assert name == hashlib.sha256(URL.encode()).hexdigest() + ".json"
    assert len(name) <= 255
    assert "/" not in name


def test_filenames_differ_per_url():
    assert baseline_filename("https://a.example/") != baseline_filename(
        "https://b.example/"
    )


def test_weights_cover_every_node(tmp_path):
    page = profile(PAGE, URL)
    record = make_baseline(URL, page)
    assert [n for n, _ in record.weights] == [w.triple.n for w in page.nodes]
    assert record.total_weight == pytest.approx(page.total_weight)


@pytest.mark.parametrize("seed", range(10))
def test_round_trip_on_random_trees(tmp_path, seed):
    rng = random.Random(seed)
    from hdna.dna import dna_of, fingerprint
    from hdna.tree import build_tree

    doc = random_document(rng, max_nodes=60)
    tree = build_tree(doc)
    url = f"https://example.org/r/{seed}"

    from hdna.pipeline import PageProfile

    page = PageProfile(
        tree=tree, nodes=tuple(dna_of(tree)), fingerprint=fingerprint(tree)
    )
    record = make_baseline(url, page)
    save_baseline(tmp_path, record)
    assert load_baseline(tmp_path, url) == record


# -- integrity -------------------------------------------------------------


def corrupt_canonical_byte(path, flip_at: int = 8) -> None:
    payload = json.loads(path.read_text())
    canonical = payload["canonical"]
    mutated = (
        canonical[:flip_at]
        + ("0" if canonical[flip_at] != "0" else "1")
        + canonical[flip_at + 1:]
    )
    payload["canonical"] = mutated
    path.write_text(json.dumps(payload))


def test_flipped_canonical_byte_is_corrupt(tmp_path):
    save_baseline(tmp_path, fresh_record())
    corrupt_canonical_byte(baseline_path(tmp_path, URL))
    with pytest.raises(CorruptBaseline):
        load_baseline(tmp_path, URL)


def test_garbage_json_is_corrupt(tmp_path):
    save_baseline(tmp_path, fresh_record())
    baseline_path(tmp_path, URL).write_text("{not json")
    with pytest.raises(CorruptBaseline):
        load_baseline(tmp_path, URL)


def test_missing_field_is_corrupt(tmp_path):
    save_baseline(tmp_path, fresh_record())
    path = baseline_path(tmp_path, URL)
    payload = json.loads(path.read_text())
    del payload["digest"]
    path.write_text(json.dumps(payload))
    with pytest.raises(CorruptBaseline):
        load_baseline(tmp_path, URL)


def test_undecodable_canonical_is_corrupt(tmp_path):
    # digest matches but the canonical no longer encodes a tree
    save_baseline(tmp_path, fresh_record())
    path = baseline_path(tmp_path, URL)
    payload = json.loads(path.read_text())
    import hashlib

    bad = "hdna1|document:0:9"  # descendant count exceeds node count
    payload["canonical"] = bad
    payload["digest"] = hashlib.sha256(bad.encode()).hexdigest()
    path.write_text(json.dumps(payload))
    with pytest.raises(CorruptBaseline):
        load_baseline(tmp_path, URL)


# -- crash safety ----------------------------------------------------------


def test_crash_between_temp_write_and_rename_preserves_old(tmp_path, monkeypatch):
    original = fresh_record()
    save_baseline(tmp_path, original)

    def explode(src, dst):
        raise RuntimeError("injected crash before rename")

    monkeypatch.setattr(store_module.os, "replace", explode)
    replacement = fresh_record(raw=b"<body><p>new</p></body>")
    with pytest.raises(RuntimeError):
        save_baseline(tmp_path, replacement)
    monkeypatch.undo()

    assert load_baseline(tmp_path, URL) == original


def test_interrupted_save_leaves_no_visible_partial(tmp_path, monkeypatch):
    def explode(src, dst):
        raise RuntimeError("injected crash")

    monkeypatch.setattr(store_module.os, "replace", explode)
    with pytest.raises(RuntimeError):
        save_baseline(tmp_path, fresh_record())
    monkeypatch.undo()

    assert load_baseline(tmp_path, URL) is None
