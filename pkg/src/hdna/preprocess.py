"""Reduce a parsed page to its bare element skeleton.

The cleanup pipeline drops a fixed set of non-structural tags (with their
subtrees), strips every attribute, and removes all text and other
non-element nodes, leaving only the hierarchy of tag names.
"""

from __future__ import annotations

from dataclasses import dataclass

from .parsing import Element, RawHtml, VOID_ELEMENTS, parse_html

# Tags that carry no page structure worth fingerprinting. Removing one
# removes its entire subtree.
REMOVAL_TAGS = frozenset({"script", "meta", "br", "hr", "link", "input", "style"})

# Stamped into persisted baselines so a future pipeline change cannot be
# confused with a page change.
PREPROCESS_VERSION = "pp1"


@dataclass(frozen=True)
class CleanDocument:
    """Element-only tree under a synthetic ``document`` root: no removal-set
    tags, no attributes, no text/comment/doctype/PI nodes."""

    root: Element


def remove_tags(tree: Element, removal_set: frozenset[str] = REMOVAL_TAGS) -> Element:
    """Return a copy of the tree without any element named in removal_set.

    A removed element takes its whole subtree with it; surviving nodes keep
    their relative order.
    """

    def rebuild(el):
        kept = []
        for child in el.children:
            if isinstance(child, Element):
                if child.name in removal_set:
                    continue
                kept.append(rebuild(child))
            else:
                kept.append(child)
        return Element(el.name, el.attrs, kept)

    return rebuild(tree)


def strip_attributes(tree: Element) -> Element:
    """Return a copy of the tree with every attribute removed."""

    def rebuild(el):
        kept = [rebuild(c) if isinstance(c, Element) else c for c in el.children]
        return Element(el.name, None, kept)

    return rebuild(tree)


def strip_text(tree: Element) -> CleanDocument:
    """Drop every non-element node (text, comments, CDATA, doctypes, PIs),
    keeping the element skeleton intact."""

    def rebuild(el):
        kept = [rebuild(c) for c in el.children if isinstance(c, Element)]
        return Element(el.name, el.attrs, kept)

    return CleanDocument(root=rebuild(tree))


def preprocess(raw: RawHtml | bytes | str) -> CleanDocument:
    """Full pipeline: tolerant parse, tag removal, attribute strip, text strip.

    Idempotent at the document level: preprocessing the serialization of a
    CleanDocument yields an isomorphic CleanDocument.
    """
    return strip_text(strip_attributes(remove_tags(parse_html(raw))))


def serialize(doc: CleanDocument | Element) -> str:
    """Render a cleaned tree back to minimal HTML (tags only).

    The synthetic document root is not emitted. Void elements are written
    without end tags so the output re-parses to the same shape.
    """
    root = doc.root if isinstance(doc, CleanDocument) else doc
    out: list[str] = []

    def render(el):
        if el.name in VOID_ELEMENTS:
            out.append(f"<{el.name}>")
            return
        out.append(f"<{el.name}>")
        for child in el.children:
            render(child)
        out.append(f"</{el.name}>")

    for child in root.children:
        render(child)
    return "".join(out)
