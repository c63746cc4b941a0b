"""Error-tolerant HTML parsing in the style of browser tree construction.

Arbitrary bytes go in, an element tree comes out: implied ``html``/``head``/
``body`` elements are synthesized, unclosed tags are recovered with
scope-limited implied end tags, and malformed markup never raises. The
builder is a deliberately small subset of full browser tree construction
(no adoption agency, no table foster parenting); recovery is deterministic,
which is what fingerprinting needs.
"""

from __future__ import annotations

import codecs
import re
from dataclasses import dataclass
from html.parser import HTMLParser


class CharsetUndecodable(ValueError):
    """Declared charset label is unknown and the payload is not valid UTF-8."""


@dataclass(frozen=True)
class RawHtml:
    """Undecoded page payload plus the transport-declared charset, if any."""

    data: bytes
    declared_charset: str | None = None


class Element:
    """An element node: lowercase name, attribute dict, ordered children."""

    __slots__ = ("name", "attrs", "children")

    def __init__(self, name, attrs=None, children=None):
        self.name = name
        self.attrs = dict(attrs) if attrs else {}
        self.children = list(children) if children else []

    def __repr__(self):
        return f"<Element {self.name} children={len(self.children)}>"


class Text:
    __slots__ = ("data",)

    def __init__(self, data):
        self.data = data


class Comment:
    __slots__ = ("data",)

    def __init__(self, data):
        self.data = data


class Doctype:
    __slots__ = ("data",)

    def __init__(self, data):
        self.data = data


class Cdata:
    __slots__ = ("data",)

    def __init__(self, data):
        self.data = data


class ProcessingInstruction:
    __slots__ = ("data",)

    def __init__(self, data):
        self.data = data


VOID_ELEMENTS = frozenset({
    "area", "base", "basefont", "bgsound", "br", "col", "embed", "hr",
    "img", "input", "keygen", "link", "meta", "param", "source", "track",
    "wbr",
})

# Content is raw/escapable text; the tokenizer must not see markup inside.
RAWTEXT_ELEMENTS = frozenset({
    "script", "style", "textarea", "title", "xmp", "iframe", "noembed",
    "noframes",
})

HEAD_ELEMENTS = frozenset({
    "base", "basefont", "bgsound", "link", "meta", "noframes", "noscript",
    "script", "style", "template", "title",
})

HEADINGS = frozenset({"h1", "h2", "h3", "h4", "h5", "h6"})

# Start tags that implicitly close an open <p> in button scope.
_P_CLOSERS = frozenset({
    "address", "article", "aside", "blockquote", "center", "details",
    "dialog", "dir", "div", "dl", "fieldset", "figcaption", "figure",
    "footer", "form", "h1", "h2", "h3", "h4", "h5", "h6", "header",
    "hgroup", "hr", "listing", "main", "menu", "nav", "ol", "p",
    "plaintext", "pre", "section", "summary", "table", "ul", "xmp",
})

_BASE_SCOPE = frozenset({
    "document", "html", "body", "table", "td", "th", "caption", "applet",
    "marquee", "object", "template",
})
_BUTTON_SCOPE = _BASE_SCOPE | {"button"}
_LIST_SCOPE = _BASE_SCOPE | {"ol", "ul"}
_TABLE_SCOPE = frozenset({"document", "html", "table", "template"})
_TABLE_END_SCOPE = frozenset({"document", "html", "template"})

# An end tag never pops past one of these unless it names it.
_END_TAG_BOUNDARIES = frozenset({
    "td", "th", "caption", "table", "button", "object", "marquee",
    "applet", "template",
})

# Insertion modes.
_BEFORE_HTML = "before_html"
_BEFORE_HEAD = "before_head"
_IN_HEAD = "in_head"
_AFTER_HEAD = "after_head"
_IN_BODY = "in_body"
_AFTER_BODY = "after_body"

# Canonical fingerprints join fields with ":" and entries with ";", so
# sanitized names must avoid ";" (":" is safe: fields parse right-to-left).
_NAME_BAD = re.compile(r"[^a-z0-9._:-]")


def _sanitize_name(tag):
    name = _NAME_BAD.sub("", tag.lower())
    return name or "unknown"


class _TreeBuilder(HTMLParser):
    """Stack-and-insertion-mode tree builder on the stdlib tokenizer."""

    CDATA_CONTENT_ELEMENTS = (
        "script", "style", "textarea", "title", "xmp", "iframe", "noembed",
        "noframes",
    )

    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.document = Element("document")
        self.stack = [self.document]
        self.mode = _BEFORE_HTML
        self.html = None
        self.head = None
        self.body = None

    # -- tokenizer callbacks -------------------------------------------

    def handle_starttag(self, tag, attrs):
        self._start(_sanitize_name(tag), attrs, self_closing=False)

    def handle_startendtag(self, tag, attrs):
        self._start(_sanitize_name(tag), attrs, self_closing=True)

    def handle_endtag(self, tag):
        self._end(_sanitize_name(tag))

    def handle_data(self, data):
        current = self.stack[-1]
        if current is not self.document and current.name in RAWTEXT_ELEMENTS:
            current.children.append(Text(data))
            return
        if self.mode == _IN_BODY:
            current.children.append(Text(data))
            return
        if not data.strip():
            return  # formatting whitespace between structural tags
        self._ensure_body()
        self.stack[-1].children.append(Text(data))

    def handle_comment(self, data):
        self.stack[-1].children.append(Comment(data))

    def handle_decl(self, decl):
        if self.mode == _BEFORE_HTML:
            self.document.children.append(Doctype(decl))
        # stray doctypes elsewhere are dropped

    def unknown_decl(self, data):
        self.stack[-1].children.append(Cdata(data))

    def handle_pi(self, data):
        self.stack[-1].children.append(ProcessingInstruction(data))

    # -- start tags ----------------------------------------------------

    def _start(self, tag, attrs, self_closing):
        while True:
            mode = self.mode
            if mode == _BEFORE_HTML:
                if tag == "html":
                    self._open_html(attrs)
                    return
                self._open_html(())
            elif mode == _BEFORE_HEAD:
                if tag == "html":
                    return
                if tag == "head":
                    self._open_head(attrs)
                    return
                self._open_head(())
            elif mode == _IN_HEAD:
                if tag in ("html", "head"):
                    return
                if tag in HEAD_ELEMENTS or self._has_open("template"):
                    self._insert(tag, attrs, self_closing)
                    return
                self._pop_through(self.head)
                self.mode = _AFTER_HEAD
            elif mode == _AFTER_HEAD:
                if tag == "html":
                    return
                if tag == "body":
                    self._open_body(attrs)
                    return
                self._open_body(())
            else:
                if mode == _AFTER_BODY:
                    self.mode = _IN_BODY  # stray content reopens the body
                if tag in ("html", "head", "body"):
                    return
                self._in_body_start(tag, attrs, self_closing)
                return

    def _in_body_start(self, tag, attrs, self_closing):
        if tag in _P_CLOSERS:
            self._close_in_scope(("p",), _BUTTON_SCOPE)
        if tag == "li":
            self._close_in_scope(("li",), _LIST_SCOPE)
        elif tag in ("dd", "dt"):
            self._close_in_scope(("dd", "dt"), _BASE_SCOPE)
        elif tag in ("td", "th"):
            self._close_in_scope(("td", "th"), _TABLE_SCOPE)
        elif tag == "tr":
            self._close_in_scope(("tr",), _TABLE_SCOPE)
        elif tag in ("thead", "tbody", "tfoot"):
            # a new section closes the open one (cells, rows and all);
            # lacking one, it closes a row sitting directly in the table
            if any(
                self._has_in_scope(s, _TABLE_SCOPE)
                for s in ("thead", "tbody", "tfoot")
            ):
                self._close_in_scope(("thead", "tbody", "tfoot"), _TABLE_SCOPE)
            else:
                self._close_in_scope(("tr",), _TABLE_SCOPE)
        elif tag == "option":
            self._close_in_scope(("option",), _BASE_SCOPE)
        elif tag == "optgroup":
            self._close_in_scope(("option",), _BASE_SCOPE)
            self._close_in_scope(("optgroup",), _BASE_SCOPE)
        elif tag == "button":
            self._close_in_scope(("button",), _BASE_SCOPE)
        elif tag in HEADINGS and self.stack[-1].name in HEADINGS:
            self.stack.pop()
        self._insert(tag, attrs, self_closing)

    def _insert(self, tag, attrs, self_closing):
        element = Element(tag, attrs)
        self.stack[-1].children.append(element)
        if tag in VOID_ELEMENTS:
            return
        if self_closing and self._in_foreign_content():
            return  # <path/> and friends really are empty in SVG/MathML
        self.stack.append(element)

    # -- end tags ------------------------------------------------------

    def _end(self, tag):
        if tag == "br":
            self._start("br", (), False)  # browsers turn </br> into <br>
            return
        mode = self.mode
        if mode in (_BEFORE_HTML, _BEFORE_HEAD):
            return
        if mode == _IN_HEAD:
            if tag in ("head", "body", "html"):
                self._pop_through(self.head)
                self.mode = _AFTER_HEAD
                return
            self._generic_end(tag)
            return
        if mode == _AFTER_HEAD:
            return
        # in body / after body
        if tag in ("body", "html"):
            self.mode = _AFTER_BODY
            return
        if tag == "head":
            return
        if self.mode == _AFTER_BODY:
            self.mode = _IN_BODY
        if tag == "p" and not self._has_in_scope("p", _BUTTON_SCOPE):
            self.stack[-1].children.append(Element("p"))  # </p> with no <p>
            return
        if tag == "table":
            self._close_in_scope(("table",), _TABLE_END_SCOPE)
            return
        if tag in ("td", "th", "tr", "thead", "tbody", "tfoot", "caption"):
            # these may pop open cells/rows beneath them, but never escape
            # the enclosing table
            self._close_in_scope((tag,), _TABLE_SCOPE)
            return
        self._generic_end(tag)

    def _generic_end(self, tag):
        for i in range(len(self.stack) - 1, 0, -1):
            el = self.stack[i]
            if el.name == tag:
                del self.stack[i:]
                return
            if el.name in _END_TAG_BOUNDARIES or el in (
                self.body, self.head, self.html,
            ):
                return

    # -- stack helpers -------------------------------------------------

    def _close_in_scope(self, targets, boundaries):
        for i in range(len(self.stack) - 1, 0, -1):
            name = self.stack[i].name
            if name in targets:
                del self.stack[i:]
                return
            if name in boundaries:
                return

    def _has_in_scope(self, target, boundaries):
        for el in reversed(self.stack):
            if el.name == target:
                return True
            if el.name in boundaries:
                return False
        return False

    def _has_open(self, name):
        return any(el.name == name for el in self.stack)

    def _in_foreign_content(self):
        return any(el.name in ("svg", "math") for el in self.stack)

    def _pop_through(self, element):
        for i, el in enumerate(self.stack):
            if el is element:
                del self.stack[i:]
                return

    def _ensure_body(self):
        while self.mode != _IN_BODY:
            if self.mode == _BEFORE_HTML:
                self._open_html(())
            elif self.mode == _BEFORE_HEAD:
                self._open_head(())
            elif self.mode == _IN_HEAD:
                self._pop_through(self.head)
                self.mode = _AFTER_HEAD
            elif self.mode == _AFTER_HEAD:
                self._open_body(())
            else:
                self.mode = _IN_BODY

    def _open_html(self, attrs):
        self.html = Element("html", attrs)
        self.document.children.append(self.html)
        self.stack = [self.document, self.html]
        self.mode = _BEFORE_HEAD

    def _open_head(self, attrs):
        self.head = Element("head", attrs)
        self.html.children.append(self.head)
        self.stack.append(self.head)
        self.mode = _IN_HEAD

    def _open_body(self, attrs):
        self.body = Element("body", attrs)
        self.html.children.append(self.body)
        self.stack.append(self.body)
        self.mode = _IN_BODY

    # -- completion ----------------------------------------------------

    def finish(self):
        self.close()
        if self.html is None:
            self._open_html(())
        if self.head is None:
            self._open_head(())
        if self.body is None:
            self._pop_through(self.head)
            self._open_body(())
        self.stack = [self.document]
        return self.document


_BOM_UTF16 = (codecs.BOM_UTF16_LE, codecs.BOM_UTF16_BE)

_META_CHARSET = re.compile(
    rb"<meta[^>]{0,512}?charset\s*=\s*[\"']?\s*([a-zA-Z0-9][a-zA-Z0-9._+-]*)",
    re.IGNORECASE,
)


def decode_html(raw: RawHtml) -> str:
    """Decode page bytes: BOM, then declared charset, then meta sniff, then
    UTF-8 with replacement.

    Raises CharsetUndecodable only when the declared label is unknown to the
    codec registry and the bytes are not valid UTF-8 either.
    """
    data = raw.data
    if data.startswith(codecs.BOM_UTF8):
        return data[len(codecs.BOM_UTF8):].decode("utf-8", "replace")
    if data.startswith(_BOM_UTF16):
        return data.decode("utf-16", "replace")
    if raw.declared_charset:
        try:
            info = codecs.lookup(raw.declared_charset)
        except LookupError:
            try:
                return data.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise CharsetUndecodable(
                    f"unknown charset {raw.declared_charset!r} and payload "
                    "is not valid UTF-8"
                ) from exc
        return data.decode(info.name, "replace")
    match = _META_CHARSET.search(data[:1024])
    if match:
        try:
            info = codecs.lookup(match.group(1).decode("ascii"))
        except LookupError:
            pass
        else:
            return data.decode(info.name, "replace")
    return data.decode("utf-8", "replace")


def parse_html(raw) -> Element:
    """Parse HTML into a document tree, tolerating any input.

    Accepts RawHtml, bytes, or already-decoded text. The returned tree is
    rooted at a synthetic ``document`` element and always contains the
    implied ``html``/``head``/``body`` skeleton.
    """
    if isinstance(raw, (bytes, bytearray)):
        raw = RawHtml(bytes(raw))
    if isinstance(raw, RawHtml):
        text = decode_html(raw)
    else:
        text = raw
    builder = _TreeBuilder()
    builder.feed(text)
    return builder.finish()
