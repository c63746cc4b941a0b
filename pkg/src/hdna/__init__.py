"""Structural HTML fingerprinting, diffing, and defacement monitoring.

The pipeline: parse HTML into a tolerant DOM, strip it down to bare
element structure, number the nodes in level order, weigh each node by
descendant count over position-times-depth, and chain the per-node
triples into a canonical string with a SHA-256 digest. Everything else
(diffs, DOT export, the watch loop) is built on those fingerprints.
"""

__version__ = "0.1.0"

from .diff import (
    ADDED,
    CHANGED,
    REMOVED,
    ChangeEntry,
    DiffReport,
    VersionMismatch,
    diff,
    quick_changed,
)
from .dna import (
    FINGERPRINT_VERSION,
    DnaTriple,
    Fingerprint,
    WeightedNode,
    dna_of,
    fingerprint,
    fingerprint_from_canonical,
    parse_canonical,
    render_canonical,
    total_weight,
)
from .dot import to_dot
from .fetch import (
    BodyTooLarge,
    FetchConfig,
    FetchError,
    FetchResult,
    NetworkError,
    NonSuccessStatus,
    Timeout,
    TooManyRedirects,
    fetch,
)
from .monitor import (
    AlertEvent,
    CheckOutcome,
    WatchSpec,
    check_once,
    run_watch,
)
from .parsing import (
    CharsetUndecodable,
    Element,
    RawHtml,
    decode_html,
    parse_html,
)
from .pipeline import PageProfile, profile, profile_from_canonical
from .preprocess import (
    PREPROCESS_VERSION,
    REMOVAL_TAGS,
    CleanDocument,
    preprocess,
    remove_tags,
    serialize,
    strip_attributes,
    strip_text,
)
from .store import (
    BaselineRecord,
    CorruptBaseline,
    load_baseline,
    make_baseline,
    save_baseline,
)
from .tree import DomTree, NodeRecord, build_tree, node_count, tree_from_triples

__all__ = [
    "__version__",
    "ADDED",
    "CHANGED",
    "REMOVED",
    "FINGERPRINT_VERSION",
    "PREPROCESS_VERSION",
    "REMOVAL_TAGS",
    "AlertEvent",
    "BaselineRecord",
    "BodyTooLarge",
    "ChangeEntry",
    "CharsetUndecodable",
    "CheckOutcome",
    "CleanDocument",
    "CorruptBaseline",
    "DiffReport",
    "DnaTriple",
    "DomTree",
    "Element",
    "FetchConfig",
    "FetchError",
    "FetchResult",
    "Fingerprint",
    "NetworkError",
    "NodeRecord",
    "NonSuccessStatus",
    "PageProfile",
    "RawHtml",
    "Timeout",
    "TooManyRedirects",
    "VersionMismatch",
    "WatchSpec",
    "WeightedNode",
    "build_tree",
    "check_once",
    "decode_html",
    "diff",
    "dna_of",
    "fetch",
    "fingerprint",
    "fingerprint_from_canonical",
    "load_baseline",
    "make_baseline",
    "node_count",
    "parse_canonical",
    "parse_html",
    "preprocess",
    "profile",
    "profile_from_canonical",
    "quick_changed",
    "remove_tags",
    "render_canonical",
    "run_watch",
    "save_baseline",
    "serialize",
    "strip_attributes",
    "strip_text",
    "to_dot",
    "total_weight",
    "tree_from_triples",
]
