"""Command-line surface: fingerprint, diff, dot, watch, corpus.

Exit codes follow sysexits conventions where they apply:

* 0  success (or differences below a given threshold)
* 2  structural differences found / at least one alert raised
* 64 usage error (bad flags, missing watch config)
* 65 input cannot be decoded as HTML text
* 68 fetch error (network, TLS, HTTP status, redirect or size limits)
* 74 local I/O error
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import signal
import sys
import threading
from pathlib import Path
from typing import Sequence

from .diff import DiffReport, diff
from .dna import FINGERPRINT_VERSION
from .dot import to_dot
from .fetch import (
    DEFAULT_MAX_BODY_BYTES,
    DEFAULT_MAX_REDIRECTS,
    DEFAULT_TIMEOUT_MS,
    FetchConfig,
    FetchError,
    fetch,
)
from .monitor import ALERT, FETCH_FAILED, WatchSpec, check_once, run_watch
from .parsing import CharsetUndecodable, RawHtml
from .pipeline import PageProfile, profile

EXIT_OK = 0
EXIT_DIFFERENCES = 2
EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_FETCH = 68
EXIT_IO = 74


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad usage; the contract here is 64."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_fetch_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("fetch options (URL inputs only)")
    group.add_argument("--timeout-ms", type=int, default=DEFAULT_TIMEOUT_MS)
    group.add_argument("--max-redirects", type=int, default=DEFAULT_MAX_REDIRECTS)
    group.add_argument("--max-body-bytes", type=int, default=DEFAULT_MAX_BODY_BYTES)
    group.add_argument("--user-agent", default=None)
    group.add_argument(
        "--insecure",
        action="store_true",
        help="skip TLS certificate verification",
    )


def _fetch_config(args: argparse.Namespace) -> FetchConfig:
    kwargs = {
        "timeout_ms": args.timeout_ms,
        "max_redirects": args.max_redirects,
        "max_body_bytes": args.max_body_bytes,
        "verify_tls": not args.insecure,
    }
    if args.user_agent is not None:
        kwargs["user_agent"] = args.user_agent
    return FetchConfig(**kwargs)


def _is_url(source: str) -> bool:
    return source.startswith(("http://", "https://"))


def _load_input(source: str, config: FetchConfig) -> RawHtml:
    if _is_url(source):
        return fetch(source, config).body
    if source == "-":
        return RawHtml(sys.stdin.buffer.read())
    return RawHtml(Path(source).read_bytes())


def _profile_payload(page: PageProfile, source: str) -> dict:
    return {
        "source": source,
        "version": FINGERPRINT_VERSION,
        "canonical": page.fingerprint.canonical,
        "digest": page.fingerprint.digest,
        "node_count": len(page.nodes),
        "total_weight": page.total_weight,
    }


def _weight_rows(page: PageProfile) -> list[dict]:
    return [
        {
            "n": node.triple.n,
            "a": node.triple.a,
            "d": node.triple.d,
            "depth": node.depth,
            "weight": node.weight,
        }
        for node in page.nodes
    ]


def cmd_fingerprint(args: argparse.Namespace) -> int:
    raw = _load_input(args.source, _fetch_config(args))
    page = profile(raw, args.source)
    if args.as_json:
        payload = _profile_payload(page, args.source)
        if args.weights:
            payload["nodes"] = _weight_rows(page)
        print(json.dumps(payload, indent=2))
        return EXIT_OK
    print(f"canonical: {page.fingerprint.canonical}")
    print(f"digest: {page.fingerprint.digest}")
    print(f"nodes: {len(page.nodes)}")
    print(f"total_weight: {page.total_weight:.6f}")
    if args.weights:
        print(f"{'n':>6}  {'name':<24}{'d':>6}{'depth':>7}  {'weight':>12}")
        for node in page.nodes:
            print(
                f"{node.triple.n:>6}  {node.triple.a:<24}"
                f"{node.triple.d:>6}{node.depth:>7}  {node.weight:>12.4f}"
            )
    return EXIT_OK


def _print_report(report: DiffReport) -> None:
    for entry in report.entries:
        old = f"{entry.old.a}:{entry.old.n}:{entry.old.d}" if entry.old else "-"
        new = f"{entry.new.a}:{entry.new.n}:{entry.new.d}" if entry.new else "-"
        print(
            f"n={entry.n:<6} {entry.status:<8} old={old:<28} new={new:<28} "
            f"weight={entry.weight_contribution:.4f}"
        )
    print(f"raw_score: {report.raw_score:.6f}")
    print(f"normalized_score: {report.normalized_score:.6f}")
    print(f"identical: {'true' if report.identical else 'false'}")


def cmd_diff(args: argparse.Namespace) -> int:
    config = _fetch_config(args)
    page_old = profile(_load_input(args.old, config), args.old)
    page_new = profile(_load_input(args.new, config), args.new)
    report = diff(page_old.nodes, page_new.nodes)
    if args.as_json:
        print(json.dumps(report.to_dict(), indent=2))
    else:
        _print_report(report)
    if report.identical:
        return EXIT_OK
    if args.threshold is not None and report.normalized_score <= args.threshold:
        return EXIT_OK
    return EXIT_DIFFERENCES


def cmd_dot(args: argparse.Namespace) -> int:
    raw = _load_input(args.source, _fetch_config(args))
    page = profile(raw, args.source)
    rendered = to_dot(
        page.tree,
        weights=page.nodes if args.weights else None,
        show_weights=args.weights,
    )
    if args.out:
        Path(args.out).write_text(rendered, encoding="utf-8")
    else:
        sys.stdout.write(rendered)
    return EXIT_OK


def _load_watch_specs(args: argparse.Namespace) -> list[WatchSpec] | int:
    config_path = Path(args.config)
    if not config_path.is_file():
        print(f"hdna: watch config not found: {config_path}", file=sys.stderr)
        return EXIT_USAGE
    try:
        payload = json.loads(config_path.read_text(encoding="utf-8"))
        if not isinstance(payload, list):
            raise ValueError("watch config must be a JSON array of specs")
        specs = [WatchSpec.from_dict(item) for item in payload]
    except (json.JSONDecodeError, ValueError, TypeError, AttributeError) as exc:
        print(f"hdna: bad watch config: {exc}", file=sys.stderr)
        return EXIT_DATA
    overrides = {}
    if args.threshold is not None:
        overrides["threshold"] = args.threshold
    if args.interval_s is not None:
        overrides["interval_s"] = args.interval_s
    if overrides:
        specs = [dataclasses.replace(spec, **overrides) for spec in specs]
        for spec in specs:
            spec.validate()
    return specs


def cmd_watch(args: argparse.Namespace) -> int:
    specs = _load_watch_specs(args)
    if isinstance(specs, int):
        return specs
    store = Path(args.store)
    config = _fetch_config(args)
    if args.once:
        any_alert = False
        for spec in specs:
            outcome = check_once(spec, store, config)
            line = f"{spec.url}: {outcome.kind}"
            if outcome.kind == ALERT:
                any_alert = True
                line += f" normalized_score={outcome.report.normalized_score:.4f}"
            elif outcome.report is not None:
                line += f" normalized_score={outcome.report.normalized_score:.4f}"
            elif outcome.kind == FETCH_FAILED:
                line += f" ({outcome.error})"
            print(line)
        return EXIT_DIFFERENCES if any_alert else EXIT_OK

    logging.basicConfig(
        level=logging.INFO, format="%(asctime)s %(levelname)s %(name)s %(message)s"
    )
    stop = threading.Event()

    def request_stop(signum, frame):  # noqa: ARG001 - signal handler shape
        stop.set()

    signal.signal(signal.SIGINT, request_stop)
    signal.signal(signal.SIGTERM, request_stop)
    run_watch(specs, store, stop=stop, alert_sink=sys.stdout, fetch_config=config)
    return EXIT_OK


def cmd_corpus(args: argparse.Namespace) -> int:
    source_dir = Path(args.source_dir)
    if not source_dir.is_dir():
        print(f"hdna: not a directory: {source_dir}", file=sys.stderr)
        return EXIT_USAGE
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows: list[tuple[str, int, float, str]] = []
    for path in sorted(source_dir.glob("*.html")):
        page = profile(RawHtml(path.read_bytes()), path.name)
        payload = _profile_payload(page, path.name)
        json_path = out_dir / f"{path.stem}.json"
        json_path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        dot_path = out_dir / f"{path.stem}.dot"
        dot_path.write_text(
            to_dot(page.tree, weights=page.nodes, show_weights=True),
            encoding="utf-8",
        )
        rows.append(
            (path.name, len(page.nodes), page.total_weight, page.fingerprint.digest)
        )
    name_width = max([len(r[0]) for r in rows] + [len("file")])
    print(f"{'file':<{name_width}}  {'nodes':>6}  {'total_weight':>14}  digest")
    for name, count, weight, digest in rows:
        print(f"{name:<{name_width}}  {count:>6}  {weight:>14.4f}  {digest}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="hdna",
        description="Structural HTML fingerprinting and defacement monitoring.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    fp = sub.add_parser(
        "fingerprint", help="fingerprint one page (file, URL, or - for stdin)"
    )
    fp.add_argument("source")
    fp.add_argument("--json", dest="as_json", action="store_true")
    fp.add_argument(
        "--weights", action="store_true", help="include the per-node weight table"
    )
    _add_fetch_flags(fp)
    fp.set_defaults(handler=cmd_fingerprint)

    df = sub.add_parser("diff", help="compare two pages structurally")
    df.add_argument("old")
    df.add_argument("new")
    df.add_argument("--json", dest="as_json", action="store_true")
    df.add_argument(
        "--threshold",
        type=float,
        default=None,
        help="exit 0 unless normalized_score exceeds this value",
    )
    _add_fetch_flags(df)
    df.set_defaults(handler=cmd_diff)

    dot = sub.add_parser("dot", help="export the page tree as Graphviz DOT")
    dot.add_argument("source")
    dot.add_argument("--out", default=None, help="write here instead of stdout")
    dot.add_argument("--weights", action="store_true", help="include node weights")
    _add_fetch_flags(dot)
    dot.set_defaults(handler=cmd_dot)

    watch = sub.add_parser("watch", help="monitor URLs against stored baselines")
    watch.add_argument("config", help="JSON array of watch specs")
    watch.add_argument(
        "--store",
        default=os.environ.get("HDNA_STORE", "hdna-store"),
        help="baseline directory (default: $HDNA_STORE or ./hdna-store)",
    )
    watch.add_argument(
        "--once", action="store_true", help="single check per URL, then exit"
    )
    watch.add_argument(
        "--threshold", type=float, default=None, help="override every spec's threshold"
    )
    watch.add_argument(
        "--interval-s", type=int, default=None, help="override every spec's interval"
    )
    _add_fetch_flags(watch)
    watch.set_defaults(handler=cmd_watch)

    corpus = sub.add_parser(
        "corpus", help="fingerprint every .html file in a directory"
    )
    corpus.add_argument("source_dir")
    corpus.add_argument("--out", required=True, help="output directory")
    corpus.set_defaults(handler=cmd_corpus)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except CharsetUndecodable as exc:
        print(f"hdna: cannot decode input: {exc}", file=sys.stderr)
        return EXIT_DATA
    except FetchError as exc:
        print(f"hdna: fetch failed: {exc}", file=sys.stderr)
        return EXIT_FETCH
    except OSError as exc:
        print(f"hdna: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
