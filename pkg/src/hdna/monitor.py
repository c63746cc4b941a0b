"""Baseline-comparison watch loop for structural defacement detection.

Each watched URL is fetched on a steady schedule, fingerprinted, and
diffed against its persisted baseline. Digest equality is the fast path;
past the threshold an alert is emitted as a JSON line and, optionally, to
an external command. One bad fetch never kills the loop.
"""

from __future__ import annotations

import json
import logging
import shlex
import subprocess
import threading
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Callable, IO, Sequence

from .diff import ChangeEntry, DiffReport, VersionMismatch, diff, quick_changed
from .dna import fingerprint_from_canonical
from .fetch import FetchConfig, FetchError, fetch
from .parsing import CharsetUndecodable
from .pipeline import profile, profile_from_canonical
from .store import CorruptBaseline, load_baseline, make_baseline, save_baseline

logger = logging.getLogger("hdna.monitor")

BASELINE_CREATED = "BaselineCreated"
UNCHANGED = "Unchanged"
CHANGED_BELOW_THRESHOLD = "ChangedBelowThreshold"
ALERT = "Alert"
FETCH_FAILED = "FetchFailed"

DEFAULT_THRESHOLD = 0.1
DEFAULT_INTERVAL_S = 300

# Catastrophic diffs are capped to the most important changes.
MAX_ALERT_ENTRIES = 50

_ALERT_COMMAND_TIMEOUT_S = 60


@dataclass(frozen=True)
class WatchSpec:
    url: str
    interval_s: int = DEFAULT_INTERVAL_S
    threshold: float = DEFAULT_THRESHOLD
    update_baseline_on_alert: bool = False
    alert_command: str | None = None

    def validate(self) -> None:
        if not self.url:
            raise ValueError("watch spec needs a url")
        if self.interval_s < 1:
            raise ValueError(f"interval_s must be >= 1, got {self.interval_s}")
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError(f"threshold must be in [0, 1], got {self.threshold}")

    @classmethod
    def from_dict(cls, payload: dict) -> "WatchSpec":
        spec = cls(
            url=payload.get("url", ""),
            interval_s=int(payload.get("interval_s", DEFAULT_INTERVAL_S)),
            threshold=float(payload.get("threshold", DEFAULT_THRESHOLD)),
            update_baseline_on_alert=bool(
                payload.get("update_baseline_on_alert", False)
            ),
            alert_command=payload.get("alert_command"),
        )
        spec.validate()
        return spec


@dataclass(frozen=True)
class AlertEvent:
    url: str
    timestamp: str
    raw_score: float
    normalized_score: float
    threshold: float
    entries: tuple[ChangeEntry, ...]
    old_digest: str
    new_digest: str

    def to_dict(self) -> dict:
        return {
            "url": self.url,
            "timestamp": self.timestamp,
            "raw_score": self.raw_score,
            "normalized_score": self.normalized_score,
            "threshold": self.threshold,
            "entries": [entry.to_dict() for entry in self.entries],
            "old_digest": self.old_digest,
            "new_digest": self.new_digest,
        }


@dataclass(frozen=True)
class CheckOutcome:
    kind: str
    url: str
    report: DiffReport | None = None
    event: AlertEvent | None = None
    error: str | None = None


def _cap_entries(entries: Sequence[ChangeEntry]) -> tuple[ChangeEntry, ...]:
    top = sorted(entries, key=lambda e: (-e.weight_contribution, e.n))
    return tuple(sorted(top[:MAX_ALERT_ENTRIES], key=lambda e: e.n))


def check_once(
    spec: WatchSpec,
    store_path,
    fetch_config: FetchConfig | None = None,
) -> CheckOutcome:
    """Run one fetch-fingerprint-compare cycle for a watched URL.

    Fetch, decode, and store failures surface as a FetchFailed outcome
    with the cause; they never produce an alert.
    """
    try:
        result = fetch(spec.url, fetch_config)
        page = profile(result.body, spec.url)
        baseline = load_baseline(store_path, spec.url)
        if baseline is None:
            save_baseline(store_path, make_baseline(spec.url, page))
            return CheckOutcome(BASELINE_CREATED, spec.url)
        old_fp = fingerprint_from_canonical(baseline.canonical)
        if not quick_changed(old_fp, page.fingerprint):
            return CheckOutcome(UNCHANGED, spec.url)
        old_page = profile_from_canonical(baseline.canonical, spec.url)
        report = diff(old_page.nodes, page.nodes)
        if report.normalized_score > spec.threshold:
            event = AlertEvent(
                url=spec.url,
                timestamp=datetime.now(timezone.utc).isoformat(),
                raw_score=report.raw_score,
                normalized_score=report.normalized_score,
                threshold=spec.threshold,
                entries=_cap_entries(report.entries),
                old_digest=old_fp.digest,
                new_digest=page.fingerprint.digest,
            )
            if spec.update_baseline_on_alert:
                save_baseline(store_path, make_baseline(spec.url, page))
            return CheckOutcome(ALERT, spec.url, report=report, event=event)
        # benign drift: refresh the baseline so it does not accumulate
        save_baseline(store_path, make_baseline(spec.url, page))
        return CheckOutcome(CHANGED_BELOW_THRESHOLD, spec.url, report=report)
    except (
        FetchError,
        CharsetUndecodable,
        CorruptBaseline,
        VersionMismatch,
        OSError,
    ) as exc:
        return CheckOutcome(
            FETCH_FAILED, spec.url, error=f"{type(exc).__name__}: {exc}"
        )


class RealClock:
    """Wall-clock scheduling; wait() returns early when interrupted."""

    def now(self) -> float:
        return time.monotonic()

    def wait(self, seconds: float, interrupt: threading.Event) -> None:
        interrupt.wait(max(0.0, seconds))


class AlertDispatcher:
    """Routes alerts to the JSON-lines sink and the alert command.

    While the baseline stays unrefreshed and the same new digest keeps
    recurring, repeats are logged at reduced severity instead of being
    re-emitted.
    """

    def __init__(self, sink: IO[str] | None = None):
        self._sink = sink
        self._lock = threading.Lock()
        self._last_alerted: dict[str, str] = {}

    def handle(self, spec: WatchSpec, outcome: CheckOutcome) -> bool:
        """Returns True when an alert was actually emitted."""
        if outcome.kind != ALERT:
            if outcome.kind != FETCH_FAILED:
                with self._lock:
                    self._last_alerted.pop(spec.url, None)
            return False
        event = outcome.event
        with self._lock:
            repeat = (
                not spec.update_baseline_on_alert
                and self._last_alerted.get(spec.url) == event.new_digest
            )
            if repeat:
                logger.info(
                    "suppressed repeat alert for %s (digest %s)",
                    spec.url,
                    event.new_digest[:12],
                )
                return False
            self._last_alerted[spec.url] = event.new_digest
            if self._sink is not None:
                self._sink.write(json.dumps(event.to_dict()) + "\n")
                self._sink.flush()
        logger.warning(
            "ALERT %s normalized_score=%.4f threshold=%.4f",
            spec.url,
            event.normalized_score,
            spec.threshold,
        )
        if spec.alert_command:
            self._run_command(spec.alert_command, event)
        return True

    @staticmethod
    def _run_command(command: str, event: AlertEvent) -> None:
        try:
            completed = subprocess.run(
                shlex.split(command),
                input=json.dumps(event.to_dict()),
                capture_output=True,
                text=True,
                timeout=_ALERT_COMMAND_TIMEOUT_S,
            )
        except (OSError, subprocess.TimeoutExpired, ValueError) as exc:
            logger.warning("alert command failed to run: %s", exc)
            return
        if completed.returncode != 0:
            logger.warning(
                "alert command exited %d: %s",
                completed.returncode,
                completed.stderr.strip(),
            )


def run_watch(
    specs: Sequence[WatchSpec],
    store_path,
    *,
    clock=None,
    stop: threading.Event | None = None,
    alert_sink: IO[str] | None = None,
    fetch_config: FetchConfig | None = None,
    on_check: Callable[[WatchSpec, CheckOutcome], None] | None = None,
) -> None:
    """Watch every spec until the stop event is set.

    Each URL runs on its own steady-rate schedule (next due time advances
    by exactly one interval per check, so delays do not accumulate); the
    first check of each URL comes one interval after start. Per-check
    failures are logged and the loop keeps going. on_check, when given, is
    invoked with every outcome; it is an observability hook.
    """
    if not specs:
        raise ValueError("run_watch needs at least one watch spec")
    urls = [spec.url for spec in specs]
    if len(set(urls)) != len(urls):
        raise ValueError("watch spec URLs must be distinct")
    for spec in specs:
        spec.validate()

    clock = clock or RealClock()
    stop = stop or threading.Event()
    dispatcher = AlertDispatcher(alert_sink)

    def worker(spec: WatchSpec) -> None:
        next_due = clock.now() + spec.interval_s
        while not stop.is_set():
            now = clock.now()
            if now < next_due:
                clock.wait(next_due - now, stop)
                continue
            try:
                outcome = check_once(spec, store_path, fetch_config)
            except Exception:
                logger.exception("unexpected failure checking %s", spec.url)
                outcome = CheckOutcome(FETCH_FAILED, spec.url, error="internal error")
            if outcome.kind == FETCH_FAILED:
                logger.warning("check failed for %s: %s", spec.url, outcome.error)
            else:
                logger.info("%s: %s", spec.url, outcome.kind)
            dispatcher.handle(spec, outcome)
            if on_check is not None:
                on_check(spec, outcome)
            next_due += spec.interval_s

    threads = [
        threading.Thread(target=worker, args=(spec,), name=f"hdna-watch-{i}")
        for i, spec in enumerate(specs)
    ]
    for thread in threads:
        thread.start()
    for thread in threads:
        thread.join()
