"""HTTP(S) retrieval with the controls a monitoring loop needs.

One call is one request chain: redirects are followed up to a cap, the
body is size-capped, and every failure mode maps to a typed error. Retry
policy belongs to the caller.
"""

from __future__ import annotations

import email.message
import time
from dataclasses import dataclass
from datetime import datetime, timezone

import requests

from . import __version__
from .parsing import RawHtml

DEFAULT_TIMEOUT_MS = 10_000
DEFAULT_MAX_REDIRECTS = 5
DEFAULT_MAX_BODY_BYTES = 8 * 1024 * 1024

_CHUNK = 65536


class FetchError(Exception):
    """Base class for retrieval failures."""


class Timeout(FetchError):
    pass


class TooManyRedirects(FetchError):
    pass


class BodyTooLarge(FetchError):
    pass


class NetworkError(FetchError):
    pass


class NonSuccessStatus(FetchError):
    def __init__(self, status: int, url: str):
        super().__init__(f"HTTP {status} for {url}")
        self.status = status
        self.url = url


@dataclass(frozen=True)
class FetchConfig:
    timeout_ms: int = DEFAULT_TIMEOUT_MS
    max_redirects: int = DEFAULT_MAX_REDIRECTS
    max_body_bytes: int = DEFAULT_MAX_BODY_BYTES
    user_agent: str = f"hdna/{__version__}"
    verify_tls: bool = True


@dataclass(frozen=True)
class FetchResult:
    url: str
    status: int
    body: RawHtml
    fetched_at: str
    duration_ms: float


def _charset_from_content_type(value: str | None) -> str | None:
    if not value:
        return None
    message = email.message.Message()
    message["content-type"] = value
    charset = message.get_param("charset")
    return charset if isinstance(charset, str) else None


def fetch(url: str, config: FetchConfig | None = None) -> FetchResult:
    """Retrieve a page once. No retries; truncation is an error, not silent.

    Raises Timeout, TooManyRedirects, BodyTooLarge, NetworkError, or
    NonSuccessStatus (status >= 400).
    """
    config = config or FetchConfig()
    started = time.monotonic()
    try:
        with requests.Session() as session:
            session.max_redirects = config.max_redirects
            response = session.get(
                url,
                timeout=config.timeout_ms / 1000.0,
                stream=True,
                allow_redirects=True,
                verify=config.verify_tls,
                headers={"User-Agent": config.user_agent},
            )
            with response:
                if response.status_code >= 400:
                    raise NonSuccessStatus(response.status_code, url)
                chunks = []
                size = 0
                for chunk in response.iter_content(_CHUNK):
                    size += len(chunk)
                    if size > config.max_body_bytes:
                        raise BodyTooLarge(
                            f"body exceeds {config.max_body_bytes} bytes for {url}"
                        )
                    chunks.append(chunk)
                content_type = response.headers.get("Content-Type")
                status = response.status_code
    except requests.exceptions.Timeout as exc:
        raise Timeout(f"timed out after {config.timeout_ms} ms: {url}") from exc
    except requests.exceptions.TooManyRedirects as exc:
        raise TooManyRedirects(
            f"more than {config.max_redirects} redirects: {url}"
        ) from exc
    except requests.exceptions.RequestException as exc:
        raise NetworkError(f"{url}: {exc}") from exc

    duration_ms = (time.monotonic() - started) * 1000.0
    return FetchResult(
        url=url,
        status=status,
        body=RawHtml(
            data=b"".join(chunks),
            declared_charset=_charset_from_content_type(content_type),
        ),
        fetched_at=datetime.now(timezone.utc).isoformat(),
        duration_ms=duration_ms,
    )
