"""REST client for a paginated ``/plots`` corpus endpoint.

Each page is a JSON array of record documents with the same three-object
shape as local record files. The client rate-limits itself, retries
transient failures with exponential backoff, and skips (with a log line)
records that do not match the schema.
"""

from __future__ import annotations

import logging
import time
from typing import Callable

import requests

from ..errors import DataError, RetryableError
from .corpus import CorpusRecord, parse_record

logger = logging.getLogger(__name__)

RETRYABLE_STATUS = {429, 500, 502, 503, 504}


class CorpusClient:
    """Fetches corpus pages from ``<base_url>/plots?page=N``."""

    def __init__(
        self,
        base_url: str,
        rate_limit: float = 0.0,
        max_retries: int = 3,
        backoff: float = 0.5,
        timeout: float = 30.0,
        session: requests.Session | None = None,
        sleep: Callable[[float], None] = time.sleep,
    ):
        self.base_url = base_url.rstrip("/")
        self.rate_limit = rate_limit
        self.max_retries = max_retries
        self.backoff = backoff
        self.timeout = timeout
        self.session = session or requests.Session()
        self._sleep = sleep
        self._last_request = 0.0
        self.skipped: list[dict] = []

    def _throttle(self) -> None:
        if self.rate_limit <= 0:
            return
        min_interval = 1.0 / self.rate_limit
        wait = self._last_request + min_interval - time.monotonic()
        if wait > 0:
            self._sleep(wait)
        self._last_request = time.monotonic()

    def _get(self, url: str) -> requests.Response:
        last_error: Exception | None = None
        for attempt in range(self.max_retries + 1):
            if attempt > 0:
                self._sleep(self.backoff * (2 ** (attempt - 1)))
            self._throttle()
            try:
                response = self.session.get(url, timeout=self.timeout)
            except requests.RequestException as exc:
                last_error = exc
                logger.warning("request failed (%s), attempt %d/%d", exc, attempt + 1, self.max_retries + 1)
                continue
            if response.status_code in RETRYABLE_STATUS:
                last_error = RetryableError(f"HTTP {response.status_code} from {url}")
                logger.warning("retryable HTTP %d, attempt %d/%d", response.status_code, attempt + 1, self.max_retries + 1)
                continue
            response.raise_for_status()
            return response
        raise RetryableError(f"giving up on {url} after {self.max_retries + 1} attempts: {last_error}")

    def fetch_page(self, page: int) -> list[CorpusRecord]:
        """Fetch one page of records; schema mismatches are skipped and logged."""
        if page < 0:
            raise ValueError("page must be non-negative")
        response = self._get(f"{self.base_url}/plots?page={page}")
        documents = response.json()
        if not isinstance(documents, list):
            raise DataError(f"page {page}: expected a JSON array of record documents")
        records = []
        for i, doc in enumerate(documents):
            try:
                records.append(parse_record(doc))
            except DataError as exc:
                logger.warning("page %d record %d skipped: %s", page, i, exc)
                self.skipped.append({"page": page, "index": i, "reason": str(exc)})
        return records

    def fetch_all(self, start_page: int = 0, max_pages: int | None = None) -> list[CorpusRecord]:
        """Iterate pages from ``start_page`` until an empty page or the page cap."""
        records: list[CorpusRecord] = []
        page = start_page
        fetched = 0
        while max_pages is None or fetched < max_pages:
            batch = self.fetch_page(page)
            if not batch:
                break
            records.extend(batch)
            page += 1
            fetched += 1
        return records


def fetch_corpus_page(base_url: str, page: int, **kwargs) -> list[CorpusRecord]:
    """One-shot page fetch with a fresh client."""
    return CorpusClient(base_url, **kwargs).fetch_page(page)
