"""REST client tests against a local fixture server."""

import json
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer
from urllib.parse import parse_qs, urlparse

import pytest

from vizrec.errors import RetryableError
from vizrec.ingest import CorpusClient, fetch_corpus_page


def _record(fid):
    return {
        "fid": fid,
        "user_id": f"user-{fid}",
        "data": {"a": [1, 2, 3], "b": [1.5, 2.5, 3.5]},
        "specification": [{"type": "scatter", "x": "a", "y": "b"}],
        "layout": {},
    }


class FixtureHandler(BaseHTTPRequestHandler):
    pages = {}
    fail_first = 0
    requests_seen = []

    def do_GET(self):
        parsed = urlparse(self.path)
        FixtureHandler.requests_seen.append(self.path)
        if parsed.path != "/plots":
            self.send_error(404)
            return
        if FixtureHandler.fail_first > 0:
            FixtureHandler.fail_first -= 1
            self.send_response(429)
            self.end_headers()
            return
        page = int(parse_qs(parsed.query).get("page", ["0"])[0])
        body = json.dumps(FixtureHandler.pages.get(page, [])).encode()
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, *args):
        pass


@pytest.fixture
def fixture_server():
    server = HTTPServer(("127.0.0.1", 0), FixtureHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    FixtureHandler.pages = {}
    FixtureHandler.fail_first = 0
    FixtureHandler.requests_seen = []
    yield f"http://127.0.0.1:{server.server_port}"
    server.shutdown()


def test_fetch_page(fixture_server):
    FixtureHandler.pages = {0: [_record("a"), _record("b")]}
    records = fetch_corpus_page(fixture_server, 0)
    assert [r.fid for r in records] == ["a", "b"]
    assert records[0].data.num_columns == 2


def test_retry_on_429_then_success(fixture_server):
    FixtureHandler.pages = {0: [_record("a")]}
    FixtureHandler.fail_first = 2
    client = CorpusClient(fixture_server, backoff=0.01)
    records = client.fetch_page(0)
    assert len(records) == 1
    assert len(FixtureHandler.requests_seen) == 3


def test_gives_up_after_retries(fixture_server):
    FixtureHandler.pages = {0: [_record("a")]}
    FixtureHandler.fail_first = 10
    client = CorpusClient(fixture_server, max_retries=2, backoff=0.01)
    with pytest.raises(RetryableError):
        client.fetch_page(0)


def test_record_missing_data_skipped(fixture_server):
    broken = _record("broken")
    del broken["data"]
    FixtureHandler.pages = {0: [_record("ok"), broken]}
    client = CorpusClient(fixture_server)
    records = client.fetch_page(0)
    assert [r.fid for r in records] == ["ok"]
    assert client.skipped and client.skipped[0]["reason"].startswith("record missing")


def test_fetch_all_stops_at_empty_page(fixture_server):
    FixtureHandler.pages = {0: [_record("a")], 1: [_record("b")], 2: []}
    client = CorpusClient(fixture_server)
    records = client.fetch_all()
    assert [r.fid for r in records] == ["a", "b"]


def test_max_pages_cap(fixture_server):
    FixtureHandler.pages = {0: [_record("a")], 1: [_record("b")], 2: [_record("c")]}
    client = CorpusClient(fixture_server)
    records = client.fetch_all(max_pages=2)
    assert [r.fid for r in records] == ["a", "b"]


def test_rate_limit_sleeps_between_requests(fixture_server):
    FixtureHandler.pages = {0: [_record("a")], 1: []}
    sleeps = []
    client = CorpusClient(fixture_server, rate_limit=50.0, sleep=sleeps.append)
    client.fetch_all()
    assert sleeps, "second request should have been throttled"
