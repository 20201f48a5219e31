"""Shared fixtures: small lexicon models and a threaded HTTP classifier
stub that speaks the gateway wire protocol."""

from __future__ import annotations

import json
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from vertbench.gateway import LexiconModel, lexicon_score


@pytest.fixture()
def sentiment_model() -> LexiconModel:
    return LexiconModel(labels=("pos", "neg"), weights={"good": (2.0, 0.0)}, bias=(0.0, 0.0))


@pytest.fixture()
def zero_model() -> LexiconModel:
    return LexiconModel(labels=("pos", "neg"), weights={}, bias=(0.0, 0.0))


class _ClassifierStub(BaseHTTPRequestHandler):
    """Minimal wire-protocol server backed by a lexicon model.

    The ``mode`` attribute on the server lets tests force protocol
    violations (bad probability sums, non-JSON bodies, missing fields).
    """

    def log_message(self, *args) -> None:
        pass

    def do_GET(self) -> None:
        if self.path == "/health":
            body = b"ok"
            self.send_response(200)
            self.send_header("Content-Type", "text/plain")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)
        else:
            self.send_response(404)
            self.end_headers()

    def do_POST(self) -> None:
        if self.path != "/classify":
            self.send_response(404)
            self.end_headers()
            return
        length = int(self.headers.get("Content-Length", "0"))
        payload = json.loads(self.rfile.read(length))
        text = payload["text"]
        self.server.seen_texts.append(text)  # type: ignore[attr-defined]
        mode = self.server.mode  # type: ignore[attr-defined]
        fail_after = self.server.fail_after  # type: ignore[attr-defined]
        if fail_after is not None and len(self.server.seen_texts) > fail_after:
            mode = "error_status"
        if mode == "bad_sum":
            body = json.dumps({"label": "pos", "probs": {"pos": 0.5, "neg": 0.3}})
        elif mode == "not_json":
            body = "definitely not json"
        elif mode == "missing_probs":
            body = json.dumps({"label": "pos"})
        elif mode == "error_status":
            self.send_response(500)
            self.end_headers()
            return
        elif mode == "slow":
            time.sleep(3)
            body = json.dumps({"label": "pos", "probs": {"pos": 1.0}})
        else:
            dist = lexicon_score(self.server.model, text)  # type: ignore[attr-defined]
            body = json.dumps({"label": dist.argmax_label(), "probs": dist.probs})
        encoded = body.encode("utf-8")
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(encoded)))
        self.end_headers()
        self.wfile.write(encoded)


@pytest.fixture()
def stub_server(sentiment_model):
    server = ThreadingHTTPServer(("127.0.0.1", 0), _ClassifierStub)
    server.model = sentiment_model
    server.mode = "ok"
    server.fail_after = None
    server.seen_texts = []
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    server.endpoint = f"http://127.0.0.1:{server.server_address[1]}"
    try:
        yield server
    finally:
        server.shutdown()
        thread.join(timeout=5)
