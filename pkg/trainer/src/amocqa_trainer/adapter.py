"""Model-adapter endpoint: POST /predict over plain HTTP.

The question-answering service delegates translation to this endpoint
when a model engine is selected. Requests and responses exchange token
strings, not ids; numeric literals arrive pre-masked as the string
"VALUE" with their spellings in a parallel list, and ride through to
the response in the same order.

Request:  {"direction": "QTP", "tokens": [...], "values": [...]}
Response: {"tokens": [...], "values": [...]}
"""

from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .model import DIRECTIONS, TriangleModel
from .predict import predict
from .textproto import BOS_ID, EOS_ID, PAD_ID, TokenSequence, Vocab

_FRAMING = (PAD_ID, BOS_ID, EOS_ID)


def _handle(model: TriangleModel, vocab: Vocab, body: dict) -> dict:
    direction = body.get("direction")
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be one of {DIRECTIONS}")
    tokens = body.get("tokens")
    if not isinstance(tokens, list) or not tokens:
        raise ValueError("tokens must be a non-empty list")
    values = [str(v) for v in body.get("values", [])]

    ids = [BOS_ID] + [vocab.id_of(str(t)) for t in tokens] + [EOS_ID]
    seq = TokenSequence(ids=tuple(ids), values=tuple(values))
    out = predict(model, seq, direction)
    out_tokens = [
        vocab.token_of(i) for i in out.ids if i not in _FRAMING
    ]
    return {"tokens": out_tokens, "values": list(out.values)}


def make_server(
    model: TriangleModel, vocab: Vocab, host: str = "127.0.0.1", port: int = 8100
) -> ThreadingHTTPServer:
    """Build the HTTP server without starting it; call serve_forever to run."""

    class Handler(BaseHTTPRequestHandler):
        def do_POST(self):
            if self.path != "/predict":
                self._reply(404, {"error": "unknown path"})
                return
            try:
                length = int(self.headers.get("Content-Length", 0))
                body = json.loads(self.rfile.read(length))
                payload = _handle(model, vocab, body)
            except (ValueError, KeyError, json.JSONDecodeError) as exc:
                self._reply(400, {"error": str(exc)})
                return
            self._reply(200, payload)

        def _reply(self, status: int, payload: dict):
            data = json.dumps(payload).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)

        def log_message(self, *args):
            pass  # keep test output quiet

    return ThreadingHTTPServer((host, port), Handler)


def serve_adapter(
    model: TriangleModel, vocab: Vocab, host: str = "127.0.0.1", port: int = 8100
) -> None:
    """Serve until interrupted."""
    make_server(model, vocab, host, port).serve_forever()


class AdapterThread:
    """Adapter server running on a daemon thread, for tests and scripts."""

    def __init__(self, model: TriangleModel, vocab: Vocab, host: str = "127.0.0.1"):
        self.server = make_server(model, vocab, host, port=0)
        self.thread = threading.Thread(target=self.server.serve_forever, daemon=True)

    @property
    def url(self) -> str:
        host, port = self.server.server_address[:2]
        return f"http://{host}:{port}"

    def __enter__(self) -> "AdapterThread":
        self.thread.start()
        return self

    def __exit__(self, *exc):
        self.server.shutdown()
        self.server.server_close()
