"""JSON-lines wire protocol: client backend and a small TCP server.

One JSON object per LF-terminated line, UTF-8:

    request:  {"id": <uint64>, "tokens": ["türkiye", "nin", ...]}
    response: {"id": <uint64>, "punct": [...], "caps": [...]}
    error:    {"id": <uint64>, "error": "<message>"}

Every request id is answered exactly once; unknown fields are ignored.
"""
from __future__ import annotations

import json
import socket
import socketserver
import threading

from .labels import CapTag, PunctLabel, cap_from_string, punct_from_string
from .tagger import TaggerBackend
from .tokenizer import Token

DEFAULT_TIMEOUT = 30.0


class ProtocolError(RuntimeError):
    pass


class WireTimeoutError(ProtocolError):
    pass


class LengthMismatchError(ProtocolError):
    def __init__(self, request_id: int, expected: int, got: int):
        super().__init__(
            f"response {request_id}: expected {expected} labels, got {got}"
        )
        self.request_id = request_id


class ExternalBackend(TaggerBackend):
    """Client for a remote tagger speaking the wire protocol over TCP."""

    def __init__(self, host: str, port: int, timeout: float = DEFAULT_TIMEOUT,
                 model_name: str = "external", max_len: int = 512):
        self.host = host
        self.port = port
        self.timeout = timeout
        self.model_name = model_name
        self.max_len = max_len
        self._next_id = 1

    def predict(self, tokens: list[Token]) -> tuple[list[PunctLabel], list[CapTag]]:
        return self.predict_batch([tokens])[0]

    def predict_batch(
        self, batches: list[list[Token]]
    ) -> list[tuple[list[PunctLabel], list[CapTag]]]:
        """Send a batch of requests; responses are matched back by id."""
        if not batches:
            return []
        requests = []
        for tokens in batches:
            requests.append((self._next_id, [t.surface for t in tokens]))
            self._next_id += 1
        try:
            with socket.create_connection((self.host, self.port), timeout=self.timeout) as sock:
                sock.settimeout(self.timeout)
                with sock.makefile("rw", encoding="utf-8", newline="\n") as stream:
                    for req_id, surfaces in requests:
                        stream.write(json.dumps(
                            {"id": req_id, "tokens": surfaces}, ensure_ascii=False))
                        stream.write("\n")
                    stream.flush()
                    responses = self._collect(stream, {rid for rid, _ in requests})
        except (TimeoutError, socket.timeout) as exc:
            raise WireTimeoutError(f"endpoint {self.host}:{self.port} timed out") from exc
        except OSError as exc:
            raise ProtocolError(f"endpoint {self.host}:{self.port} unreachable: {exc}") from exc
        out = []
        for req_id, surfaces in requests:
            punct, caps = responses[req_id]
            if len(punct) != len(surfaces) or len(caps) != len(surfaces):
                raise LengthMismatchError(req_id, len(surfaces), len(punct))
            out.append((punct, caps))
        return out

    @staticmethod
    def _collect(stream, pending: set[int]):
        responses = {}
        while pending:
            line = stream.readline()
            if not line:
                raise ProtocolError("connection closed before all responses arrived")
            try:
                doc = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ProtocolError(f"malformed response line: {exc}") from None
            rid = doc.get("id")
            if rid not in pending:
                raise ProtocolError(f"unexpected response id {rid!r}")
            if "error" in doc:
                raise ProtocolError(f"server error for id {rid}: {doc['error']}")
            try:
                punct = [punct_from_string(v) for v in doc["punct"]]
                caps = [cap_from_string(v) for v in doc["caps"]]
            except (KeyError, ValueError) as exc:
                raise ProtocolError(f"bad response for id {rid}: {exc}") from None
            responses[rid] = (punct, caps)
            pending.discard(rid)
        return responses


def handle_request_line(backend: TaggerBackend, line: str) -> str:
    """Answer one request line; malformed input yields an error object."""
    try:
        doc = json.loads(line)
    except json.JSONDecodeError as exc:
        return json.dumps({"id": 0, "error": f"malformed JSON: {exc}"}, ensure_ascii=False)
    rid = doc.get("id", 0)
    surfaces = doc.get("tokens")
    if not isinstance(rid, int) or not isinstance(surfaces, list):
        return json.dumps({"id": rid if isinstance(rid, int) else 0,
                           "error": "request needs integer 'id' and list 'tokens'"},
                          ensure_ascii=False)
    tokens = [Token(s, s.startswith("##"), -1, i) for i, s in enumerate(surfaces)]
    try:
        punct, caps = backend.predict(tokens)
    except Exception as exc:  # answer, never drop the id
        return json.dumps({"id": rid, "error": str(exc)}, ensure_ascii=False)
    return json.dumps(
        {"id": rid, "punct": [p.value for p in punct], "caps": [c.value for c in caps]},
        ensure_ascii=False,
    )


class WireServer:
    """Threaded TCP server answering wire-protocol requests with a backend."""

    def __init__(self, backend: TaggerBackend, host: str = "127.0.0.1", port: int = 0):
        outer = self

        class Handler(socketserver.StreamRequestHandler):
            def handle(self):
                with self.rfile, self.wfile:
                    for raw in self.rfile:
                        line = raw.decode("utf-8")
                        reply = handle_request_line(outer.backend, line)
                        self.wfile.write(reply.encode("utf-8") + b"\n")
                        self.wfile.flush()

        class Server(socketserver.ThreadingTCPServer):
            allow_reuse_address = True
            daemon_threads = True

        self.backend = backend
        self._server = Server((host, port), Handler)
        self._thread: threading.Thread | None = None

    @property
    def address(self) -> tuple[str, int]:
        return self._server.server_address[:2]

    def start(self) -> "WireServer":
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)
        self._thread.start()
        return self

    def serve_forever(self) -> None:
        self._server.serve_forever()

    def stop(self) -> None:
        self._server.shutdown()
        self._server.server_close()
        if self._thread is not None:
            self._thread.join(timeout=5)

    def __enter__(self) -> "WireServer":
        return self.start()

    def __exit__(self, *exc) -> None:
        self.stop()
