"""JSON-lines TCP server answering punctuation + capitalization requests.

Protocol (UTF-8, one object per LF-terminated line):

    request:  {"id": <uint64>, "tokens": ["türkiye", "nin", ...]}
    response: {"id": <uint64>, "punct": [...], "caps": [...]}
    error:    {"id": <uint64>, "error": "<message>"}

Every request id is answered exactly once; malformed JSON is answered
with id 0. Requests on one connection are handled sequentially;
multiple connections are served concurrently.
"""
from __future__ import annotations

import json
import socketserver
import threading

from .train import Checkpoint


def handle_request_line(punct: Checkpoint, caps: Checkpoint, line: str) -> str:
    try:
        doc = json.loads(line)
    except json.JSONDecodeError as exc:
        return json.dumps({"id": 0, "error": f"malformed JSON: {exc}"}, ensure_ascii=False)
    rid = doc.get("id", 0) if isinstance(doc, dict) else 0
    if not isinstance(rid, int):
        rid = 0
    surfaces = doc.get("tokens") if isinstance(doc, dict) else None
    if not isinstance(surfaces, list) or not all(isinstance(s, str) for s in surfaces):
        return json.dumps(
            {"id": rid, "error": "request needs integer 'id' and list 'tokens'"},
            ensure_ascii=False,
        )
    try:
        punct_row = punct.predict(surfaces)
        caps_row = caps.predict(surfaces)
    except Exception as exc:  # answer, never drop the id
        return json.dumps({"id": rid, "error": str(exc)}, ensure_ascii=False)
    return json.dumps(
        {"id": rid, "punct": punct_row, "caps": caps_row}, ensure_ascii=False
    )


class AdapterServer:
    """Threaded TCP server pairing a punctuation and a capitalization model."""

    def __init__(
        self,
        punct: Checkpoint,
        caps: Checkpoint,
        host: str = "127.0.0.1",
        port: int = 0,
    ):
        outer = self

        class Handler(socketserver.StreamRequestHandler):
            def handle(self):
                with self.rfile, self.wfile:
                    for raw in self.rfile:
                        reply = handle_request_line(
                            outer.punct, outer.caps, raw.decode("utf-8")
                        )
                        self.wfile.write(reply.encode("utf-8") + b"\n")
                        self.wfile.flush()

        class Server(socketserver.ThreadingTCPServer):
            allow_reuse_address = True
            daemon_threads = True

        self.punct = punct
        self.caps = caps
        self._server = Server((host, port), Handler)
        self._thread: threading.Thread | None = None

    @property
    def address(self) -> tuple[str, int]:
        return self._server.server_address[:2]

    def start(self) -> "AdapterServer":
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

    def __enter__(self) -> "AdapterServer":
        return self.start()

    def __exit__(self, *exc) -> None:
        self.stop()
