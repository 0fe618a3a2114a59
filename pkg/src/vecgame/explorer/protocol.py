"""Remote evaluation over newline-delimited JSON.

Request:  {"id": <any>, "theta": [..], "scenario": str, "method": str, "metric": str}
Response: {"id": <same>, "class": "success" | "failure"}

The server side lets external exploration tools drive this simulator; the
client side lets this explorer drive external systems exposing the same
wire format.
"""

from __future__ import annotations

import json
import socket
import socketserver
import threading

from .classifiers import race_predicate


def make_race_evaluator(**config_overrides):
    """Request handler body running one race per request."""
    cache: dict[tuple, object] = {}

    def evaluate(request: dict) -> bool:
        key = (request["scenario"], request["method"], request["metric"])
        if key not in cache:
            cache[key] = race_predicate(*key, **config_overrides)
        return cache[key](request["theta"])

    return evaluate


class _Handler(socketserver.StreamRequestHandler):
    def handle(self):
        for line in self.rfile:
            line = line.strip()
            if not line:
                continue
            try:
                request = json.loads(line)
                outcome = self.server.evaluate(request)
                response = {"id": request.get("id"), "class": "success" if outcome else "failure"}
            except Exception as exc:  # malformed request: report, keep serving
                response = {"id": None, "error": str(exc)}
            self.wfile.write((json.dumps(response) + "\n").encode())
            self.wfile.flush()


class EvaluatorServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, address, evaluate):
        super().__init__(address, _Handler)
        self.evaluate = evaluate


def serve_evaluator(evaluate, host: str = "127.0.0.1", port: int = 0, background: bool = True):
    """Start an evaluator server; returns it (use .server_address, .shutdown())."""
    server = EvaluatorServer((host, port), evaluate)
    if background:
        thread = threading.Thread(target=server.serve_forever, daemon=True)
        thread.start()
    return server


class RemoteClassifier:
    """Client-side classifier evaluating parameters on a remote server."""

    def __init__(self, host: str, port: int, scenario: str, method: str, metric: str):
        self.scenario, self.method, self.metric = scenario, method, metric
        self._sock = socket.create_connection((host, port))
        self._file = self._sock.makefile("rw")
        self._next_id = 0

    def __call__(self, theta) -> bool:
        self._next_id += 1
        request = {
            "id": self._next_id,
            "theta": [float(t) for t in theta],
            "scenario": self.scenario,
            "method": self.method,
            "metric": self.metric,
        }
        self._file.write(json.dumps(request) + "\n")
        self._file.flush()
        response = json.loads(self._file.readline())
        if "error" in response:
            raise RuntimeError(f"remote evaluation failed: {response['error']}")
        if response.get("id") != self._next_id:
            raise RuntimeError("remote evaluation response out of order")
        return response["class"] == "success"

    def close(self):
        self._file.close()
        self._sock.close()
