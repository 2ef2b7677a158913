"""Threaded HTTP stand-in for a completion endpoint.

It echoes the document part of the prompt. When a logit-bias map is sent,
it returns an alternative segmentation of the echoed text that avoids every
biased token id.
"""

from __future__ import annotations

import json
import re
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from phantom_probe.segmentation import enumerate_segmentations
from phantom_probe.vocab import encode


def echo_body(prompt: str) -> str:
    return prompt.split("\n\n", 1)[-1].rstrip("\n")


def avoid(vocab, text: str, blocked: set[int]) -> list[int] | None:
    ids = []
    for m in re.finditer(r"\s*\S+", text):
        piece = m.group()
        canon = list(encode(vocab, piece).ids)
        if not blocked & set(canon):
            ids += canon
            continue
        try:
            alts = enumerate_segmentations(vocab, piece, limit=5000).members
        except Exception:
            return None
        ok = sorted((s.ids for s in alts if not blocked & set(s.ids)), key=len)
        if not ok:
            return None
        ids += list(ok[0])
    return ids


class MockEndpoint:
    def __init__(self, vocab, fail_first: int = 0, status: int = 503):
        self.vocab = vocab
        self.fail_first = fail_first
        self.status = status
        self.requests: list[dict] = []
        outer = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, *args):
                pass

            def do_POST(self):
                body = json.loads(self.rfile.read(int(self.headers["Content-Length"])))
                outer.requests.append(body)
                if len(outer.requests) <= outer.fail_first:
                    self._send(outer.status, {"error": "try later"})
                    return
                text = echo_body(body["prompt"]).replace("[", "").replace("]", "")
                blocked = {int(k) for k in body.get("logit_bias", {})}
                ids = avoid(outer.vocab, text, blocked) if blocked else list(encode(outer.vocab, text).ids)
                self._send(200, {"text": text, "token_ids": ids})

            def _send(self, status, payload):
                data = json.dumps(payload).encode()
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(data)))
                self.end_headers()
                self.wfile.write(data)

        self.server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self.thread = threading.Thread(target=self.server.serve_forever, daemon=True)

    @property
    def url(self) -> str:
        return f"http://127.0.0.1:{self.server.server_address[1]}/v1/completions"

    def __enter__(self):
        self.thread.start()
        return self

    def __exit__(self, *exc):
        self.server.shutdown()
        self.server.server_close()
