"""Client for JSON-over-HTTP completion endpoints.

Wire format: POST ``{"prompt", "max_tokens", "logit_bias"?}`` and expect
``{"text", "token_ids"?}`` back. Transport failures, 5xx and 429 responses
are retried with bounded exponential backoff.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Mapping

import httpx

RETRY_STATUSES = frozenset({429, 500, 502, 503, 504})


class RemoteError(RuntimeError):
    pass


class TransportError(RemoteError):
    """Endpoint unreachable or connection dropped, after all retries."""


class EndpointStatusError(RemoteError):
    def __init__(self, status: int, body: str):
        super().__init__(f"endpoint answered HTTP {status}: {body[:200]}")
        self.status = status


class MalformedResponseError(RemoteError):
    pass


@dataclass(frozen=True)
class EndpointConfig:
    url: str
    max_tokens: int = 4096
    timeout: float = 60.0
    attempts: int = 3
    backoff: float = 0.5
    max_backoff: float = 8.0
    headers: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.attempts < 1:
            raise ValueError("attempts must be at least 1")

    def delay(self, attempt: int) -> float:
        """Sleep before retry number ``attempt`` (1-based)."""
        return min(self.max_backoff, self.backoff * 2 ** (attempt - 1))


@dataclass(frozen=True)
class Completion:
    text: str
    token_ids: tuple[int, ...] | None = None


def _parse(response: httpx.Response) -> Completion:
    try:
        body = response.json()
    except ValueError:
        raise MalformedResponseError("response body is not JSON") from None
    if not isinstance(body, dict) or not isinstance(body.get("text"), str):
        raise MalformedResponseError("response lacks a string 'text' field")
    ids = body.get("token_ids")
    if ids is not None:
        if not isinstance(ids, list) or not all(isinstance(i, int) and not isinstance(i, bool) for i in ids):
            raise MalformedResponseError("'token_ids' must be a list of integers")
        ids = tuple(ids)
    return Completion(body["text"], ids)


def remote_generate(
    config: EndpointConfig,
    prompt: str,
    logit_bias: Mapping[int, float] | None = None,
    client: httpx.Client | None = None,
    sleep: Callable[[float], None] = time.sleep,
) -> Completion:
    payload: dict = {"prompt": prompt, "max_tokens": config.max_tokens}
    if logit_bias:
        payload["logit_bias"] = {str(k): v for k, v in logit_bias.items()}
    own = client is None
    client = client or httpx.Client(timeout=config.timeout)
    try:
        for attempt in range(1, config.attempts + 1):
            last = attempt == config.attempts
            try:
                response = client.post(config.url, json=payload, headers=dict(config.headers))
            except httpx.TransportError as exc:
                if last:
                    raise TransportError(f"{config.url}: {exc}") from exc
            else:
                if response.status_code < 400:
                    return _parse(response)
                if response.status_code not in RETRY_STATUSES or last:
                    raise EndpointStatusError(response.status_code, response.text)
            sleep(config.delay(attempt))
        raise AssertionError("unreachable")
    finally:
        if own:
            client.close()
