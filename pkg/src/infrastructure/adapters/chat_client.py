"""
Chat-completion HTTP client shared by the LLM user simulator, the judge and
the chat-backed policy.

Requests are JSON (messages, model, temperature); transport failures and
5xx / 429 responses are retried with exponential backoff, and a per-client
token bucket bounds the request rate. The API key is read from the
environment variable named in the config at request time and is never
stored on the config object.
"""

import asyncio
import os
import time
from dataclasses import dataclass
from typing import Any, Awaitable, Callable, Optional

import httpx
import structlog
from pydantic import BaseModel, ConfigDict, Field

from src.application.exceptions import TransportError

logger = structlog.get_logger(__name__)

RETRYABLE_STATUS = {429, 500, 502, 503, 504}


class ChatClientConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    endpoint: str
    model: str
    temperature: float = Field(default=0.0, ge=0.0, le=2.0)
    top_p: Optional[float] = Field(default=None, gt=0.0, le=1.0)
    api_key_env: Optional[str] = None
    timeout_seconds: float = Field(default=60.0, gt=0.0)
    max_retries: int = Field(default=2, ge=0)
    backoff_seconds: float = Field(default=0.5, ge=0.0)
    rate_limit_per_second: Optional[float] = Field(default=None, gt=0.0)
    burst: int = Field(default=1, ge=1)
    seed: Optional[int] = None
    request_logprobs: bool = False


class TokenBucket:
    """Async token bucket: `rate` tokens per second, up to `capacity` stored."""

    def __init__(
        self,
        rate: float,
        capacity: int = 1,
        clock: Callable[[], float] = time.monotonic,
        sleep: Callable[[float], Awaitable[None]] = asyncio.sleep,
    ):
        self._rate = rate
        self._capacity = float(capacity)
        self._tokens = float(capacity)
        self._clock = clock
        self._sleep = sleep
        self._updated = clock()
        self._lock = asyncio.Lock()

    async def acquire(self) -> None:
        async with self._lock:
            while True:
                now = self._clock()
                self._tokens = min(self._capacity, self._tokens + (now - self._updated) * self._rate)
                self._updated = now
                if self._tokens >= 1.0:
                    self._tokens -= 1.0
                    return
                await self._sleep((1.0 - self._tokens) / self._rate)


@dataclass(frozen=True)
class ChatCompletion:
    text: str
    logprobs: Optional[list[float]] = None


class ChatCompletionClient:
    def __init__(
        self,
        config: ChatClientConfig,
        transport: Optional[httpx.AsyncBaseTransport] = None,
        sleep: Callable[[float], Awaitable[None]] = asyncio.sleep,
    ):
        self._config = config
        self._transport = transport
        self._sleep = sleep
        self._client: Optional[httpx.AsyncClient] = None
        self._bucket = (
            TokenBucket(config.rate_limit_per_second, config.burst, sleep=sleep)
            if config.rate_limit_per_second
            else None
        )

    @property
    def config(self) -> ChatClientConfig:
        return self._config

    def _headers(self) -> dict[str, str]:
        headers = {"Content-Type": "application/json"}
        if self._config.api_key_env:
            key = os.environ.get(self._config.api_key_env)
            if key:
                headers["Authorization"] = f"Bearer {key}"
        return headers

    async def _get_client(self) -> httpx.AsyncClient:
        if self._client is None or self._client.is_closed:
            self._client = httpx.AsyncClient(timeout=self._config.timeout_seconds, transport=self._transport)
        return self._client

    async def close(self) -> None:
        if self._client and not self._client.is_closed:
            await self._client.aclose()

    def _body(self, messages: list[dict[str, str]], overrides: dict[str, Any]) -> dict[str, Any]:
        body: dict[str, Any] = {
            "model": self._config.model,
            "messages": messages,
            "temperature": self._config.temperature,
        }
        if self._config.top_p is not None:
            body["top_p"] = self._config.top_p
        if self._config.seed is not None:
            body["seed"] = self._config.seed
        if self._config.request_logprobs:
            body["logprobs"] = True
        body.update(overrides)
        return body

    async def complete(self, messages: list[dict[str, str]], **overrides: Any) -> ChatCompletion:
        """
        Send one chat-completion request.

        Raises:
            TransportError: After `max_retries` retries, on a non-retryable
                HTTP error, or on a response without message content
        """
        client = await self._get_client()
        body = self._body(messages, overrides)
        endpoint = self._config.endpoint
        last_error = "no attempt made"

        for attempt in range(self._config.max_retries + 1):
            if attempt:
                await self._sleep(self._config.backoff_seconds * (2 ** (attempt - 1)))
            if self._bucket is not None:
                await self._bucket.acquire()
            try:
                response = await client.post(endpoint, json=body, headers=self._headers())
            except httpx.HTTPError as exc:
                last_error = f"{type(exc).__name__}: {exc}"
                logger.warning("chat request failed", endpoint=endpoint, attempt=attempt, error=last_error)
                continue

            if response.status_code in RETRYABLE_STATUS:
                last_error = f"HTTP {response.status_code}"
                logger.warning("chat request retryable status", endpoint=endpoint, attempt=attempt, status=response.status_code)
                continue
            if response.status_code >= 400:
                raise TransportError(f"HTTP {response.status_code}: {response.text[:200]}", endpoint)
            return self._parse(response, endpoint)

        raise TransportError(f"gave up after {self._config.max_retries + 1} attempts ({last_error})", endpoint)

    @staticmethod
    def _parse(response: httpx.Response, endpoint: str) -> ChatCompletion:
        try:
            choice = response.json()["choices"][0]
            text = choice["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise TransportError(f"malformed completion response: {exc}", endpoint) from exc
        if not isinstance(text, str):
            raise TransportError("completion content is not text", endpoint)

        logprobs = None
        content = (choice.get("logprobs") or {}).get("content") if isinstance(choice.get("logprobs"), dict) else None
        if isinstance(content, list):
            logprobs = [float(item["logprob"]) for item in content if "logprob" in item]
        return ChatCompletion(text=text, logprobs=logprobs)
