"""Chat-completion client with a content-addressed disk cache.

Each cache entry is ``<key>.txt``: one JSON header line, then the raw
completion text. The key is the SHA-256 of the canonical JSON of
``{model, prompt_sha256, sampling}``, so entries can be re-verified without
storing the prompt twice.
"""

from __future__ import annotations

import enum
import hashlib
import json
import logging
import os
import tempfile
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Union

import httpx

log = logging.getLogger(__name__)

DEFAULT_ENDPOINT = "https://api.openai.com/v1/chat/completions"
DEFAULT_KEY_VAR = "MODEL_API_KEY"
MAX_ATTEMPTS = 5
CACHE_FORMAT = 1


class Mode(enum.Enum):
    LIVE = "live"
    REPLAY_ONLY = "replay"


class ClientError(Exception):
    pass


class CacheMiss(ClientError):
    pass


class AuthError(ClientError):
    pass


class RateLimited(ClientError):
    pass


class TransportError(ClientError):
    pass


class ProviderError(ClientError):
    def __init__(self, message: str, payload=None):
        self.payload = payload
        super().__init__(message)


class CacheCorrupt(ClientError):
    pass


@dataclass(frozen=True)
class ModelConfig:
    model: str
    max_tokens: int = 10_000
    temperature: Optional[float] = None  # None: provider default, not sent
    endpoint: Optional[str] = None
    api_key_var: str = DEFAULT_KEY_VAR

    def __post_init__(self):
        if self.max_tokens <= 0:
            raise ValueError("max_tokens must be positive")

    @property
    def sampling(self) -> dict:
        return {"max_tokens": self.max_tokens, "n": 1, "temperature": self.temperature}

    def resolved_endpoint(self) -> str:
        return self.endpoint or os.environ.get("MODEL_API_BASE") or DEFAULT_ENDPOINT


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def cache_key(cfg: ModelConfig, prompt: str) -> str:
    material = {"model": cfg.model, "prompt_sha256": sha256_text(prompt), "sampling": cfg.sampling}
    return sha256_text(json.dumps(material, sort_keys=True, separators=(",", ":")))


@dataclass(frozen=True)
class CachedCompletion:
    key: str
    prompt_sha256: str
    text: str
    model: str
    sampling: dict = field(hash=False)
    metadata: dict = field(default_factory=dict, hash=False)

    def header(self) -> dict:
        return {
            "format": CACHE_FORMAT,
            "key": self.key,
            "model": self.model,
            "prompt_sha256": self.prompt_sha256,
            "sampling": self.sampling,
            "completion_sha256": sha256_text(self.text),
            "metadata": self.metadata,
        }


def _verify(entry: CachedCompletion, header: dict) -> None:
    material = {"model": entry.model, "prompt_sha256": entry.prompt_sha256, "sampling": entry.sampling}
    expect = sha256_text(json.dumps(material, sort_keys=True, separators=(",", ":")))
    if expect != entry.key:
        raise CacheCorrupt(f"cache entry {entry.key} does not hash to its key")
    if header.get("completion_sha256") != sha256_text(entry.text):
        raise CacheCorrupt(f"cache entry {entry.key}: completion text was modified")


class CompletionCache:
    def __init__(self, directory: Union[str, Path]):
        self.directory = Path(directory)

    def path(self, key: str) -> Path:
        return self.directory / f"{key}.txt"

    def get(self, key: str) -> Optional[CachedCompletion]:
        path = self.path(key)
        if not path.is_file():
            return None
        raw = path.read_bytes().decode("utf-8")
        first, _, text = raw.partition("\n")
        header = json.loads(first)
        entry = CachedCompletion(
            key=header["key"],
            prompt_sha256=header["prompt_sha256"],
            text=text,
            model=header["model"],
            sampling=header["sampling"],
            metadata=header.get("metadata", {}),
        )
        if entry.key != key:
            raise CacheCorrupt(f"{path} holds key {entry.key}")
        _verify(entry, header)
        return entry

    def put(self, entry: CachedCompletion) -> None:
        self.directory.mkdir(parents=True, exist_ok=True)
        data = json.dumps(entry.header(), sort_keys=True) + "\n" + entry.text
        fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".tmp-", suffix=".txt")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(data)
            os.replace(tmp, self.path(entry.key))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def verify_all(self) -> list[str]:
        """Keys whose entries fail re-hashing."""
        bad = []
        for path in sorted(self.directory.glob("*.txt")):
            try:
                self.get(path.stem)
            except (CacheCorrupt, ValueError, KeyError):
                bad.append(path.stem)
        return bad


def _redact(headers: dict) -> dict:
    return {k: ("<redacted>" if k.lower() == "authorization" else v) for k, v in headers.items()}


class LLMClient:
    """Replayable client. In ``REPLAY_ONLY`` mode it never touches the network."""

    def __init__(
        self,
        cache_dir: Union[str, Path],
        mode: Mode = Mode.REPLAY_ONLY,
        http: Optional[httpx.Client] = None,
        sleep: Callable[[float], None] = time.sleep,
        backoff: float = 1.0,
    ):
        self.cache = CompletionCache(cache_dir)
        self.mode = mode
        self._http = http
        self._sleep = sleep
        self._backoff = backoff
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()
        self.network_calls = 0

    def _lock_for(self, key: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(key, threading.Lock())

    def complete(self, cfg: ModelConfig, prompt: str, mode: Optional[Mode] = None) -> CachedCompletion:
        mode = mode or self.mode
        key = cache_key(cfg, prompt)
        with self._lock_for(key):
            hit = self.cache.get(key)
            if hit is not None:
                return hit
            if mode is Mode.REPLAY_ONLY:
                raise CacheMiss(f"no cached completion for key {key} (model {cfg.model})")
            text, meta = self._request(cfg, prompt)
            entry = CachedCompletion(key, sha256_text(prompt), text, cfg.model, cfg.sampling, meta)
            self.cache.put(entry)
            return entry

    def _request(self, cfg: ModelConfig, prompt: str) -> tuple[str, dict]:
        api_key = os.environ.get(cfg.api_key_var)
        if not api_key:
            raise AuthError(f"environment variable {cfg.api_key_var} is not set")
        body = {
            "model": cfg.model,
            "messages": [{"role": "user", "content": prompt}],
            "max_tokens": cfg.max_tokens,
            "n": 1,
        }
        if cfg.temperature is not None:
            body["temperature"] = cfg.temperature
        headers = {"Authorization": f"Bearer {api_key}", "Content-Type": "application/json"}
        url = cfg.resolved_endpoint()
        http = self._http or httpx.Client(timeout=600.0)
        try:
            for attempt in range(1, MAX_ATTEMPTS + 1):
                log.debug("POST %s headers=%s body=%s", url, _redact(headers), json.dumps(body)[:2000])
                self.network_calls += 1
                try:
                    resp = http.post(url, json=body, headers=headers)
                except httpx.TransportError as exc:
                    if attempt == MAX_ATTEMPTS:
                        raise TransportError(str(exc)) from exc
                    self._sleep(self._backoff * 2 ** (attempt - 1))
                    continue
                log.debug("response %s %s", resp.status_code, resp.text[:2000])
                if resp.status_code in (401, 403):
                    raise AuthError(f"provider rejected credentials ({resp.status_code})")
                if resp.status_code == 429 or resp.status_code >= 500:
                    if attempt == MAX_ATTEMPTS:
                        if resp.status_code == 429:
                            raise RateLimited(f"still rate limited after {MAX_ATTEMPTS} attempts")
                        raise ProviderError(f"server error {resp.status_code}", _json_or_text(resp))
                    self._sleep(self._backoff * 2 ** (attempt - 1))
                    continue
                payload = _json_or_text(resp)
                if resp.status_code >= 400:
                    raise ProviderError(f"request failed with {resp.status_code}", payload)
                try:
                    text = payload["choices"][0]["message"]["content"]
                except (KeyError, IndexError, TypeError):
                    raise ProviderError("unexpected response shape", payload) from None
                meta = {
                    "usage": payload.get("usage"),
                    "created": payload.get("created"),
                    "cached_at": int(time.time()),
                    "attempts": attempt,
                }
                return text, meta
        finally:
            if self._http is None:
                http.close()
        raise AssertionError("unreachable")


def _json_or_text(resp: httpx.Response):
    try:
        return resp.json()
    except ValueError:
        return resp.text
