import hashlib
import json
import logging
import os
import threading
from collections import OrderedDict
from typing import Any, Optional

import numpy as np
from redis import ConnectionError, Redis

from app.config import get_settings

logger = logging.getLogger(__name__)


class CoefficientCache:
    """Bounded cache for series coefficient tables.

    Tables live in a lock-guarded in-memory LRU. When a cache directory is
    configured (HO_CACHE_DIR) they are also written as JSON files, and when
    Redis is enabled they are shared through a namespaced Redis key. Failures
    of the persistent tiers are logged and treated as misses.
    """

    def __init__(
        self,
        namespace: str = "coefficients",
        max_entries: Optional[int] = None,
        cache_dir: Optional[str] = None,
        use_redis: Optional[bool] = None,
    ):
        self.settings = get_settings()
        self.namespace = namespace
        self.max_entries = max_entries or self.settings.cache_size
        self.cache_dir = cache_dir if cache_dir is not None else self.settings.cache_dir
        self.default_ttl = self.settings.cache_ttl
        self._entries: "OrderedDict[str, np.ndarray]" = OrderedDict()
        self._lock = threading.Lock()

        use_redis = self.settings.redis_enabled if use_redis is None else use_redis
        self.redis_client: Optional[Redis] = None
        if use_redis:
            self.redis_client = Redis(
                host=self.settings.redis_host,
                port=self.settings.redis_port,
                decode_responses=True,
                socket_connect_timeout=5,
                socket_timeout=5,
            )

    def _get_cache_key(self, key: str) -> str:
        """Generate cache key with namespace."""
        return f"{self.settings.redis_namespace}:{self.namespace}:{key}"

    def _digest(self, key: str) -> str:
        return hashlib.sha256(key.encode("utf-8")).hexdigest()

    def _serialize_value(self, value: np.ndarray) -> str:
        """Serialize a complex array to a JSON string of [re, im] pairs."""
        flat = np.asarray(value, dtype=complex).ravel()
        return json.dumps(
            {
                "shape": list(np.shape(value)),
                "data": [[z.real, z.imag] for z in flat.tolist()],
            }
        )

    def _deserialize_value(self, value: str) -> np.ndarray:
        """Deserialize a JSON string back to a complex array."""
        payload = json.loads(value)
        pairs = np.array(payload["data"], dtype=float).reshape(-1, 2)
        return (pairs[:, 0] + 1j * pairs[:, 1]).reshape(payload["shape"])

    def _path(self, key: str) -> Optional[str]:
        if not self.cache_dir:
            return None
        return os.path.join(self.cache_dir, self.namespace, f"{self._digest(key)}.json")

    def read(self, key: str) -> Optional[np.ndarray]:
        """
        Read a coefficient table.

        Args:
            key: Cache key

        Returns:
            The cached array if found, None otherwise
        """
        with self._lock:
            if key in self._entries:
                self._entries.move_to_end(key)
                logger.debug(f"Cache hit for key: {key}")
                return self._entries[key]

        value = self._read_disk(key)
        if value is None:
            value = self._read_redis(key)
        if value is not None:
            self._remember(key, value)
            return value

        logger.debug(f"Cache miss for key: {key}")
        return None

    def write(self, key: str, value: np.ndarray, ttl: Optional[int] = None) -> bool:
        """
        Write a coefficient table to every configured tier.

        Args:
            key: Cache key
            value: Array to cache
            ttl: Time to live in seconds for the Redis tier

        Returns:
            True if the in-memory tier accepted the value
        """
        value = np.array(value, dtype=complex, copy=True)
        value.setflags(write=False)
        self._remember(key, value)
        self._write_disk(key, value)
        self._write_redis(key, value, ttl)
        return True

    def delete(self, key: str) -> bool:
        """Delete a key from every tier."""
        with self._lock:
            removed = self._entries.pop(key, None) is not None
        path = self._path(key)
        if path and os.path.exists(path):
            try:
                os.remove(path)
                removed = True
            except OSError as e:
                logger.warning(f"Could not delete cache file {path}: {e}")
        if self.redis_client is not None:
            try:
                removed = bool(self.redis_client.delete(self._get_cache_key(key))) or removed
            except ConnectionError as e:
                logger.warning(f"Redis connection error while deleting key {key}: {e}")
        return removed

    def clear(self) -> None:
        with self._lock:
            self._entries.clear()

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)

    def __contains__(self, key: str) -> bool:
        with self._lock:
            return key in self._entries

    def _remember(self, key: str, value: np.ndarray) -> None:
        with self._lock:
            self._entries[key] = value
            self._entries.move_to_end(key)
            while len(self._entries) > self.max_entries:
                evicted, _ = self._entries.popitem(last=False)
                logger.debug(f"Evicted key {evicted} from memory cache")

    def _read_disk(self, key: str) -> Optional[np.ndarray]:
        path = self._path(key)
        if not path or not os.path.exists(path):
            return None
        try:
            with open(path, "r", encoding="utf-8") as handle:
                return self._deserialize_value(handle.read())
        except (OSError, ValueError, KeyError) as e:
            logger.warning(f"Error reading cache file {path}: {e}")
            return None

    def _write_disk(self, key: str, value: np.ndarray) -> None:
        path = self._path(key)
        if not path:
            return
        try:
            os.makedirs(os.path.dirname(path), exist_ok=True)
            tmp_path = f"{path}.tmp-{threading.get_ident()}"
            with open(tmp_path, "w", encoding="utf-8") as handle:
                handle.write(self._serialize_value(value))
            os.replace(tmp_path, path)
        except OSError as e:
            logger.warning(f"Error writing cache file {path}: {e}")

    def _read_redis(self, key: str) -> Optional[np.ndarray]:
        if self.redis_client is None:
            return None
        try:
            cached_value = self.redis_client.get(self._get_cache_key(key))
            if cached_value is None:
                return None
            return self._deserialize_value(cached_value)
        except ConnectionError as e:
            logger.warning(f"Redis connection error while reading key {key}: {e}")
            return None
        except Exception as e:
            logger.error(f"Error reading key {key} from cache: {e}")
            return None

    def _write_redis(self, key: str, value: np.ndarray, ttl: Optional[int]) -> None:
        if self.redis_client is None:
            return
        try:
            self.redis_client.setex(
                self._get_cache_key(key), ttl or self.default_ttl, self._serialize_value(value)
            )
        except ConnectionError as e:
            logger.warning(f"Redis connection error while writing key {key}: {e}")
        except Exception as e:
            logger.error(f"Error writing key {key} to cache: {e}")


_shared_cache: Optional[CoefficientCache] = None
_shared_lock = threading.Lock()


def create_cache(namespace: str = "coefficients", **kwargs: Any) -> CoefficientCache:
    """Factory function to create a coefficient cache from settings."""
    return CoefficientCache(namespace=namespace, **kwargs)


def get_shared_cache() -> CoefficientCache:
    """Process-wide cache used when callers do not pass their own."""
    global _shared_cache
    with _shared_lock:
        if _shared_cache is None:
            _shared_cache = create_cache()
        return _shared_cache


def reset_shared_cache() -> None:
    global _shared_cache
    with _shared_lock:
        _shared_cache = None
