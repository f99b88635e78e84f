"""Live fan-out: bounded per-subscriber queues fed by the recording thread.

Preview delivery is lossy by design: a slow consumer drops the oldest
queued samples (counted per subscription) while the persistence path is
untouched. Only post-redaction envelopes ever reach the hub.
"""

from __future__ import annotations

import threading
from collections import deque
from typing import Any

from ..model.streams import SampleEnvelope

DEFAULT_CAPACITY = 256


class LiveSubscription:
    def __init__(self, streams: set[str] | None, capacity: int = DEFAULT_CAPACITY) -> None:
        self.streams = streams
        self.capacity = max(1, capacity)
        self._queue: deque[dict[str, Any]] = deque()
        self._lock = threading.Lock()
        self.dropped = 0
        self.closed = False

    def offer(self, envelope: SampleEnvelope) -> None:
        if self.streams is not None and envelope.stream.value not in self.streams:
            return
        with self._lock:
            if len(self._queue) >= self.capacity:
                self._queue.popleft()
                self.dropped += 1
            self._queue.append(envelope.to_jsonable())

    def poll(self, max_items: int = 64) -> list[dict[str, Any]]:
        with self._lock:
            out = []
            while self._queue and len(out) < max_items:
                out.append(self._queue.popleft())
            return out

    def pending(self) -> int:
        with self._lock:
            return len(self._queue)


class LiveHub:
    """Session-keyed registry of subscriptions."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._subs: dict[str, list[LiveSubscription]] = {}

    def subscribe(self, session_id: str, streams: set[str] | None, capacity: int = DEFAULT_CAPACITY) -> LiveSubscription:
        sub = LiveSubscription(streams, capacity)
        with self._lock:
            self._subs.setdefault(session_id, []).append(sub)
        return sub

    def unsubscribe(self, session_id: str, sub: LiveSubscription) -> None:
        with self._lock:
            subs = self._subs.get(session_id, [])
            if sub in subs:
                subs.remove(sub)
            if not subs:
                self._subs.pop(session_id, None)

    def publish(self, session_id: str, envelope: SampleEnvelope) -> None:
        with self._lock:
            subs = list(self._subs.get(session_id, ()))
        for sub in subs:
            sub.offer(envelope)

    def close_session(self, session_id: str) -> None:
        with self._lock:
            for sub in self._subs.get(session_id, ()):
                sub.closed = True
