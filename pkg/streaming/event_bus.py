"""Per-job async event bus feeding the SSE progress stream."""

import asyncio
from datetime import datetime, timezone
from typing import Any, AsyncGenerator

from utils.logger import get_logger

log = get_logger("event_bus")

QUEUE_SIZE = 1000


class EventBus:
    """Fan-out of job events to every subscriber of that job.

    ``publish`` never blocks: a subscriber whose queue is full loses the
    event. ``close_stream`` ends every open subscription with a None sentinel.
    """

    def __init__(self) -> None:
        self._subscribers: dict[str, list[asyncio.Queue]] = {}

    def subscriber_count(self, job_id: str) -> int:
        return len(self._subscribers.get(job_id, []))

    async def publish(self, job_id: str, event: dict[str, Any]) -> None:
        event.setdefault("timestamp", datetime.now(timezone.utc).isoformat())
        for q in self._subscribers.get(job_id, []):
            try:
                q.put_nowait(event)
            except asyncio.QueueFull:
                log.warning("Event queue full for job %s, dropping %s event", job_id, event.get("type"))

    def open(self, job_id: str) -> asyncio.Queue:
        """Register a queue now, so events published before iteration starts are kept."""
        queue: asyncio.Queue = asyncio.Queue(maxsize=QUEUE_SIZE)
        self._subscribers.setdefault(job_id, []).append(queue)
        log.info("New subscriber for job %s (total: %d)", job_id, self.subscriber_count(job_id))
        return queue

    async def drain(self, job_id: str, queue: asyncio.Queue) -> AsyncGenerator[dict[str, Any], None]:
        try:
            while True:
                event = await queue.get()
                if event is None:
                    break
                yield event
        finally:
            queues = self._subscribers.get(job_id, [])
            if queue in queues:
                queues.remove(queue)
            if not queues:
                self._subscribers.pop(job_id, None)
            log.info("Subscriber disconnected from job %s", job_id)

    async def close_stream(self, job_id: str) -> None:
        for q in self._subscribers.get(job_id, []):
            try:
                q.put_nowait(None)
            except asyncio.QueueFull:
                pass


event_bus = EventBus()
