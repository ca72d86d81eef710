"""Fit job model and in-memory store."""

import uuid
from datetime import datetime, timezone
from typing import Any, Optional

from pydantic import BaseModel, Field

from models.fits import Measurement


class FitJob(BaseModel):
    """One asynchronous bound-inference request through its lifecycle."""

    STATUSES: list[str] = Field(
        default=["queued", "running", "completed", "failed"],
        exclude=True,
    )

    id: str = Field(default_factory=lambda: str(uuid.uuid4())[:8])
    measurements: list[Measurement]
    max_terms: int = Field(ge=1)
    max_degree: str
    lattice: list[int] = [1]
    robust: bool = False
    status: str = "queued"
    created_at: str = Field(default_factory=lambda: datetime.now(timezone.utc).isoformat())
    updated_at: str = Field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    evaluated: int = 0
    total: int = 0

    # Filled on completion
    result: Optional[dict[str, Any]] = None
    error: Optional[str] = None

    def update_status(self, new_status: str) -> None:
        if new_status not in self.STATUSES:
            raise ValueError(f"Invalid status: {new_status}")
        self.status = new_status
        self.updated_at = datetime.now(timezone.utc).isoformat()

    def to_summary(self) -> dict:
        return {
            "id": self.id,
            "status": self.status,
            "points": len(self.measurements),
            "max_terms": self.max_terms,
            "max_degree": self.max_degree,
            "created_at": self.created_at,
            "updated_at": self.updated_at,
            "bound": self.result["bound"] if self.result else None,
        }


class FitJobStore:
    """In-memory job storage."""

    def __init__(self) -> None:
        self._jobs: dict[str, FitJob] = {}

    def create(self, **kwargs: Any) -> FitJob:
        job = FitJob(**kwargs)
        self._jobs[job.id] = job
        return job

    def get(self, job_id: str) -> Optional[FitJob]:
        return self._jobs.get(job_id)

    def list_all(self) -> list[dict]:
        return [
            job.to_summary()
            for job in sorted(self._jobs.values(), key=lambda j: j.created_at, reverse=True)
        ]


store = FitJobStore()
