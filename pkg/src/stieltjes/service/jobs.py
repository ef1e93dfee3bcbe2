"""In-process registry for long-running tabulation jobs.

One thread per job; the tabulation itself fans out to worker processes,
so the thread only orchestrates and updates progress counters.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field

from . import schemas
from .handlers import run_tabulate


@dataclass
class _Job:
    job_id: str
    request: schemas.TabulateRequest
    state: str = "pending"
    done_nodes: int = 0
    total_nodes: int = 0
    error: str | None = None
    error_class: str | None = None
    thread: threading.Thread | None = field(default=None, repr=False)

    def status(self) -> schemas.JobStatus:
        return schemas.JobStatus(
            job_id=self.job_id,
            state=self.state,  # type: ignore[arg-type]
            done_nodes=self.done_nodes,
            total_nodes=self.total_nodes,
            error=self.error,
            error_class=self.error_class,
            out_path=self.request.out_path if self.state == "done" else None,
        )


class JobRegistry:
    def __init__(self) -> None:
        self._jobs: dict[str, _Job] = {}
        self._lock = threading.Lock()

    def submit(self, request: schemas.TabulateRequest) -> str:
        job = _Job(
            job_id=uuid.uuid4().hex[:12],
            request=request,
            total_nodes=request.config.node_count,
        )

        def _run() -> None:
            job.state = "running"
            try:
                run_tabulate(request, progress=self._progress_for(job))
                job.done_nodes = job.total_nodes
                job.state = "done"
            except Exception as exc:  # job failure must be observable, not raised
                job.error = str(exc)
                job.error_class = type(exc).__name__
                job.state = "failed"

        job.thread = threading.Thread(target=_run, daemon=True)
        with self._lock:
            self._jobs[job.job_id] = job
        job.thread.start()
        return job.job_id

    def _progress_for(self, job: _Job):
        def progress(done: int, total: int) -> None:
            job.done_nodes = done
            job.total_nodes = total

        return progress

    def get(self, job_id: str) -> schemas.JobStatus | None:
        with self._lock:
            job = self._jobs.get(job_id)
        return job.status() if job else None

    def wait(self, job_id: str, timeout: float | None = None) -> schemas.JobStatus | None:
        with self._lock:
            job = self._jobs.get(job_id)
        if job is None:
            return None
        if job.thread is not None:
            job.thread.join(timeout)
        return job.status()
