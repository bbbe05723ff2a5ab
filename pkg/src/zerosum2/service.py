"""HTTP facade over the verification runners.

Each verification command gets a synchronous endpoint returning its
certificate.  Because full searches can run for minutes to hours, the
/jobs endpoints accept the same requests asynchronously: submission
returns a job id immediately and the certificate is fetched by polling.
"""

from __future__ import annotations

import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Literal, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .certificates import Certificate
from .runners import run_davenport, run_lemma, run_propb, run_triple, run_twomult

app = FastAPI(
    title="zerosum2",
    version=__version__,
    description="Verification service for zero-sum problems in rank-2 cyclic groups",
)


class HealthResponse(BaseModel):
    status: str
    version: str


class PropbRequest(BaseModel):
    n: int = Field(ge=2, le=64)
    max_mult: Optional[int] = Field(default=None, ge=0)
    workers: int = Field(default=1, ge=1, le=64)
    checkpoint: Optional[str] = None
    resume: bool = False


class TripleRequest(BaseModel):
    p: int = Field(ge=5, le=64)
    m1_cap: Optional[int] = Field(default=None, ge=0)
    workers: int = Field(default=1, ge=1, le=64)


class TwomultRequest(BaseModel):
    max_k: int = Field(default=14, ge=6, le=20)
    k1: Optional[int] = Field(default=None, ge=3)
    k2: Optional[int] = Field(default=None, ge=3)
    workers: int = Field(default=1, ge=1, le=64)


class LemmaRequest(BaseModel):
    params: dict[str, Any] = Field(default_factory=dict)


class DavenportRequest(BaseModel):
    n: int = Field(ge=2, le=5)


class JobRequest(BaseModel):
    command: Literal["propb", "triple", "twomult", "lemma", "davenport"]
    params: dict[str, Any] = Field(default_factory=dict)


class JobStatus(BaseModel):
    job_id: str
    status: Literal["queued", "running", "done", "failed"]
    command: str
    error: Optional[str] = None
    certificate: Optional[dict[str, Any]] = None


def _run_command(command: str, params: dict[str, Any]) -> Certificate:
    try:
        if command == "propb":
            return run_propb(**params)
        if command == "triple":
            return run_triple(**params)
        if command == "twomult":
            return run_twomult(**params)
        if command == "lemma":
            name = params.pop("name")
            return run_lemma(name, **params)
        if command == "davenport":
            return run_davenport(**params)
    except (ValueError, TypeError) as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    raise HTTPException(status_code=400, detail=f"unknown command {command!r}")


def _cert_response(cert: Certificate) -> dict[str, Any]:
    return cert.model_dump(by_alias=True)


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.post("/verify/propb")
def verify_propb(req: PropbRequest) -> dict[str, Any]:
    return _cert_response(_run_command("propb", req.model_dump()))


@app.post("/verify/triple")
def verify_triple(req: TripleRequest) -> dict[str, Any]:
    return _cert_response(_run_command("triple", req.model_dump()))


@app.post("/verify/twomult")
def verify_twomult(req: TwomultRequest) -> dict[str, Any]:
    return _cert_response(_run_command("twomult", req.model_dump()))


@app.post("/lemmas/{name}")
def verify_lemma(name: str, req: LemmaRequest) -> dict[str, Any]:
    return _cert_response(_run_command("lemma", {"name": name, **req.params}))


@app.post("/davenport")
def davenport(req: DavenportRequest) -> dict[str, Any]:
    return _cert_response(_run_command("davenport", req.model_dump()))


# ---------------------------------------------------------------------------
# background jobs


class _JobRegistry:
    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._jobs: dict[str, JobStatus] = {}
        self._pool = ThreadPoolExecutor(max_workers=2, thread_name_prefix="zerosum2-job")

    def submit(self, req: JobRequest) -> JobStatus:
        job_id = uuid.uuid4().hex
        status = JobStatus(job_id=job_id, status="queued", command=req.command)
        with self._lock:
            self._jobs[job_id] = status
        self._pool.submit(self._run, job_id, req)
        return status

    def _run(self, job_id: str, req: JobRequest) -> None:
        with self._lock:
            self._jobs[job_id] = self._jobs[job_id].model_copy(update={"status": "running"})
        try:
            cert = _run_command(req.command, dict(req.params))
            update: dict[str, Any] = {"status": "done", "certificate": _cert_response(cert)}
        except HTTPException as exc:
            update = {"status": "failed", "error": str(exc.detail)}
        except Exception as exc:  # pragma: no cover - defensive
            update = {"status": "failed", "error": repr(exc)}
        with self._lock:
            self._jobs[job_id] = self._jobs[job_id].model_copy(update=update)

    def get(self, job_id: str) -> JobStatus:
        with self._lock:
            job = self._jobs.get(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail=f"no job {job_id!r}")
        return job

    def list(self) -> list[JobStatus]:
        with self._lock:
            return [j.model_copy(update={"certificate": None}) for j in self._jobs.values()]


_registry = _JobRegistry()


@app.post("/jobs", response_model=JobStatus, status_code=202)
def submit_job(req: JobRequest) -> JobStatus:
    return _registry.submit(req)


@app.get("/jobs/{job_id}", response_model=JobStatus)
def job_status(job_id: str) -> JobStatus:
    return _registry.get(job_id)


@app.get("/jobs", response_model=list[JobStatus])
def list_jobs() -> list[JobStatus]:
    return _registry.list()
