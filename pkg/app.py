"""bigoh-terms HTTP service: the analysis operations plus asynchronous fit jobs with SSE progress."""

import asyncio
import json
from functools import partial
from typing import Optional

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ConfigDict, Field, ValidationError
from sse_starlette.sse import EventSourceResponse

from analysis import families, fitter, hardy
from analysis.errors import BigOhError
from analysis.expressions import format_term, parse_sum, print_sum
from analysis.independence import is_irreducible, reduce
from analysis.rationals import Rational, format_rational, round_half_up
from config import Config
from models.families import Family
from models.fits import Measurement
from models.jobs import FitJob, store
from streaming.event_bus import event_bus
from utils.logger import get_logger, set_level

log = get_logger("service")
set_level(Config.LOG_LEVEL)

app = FastAPI(title="bigoh-terms", version="1.0.0")

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Fit jobs still running; held so the tasks are not collected early
_running: set[asyncio.Task] = set()


# ---------------------------------------------------------------------------
# Request schemas
# ---------------------------------------------------------------------------
class ExpressionRequest(BaseModel):
    expression: str


class FamilyRequest(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    theorem: int = Field(ge=1, le=3)
    k: int
    alpha: Optional[Rational] = None
    beta: Optional[Rational] = None
    a1: Optional[Rational] = None
    b1: Optional[Rational] = None
    cap: Optional[Rational] = None


class TableRequest(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    family: Family
    z: Optional[list[Rational]] = None


class CompareRequest(BaseModel):
    f: str
    g: str


class FitRequest(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    measurements: list[Measurement]
    max_terms: int = Field(ge=1)
    max_degree: Rational
    lattice: list[int] = [1]
    robust: bool = False


# ---------------------------------------------------------------------------
# Error mapping
# ---------------------------------------------------------------------------
@app.exception_handler(BigOhError)
async def _domain_error(request: Request, exc: BigOhError):
    return JSONResponse(status_code=400, content={"detail": str(exc)})


@app.exception_handler(ValidationError)
async def _model_error(request: Request, exc: ValidationError):
    return JSONResponse(status_code=400, content={"detail": exc.errors()[0].get("msg", str(exc))})


@app.exception_handler(RequestValidationError)
async def _request_error(request: Request, exc: RequestValidationError):
    first = exc.errors()[0]
    return JSONResponse(
        status_code=400,
        content={"detail": first.get("msg", "invalid request"), "loc": list(first.get("loc", ()))},
    )


# ---------------------------------------------------------------------------
# Health
# ---------------------------------------------------------------------------
@app.get("/health")
async def health():
    return {"status": "ok", "precision": Config.EVAL_PRECISION}


# ---------------------------------------------------------------------------
# Sums
# ---------------------------------------------------------------------------
@app.post("/check")
async def check(data: ExpressionRequest):
    s = parse_sum(data.expression)
    irreducible, verdicts = is_irreducible(s)
    return {
        "expression": print_sum(s),
        "irreducible": irreducible,
        "terms": [{"text": format_term(s.terms[v.term_index]), **v.to_json()} for v in verdicts],
    }


@app.post("/reduce")
async def reduce_sum(data: ExpressionRequest):
    result = reduce(parse_sum(data.expression))
    return {
        "reduced": print_sum(result.reduced),
        "constant": format_rational(result.constant),
        "removed": [v.to_json() for v in result.removed],
    }


# ---------------------------------------------------------------------------
# Families
# ---------------------------------------------------------------------------
@app.post("/families")
async def generate_family(data: FamilyRequest):
    alpha, beta = data.alpha, data.beta
    a1 = data.a1 if data.a1 is not None else 1
    b1 = data.b1 if data.b1 is not None else 1
    bound = None
    if data.theorem == 3:
        if data.cap is None:
            raise HTTPException(status_code=400, detail="theorem 3 requires cap")
        family, plan = families.gen_theorem3(data.k, data.cap, a1, b1, alpha, beta)
        spec = family.spec
        bound = float(families.theorem3_bound(spec.alpha, spec.beta, spec.a1, spec.b1, spec.valuation_cap))
    else:
        if alpha is None or beta is None:
            raise HTTPException(status_code=400, detail=f"theorem {data.theorem} requires alpha and beta")
        if data.theorem == 1:
            family = families.gen_theorem1(data.k, alpha, beta, a1, b1)
        else:
            family = families.gen_theorem2(
                data.k, alpha.numerator, alpha.denominator, beta.numerator, beta.denominator
            )
        plan = families.witness_plan(family)
    log.info("Generated theorem %d family with k=%d", family.theorem, family.k)
    return {
        "family": family.model_dump(mode="json"),
        "witnesses": [format_rational(z) for z in plan.z],
        "k_bound": bound,
    }


@app.post("/families/table")
async def family_table(data: TableRequest):
    zs = data.z if data.z is not None else list(families.witness_plan(data.family).z)
    cells = families.envelope_table(data.family, zs)
    return {
        "z": [format_rational(v) for v in zs],
        "exact": [[format_rational(c) for c in row] for row in cells],
        "rounded": [[round_half_up(c) for c in row] for row in cells],
    }


@app.post("/compare")
async def compare(data: CompareRequest):
    f = hardy.reduce_single(hardy.parse_uni_sum(data.f))
    g = hardy.reduce_single(hardy.parse_uni_sum(data.g))
    return {
        "f": hardy.format_uni_term(f),
        "g": hardy.format_uni_term(g),
        "order": hardy.compare(f, g).value,
    }


# ---------------------------------------------------------------------------
# Fitting
# ---------------------------------------------------------------------------
def _fit_kwargs(data: FitRequest | FitJob) -> dict:
    return dict(
        max_terms=data.max_terms,
        max_degree=data.max_degree,
        lattice=data.lattice,
        robust=data.robust,
        slack_tolerance=Config.FIT_SLACK_TOLERANCE,
        workers=Config.FIT_WORKERS,
        max_candidates=Config.FIT_MAX_CANDIDATES,
    )


def _fit_payload(measurements: list[Measurement], result) -> dict:
    report = fitter.validate_bound(measurements, result, Config.EVAL_PRECISION)
    return {
        **report.to_json(),
        "candidates_evaluated": result.candidates_evaluated,
        "admissible": result.admissible,
    }


@app.post("/fit")
async def fit(data: FitRequest):
    loop = asyncio.get_running_loop()
    result = await loop.run_in_executor(None, partial(fitter.fit, data.measurements, **_fit_kwargs(data)))
    return _fit_payload(data.measurements, result)


@app.post("/fit/jobs", status_code=201)
async def create_fit_job(data: FitRequest):
    job = store.create(**data.model_dump())
    log.info("Fit job %s created with %d measurement(s)", job.id, len(job.measurements))
    task = asyncio.create_task(run_fit_job(job.id))
    _running.add(task)
    task.add_done_callback(_running.discard)
    return job.to_summary()


@app.get("/fit/jobs")
async def list_fit_jobs():
    return store.list_all()


@app.get("/fit/jobs/{job_id}")
async def get_fit_job(job_id: str):
    job = store.get(job_id)
    if not job:
        raise HTTPException(status_code=404, detail="Job not found")
    return job.model_dump()


@app.get("/fit/jobs/{job_id}/stream")
async def stream_fit_job(job_id: str):
    """Server-Sent Events: current status, progress updates, the result, then ``done``."""
    job = store.get(job_id)
    if not job:
        raise HTTPException(status_code=404, detail="Job not found")

    async def event_generator():
        queue = event_bus.open(job_id) if job.status in ("queued", "running") else None
        yield {"event": "status", "data": json.dumps({"type": "status", "status": job.status})}
        if queue is not None:
            async for event in event_bus.drain(job_id, queue):
                yield {"event": event.get("type", "message"), "data": json.dumps(event)}
        yield {"event": "done", "data": json.dumps({"type": "done", "status": job.status})}

    return EventSourceResponse(event_generator())


async def run_fit_job(job_id: str) -> None:
    """Run one fit job in the default executor, publishing progress on the event bus."""
    job = store.get(job_id)
    if not job:
        return
    loop = asyncio.get_running_loop()

    def on_progress(evaluated: int, total: int) -> None:
        job.evaluated, job.total = evaluated, total
        asyncio.run_coroutine_threadsafe(
            event_bus.publish(job_id, {"type": "progress", "evaluated": evaluated, "total": total}),
            loop,
        )

    try:
        job.update_status("running")
        await event_bus.publish(job_id, {"type": "status", "status": "running"})
        result = await loop.run_in_executor(
            None,
            partial(fitter.fit, job.measurements, on_progress=on_progress, **_fit_kwargs(job)),
        )
        job.result = _fit_payload(job.measurements, result)
        job.update_status("completed")
        await event_bus.publish(job_id, {"type": "fit_complete", "result": job.result})
        log.info("Fit job %s completed: %s", job_id, job.result["bound"])
    except Exception as e:
        job.error = str(e)
        job.update_status("failed")
        await event_bus.publish(job_id, {"type": "status", "status": "failed", "message": job.error})
        log.error("Fit job %s failed: %s", job_id, e)
    finally:
        await event_bus.close_stream(job_id)


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------
if __name__ == "__main__":
    import uvicorn

    log.info("Starting bigoh-terms service on port %s", Config.PORT)
    uvicorn.run(app, host="0.0.0.0", port=Config.PORT)
