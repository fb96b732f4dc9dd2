"""HTTP front end: a FastAPI app over the operations in ``service``."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from . import service as sv
from .errors import KTermError

app = FastAPI(title="lgword", description="Canonical forms and the word problem for omega-terms over local groups")


def _run(fn, req):
    try:
        return fn(req)
    except KTermError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/canon", response_model=sv.CanonResponse)
def canon(req: sv.CanonRequest):
    return _run(sv.canon, req)


@app.post("/decide", response_model=sv.DecideResponse)
def decide(req: sv.DecideRequest):
    return _run(sv.decide_terms, req)


@app.post("/outline", response_model=sv.OutlineResponse)
def outline(req: sv.OutlineRequest):
    return _run(sv.outline, req)


@app.post("/root", response_model=sv.OutlineResponse)
def root(req: sv.OutlineRequest):
    return _run(sv.root, req)


@app.post("/eval", response_model=sv.EvalResponse)
def eval_term(req: sv.EvalRequest):
    return _run(sv.eval_term, req)


@app.post("/check-sg", response_model=sv.SemigroupResponse)
def check_sg(req: sv.SemigroupRequest):
    return _run(sv.check_semigroup, req)


@app.post("/trace", response_model=sv.TraceResponse)
def trace(req: sv.TraceRequest):
    return _run(sv.trace, req)


@app.post("/selftest", response_model=sv.SelftestResponse)
def selftest(req: sv.SelftestRequest):
    return _run(sv.selftest, req)
