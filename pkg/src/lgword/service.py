"""Request/response models and the operations behind both the HTTP API and the CLI."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

from .canon import canonicalize_LG, reduce_rank, semicanonicalize
from .decide import decide, self_consistency
from .outline import instantiate, q_param
from .outline import outline as outline_word
from .outline import root as root_word
from .rules import Derivation, apply_seq, flatten, verify_derivation
from .semigroup import FiniteSemigroup, battery_equal, evaluate, parse_table
from .tactics import Tracer, canon_rank1_window
from .terms import build, parse, rank_of, seq, show, show_seq


class Stage(BaseModel):
    name: str
    term: str


class CanonRequest(BaseModel):
    term: str
    stage: Literal["semi", "full"] = "full"
    trace: bool = False
    flatten: bool = Field(False, description="expand derived rules into primitive steps")


class CanonResponse(BaseModel):
    input: str
    output: str
    stages: list[Stage]
    derivation: Optional[str] = None


class DecideRequest(BaseModel):
    lhs: str
    rhs: str
    method: Literal["canon", "root", "both"] = "canon"
    oracle: bool = False
    seed: int = 0


class Witness(BaseModel):
    semigroup: str
    assignment: dict[str, int]


class DecideResponse(BaseModel):
    equal: bool
    summary: str
    method_results: dict[str, bool]
    canonical: tuple[str, str]
    roots: tuple[str, str]
    witness: Optional[Witness] = None
    oracle_holds: Optional[bool] = None


class OutlineRequest(BaseModel):
    term: str
    q: Optional[int] = Field(None, description="instantiate the symbol q at this value")


class OutlineResponse(BaseModel):
    term: str
    q_param: int
    word: str


class EvalRequest(BaseModel):
    term: str
    table: list[list[int]]
    assignment: dict[str, int]


class EvalResponse(BaseModel):
    element: int


class SemigroupRequest(BaseModel):
    table: list[list[int]]


class SemigroupResponse(BaseModel):
    order: int
    idempotents: list[int]
    local_group: bool


class TraceRequest(BaseModel):
    derivation: str


class TraceResponse(BaseModel):
    valid: bool
    steps: int
    source: str
    target: str
    terms: list[str] = []


class SelftestRequest(BaseModel):
    n: int = Field(100, ge=1, le=5000)
    seed: int = 1


class SelftestResponse(BaseModel):
    pairs: int
    equal_pairs: int
    failures: list[str]


def _semigroup(table: list[list[int]]) -> FiniteSemigroup:
    n = len(table)
    return parse_table("\n".join([str(n)] + [" ".join(map(str, r)) for r in table]))


def canon(req: CanonRequest) -> CanonResponse:
    t = parse(req.term)
    if req.stage == "full":
        rep = canonicalize_LG(t)
        stages, d = rep.stage_log, rep.derivation
    else:
        tr = Tracer(seq(t))
        stages = [("input", show_seq(tr.s))]
        if rank_of(tr.s) > 2:
            reduce_rank(tr)
            stages.append(("rank<=2", show_seq(tr.s)))
        if rank_of(tr.s) == 2:
            semicanonicalize(tr)
            stages.append(("semi", show_seq(tr.s)))
        elif rank_of(tr.s) == 1:
            canon_rank1_window(tr)
            stages.append(("rank1", show_seq(tr.s)))
        stages.append(("output", show_seq(tr.s)))
        d = Derivation(t, list(tr.steps), build(tr.s))
    if req.flatten:
        d = Derivation(d.source, flatten(seq(d.source), d.steps), d.target)
    return CanonResponse(
        input=show(t),
        output=show(d.target),
        stages=[Stage(name=n, term=s) for n, s in stages],
        derivation=d.text() if req.trace else None,
    )


def _root_text(t) -> str:
    return "-" if rank_of(seq(t)) == 0 else str(root_word(t))


def decide_terms(req: DecideRequest) -> DecideResponse:
    a, b = parse(req.lhs), parse(req.rhs)
    v = decide(a, b, req.method, witness=True, seed=req.seed)
    ca, cb = v.canon_forms
    witness = None
    if v.evidence is not None:
        S, asg = v.evidence
        witness = Witness(semigroup=S.name, assignment=asg)
    oracle = None
    if req.oracle:
        oracle = battery_equal(a, b, seed=req.seed) is None
    return DecideResponse(
        equal=v.equal,
        summary=v.summary(),
        method_results=v.method_results,
        canonical=(show(ca), show(cb)),
        roots=(_root_text(ca), _root_text(cb)),
        witness=witness,
        oracle_holds=oracle,
    )


def _outline_like(req: OutlineRequest, fn) -> OutlineResponse:
    t = parse(req.term)
    w = fn(t)
    if req.q is not None:
        w = instantiate(w, req.q)
    return OutlineResponse(term=show(t), q_param=q_param(t), word=str(w))


def outline(req: OutlineRequest) -> OutlineResponse:
    return _outline_like(req, outline_word)


def root(req: OutlineRequest) -> OutlineResponse:
    return _outline_like(req, root_word)


def eval_term(req: EvalRequest) -> EvalResponse:
    t = parse(req.term)
    S = _semigroup(req.table)
    return EvalResponse(element=evaluate(t, S, req.assignment))


def check_semigroup(req: SemigroupRequest) -> SemigroupResponse:
    S = _semigroup(req.table)
    return SemigroupResponse(order=S.order, idempotents=S.idempotents(), local_group=S.is_local_group())


def trace(req: TraceRequest) -> TraceResponse:
    d = Derivation.parse(req.derivation)
    ok = verify_derivation(d)
    terms = []
    if ok:
        cur = seq(d.source)
        for st in d.steps:
            cur = apply_seq(cur, st)
            terms.append(show_seq(cur))
    return TraceResponse(valid=ok, steps=len(d.steps), source=show(d.source), target=show(d.target), terms=terms)


def selftest(req: SelftestRequest) -> SelftestResponse:
    rep = self_consistency(req.n, req.seed)
    return SelftestResponse(
        pairs=rep.pairs,
        equal_pairs=rep.equal_pairs,
        failures=[f"{a} = {b}: {why}" for a, b, why in rep.failures],
    )


__all__ = [
    "CanonRequest", "CanonResponse", "DecideRequest", "DecideResponse", "OutlineRequest",
    "OutlineResponse", "EvalRequest", "EvalResponse", "SemigroupRequest", "SemigroupResponse",
    "TraceRequest", "TraceResponse", "SelftestRequest", "SelftestResponse",
    "canon", "decide_terms", "outline", "root", "eval_term", "check_semigroup", "trace", "selftest",
]
