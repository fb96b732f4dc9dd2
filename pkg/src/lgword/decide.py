"""Decision procedure for LG |= alpha = beta, with two independent paths."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Literal, Optional

from .canon import CanonReport, canonicalize_LG
from .errors import InternalError
from .gen import perturb, random_term
from .outline import OutlineWord, root
from .semigroup import FiniteSemigroup, battery_equal
from .terms import KTerm, letters, rank, show

Method = Literal["canon", "root", "both"]


@dataclass
class Verdict:
    equal: bool
    method_results: dict  # path name -> bool
    canon_forms: tuple[KTerm, KTerm]
    roots: Optional[tuple[Optional[OutlineWord], Optional[OutlineWord]]] = None
    evidence: Optional[tuple[FiniteSemigroup, dict]] = None
    derivations: tuple[CanonReport, ...] = ()

    def summary(self) -> str:
        if self.equal:
            return "EQUAL"
        if self.evidence is None:
            return "UNEQUAL (by canonical forms; no small witness found)"
        S, a = self.evidence
        w = ",".join(f"{k}={v}" for k, v in sorted(a.items()))
        return f"UNEQUAL (witness {S.name}: {w})"


def _root_or_none(t: KTerm) -> Optional[OutlineWord]:
    return None if rank(t) == 0 else root(t)


def _root_equal(a: KTerm, b: KTerm, ra: Optional[OutlineWord], rb: Optional[OutlineWord]) -> bool:
    if ra is None or rb is None:
        # finite words are separated from each other and from infinite pseudowords
        return ra is None and rb is None and a == b
    return ra == rb


def decide(alpha: KTerm, beta: KTerm, method: Method = "canon", witness: bool = True,
           seed: int = 0) -> Verdict:
    alphabet = letters(alpha, beta)
    ra = canonicalize_LG(alpha, alphabet)
    rb = canonicalize_LG(beta, alphabet)
    ca, cb = ra.output, rb.output
    results: dict[str, bool] = {}
    roots = None
    if method in ("canon", "both"):
        results["canon"] = ca == cb
    if method in ("root", "both"):
        roots = (_root_or_none(ca), _root_or_none(cb))
        results["root"] = _root_equal(ca, cb, *roots)
    if len(set(results.values())) > 1:
        raise InternalError(f"paths disagree on {show(alpha)} = {show(beta)}: {results}")
    equal = next(iter(results.values()))
    evidence = None
    if not equal and witness:
        evidence = battery_equal(alpha, beta, seed=seed)
    return Verdict(equal, results, (ca, cb), roots, evidence, (ra, rb))


@dataclass
class ConsistencyReport:
    pairs: int = 0
    equal_pairs: int = 0
    failures: list = field(default_factory=list)

    def text(self) -> str:
        lines = [f"pairs {self.pairs}", f"equal {self.equal_pairs}", f"failures {len(self.failures)}"]
        lines += [f"FAIL {a} = {b}: {why}" for a, b, why in self.failures]
        return "\n".join(lines) + "\n"


def self_consistency(corpus_size: int = 100, seed: int = 1, alphabet: str = "ab") -> ConsistencyReport:
    """Random pairs and perturbed pairs through both paths plus the battery oracle."""
    rng = random.Random(seed)
    corpus = [random_term(rng, alphabet, rng.randint(0, 3), 4) for _ in range(corpus_size)]
    pairs = [(corpus[i], corpus[rng.randrange(corpus_size)]) for i in range(corpus_size)]
    pairs += [(t, perturb(t, rng, 3, alphabet, max_rank=max(rank(t), 2))[0]) for t in corpus]
    rep = ConsistencyReport()
    for a, b in pairs:
        rep.pairs += 1
        try:
            v = decide(a, b, "both", witness=False, seed=seed)
            if v.equal:
                rep.equal_pairs += 1
                if battery_equal(a, b, seed=seed) is not None:
                    rep.failures.append((show(a), show(b), "equal but the battery separates them"))
        except Exception as exc:  # noqa: BLE001 - every failure is reported, not raised
            rep.failures.append((show(a), show(b), f"{type(exc).__name__}: {exc}"))
    return rep
