"""Canonical forms: rank-1 forms over S, rank reduction, semi-canonical rank-2
forms and the rank-2 LG canonical-form algorithm (eliminations/agglutinations,
extended shifts right, shortenings).

All transformations run through a ``Tracer`` so the output always comes with a
replayable derivation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Optional

from .errors import InternalError, PreconditionError
from .rules import Derivation
from .tactics import (
    MOVE_GUARD,
    Tracer,
    canon_rank1_window,
    is_lp,
    materialize_left,
    materialize_right,
    normalize_shift,
    rank1_violation,
    shift_by,
    shift_left,
    shift_right,
    shift_room,
    simulate_shift,
)
from .terms import KTerm, LimitPower, Seq, build, expand_seq, letters, parse, portions_seq, rank_of, seq, show_seq

SIZE_GUARD = 20_000


def _term(s: Seq) -> KTerm:
    t = build(s)
    if t is None:
        raise InternalError("empty result")
    return t


def _is_r2(a) -> bool:
    return is_lp(a) and a.rank == 2


def _r2_indices(s: Seq) -> list[int]:
    return [k for k, a in enumerate(s) if _is_r2(a)]


# -- rank 1 ------------------------------------------------------------------


def is_canonical_rank1_seq(s: Seq) -> bool:
    return rank1_violation(s, 0, len(s)) is None


def is_canonical_rank1(t: KTerm) -> bool:
    s = seq(t)
    if rank_of(s) > 1:
        raise PreconditionError("is_canonical_rank1 needs a term of rank <= 1")
    return is_canonical_rank1_seq(s)


def canonicalize_rank1(t: KTerm) -> KTerm:
    s = seq(t)
    if rank_of(s) > 1:
        raise PreconditionError("canonicalize_rank1 needs a term of rank <= 1")
    tr = Tracer(s)
    canon_rank1_window(tr)
    return _term(tr.s)


@lru_cache(maxsize=4096)
def _rank1_canon_seq(s: Seq) -> Seq:
    tr = Tracer(s)
    canon_rank1_window(tr)
    return tr.s


def separator_word(x: Seq, z: Seq, alphabet: str = "") -> tuple[int, Seq, int]:
    """(k, u, l) with x^[w+k] u z^[w+l] the canonical form of x^[w] z^[w].

    For x = z the separator is the least letter of the alphabet other than x's
    first letter (k = l = 0).
    """
    x, z = tuple(x), tuple(z)
    if x == z:
        for c in sorted(alphabet):
            if c != x[0]:
                return 0, (c,), 0
        raise PreconditionError("separator for x = z needs a second letter in the alphabet")
    out = _rank1_canon_seq((LimitPower(_term(x), 0), LimitPower(_term(z), 0)))
    if len(out) < 2 or not is_lp(out[0]) or not is_lp(out[-1]) or any(is_lp(a) for a in out[1:-1]):
        raise InternalError(f"unexpected canonical form {show_seq(out)} for a separator")
    return out[0].shift, out[1:-1], out[-1].shift


# -- variety tests -------------------------------------------------------------


@lru_cache(maxsize=4096)
def _canonical_portions(s: Seq):
    r = rank_of(s)
    if r == 0:
        raise PreconditionError("portions need a term of rank >= 1")
    if r == 1:
        return portions_seq(_rank1_canon_seq(s))
    tr = Tracer(s)
    if r > 2:
        reduce_rank(tr)
    if rank_of(tr.s) == 1:
        canon_rank1_window(tr)
    else:
        semicanonicalize(tr)
    return portions_seq(tr.s)


@lru_cache(maxsize=8192)
def variety_equal_seq(t: Seq, s: Seq, kind: str) -> bool:
    pt, ps = _canonical_portions(tuple(t)), _canonical_portions(tuple(s))
    match kind:
        case "K":
            return pt.initial == ps.initial
        case "D":
            return pt.final == ps.final
        case "LI":
            return pt.initial == ps.initial and pt.final == ps.final
    raise ValueError(f"unknown variety {kind!r}")


def variety_equal(tau: KTerm, sigma: KTerm, variety: str) -> bool:
    if tau.rank < 1 or sigma.rank < 1:
        raise PreconditionError("variety tests need terms of rank >= 1")
    return variety_equal_seq(seq(tau), seq(sigma), variety)


# -- rank reduction ------------------------------------------------------------


def _reduce_top_power(tr: Tracer, k: int) -> None:
    """Rewrite the top-rank power at k (shift -1) into terms of lower rank."""
    a: LimitPower = tr.s[k]
    body = a.body
    r = a.rank - 1
    inner = [j for j, b in enumerate(body) if is_lp(b) and b.rank == r]
    if len(body) == 1:
        sig: LimitPower = body[0]
        tr.apply("R2.1", "LR", (), k, k + 1, x=sig.body, p=sig.shift, q=-1)
        return
    pi = body
    # pi^{w-1} -> pi^{w-1} pi pi^{w-1}
    tr.apply("R2.3", "RL", (), k, k + 1, x=pi, p=-1, q=0)
    tr.apply("R2.4b", "RL", (), k + 1, k + 2, x=pi, q=-1, n=1)
    k1, k2 = k, k + 1 + len(pi)
    j1 = inner[0]
    w0 = pi[:j1]
    if len(inner) == 1:
        sig = pi[j1]
        w1 = pi[j1 + 1 :]
        k1 = shift_right(tr, (), k1, len(w0))
        k2 = shift_left(tr, (), k2, len(w1))
        # w0 (S y)^{w-1} S (y S)^{w-1} w1 with S = sig, y = w1 w0
        y = w1 + w0
        x, p = sig.body, sig.shift
        tr.apply("D3.3b", "LR", (), k1, k1 + 2, x=x, q=p, y=y, p=p)
        tr.apply("D3.3a", "LR", (), k1 + 1, k1 + 3, x=x, p=0, y=y, q=p)
        tr.apply("D3.3b", "RL", (), k1, k1 + 2, x=x, q=1, y=y, p=-p + 1)
        tr.apply("D3.3a", "RL", (), k1 + 1, k1 + 3, x=x, p=2 - p, y=y, q=1)
        # sigma^{w+1} -> sigma inside both bases
        tr.apply("D3.1", "LR", (k1,), 0, 1, x=x)
        tr.apply("D3.1", "LR", (k1 + 2,), len(y), len(y) + 1, x=x)
        k1 = shift_left(tr, (), k1, len(w0))
        k3 = k1 + 1 + len(w0) + 1
        shift_right(tr, (), k3, len(w1))
        return
    j2 = inner[-1]
    s1, s2 = pi[j1], pi[j2]
    w1, w2 = pi[j1 + 1 : j2], pi[j2 + 1 :]
    k1 = shift_right(tr, (), k1, len(w0))
    k2 = shift_left(tr, (), k2, len(s2.atoms) + len(w2))
    # w0 (S1 w1 S2 w2 w0)^{w-1} S1 w1 (S2 w2 w0 S1 w1)^{w-1} S2 w2
    p1, p2 = s1.shift, s2.shift
    x1, x2 = s1.body, s2.body
    ww = w2 + w0
    d = k1 + 1
    tr.apply("D3.4", "LR", (), d, d + 2 + len(w1) + 1, x=x1, p=p1, y=w1, z=x2, q=p2, w=ww, r=p1, s=p2)
    # w0 (S1 Y)^{w-1} x1^w (x2^w ww x1^w)^{w-1} x2^w w2 with Y = w1 S2 ww
    big = w1 + (s2,) + ww
    tr.apply("D3.3b", "LR", (), k1, k1 + 2, x=x1, q=p1, y=big, p=0)
    tr.apply("D3.3b", "RL", (), k1, k1 + 2, x=x1, q=1, y=big, p=-p1 + 1)
    small = (LimitPower(_term(x2), 0),) + ww
    tr.apply("D3.3a", "RL", (), k1 + 1, k1 + 3, x=x1, p=2 - p1, y=small, q=1)
    tr.apply("D3.3b", "RL", (), k1 + 2, k1 + 4, x=x2, q=1, y=ww + (LimitPower(_term(x1), 1),), p=1)
    tr.apply("D3.1", "LR", (k1,), 0, 1, x=x1)
    tr.apply("D3.1", "LR", (k1 + 2,), len(small) + 0, len(small) + 1, x=x1)
    tr.apply("D3.1", "LR", (k1 + 2,), 0, 1, x=x2)
    tr.apply("D3.1", "LR", (), k1 + 3, k1 + 4, x=x2)
    # w0 (s1 w1 S2 w2 w0)^{w-1} S1' (s2 w2 w0 s1)^{w-1} s2 w2 -> shift both back
    k1 = shift_left(tr, (), k1, len(w0))
    k3 = k1 + 1 + len(w0) + 1
    shift_right(tr, (), k3, len(x2) + len(w2))
    # the first power now has base w0 s1 w1 S2 w2 of smaller top-rank length
    if rank_of(tr.s[k1].body) > r:
        raise InternalError("rank reduction did not lower the base rank")
    if any(is_lp(b) and b.rank == r for b in tr.s[k1].body):
        _reduce_top_power(tr, k1)


def reduce_rank(tr: Tracer) -> None:
    """Bring the traced term to rank <= 2."""
    while (r := rank_of(tr.s)) > 2:
        while True:
            ks = [k for k, a in enumerate(tr.s) if is_lp(a) and a.rank == r]
            if not ks:
                break
            k = ks[0]
            normalize_shift(tr, (), k)
            _reduce_top_power(tr, k)
            _size_check(tr)


def reduce_to_rank_le2(t: KTerm) -> KTerm:
    tr = Tracer(seq(t))
    reduce_rank(tr)
    return _term(tr.s)


def _size_check(tr: Tracer) -> None:
    if len(show_seq(tr.s)) > SIZE_GUARD * 10:
        raise InternalError("term size guard tripped")


# -- semi-canonical forms ------------------------------------------------------


def is_semicanonical_seq(s: Seq) -> bool:
    if rank_of(s) != 2:
        return False
    if any(_is_r2(a) and a.shift != -1 for a in s):
        return False
    v = expand_seq(s, 2)
    return rank1_violation(v, 0, len(v)) is None


def _view(s: Seq):
    atoms, src = [], []
    seg = 0
    for k, a in enumerate(s):
        if _is_r2(a):
            for c in (0, 1):
                for b in a.body:
                    atoms.append(b)
                    src.append(("p", k, c))
            seg += 1
        else:
            atoms.append(a)
            src.append(("s", seg, 0))
    return tuple(atoms), src


def _violation_range(v: Seq, kind: str, i: int) -> tuple[int, int]:
    x = v[i].body
    match kind:
        case "merge":
            return i, i + 1
        case "suffix":
            return i - len(x), i
        case "prefix":
            j = i + 1
            while j < len(v) and not is_lp(v[j]):
                j += 1
            after = v[i + 1 : j]
            if after[: len(x)] == x:
                return i, i + len(x)
            return i, j
    return i, i


def _rotate_left(tr: Tracer, k: int, m: int, double: bool = False) -> None:
    """Move the first m atoms of the base at k to its end."""
    body = tr.s[k].body
    if not double and tr.s[k + 1 : k + 1 + m] == body[:m]:
        shift_right(tr, (), k, m)
        return
    k = materialize_left(tr, (), k)
    shift_left(tr, (), k, len(body) - m)


def _rotate_right(tr: Tracer, k: int, m: int, double: bool = False) -> None:
    """Move the last m atoms of the base at k to its front."""
    body = tr.s[k].body
    if not double and k >= m and tr.s[k - m : k] == body[len(body) - m :]:
        shift_left(tr, (), k, m)
        return
    materialize_right(tr, (), k)
    shift_right(tr, (), k, len(body) - m)


def _repair_seam(tr: Tracer, k: int, kind: str) -> None:
    body = tr.s[k].body
    lps = [j for j, b in enumerate(body) if is_lp(b)]
    lead, trail = lps[0], len(body) - 1 - lps[-1]
    match kind:
        case "merge":
            _rotate_left(tr, k, 1)
        case "suffix":
            _rotate_right(tr, k, trail)
        case "prefix":
            # the offending power is the last one of the first copy
            x = body[lps[-1]].body
            w = body[lps[-1] + 1 :] + body[:lead]
            if w[: len(x)] == x:
                _rotate_left(tr, k, lead)
            else:
                _rotate_left(tr, k, lead + 1, double=len(lps) == 1)
        case _:
            raise InternalError(f"unexpected seam violation {kind}")


def semicanonicalize(tr: Tracer) -> None:
    """Bring a rank-2 traced term to semi-canonical form with rank-2 shifts -1."""
    while True:
        if len(tr.steps) > MOVE_GUARD:
            raise InternalError("move guard tripped in semi-canonicalization")
        _size_check(tr)
        s = tr.s
        if rank_of(s) < 2:
            canon_rank1_window(tr)
            return
        ks = _r2_indices(s)
        changed = False
        for k in ks:
            a: LimitPower = s[k]
            if len(a.body) == 1:
                inner: LimitPower = a.body[0]
                tr.apply("R2.1", "LR", (), k, k + 1, x=inner.body, p=inner.shift, q=a.shift)
                changed = True
                break
            if a.shift != -1:
                normalize_shift(tr, (), k)
                changed = True
                break
            if rank1_violation(a.body, 0, len(a.body)) is not None:
                canon_rank1_window(tr, (k,))
                changed = True
                break
        if changed:
            continue
        bounds = [-1] + ks + [len(s)]
        for lo, hi in zip(bounds, bounds[1:]):
            if rank1_violation(s, lo + 1, hi) is not None:
                canon_rank1_window(tr, (), lo + 1, hi)
                changed = True
                break
        if changed:
            continue
        for k in ks:
            body = s[k].body
            seam = rank1_violation(body + body, 0, 2 * len(body))
            if seam is not None:
                _repair_seam(tr, k, seam[0])
                changed = True
                break
        if changed:
            continue
        v, src = _view(s)
        bad = rank1_violation(v, 0, len(v))
        if bad is None:
            return
        kind, i = bad
        a0, a1 = _violation_range(v, kind, i)
        for j in range(a0, a1):
            u, w = src[j], src[j + 1]
            if u == w:
                continue
            if w[0] == "p" and w[2] == 0:
                k = w[1]
                room, _ = shift_room(s, k)
                n = j + 1 - a0
                if room >= n:
                    shift_left(tr, (), k, n)
                else:
                    materialize_left(tr, (), k)
            elif u[0] == "p" and u[2] == 1:
                k = u[1]
                _, room = shift_room(s, k)
                n = a1 - j
                if room >= n:
                    shift_right(tr, (), k, n)
                else:
                    materialize_right(tr, (), k)
            elif u[0] == "p" and w[0] == "p" and u[1] == w[1]:
                _repair_seam(tr, u[1], kind)
            else:
                raise InternalError(f"unclassified boundary {u} -> {w}")
            break
        else:
            raise InternalError(f"violation {kind} at {i} inside one unit")


def semicanonicalize_rank2(t: KTerm) -> KTerm:
    s = seq(t)
    if rank_of(s) != 2:
        raise PreconditionError("semicanonicalize_rank2 needs a term of rank 2")
    tr = Tracer(s)
    semicanonicalize(tr)
    return _term(tr.s)


# -- step (1): eliminations and agglutinations --------------------------------------


def _placements(s: Seq, k: int) -> Iterator[tuple[int, Seq, int]]:
    left, right = shift_room(s, k)
    for o in range(-left, right + 1):
        s2, k2 = simulate_shift(s, k, o)
        yield o, s2, k2


def _lp_with(a, body) -> bool:
    return is_lp(a) and a.body == body


def _try_elimination(tr: Tracer, k: int) -> bool:
    for o, s, kk in _placements(tr.s, k):
        base = s[kk].body
        X = base[0]
        if not is_lp(X):
            continue
        w1 = base[1:]
        st = kk - 1 - len(w1)
        if st < 0 or kk + 1 >= len(s):
            continue
        left, right = s[st], s[kk + 1]
        if _lp_with(left, X.body) and s[st + 1 : kk] == w1 and _lp_with(right, X.body):
            kk = shift_by(tr, (), k, o)
            tr.apply("D3.5", "LR", (), st, kk + 2, x=X.body, y=w1, p=left.shift, q=X.shift, r=right.shift)
            return True
    return False


def _initial(b: Seq) -> Seq:
    j = next(i for i, a in enumerate(b) if is_lp(a))
    return b[:j] + (b[j].body,)


def _final(b: Seq) -> Seq:
    j = max(i for i, a in enumerate(b) if is_lp(a))
    return (b[j].body,) + b[j + 1 :]


def _try_agglutination(tr: Tracer, k1: int, k2: int) -> bool:
    for o1, s1, kk1 in _placements(tr.s, k1):
        left, right = shift_room(s1, k2, kk1 + 1)
        for o2 in range(-left, right + 1):
            s2, kk2 = simulate_shift(s1, k2, o2)
            b1, b2 = s2[kk1].body, s2[kk2].body
            mid = s2[kk1 + 1 : kk2]
            kind = None
            if len(mid) == 1 and is_lp(mid[0]) and is_lp(b1[0]) and is_lp(b2[-1]):
                x = mid[0].body
                if b1[0].body == x and b2[-1].body == x and len(b1) > 1 and len(b2) > 1:
                    kind = "A"
            elif not mid:
                if _initial(b1) == _initial(b2):
                    kind = "K"
                elif _final(b1) == _final(b2):
                    kind = "D"
            if kind is None:
                continue
            kk1 = shift_by(tr, (), k1, o1)
            kk2 = shift_by(tr, (), k2, o2)
            match kind:
                case "A":
                    X = mid[0]
                    p, q, r = b1[0].shift, X.shift, b2[-1].shift
                    w1, w2 = b1[1:], b2[:-1]
                    tr.apply("D3.6", "LR", (), kk1, kk2 + 1, x=x, p=p, y=w1, q=q, z=w2, r=r)
                    _pull_out_idempotent(tr, kk1, x)
                case "K":
                    tr.apply("C3.2.2", "LR", (), kk1, kk2 + 1, s=b1, t=b2)
                case "D":
                    tr.apply("C3.2.3", "LR", (), kk1, kk2 + 1, s=b1, t=b2)
            return True
    return False


def _pull_out_idempotent(tr: Tracer, k: int, x: Seq) -> None:
    """(e W e)^{w-1} -> (e W)^{w-1} e for e = x^[w]."""
    e = LimitPower(_term(x), 0)
    body = tr.s[k].body
    W = body[1:-1]
    tr.apply("R2.4a", "RL", (), k, k + 1, x=body, q=-2, n=1)
    last = k + len(body)
    tr.apply("R2.3", "RL", (), last, last + 1, x=x, p=0, q=0)
    tr.apply("R2.4a", "LR", (), k, k + 1 + len(body), x=body, q=-2, n=1)
    tr.apply("R2.5", "LR", (), k, k + 2, x=(e,), y=W + (e,), q=-1)
    n = len(W) + 1
    tr.apply("R2.3", "LR", (k + 1,), n - 1, n + 1, x=x, p=0, q=0)
    tr.apply("R2.5", "RL", (), k, k + 2, x=(e,), y=W, q=-1)


def step1(tr: Tracer, order: str = "left") -> None:
    while rank_of(tr.s) == 2:
        ks = _r2_indices(tr.s)
        idx = range(len(ks)) if order == "left" else range(len(ks) - 1, -1, -1)
        done = False
        for i in idx:
            if _try_elimination(tr, ks[i]):
                done = True
                break
            if i + 1 < len(ks) and _try_agglutination(tr, ks[i], ks[i + 1]):
                done = True
                break
        if not done:
            return
        _keep_semicanonical(tr)


def _keep_semicanonical(tr: Tracer) -> None:
    if rank_of(tr.s) == 2:
        if not is_semicanonical_seq(tr.s):
            semicanonicalize(tr)
    else:
        canon_rank1_window(tr)


# -- step (2): extended shifts right ------------------------------------------------


def step2(tr: Tracer) -> None:
    i = 0
    while i < len(_r2_indices(tr.s)):
        k = _r2_indices(tr.s)[i]
        _, right = shift_room(tr.s, k)
        k = shift_right(tr, (), k, right)
        if k + 1 < len(tr.s) and _is_r2(tr.s[k + 1]):
            b1, b2 = tr.s[k].body, tr.s[k + 1].body
            n = 0
            while n < len(b2) and not is_lp(b2[n]) and b2[n] == b1[n % len(b1)]:
                n += 1
            if n:
                materialize_left(tr, (), k + 1)
                _, right = shift_room(tr.s, k)
                shift_right(tr, (), k, right)
        i += 1


# -- step (3): shortenings ---------------------------------------------------------


def _segment_start(s: Seq, k: int) -> int:
    j = k
    while j > 0 and not _is_r2(s[j - 1]):
        j -= 1
    return j


def _try_type1(tr: Tracer, k: int) -> bool:
    s = tr.s
    base = s[k].body
    lo = _segment_start(s, k)
    for j in range(1, len(base)):
        sig, tau = base[j:], base[:j]
        if k - len(sig) < lo or s[k - len(sig) : k] != sig:
            continue
        if rank_of(sig) < 1 or rank_of(tau) < 1:
            continue
        if variety_equal_seq(tau, sig, "LI"):
            tr.apply("C3.2.1", "LR", (), k - len(sig), k + 1, s=sig, t=tau)
            return True
    return False


def _type2_candidates(s: Seq, k: int):
    for o, s2, kk in _placements(s, k):
        base = s2[kk].body
        Z = base[0]
        if not is_lp(Z) or kk + 1 >= len(s2) or not _lp_with(s2[kk + 1], Z.body):
            continue
        for j in range(1, len(base)):
            X = base[j]
            if not is_lp(X):
                continue
            w2, w1 = base[1:j], base[j + 1 :]
            st = kk - 1 - len(w1)
            if st < 0 or not _lp_with(s2[st], X.body) or s2[st + 1 : kk] != w1:
                continue
            yield o, st, kk, X, Z, w1, w2, s2


def _apply_type2(tr: Tracer, k: int, cand, alphabet: str) -> None:
    o, st, kk, X, Z, w1, w2, s2 = cand
    kk = shift_by(tr, (), k, o)
    left, right = s2[st], s2[kk + 1]
    x, z = X.body, Z.body
    p1, q1, p2, q2 = left.shift, Z.shift, X.shift, right.shift
    tr.apply("D3.4", "LR", (), st, kk + 2, x=x, p=p1, y=w1, z=z, q=q1, w=w2, r=p2, s=q2)
    p, q = p1 - p2, q2 - q1
    k = st + 1  # x^[w+p] (z^w w2 x^w)^{w-1} z^[w+q]
    e = LimitPower(_term(x), 0)
    if x == z and q == 0:
        tr.apply("R2.5", "LR", (), k, k + 2, x=(e,), y=w2 + (e,), q=-1)
        n = len(w2) + 1
        tr.apply("R2.3", "LR", (k + 1,), n - 1, n + 1, x=x, p=0, q=0)
        tr.apply("R2.3", "LR", (), k - 1, k + 1, x=x, p=p, q=0)
        k -= 1
    elif x == z and p == 0:
        tr.apply("R2.5", "RL", (), k - 1, k + 1, x=(e,), y=(e,) + w2, q=-1)
        tr.apply("R2.3", "LR", (k - 1,), 0, 2, x=x, p=0, q=0)
        tr.apply("R2.3", "LR", (), k, k + 2, x=x, p=0, q=q)
        k -= 1
    else:
        _, u, _ = separator_word(x, z, alphabet)
        if u:
            tr.apply("D3.4", "RL", (), k - 1, k + 2, x=x, p=p, y=u, z=z, q=0, w=w2, r=0, s=q)
            k += len(u)
    _, right_room = shift_room(tr.s, k)
    shift_right(tr, (), k, right_room)


def _try_type2(tr: Tracer, k: int, alphabet: str) -> bool:
    for cand in _type2_candidates(tr.s, k):
        trial = Tracer(tr.s, [])
        _apply_type2(trial, k, cand, alphabet)
        if trial.s != tr.s and _shorter(trial.s, tr.s):
            tr.s = trial.s
            tr.steps.extend(trial.steps)
            return True
    return False


def _measure(s: Seq) -> tuple:
    """Order used to accept a type-2 shortening: shorter rank-2 bases, fewer nonzero shifts."""
    bases = [a for a in s if _is_r2(a)]
    blen = sum(len(show_seq(a.body)) for a in bases)
    nz = sum(1 for a in bases for b in a.body if is_lp(b) and b.shift != 0)
    return (blen, nz, len(show_seq(s)))


def _shorter(new: Seq, old: Seq) -> bool:
    return _measure(new) < _measure(old)


def _try_type3(tr: Tracer, k: int) -> bool:
    s = tr.s
    base = s[k].body
    lps = [j for j, b in enumerate(base) if is_lp(b)]
    # (w1 x^[w+q] w2)^{w-1} w1 x^[w+q'] ...
    j = lps[0]
    w1, X = base[:j], base[j]
    at = k + 1 + len(w1)
    if X.shift != 0 and at < len(s) and s[k + 1 : at] == w1 and _lp_with(s[at], X.body) and len(base) > 1:
        y = base[j + 1 :] + w1
        kk = shift_right(tr, (), k, len(w1))
        tr.apply("D3.3b", "LR", (), kk, kk + 2, x=X.body, q=X.shift, y=y, p=s[at].shift)
        shift_left(tr, (), kk, len(w1))
        return True
    # ... x^[w+q'] w1 (w2 x^[w+q] w1)^{w-1}
    j = lps[-1]
    X, w1 = base[j], base[j + 1 :]
    at = k - len(w1) - 1
    if X.shift != 0 and at >= 0 and s[at + 1 : k] == w1 and _lp_with(s[at], X.body) and len(base) > 1:
        y = w1 + base[:j]
        kk = shift_left(tr, (), k, len(w1))
        tr.apply("D3.3a", "LR", (), kk - 1, kk + 1, x=X.body, p=s[at].shift, y=y, q=X.shift)
        shift_right(tr, (), kk, len(w1))
        return True
    return False


def _shift_all_right(tr: Tracer) -> None:
    for i in range(len(_r2_indices(tr.s))):
        k = _r2_indices(tr.s)[i]
        _, right = shift_room(tr.s, k)
        shift_right(tr, (), k, right)


def step3(tr: Tracer, alphabet: str) -> None:
    seen = {tr.s}
    while rank_of(tr.s) == 2:
        done = False
        for k in _r2_indices(tr.s):
            if _try_type1(tr, k) or _try_type2(tr, k, alphabet) or _try_type3(tr, k):
                done = True
                break
        if not done:
            return
        _keep_semicanonical(tr)
        _shift_all_right(tr)
        if tr.s in seen:
            raise InternalError("shortenings cycle")
        seen.add(tr.s)


# -- the steps as term-level operations ------------------------------------------------


def _run_step(t: KTerm, fn) -> KTerm:
    s = seq(t)
    r = rank_of(s)
    if r < 2:
        return t
    if r > 2 or not is_semicanonical_seq(s):
        raise PreconditionError("the rank 2 steps need a semi-canonical form with rank 2 exponents w-1")
    tr = Tracer(s)
    fn(tr)
    return _term(tr.s)


def step1_eliminations_agglutinations(t: KTerm, order: str = "left") -> KTerm:
    return _run_step(t, lambda tr: step1(tr, order))


def step2_extended_shifts(t: KTerm) -> KTerm:
    return _run_step(t, step2)


def step3_shortenings(t: KTerm, alphabet: Optional[str] = None) -> KTerm:
    alphabet = letters(t) if alphabet is None else "".join(sorted(set(alphabet) | set(letters(t))))
    return _run_step(t, lambda tr: step3(tr, alphabet))


# -- single-letter alphabet ----------------------------------------------------------


def _fold_single(tr: Tracer, path: tuple) -> None:
    """Normalize the level at ``path`` (one-letter alphabet) to a^n or a^[w+q]."""
    level = tr.level(path)
    for k in range(len(level)):
        if is_lp(tr.level(path)[k]):
            _fold_single(tr, path + (k,))
            a: LimitPower = tr.level(path)[k]
            body = a.body
            if is_lp(body[0]):
                tr.apply("R2.1", "LR", path, k, k + 1, x=body[0].body, p=body[0].shift, q=a.shift)
            elif len(body) > 1:
                tr.apply("R2.2", "LR", path, k, k + 1, x=body[:1], n=len(body), q=a.shift)
    while True:
        level = tr.level(path)
        ks = [k for k, a in enumerate(level) if is_lp(a)]
        if not ks:
            return
        k = ks[0]
        a = level[k]
        if len(ks) > 1 and ks[1] == k + 1:
            tr.apply("R2.3", "LR", path, k, k + 2, x=a.body, p=a.shift, q=level[k + 1].shift)
        elif k > 0:
            tr.apply("R2.4b", "LR", path, k - 1, k + 1, x=a.body, n=1, q=a.shift)
        elif k + 1 < len(level):
            tr.apply("R2.4a", "LR", path, k, k + 2, x=a.body, n=1, q=a.shift)
        else:
            return


# -- the pipeline -----------------------------------------------------------------


@dataclass
class CanonReport:
    input: KTerm
    output: KTerm
    derivation: Derivation
    stage_log: list = field(default_factory=list)

    def stages_text(self) -> str:
        return "".join(f"{name} {text}\n" for name, text in self.stage_log)


def canonicalize_LG(t: KTerm, alphabet: Optional[str] = None, order: str = "left") -> CanonReport:
    alphabet = letters(t) if alphabet is None else "".join(sorted(set(alphabet) | set(letters(t))))
    tr = Tracer(seq(t))
    log = [("input", show_seq(tr.s))]
    if rank_of(tr.s) >= 1 and len(alphabet) == 1:
        _fold_single(tr, ())
        log.append(("single-letter", show_seq(tr.s)))
    elif rank_of(tr.s) >= 1:
        if rank_of(tr.s) > 2:
            reduce_rank(tr)
            log.append(("rank<=2", show_seq(tr.s)))
        if rank_of(tr.s) == 2:
            semicanonicalize(tr)
            log.append(("semi", show_seq(tr.s)))
        if rank_of(tr.s) == 2:
            step1(tr, order)
            log.append(("step1", show_seq(tr.s)))
        if rank_of(tr.s) == 2:
            step2(tr)
            log.append(("step2", show_seq(tr.s)))
            step3(tr, alphabet)
            log.append(("step3", show_seq(tr.s)))
        if rank_of(tr.s) == 1:
            canon_rank1_window(tr)
            log.append(("rank1", show_seq(tr.s)))
    out = _term(tr.s)
    log.append(("output", show_seq(tr.s)))
    return CanonReport(t, out, Derivation(t, list(tr.steps), out), log)


def canonical_form(t: KTerm, alphabet: Optional[str] = None) -> KTerm:
    return canonicalize_LG(t, alphabet).output


def is_canonical_LG(t: KTerm, alphabet: Optional[str] = None) -> bool:
    if t.rank > 2:
        return False
    return canonical_form(t, alphabet) == t


def canon_text(text: str) -> str:
    return show_seq(seq(canonical_form(parse(text))))
