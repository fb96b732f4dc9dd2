"""Composite moves built from catalog steps.

Every tactic mutates a ``Tracer``: each move is a single catalog step applied
(and thereby checked) with ``apply_seq`` and appended to the trace, so the
recorded derivation is valid by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import InternalError
from .rules import Position, apply_seq, make_step
from .terms import LimitPower, Seq
from .words import is_lyndon, lyndon_rotation, primitive_root

MOVE_GUARD = 1_000_000


@dataclass
class Tracer:
    s: Seq
    steps: list = field(default_factory=list)

    def level(self, path: tuple = ()) -> Seq:
        cur = self.s
        for i in path:
            cur = cur[i].body
        return cur

    def apply(self, rule: str, direction: str, path: tuple, start: int, end: int, **b) -> None:
        if len(self.steps) >= MOVE_GUARD:
            raise InternalError("move guard tripped (possible rewriting loop)")
        st = make_step(rule, direction, Position(path, start, end), b)
        self.s = apply_seq(self.s, st)
        self.steps.append(st)


def is_lp(a) -> bool:
    return not isinstance(a, str)


# -- limit-power bookkeeping ---------------------------------------------------


def shift_right(tr: Tracer, path: tuple, k: int, n: int) -> int:
    """Shift the limit power at index k right by n atoms; returns its new index."""
    while n > 0:
        a: LimitPower = tr.level(path)[k]
        body, q = a.body, a.shift
        if n >= len(body):
            tr.apply("R2.4a", "LR", path, k, k + 1 + len(body), x=body, q=q, n=1)
            tr.apply("R2.4b", "RL", path, k, k + 1, x=body, q=q, n=1)
            k += len(body)
            n -= len(body)
        else:
            tr.apply("R2.5", "LR", path, k, k + 1 + n, x=body[:n], y=body[n:], q=q)
            k += n
            n = 0
    return k


def shift_left(tr: Tracer, path: tuple, k: int, n: int) -> int:
    while n > 0:
        a: LimitPower = tr.level(path)[k]
        body, q = a.body, a.shift
        m = len(body)
        if n >= m:
            tr.apply("R2.4b", "LR", path, k - m, k + 1, x=body, q=q, n=1)
            tr.apply("R2.4a", "RL", path, k - m, k - m + 1, x=body, q=q, n=1)
            k -= m
            n -= m
        else:
            tr.apply("R2.5", "RL", path, k - n, k + 1, x=body[m - n :], y=body[: m - n], q=q)
            k -= n
            n = 0
    return k


def shift_by(tr: Tracer, path: tuple, k: int, o: int) -> int:
    return shift_right(tr, path, k, o) if o > 0 else shift_left(tr, path, k, -o)


def shift_room(s: Seq, k: int, lo: int = 0, hi: Optional[int] = None) -> tuple[int, int]:
    """(max left shift, max right shift) of the limit power at k, staying inside [lo, hi)."""
    hi = len(s) if hi is None else hi
    body = s[k].body
    m = len(body)
    right = 0
    while k + 1 + right < hi and s[k + 1 + right] == body[right % m]:
        right += 1
    left = 0
    while k - 1 - left >= lo and s[k - 1 - left] == body[m - 1 - left % m]:
        left += 1
    return left, right


def simulate_shift(s: Seq, k: int, o: int) -> tuple[Seq, int]:
    """Pure version of ``shift_by`` (no trace): the shifted sequence and new index."""
    a: LimitPower = s[k]
    body = a.body
    m = len(body)
    if o == 0:
        return s, k
    if o > 0:
        moved = s[k + 1 : k + 1 + o]
        r = o % m
        nb = body[r:] + body[:r]
        return s[:k] + moved + (LimitPower(_b(nb), a.shift),) + s[k + 1 + o :], k + o
    o = -o
    moved = s[k - o : k]
    r = o % m
    nb = body[m - r :] + body[: m - r] if r else body
    return s[: k - o] + (LimitPower(_b(nb), a.shift),) + moved + s[k + 1 :], k - o


def _b(atoms):
    from .terms import build

    return build(atoms)


def normalize_shift(tr: Tracer, path: tuple, k: int) -> int:
    """Bring the exponent of the limit power at k to ω-1; returns the index of that power."""
    a: LimitPower = tr.level(path)[k]
    q, body = a.shift, a.body
    if q >= 0:
        tr.apply("R2.4a", "RL", path, k, k + 1, x=body, q=-1, n=q + 1)
    elif q < -1:
        tr.apply("R2.2", "RL", path, k, k + 1, x=body, n=-q, q=-1)
    return k


def materialize_left(tr: Tracer, path: tuple, k: int) -> int:
    """π^{ω-1} -> π (ππ)^{ω-1}; returns the index of the remaining limit power."""
    a: LimitPower = tr.level(path)[k]
    body = a.body
    tr.apply("R2.4b", "RL", path, k, k + 1, x=body, q=-2, n=1)
    k += len(body)
    tr.apply("R2.2", "RL", path, k, k + 1, x=body, n=2, q=-1)
    return k


def materialize_right(tr: Tracer, path: tuple, k: int) -> int:
    """π^{ω-1} -> (ππ)^{ω-1} π."""
    a: LimitPower = tr.level(path)[k]
    body = a.body
    tr.apply("R2.4a", "RL", path, k, k + 1, x=body, q=-2, n=1)
    tr.apply("R2.2", "RL", path, k, k + 1, x=body, n=2, q=-1)
    return k


# -- rank-1 canonical forms ----------------------------------------------------


def _letters_before(s: Seq, k: int, lo: int) -> Seq:
    j = k
    while j > lo and not is_lp(s[j - 1]):
        j -= 1
    return s[j:k]


def _letters_after(s: Seq, k: int, hi: int) -> Seq:
    j = k + 1
    while j < hi and not is_lp(s[j]):
        j += 1
    return s[k + 1 : j]


def prefix_of_periodic(x: Seq, w: Seq, y: Optional[Seq]) -> bool:
    """Is x a prefix of w y^l for some l (or of w alone when y is None)?"""
    if y is None:
        return w[: len(x)] == x
    reps = len(x) // len(y) + 2
    return (w + y * reps)[: len(x)] == x


def rank1_violation(s: Seq, lo: int, hi: int) -> Optional[tuple[str, int]]:
    """First violated canonical-form condition among rank-1 powers in s[lo:hi]."""
    for k in range(lo, hi):
        a = s[k]
        if is_lp(a):
            if primitive_root(a.body)[1] > 1:
                return "primitive", k
            if not is_lyndon(a.body):
                return "lyndon", k
    for k in range(lo, hi):
        a = s[k]
        if not is_lp(a):
            continue
        x = a.body
        if k + 1 < hi and is_lp(s[k + 1]) and s[k + 1].body == x:
            return "merge", k
        before = _letters_before(s, k, lo)
        if len(before) >= len(x) and before[-len(x) :] == x:
            return "suffix", k
        after = _letters_after(s, k, hi)
        j = k + 1 + len(after)
        nxt = s[j].body if j < hi else None
        if prefix_of_periodic(x, after, nxt):
            return "prefix", k
    return None


def fix_rank1(tr: Tracer, path: tuple, lo: int, hi: int, kind: str, k: int) -> int:
    """Repair one violation; returns the new window end."""
    s = tr.level(path)
    n0 = len(s)
    a: LimitPower = s[k]
    x, q = a.body, a.shift
    match kind:
        case "primitive":
            root, n = primitive_root(x)
            tr.apply("R2.2", "LR", path, k, k + 1, x=root, n=n, q=q)
        case "lyndon":
            o, _ = lyndon_rotation(x)
            u, v = x[:o], x[o:]
            if k + 1 + o <= hi and s[k + 1 : k + 1 + o] == u:
                tr.apply("R2.5", "LR", path, k, k + 1 + o, x=u, y=v, q=q)
            elif k - len(v) >= lo and s[k - len(v) : k] == v:
                tr.apply("R2.5", "RL", path, k - len(v), k + 1, x=v, y=u, q=q)
            else:
                tr.apply("R2.4a", "RL", path, k, k + 1, x=x, q=q - 1, n=1)
                tr.apply("R2.5", "LR", path, k, k + 1 + o, x=u, y=v, q=q - 1)
        case "merge":
            tr.apply("R2.3", "LR", path, k, k + 2, x=x, p=q, q=s[k + 1].shift)
        case "suffix":
            tr.apply("R2.4b", "LR", path, k - len(x), k + 1, x=x, n=1, q=q)
        case "prefix":
            after = _letters_after(s, k, hi)
            if after[: len(x)] == x:
                tr.apply("R2.4a", "LR", path, k, k + 1 + len(x), x=x, n=1, q=q)
            else:
                j = k + 1 + len(after)
                y: LimitPower = s[j]
                need = -(-(len(x) - len(after)) // len(y.body))
                tr.apply("R2.4b", "RL", path, j, j + 1, x=y.body, n=need, q=y.shift - need)
        case _:
            raise InternalError(kind)
    return hi + len(tr.level(path)) - n0


def canon_rank1_window(tr: Tracer, path: tuple = (), lo: int = 0, hi: Optional[int] = None) -> int:
    """Rank-1 canonicalization of the window [lo, hi) at ``path``; returns the new end."""
    hi = len(tr.level(path)) if hi is None else hi
    while (v := rank1_violation(tr.level(path), lo, hi)) is not None:
        hi = fix_rank1(tr, path, lo, hi, *v)
    return hi
