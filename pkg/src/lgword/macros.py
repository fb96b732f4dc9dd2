"""Primitive expansions of the derived (D) and corollary (C) rules.

Each chain below rewrites a rule's lhs instance into its rhs instance using only
the R rules (plus, for the C rules, whatever steps the canonicalizer emits to
reach comparable normal forms; ``flatten`` expands those recursively).  A
right-to-left application is expanded as the reversed left-to-right chain.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import InternalError, KTermError
from .rules import CATALOG, Position, RewriteStep, apply_seq, instantiate
from .tactics import (Tracer, canon_rank1_window, is_lp, materialize_left, materialize_right, shift_left,
                      shift_right)
from .terms import LimitPower, Seq, power, rank_of


def _lp(x: Seq, q: int = 0) -> LimitPower:
    return power(x, q)


def _level(s: Seq, path: tuple) -> Seq:
    for i in path:
        s = s[i].body
    return s


# -- step plumbing ---------------------------------------------------------------


def lift(st: RewriteStep, path: tuple, offset: int) -> RewriteStep:
    """Re-anchor a step computed on a standalone slice at ``path``/``offset``."""
    p = st.position
    if p.path:
        pos = Position(path + (p.path[0] + offset,) + p.path[1:], p.start, p.end)
    else:
        pos = Position(path, p.start + offset, p.end + offset)
    return RewriteStep(st.rule, st.direction, pos, st.bindings)


def reverse_steps(source: Seq, steps: list) -> list:
    """Steps taking the replay target of ``steps`` back to ``source``."""
    out = []
    cur = source
    for st in steps:
        nxt = apply_seq(cur, st)
        path = st.position.path
        grow = len(_level(nxt, path)) - len(_level(cur, path))
        out.append(st.reversed(st.position.end + grow))
        cur = nxt
    return out[::-1]


def _splice(tr: Tracer, path: tuple, start: int, steps: list) -> None:
    for st in steps:
        st = lift(st, path, start)
        tr.s = apply_seq(tr.s, st)
        tr.steps.append(st)


def _sub(tr: Tracer, path: tuple, start: int, local: Seq, fn: Callable[[Tracer], None]) -> None:
    """Run ``fn`` on the standalone slice ``local`` (which must sit at path/start) and splice it in."""
    if _level(tr.s, path)[start : start + len(local)] != local:
        raise InternalError("macro chain lost track of its subterm")
    sub = Tracer(local)
    fn(sub)
    _splice(tr, path, start, sub.steps)


def _sub_reversed(tr: Tracer, path: tuple, start: int, lhs: Seq, fn: Callable[[Tracer], None]) -> None:
    """Expand the slice at path/start (the result of ``fn`` on ``lhs``) back into ``lhs``."""
    sub = Tracer(lhs)
    fn(sub)
    here = _level(tr.s, path)[start : start + len(sub.s)]
    if here != sub.s:
        raise InternalError("macro chain lost track of its subterm")
    _splice(tr, path, start, reverse_steps(lhs, sub.steps))


# -- small lemmas (all primitive) ----------------------------------------------------


def _split_left(tr: Tracer, path: tuple, i: int) -> None:
    """x^[w+q] -> x^[w] x^[w+q]."""
    a = _level(tr.s, path)[i]
    tr.apply("R2.3", "RL", path, i, i + 1, x=a.body, p=0, q=a.shift)


def _split_right(tr: Tracer, path: tuple, i: int) -> None:
    """x^[w+q] -> x^[w+q] x^[w]."""
    a = _level(tr.s, path)[i]
    tr.apply("R2.3", "RL", path, i, i + 1, x=a.body, p=a.shift, q=0)


def _merge(tr: Tracer, path: tuple, i: int) -> None:
    s = _level(tr.s, path)
    tr.apply("R2.3", "LR", path, i, i + 2, x=s[i].body, p=s[i].shift, q=s[i + 1].shift)


def _collapse_right(tr: Tracer, i: int = 0) -> None:
    """(eY)^[w] e -> e at i, for e = x^[w]."""
    s = tr.s
    e = s[i + 1]
    Y = s[i].body[1:]
    _split_left(tr, (i,), 0)
    tr.apply("R2.5", "LR", (), i, i + 2, x=(e,), y=(e,) + Y, q=0)
    tr.apply("R.LG", "LR", (), i + 1, i + 2, x=e.body, y=Y)
    _merge(tr, (), i)


def _collapse_left(tr: Tracer, i: int = 0) -> None:
    """e (Ye)^[w] -> e at i."""
    s = tr.s
    e = s[i]
    Y = s[i + 1].body[:-1]
    _split_left(tr, (i + 1,), len(Y))
    tr.apply("R2.5", "RL", (), i, i + 2, x=(e,), y=Y + (e,), q=0)
    tr.apply("R.LG", "LR", (), i, i + 1, x=e.body, y=Y)
    _merge(tr, (), i)


def _absorb_right(tr: Tracer) -> None:
    """x^[w+p] (y x^[w+q])^[w] -> x^[w+p]   (y possibly empty)."""
    X, P = tr.s[0], tr.s[1]
    x = X.body
    y = P.body[:-1]
    e = _lp(x)
    _split_right(tr, (), 0)  # X e P
    _split_left(tr, (2,), len(y))  # base y e Xq
    _split_right(tr, (2,), len(y) + 1)  # base y e Xq e
    Xq = P.body[-1]
    tr.apply("R2.5", "RL", (), 1, 3, x=(e,), y=y + (e, Xq), q=0)
    _collapse_right(tr, 1)
    _merge(tr, (), 0)


def _absorb_left(tr: Tracer) -> None:
    """(x^[w+q] y)^[w] x^[w+p] -> x^[w+p]   (y possibly empty)."""
    P, X = tr.s[0], tr.s[1]
    x = X.body
    y = P.body[1:]
    e = _lp(x)
    Xq = P.body[0]
    _split_left(tr, (), 1)  # P e X
    _split_right(tr, (0,), 0)  # base Xq e y
    _split_left(tr, (0,), 0)  # base e Xq e y
    tr.apply("R2.5", "LR", (), 0, 2, x=(e,), y=(Xq, e) + y, q=0)
    _collapse_left(tr, 0)
    _merge(tr, (), 0)


def _absorb_trailing_e(tr: Tracer, i: int) -> None:
    """(W x^[w+p])^[w+q] e -> (W x^[w+p])^[w+q] at i."""
    P = tr.s[i]
    body, q = P.body, P.shift
    _split_right(tr, (i,), len(body) - 1)
    B = tr.s[i].body
    tr.apply("R2.4a", "RL", (), i, i + 1, x=B, q=q - 1, n=1)
    j = i + len(B)
    _merge(tr, (), j)
    tr.apply("R2.4a", "LR", (), i, i + 1 + len(B), x=B, q=q - 1, n=1)
    _merge(tr, (i,), len(body) - 1)


def _inside_outside_a(tr: Tracer) -> None:
    """x^[w+p] (y x^[w+q])^[w-1] -> x^[w+p-q] (y x^[w])^[w-1]."""
    X, P = tr.s[0], tr.s[1]
    x, p = X.body, X.shift
    y, Xq = P.body[:-1], P.body[-1]
    q = Xq.shift
    e = _lp(x)
    tr.apply("R2.3", "RL", (), 0, 1, x=x, p=p - q, q=q)
    tr.apply("R2.5", "RL", (), 1, 3, x=(Xq,), y=y, q=-1)
    # X' (Xq y)^{w-1} Xq  -> insert (y e)^w after Xq
    _sub_reversed(tr, (), 2, (Xq, _lp(y + (e,))), _absorb_right)
    tr.apply("R2.4b", "RL", (), 3, 4, x=y + (e,), n=1, q=-1)
    tr.apply("R2.4a", "LR", (), 1, 2 + 1 + len(y), x=(Xq,) + y, q=-1, n=1)
    _sub(tr, (), 1, tr.s[1:3], _absorb_left)
    _merge(tr, (), 0)


def _inside_outside_b(tr: Tracer) -> None:
    """(x^[w+q] y)^[w-1] x^[w+p] -> (x^[w] y)^[w-1] x^[w+p-q]."""
    P, X = tr.s[0], tr.s[1]
    x, p = X.body, X.shift
    Xq, y = P.body[0], P.body[1:]
    q = Xq.shift
    e = _lp(x)
    tr.apply("R2.3", "RL", (), 1, 2, x=x, p=q, q=p - q)
    tr.apply("R2.5", "LR", (), 0, 2, x=(Xq,), y=y, q=-1)
    # Xq (y Xq)^{w-1} X'' -> insert (e y)^w before Xq
    _sub_reversed(tr, (), 0, (_lp((e,) + y), Xq), _absorb_left)
    tr.apply("R2.4a", "RL", (), 0, 1, x=(e,) + y, q=-1, n=1)
    j = 2
    tr.apply("R2.4b", "LR", (), j, j + len(y) + 2, x=y + (Xq,), n=1, q=-1)
    _sub(tr, (), 1, tr.s[1:3], _absorb_right)
    _merge(tr, (), 1)


# -- the rule chains ----------------------------------------------------------------


def _d31(tr: Tracer, b: dict) -> None:
    x = b["x"]
    k = next(i for i, a in enumerate(x) if is_lp(a))
    u, L, v = x[:k], x[k], x[k + 1 :]
    tr.apply("R2.4a", "RL", (), 0, 1, x=x, q=0, n=1)
    if u:
        tr.apply("R2.5", "LR", (), 0, 1 + len(u), x=u, y=(L,) + v, q=0)
    i = len(u)
    _sub(tr, (), i, tr.s[i : i + 2], _absorb_left)


def _d32(tr: Tracer, b: dict) -> None:
    _absorb_right(tr)


def _d33a(tr: Tracer, b: dict) -> None:
    _inside_outside_a(tr)


def _d33b(tr: Tracer, b: dict) -> None:
    _inside_outside_b(tr)


def _d34(tr: Tracer, b: dict) -> None:
    x, z, y, w = b["x"], b["z"], b.get("y", ()), b.get("w", ())
    r = b["r"]
    if y:
        A = (_lp(z, b["q"]),) + w + (_lp(x, r),)
        _sub_reversed(tr, (), 0, (_lp(x, b["p"]), _lp(A)), _absorb_right)
        tr.apply("R2.4a", "RL", (), 1, 2, x=A, q=-1, n=1)
        tr.apply("R2.4b", "LR", (), 2, 2 + len(A) + len(y) + 1, x=A + y, n=1, q=-1)
        _sub(tr, (), 2, tr.s[2:4], _absorb_left)
    _sub(tr, (), 0, tr.s[0:2], _inside_outside_a)
    _sub(tr, (), 1, tr.s[1:3], _inside_outside_b)


def _d35(tr: Tracer, b: dict) -> None:
    x, y = b["x"], b["y"]
    k = 1 + len(y)
    _split_left(tr, (k,), 0)
    _sub(tr, (), 0, tr.s[: k + 2], lambda t: _d34(t, {"x": x, "z": x, "y": y, "w": (), "p": b["p"],
                                                       "q": 0, "r": b["q"], "s": b["r"]}))
    _merge(tr, (1,), 0)
    tr.apply("R2.1", "LR", (), 1, 2, x=x, p=0, q=-1)
    _merge(tr, (), 0)
    _merge(tr, (), 0)


def _d36(tr: Tracer, b: dict) -> None:
    x, y, z = b["x"], b["y"], b["z"]
    e = _lp(x)
    _sub(tr, (), 0, tr.s[0:2], _inside_outside_b)  # (e y)^{w-1} X_{q-p} (z X_r)^{w-1}
    _sub(tr, (), 1, tr.s[1:3], _inside_outside_a)  # (e y)^{w-1} X_Q (z e)^{w-1}
    Q = tr.s[1].shift
    # X_Q (z e)^{w-1} <- e (z X_{-Q})^{w-1}
    _sub_reversed(tr, (), 1, (e, _lp(z + (_lp(x, -Q),), -1)), _inside_outside_a)
    # e (z X)^{w-1} -> (e z X)^{w-1}: split X -> X e, rotate, drop the trailing e
    X = _lp(x, -Q)
    _split_right(tr, (2,), len(z))
    tr.apply("R2.5", "RL", (), 1, 3, x=(e,), y=z + (X,), q=-1)
    _absorb_trailing_e(tr, 1)  # (ey)^{w-1} A^{w-1},  A = e z X
    A = (e,) + z + (X,)
    B = A + y + (e,)
    # A^{w-1} -> A^{w-1} e -> A^{w-1} e B^w -> A^{w-1} B^w
    _sub_reversed(tr, (), 1, (_lp(A, -1), e), lambda t: _absorb_trailing_e(t, 0))
    _sub_reversed(tr, (), 2, (e, _lp(B)), _absorb_right)
    _sub(tr, (), 1, tr.s[1:3], lambda t: _absorb_trailing_e(t, 0))
    # A^{w-1} B^w -> A^w y e B^{w-1}
    tr.apply("R2.4b", "RL", (), 2, 3, x=B, n=1, q=-1)
    tr.apply("R2.4a", "LR", (), 1, 2 + len(A), x=A, q=-1, n=1)
    # A^w -> e
    _split_right(tr, (1,), len(A) - 1)
    tr.apply("R.LG", "LR", (), 1, 2, x=x, y=z + (X,))
    # (e y)^{w-1} e y e B^{w-1} -> (e y)^w e B^{w-1} -> e B^{w-1}
    tr.apply("R2.4a", "LR", (), 0, 2 + len(y), x=(e,) + y, q=-1, n=1)
    _sub(tr, (), 0, tr.s[0:2], _absorb_left)
    # e B^{w-1} -> B^{w-1}
    tr.apply("R2.4b", "RL", (), 1, 2, x=B, n=1, q=-2)
    _merge(tr, (), 0)
    tr.apply("R2.4b", "LR", (), 0, len(B) + 1, x=B, n=1, q=-2)


# -- corollary rules ---------------------------------------------------------------


@dataclass(frozen=True)
class _Form:
    """A rewrite of a term into u e M e' v with e, e' the idempotents of its omega-portions."""

    source: Seq
    steps: tuple
    atoms: Seq
    first: int  # index of e
    last: int  # index of e'


def _normal_form(s: Seq) -> _Form:
    from .canon import reduce_rank, semicanonicalize

    tr = Tracer(s)
    if rank_of(s) > 2:
        reduce_rank(tr)
    if rank_of(tr.s) == 2:
        semicanonicalize(tr)
        for side in (0, 1):
            r2 = [k for k, a in enumerate(tr.s) if is_lp(a) and rank_of(a.body) == 1]
            r1 = [k for k, a in enumerate(tr.s) if is_lp(a) and rank_of(a.body) == 0]
            if side == 0 and (not r1 or r2[0] < r1[0]):
                materialize_left(tr, (), r2[0])
            elif side == 1 and r2[-1] > r1[-1]:
                materialize_right(tr, (), r2[-1])
    else:
        canon_rank1_window(tr)
    lps = [k for k, a in enumerate(tr.s) if is_lp(a) and rank_of(a.body) == 0]
    i = lps[0]
    _split_left(tr, (), i)
    j = lps[-1] + 1
    _split_right(tr, (), j)
    return _Form(s, tuple(tr.steps), tr.s, i, j + 1)


def _into(tr: Tracer, path: tuple, parts: list[tuple[int, _Form]]) -> None:
    """Rewrite the slices (offset, form.source) at ``path`` into their forms."""
    for off, f in sorted(parts, key=lambda p: p[0], reverse=True):
        _splice(tr, path, off, list(f.steps))


def _out_of(tr: Tracer, path: tuple, parts: list[tuple[int, _Form]]) -> None:
    """Undo ``_into`` for slices currently holding the forms' atoms."""
    for off, f in sorted(parts, key=lambda p: p[0], reverse=True):
        if _level(tr.s, path)[off : off + len(f.atoms)] != f.atoms:
            raise InternalError("normal form mismatch while undoing")
        _splice(tr, path, off, reverse_steps(f.source, list(f.steps)))


def _c321(tr: Tracer, b: dict) -> None:
    """s (t s)^[w-1] -> t^[w-1]: both share the omega-portions u e and e' v."""
    S_, T_ = _normal_form(b["s"]), _normal_form(b["t"])
    sn, tn = S_.atoms, T_.atoms
    _into(tr, (len(b["s"]),), [(0, T_), (len(b["t"]), S_)])
    _into(tr, (), [(0, S_)])
    i, j = S_.first, S_.last
    u, v, e, e2 = sn[:i], sn[j + 1 :], sn[i], sn[j]
    M, N = sn[i + 1 : j], tn[T_.first + 1 : T_.last]
    w = v + u + (e,) + N + (e2,) + v + u
    k = shift_left(tr, (), len(sn), len(v) + 1)  # u e M (e' w e M)^[w-1] e' v
    tr.apply("D3.4", "LR", (), i, k + 2, x=e.body, p=0, y=M, z=e2.body, q=0, w=w, r=0, s=0)
    tr.apply("D3.4", "RL", (), i, i + 3, x=e.body, p=0, y=N, z=e2.body, q=0, w=w, r=0, s=0)
    shift_right(tr, (), i + 1 + len(N), len(v) + 1)  # tn (tn tn)^[w-1]
    n = len(tn)
    tr.apply("R2.2", "LR", (), n, n + 1, x=tn, n=2, q=-1)
    tr.apply("R2.4b", "LR", (), 0, n + 1, x=tn, n=1, q=-2)
    _out_of(tr, (0,), [(0, T_)])


def _c322(tr: Tracer, b: dict) -> None:
    """s^[w-1] t^[w-1] -> (t t s)^[w-1] t: s and t share the initial portion u e."""
    S_, T_ = _normal_form(b["s"]), _normal_form(b["t"])
    sn, tn = S_.atoms, T_.atoms
    _into(tr, (1,), [(0, T_)])
    _into(tr, (0,), [(0, S_)])
    i = S_.first
    u, e = sn[:i], sn[i]
    s1, t1 = sn[i + 1 :], tn[i + 1 :]
    materialize_right(tr, (), 1)
    shift_right(tr, (), 1, len(u) + 1)
    shift_right(tr, (), 0, len(u))  # u (e s1 u)^[w-1] e (t1 u e t1 u e)^[w-1] t1
    tr.apply("D3.6", "LR", (), i, i + 3, x=e.body, p=0, y=s1 + u, q=0, z=t1 + u + (e,) + t1 + u, r=0)
    _pull_out_right(tr, i)
    shift_left(tr, (), i, len(u))  # (tn tn sn)^[w-1] tn
    _out_of(tr, (), [(1, T_)])
    n = len(tn)
    _out_of(tr, (0,), [(0, T_), (n, T_), (2 * n, S_)])


def _c323(tr: Tracer, b: dict) -> None:
    """s^[w-1] t^[w-1] -> s (t s s)^[w-1]: s and t share the final portion e' v."""
    S_, T_ = _normal_form(b["s"]), _normal_form(b["t"])
    sn, tn = S_.atoms, T_.atoms
    _into(tr, (1,), [(0, T_)])
    _into(tr, (0,), [(0, S_)])
    j = S_.last
    v, e = sn[j + 1 :], sn[j]
    s1, t1 = sn[:j], tn[: T_.last]
    k = materialize_left(tr, (), 0)
    k = shift_left(tr, (), k, len(v) + 1)  # s1 (e v s1 e v s1)^[w-1] e v t^[w-1]
    shift_left(tr, (), k + 2 + len(v), len(v))
    tr.apply("D3.6", "LR", (), k, k + 3, x=e.body, p=0, y=v + s1 + (e,) + v + s1, q=0, z=v + t1, r=0)
    _pull_out_right(tr, k)
    shift_right(tr, (), k, len(v) + 1)  # sn (tn sn sn)^[w-1]
    n, m = len(sn), len(tn)
    _out_of(tr, (n,), [(0, T_), (m, S_), (m + n, S_)])
    _out_of(tr, (), [(0, S_)])


def _pull_out_right(tr: Tracer, k: int) -> None:
    from .canon import _pull_out_idempotent

    _pull_out_idempotent(tr, k, tr.s[k].body[0].body)


CHAINS: dict[str, Callable[[Tracer, dict], None]] = {
    "D3.1": _d31,
    "D3.2": _d32,
    "D3.3a": _d33a,
    "D3.3b": _d33b,
    "D3.4": _d34,
    "D3.5": _d35,
    "D3.6": _d36,
    "C3.2.1": _c321,
    "C3.2.2": _c322,
    "C3.2.3": _c323,
}


def expansion(rule_id: str, b: dict) -> tuple[Seq, list, Seq]:
    """(lhs instance, steps, rhs instance) of a macro rule's left-to-right chain."""
    rule = CATALOG[rule_id]
    lhs = instantiate(rule.lhs, b)
    rhs = instantiate(rule.rhs, b)
    tr = Tracer(lhs)
    CHAINS[rule_id](tr, dict(b))
    if tr.s != rhs:
        raise InternalError(f"{rule_id} expansion ends at the wrong term")
    return lhs, tr.steps, rhs


def expand(cur: Seq, step: RewriteStep) -> list:
    """Steps (with fewer macros) that perform ``step`` on ``cur``."""
    rule = CATALOG[step.rule]
    if not rule.macro:
        return [step]
    b = step.binding_map
    try:
        lhs, steps, rhs = expansion(step.rule, b)
    except KTermError as exc:  # a chain should never fail on a valid instance
        raise InternalError(f"{step.rule} expansion failed: {exc}") from exc
    if step.direction == "RL":
        steps = reverse_steps(lhs, steps)
    pos = step.position
    return [lift(st, pos.path, pos.start) for st in steps]
