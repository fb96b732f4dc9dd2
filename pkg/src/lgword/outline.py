"""q-outlines and q-roots of rank 1 and rank 2 terms.

An outline is a run-length word over portion variables; exponents stay symbolic
as affine forms ``coef*q + offset`` so that reduced roots are independent of q.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from .errors import InternalError, PreconditionError
from .terms import KTerm, Seq, rank_of, seq
from .tactics import is_lp
from .words import is_lyndon

Word = str  # portion words are plain letter strings


def _w(atoms: Seq) -> Word:
    return "".join(atoms)


# -- variables -------------------------------------------------------------------


@dataclass(frozen=True)
class Initial:
    u: Word
    x: Word


@dataclass(frozen=True)
class Final:
    y: Word
    v: Word


@dataclass(frozen=True)
class Crucial:
    x: Word
    u: Word
    y: Word


@dataclass(frozen=True)
class Base:
    x: Word


VVar = Union[Initial, Final, Crucial, Base]


def show_var(v: VVar) -> str:
    e = lambda w: w or "_"  # noqa: E731
    match v:
        case Initial(u, x):
            return f"i{{{e(u)},{x}}}"
        case Final(y, v_):
            return f"t{{{y},{e(v_)}}}"
        case Crucial(x, u, y):
            return f"c{{{x},{e(u)},{y}}}"
        case Base(x):
            return f"b{{{x}}}"
    raise TypeError(v)


# -- exponents -------------------------------------------------------------------


@dataclass(frozen=True)
class AffineExp:
    """coef*q + offset."""

    coef: int = 0
    offset: int = 0

    def __add__(self, o: "AffineExp") -> "AffineExp":
        return AffineExp(self.coef + o.coef, self.offset + o.offset)

    def __neg__(self) -> "AffineExp":
        return AffineExp(-self.coef, -self.offset)

    def __sub__(self, o: "AffineExp") -> "AffineExp":
        return self + (-o)

    def __bool__(self) -> bool:
        return bool(self.coef or self.offset)

    @property
    def sign(self) -> int:
        """Sign for all large enough q."""
        if self.coef:
            return 1 if self.coef > 0 else -1
        return (self.offset > 0) - (self.offset < 0)

    def magnitude(self) -> "AffineExp":
        return self if self.sign >= 0 else -self

    def at(self, q: int) -> int:
        return self.coef * q + self.offset

    def text(self) -> str:
        if not self.coef:
            return "" if self.offset == 1 else f"^{self.offset}"
        c = {1: "q", -1: "-q"}.get(self.coef, f"{self.coef}q")
        if self.offset:
            c += f"{self.offset:+d}"
        return f"^({c})"


ONE = AffineExp(0, 1)


def _cmp_mag(a: AffineExp, b: AffineExp) -> int:
    """Sign of |a| - |b| for all large q."""
    return (a.magnitude() - b.magnitude()).sign


# -- words -----------------------------------------------------------------------


@dataclass(frozen=True)
class Run:
    var: VVar
    exp: AffineExp = ONE

    def text(self) -> str:
        return show_var(self.var) + self.exp.text()


@dataclass(frozen=True)
class OutlineWord:
    runs: tuple = ()
    qmin: int = field(default=1, compare=False)

    def __str__(self) -> str:
        return " ".join(r.text() for r in self.runs)

    def __len__(self) -> int:
        return len(self.runs)

    def __mul__(self, o: "OutlineWord") -> "OutlineWord":
        return OutlineWord(self.runs + o.runs, max(self.qmin, o.qmin))

    def inverse(self) -> "OutlineWord":
        return OutlineWord(tuple(Run(r.var, -r.exp) for r in reversed(self.runs)), self.qmin)


def crucial_length(w: Union[OutlineWord, Iterable[Run]]) -> int:
    runs = w.runs if isinstance(w, OutlineWord) else w
    n = 0
    for r in runs:
        if isinstance(r.var, Crucial):
            if r.exp.coef:
                raise InternalError("crucial run with a symbolic exponent")
            n += abs(r.exp.offset)
    return n


# -- construction ----------------------------------------------------------------


def q_param(t: KTerm) -> int:
    """1 + the largest |q| among the exponents w+q of t."""

    def walk(s: Seq) -> int:
        m = 0
        for a in s:
            if is_lp(a):
                m = max(m, abs(a.shift), walk(a.body))
        return m

    return 1 + walk(seq(t))


def _rank1_config(s: Seq) -> tuple[list[Word], list[tuple[Word, int]]]:
    words: list[Word] = []
    powers: list[tuple[Word, int]] = []
    cur: list = []
    for a in s:
        if is_lp(a):
            if rank_of(a.body) != 0 or not is_lyndon(a.body):
                raise PreconditionError("outline needs Lyndon bases")
            words.append(_w(tuple(cur)))
            powers.append((_w(a.body), a.shift))
            cur = []
        else:
            cur.append(a)
    words.append(_w(tuple(cur)))
    return words, powers


def _tagged_outline(t: KTerm) -> list[tuple[Run, int]]:
    """Outline runs tagged with their block index (even: positive, odd: negative)."""
    from .canon import is_canonical_rank1_seq, is_semicanonical_seq

    s = seq(t)
    r = rank_of(s)
    if r == 0 or r > 2:
        raise PreconditionError("outlines are defined for rank 1 and rank 2 terms")
    if r == 1 and not is_canonical_rank1_seq(s):
        raise PreconditionError("rank 1 outline needs a canonical form")
    if r == 2:
        if not is_semicanonical_seq(s):
            raise PreconditionError("rank 2 outline needs a semi-canonical form")
        if any(is_lp(a) and rank_of(a.body) == 1 and a.shift != -1 for a in s):
            raise PreconditionError("rank 2 outline needs every rank 2 exponent to be w-1")

    out: list[tuple[Run, int]] = []
    block = 0
    pending = ""
    prev: Optional[Word] = None

    def join(x: Word) -> None:
        v = Initial(pending, x) if prev is None else Crucial(prev, pending, x)
        out.append((Run(v), block))

    for a in s:
        if not is_lp(a):
            pending += a
        elif rank_of(a.body) == 0:
            x = _w(a.body)
            if not is_lyndon(a.body):
                raise PreconditionError("outline needs Lyndon bases")
            join(x)
            out.append((Run(Base(x), AffineExp(1, a.shift)), block))
            prev, pending = x, ""
        else:
            words, powers = _rank1_config(a.body)
            u0, un = words[0], words[-1]
            pending += u0
            join(powers[0][0])
            block += 1
            wrap = Run(Crucial(powers[-1][0], un + u0, powers[0][0]), -ONE)
            out.append((wrap, block))
            for j in range(len(powers) - 1, -1, -1):
                x, q = powers[j]
                out.append((Run(Base(x), AffineExp(-1, -q)), block))
                if j:
                    out.append((Run(Crucial(powers[j - 1][0], words[j], x), -ONE), block))
            out.append((wrap, block))
            block += 1
            prev, pending = powers[-1][0], un
    out.append((Run(Final(prev, pending)), block))
    return out


def outline(t: KTerm) -> OutlineWord:
    return OutlineWord(tuple(r for r, _ in _tagged_outline(t)), q_param(t))


def reduce_free(w: OutlineWord) -> OutlineWord:
    """Reduced form in the free group over the variables (runs of a variable merged)."""
    stack: list[Run] = []
    for r in w.runs:
        e = r.exp
        if stack and stack[-1].var == r.var:
            e = stack.pop().exp + e
        if e:
            if e.coef and -e.offset % e.coef == 0 and -e.offset // e.coef >= w.qmin:
                raise InternalError(f"exponent {e.text()} may vanish for an admissible q")
            stack.append(Run(r.var, e))
    return OutlineWord(tuple(stack), w.qmin)


def root(t: KTerm) -> OutlineWord:
    return reduce_free(outline(t))


def instantiate(w: OutlineWord, qval: int) -> OutlineWord:
    """Replace q by ``qval`` in every exponent; zero runs are dropped."""
    if qval < w.qmin:
        raise PreconditionError(f"q = {qval} is below the bound {w.qmin}")
    runs = tuple(Run(r.var, AffineExp(0, r.exp.at(qval))) for r in w.runs if r.exp.at(qval))
    return OutlineWord(runs, w.qmin)


# -- block analysis ----------------------------------------------------------------


@dataclass
class BlockAnalysis:
    blocks: list  # OutlineWords w_j
    remainders: list  # OutlineWords r_j
    cancelled_prefixes: list
    cancelled_suffixes: list
    d: list
    d_left: list
    d_right: list

    @property
    def m(self) -> int:
        return len(self.blocks) // 2

    def negative_remainders(self) -> int:
        return sum(1 for j in range(1, len(self.blocks), 2) if self.remainders[j].runs)


@dataclass
class _Item:
    var: VVar
    exp: AffineExp
    block: int
    idx: int  # position in the outline


def block_analysis(t: KTerm) -> BlockAnalysis:
    """Leftmost-spur reduction of the outline, with the cancellations attributed to blocks."""
    from .canon import is_canonical_LG

    if rank_of(seq(t)) != 2 or not is_canonical_LG(t):
        raise PreconditionError("block analysis needs a rank 2 canonical form")
    tagged = _tagged_outline(t)
    nblocks = tagged[-1][1] + 1
    left = [AffineExp()] * len(tagged)  # amount of each run cancelled from the left
    right = [AffineExp()] * len(tagged)
    stack: list[_Item] = []
    for idx, (r, blk) in enumerate(tagged):
        e = r.exp
        while e and stack and stack[-1].var == r.var and stack[-1].exp.sign != e.sign:
            top = stack[-1]
            c = _cmp_mag(top.exp, e)
            amount = top.exp.magnitude() if c <= 0 else e.magnitude()
            signed = amount if e.sign > 0 else -amount  # the part of e that cancels
            left[idx] = left[idx] + signed
            right[top.idx] = right[top.idx] - signed
            e = e - signed
            top.exp = top.exp + signed
            if not top.exp:
                stack.pop()
        if e:
            stack.append(_Item(r.var, e, blk, idx))

    def word(runs) -> OutlineWord:
        return OutlineWord(tuple(x for x in runs if x.exp), q_param(t))

    blocks, pre, suf = [], [], []
    dl, dr = [0] * nblocks, [0] * nblocks
    for j in range(nblocks):
        ids = [i for i, (_, b) in enumerate(tagged) if b == j]
        blocks.append(word(tagged[i][0] for i in ids))
        pre.append(word(Run(tagged[i][0].var, left[i]) for i in ids))
        suf.append(word(Run(tagged[i][0].var, right[i]) for i in ids))
        dl[j] = crucial_length(pre[j])
        dr[j] = crucial_length(suf[j])
    rem = [word(Run(it.var, it.exp) for it in stack if it.block == j) for j in range(nblocks)]
    return BlockAnalysis(blocks, rem, pre, suf, [a + b for a, b in zip(dl, dr)], dl, dr)


def parse_outline(text: str) -> OutlineWord:
    """Inverse of ``str(OutlineWord)`` (used by tests and the API)."""
    import re

    tok = re.compile(r"([itcb])\{([^}]*)\}(?:\^(\(([-+]?\d*)q([-+]\d+)?\)|-?\d+))?$")
    runs = []
    for part in text.split():
        m = tok.match(part)
        if not m:
            raise PreconditionError(f"bad outline token {part!r}")
        kind, args, _, coef, off = m.group(1), m.group(2), m.group(3), m.group(4), m.group(5)
        fields = [("" if a == "_" else a) for a in args.split(",")]
        var = {"i": Initial, "t": Final, "c": Crucial, "b": Base}[kind](*fields)
        exp_txt = m.group(3)
        if exp_txt is None:
            exp = ONE
        elif exp_txt.startswith("("):
            c = {"": 1, "+": 1, "-": -1}.get(coef, None)
            exp = AffineExp(int(coef) if c is None else c, int(off or 0))
        else:
            exp = AffineExp(0, int(exp_txt))
        runs.append(Run(var, exp))
    return OutlineWord(tuple(runs))
