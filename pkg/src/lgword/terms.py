"""kappa-bar terms: AST, normalization, parsing/printing and structural measures.

Internally most algorithms work on *atom sequences*: tuples whose items are
single letters (``str`` of length 1) or ``LimitPower`` nodes.  A normalized
``KTerm`` and its atom sequence determine each other, so structural equality of
terms is equality of atom sequences.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from .errors import ExponentOverflow, PreconditionError, TermSyntaxError

MAX_SHIFT = 2**31 - 1


def check_shift(q: int) -> int:
    if abs(q) > MAX_SHIFT:
        raise ExponentOverflow(f"exponent shift {q} exceeds 2^31-1 in magnitude")
    return q


@dataclass(frozen=True)
class Word:
    letters: str
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.letters:
            raise ValueError("Word must be non-empty")
        object.__setattr__(self, "_hash", hash(("W", self.letters)))

    def __hash__(self):
        return self._hash

    @property
    def atoms(self) -> tuple:
        return tuple(self.letters)

    @property
    def rank(self) -> int:
        return 0

    def __str__(self):
        return show(self)


@dataclass(frozen=True)
class LimitPower:
    """``base^{ω+shift}``."""

    base: "KTerm"
    shift: int
    _hash: int = field(init=False, repr=False, compare=False)
    _rank: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        check_shift(self.shift)
        object.__setattr__(self, "_hash", hash(("L", self.base, self.shift)))
        object.__setattr__(self, "_rank", self.base.rank + 1)

    def __hash__(self):
        return self._hash

    @property
    def atoms(self) -> tuple:
        return (self,)

    @property
    def body(self) -> tuple:
        """Atom sequence of the base."""
        return self.base.atoms

    @property
    def rank(self) -> int:
        return self._rank

    def __str__(self):
        return show(self)


@dataclass(frozen=True)
class Product:
    children: tuple
    _hash: int = field(init=False, repr=False, compare=False)
    _rank: int = field(init=False, repr=False, compare=False)
    _atoms: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("P", self.children)))
        object.__setattr__(self, "_rank", max(c.rank for c in self.children))
        atoms: tuple = ()
        for c in self.children:
            atoms += c.atoms
        object.__setattr__(self, "_atoms", atoms)

    def __hash__(self):
        return self._hash

    @property
    def atoms(self) -> tuple:
        return self._atoms

    @property
    def rank(self) -> int:
        return self._rank

    def __str__(self):
        return show(self)


KTerm = Union[Word, Product, LimitPower]
Atom = Union[str, LimitPower]
Seq = tuple


def seq(t: Optional[KTerm]) -> Seq:
    return () if t is None else t.atoms


def build(atoms: Iterable[Atom]) -> Optional[KTerm]:
    """Normalize an atom sequence into a KTerm (``None`` for the empty sequence)."""
    children: list = []
    run: list[str] = []
    for a in atoms:
        if isinstance(a, str):
            run.append(a)
            continue
        if run:
            children.append(Word("".join(run)))
            run = []
        children.append(a)
    if run:
        children.append(Word("".join(run)))
    if not children:
        return None
    if len(children) == 1:
        return children[0]
    return Product(tuple(children))


def power(base: Iterable[Atom], q: int = 0) -> LimitPower:
    b = build(base)
    if b is None:
        raise ValueError("limit power with empty base")
    return LimitPower(b, q)


def lp(base: Iterable[Atom], q: int = 0) -> Seq:
    """One-atom sequence holding ``base^{ω+q}``."""
    return (power(base, q),)


def rank_of(s: Seq) -> int:
    return max((a.rank for a in s if not isinstance(a, str)), default=0)


def rank(t: Optional[KTerm]) -> int:
    return 0 if t is None else t.rank


def letters(*terms: Optional[KTerm]) -> str:
    """Sorted alphabet of the letters occurring in the terms."""
    out: set[str] = set()

    def walk(s: Seq):
        for a in s:
            if isinstance(a, str):
                out.add(a)
            else:
                walk(a.body)

    for t in terms:
        walk(seq(t))
    return "".join(sorted(out))


# -- printing ---------------------------------------------------------------


def _pow_text(q: int) -> str:
    if q == 0:
        return "^[w]"
    return f"^[w{q:+d}]"


def show_seq(s: Seq) -> str:
    parts = []
    for a in s:
        if isinstance(a, str):
            parts.append(a)
        elif isinstance(a.base, Word) and len(a.base.letters) == 1:
            parts.append(a.base.letters + _pow_text(a.shift))
        else:
            parts.append("(" + show_seq(a.body) + ")" + _pow_text(a.shift))
    return "".join(parts)


def show(t: Optional[KTerm]) -> str:
    return show_seq(seq(t))


# -- parsing ----------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.i = 0

    def peek(self) -> str:
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1
        return self.text[self.i] if self.i < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            got = self.peek() or "end of input"
            raise TermSyntaxError(f"expected {ch!r}, got {got!r}", self.i)
        self.i += 1

    def nat(self) -> int:
        self.peek()
        start = self.i
        while self.i < len(self.text) and self.text[self.i].isdigit():
            self.i += 1
        if start == self.i:
            raise TermSyntaxError("expected a number", start)
        value = int(self.text[start:self.i])
        if value > MAX_SHIFT:
            raise ExponentOverflow(f"exponent {value} exceeds 2^31-1 (position {start})")
        return value

    def term(self) -> Seq:
        out: list = []
        while (c := self.peek()) and c != ")":
            out.extend(self.factor())
        if not out:
            raise TermSyntaxError("empty term", self.i)
        return tuple(out)

    def factor(self) -> Seq:
        c = self.peek()
        if "a" <= c <= "z":
            self.i += 1
            base: Seq = (c,)
            if self.peek() != "^":
                return base
        elif c == "(":
            self.i += 1
            base = self.term()
            self.expect(")")
            if self.peek() != "^":
                raise TermSyntaxError("parenthesized term needs a power", self.i)
        else:
            raise TermSyntaxError(f"unexpected {c!r}", self.i)
        return self.power(base)

    def power(self, base: Seq) -> Seq:
        self.expect("^")
        if self.peek() == "[":
            self.i += 1
            self.expect("w")
            q = 0
            sign = self.peek()
            if sign and sign in "+-":
                self.i += 1
                q = self.nat() * (1 if sign == "+" else -1)
            self.expect("]")
            return lp(base, q)
        pos = self.i
        k = self.nat()
        if k < 2:
            raise TermSyntaxError("finite power must be at least 2", pos)
        return base * k


def parse(text: str) -> KTerm:
    p = _Parser(text)
    if not p.peek():
        raise TermSyntaxError("empty input", 0)
    s = p.term()
    if p.peek():
        raise TermSyntaxError(f"unexpected {p.peek()!r}", p.i)
    t = build(s)
    assert t is not None
    return t


def parse_seq(text: str) -> Seq:
    return seq(parse(text))


# -- rank configuration and expansions ----------------------------------------


def top_split(s: Seq, r: Optional[int] = None) -> tuple[list[Seq], list[LimitPower]]:
    """Split at rank ``r`` (default: the rank of ``s``) into words rho_j and limit powers."""
    r = rank_of(s) if r is None else r
    rhos: list[Seq] = []
    lps: list[LimitPower] = []
    cur: list = []
    for a in s:
        if not isinstance(a, str) and a.rank == r:
            rhos.append(tuple(cur))
            lps.append(a)
            cur = []
        else:
            cur.append(a)
    rhos.append(tuple(cur))
    return rhos, lps


@dataclass(frozen=True)
class RankConfig:
    rho: tuple
    pi: tuple
    shifts: tuple
    r: int
    n: int

    def assemble(self) -> Optional[KTerm]:
        out: tuple = seq(self.rho[0])
        for p, q, rho in zip(self.pi, self.shifts, self.rho[1:]):
            out += (LimitPower(p, q),) + seq(rho)
        return build(out)


def rank_configuration(t: KTerm) -> RankConfig:
    r = rank(t)
    if r == 0:
        raise PreconditionError("rank configuration needs a term of rank >= 1")
    rhos, lps = top_split(seq(t), r)
    return RankConfig(
        rho=tuple(build(x) for x in rhos),
        pi=tuple(x.base for x in lps),
        shifts=tuple(x.shift for x in lps),
        r=r,
        n=len(lps),
    )


def expand_seq(s: Seq, p: int) -> Seq:
    r = rank_of(s)
    out: list = []
    for a in s:
        if not isinstance(a, str) and a.rank == r:
            out.extend(a.body * p)
        else:
            out.append(a)
    return tuple(out)


def p_expansion(t: KTerm, p: int) -> KTerm:
    if rank(t) == 0:
        raise PreconditionError("p-expansion needs a term of rank >= 1")
    if p < 1:
        raise ValueError("p must be positive")
    out = build(expand_seq(seq(t), p))
    assert out is not None
    return out


# -- omega-portions ----------------------------------------------------------


@dataclass(frozen=True)
class Portions:
    initial: Seq
    crucials: tuple
    final: Seq


def portions_seq(s: Seq) -> Portions:
    """Omega-portions of a rank-1 or rank-2 atom sequence (as atom sequences)."""
    r = rank_of(s)
    if r == 2:
        s = expand_seq(s, 2)
    elif r != 1:
        raise PreconditionError(f"omega-portions need rank 1 or 2, got {r}")
    rhos, lps = top_split(s, 1)
    omegas = [LimitPower(x.base, 0) for x in lps]
    crucials: list[Seq] = []
    for j in range(len(lps) - 1):
        c = (omegas[j],) + rhos[j + 1] + (omegas[j + 1],)
        if c not in crucials:
            crucials.append(c)
    return Portions(rhos[0] + (omegas[0],), tuple(crucials), (omegas[-1],) + rhos[-1])


def omega_portions(t: KTerm) -> tuple[KTerm, list[KTerm], KTerm]:
    p = portions_seq(seq(t))
    return build(p.initial), [build(c) for c in p.crucials], build(p.final)


def final_omega2_portion(t: KTerm) -> Optional[KTerm]:
    s = seq(t)
    if rank_of(s) != 1:
        raise PreconditionError("final omega2-portion needs a rank-1 term")
    rhos, lps = top_split(s, 1)
    if len(lps) < 2 or lps[-1].shift != 0:
        return None
    return build(lp(lps[-2].body) + rhos[-2] + lp(lps[-1].body) + rhos[-1])
