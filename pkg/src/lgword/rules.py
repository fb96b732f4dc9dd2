"""The identity catalog, syntactic matching, single steps and derivations.

Rule sides are small patterns over atom sequences:

* ``V("x")`` binds a non-empty factor (``V("x", optional=True)`` may bind ε);
* ``Rep("x", "n")`` matches ``n >= 1`` consecutive copies of ``x``;
* ``Pw(items, exp)`` matches one limit power whose base matches ``items`` and
  whose shift matches the exponent expression ``exp``.

A position is a path of atom indices descending through limit-power bases,
followed by a half-open slice of the innermost atom sequence.  Working on
letters individually lets a step cut a word anywhere, which is how matching
modulo associativity is realized.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Union

from .errors import KTermError, MatchFailure
from .terms import (
    KTerm,
    LimitPower,
    Seq,
    build,
    check_shift,
    parse_seq,
    power,
    rank_of,
    seq,
    show,
    show_seq,
)

Value = Union[Seq, int]
Bindings = dict


# -- exponent expressions ----------------------------------------------------


@dataclass(frozen=True)
class Lin:
    """const + sum(coef * param)."""

    const: int = 0
    coefs: tuple = ()

    def eval(self, b: Bindings) -> int:
        return check_shift(self.const + sum(c * b[p] for p, c in self.coefs))

    def params(self) -> set[str]:
        return {p for p, _ in self.coefs}

    def solve(self, value: int, b: Bindings) -> Iterator[Bindings]:
        unknown = [(p, c) for p, c in self.coefs if p not in b]
        known = self.const + sum(c * b[p] for p, c in self.coefs if p in b)
        if not unknown:
            if known == value:
                yield b
        elif len(unknown) == 1 and unknown[0][1] in (1, -1):
            p, c = unknown[0]
            yield {**b, p: (value - known) * c}


@dataclass(frozen=True)
class Mul:
    """Product of two parameters, as in the exponents of R2.1 and R2.2."""

    a: str
    b: str

    def eval(self, b: Bindings) -> int:
        return check_shift(b[self.a] * b[self.b])

    def params(self) -> set[str]:
        return {self.a, self.b}

    def solve(self, value: int, b: Bindings) -> Iterator[Bindings]:
        x, y = b.get(self.a), b.get(self.b)
        if x is not None and y is not None:
            if x * y == value:
                yield b
        elif x is not None or y is not None:
            k = x if x is not None else y
            other = self.b if x is not None else self.a
            if k != 0 and value % k == 0:
                yield {**b, other: value // k}


def E(const: int = 0, **coefs: int) -> Lin:
    return Lin(const, tuple(sorted(coefs.items())))


P = lambda name: E(**{name: 1})  # noqa: E731


# -- patterns ---------------------------------------------------------------


@dataclass(frozen=True)
class V:
    name: str
    optional: bool = False


@dataclass(frozen=True)
class Rep:
    name: str
    count: str


@dataclass(frozen=True)
class Pw:
    items: tuple
    exp: Union[Lin, Mul]


Pattern = tuple


def pw(*items, exp=E()) -> Pw:
    return Pw(tuple(items), exp)


def _match(items: Pattern, i: int, s: Seq, j: int, b: Bindings) -> Iterator[Bindings]:
    if i == len(items):
        if j == len(s):
            yield b
        return
    it = items[i]
    match it:
        case V(name, optional):
            if name in b:
                val = b[name]
                if s[j : j + len(val)] == val:
                    yield from _match(items, i + 1, s, j + len(val), b)
                return
            lo = j if optional else j + 1
            for k in range(lo, len(s) + 1):
                yield from _match(items, i + 1, s, k, {**b, name: s[j:k]})
        case Rep(name, count):
            if name in b:
                val = b[name]
                if not val:
                    return
                k, n = j, 0
                while s[k : k + len(val)] == val:
                    k += len(val)
                    n += 1
                    if count in b and b[count] != n:
                        continue
                    yield from _match(items, i + 1, s, k, {**b, count: n})
                return
            for k in range(j + 1, len(s) + 1):
                chunk = s[j:k]
                for d in range(1, len(chunk) + 1):
                    if len(chunk) % d == 0 and chunk[:d] * (len(chunk) // d) == chunk:
                        n = len(chunk) // d
                        if count in b and b[count] != n:
                            continue
                        yield from _match(items, i + 1, s, k, {**b, name: chunk[:d], count: n})
        case Pw(sub, exp):
            if j >= len(s) or isinstance(s[j], str):
                return
            a: LimitPower = s[j]
            for b1 in _match(sub, 0, a.body, 0, b):
                for b2 in exp.solve(a.shift, b1):
                    yield from _match(items, i + 1, s, j + 1, b2)


def instantiate(items: Pattern, b: Bindings) -> Seq:
    out: list = []
    for it in items:
        match it:
            case V(name, _):
                out.extend(b[name])
            case Rep(name, count):
                out.extend(b[name] * b[count])
            case Pw(sub, exp):
                body = instantiate(sub, b)
                if not body:
                    raise MatchFailure("limit power with empty base")
                out.append(power(body, exp.eval(b)))
    return tuple(out)


def pattern_names(items: Pattern) -> tuple[set[str], set[str]]:
    """(term metavariables, integer parameters) occurring in a pattern."""
    tv: set[str] = set()
    iv: set[str] = set()
    for it in items:
        match it:
            case V(name, _):
                tv.add(name)
            case Rep(name, count):
                tv.add(name)
                iv.add(count)
            case Pw(sub, exp):
                a, c = pattern_names(sub)
                tv |= a
                iv |= c | exp.params()
    return tv, iv


# -- the catalog -------------------------------------------------------------


@dataclass(frozen=True)
class SigmaRule:
    id: str
    lhs: Pattern
    rhs: Pattern
    text: str
    cond: Optional[Callable[[Bindings], bool]] = field(default=None, compare=False)
    macro: bool = False

    def sides(self, direction: str) -> tuple[Pattern, Pattern]:
        return (self.lhs, self.rhs) if direction == "LR" else (self.rhs, self.lhs)

    @property
    def variables(self) -> tuple[set[str], set[str]]:
        a1, b1 = pattern_names(self.lhs)
        a2, b2 = pattern_names(self.rhs)
        return a1 | a2, b1 | b2

    def ok(self, b: Bindings) -> bool:
        return self.cond is None or self.cond(b)


def _nat(*names):
    return lambda b: all(b[n] >= 1 for n in names)


def _has_rank(name):
    return lambda b: rank_of(b[name]) >= 1


def _variety(kind):
    def cond(b):
        from .canon import variety_equal_seq  # late import: canon builds on this module

        s, t = b["s"], b["t"]
        return rank_of(s) >= 1 and rank_of(t) >= 1 and variety_equal_seq(t, s, kind)

    return cond


x, y, z, w = V("x"), V("y"), V("z"), V("w")
yo, wo = V("y", True), V("w", True)
sg, ta = V("s"), V("t")

CATALOG: dict[str, SigmaRule] = {
    r.id: r
    for r in [
        SigmaRule("R2.1", (pw(pw(x, exp=P("p")), exp=P("q")),), (pw(x, exp=Mul("p", "q")),),
                  "(x^[w+p])^[w+q] = x^[w+pq]"),
        SigmaRule("R2.2", (pw(Rep("x", "n"), exp=P("q")),), (pw(x, exp=Mul("n", "q")),),
                  "(x^n)^[w+q] = x^[w+nq]", _nat("n")),
        SigmaRule("R2.3", (pw(x, exp=P("p")), pw(x, exp=P("q"))), (pw(x, exp=E(p=1, q=1)),),
                  "x^[w+p]x^[w+q] = x^[w+p+q]"),
        SigmaRule("R2.4a", (pw(x, exp=P("q")), Rep("x", "n")), (pw(x, exp=E(q=1, n=1)),),
                  "x^[w+q]x^n = x^[w+q+n]", _nat("n")),
        SigmaRule("R2.4b", (Rep("x", "n"), pw(x, exp=P("q"))), (pw(x, exp=E(q=1, n=1)),),
                  "x^n x^[w+q] = x^[w+q+n]", _nat("n")),
        SigmaRule("R2.5", (pw(x, y, exp=P("q")), x), (x, pw(y, x, exp=P("q"))),
                  "(xy)^[w+q]x = x(yx)^[w+q]"),
        SigmaRule("R.LG", (pw(pw(x), y, pw(x)),), (pw(x),), "(x^[w]yx^[w])^[w] = x^[w]"),
        SigmaRule("D3.1", (pw(x, exp=E(1)),), (x,), "x^[w+1] = x  (x of rank >= 1)",
                  _has_rank("x"), macro=True),
        SigmaRule("D3.2", (pw(x, exp=P("p")), pw(yo, pw(x, exp=P("q")))), (pw(x, exp=P("p")),),
                  "x^[w+p](yx^[w+q])^[w] = x^[w+p]", macro=True),
        SigmaRule("D3.3a", (pw(x, exp=P("p")), pw(y, pw(x, exp=P("q")), exp=E(-1))),
                  (pw(x, exp=E(p=1, q=-1)), pw(y, pw(x), exp=E(-1))),
                  "x^[w+p](yx^[w+q])^[w-1] = x^[w+p-q](yx^[w])^[w-1]", macro=True),
        SigmaRule("D3.3b", (pw(pw(x, exp=P("q")), y, exp=E(-1)), pw(x, exp=P("p"))),
                  (pw(pw(x), y, exp=E(-1)), pw(x, exp=E(p=1, q=-1))),
                  "(x^[w+q]y)^[w-1]x^[w+p] = (x^[w]y)^[w-1]x^[w+p-q]", macro=True),
        SigmaRule("D3.4",
                  (pw(x, exp=P("p")), yo, pw(pw(z, exp=P("q")), wo, pw(x, exp=P("r")), yo, exp=E(-1)),
                   pw(z, exp=P("s"))),
                  (pw(x, exp=E(p=1, r=-1)), pw(pw(z), wo, pw(x), exp=E(-1)), pw(z, exp=E(s=1, q=-1))),
                  "x^[w+p]y(z^[w+q]wx^[w+r]y)^[w-1]z^[w+s] = x^[w+p-r](z^[w]wx^[w])^[w-1]z^[w+s-q]",
                  macro=True),
        SigmaRule("D3.5", (pw(x, exp=P("p")), y, pw(pw(x, exp=P("q")), y, exp=E(-1)), pw(x, exp=P("r"))),
                  (pw(x, exp=E(p=1, q=-1, r=1)),),
                  "x^[w+p]y(x^[w+q]y)^[w-1]x^[w+r] = x^[w+p-q+r]", macro=True),
        SigmaRule("D3.6",
                  (pw(pw(x, exp=P("p")), y, exp=E(-1)), pw(x, exp=P("q")), pw(z, pw(x, exp=P("r")), exp=E(-1))),
                  (pw(pw(x), z, pw(x, exp=E(p=1, q=-1, r=1)), y, pw(x), exp=E(-1)),),
                  "(x^[w+p]y)^[w-1]x^[w+q](zx^[w+r])^[w-1] = (x^[w]zx^[w+p-q+r]yx^[w])^[w-1]",
                  macro=True),
        SigmaRule("C3.2.1", (sg, pw(ta, sg, exp=E(-1))), (pw(ta, exp=E(-1)),),
                  "s(ts)^[w-1] = t^[w-1]  if LI |= t=s", _variety("LI"), macro=True),
        SigmaRule("C3.2.2", (pw(sg, exp=E(-1)), pw(ta, exp=E(-1))), (pw(ta, ta, sg, exp=E(-1)), ta),
                  "s^[w-1]t^[w-1] = (tts)^[w-1]t  if K |= t=s", _variety("K"), macro=True),
        SigmaRule("C3.2.3", (pw(sg, exp=E(-1)), pw(ta, exp=E(-1))), (sg, pw(ta, sg, sg, exp=E(-1))),
                  "s^[w-1]t^[w-1] = s(tss)^[w-1]  if D |= t=s", _variety("D"), macro=True),
    ]
}

PRIMITIVE = ("R2.1", "R2.2", "R2.3", "R2.4a", "R2.4b", "R2.5", "R.LG")


# -- positions, steps, derivations ---------------------------------------------


@dataclass(frozen=True)
class Position:
    path: tuple = ()
    start: int = 0
    end: int = 0

    def __str__(self):
        return "@" + ".".join(map(str, self.path)) + f"[{self.start}:{self.end}]"

    @classmethod
    def parse(cls, text: str) -> "Position":
        m = re.fullmatch(r"@((?:\d+)(?:\.\d+)*)?\[(\d+):(\d+)\]", text)
        if not m:
            raise KTermError(f"bad position {text!r}")
        path = tuple(int(p) for p in m.group(1).split(".")) if m.group(1) else ()
        return cls(path, int(m.group(2)), int(m.group(3)))


@dataclass(frozen=True)
class RewriteStep:
    rule: str
    direction: str  # "LR" contracts lhs -> rhs, "RL" expands rhs -> lhs
    position: Position
    bindings: tuple  # sorted (name, value) pairs

    @property
    def binding_map(self) -> Bindings:
        return dict(self.bindings)

    def reversed(self, new_end: int) -> "RewriteStep":
        pos = Position(self.position.path, self.position.start, new_end)
        return RewriteStep(self.rule, "RL" if self.direction == "LR" else "LR", pos, self.bindings)

    def __str__(self):
        parts = []
        for k, v in self.bindings:
            parts.append(f"{k}={v}" if isinstance(v, int) else f"{k}={show_seq(v) or '_'}")
        return f"{self.rule} {self.direction} {self.position} {','.join(parts) or '-'}"

    @classmethod
    def parse(cls, line: str) -> "RewriteStep":
        fields = line.split()
        if len(fields) != 4:
            raise KTermError(f"bad step line {line!r}")
        rule, direction, pos, binds = fields
        if rule not in CATALOG or direction not in ("LR", "RL"):
            raise KTermError(f"bad step line {line!r}")
        b: dict = {}
        if binds != "-":
            for item in binds.split(","):
                k, _, v = item.partition("=")
                if re.fullmatch(r"-?\d+", v):
                    b[k] = int(v)
                else:
                    b[k] = () if v == "_" else parse_seq(v)
        return cls(rule, direction, Position.parse(pos), tuple(sorted(b.items())))


def make_step(rule: str, direction: str, position: Position, b: Bindings) -> RewriteStep:
    return RewriteStep(rule, direction, position, tuple(sorted(b.items())))


def _locate(s: Seq, pos: Position) -> Seq:
    cur = s
    for i in pos.path:
        if not (0 <= i < len(cur)) or isinstance(cur[i], str):
            raise KTermError(f"invalid position {pos}")
        cur = cur[i].body
    if not (0 <= pos.start < pos.end <= len(cur)):
        raise KTermError(f"invalid position {pos}")
    return cur


def _replace(s: Seq, path: tuple, start: int, end: int, new: Seq) -> Seq:
    if not path:
        return s[:start] + new + s[end:]
    i = path[0]
    a: LimitPower = s[i]
    inner = _replace(a.body, path[1:], start, end, new)
    return s[:i] + (power(inner, a.shift),) + s[i + 1 :]


def match_seq(s: Seq, rule: SigmaRule, direction: str, position: Position,
              hints: Optional[Bindings] = None) -> Optional[Bindings]:
    sub = _locate(s, position)[position.start : position.end]
    src, dst = rule.sides(direction)
    tv, iv = rule.variables
    for b in _match(src, 0, sub, 0, dict(hints or {})):
        if not (tv | iv) <= b.keys():
            continue
        try:
            if rule.ok(b) and instantiate(dst, b):
                return b
        except KTermError:
            continue
    return None


def match_rule(t: KTerm, rule: Union[str, SigmaRule], direction: str, position: Optional[Position] = None,
               hints: Optional[Bindings] = None) -> Optional[Bindings]:
    rule = CATALOG[rule] if isinstance(rule, str) else rule
    s = seq(t)
    position = position or Position((), 0, len(s))
    return match_seq(s, rule, direction, position, hints)


def apply_seq(s: Seq, step: RewriteStep) -> Seq:
    rule = CATALOG.get(step.rule)
    if rule is None:
        raise MatchFailure(f"unknown rule {step.rule}")
    b = step.binding_map
    tv, iv = rule.variables
    if not (tv | iv) <= b.keys():
        raise MatchFailure(f"{step.rule}: incomplete bindings")
    sub = _locate(s, step.position)[step.position.start : step.position.end]
    src, dst = rule.sides(step.direction)
    if instantiate(src, b) != sub:
        raise MatchFailure(f"{step.rule} {step.direction}: pattern does not match at {step.position}")
    if not rule.ok(b):
        raise MatchFailure(f"{step.rule}: side condition fails")
    new = instantiate(dst, b)
    pos = step.position
    return _replace(s, pos.path, pos.start, pos.end, new)


def apply_step(t: KTerm, step: RewriteStep) -> KTerm:
    out = build(apply_seq(seq(t), step))
    assert out is not None
    return out


@dataclass
class Derivation:
    source: KTerm
    steps: list
    target: KTerm

    def text(self) -> str:
        lines = [f"source {show(self.source)}", f"target {show(self.target)}"]
        lines += [str(st) for st in self.steps]
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "Derivation":
        source = target = None
        steps = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("source "):
                source = build(parse_seq(line[7:]))
            elif line.startswith("target "):
                target = build(parse_seq(line[7:]))
            else:
                steps.append(RewriteStep.parse(line))
        if source is None or target is None:
            raise KTermError("derivation needs 'source' and 'target' lines")
        return cls(source, steps, target)


def replay(source: Seq, steps: list) -> Seq:
    cur = source
    for st in steps:
        cur = apply_seq(cur, st)
    return cur


def verify_derivation(d: Derivation) -> bool:
    try:
        return replay(seq(d.source), d.steps) == seq(d.target)
    except (KTermError, KeyError, IndexError):
        return False


def flatten(source: Seq, steps: list) -> list:
    """Replace every macro step by its stored primitive expansion."""
    from .macros import expand  # late import: expansions reuse the canonicalizer tools

    out = []
    cur = source
    for st in steps:
        if CATALOG[st.rule].macro:
            out.extend(flatten(cur, expand(cur, st)))
        else:
            out.append(st)
        cur = apply_seq(cur, st)
    return out
