"""Random kappa-bar terms and random Sigma-preserving perturbations (for testing)."""

from __future__ import annotations

import random
from typing import Optional

from .errors import KTermError
from .rules import RewriteStep
from .tactics import Tracer, is_lp
from .terms import KTerm, LimitPower, Seq, build, power, rank_of, seq


def random_seq(rng: random.Random, alphabet: str, rank: int, size: int = 4, shift: int = 3) -> Seq:
    """A random atom sequence of exactly the given rank."""
    if rank == 0:
        return tuple(rng.choice(alphabet) for _ in range(rng.randint(1, max(1, size))))
    out: list = []
    n = rng.randint(1, max(1, size // 2))
    top = rng.randrange(n)
    for i in range(n):
        if rng.random() < 0.5:
            out.extend(random_seq(rng, alphabet, 0, max(1, size // 2)))
        r = rank if i == top else rng.randint(0, rank)
        if r == 0:
            out.extend(random_seq(rng, alphabet, 0, max(1, size // 2)))
        else:
            body = random_seq(rng, alphabet, r - 1, max(1, size - 1), shift)
            out.append(power(body, rng.randint(-shift, shift)))
    return tuple(out)


def random_term(rng: random.Random, alphabet: str = "ab", rank: int = 2, size: int = 4, shift: int = 3) -> KTerm:
    t = build(random_seq(rng, alphabet, rank, size, shift))
    assert t is not None
    return t


def _lp_paths(s: Seq, path: tuple = ()) -> list[tuple[tuple, int]]:
    out = []
    for k, a in enumerate(s):
        if is_lp(a):
            out.append((path, k))
            out.extend(_lp_paths(a.body, path + (k,)))
    return out


def _perturb_once(tr: Tracer, rng: random.Random, alphabet: str) -> bool:
    sites = _lp_paths(tr.s)
    if not sites:
        return False
    path, k = rng.choice(sites)
    a: LimitPower = tr.level(path)[k]
    x, q = a.body, a.shift
    level = tr.level(path)
    move = rng.randrange(7)
    if move == 0:  # x^[w+q] -> x x^[w+q-1]
        tr.apply("R2.4b", "RL", path, k, k + 1, x=x, n=1, q=q - 1)
    elif move == 1:  # x^[w+q] -> x^[w+q-1] x
        tr.apply("R2.4a", "RL", path, k, k + 1, x=x, n=1, q=q - 1)
    elif move == 2:  # split the exponent
        r = rng.randint(-2, 2)
        tr.apply("R2.3", "RL", path, k, k + 1, x=x, p=q - r, q=r)
    elif move == 3 and len(x) > 1:  # rotate into the right context when possible
        n = rng.randint(1, len(x) - 1)
        if level[k + 1 : k + 1 + n] == x[:n]:
            tr.apply("R2.5", "LR", path, k, k + 1 + n, x=x[:n], y=x[n:], q=q)
        else:
            tr.apply("R2.4a", "RL", path, k, k + 1, x=x, n=1, q=q - 1)
    elif move == 4 and rank_of(x) >= 1:  # x -> (x^[w+1]) only for rank >= 1 bases: use x = x^[w+1]
        tr.apply("D3.1", "RL", path, k, k + 1, x=(a,))
    elif move == 5 and q == 0:  # x^[w] -> (x^[w] y x^[w])^[w]
        y = tuple(rng.choice(alphabet) for _ in range(rng.randint(1, 2)))
        tr.apply("R.LG", "RL", path, k, k + 1, x=x, y=y)
    elif move == 6 and rank_of(x) >= 1:
        # (x)^[w+q] -> (x x)^[w+q'] only for even shifts; otherwise no-op
        if q % 2 == 0:
            tr.apply("R2.2", "RL", path, k, k + 1, x=x, n=2, q=q // 2)
        else:
            return False
    else:
        return False
    return True


def perturb(t: KTerm, rng: random.Random, moves: int = 3, alphabet: Optional[str] = None,
            max_rank: int = 2) -> tuple[KTerm, list[RewriteStep]]:
    """Apply up to ``moves`` random catalog steps (Sigma-valid), keeping rank <= max_rank."""
    from .terms import letters

    alphabet = alphabet or letters(t) or "a"
    tr = Tracer(seq(t))
    done = 0
    tries = 0
    while done < moves and tries < moves * 10:
        tries += 1
        trial = Tracer(tr.s, [])
        try:
            ok = _perturb_once(trial, rng, alphabet)
        except KTermError:
            continue
        if ok and rank_of(trial.s) <= max_rank and len(trial.s) < 60:
            tr.s = trial.s
            tr.steps.extend(trial.steps)
            done += 1
    out = build(tr.s)
    assert out is not None
    return out, tr.steps


def _word(rng: random.Random, alphabet: str, lo: int = 1, hi: int = 3) -> Seq:
    return tuple(rng.choice(alphabet) for _ in range(rng.randint(lo, hi)))


def _any(rng: random.Random, alphabet: str, optional: bool = False) -> Seq:
    if optional and rng.random() < 0.25:
        return ()
    if rng.random() < 0.6:
        return _word(rng, alphabet)
    return random_seq(rng, alphabet, 1, size=3, shift=2)


def random_bindings(rule_id: str, rng: random.Random, alphabet: str = "ab", tries: int = 200) -> dict:
    """Random metavariable values satisfying the side condition of a catalog rule."""
    from .canon import canonical_form
    from .rules import CATALOG

    rule = CATALOG[rule_id]
    for _ in range(tries):
        i = lambda: rng.randint(-3, 3)  # noqa: E731
        match rule_id:
            case "D3.1":
                b = {"x": random_seq(rng, alphabet, rng.randint(1, 2), size=3, shift=2)}
            case "D3.2":
                b = {"x": _any(rng, alphabet), "y": _any(rng, alphabet, True), "p": i(), "q": i()}
            case "D3.3a" | "D3.3b":
                b = {"x": _any(rng, alphabet), "y": _any(rng, alphabet), "p": i(), "q": i()}
            case "D3.4":
                b = {"x": _any(rng, alphabet), "z": _any(rng, alphabet), "y": _any(rng, alphabet, True),
                     "w": _any(rng, alphabet, True), "p": i(), "q": i(), "r": i(), "s": i()}
            case "D3.5":
                b = {"x": _any(rng, alphabet), "y": _any(rng, alphabet), "p": i(), "q": i(), "r": i()}
            case "D3.6":
                b = {"x": _any(rng, alphabet), "y": _any(rng, alphabet), "z": _any(rng, alphabet),
                     "p": i(), "q": i(), "r": i()}
            case "C3.2.1" | "C3.2.2" | "C3.2.3":
                s = random_seq(rng, alphabet, 1, size=3, shift=2)
                cf = seq(canonical_form(build(s)))
                ks = [k for k, a in enumerate(cf) if is_lp(a)]
                mid = _any(rng, alphabet)
                if rule_id == "C3.2.1":
                    t = cf[: ks[0] + 1] + mid + cf[ks[-1] :]
                elif rule_id == "C3.2.2":
                    t = cf[: ks[0] + 1] + mid
                else:
                    t = mid + cf[ks[-1] :]
                b = {"s": s, "t": t}
            case _:
                b = {}
                for name in rule.variables[0]:
                    b[name] = _any(rng, alphabet)
                for name in rule.variables[1]:
                    b[name] = rng.randint(1, 3) if name == "n" else i()
        if rule.ok(b):
            return b
    raise ValueError(f"no valid instance found for {rule_id}")
