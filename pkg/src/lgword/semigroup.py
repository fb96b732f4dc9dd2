"""Finite semigroups given by Cayley tables, and evaluation of kappa-bar terms in them.

Evaluation is vectorized over batches of assignments with numpy: a letter maps to
a column of element indices, products are table lookups and ``(ω+q)``-powers are
lookups in a precomputed element -> power map.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np

from .errors import KTermError
from .terms import KTerm, Seq, letters, seq

MAX_ORDER = 200
SAMPLE_BUDGET = 10_000


@dataclass(eq=False)
class FiniteSemigroup:
    table: np.ndarray
    name: str = ""
    index: np.ndarray = field(init=False, repr=False)
    period: np.ndarray = field(init=False, repr=False)
    _omega_maps: dict = field(init=False, repr=False, default_factory=dict)

    def __post_init__(self):
        t = np.asarray(self.table, dtype=np.int64)
        n = t.shape[0]
        if t.shape != (n, n) or n == 0:
            raise KTermError("Cayley table must be a non-empty square array")
        if n > MAX_ORDER:
            raise KTermError(f"order {n} exceeds the cap of {MAX_ORDER}")
        if t.min() < 0 or t.max() >= n:
            raise KTermError("table entries must be element indices 0..n-1")
        # (st)u == s(tu) for all triples, vectorized over s and u
        lhs = t[t[:, :, None], np.arange(n)[None, None, :]]  # (s t) u  indexed [s, t, u]
        rhs = t[np.arange(n)[:, None, None], t[None, :, :]]  # s (t u)
        if not np.array_equal(lhs, rhs):
            raise KTermError("table is not associative")
        self.table = t
        self.table.setflags(write=False)
        self.index = np.zeros(n, dtype=np.int64)
        self.period = np.zeros(n, dtype=np.int64)
        for s in range(n):
            seen = {}
            x, k = s, 1
            while x not in seen:
                seen[x] = k
                x = int(t[x, s])
                k += 1
            self.index[s] = seen[x]
            self.period[s] = k - seen[x]

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def mul(self, s: int, u: int) -> int:
        return int(self.table[s, u])

    def pow(self, s: int, k: int) -> int:
        x = s
        for _ in range(k - 1):
            x = int(self.table[x, s])
        return x

    def idempotents(self) -> list[int]:
        return [s for s in range(self.order) if self.table[s, s] == s]

    def omega_power(self, s: int, q: int = 0) -> int:
        i, p = int(self.index[s]), int(self.period[s])
        return self.pow(s, i + (q - i) % p)

    def omega_map(self, q: int) -> np.ndarray:
        """Array m with m[s] = s^{ω+q}."""
        key = q
        if key not in self._omega_maps:
            self._omega_maps[key] = np.array(
                [self.omega_power(s, q) for s in range(self.order)], dtype=np.int64
            )
        return self._omega_maps[key]

    def is_local_group(self) -> bool:
        t = self.table
        for e in self.idempotents():
            local = sorted({int(t[t[e, s], e]) for s in range(self.order)})
            for x in local:
                if not any(t[x, y] == e and t[y, x] == e for y in local):
                    return False
        return True

    def __repr__(self):
        return f"FiniteSemigroup({self.name or '?'}, order={self.order})"


# -- evaluation --------------------------------------------------------------


def eval_batch(s: Seq, S: FiniteSemigroup, columns: Mapping[str, np.ndarray]) -> np.ndarray:
    """Evaluate a non-empty atom sequence for a batch of assignments.

    ``columns[letter]`` is an integer array (one entry per assignment).
    """
    acc: Optional[np.ndarray] = None
    for a in s:
        if isinstance(a, str):
            try:
                v = columns[a]
            except KeyError:
                raise KTermError(f"letter {a!r} has no assigned element") from None
        else:
            v = S.omega_map(a.shift)[eval_batch(a.body, S, columns)]
        acc = v if acc is None else S.table[acc, v]
    if acc is None:
        raise KTermError("cannot evaluate the empty term")
    return acc


def evaluate(t: KTerm, S: FiniteSemigroup, assignment: Mapping[str, int]) -> int:
    cols = {k: np.array([v]) for k, v in assignment.items()}
    for v in assignment.values():
        if not 0 <= v < S.order:
            raise KTermError(f"element {v} out of range for order {S.order}")
    return int(eval_batch(seq(t), S, cols)[0])


def assignments(
    alphabet: str, n: int, budget: int = SAMPLE_BUDGET, seed: int = 0
) -> tuple[dict[str, np.ndarray], bool]:
    """All assignments if there are at most ``budget`` of them, else seeded samples.

    Returns the letter -> column mapping and whether the enumeration was exhaustive.
    """
    k = len(alphabet)
    if n**k <= budget:
        grid = np.array(list(itertools.product(range(n), repeat=k)), dtype=np.int64)
        grid = grid.reshape(-1, k)
        exhaustive = True
    else:
        rng = np.random.default_rng(seed)
        grid = rng.integers(0, n, size=(budget, k))
        exhaustive = False
    return {c: grid[:, i] for i, c in enumerate(alphabet)}, exhaustive


@dataclass(frozen=True)
class IdentityCheck:
    holds: bool
    exhaustive: bool
    checked: int
    witness: Optional[dict] = None


def identity_holds(
    alpha: KTerm,
    beta: KTerm,
    S: FiniteSemigroup,
    budget: int = SAMPLE_BUDGET,
    seed: int = 0,
) -> IdentityCheck:
    alphabet = letters(alpha, beta)
    cols, exhaustive = assignments(alphabet, S.order, budget, seed)
    if not alphabet:
        raise KTermError("terms without letters")
    lhs = eval_batch(seq(alpha), S, cols)
    rhs = eval_batch(seq(beta), S, cols)
    bad = np.nonzero(lhs != rhs)[0]
    count = len(lhs)
    if len(bad):
        i = int(bad[0])
        return IdentityCheck(False, exhaustive, count, {c: int(cols[c][i]) for c in alphabet})
    return IdentityCheck(True, exhaustive, count)


# -- constructions -----------------------------------------------------------


def cyclic_group(n: int) -> FiniteSemigroup:
    r = np.arange(n)
    return FiniteSemigroup((r[:, None] + r[None, :]) % n, f"Z{n}")


def symmetric_group3() -> FiniteSemigroup:
    perms = list(itertools.permutations(range(3)))
    idx = {p: i for i, p in enumerate(perms)}
    # (p*q)(x) = p(q(x)); the identity permutation is element 0
    table = [[idx[tuple(p[q[x]] for x in range(3))] for q in perms] for p in perms]
    return FiniteSemigroup(np.array(table), "S3")


def monogenic_nilpotent(n: int) -> FiniteSemigroup:
    """{0, x, x^2, ..., x^(n-1)} with x^n = 0; element k stands for x^k, 0 for zero."""
    table = [[(i + j if i and j and i + j < n else 0) for j in range(n)] for i in range(n)]
    return FiniteSemigroup(np.array(table), f"N{n}")


def left_zero(n: int) -> FiniteSemigroup:
    return FiniteSemigroup(np.repeat(np.arange(n)[:, None], n, axis=1), f"LZ{n}")


def right_zero(n: int) -> FiniteSemigroup:
    return FiniteSemigroup(np.repeat(np.arange(n)[None, :], n, axis=0), f"RZ{n}")


def rees_matrix(g: int, rows: int, cols: int, sandwich: list[list[int]], name: str) -> FiniteSemigroup:
    """M[Z_g; rows, cols; P] with P a cols x rows matrix over Z_g (written additively)."""
    elems = [(i, x, l) for i in range(rows) for x in range(g) for l in range(cols)]
    idx = {e: k for k, e in enumerate(elems)}
    table = [
        [idx[(i, (x + sandwich[l][j] + y) % g, m)] for (j, y, m) in elems]
        for (i, x, l) in elems
    ]
    return FiniteSemigroup(np.array(table), name)


def semilattice2() -> FiniteSemigroup:
    return FiniteSemigroup(np.array([[0, 0], [0, 1]]), "SL2")


def brandt_b2() -> FiniteSemigroup:
    """B2 = {e11, e12, e21, e22, 0} with e_ij e_kl = e_il when j = k, else 0."""
    pairs = [(1, 1), (1, 2), (2, 1), (2, 2)]
    zero = 4
    table = [
        [pairs.index((i, l)) if j == k else zero for (k, l) in pairs] + [zero]
        for (i, j) in pairs
    ]
    table.append([zero] * 5)
    return FiniteSemigroup(np.array(table), "B2")


_BATTERY: list[FiniteSemigroup] = []


def builtin_battery() -> list[FiniteSemigroup]:
    if not _BATTERY:
        _BATTERY.extend(
            [
                cyclic_group(2),
                cyclic_group(3),
                cyclic_group(4),
                cyclic_group(6),
                symmetric_group3(),
                monogenic_nilpotent(2),
                monogenic_nilpotent(3),
                monogenic_nilpotent(4),
                left_zero(2),
                right_zero(3),
                rees_matrix(2, 2, 2, [[0, 0], [0, 1]], "M[Z2;2,2]"),
                rees_matrix(3, 2, 2, [[0, 0], [0, 1]], "M[Z3;2,2]"),
                rees_matrix(3, 1, 2, [[0], [2]], "M[Z3;1,2]"),
            ]
        )
    return list(_BATTERY)


def battery_equal(alpha: KTerm, beta: KTerm, seed: int = 0) -> Optional[tuple[FiniteSemigroup, dict]]:
    """None when the identity holds on every battery member, else the first witness."""
    for S in builtin_battery():
        res = identity_holds(alpha, beta, S, seed=seed)
        if not res.holds:
            return S, res.witness
    return None


# -- file format ---------------------------------------------------------------


def parse_table(text: str, name: str = "") -> FiniteSemigroup:
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append(line.split())
    if not rows:
        raise KTermError("empty semigroup file")
    try:
        n = int(rows[0][0])
        if len(rows[0]) != 1:
            raise ValueError
        body = [[int(x) for x in r] for r in rows[1:]]
    except ValueError:
        raise KTermError("semigroup file must contain integers only") from None
    if n < 1 or n > MAX_ORDER:
        raise KTermError(f"order must be between 1 and {MAX_ORDER}")
    if len(body) != n or any(len(r) != n for r in body):
        raise KTermError(f"expected {n} rows of {n} entries")
    return FiniteSemigroup(np.array(body), name)


def load_semigroup(path: str) -> FiniteSemigroup:
    with open(path, encoding="utf-8") as fh:
        return parse_table(fh.read(), name=path)
