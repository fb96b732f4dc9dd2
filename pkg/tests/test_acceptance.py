"""The twelve acceptance criteria, one test each.

Every test prints one ``criterion N: PASS|FAIL`` line straight to the terminal,
bypassing output capture, so the lines show up in any pytest run.
"""

import itertools
import random
from contextlib import contextmanager


from conftest import (
    F1, F1_CANON, F1_STEP1, F1_STEP2, F2, F2_CANON, F2_STEP2, OUTLINE_F1, OUTLINE_F1_CANON, ROOT_F1,
)
from lgword.canon import canonical_form, canonicalize_LG, reduce_rank
from lgword.decide import self_consistency
from lgword.gen import random_term
from lgword.outline import block_analysis, crucial_length, instantiate, outline, q_param, reduce_free, root
from lgword.rules import CATALOG, Derivation, instantiate as fill, verify_derivation
from lgword.semigroup import (
    SAMPLE_BUDGET, battery_equal, brandt_b2, builtin_battery, cyclic_group, identity_holds, left_zero,
    monogenic_nilpotent, rees_matrix, right_zero, semilattice2,
)
from lgword.tactics import Tracer
from lgword.terms import build, parse, parse_seq, rank, seq, show


@contextmanager
def criterion(capsys, num, title):
    verdict = "FAIL"
    try:
        yield
        verdict = "PASS"
    finally:
        with capsys.disabled():
            print(f"\ncriterion {num:>2}: {verdict}  {title}")


def corpus(n, seed, ranks=(0, 1, 2, 3)):
    rng = random.Random(seed)
    return [random_term(rng, rng.choice(["ab", "abc"]), rng.choice(ranks), 4) for _ in range(n)]


CORPUS = corpus(500, 2024)


def test_criterion_01_first_golden(capsys):
    with criterion(capsys, 1, "canonical form of F1"):
        assert show(canonicalize_LG(parse(F1)).output) == F1_CANON


def test_criterion_02_second_golden(capsys):
    with criterion(capsys, 2, "canonical form of F2"):
        assert show(canonicalize_LG(parse(F2)).output) == F2_CANON


def test_criterion_03_outline_and_root_goldens(capsys):
    with criterion(capsys, 3, "outlines and roots of F1 and its canonical form"):
        a, b = parse(F1), parse(F1_CANON)
        assert str(outline(a)) == OUTLINE_F1
        assert str(outline(b)) == OUTLINE_F1_CANON
        assert str(root(a)) == ROOT_F1
        assert root(a) == root(b)


def test_criterion_04_stage_snapshots(capsys):
    with criterion(capsys, 4, "step snapshots of F1 and F2"):
        log1 = dict(canonicalize_LG(parse(F1)).stage_log)
        log2 = dict(canonicalize_LG(parse(F2)).stage_log)
        assert (log1["step1"], log1["step2"], log1["step3"]) == (F1_STEP1, F1_STEP2, F1_CANON)
        assert (log2["step2"], log2["step3"]) == (F2_STEP2, F2_CANON)


# -- rule soundness -------------------------------------------------------------------

LETTER = {"x": "a", "y": "b", "z": "c", "w": "d", "s": "e", "t": "f"}
# rules whose side condition restricts the term variables get explicit templates
TEMPLATES = {
    "D3.1": [{"x": "ab^[w]c"}, {"x": "a^[w]"}, {"x": "(ab)^[w-1]c"}],
    "C3.2.1": [{"s": "ab^[w]c", "t": "ab^[w]db^[w]c"}, {"s": "ab^[w]cd^[w]e", "t": "ab^[w]fd^[w]e"}],
    "C3.2.2": [{"s": "ab^[w]c", "t": "ab^[w]d"}, {"s": "a^[w]", "t": "a^[w]bc^[w]"}],
    "C3.2.3": [{"s": "ab^[w]c", "t": "db^[w]c"}, {"s": "a^[w]", "t": "c^[w]ba^[w]"}],
}
SHIFTS = range(-2, 3)


def rule_instances(rule_id):
    rule = CATALOG[rule_id]
    term_vars, int_vars = rule.variables
    optional = {"y", "w"} if rule_id in ("D3.2", "D3.4") else set()
    if rule_id in TEMPLATES:
        term_choices = [{k: parse_seq(v) for k, v in tpl.items()} for tpl in TEMPLATES[rule_id]]
    else:
        names = sorted(term_vars)
        options = [[(LETTER[v],), ()] if v in optional else [(LETTER[v],)] for v in names]
        term_choices = [dict(zip(names, combo)) for combo in itertools.product(*options)]
    int_names = sorted(int_vars)
    ranges = [range(1, 4) if v == "n" else SHIFTS for v in int_names]
    for tb in term_choices:
        for combo in itertools.product(*ranges):
            b = dict(tb, **dict(zip(int_names, combo)))
            assert rule.ok(b), (rule_id, b)
            yield build(fill(rule.lhs, b)), build(fill(rule.rhs, b))


def test_criterion_05_rule_soundness(capsys):
    with criterion(capsys, 5, "every rule holds in every battery local group"):
        failures = []
        for rule_id in CATALOG:
            for lhs, rhs in rule_instances(rule_id):
                for S in builtin_battery():
                    res = identity_holds(lhs, rhs, S, budget=SAMPLE_BUDGET, seed=0)
                    n_vars = len(set(show(lhs) + show(rhs)) & set("abcdef"))
                    assert res.exhaustive == (S.order ** n_vars <= SAMPLE_BUDGET)
                    if not res.holds:
                        failures.append((rule_id, show(lhs), show(rhs), S.name, res.witness))
        assert failures == []


# -- canonicalization over a random corpus -------------------------------------------


def test_criterion_06_derivations_valid(capsys):
    with criterion(capsys, 6, "canonicalization traces replay and preserve the value"):
        failures = []
        for t in CORPUS:
            rep = canonicalize_LG(t)
            if not verify_derivation(rep.derivation) or battery_equal(t, rep.output) is not None:
                failures.append(show(t))
        assert failures == []


def test_criterion_07_idempotence(capsys):
    with criterion(capsys, 7, "canonicalization is idempotent"):
        failures = []
        for t in CORPUS:
            c = canonical_form(t)
            if canonical_form(c) != c:
                failures.append(show(t))
        assert failures == []


def test_criterion_08_path_agreement(capsys):
    with criterion(capsys, 8, "canonical-form and root comparison agree"):
        rep = self_consistency(500, seed=8)
        assert rep.pairs == 1000
        assert rep.failures == []


def canonical_rank2(n, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        t = canonical_form(random_term(rng, rng.choice(["ab", "abc"]), 2, 5))
        if rank(t) == 2:
            out.append(t)
    return out


def test_criterion_09_block_invariants(capsys):
    with criterion(capsys, 9, "block and remainder invariants of rank 2 canonical forms"):
        failures = []
        for t in canonical_rank2(200, 9):
            ba = block_analysis(t)
            m = ba.m
            two_length = sum(1 for a in seq(t) if not isinstance(a, str) and a.rank == 2)
            ok = ba.negative_remainders() == m == two_length
            ok &= all(crucial_length(ba.remainders[j]) >= 1 for j in range(1, 2 * m))
            ok &= all(ba.d_left[j] <= 2 and ba.d_right[j] <= 1 for j in range(1, 2 * m, 2))
            ok &= all(ba.d_right[j - 1] == ba.d_left[j] for j in range(1, 2 * m + 1))
            if not ok:
                failures.append(show(t))
        assert failures == []


def test_criterion_10_rank_reduction(capsys):
    with criterion(capsys, 10, "rank reduction of rank 3 and 4 terms"):
        rng = random.Random(10)
        failures = []
        for k in range(200):
            t = random_term(rng, "ab", 3 + k % 2, 4)
            tr = Tracer(seq(t))
            reduce_rank(tr)
            out = build(tr.s)
            ok = rank(out) <= 2 and verify_derivation(Derivation(t, tr.steps, out))
            if not ok or battery_equal(t, out) is not None:
                failures.append(show(t))
        assert failures == []


def test_criterion_11_q_independence(capsys):
    with criterion(capsys, 11, "instantiated roots do not depend on q"):
        rng = random.Random(11)
        terms = []
        while len(terms) < 200:
            t = canonical_form(random_term(rng, rng.choice(["ab", "abc"]), rng.choice([1, 2]), 5))
            if rank(t) >= 1:
                terms.append(t)
        failures = []
        for t in terms:
            q = q_param(t)
            for qq in (q, q + 7):
                if instantiate(root(t), qq) != reduce_free(instantiate(outline(t), qq)):
                    failures.append((show(t), qq))
        assert failures == []


def test_criterion_12_oracle_sanity(capsys):
    with criterion(capsys, 12, "local group verdicts of the reference semigroups"):
        expected = [(cyclic_group(n), True) for n in (1, 2, 3, 4, 5, 6)]
        expected += [(monogenic_nilpotent(n), True) for n in (2, 3, 4)]
        expected += [(left_zero(3), True), (right_zero(3), True)]
        expected += [(S, True) for S in builtin_battery() if S.name.startswith("M[")]
        expected += [(rees_matrix(2, 3, 2, [[0, 1, 0], [1, 0, 0]], "M[Z2;3,2]"), True)]
        expected += [(semilattice2(), False), (brandt_b2(), False)]
        assert [(S.name, S.is_local_group()) for S, _ in expected] == [(S.name, v) for S, v in expected]
