import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import F1, F1_CANON, F1_STEP1, F1_STEP2, F2_CANON, F2_STEP2
from lgword.canon import (
    canonical_form, canonicalize_LG, canonicalize_rank1, is_canonical_LG, is_canonical_rank1,
    reduce_to_rank_le2, semicanonicalize_rank2, separator_word, step1_eliminations_agglutinations,
    step2_extended_shifts, step3_shortenings, variety_equal,
)
from lgword.errors import PreconditionError
from lgword.gen import random_term
from lgword.rules import verify_derivation
from lgword.semigroup import battery_equal
from lgword.terms import build, expand_seq, omega_portions, parse, rank, rank_of, seq, show


def P(text):
    return parse(text)


class TestRank1:
    @pytest.mark.parametrize("src,out", [
        ("(ba)^[w+1]b", "b(ab)^[w+1]"),
        ("a^[w+2]a^[w+3]", "a^[w+5]"),
        ("ab(ab)^[w]", "(ab)^[w+1]"),
        ("(abab)^[w]", "(ab)^[w]"),
    ])
    def test_examples(self, src, out):
        assert show(canonicalize_rank1(P(src))) == out

    @pytest.mark.parametrize("text,ok", [
        ("b(ab)^[w-5]", True), ("(ba)^[w]", False), ("a(ab)^[w]", True),
        ("(ab)^[w]b^[w]", True), ("a^[w]a", False),
    ])
    def test_checker(self, text, ok):
        assert is_canonical_rank1(P(text)) is ok

    @settings(max_examples=150, deadline=None)
    @given(st.integers(0, 2**32), st.sampled_from(["ab", "abc"]))
    def test_output_is_canonical_and_equal(self, seed, al):
        t = random_term(random.Random(seed), al, 1, 5)
        c = canonicalize_rank1(t)
        assert is_canonical_rank1(c)
        assert canonicalize_rank1(c) == c
        assert battery_equal(t, c) is None


class TestRankReduction:
    def test_word_unchanged(self):
        assert show(reduce_to_rank_le2(P("abc"))) == "abc"

    def test_rank_three_example(self):
        t = P("((a^[w]b)^[w-1]c)^[w-1]")
        out = reduce_to_rank_le2(t)
        assert show(out) == "(a^[w]bc)^[w-1](a^[w]b)^[w+3]c(a^[w]bc)^[w-1]"
        assert battery_equal(t, out) is None

    def test_rank_four(self):
        rng = random.Random(4)
        for _ in range(10):
            t = random_term(rng, "ab", 4, 4)
            out = reduce_to_rank_le2(t)
            assert rank(out) <= 2
            assert battery_equal(t, out) is None


class TestSemicanonical:
    def test_fixture_is_semicanonical(self, f1):
        assert semicanonicalize_rank2(f1) == f1

    def test_power_of_power(self):
        t = P("(a^[w+1])^[w-2]b")
        out = semicanonicalize_rank2(t)
        v = seq(out)
        if rank_of(v) == 2:
            v = expand_seq(v, 2)
        assert is_canonical_rank1(build(v))
        assert battery_equal(t, out) is None

    def test_rank_one_rejected(self):
        with pytest.raises(PreconditionError):
            semicanonicalize_rank2(P("b(ba)^[w]a(ab)^[w]"))


class TestSteps:
    def test_step1_fixture(self, f1):
        assert show(step1_eliminations_agglutinations(f1)) == F1_STEP1

    def test_step1_elimination(self):
        t = P("a^[w+1]b(a^[w]b)^[w-1]a^[w]c")
        out = step1_eliminations_agglutinations(t)
        assert show(out) == "a^[w+1]c"
        assert battery_equal(t, out) is None

    def test_step1_no_pattern(self):
        t = P(F1_CANON)
        assert step1_eliminations_agglutinations(t) == t

    def test_step2_fixtures(self, f2):
        assert show(step2_extended_shifts(f2)) == F2_STEP2
        assert show(step2_extended_shifts(P(F1_STEP1))) == F1_STEP2

    def test_step2_rank_one_unchanged(self):
        assert show(step2_extended_shifts(P("(ab)^[w-1]"))) == "(ab)^[w-1]"

    def test_step3_fixtures(self):
        assert show(step3_shortenings(P(F1_STEP2))) == F1_CANON
        assert show(step3_shortenings(P(F2_STEP2))) == F2_CANON

    def test_step3_canonical_unchanged(self):
        t = P(F2_CANON)
        assert step3_shortenings(t) == t

    def test_precondition(self):
        with pytest.raises(PreconditionError):
            step1_eliminations_agglutinations(P("(a^[w]b)^[w+2]"))

    def test_step3_keeps_portions(self):
        before, after = P(F1_STEP2), P(F1_CANON)
        assert [show(x) for x in omega_portions(before)[::2]] == [show(x) for x in omega_portions(after)[::2]]


class TestSeparator:
    def test_distinct_letters(self):
        assert separator_word(("a",), ("b",), "ab") == (0, (), 0)

    def test_same_base(self):
        assert separator_word(("a",), ("a",), "abc") == (0, ("b",), 0)

    def test_canonical_decomposition(self):
        k, u, l = separator_word(("a", "b"), ("b",), "ab")
        t = P(f"(ab)^[w{k:+d}]" + "".join(u) + f"b^[w{l:+d}]")
        assert is_canonical_rank1(t)
        assert canonicalize_rank1(P("(ab)^[w]b^[w]")) == t


class TestVarieties:
    def test_initial_portions(self):
        tau, sigma = P("a^[w]b"), P("a^[w]c")
        assert variety_equal(tau, sigma, "K")
        assert not variety_equal(tau, sigma, "D")
        assert not variety_equal(tau, sigma, "LI")

    def test_both_portions(self):
        assert variety_equal(P("b(ab)^[w+2]c"), P("b(ab)^[w+5]c"), "LI")

    @pytest.mark.parametrize("kind", ["K", "D", "LI"])
    def test_reflexive(self, kind, f1):
        assert variety_equal(f1, f1, kind)

    def test_rank_zero(self):
        with pytest.raises(PreconditionError):
            variety_equal(P("ab"), P("a^[w]"), "K")


class TestCanonicalizeLG:
    def test_f1(self, f1):
        assert show(canonicalize_LG(f1).output) == F1_CANON

    def test_f2(self, f2):
        assert show(canonicalize_LG(f2).output) == F2_CANON

    def test_lg_axiom(self):
        t = P("(a^[w]ba^[w])^[w]")
        out = canonicalize_LG(t).output
        assert show(out) == "a^[w]"
        assert battery_equal(t, out) is None

    def test_word(self):
        assert show(canonical_form(P("abc"))) == "abc"

    def test_stage_log_f1(self, f1):
        log = dict(canonicalize_LG(f1).stage_log)
        assert (log["step1"], log["step2"], log["step3"]) == (F1_STEP1, F1_STEP2, F1_CANON)

    def test_stage_log_f2(self, f2):
        log = dict(canonicalize_LG(f2).stage_log)
        assert (log["step2"], log["step3"]) == (F2_STEP2, F2_CANON)

    def test_stage_text(self, f1):
        text = canonicalize_LG(f1).stages_text()
        assert text.splitlines()[0] == "input " + F1
        assert text.splitlines()[-1] == "output " + F1_CANON

    @pytest.mark.parametrize("text,ok", [(F1_CANON, True), (F1, False), (F2_CANON, True), ("abc", True)])
    def test_is_canonical(self, text, ok):
        assert is_canonical_LG(P(text)) is ok

    def test_single_letter(self):
        rng = random.Random(2)
        for _ in range(40):
            t = random_term(rng, "a", rng.randint(1, 3), 4)
            out = canonical_form(t)
            assert rank(out) <= 1
            assert show(out).startswith("a")
            assert "(" not in show(out)
            assert battery_equal(t, out) is None

    def test_confluence_of_schedules(self):
        rng = random.Random(6)
        for _ in range(500):
            t = random_term(rng, "ab", 2, 5)
            left = canonicalize_LG(t, order="left").output
            right = canonicalize_LG(t, order="right").output
            assert left == right, show(t)

    def test_idempotence(self):
        rng = random.Random(7)
        for _ in range(1000):
            t = random_term(rng, rng.choice(["ab", "abc"]), rng.randint(0, 3), 4)
            c = canonical_form(t)
            assert canonical_form(c) == c, show(t)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32), st.integers(0, 3))
    def test_trace_idempotence_and_rank(self, seed, r):
        t = random_term(random.Random(seed), "ab", r, 4)
        rep = canonicalize_LG(t)
        assert verify_derivation(rep.derivation)
        assert rank(rep.output) <= min(rank(t), 2)
        assert canonical_form(rep.output) == rep.output


def _two_length(t):
    return sum(1 for a in seq(t) if not isinstance(a, str) and a.rank == 2)


def test_two_length_only_drops_in_step1():
    rng = random.Random(12)
    checked = 0
    while checked < 40:
        t = random_term(rng, "ab", 2, 5)
        s = semicanonicalize_rank2(t)
        if rank(s) != 2:
            continue
        checked += 1
        s1 = step1_eliminations_agglutinations(s)
        assert _two_length(s1) <= _two_length(s)
        if rank(s1) == 2:
            s2 = step2_extended_shifts(s1)
            s3 = step3_shortenings(s2)
            assert _two_length(s2) == _two_length(s1)
            assert _two_length(s3) == _two_length(s1)
