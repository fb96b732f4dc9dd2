import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import F1, F1_CANON, F2, F3
from lgword.errors import ExponentOverflow, PreconditionError, TermSyntaxError
from lgword.gen import random_term
from lgword.terms import (
    LimitPower, Product, Word, final_omega2_portion, letters, omega_portions, p_expansion, parse,
    rank, rank_configuration, seq, show,
)
from lgword.words import is_conjugate, is_lyndon, is_primitive, lyndon_rotation, primitive_root


def terms(max_rank=3):
    return st.builds(
        lambda seed, r, al: random_term(random.Random(seed), al, r, 5),
        st.integers(0, 2**32), st.integers(0, max_rank), st.sampled_from(["a", "ab", "abc"]),
    )


class TestParsePrint:
    def test_single_letter(self):
        assert parse("a") == Word("a")

    def test_limit_power(self):
        assert parse("(ab)^[w-5]") == LimitPower(Word("ab"), -5)

    def test_zero_shift_prints_plain_omega(self):
        assert show(LimitPower(Word("a"), 0)) == "a^[w]"

    def test_word_prints_letters(self):
        assert show(Word("ab")) == "ab"

    def test_fixture_is_a_product_of_rank_two(self):
        t = parse(F1)
        assert isinstance(t, Product)
        assert rank(t) == 2

    @pytest.mark.parametrize("text", [F1, F1_CANON, F2, F3])
    def test_fixture_roundtrip(self, text):
        assert show(parse(text)) == text

    def test_adjacent_words_merge(self):
        t = parse("ab(c)^[w]de")
        assert isinstance(t, Product)
        assert [type(c).__name__ for c in t.children] == ["Word", "LimitPower", "Word"]

    def test_finite_power_expands(self):
        assert show(parse("(ab)^3c")) == "abababc"

    def test_whitespace_is_ignored(self):
        assert parse(" a b ^[w] ") == parse("ab^[w]")

    @pytest.mark.parametrize("text", ["", "A", "(ab)", "a^[x]", "a^1", "a^[w", "()^[w]", "a)"])
    def test_syntax_errors(self, text):
        with pytest.raises(TermSyntaxError):
            parse(text)

    def test_overflow(self):
        with pytest.raises(ExponentOverflow):
            parse("a^[w+2147483648]")

    @settings(max_examples=200, deadline=None)
    @given(terms())
    def test_roundtrip(self, t):
        assert parse(show(t)) == t

    @settings(max_examples=100, deadline=None)
    @given(terms())
    def test_products_are_flat(self, t):
        def walk(x, parent_is_product=False):
            if isinstance(x, Product):
                assert not parent_is_product
                kinds = [type(c) for c in x.children]
                assert all(not (a is Word and b is Word) for a, b in zip(kinds, kinds[1:]))
                for c in x.children:
                    walk(c, True)
            elif isinstance(x, LimitPower):
                walk(x.base)

        walk(t)


class TestRank:
    def test_word(self):
        assert rank(parse("abc")) == 0

    def test_nested(self, f3, f1):
        assert rank(f3) == 2
        assert rank(f1) == 2

    def test_letters(self, f2):
        assert letters(f2) == "abcd"


class TestRankConfiguration:
    def test_single_power(self):
        rc = rank_configuration(parse("a^[w-1]"))
        assert rc.rho == (None, None)
        assert rc.pi == (Word("a"),)
        assert rc.shifts == (-1,)

    def test_f2(self, f2):
        rc = rank_configuration(f2)
        assert rc.n == 2
        assert [show(p) for p in rc.pi] == ["ad^[w-1]cd^[w+3]bad^[w]b", "ab(cd)^[w-2]a"]
        assert rc.shifts == (-1, -1)
        assert [show(r) for r in rc.rho] == ["d^[w]b", "", ""]

    def test_f3(self, f3):
        rc = rank_configuration(f3)
        assert rc.n == 2
        assert [show(r) for r in rc.rho] == ["b", "bc", "a^[w+1]"]
        assert [show(p) for p in rc.pi] == ["ab^[w]a", "c^[w-1]aa(bc)^[w-2]"]

    def test_rank_zero_rejected(self):
        with pytest.raises(PreconditionError):
            rank_configuration(parse("abc"))

    @settings(max_examples=100, deadline=None)
    @given(terms())
    def test_reassembly(self, t):
        if rank(t) == 0:
            return
        rc = rank_configuration(t)
        assert rc.assemble() == t
        assert rc.n >= 1


class TestExpansions:
    def test_two_expansion_of_power(self):
        assert show(p_expansion(parse("a^[w-1]"), 2)) == "aa"

    def test_two_expansion_f3(self, f3):
        assert show(p_expansion(f3, 2)) == "bab^[w]aab^[w]abcc^[w-1]aa(bc)^[w-2]c^[w-1]aa(bc)^[w-2]a^[w+1]"

    def test_three_expansion(self):
        assert show(p_expansion(parse("(ab)^[w]"), 3)) == "ababab"


class TestPortions:
    def test_f3(self, f3):
        init, cruc, fin = omega_portions(f3)
        assert show(init) == "bab^[w]"
        assert show(fin) == "a^[w]"
        assert [show(c) for c in cruc] == [
            "b^[w]aab^[w]", "b^[w]abcc^[w]", "c^[w]aa(bc)^[w]", "(bc)^[w]c^[w]", "(bc)^[w]a^[w]",
        ]

    def test_single_power(self):
        init, cruc, fin = omega_portions(parse("a^[w-1]"))
        assert (show(init), cruc, show(fin)) == ("a^[w]", [], "a^[w]")

    def test_single_crucial(self):
        _, cruc, _ = omega_portions(parse("(ab)^[w]c(ab)^[w]"))
        assert [show(c) for c in cruc] == ["(ab)^[w]c(ab)^[w]"]

    def test_final_omega2_portion(self):
        assert show(final_omega2_portion(parse("a^[w]bc^[w]d"))) == "a^[w]bc^[w]d"
        assert final_omega2_portion(parse("a^[w]bc^[w+1]d")) is None
        assert final_omega2_portion(parse("a^[w]b")) is None


class TestLyndon:
    def test_primitive(self):
        assert not is_primitive("abab")
        assert primitive_root("abab") == ("ab", 2)

    def test_lyndon(self):
        assert is_lyndon("aab")
        assert not is_lyndon("aba")

    def test_rotation(self):
        assert lyndon_rotation("ba") == (1, "ab")

    @given(st.text("abc", min_size=1, max_size=10))
    def test_rotation_is_lyndon_conjugate_of_root(self, w):
        k, conj = lyndon_rotation(w)
        root, n = primitive_root(w)
        assert root * n == w
        assert is_lyndon(conj)
        assert is_conjugate(root, conj)
        assert root[k:] + root[:k] == conj


def test_atom_sequence_determines_term():
    t = parse(F1)
    assert parse(show(t)) == t
    assert seq(t) == seq(parse(F1))
