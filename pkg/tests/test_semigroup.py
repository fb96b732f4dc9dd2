import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lgword.errors import KTermError
from lgword.gen import perturb, random_term
from lgword.semigroup import (
    FiniteSemigroup, battery_equal, brandt_b2, builtin_battery, cyclic_group, evaluate, identity_holds,
    left_zero, load_semigroup, monogenic_nilpotent, parse_table, rees_matrix, right_zero, semilattice2,
    symmetric_group3,
)
from lgword.terms import LimitPower, build, parse, seq

LG_AXIOM = (parse("(a^[w]ba^[w])^[w]"), parse("a^[w]"))


def transformation_semigroups(count, seed, max_order=5):
    """Random subsemigroups of the full transformation monoid on three points."""
    rng = random.Random(seed)
    found = []
    while len(found) < count:
        gens = {tuple(rng.randrange(3) for _ in range(3)) for _ in range(rng.randint(1, 2))}
        elems = set(gens)
        while True:
            new = {tuple(g[f[i]] for i in range(3)) for f in elems for g in elems} - elems
            if not new:
                break
            elems |= new
        if len(elems) > max_order:
            continue
        order = sorted(elems)
        idx = {f: k for k, f in enumerate(order)}
        table = [[idx[tuple(g[f[i]] for i in range(3))] for g in order] for f in order]
        found.append(FiniteSemigroup(np.array(table), "T"))
    return found


class TestConstruction:
    def test_rejects_non_associative(self):
        with pytest.raises(KTermError):
            FiniteSemigroup(np.array([[1, 0], [0, 0]]))

    def test_rejects_bad_entries(self):
        with pytest.raises(KTermError):
            FiniteSemigroup(np.array([[0, 2], [0, 0]]))

    def test_index_and_period(self):
        N = monogenic_nilpotent(3)
        assert (N.index[1], N.period[1]) == (3, 1)
        Z = cyclic_group(4)
        assert (Z.index[1], Z.period[1]) == (1, 4)

    def test_parse_table_with_comments(self):
        S = parse_table("# Z2\n2\n0 1\n1 0 # row 1\n")
        assert S.order == 2 and S.is_local_group()

    @pytest.mark.parametrize("text", ["", "2\n0 1\n", "x\n", "2\n0 1\n1\n", "2 3\n0 1\n1 0\n"])
    def test_parse_table_errors(self, text):
        with pytest.raises(KTermError):
            parse_table(text)

    def test_load(self, tmp_path):
        p = tmp_path / "z3.txt"
        p.write_text("3\n0 1 2\n1 2 0\n2 0 1\n")
        assert load_semigroup(str(p)).order == 3


class TestOmegaPower:
    def test_group_identity(self):
        assert cyclic_group(3).omega_power(1, 0) == 0

    def test_group_plus_one(self):
        assert cyclic_group(3).omega_power(1, 1) == 1

    def test_null(self):
        assert monogenic_nilpotent(2).omega_power(1, 0) == 0

    def test_inverse_in_subgroup(self):
        assert cyclic_group(4).omega_power(2, -1) == 2

    @pytest.mark.parametrize("S", builtin_battery() + [semilattice2(), brandt_b2()], ids=lambda S: S.name)
    def test_laws(self, S):
        for s in range(S.order):
            e = S.omega_power(s, 0)
            assert S.mul(e, e) == e
            for q in range(-3, 4):
                assert S.mul(S.omega_power(s, q), S.omega_power(s, -q)) == e


class TestEval:
    def test_power(self):
        assert evaluate(parse("a^[w+1]"), cyclic_group(3), {"a": 1}) == 1

    def test_left_zero(self):
        assert evaluate(parse("ab"), left_zero(2), {"a": 0, "b": 1}) == 0

    def test_out_of_range(self):
        with pytest.raises(KTermError):
            evaluate(parse("a"), cyclic_group(2), {"a": 2})

    @pytest.mark.parametrize("S", builtin_battery(), ids=lambda S: S.name)
    def test_lg_axiom(self, S):
        assert identity_holds(*LG_AXIOM, S).holds

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32))
    def test_omega_as_large_multiple(self, seed):
        t = random_term(random.Random(seed), "ab", 1, 4)
        k = 12 * 4  # a multiple of every period, beyond every index in the battery

        def expand(s):
            out = []
            for a in s:
                if isinstance(a, LimitPower):
                    out.extend(a.body * (k + a.shift))
                else:
                    out.append(a)
            return tuple(out)

        finite = build(expand(seq(t)))
        for S in builtin_battery():
            assert identity_holds(t, finite, S).holds


class TestLocalGroups:
    @pytest.mark.parametrize("S,expected", [
        (cyclic_group(3), True), (monogenic_nilpotent(2), True), (left_zero(3), True),
        (right_zero(2), True), (rees_matrix(2, 2, 2, [[0, 0], [0, 1]], "M"), True),
        (semilattice2(), False), (brandt_b2(), False), (symmetric_group3(), True),
    ], ids=lambda x: getattr(x, "name", str(x)))
    def test_verdicts(self, S, expected):
        assert S.is_local_group() is expected

    def test_battery_members(self):
        battery = builtin_battery()
        assert any(S.name == "Z2" for S in battery)
        for S in battery:
            assert S.is_local_group(), S.name

    def test_rees_members_completely_simple(self):
        for S in builtin_battery():
            if not S.name.startswith("M["):
                continue
            t = S.table
            sizes = set()
            for e in S.idempotents():
                local = {int(t[t[e, s], e]) for s in range(S.order)}
                sizes.add(len(local))
                for x, y in itertools.product(local, repeat=2):
                    assert any(t[x, z] == y for z in local)
            assert len(sizes) == 1

    def test_agrees_with_axiom(self):
        pool = [cyclic_group(n) for n in (2, 5, 8)] + [monogenic_nilpotent(n) for n in (2, 5, 8)]
        pool += [left_zero(4), right_zero(5), semilattice2(), brandt_b2(), symmetric_group3()]
        pool += transformation_semigroups(50, 1)
        for S in pool:
            assert S.is_local_group() == identity_holds(*LG_AXIOM, S).holds


class TestIdentities:
    def test_separation_in_z2(self):
        res = identity_holds(parse("a^[w]"), parse("a^[w+1]"), cyclic_group(2))
        assert not res.holds and res.witness == {"a": 1}

    def test_reflexive(self):
        t = parse("(ab)^[w-1]c")
        assert identity_holds(t, t, brandt_b2()).holds

    def test_sampling_is_seeded(self):
        a, b = parse("abcdef"), parse("abcdef")
        res = identity_holds(a, b, rees_matrix(3, 2, 2, [[0, 0], [0, 1]], "M"))
        assert res.holds and not res.exhaustive and res.checked == 10_000

    def test_perturbations_hold(self):
        rng = random.Random(31)
        for _ in range(1000):
            t = random_term(rng, "ab", rng.randint(1, 2), 3)
            t2, _ = perturb(t, rng, 2, "ab")
            assert battery_equal(t, t2) is None
