import random

import pytest

from lgword.terms import parse

F1 = ("b(ab)^[w-5]cb(ab)^[w+2]c(b(ab)^[w+2]c)^[w-1]ac^[w-3](b^[w]a^[w-1]c)^[w-1]b^[w]a^[w+1]c"
      "(b^[w-2]aca^[w+4]c)^[w-1]b^[w+1]")
F1_CANON = "b(ab)^[w-5]cac^[w-3](b^[w]aca^[w+2]c)^[w-1]b^[w+3]"
F2 = "d^[w]b(ad^[w-1]cd^[w+3]bad^[w]b)^[w-1](ab(cd)^[w-2]a)^[w-1]"
F2_CANON = "(d^[w-1]cd^[w+3]ba)^[w-1]b(cd)^[w]a(ab(cd)^[w-2]aab(cd)^[w]a)^[w-1]"
F3 = "b(ab^[w]a)^[w-1]bc(c^[w-1]aa(bc)^[w-2])^[w-1]a^[w+1]"

F1_STEP1 = "b(ab)^[w-5]cac^[w-3]b^[w](a^[w]cb^[w-2]aca^[w+2]cb^[w])^[w-1]a^[w]cb^[w+1]"
F1_STEP2 = "b(ab)^[w-5]cac^[w-3]b^[w]a^[w]c(b^[w-2]aca^[w+2]cb^[w]a^[w]c)^[w-1]b^[w+1]"
F2_STEP2 = ("d^[w]ba(d^[w-1]cd^[w+3]bad^[w]ba)^[w-1]b(cd)^[w-2]a"
            "(ab(cd)^[w-2]aab(cd)^[w-2]a)^[w-1]")

OUTLINE_F1 = (
    "i{b,ab} b{ab}^(q-5) c{ab,cb,ab} b{ab}^(q+2) c{ab,cb,ab} c{ab,cb,ab}^-1 b{ab}^(-q-2) "
    "c{ab,cb,ab}^-1 c{ab,ca,c} b{c}^(q-3) c{c,_,b} c{a,c,b}^-1 b{a}^(-q+1) c{b,_,a}^-1 "
    "b{b}^(-q) c{a,c,b}^-1 c{a,c,b} b{b}^(q) c{b,_,a} b{a}^(q+1) c{a,c,b} c{a,c,b}^-1 "
    "b{a}^(-q-4) c{b,ac,a}^-1 b{b}^(-q+2) c{a,c,b}^-1 c{a,c,b} b{b}^(q+1) t{b,_}"
)
OUTLINE_F1_CANON = (
    "i{b,ab} b{ab}^(q-5) c{ab,ca,c} b{c}^(q-3) c{c,_,b} c{a,c,b}^-1 b{a}^(-q-2) "
    "c{b,ac,a}^-1 b{b}^(-q) c{a,c,b}^-1 c{a,c,b} b{b}^(q+3) t{b,_}"
)
ROOT_F1 = (
    "i{b,ab} b{ab}^(q-5) c{ab,ca,c} b{c}^(q-3) c{c,_,b} c{a,c,b}^-1 b{a}^(-q-2) "
    "c{b,ac,a}^-1 b{b}^3 t{b,_}"
)


@pytest.fixture
def f1():
    return parse(F1)


@pytest.fixture
def f1c():
    return parse(F1_CANON)


@pytest.fixture
def f2():
    return parse(F2)


@pytest.fixture
def f3():
    return parse(F3)


@pytest.fixture
def rng():
    return random.Random(20240601)

