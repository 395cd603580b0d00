import itertools
import random
from fractions import Fraction

import pytest
import sympy as sp

from oracles import convergents, exzar_generator_values
from toricres.errors import ComputationError, InputError
from toricres.ordered_groups import (CFReal, GroupElement, LexZ, Ordering,
                                     ValueSemigroup, WeightedLine, as_element, cf_convergents,
                                     compare, exzar_semigroup, group_element_from_json,
                                     minimal_generators, minimal_relation, rational)

TAU = CFReal((1, 2, 3), "arithmetic", start=4, step=1)


def test_compare_examples():
    lex = LexZ(2)
    assert compare(GroupElement((1, 0), lex), GroupElement((0, 5), lex)) is Ordering.GREATER
    assert compare(rational(Fraction(5, 4)), rational(Fraction(21, 8))) is Ordering.LESS
    W = WeightedLine([CFReal((1,)), TAU])
    assert compare(GroupElement((3, -2), W), GroupElement.zero(W)) is Ordering.GREATER
    assert compare(GroupElement((-3, 2), W), GroupElement.zero(W)) is Ordering.LESS
    a = GroupElement((2, 7), W)
    assert compare(a, a) is Ordering.EQUAL


def test_compare_is_a_total_order():
    W = WeightedLine([CFReal((1,)), TAU, CFReal((1,), "periodic", (1,))])
    rng = random.Random(4)
    elems = [GroupElement((rng.randint(-5, 5), rng.randint(-5, 5), rng.randint(-5, 5)), W)
             for _ in range(12)]
    for a, b in itertools.product(elems, repeat=2):
        ab, ba = compare(a, b), compare(b, a)
        assert (ab is Ordering.EQUAL) == (ba is Ordering.EQUAL) == (a.coeffs == b.coeffs)
        if ab is Ordering.LESS:
            assert ba is Ordering.GREATER
    for a, b, c in itertools.product(elems[:6], repeat=3):
        if a < b and b < c:
            assert a < c


def test_weighted_sign_matches_float_values():
    golden = CFReal((1,), "periodic", (1,))
    W = WeightedLine([CFReal((1,)), golden])
    phi = (1 + 5 ** 0.5) / 2
    for a in range(-6, 7):
        for b in range(-6, 7):
            if a == b == 0:
                continue
            expected = 1 if a + b * phi > 0 else -1
            assert GroupElement((a, b), W).sign() == expected


def test_dependent_weights_are_an_error():
    W = WeightedLine([CFReal((1,)), CFReal((2,))])
    with pytest.raises(ComputationError) as err:
        GroupElement((2, -1), W).sign()
    assert err.value.code == "independence-violation-suspected"


def test_mismatched_groups_rejected():
    with pytest.raises(InputError):
        rational(1) + GroupElement((1, 0), LexZ(2))


def test_cf_convergents_examples():
    assert cf_convergents(CFReal((1, 2, 3)), 3) == [(1, 1), (3, 2), (10, 7)]
    assert cf_convergents(CFReal((7,)), 1) == [(7, 1)]
    assert cf_convergents(CFReal((1, 1, 1, 1, 1)), 5) == [(1, 1), (2, 1), (3, 2), (5, 3), (8, 5)]
    with pytest.raises(ComputationError) as err:
        cf_convergents(CFReal((1, 2)), 3)
    assert err.value.code == "cf-exhausted"


def test_convergents_against_sympy():
    rng = random.Random(9)
    for _ in range(25):
        terms = [rng.randint(0, 5)] + [rng.randint(1, 9) for _ in range(rng.randint(1, 10))]
        got = cf_convergents(CFReal(tuple(terms)), len(terms))
        assert got == convergents(terms)
        for (p0, q0), (p1, q1) in zip(got, got[1:]):
            assert abs(p1 * q0 - p0 * q1) == 1


def test_convergents_alternate_around_value():
    x = CFReal((2,), "periodic", (1, 2))
    value = sp.sqrt(3) + 1
    for i, (p, q) in enumerate(cf_convergents(x, 12)):
        if i % 2 == 0:
            assert sp.Rational(p, q) < value
        else:
            assert sp.Rational(p, q) > value


def test_cf_tails_and_json_round_trip():
    assert TAU.term(5) == 6
    g = CFReal((1,), "periodic", (1,))
    assert [g.term(i) for i in range(4)] == [1, 1, 1, 1]
    for x in (TAU, g, CFReal((3, 2))):
        assert CFReal.from_json(x.to_json()) == x
    assert CFReal.from_fraction(Fraction(10, 7)).prefix == (1, 2, 3)


def test_group_element_json_round_trip():
    W = WeightedLine([CFReal((1,)), TAU])
    for e in (rational(Fraction(-5, 4)), GroupElement((1, -3), LexZ(2)), GroupElement((3, -2), W)):
        back = group_element_from_json(e.to_json())
        assert back.coeffs == e.coeffs and back.spec.kind == e.spec.kind


def test_minimal_generators_examples():
    def gens(values):
        return [g.coeffs[0] for g in minimal_generators(values).generators]

    assert gens([2, 3, 4, 5, 6, 7]) == [2, 3]
    assert gens([8, 12, 30, 63, 20]) == [8, 12, 30, 63]
    assert gens([1]) == [1]
    with pytest.raises(InputError):
        minimal_generators([3, 0])


def test_minimal_generators_regenerate_input():
    rng = random.Random(12)
    for _ in range(20):
        values = sorted({rng.randint(2, 30) for _ in range(6)})
        gens = [int(g.coeffs[0]) for g in minimal_generators(values).generators]
        for v in values:
            assert any(v == sum(c * g for c, g in zip(cs, gens))
                       for cs in itertools.product(range(v // min(gens) + 1), repeat=len(gens)))


def test_minimal_relation_examples():
    sg = ValueSemigroup(tuple(as_element(x) for x in (2, 3)))
    rel = minimal_relation(sg, 2)
    assert (rel.n, rel.l_coeffs) == (2, (3,))
    sg = ValueSemigroup(tuple(as_element(x) for x in (8, 12, 30, 63)))
    rel = minimal_relation(sg, 3)
    assert (rel.n, rel.l_coeffs) == (2, (6, 1))
    rel = minimal_relation(sg, 4)
    assert (rel.n, rel.l_coeffs) == (2, (0, 8, 1))
    assert rel.binomial_exponents(4) == ((0, 0, 0, 2), (0, 8, 1, 0))


def test_minimal_relation_is_minimal_by_brute_force():
    rng = random.Random(6)
    for _ in range(15):
        gens = sorted(rng.sample(range(3, 25), 3))
        sg = ValueSemigroup(tuple(as_element(x) for x in gens))
        for i in (2, 3):
            rel = minimal_relation(sg, i)
            g = gens[i - 1]
            assert rel.n * g + sum(c * x for c, x in zip(rel.n_coeffs, gens)) == \
                sum(c * x for c, x in zip(rel.l_coeffs, gens))
            earlier = gens[:i - 1]
            for n in range(1, rel.n):
                assert not any(n * g == sum(c * x for c, x in zip(cs, earlier))
                               for cs in itertools.product(range(n * g // earlier[0] + 1),
                                                           repeat=len(earlier)))


def test_exzar_semigroup():
    values = [g.coeffs[0] for g in exzar_semigroup([2, 2, 2], 3).generators]
    assert values == [Fraction(1, 2), Fraction(5, 4), Fraction(21, 8)]
    assert [g.coeffs[0] for g in exzar_semigroup([3], 1).generators] == [Fraction(1, 3)]
    s = [2, 3, 2, 5]
    assert [g.coeffs[0] for g in exzar_semigroup(s, 4).generators] == exzar_generator_values(s, 4)


def test_exzar_relations_reach_back_two_steps():
    s = [2, 2, 3, 2]
    sg = exzar_semigroup(s, 4)
    for i in range(3, 5):
        rel = minimal_relation(sg, i)
        assert rel.n == s[i - 1]
        assert rel.l_coeffs[i - 2] == 1
        assert not any(rel.n_coeffs)
