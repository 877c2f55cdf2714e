import math

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from ecendo.cm_order import CMOrder, sieve_coprime_count
from ecendo.errors import ConductorCollision, NotInvertible

ORDERS = [CMOrder(-3), CMOrder(-4), CMOrder(-7), CMOrder(-8), CMOrder(-11), CMOrder(-15),
          CMOrder(-4, 3), CMOrder(-3, 2), CMOrder(-7, 2)]


def test_order_invariants():
    for O in ORDERS:
        assert O.D == O.u**2 * O.D_K < 0
        assert O.unit_count == {-3: 6, -4: 4}.get(O.D, 2)
    with pytest.raises(ValueError):
        CMOrder(-12)  # not fundamental
    with pytest.raises(ValueError):
        CMOrder(5)


def test_element_norms():
    O = CMOrder(-11)
    assert O.one.norm() == 1
    assert O.omega.norm() == 33
    # sqrt(-11) with sympy as the oracle
    w = (sympy.Integer(-11) + sympy.sqrt(-11)) / 2
    assert sympy.expand(w * sympy.conjugate(w)) == 33
    a = O.element(3, -2)
    assert a.conj().conj() == a


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(ORDERS), *(st.integers(-50, 50) for _ in range(4)))
def test_norm_multiplicative(O, x1, y1, x2, y2):
    a, b = O.element(x1, y1), O.element(x2, y2)
    assert (a * b).norm() == a.norm() * b.norm()
    assert a.norm() >= 0
    assert a * b == b * a
    z = O.complex_embedding(a * b)
    assert abs(z - O.complex_embedding(a) * O.complex_embedding(b)) < 1e-6 * (1 + abs(z))


def _coprime_ideals(O, bound):
    return [a for a in O.ideals_up_to(bound) if math.gcd(a.norm, O.u) == 1]


@pytest.mark.parametrize("O", ORDERS, ids=repr)
def test_ideal_products(O):
    ideals = _coprime_ideals(O, 30)
    unit = O.unit_ideal
    for a in ideals:
        assert a * unit == a
        assert a.least_integer == a.s
        assert all(not a.contains(n, 0) for n in range(1, a.s))
        for b in ideals[:8]:
            assert (a * b).norm == a.norm * b.norm
            assert a * b == b * a
    for a, b, c in zip(ideals, ideals[3:], ideals[5:]):
        assert (a * b) * c == a * (b * c)


def test_ideal_is_closed_under_omega():
    for O in ORDERS:
        for a in O.ideals_up_to(25):
            x, y = O._mul(a.b, a.c, 0, 1)
            assert a.contains(x, y)
            assert len(a.residues()) == a.norm


@pytest.mark.parametrize("O", ORDERS[:6], ids=repr)
def test_multiplicative_functions(O):
    one = O.unit_ideal
    assert (O.totient(one), O.mobius(one), O.omega_count(one)) == (1, 1, 0)
    for t in (3, 5, 7, 11, 13):
        if O.D % t == 0:
            continue
        a = O.ideal((t, 0))
        # units of O/(t): residues with norm prime to t
        units = sum(1 for x in range(t) for y in range(t) if math.gcd(O.norm_form(x, y), t) == 1)
        assert O.totient(a) == units
        if O.splitting(t) == "inert":
            assert units == t * t - 1
        else:
            assert units == (t - 1) ** 2
    for a in _coprime_ideals(O, 150):
        n = a.norm
        assert O.omega_count(a) <= 2 * len(sympy.primefactors(n))
        assert O.totient(a) * n >= sympy.totient(n) ** 2
        assert O.totient(a) == sum(1 for r in a.residues() if O.is_coprime(r, a))


def test_conductor_collision():
    O = CMOrder(-4, 3)
    a = O.ideal((3, 0))
    with pytest.raises(ConductorCollision):
        O.totient(a)
    with pytest.raises(ConductorCollision):
        O.count_coprime_norm_ball(a, 10)


def test_count_norm_ball_examples():
    G = CMOrder(-4)
    assert G.count_norm_ball(G.unit_ideal, 2) == 8
    assert G.count_norm_ball(G.unit_ideal, 0.5) == 0
    a = G.ideal((3, 0))
    assert G.count_norm_ball(a, 8) == 0
    prev = 0
    for J in range(0, 200, 7):
        c = G.count_norm_ball(a, J)
        assert c >= prev
        prev = c


@pytest.mark.parametrize("D_K", [-4, -7, -8, -11])
def test_lattice_count_main_term(D_K):
    O = CMOrder(D_K)
    J = 10**4
    count = O.count_norm_ball(O.unit_ideal, J)
    ratio = count / (O.unit_count * O.lemma7_main_term(O.unit_ideal, J))
    assert 0.9 <= ratio <= 1.1


def test_ball_enumeration_matches_count():
    for O in ORDERS:
        for a in O.ideals_up_to(12):
            for J in (1, 10, 57):
                pts = list(O.ball(a, J))
                assert len(pts) == O.count_norm_ball(a, J)
                assert all(0 < O.norm_form(x, y) <= J and a.contains(x, y) for x, y in pts)


def test_coprime_counts():
    import random

    rng = random.Random(5)
    pairs = []
    for O in ORDERS:
        ideals = _coprime_ideals(O, 60)
        pairs += [(O, rng.choice(ideals), rng.randint(1, 300)) for _ in range(6)]
    assert len(pairs) >= 50
    for O, a, J in pairs:
        assert O.count_coprime_norm_ball(a, J) == O.count_coprime_inclusion_exclusion(a, J)
    O = ORDERS[1]
    assert O.count_coprime_norm_ball(O.unit_ideal, 50) == O.count_norm_ball(O.unit_ideal, 50)
    assert O.count_coprime_norm_ball(O.ideal((5, 0)), 0) == 0


def test_divisors_complete():
    O = CMOrder(-7)
    a = O.ideal((8, 0))
    divs = O.divisors(a)
    assert all(d.contains_ideal(a) for d in divs)
    brute = [d for d in O.ideals_up_to(64) if d.contains_ideal(a)]
    assert sorted(map(repr, divs)) == sorted(map(repr, brute))


def test_representation_counts():
    O = CMOrder(-4)
    a = O.ideal((7, 0))
    tau = (1, 1)
    T = O.residue_order(tau, a)
    units = O.unit_residues(a)
    big = O.count_representations
    counts = [big(tau, r, a, T, a.norm**2) for r in units]
    assert max(counts) >= T
    assert all(big(tau, r, a, T, 0) == 0 for r in units)
    assert sum(counts) == T * O.count_coprime_norm_ball(a, a.norm**2)
    with pytest.raises(NotInvertible):
        O.residue_order((7, 0), a)


def test_sieve_count():
    for ell in range(1, 60):
        for J in range(0, 80):
            assert sieve_coprime_count(J, ell) == sum(1 for n in range(1, J + 1) if math.gcd(n, ell) == 1)
