import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from ecendo.curve import Curve
from ecendo.endo import determine_end_ring
from ecendo.errors import DenominatorCollision, NotInvertible, Supersingular, UncertifiedRing
from ecendo.field import standard_field


def ring_of(p, k, coeffs, **kw):
    return determine_end_ring(Curve(standard_field(p, k), *coeffs), **kw)


@pytest.fixture(scope="module")
def F5ring():
    return ring_of(5, 1, (0, 0, 0, 1, 1))


@pytest.fixture(scope="module")
def F7ring():
    # y^2 = x^3 + 2 over F_7: t = -1, v = 3 and full rational 3-torsion
    return ring_of(7, 1, (0, 0, 0, 0, 2))


def test_trivial_conductor(F5ring):
    assert F5ring.certified and F5ring.u == 1
    assert F5ring.order.D == -11


def test_conductor_descends(F7ring):
    E = F7ring.curve
    assert (E.t, E.D_K, E.v) == (-1, -3, 3)
    assert E.rational_torsion(3) == (3, 3)
    assert F7ring.u == 1 and F7ring.order.D == -3
    # (pi - 1)/3 is integral: pi acts as 1 on E[3]
    G = E.group()
    for P in G.torsion_points(3):
        assert P.frobenius() == P
    assert F7ring.to_element(Fraction(-1, 3), Fraction(1, 3)) is not None


def test_nontrivial_conductor_certified():
    ring = ring_of(19, 1, (0, 0, 0, 2, 2))
    assert ring.certified and ring.u == 2
    assert ring.order.D == 4 * ring.curve.D_K


def test_supersingular_rejected():
    E = Curve(standard_field(5, 1), 0, 0, 0, 0, 1, allow_supersingular=True)
    with pytest.raises(Supersingular):
        determine_end_ring(E)


def test_uncertified_ring_refuses():
    E = Curve(standard_field(61, 1), 0, 0, 0, 2, 7)
    ring = determine_end_ring(E, budget=100)
    if ring.certified:
        pytest.skip("conductor decided without enumeration")
    with pytest.raises(UncertifiedRing):
        ring.annihilator(next(P for P in E.group().points() if P.x is not None))


def test_frobenius_element(F5ring, F7ring):
    for ring in (F5ring, F7ring):
        E = ring.curve
        assert ring.frobenius.norm() == E.q
        assert ring.frobenius.trace() == E.t
        assert ring.frobenius_prime.norm == E.p


def test_apply_examples(F5ring):
    G = F5ring.curve.group()
    one, pi = F5ring.endomorphism(1), F5ring.endomorphism(0, 1)
    for P in G.points():
        assert F5ring.apply(one, P) == P
        assert F5ring.apply(pi, P) == P
        for e in (-3, 2, 7):
            assert F5ring.apply(F5ring.endomorphism(e), P) == G.mul(e, P)


def test_apply_fractional(F7ring):
    G = F7ring.curve.group()
    tau = F7ring.endomorphism(Fraction(-1, 3), Fraction(1, 3))
    for P in G.points():
        if P.x is None:
            continue
        if G.point_order(P) % 3:
            # 3 is invertible modulo ord(P): the modular lift applies
            assert F7ring.apply(tau, P, strict=True) == F7ring.apply_element(tau.element, P)
        else:
            with pytest.raises(DenominatorCollision):
                F7ring.apply(tau, P, strict=True)
            assert F7ring.apply(tau, P) == F7ring.apply_element(tau.element, P)


@pytest.mark.parametrize("spec", [(5, 1, (0, 0, 0, 1, 1)), (7, 1, (0, 0, 0, 0, 2)), (13, 1, (0, 0, 0, 1, 1))])
def test_apply_is_additive_and_multiplicative(spec):
    ring = ring_of(*spec)
    G = ring.curve.group()
    pts = list(G.points())
    O = ring.order
    elems = [O.element(x, y) for x, y in itertools.product(range(-2, 3), repeat=2)]
    rng = np.random.default_rng(0)
    for _ in range(40):
        P, Q = (pts[int(i)] for i in rng.integers(len(pts), size=2))
        a = elems[int(rng.integers(len(elems)))]
        assert ring.apply_element(a, P + Q) == ring.apply_element(a, P) + ring.apply_element(a, Q)
    for P in pts:
        for a, b in itertools.product(elems[:10], repeat=2):
            assert ring.apply_element(a * b, P) == ring.apply_element(a, ring.apply_element(b, P))


def test_annihilator_properties(F5ring):
    G = F5ring.curve.group()
    O = F5ring.order
    for P in G.points():
        if P.x is None:
            continue
        ann = F5ring.annihilator(P)
        a = ann.ideal
        ell = G.point_order(P)
        assert ann.ell == ell == a.least_integer
        assert math.isqrt(a.norm) <= ell <= a.norm
        for g in a.generators:
            assert F5ring.apply_element(g, P).x is None
        # rational P: pi = 1 mod ann(P)
        assert a.contains(F5ring.frobenius.x - 1, F5ring.frobenius.y)
        # closure under w
        assert a.contains(*O._mul(a.b, a.c, 0, 1))
        for k in (2, 3, 4):
            kP = G.mul(k, P)
            if kP.x is not None:
                assert F5ring.annihilator(kP).ideal.contains_ideal(a)
        # brute force: the kernel of (x, y) -> (x + y w) P
        kernel = {(x, y) for x in range(ell) for y in range(ell)
                  if F5ring.apply_element((x, y), P).x is None}
        assert kernel == {(x, y) for x in range(ell) for y in range(ell) if a.contains(x, y)}


def test_generic_point_has_prime_norm(F5ring):
    G = F5ring.curve.group()
    P = next(P for P in G.points() if P.x is not None and G.point_order(P) == 9)
    assert F5ring.annihilator(P).norm == 9


def test_full_inert_torsion_gives_principal_annihilator():
    ring = ring_of(7, 1, (0, 0, 0, 0, 1))  # y^2 = x^3 + 1 over F_7
    G = ring.curve.group()
    assert ring.order.splitting(2) == "inert"
    assert len(G.torsion_points(2)) == 4
    P = next(P for P in G.torsion_points(2) if P.x is not None)
    ann = ring.annihilator(P)
    assert ann.ideal == ring.order.ideal((2, 0)) and ann.norm == 4


def test_multiplicative_order():
    ring = ring_of(7, 1, (0, 0, 0, 0, 1))
    G = ring.curve.group()
    P = next(P for P in G.torsion_points(2) if P.x is not None)
    ann = ring.annihilator(P)
    O = ring.order
    assert ring.multiplicative_order(O.one, ann) == 1
    periods = {r: ring.multiplicative_order(O.element(*r), ann) for r in O.unit_residues(ann.ideal)}
    assert max(periods.values()) == 3
    assert all(T <= ann.norm - 1 for T in periods.values())
    with pytest.raises(NotInvertible):
        ring.multiplicative_order(O.element(2, 0), ann)


@pytest.mark.parametrize("spec", [(5, 1, (0, 0, 0, 1, 1)), (13, 1, (0, 0, 0, 7, 0)), (3, 2, (0, 1, 0, 0, 1))])
def test_residue_and_point_periods_agree(spec):
    ring = ring_of(*spec)
    G = ring.curve.group()
    O = ring.order
    for P in [P for P in G.points() if P.x is not None][:6]:
        ann = ring.annihilator(P)
        for r in O.unit_residues(ann.ideal)[:10]:
            T_res = O.residue_order(r, ann.ideal)
            assert T_res == ring.point_period(r, P, ann.norm)
