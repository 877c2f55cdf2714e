import itertools
import math

import numpy as np
import pytest

from ecendo.curve import Curve, batch_counts, hasse_interval
from ecendo.errors import DomainMismatch, ScaleLimit, SingularCurve, Supersingular
from ecendo.field import GF, standard_field

F5 = GF(5)


@pytest.fixture(scope="module")
def E():
    return Curve(F5, 0, 0, 0, 1, 1)  # y^2 = x^3 + x + 1


def test_invariants(E):
    assert E.n_points == 9
    assert E.t == -3 and E.ordinary
    assert E.frobenius_discriminant == -11
    assert (E.D_K, E.v) == (-11, 1)


def test_brute_force_count(E):
    brute = 1 + sum(
        1 for x in range(5) for y in range(5) if (y * y - x**3 - x - 1) % 5 == 0
    )
    assert brute == E.n_points


def test_group_law_examples(E):
    G = E.group()
    pts = list(G.points())
    assert len(pts) == 9
    O = G.infinity
    for P in pts:
        assert P + O == P
        assert (P + (-P)).is_infinity
        assert (9 * P).is_infinity


def test_orders_and_torsion(E):
    G = E.group()
    orders = sorted(G.point_order(P) for P in G.points())
    assert orders.count(9) == 6 and orders.count(3) == 2 and orders.count(1) == 1
    P = next(P for P in G.points() if G.point_order(P) == 9)
    assert G.point_order(3 * P) == 3
    assert G.point_order(G.infinity) == 1
    assert E.rational_torsion(1) == (1, 1)
    assert E.rational_torsion(3) == (1, 3)
    M = E.frobenius_period(3)
    assert M <= 12
    assert E.rational_torsion(3, m=M) == (3, 3)
    assert all(E.rational_torsion(3, m=m) != (3, 3) for m in range(1, M))


def test_frobenius(E):
    G1, G2 = E.group(1), E.group(2)
    for P in G1.points():
        assert P.frobenius() == P
    assert G2.infinity.frobenius().is_infinity
    rational = {P.key() for P in map(G1.embed_into(G2), G1.points())}
    moved = [P for P in G2.points() if P.key() not in rational]
    assert moved
    for P in moved:
        assert P.frobenius() != P
        assert P.frobenius().frobenius() == P


def test_singular_and_supersingular():
    with pytest.raises(SingularCurve):
        Curve(F5, 0, 0, 0, 0, 0)
    with pytest.raises(Supersingular):
        Curve(F5, 0, 0, 0, 0, 1)  # y^2 = x^3 + 1, t = 0
    E = Curve(F5, 0, 0, 0, 0, 1, allow_supersingular=True)
    assert E.t == 0 and not E.ordinary


def test_domain_mismatch(E):
    other = Curve(F5, 0, 0, 0, 2, 1)
    P1 = next(p for p in E.group().points() if p.x is not None)
    Q1 = next(p for p in other.group().points() if p.x is not None)
    with pytest.raises(DomainMismatch):
        P1 + Q1


def test_count_budget():
    E = Curve(standard_field(101, 1), 0, 0, 0, 1, 1)
    with pytest.raises(ScaleLimit):
        E.count_points(4)


@pytest.mark.parametrize(
    "p,k,coeffs",
    [(7, 1, (0, 0, 0, 1, 3)), (2, 3, (1, 0, 0, 0, 1)), (3, 2, (0, 1, 0, 0, 1)), (13, 1, (0, 0, 0, 1, 1))],
)
def test_count_matches_trace_recurrence(p, k, coeffs):
    E = Curve(standard_field(p, k), *coeffs)
    for m in range(1, 4):
        if E.q**m > 5 * 10**5:
            break
        n = E.count_points(m)
        assert n == E.order(m)
        lo, hi = hasse_interval(E.q**m)
        assert lo <= n <= hi


SMALL_CURVES = [
    (2, 1, (1, 0, 0, 0, 1)),
    (2, 2, (1, 1, 0, 0, 1)),
    (3, 1, (0, 1, 0, 0, 2)),
    (5, 1, (1, 2, 3, 4, 0)),
    (7, 1, (0, 0, 0, 3, 1)),
    (11, 1, (0, 0, 0, 1, 3)),
    (29, 1, (0, 0, 0, 1, 1)),
    (29, 1, (0, 0, 0, 2, 3)),
]


@pytest.mark.parametrize("p,k,coeffs", SMALL_CURVES)
def test_associativity_exhaustive(p, k, coeffs):
    E = Curve(standard_field(p, k), *coeffs)
    assert E.n_points <= 40
    pts = list(E.group().points())
    for P, Q, R in itertools.product(pts, repeat=3):
        assert (P + Q) + R == P + (Q + R)
        assert P + Q == Q + P


@pytest.mark.parametrize("m", [1, 2, 3])
def test_frobenius_endomorphism_and_charpoly(m):
    E = Curve(standard_field(7, 1), 0, 0, 0, 1, 3)
    G = E.group(m)
    rng = np.random.default_rng(m)
    for _ in range(30):
        P, Q = G.random_point(rng), G.random_point(rng)
        assert (P + Q).frobenius() == P.frobenius() + Q.frobenius()
        pi_P = P.frobenius()
        assert (pi_P.frobenius() - E.t * pi_P + E.q * P).is_infinity


def test_batch_counts_match_curve():
    F = standard_field(3, 2)
    rows = np.array([(0, 1, 0, 0, 1), (0, 1, 0, 0, 2), (0, 2, 0, 0, 1)])
    counts = batch_counts(F, rows)
    for row, n in zip(rows, counts):
        assert Curve(F, *(F.element(int(c)) for c in row)).n_points == n


def test_char2_points_satisfy_equation():
    F = standard_field(2, 4)
    E = Curve(F, 1, 0, 0, 0, 1)
    G = E.group()
    pts = [P for P in G.points() if P.x is not None]
    assert len(pts) + 1 == E.n_points
    for P in pts:
        assert G.contains(P.x, P.y)
    assert math.gcd(E.t, 2) == 1
