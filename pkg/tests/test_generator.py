import pytest

from ecendo import corpus
from ecendo.curve import Curve
from ecendo.endo import determine_end_ring
from ecendo.errors import InvalidConfiguration, NotInvertible
from ecendo.field import standard_field
from ecendo.generator import POLE, X, Y, GeneratorState, Monomial, Observable


@pytest.fixture(scope="module")
def ring():
    return determine_end_ring(Curve(standard_field(13, 1), 0, 0, 0, 1, 1))


@pytest.fixture(scope="module")
def P(ring):
    G = ring.curve.group()
    return max((P for P in G.points() if P.x is not None), key=lambda P: (G.point_order(P), P.x))


@pytest.fixture(scope="module")
def tau(ring, P):
    a = ring.annihilator(P).ideal
    return next(r for r in ring.order.unit_residues(a) if ring.order.residue_order(r, a) > 2)


def test_observables():
    assert X.pole_degree == 2 and Y.pole_degree == 3
    assert Monomial(1, 1).pole_degree == 5
    assert Observable.parse("monomial(2,1)") == Monomial(2, 1)
    with pytest.raises(InvalidConfiguration):
        Observable(0, 0)
    with pytest.raises(InvalidConfiguration):
        Observable.parse("z")
    assert Monomial(3, 0).admissible(5)
    assert not Monomial(3, 0).admissible(3)


def test_identity_tau_is_constant(ring, P):
    state = GeneratorState(ring, P, ring.order.one)
    assert state.T == 1
    assert state.emit(X, 5) == [P.xe] * 5


def test_integer_tau_is_power_generator(ring, P):
    G = P.group
    a = ring.annihilator(P).ideal
    e = next(e for e in range(2, 20) if ring.order.is_coprime((e, 0), a))
    state = GeneratorState(ring, P, (e, 0))
    for n in range(1, 8):
        assert state.next() == G.mul(pow(e, n), P)


def test_random_access_and_periodicity(ring, P):
    O = ring.order
    for r in O.unit_residues(ring.annihilator(P).ideal)[:15]:
        state = GeneratorState(ring, P, r)
        seq = [state.next() for _ in range(2 * state.T)]
        assert seq[state.T - 1] == P
        assert seq[: state.T] == seq[state.T :]
        assert all(state.point_at(n + 1) == seq[n] for n in range(len(seq)))


def test_emit_blocks_repeat(ring, P, tau):
    state = GeneratorState(ring, P, tau)
    first = state.emit(X, state.T)
    assert state.emit(X, state.T) == first
    assert state.clone().emit(Y, 3) == state.clone().emit(Y, 3)


def test_shift_consistency(ring, P, tau):
    state = GeneratorState(ring, P, tau)
    k = 2
    shifted = GeneratorState(ring, state.point_at(k), tau)
    assert state.clone().advance(k).emit(X, 10) == shifted.emit(X, 10)


def test_pole_marks_with_non_coprime_tau():
    ring = determine_end_ring(Curve(standard_field(5, 1), 0, 0, 0, 1, 1))
    G = ring.curve.group()
    P = next(P for P in G.points() if P.x is not None and G.point_order(P) == 9)
    with pytest.raises(NotInvertible, match="not purely periodic"):
        GeneratorState(ring, P, (3, 0))
    state = GeneratorState(ring, P, (3, 0), allow_tail=True)
    out = state.emit(Monomial(1, 1), 3)
    assert out[0] is not POLE and out[1] is POLE and out[2] is POLE
    assert list(state.clone().emit_codes(X, 1)) == [-1]


def test_tail_iff_not_coprime():
    instances = corpus.generator_instances(per_curve=2)
    coprime = 0
    for _, state in instances[:20]:
        tail, period = state.tail_and_period()
        assert tail == 0 and period == state.T
        coprime += 1
    assert coprime == 20
    engineered = 0
    for _, state in instances:
        ann = state.ann.ideal
        for x, y in ann.residues():
            if (x, y) != (0, 0) and not state.ring.order.is_coprime((x, y), ann):
                bad = GeneratorState(state.ring, state.P, (x, y), allow_tail=True)
                tail, _ = bad.tail_and_period()
                assert tail > 0
                engineered += 1
                break
        if engineered == 5:
            break
    assert engineered == 5


def test_equal_points_iff_equal_residues():
    checked = 0
    for _, state in corpus.generator_instances(per_curve=1):
        if state.T > 500:
            continue
        a = state.ann.ideal
        pts = [state.point_at(n) for n in range(state.T + 1)]
        res = [a.reduce(*(state.alpha**n)) for n in range(state.T + 1)]
        for n in range(len(pts)):
            for m in range(len(pts)):
                assert (pts[n] == pts[m]) == (res[n] == res[m])
        checked += 1
    assert checked >= 10
