import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ecendo.errors import DivisionByZero, DomainMismatch, TrivialCharacter
from ecendo.field import GF, additive_character, standard_field, subfield_embedding

F5 = GF(5)
F25 = GF(5, 2, (2, 0))  # X^2 + 2


def test_prime_field_examples():
    assert F5(3) + F5(4) == F5(2)
    assert F5(2).inverse() == F5(3)
    assert F5(1) / F5(2) == F5(3)
    with pytest.raises(DivisionByZero):
        F5(0).inverse()


def test_extension_reduction():
    X = F25([0, 1])
    assert X * X == F25(3)
    assert (X * X).coords() == (3, 0)


def test_trace():
    assert F5(3).trace() == 3
    assert F25(0).trace() == 0
    X = F25([0, 1])
    direct = X + X**5
    assert direct.coords()[1] == 0
    assert X.trace() == direct.coords()[0]


def test_coords():
    assert F5(3).coords() == (3,)
    assert F25([2, 3]).coords() == (2, 3)
    assert F25(0).coords() == (0, 0)


def test_characters():
    assert additive_character(F5(0), 1) == 1
    assert cmath.isclose(additive_character(F5(1), 1), cmath.exp(2j * math.pi / 5))
    assert abs(sum(additive_character(a, 1) for a in F5.elements())) < 1e-12
    with pytest.raises(TrivialCharacter):
        additive_character(F5(1), 5)


@pytest.mark.parametrize("p,k", [(2, 1), (3, 2), (5, 3), (2, 6), (7, 2)])
def test_character_orthogonality(p, k):
    F = standard_field(p, k)
    codes = np.arange(F.q)
    # psi_c(xi) = psi_1(c xi) runs over all q additive characters
    tr = F.vtrace(F.vmul(codes[:, None], codes[None, :]))
    total = np.exp(2j * np.pi * tr / p).sum(axis=0) / F.q
    expected = np.zeros(F.q)
    expected[0] = 1
    assert np.allclose(total, expected, atol=1e-9)


@pytest.mark.parametrize("p,k", [(2, 12), (3, 7), (5, 5), (7, 4), (71, 2), (4999, 1)])
def test_frobenius_fixes_prime_field(p, k):
    F = standard_field(p, k)
    codes = np.arange(F.q)
    frob = _vpow(F, codes, p)
    fixed = np.flatnonzero(frob == codes)
    assert list(fixed) == [F.from_digits([c] + [0] * (k - 1)) for c in range(p)]
    # additivity on a sample of pairs
    rng = np.random.default_rng(0)
    a, b = rng.integers(F.q, size=(2, 200))
    assert (_vpow(F, F.vadd(a, b), p) == F.vadd(_vpow(F, a, p), _vpow(F, b, p))).all()


def _vpow(F, A, e):
    out = np.full_like(A, F.from_int(1))
    base = A.copy()
    while e:
        if e & 1:
            out = F.vmul(out, base)
        base = F.vmul(base, base)
        e >>= 1
    return out


def test_vectorized_matches_scalar():
    for F in (standard_field(3, 5), standard_field(2, 7), standard_field(5, 3)):
        rng = np.random.default_rng(1)
        a, b = rng.integers(F.q, size=(2, 300))
        assert list(F.vadd(a, b)) == [F.add(int(x), int(y)) for x, y in zip(a, b)]
        assert list(F.vmul(a, b)) == [F.mul(int(x), int(y)) for x, y in zip(a, b)]
        assert list(F.vneg(a)) == [F.neg(int(x)) for x in a]
        nz = a[a != 0]
        assert list(F.vinv(nz)) == [F.inv(int(x)) for x in nz]


def test_default_modulus_is_deterministic():
    assert GF(3, 4).modulus == GF(3, 4).modulus
    with pytest.raises(ValueError):
        GF(5, 2, (1, 0))  # X^2 + 1 = (X - 2)(X + 2)
    with pytest.raises(ValueError):
        GF(6)


def test_domain_mismatch():
    with pytest.raises(DomainMismatch):
        F5(1) + GF(7)(1)


def test_sqrt():
    F = standard_field(3, 3)
    for a in F.elements():
        if a.is_square():
            r = a.sqrt()
            assert r * r == a


def test_subfield_embedding_is_a_homomorphism():
    small, big = standard_field(2, 2), standard_field(2, 6)
    emb = subfield_embedding(small, big)
    for a in range(small.q):
        for b in range(small.q):
            assert emb(small.mul(a, b)) == big.mul(emb(a), emb(b))
            assert emb(small.add(a, b)) == big.add(emb(a), emb(b))


fields = st.sampled_from([standard_field(2, 4), standard_field(3, 3), GF(101), F25])


@settings(max_examples=200, deadline=None)
@given(fields, st.data())
def test_field_axioms(F, data):
    a, b, c = (F.element(data.draw(st.integers(0, F.q - 1))) for _ in range(3))
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a and a + b == b + a
    assert a * (b + c) == a * b + a * c
    assert a - a == F.zero
    if a:
        assert a * a.inverse() == F.one
