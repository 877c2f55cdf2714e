import pytest

from ecendo import corpus, lemmas
from ecendo.analysis import linear_complexity
from ecendo.cm_order import CMOrder
from ecendo.curve import Curve
from ecendo.endo import determine_end_ring
from ecendo.errors import InvalidConfiguration
from ecendo.field import standard_field
from ecendo.generator import X


@pytest.fixture(scope="module")
def ring():
    return determine_end_ring(Curve(standard_field(5, 1), 0, 0, 0, 1, 1))


def test_torsion_of_two(ring):
    a = ring.order.ideal((2, 0))
    assert a in lemmas.admissible_ideals(ring, 4)
    rep = lemmas.verify_lemma("L2", ring, a)
    assert rep.passed and rep.details["count"] == 4


def test_admissible_ideals_avoid_frobenius_prime(ring):
    ids = lemmas.admissible_ideals(ring, 30)
    assert ids
    for a in ids:
        assert not ring.frobenius_prime.contains_ideal(a) or a.s == 1
        assert (a + ring.frobenius_prime).s == 1


def test_annihilator_and_lifting(ring):
    lifted = 0
    for a in lemmas.admissible_ideals(ring, 9):
        assert lemmas.verify_annihilator_exists(ring, a).passed
        if ring.curve.q ** ring.frobenius_order_mod(a.scale((2, 0))) > corpus.LIFT_FIELD_LIMIT:
            continue
        rep = lemmas.verify_lifting(ring, a, (2, 0))
        assert rep.passed, rep.line()
        lifted += 1
    assert lifted >= 3
    with pytest.raises(InvalidConfiguration):
        lemmas.verify_lifting(ring, ring.order.ideal((2, 0)), (ring.frobenius.x, ring.frobenius.y))


def test_function_degree(ring):
    rep = lemmas.verify_function_degree(ring, X, [1, 2], [(1, 0), (1, 1)], m=2)
    assert rep.passed
    assert rep.details["zeros"] <= rep.details["degree_bound"]
    with pytest.raises(InvalidConfiguration):
        lemmas.verify_function_degree(ring, X, [0], [(1, 0)])


def test_sieve_small():
    rep = lemmas.verify_sieve(ell_max=300)
    assert rep.passed and rep.details["min_ratio"] >= 0.5


def test_lattice_reports_are_not_verdicts():
    O = CMOrder(-7)
    rep = lemmas.verify_lattice_count(O, O.unit_ideal, 5000)
    assert not rep.exact
    assert 0.9 < rep.details["ratio"] < 1.1


def test_coprime_and_partition():
    O = CMOrder(-4)
    for a in O.ideals_up_to(30)[1:8]:
        assert lemmas.verify_coprime_count(O, a, 200).passed
        if O.is_coprime((1, 1), a):
            assert lemmas.verify_partition(O, (1, 1), a, 150).passed


def test_shift_annihilator_lemma():
    _, state = corpus.generator_instances(per_curve=1)[4]
    F = state.curve.field
    codes = state.clone().emit_codes(X, state.T)
    L = linear_complexity(F, list(codes) * 2)
    rep = lemmas.verify_shift_annihilator(F, codes, list(range(L + 1)), state.T)
    assert rep.passed
    with pytest.raises(InvalidConfiguration):
        lemmas.verify_shift_annihilator(F, codes, list(range(L)), state.T)


def test_unknown_lemma():
    with pytest.raises(InvalidConfiguration):
        lemmas.verify_lemma("L1")


def test_lemma_corpus_all_pass():
    reports, skipped = corpus.run_lemma_corpus()
    kinds = {r.lemma for r in reports}
    assert kinds == {"L2", "L3", "L4", "L5", "L6", "L7", "L8", "L9"}
    failing = [r.line() for r in reports if r.exact and not r.passed]
    assert not failing
    capped, capped_skips = corpus.run_lemma_corpus(budget=5)
    assert len(capped) + len(capped_skips) == 5
