import random

import pytest

from conftest import random_poly
from cartaninv.algebras import Derivation
from cartaninv.errors import ParameterError
from cartaninv.modular import delta_of
from cartaninv.symalg import (
    SymPolynomial,
    ad_action,
    ad_partial,
    check_generator_sh,
    check_generator_w,
    commutation_expansion_check,
    d_delta,
    d_gamma,
    is_invariant,
)


def test_ring_ops(hbar_p3):
    rng = random.Random(3)
    F = random_poly(rng, hbar_p3)
    assert (F + (-F)).is_zero()
    one = SymPolynomial.one(hbar_p3)
    assert one * F == F
    u = SymPolynomial.from_label(hbar_p3, "u_{2,2}")
    assert (u * u).terms == {((7, 2),): 1}
    assert u ** 3 == u * u * u


def test_mismatch_errors(hbar_p3, hbar_p5):
    F = SymPolynomial.one(hbar_p3)
    with pytest.raises(ParameterError):
        F + SymPolynomial.one(hbar_p5)
    with pytest.raises(ParameterError):
        F + SymPolynomial.one(hbar_p3, "int")
    with pytest.raises(ParameterError):
        F + SymPolynomial.one(hbar_p3.h_subalgebra)


def test_ad_examples(w1_p3):
    const = SymPolynomial.one(w1_p3)
    d = w1_p3.index["x^(0)d_1"]
    assert ad_action(d, const).is_zero()
    e1 = SymPolynomial.from_label(w1_p3, "x^(2)d_1")
    xd = w1_p3.index["x^(1)d_1"]
    assert ad_action(xd, e1 * e1) == (e1 * e1).scale(2)


def test_ad_leibniz(hbar_p5):
    rng = random.Random(5)
    for _ in range(15):
        F = random_poly(rng, hbar_p5)
        G = random_poly(rng, hbar_p5)
        b = rng.randrange(hbar_p5.dim)
        lhs = ad_action(b, F * G)
        assert lhs == ad_action(b, F) * G + F * ad_action(b, G)


def test_ad_accepts_derivations(hbar_p3):
    rng = random.Random(7)
    F = random_poly(rng, hbar_p3)
    d = hbar_p3.basis[3].derivation + hbar_p3.basis[4].derivation.scale(2)
    want = ad_action(3, F) + ad_action(4, F).scale(2)
    assert ad_action(d, F) == want


def test_int_ring_reduces_to_modp(hbar_p3, w2_p3):
    rng = random.Random(9)
    for alg in (hbar_p3, w2_p3):
        for _ in range(10):
            Fi = random_poly(rng, alg, ring="int")
            b = rng.randrange(alg.dim)
            assert ad_action(b, Fi).reduce_mod() == ad_action(b, Fi.reduce_mod())
            assert d_delta(Fi).reduce_mod() == d_delta(Fi.reduce_mod())


def test_d_delta_examples(hbar_p3, record_p3):
    assert d_delta(SymPolynomial.one(hbar_p3)).is_zero()
    u = SymPolynomial.from_label(hbar_p3, "u_{2,2}")
    assert d_delta(u).is_zero()
    got = d_delta(u * u).with_algebra(hbar_p3.h_subalgebra)
    assert got == record_p3.invariant


def test_d_delta_order_independent(hbar_p3):
    # apply the same multiset of lowering steps in random order
    rng = random.Random(13)
    delta = delta_of(hbar_p3.params)
    for _ in range(8):
        F = random_poly(rng, hbar_p3)
        steps = [ax for ax in range(2) for _ in range(delta[ax])]
        rng.shuffle(steps)
        G = F
        for ax in steps:
            G = ad_partial(G, ax)
        assert G == d_delta(F)


def test_ad_partial_nilpotent_and_kills_images(hbar_p3):
    rng = random.Random(17)
    p = hbar_p3.params.p
    for _ in range(10):
        F = random_poly(rng, hbar_p3)
        for ax in range(2):
            G = F
            for _ in range(p):
                G = ad_partial(G, ax)
            assert G.is_zero()
            assert ad_partial(d_delta(F), ax).is_zero()


def test_workers_match_sequential(hbar_p3):
    rng = random.Random(19)
    F = random_poly(rng, hbar_p3, nterms=6)
    assert d_delta(F, workers=2) == d_delta(F)


def test_is_invariant(hbar_p3, record_p3):
    assert is_invariant(SymPolynomial.one(hbar_p3)).is_invariant
    rep = is_invariant(SymPolynomial.from_label(hbar_p3, "u_{1,1}"))
    assert not rep.is_invariant
    idx, img = rep.witness
    assert img and not ad_action(idx, SymPolynomial.from_label(hbar_p3, "u_{1,1}")).is_zero()
    assert is_invariant(record_p3.invariant).is_invariant


def test_check_generator_w(w1_p3):
    zero = SymPolynomial.zero(w1_p3)
    assert check_generator_w(zero).ok
    e1 = SymPolynomial.from_label(w1_p3, "x^(2)d_1")
    assert check_generator_w(e1 * e1).ok
    bad = check_generator_w(e1)
    assert not bad.ok and bad.failures


def test_check_generator_w_rejects_other_kinds(hbar_p3):
    with pytest.raises(ParameterError):
        check_generator_w(SymPolynomial.one(hbar_p3))


def test_check_generator_sh(hbar_p3):
    u = SymPolynomial.from_label(hbar_p3, "u_{2,2}")
    assert check_generator_sh(u * u).ok
    assert check_generator_sh(SymPolynomial.zero(hbar_p3)).ok
    bad = check_generator_sh(SymPolynomial.from_label(hbar_p3, "u_{1,1}"))
    assert not bad.ok
    # every failure is a grade >= 0 witness with a nonzero defect
    for desc, defect in bad.failures:
        assert defect


def test_commutation_expansion(hbar_p3, w2_p3):
    rng = random.Random(23)
    params = hbar_p3.params
    d1 = Derivation.partial(params, 0)
    u = hbar_p3.basis[-1].derivation
    zdelta = Derivation.monomial(params, (2, 2), 0)
    for _ in range(5):
        F = random_poly(rng, hbar_p3, max_degree=2, nterms=3)
        assert commutation_expansion_check(d1, F)
        assert commutation_expansion_check(u, F)
        Fw = random_poly(rng, w2_p3, max_degree=2, nterms=3)
        assert commutation_expansion_check(zdelta, Fw)


def test_with_algebra_guard(hbar_p3):
    u2 = SymPolynomial.from_label(hbar_p3, "u_{2,2}") ** 2
    with pytest.raises(ParameterError):
        u2.with_algebra(hbar_p3.h_subalgebra)


def test_homogeneous_degree(hbar_p3):
    u = SymPolynomial.from_label(hbar_p3, "u_{2,2}")
    v = SymPolynomial.from_label(hbar_p3, "u_{1,1}")
    assert (u * u).homogeneous_degree() == 2
    assert (u + u * v).homogeneous_degree() is None
    assert SymPolynomial.zero(hbar_p3).homogeneous_degree() == 0
