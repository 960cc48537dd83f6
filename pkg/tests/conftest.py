from __future__ import annotations

import json
import random
from pathlib import Path

import pytest

from cartaninv.algebras import build_hbar, build_s, build_w
from cartaninv.modular import FieldParams
from cartaninv.pipeline import delta_star
from cartaninv.symalg import SymPolynomial

FIXTURES = Path(__file__).parent / "fixtures"


def load_fixture(name):
    return json.loads((FIXTURES / name).read_text())


def random_poly(rng, algebra, max_degree=3, nterms=4, ring="modp"):
    """Random sparse polynomial with coefficients in [1, p)."""
    terms = {}
    for _ in range(nterms):
        d = rng.randint(1, max_degree)
        mono = {}
        for _ in range(d):
            v = rng.randrange(algebra.dim)
            mono[v] = mono.get(v, 0) + 1
        terms[tuple(sorted(mono.items()))] = rng.randrange(1, algebra.params.p)
    return SymPolynomial(algebra, ring, terms)


def random_derivation(rng, algebra):
    out = None
    for _ in range(rng.randint(1, 3)):
        b = algebra.basis[rng.randrange(algebra.dim)].derivation
        b = b.scale(rng.randrange(1, algebra.params.p))
        out = b if out is None else out + b
    return out


@pytest.fixture(scope="session")
def params3():
    return FieldParams(3, 2, (1, 1))


@pytest.fixture(scope="session")
def params5():
    return FieldParams(5, 2, (1, 1))


@pytest.fixture(scope="session")
def w1_p3():
    return build_w(FieldParams(3, 1, (1,)))


@pytest.fixture(scope="session")
def w2_p3(params3):
    return build_w(params3)


@pytest.fixture(scope="session")
def w2_p5(params5):
    return build_w(params5)


@pytest.fixture(scope="session")
def s2_p3(params3):
    return build_s(params3)


@pytest.fixture(scope="session")
def s2_p5(params5):
    return build_s(params5)


@pytest.fixture(scope="session")
def hbar_p3(params3):
    return build_hbar(params3)


@pytest.fixture(scope="session")
def hbar_p5(params5):
    return build_hbar(params5)


@pytest.fixture(scope="session")
def record_p3(hbar_p3):
    result = delta_star(2, hbar_p3)
    assert result.status == "ok"
    return result.record


@pytest.fixture(scope="session")
def results_p5(hbar_p5):
    """The three pipeline runs of the p = 5 series, computed once."""
    return {i: delta_star(i, hbar_p5) for i in (2, 4, 6)}
