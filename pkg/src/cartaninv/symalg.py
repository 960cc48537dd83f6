"""Sparse symmetric algebra S(L) with the adjoint action as a derivation.

A polynomial is a sparse map from exponent multisets over basis indices to
nonzero coefficients.  The coefficient ring is either "int" (exact integers,
acting through the canonical integral structure constants) or "modp"
(least non-negative residues).  Reducing an "int" computation mod p agrees
with running the same computation in "modp".

Monomial keys are tuples of (basis index, exponent) pairs, sorted by index,
with all exponents positive.  The empty tuple is the constant monomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .algebras import CartanAlgebra, Derivation, bracket, decompose
from .dividedpowers import dp_basis
from .errors import BudgetExceededError, ParameterError
from .modular import delta_of, multi_binom_int

RINGS = ("int", "modp")


def mono_degree(mono) -> int:
    return sum(e for _, e in mono)


def mono_expand(mono):
    """Variable indices with multiplicity, for canonical lexicographic order."""
    out = []
    for v, e in mono:
        out.extend([v] * e)
    return tuple(out)


def term_sort_key(mono):
    return (mono_degree(mono), mono_expand(mono))


def _mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def _mono_lower(mono, t):
    """Remove one power of the t-th factor of the monomial."""
    v, e = mono[t]
    if e == 1:
        return mono[:t] + mono[t + 1:]
    return mono[:t] + ((v, e - 1),) + mono[t + 1:]


def _mono_raise(mono, k):
    """Multiply the monomial by the variable with index k."""
    d = dict(mono)
    d[k] = d.get(k, 0) + 1
    return tuple(sorted(d.items()))


class SymPolynomial:
    """Element of S(L) over the integers or over F_p."""

    __slots__ = ("algebra", "ring", "terms")

    def __init__(self, algebra: CartanAlgebra, ring: str, terms=None):
        if ring not in RINGS:
            raise ParameterError(f"unknown ring {ring!r}")
        self.algebra = algebra
        self.ring = ring
        clean = {}
        if terms:
            p = algebra.params.p
            dim = algebra.dim
            for mono, c in terms.items():
                if ring == "modp":
                    c %= p
                if c == 0:
                    continue
                mono = tuple(mono)
                if any(e <= 0 or not 0 <= v < dim for v, e in mono):
                    raise ParameterError(f"bad monomial {mono}")
                if list(mono) != sorted(mono, key=lambda ve: ve[0]):
                    mono = tuple(sorted(mono, key=lambda ve: ve[0]))
                clean[mono] = c
        self.terms = clean

    # -- constructors --------------------------------------------------------
    @classmethod
    def zero(cls, algebra, ring="modp"):
        return cls(algebra, ring)

    @classmethod
    def one(cls, algebra, ring="modp"):
        return cls(algebra, ring, {(): 1})

    @classmethod
    def variable(cls, algebra, idx, ring="modp"):
        return cls(algebra, ring, {((idx, 1),): 1})

    @classmethod
    def from_label(cls, algebra, label, ring="modp"):
        return cls.variable(algebra, algebra.index[label], ring)

    def _bare(self, terms):
        out = SymPolynomial.__new__(SymPolynomial)
        out.algebra, out.ring, out.terms = self.algebra, self.ring, terms
        return out

    # -- predicates ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        return (
            isinstance(other, SymPolynomial)
            and self.ring == other.ring
            and self.algebra == other.algebra
            and self.terms == other.terms
        )

    __hash__ = None

    def degrees(self):
        return {mono_degree(m) for m in self.terms}

    def homogeneous_degree(self):
        """Total degree when homogeneous, else None (0 for the zero element)."""
        ds = self.degrees()
        if not ds:
            return 0
        return ds.pop() if len(ds) == 1 else None

    def sorted_terms(self):
        """Terms in the canonical order (total degree, expanded index list)."""
        return sorted(self.terms.items(), key=lambda mc: term_sort_key(mc[0]))

    # -- ring operations -----------------------------------------------------
    def _norm(self, c):
        return c % self.algebra.params.p if self.ring == "modp" else c

    def _check(self, other):
        if self.algebra != other.algebra:
            raise ParameterError("operands live over different algebras")
        if self.ring != other.ring:
            raise ParameterError("operands live over different rings")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = self._norm(out.get(m, 0) + c)
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return self._bare(out)

    def __neg__(self):
        return self._bare({m: self._norm(-c) for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = self._norm(c)
        if c == 0:
            return self._bare({})
        return self._bare({m: self._norm(x * c) for m, x in self.terms.items()})

    def __mul__(self, other):
        self._check(other)
        out = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = _mono_mul(ma, mb)
                s = self._norm(out.get(m, 0) + ca * cb)
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return self._bare(out)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = SymPolynomial.one(self.algebra, self.ring)
        for _ in range(k):
            out = out * self
        return out

    def reduce_mod(self) -> "SymPolynomial":
        """Reinterpret an integer polynomial mod p."""
        if self.ring == "modp":
            return self
        return SymPolynomial(self.algebra, "modp", self.terms)

    def with_algebra(self, target: CartanAlgebra) -> "SymPolynomial":
        """Reinterpret over another algebra sharing a basis-label prefix."""
        for m in self.terms:
            for v, _ in m:
                if (
                    v >= target.dim
                    or target.basis[v].label != self.algebra.basis[v].label
                ):
                    raise ParameterError(
                        f"variable {self.algebra.basis[v].label} has no slot in target"
                    )
        return SymPolynomial(target, self.ring, self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for m, c in self.sorted_terms():
            facs = [
                self.algebra.basis[v].label + (f"^{e}" if e > 1 else "")
                for v, e in m
            ]
            body = "*".join(facs) if facs else "1"
            bits.append(body if c == 1 and facs else f"{c}*{body}")
        return " + ".join(bits)


# -- adjoint action ----------------------------------------------------------

def _ad_index(F: SymPolynomial, idx: int, sign: int = 1) -> SymPolynomial:
    """The derivation of S(L) extending ad of the idx-th basis element."""
    alg = F.algebra
    rows = alg.row_mod if F.ring == "modp" else alg.row_int
    out = {}
    for mono, c in F.terms.items():
        for t, (v, e) in enumerate(mono):
            row = rows(idx, v)
            if not row:
                continue
            base = _mono_lower(mono, t)
            ce = c * e * sign
            for k, rc in row:
                m = _mono_raise(base, k)
                s = out.get(m, 0) + ce * rc
                if s:
                    out[m] = s
                else:
                    del out[m]
    if F.ring == "modp":
        p = alg.params.p
        out = {m: c % p for m, c in out.items() if c % p}
    return F._bare(out)


def ad_action(b, F: SymPolynomial) -> SymPolynomial:
    """ad(b) on S(L); b is a basis index or a Derivation in the span."""
    if isinstance(b, int):
        return _ad_index(F, b)
    coords = decompose(b, F.algebra)
    out = SymPolynomial.zero(F.algebra, F.ring)
    for idx, c in enumerate(coords):
        if c:
            out = out + _ad_index(F, idx).scale(c)
    return out


def ad_partial(F: SymPolynomial, axis: int) -> SymPolynomial:
    """ad(d_axis): the grade -1 coordinate derivations, via their basis slot."""
    idx, sign = F.algebra.partial_coords[axis]
    return _ad_index(F, idx, sign)


def d_gamma(F: SymPolynomial, gamma, budget=None, workers: int = 1) -> SymPolynomial:
    """Iterated operator ad(d_1)^g1 ... ad(d_n)^gn applied to F."""
    if workers > 1 and len(F.terms) >= 2 * workers:
        return _d_gamma_parallel(F, gamma, workers)
    for axis, g in enumerate(gamma):
        for _ in range(g):
            F = ad_partial(F, axis)
            if budget is not None:
                budget.charge(len(F.terms))
            if not F:
                return F
    return F


def d_delta(F: SymPolynomial, budget=None, workers: int = 1) -> SymPolynomial:
    """The composite operator with gamma = delta; kills p-th powers' factors
    one step at a time and is independent of the factor order."""
    return d_gamma(F, delta_of(F.algebra.params), budget, workers)


def _d_gamma_worker(args):
    algebra, ring, chunk, gamma = args
    F = SymPolynomial(algebra, ring, dict(chunk))
    return d_gamma(F, gamma).terms


def _d_gamma_parallel(F: SymPolynomial, gamma, workers: int) -> SymPolynomial:
    from concurrent.futures import ProcessPoolExecutor

    items = list(F.terms.items())
    chunks = [items[k::workers] for k in range(workers)]
    chunks = [c for c in chunks if c]
    out = SymPolynomial.zero(F.algebra, F.ring)
    with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
        args = [(F.algebra, F.ring, chunk, gamma) for chunk in chunks]
        for terms in pool.map(_d_gamma_worker, args):
            out = out + SymPolynomial(F.algebra, F.ring, terms)
    return out


# -- invariance and generator criteria ----------------------------------------

@dataclass
class InvarianceReport:
    """Outcome of the annihilator test; witness present iff not invariant."""

    is_invariant: bool
    witness: Optional[tuple] = None  # (basis index, nonzero ad image)


def is_invariant(F: SymPolynomial) -> InvarianceReport:
    """Check ad(b)(F) = 0 for every basis element b of F's algebra."""
    for idx in range(F.algebra.dim):
        img = _ad_index(F, idx)
        if img:
            return InvarianceReport(False, (idx, img))
    return InvarianceReport(True)


@dataclass
class GeneratorCheck:
    """Boolean verdict plus the failed conditions (label, defect polynomial)."""

    ok: bool
    failures: tuple = ()


def check_generator_w(F: SymPolynomial) -> GeneratorCheck:
    """W-type generator criterion: the filtration component of grade >= 1
    annihilates F and ad(x_i d_j)(F) = -delta_{i,j} F."""
    alg = F.algebra
    if alg.kind != "W":
        raise ParameterError("check_generator_w needs a W-type algebra")
    fails = []
    for idx in range(alg.dim):
        if alg.grades[idx] >= 1:
            img = _ad_index(F, idx)
            if img:
                fails.append((f"L1({alg.basis[idx].label}) != 0", img))
    n = alg.params.n
    for i in range(n):
        eps = tuple(1 if t == i else 0 for t in range(n))
        for j in range(n):
            idx = alg.index["x^(%s)d_%d" % (",".join(map(str, eps)), j + 1)]
            defect = _ad_index(F, idx) + (F if i == j else F.scale(0))
            if defect:
                lbl = alg.basis[idx].label
                fails.append((f"ad({lbl}) eigenvalue defect", defect))
    return GeneratorCheck(not fails, tuple(fails))


def check_generator_sh(F: SymPolynomial) -> GeneratorCheck:
    """S/H/Hbar generator criterion: grade >= 0 components annihilate F."""
    alg = F.algebra
    if alg.kind not in ("S", "H", "Hbar"):
        raise ParameterError("check_generator_sh needs an S, H or Hbar algebra")
    fails = []
    for idx in range(alg.dim):
        if alg.grades[idx] >= 0:
            img = _ad_index(F, idx)
            if img:
                fails.append((f"L0({alg.basis[idx].label}) != 0", img))
    return GeneratorCheck(not fails, tuple(fails))


def commutation_expansion_check(D: Derivation, F: SymPolynomial) -> bool:
    """Verify ad(D) d^(delta) F = sum_g (-1)^|g| C(delta,g) d^(delta-g) ad(d^(g) D) F.

    Here d^(g)(D) is the g-fold iterated bracket of D with the coordinate
    derivations, an element of the algebra.  Deep consistency test tying
    together the bracket, the structure constants and the operator calculus.
    """
    alg = F.algebra
    if F.ring != "modp":
        raise ParameterError("the expansion identity is a mod-p statement")
    params = alg.params
    delta = delta_of(params)
    lhs = ad_action(D, d_delta(F))
    partials = alg.partials()
    iterated = {(0,) * params.n: D}

    def it_bracket(gamma):
        got = iterated.get(gamma)
        if got is None:
            axis = next(i for i, g in enumerate(gamma) if g > 0)
            prev = gamma[:axis] + (gamma[axis] - 1,) + gamma[axis + 1:]
            got = bracket(partials[axis], it_bracket(prev))
            iterated[gamma] = got
        return got

    rhs = SymPolynomial.zero(alg, F.ring)
    for gamma in dp_basis(params):
        dg = it_bracket(gamma)
        if dg.is_zero():
            continue
        inner = ad_action(dg, F)
        if not inner:
            continue
        rest = tuple(d - g for d, g in zip(delta, gamma))
        term = d_gamma(inner, rest)
        sign = -1 if sum(gamma) % 2 else 1
        rhs = rhs + term.scale(sign * multi_binom_int(delta, gamma))
    return lhs == rhs
