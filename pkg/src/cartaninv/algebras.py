"""Finite-dimensional Cartan-type Lie algebras W, S, H and Hbar.

Each algebra is materialized as an ordered basis of special derivations of
the divided power algebra, together with a Z-grading and a sparse tensor of
integer structure constants.  The integer constants are canonical lifts
built from divided-power binomials (Poisson-bracket closed forms for the
Hamiltonian family); reducing them mod p recovers the honest bracket, which
is re-verified derivation-by-derivation during construction.

Basis conventions:
  * W: monomial derivations x^(a) d_i, grade |a| - 1.
  * S: an independent subset of D_{i,j}(a) = d_i(x^(a)) d_j - d_j(x^(a)) d_i,
    selected by row reduction in (a, i, j) order, grade |a| - 2.
  * H / Hbar: Hamiltonian fields of monomials, grade |a| - 2.  When every
    m_i = 1 the basis element for a is the field of the ordinary monomial
    x1^a1 ... xn^an (labelled u_{a}); this factorial rescaling of the
    divided-power field D(a) is what matches the classical presentation
    [u_a, u_b] = (a1*b2 - a2*b1) u_{a+b-e1-e2} and the printed invariants.
    For general m the basis is D(a) itself (labelled D(a)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Optional

from .dividedpowers import DPPolynomial, dp_basis
from .errors import ClosureError, NotInSpanError, ParameterError
from .gflinalg import SpanSolver
from .modular import (
    FieldParams,
    delta_of,
    mi_add,
    mi_sub,
    multi_binom_int,
    validate_for_kind,
)


@dataclass(frozen=True)
class HamiltonianStructure:
    """Fixed-point-free involution pi with antisymmetric signs a_{i,pi(i)}."""

    pi: tuple
    signs: tuple

    def __post_init__(self):
        n = len(self.pi)
        if sorted(self.pi) != list(range(n)):
            raise ParameterError(f"pi must permute 0..{n - 1}, got {self.pi}")
        if any(self.pi[self.pi[i]] != i for i in range(n)):
            raise ParameterError("pi must be involutive")
        if any(self.pi[i] == i for i in range(n)):
            raise ParameterError("pi must have no fixed points")
        if len(self.signs) != n or any(s not in (1, -1) for s in self.signs):
            raise ParameterError("signs must be +-1 for every index")
        if any(self.signs[i] + self.signs[self.pi[i]] != 0 for i in range(n)):
            raise ParameterError("signs must satisfy a_{i,pi i} + a_{pi i,i} = 0")

    @classmethod
    def standard(cls, n: int) -> "HamiltonianStructure":
        """pi swaps 2k and 2k+1, with a_{2k,2k+1} = +1."""
        if n % 2 != 0:
            raise ParameterError("Hamiltonian structure needs even n")
        pi = []
        signs = []
        for k in range(0, n, 2):
            pi += [k + 1, k]
            signs += [1, -1]
        return cls(tuple(pi), tuple(signs))

    @property
    def tag(self) -> str:
        pi1 = ",".join(str(i + 1) for i in self.pi)
        sg = ",".join("%+d" % s for s in self.signs)
        return f"pi=({pi1});signs=({sg})"


class Derivation:
    """Special derivation sum f_i d_i with divided-power coefficients."""

    __slots__ = ("params", "coeffs")

    def __init__(self, params: FieldParams, coeffs):
        coeffs = tuple(coeffs)
        if len(coeffs) != params.n:
            raise ParameterError("need one coefficient per variable")
        self.params = params
        self.coeffs = coeffs

    @classmethod
    def zero(cls, params):
        return cls(params, [DPPolynomial.zero(params)] * params.n)

    @classmethod
    def partial(cls, params, axis: int):
        cs = [DPPolynomial.zero(params)] * params.n
        cs[axis] = DPPolynomial.one(params)
        return cls(params, cs)

    @classmethod
    def monomial(cls, params, alpha, axis, coeff=1):
        cs = [DPPolynomial.zero(params)] * params.n
        cs[axis] = DPPolynomial.monomial(params, alpha, coeff)
        return cls(params, cs)

    def apply(self, f: DPPolynomial) -> DPPolynomial:
        out = DPPolynomial.zero(self.params)
        for i, fi in enumerate(self.coeffs):
            if fi:
                out = out + fi * f.partial(i)
        return out

    def is_zero(self) -> bool:
        return all(not c for c in self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        return (
            isinstance(other, Derivation)
            and self.params == other.params
            and self.coeffs == other.coeffs
        )

    __hash__ = None

    def __add__(self, other):
        return Derivation(self.params, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        return Derivation(self.params, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return Derivation(self.params, [-c for c in self.coeffs])

    def scale(self, c: int) -> "Derivation":
        return Derivation(self.params, [f.scale(c) for f in self.coeffs])

    def __repr__(self):
        bits = [f"({f!r})d_{i + 1}" for i, f in enumerate(self.coeffs) if f]
        return " + ".join(bits) if bits else "0"


def bracket(d1: Derivation, d2: Derivation) -> Derivation:
    """Commutator [d1, d2]; k-th coefficient sum_i (f_i d_i g_k - g_i d_i f_k)."""
    if d1.params != d2.params:
        raise ParameterError("parameter mismatch between derivations")
    return Derivation(
        d1.params,
        [d1.apply(g) - d2.apply(f) for f, g in zip(d1.coeffs, d2.coeffs)],
    )


class BasisElement(NamedTuple):
    label: str
    derivation: Derivation
    grade: int


@lru_cache(maxsize=None)
def _dp_pos(params):
    return {a: i for i, a in enumerate(dp_basis(params))}


def _derivation_vector(params, d: Derivation):
    """Flatten a derivation into its dense mod-p coefficient vector."""
    pos = _dp_pos(params)
    k = len(pos)
    vec = [0] * (params.n * k)
    for ax, f in enumerate(d.coeffs):
        for alpha, c in f.terms.items():
            vec[ax * k + pos[alpha]] = c
    return vec


class CartanAlgebra:
    """A constructed algebra: ordered basis, grading, integer constants."""

    def __init__(self, kind, params, basis, rows_int, hs=None, scaled=False,
                 h_subalgebra=None, alphas=None, verify=True):
        self.kind = kind
        self.params = params
        self.hs = hs
        self.scaled = scaled
        self.basis = tuple(basis)
        self.dim = len(self.basis)
        self.index = {b.label: i for i, b in enumerate(self.basis)}
        self.rows_int = rows_int
        self.grades = tuple(b.grade for b in self.basis)
        self.r = max(self.grades)
        self.h_subalgebra = h_subalgebra
        self.alphas = tuple(alphas) if alphas is not None else None
        self._mod_rows = {}
        self._solver = None
        self._partials = tuple(Derivation.partial(params, ax) for ax in range(params.n))
        self.partial_coords = tuple(self._locate_partial(ax) for ax in range(params.n))
        if verify:
            self._verify_closure()

    # -- bookkeeping ---------------------------------------------------------
    @property
    def sign_tag(self) -> str:
        if self.kind in ("H", "Hbar"):
            scale = "monomial" if self.scaled else "divided"
            return f"{self.hs.tag};basis={scale}"
        return "basis=divided"

    def partials(self):
        """The commuting derivations d_1..d_n spanning the grade -1 part."""
        return self._partials

    def row_int(self, i: int, j: int):
        """Integer structure-constant row for [b_i, b_j]."""
        if i == j:
            return ()
        return self.rows_int.get((i, j), ())

    def row_mod(self, i: int, j: int):
        """The same row reduced mod p (cached)."""
        key = (i, j)
        row = self._mod_rows.get(key)
        if row is None:
            p = self.params.p
            row = tuple((k, c % p) for k, c in self.row_int(i, j) if c % p)
            self._mod_rows[key] = row
        return row

    def __eq__(self, other):
        return (
            isinstance(other, CartanAlgebra)
            and self.kind == other.kind
            and self.params == other.params
            and self.hs == other.hs
            and self.scaled == other.scaled
            and [b.label for b in self.basis] == [b.label for b in other.basis]
            and self.rows_int == other.rows_int
        )

    __hash__ = None

    def __repr__(self):
        pr = self.params
        return f"<{self.kind}_{pr.n}{pr.m} p={pr.p} dim={self.dim} r={self.r}>"

    # -- coordinates ---------------------------------------------------------
    def _get_solver(self):
        if self._solver is None:
            width = self.params.n * self.params.dim_k
            solver = SpanSolver(self.params.p, width)
            for b in self.basis:
                if not solver.insert(_derivation_vector(self.params, b.derivation)):
                    raise ClosureError(f"stored basis of {self.kind} is dependent")
            self._solver = solver
        return self._solver

    def _locate_partial(self, axis):
        coords = decompose(self._partials[axis], self)
        hits = [(i, c) for i, c in enumerate(coords) if c]
        if len(hits) != 1 or hits[0][1] not in (1, self.params.p - 1):
            raise ClosureError(f"d_{axis + 1} is not a signed basis element")
        i, c = hits[0]
        return (i, 1 if c == 1 else -1)

    # -- construction-time verification ---------------------------------------
    def _verify_closure(self):
        """Check the closed-form rows against honest derivation brackets."""
        p = self.params.p
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                br = bracket(self.basis[i].derivation, self.basis[j].derivation)
                try:
                    coords = decompose(br, self)
                except NotInSpanError as exc:
                    raise ClosureError(
                        f"[{self.basis[i].label}, {self.basis[j].label}] "
                        f"left the {self.kind} span"
                    ) from exc
                stored = dict(self.row_mod(i, j))
                found = {k: c for k, c in enumerate(coords) if c}
                if stored != found:
                    raise ClosureError(
                        f"structure constants disagree with the bracket of "
                        f"{self.basis[i].label}, {self.basis[j].label}: "
                        f"{stored} vs {found}"
                    )
                gi, gj = self.grades[i], self.grades[j]
                for k, c in self.row_int(i, j):
                    if c % p and self.grades[k] != gi + gj:
                        raise ClosureError(
                            f"grading violated at [{self.basis[i].label}, "
                            f"{self.basis[j].label}]"
                        )


def decompose(d: Derivation, algebra: CartanAlgebra):
    """Coordinates of a derivation in the ordered basis, over F_p."""
    if d.params != algebra.params:
        raise ParameterError("derivation parameters do not match the algebra")
    if algebra.kind == "W":
        # the W basis is the monomial coordinate system itself
        coords = [0] * algebra.dim
        for ax, f in enumerate(d.coeffs):
            for alpha, c in f.terms.items():
                coords[algebra.index[_w_label(alpha, ax)]] = c
        return coords
    sol = algebra._get_solver().solve(_derivation_vector(algebra.params, d))
    if sol is None:
        raise NotInSpanError(f"derivation outside the span of {algebra.kind}")
    coords = [0] * algebra.dim
    for k, c in sol.items():
        coords[k] = c
    return coords


def filtration_basis(algebra: CartanAlgebra, i: int):
    """Indices of basis elements of grade >= i; i = r+1 gives the empty list."""
    if i < -1 or i > algebra.r + 1:
        raise ValueError(f"filtration index {i} outside [-1, {algebra.r + 1}]")
    return [k for k, g in enumerate(algebra.grades) if g >= i]


# -- W ---------------------------------------------------------------------

def _w_label(alpha, axis):
    return "x^(%s)d_%d" % (",".join(map(str, alpha)), axis + 1)


def build_w(params: FieldParams, verify: bool = True) -> CartanAlgebra:
    """General algebra: all x^(a) d_i, dimension n p^(m_1+..+m_n)."""
    delta = delta_of(params)
    keys = [(alpha, ax) for alpha in dp_basis(params) for ax in range(params.n)]
    basis = [
        BasisElement(_w_label(a, ax), Derivation.monomial(params, a, ax), sum(a) - 1)
        for a, ax in keys
    ]
    pos = {k: i for i, k in enumerate(keys)}
    eps = [tuple(1 if t == ax else 0 for t in range(params.n)) for ax in range(params.n)]
    rows = {}
    for i, (a, ai) in enumerate(keys):
        for j in range(i + 1, len(keys)):
            b, aj = keys[j]
            out = {}
            bs = mi_sub(b, eps[ai])
            if bs is not None:
                g = mi_add(a, bs, delta)
                if g is not None:
                    out[(g, aj)] = out.get((g, aj), 0) + multi_binom_int(g, a)
            asub = mi_sub(a, eps[aj])
            if asub is not None:
                g = mi_add(asub, b, delta)
                if g is not None:
                    out[(g, ai)] = out.get((g, ai), 0) - multi_binom_int(g, b)
            row = tuple((pos[k], c) for k, c in out.items() if c)
            if row:
                rows[(i, j)] = row
                rows[(j, i)] = tuple((k, -c) for k, c in row)
    return CartanAlgebra("W", params, basis, rows, verify=verify)


# -- H and Hbar --------------------------------------------------------------

def _ham_label(alpha, scaled):
    body = ",".join(map(str, alpha))
    return "u_{%s}" % body if scaled else "D(%s)" % body


def hamiltonian_field(params, hs, alpha, scaled):
    """The basis derivation for alpha: u_alpha (scaled) or D(alpha)."""
    p = params.p
    d = Derivation.zero(params)
    fact = 1
    if scaled:
        for a in alpha:
            fact = fact * math.factorial(a) % p
    for i in range(params.n):
        if alpha[i] == 0:
            continue
        low = alpha[:i] + (alpha[i] - 1,) + alpha[i + 1:]
        coeff = hs.signs[i]
        d = d + Derivation.monomial(params, low, hs.pi[i], coeff)
    return d.scale(fact) if scaled else d


def _ham_pair_coeff(a, b, i, j, sign, delta, scaled):
    """Integer coefficient of the {i,j} pair term in [basis_a, basis_b]."""
    g = tuple(
        x + y - (1 if t in (i, j) else 0) for t, (x, y) in enumerate(zip(a, b))
    )
    if any(x < 0 for x in g) or any(x > d for x, d in zip(g, delta)):
        return None, 0
    if all(x == 0 for x in g):
        return None, 0
    if scaled:
        c = a[i] * b[j] - a[j] * b[i]
    else:
        ei = tuple(1 if t == i else 0 for t in range(len(a)))
        ej = tuple(1 if t == j else 0 for t in range(len(a)))
        ai = mi_sub(a, ei)
        aj = mi_sub(a, ej)
        c = (multi_binom_int(g, ai) if ai is not None else 0) - (
            multi_binom_int(g, aj) if aj is not None else 0
        )
    return g, sign * c


def _build_hamiltonian(params, hs, include_top):
    p = params.p
    delta = delta_of(params)
    scaled = all(mi == 1 for mi in params.m)
    alphas = [a for a in dp_basis(params) if any(a)]
    if not include_top:
        alphas = [a for a in alphas if a != delta]
    basis = [
        BasisElement(
            _ham_label(a, scaled), hamiltonian_field(params, hs, a, scaled), sum(a) - 2
        )
        for a in alphas
    ]
    pos = {a: i for i, a in enumerate(alphas)}
    pairs = [(i, hs.pi[i]) for i in range(params.n) if i < hs.pi[i]]
    rows = {}
    for i, a in enumerate(alphas):
        for j in range(i + 1, len(alphas)):
            b = alphas[j]
            out = {}
            for s, t in pairs:
                g, c = _ham_pair_coeff(a, b, s, t, hs.signs[s], delta, scaled)
                if c:
                    out[g] = out.get(g, 0) + c
            row = []
            for g, c in out.items():
                if c == 0:
                    continue
                if g not in pos:
                    # only the top slot can be missing (H without D(delta));
                    # closure mod p forces that coefficient to vanish
                    if g != delta or c % p != 0:
                        raise ClosureError(
                            f"bracket escaped the basis at {a}, {b} -> {g}"
                        )
                    continue
                row.append((pos[g], c))
            if row:
                rows[(i, j)] = tuple(row)
                rows[(j, i)] = tuple((k, -c) for k, c in row)
    return basis, rows, scaled, alphas


def build_h(params: FieldParams, hs: Optional[HamiltonianStructure] = None,
            verify: bool = True) -> CartanAlgebra:
    """Hamiltonian algebra: fields of monomials for 0 < a < delta."""
    validate_for_kind(params, "H")
    hs = hs or HamiltonianStructure.standard(params.n)
    basis, rows, scaled, alphas = _build_hamiltonian(params, hs, include_top=False)
    return CartanAlgebra("H", params, basis, rows, hs=hs, scaled=scaled,
                         alphas=alphas, verify=verify)


def build_hbar(params: FieldParams, hs: Optional[HamiltonianStructure] = None,
               verify: bool = True) -> CartanAlgebra:
    """Extension of H by the top field u (the field of the monomial at delta)."""
    validate_for_kind(params, "Hbar")
    hs = hs or HamiltonianStructure.standard(params.n)
    basis, rows, scaled, alphas = _build_hamiltonian(params, hs, include_top=True)
    sub = build_h(params, hs, verify=verify)
    algebra = CartanAlgebra(
        "Hbar", params, basis, rows, hs=hs, scaled=scaled, h_subalgebra=sub,
        alphas=alphas, verify=verify
    )
    if [b.label for b in algebra.basis[:-1]] != [b.label for b in sub.basis]:
        raise ClosureError("Hbar basis is not the H basis plus the top element")
    return algebra


# -- S -----------------------------------------------------------------------

def _s_label(alpha, i, j):
    return "D_{%d,%d}(%s)" % (i + 1, j + 1, ",".join(map(str, alpha)))


def _s_field(params, alpha, i, j):
    d = Derivation.zero(params)
    if alpha[i]:
        low = alpha[:i] + (alpha[i] - 1,) + alpha[i + 1:]
        d = d + Derivation.monomial(params, low, j)
    if alpha[j]:
        low = alpha[:j] + (alpha[j] - 1,) + alpha[j + 1:]
        d = d - Derivation.monomial(params, low, i)
    return d


def build_s(params: FieldParams, verify: bool = True) -> CartanAlgebra:
    """Special algebra: span of D_{i,j}(a), basis chosen in (a, i, j) order."""
    validate_for_kind(params, "S")
    p = params.p
    delta = delta_of(params)
    solver = SpanSolver(p, params.n * params.dim_k)
    chosen = []
    for alpha in dp_basis(params):
        if not any(alpha):
            continue
        for i in range(params.n):
            for j in range(i + 1, params.n):
                d = _s_field(params, alpha, i, j)
                if not d:
                    continue
                if solver.insert(_derivation_vector(params, d)):
                    chosen.append((alpha, i, j, d))
    basis = [
        BasisElement(_s_label(a, i, j), d, sum(a) - 2) for a, i, j, d in chosen
    ]
    if params.n == 2:
        # D_{1,2}(a) is the divided Hamiltonian field of a: Poisson closed form
        pos = {a: k for k, (a, _, _, _) in enumerate(chosen)}
        rows = {}
        for i, (a, _, _, _) in enumerate(chosen):
            for j in range(i + 1, len(chosen)):
                b = chosen[j][0]
                g, c = _ham_pair_coeff(a, b, 0, 1, 1, delta, scaled=False)
                if g is None or c == 0:
                    continue
                if g not in pos:
                    raise ClosureError(f"S bracket escaped the basis at {a}, {b}")
                rows[(i, j)] = ((pos[g], c),)
                rows[(j, i)] = ((pos[g], -c),)
        return CartanAlgebra("S", params, basis, rows, verify=verify)
    # n >= 3: no closed integral form is used; decompose the honest bracket
    # over F_p and store least non-negative residues
    basis_solver = SpanSolver(p, params.n * params.dim_k)
    for b in basis:
        basis_solver.insert(_derivation_vector(params, b.derivation))
    rows = {}
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            br = bracket(basis[i].derivation, basis[j].derivation)
            sol = basis_solver.solve(_derivation_vector(params, br))
            if sol is None:
                raise ClosureError("S bracket left the computed span")
            row = tuple(sorted((k, c) for k, c in sol.items() if c))
            if row:
                rows[(i, j)] = row
                rows[(j, i)] = tuple((k, p - c) for k, c in row)
    return CartanAlgebra("S", params, basis, rows, verify=verify)


_BUILDERS = {"W": build_w, "S": build_s, "H": build_h, "Hbar": build_hbar}


def build(kind: str, params: FieldParams, hs: Optional[HamiltonianStructure] = None,
          verify: bool = True):
    """Dispatch on the algebra kind tag."""
    if kind not in _BUILDERS:
        raise ParameterError(f"unknown algebra kind {kind!r}")
    if kind in ("H", "Hbar"):
        return _BUILDERS[kind](params, hs, verify=verify)
    return _BUILDERS[kind](params, verify=verify)
