"""Prime-field scalars, Lucas binomials and bounded multi-index arithmetic.

Multi-indices are plain tuples of non-negative ints.  Every index that refers
to a truncated algebra is bounded componentwise by delta_i = p^{m_i} - 1.
Coefficient arithmetic that must stay exact is done with Python ints, which
are arbitrary precision; multi-index entries themselves are small.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ParameterError

MultiIndex = tuple  # alias for readability in signatures


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldParams:
    """Characteristic p, number of variables n, and heights m = (m_1..m_n)."""

    p: int
    n: int
    m: tuple

    def __post_init__(self):
        if not is_prime(self.p):
            raise ParameterError(f"p must be prime, got {self.p}")
        if self.n < 1:
            raise ParameterError(f"n must be >= 1, got {self.n}")
        if not isinstance(self.m, tuple):
            object.__setattr__(self, "m", tuple(self.m))
        if len(self.m) != self.n:
            raise ParameterError(f"m must have length n={self.n}, got {self.m}")
        if any(mi < 1 for mi in self.m):
            raise ParameterError(f"every m_i must be >= 1, got {self.m}")

    @property
    def dim_k(self) -> int:
        """Dimension p^(m_1+...+m_n) of the underlying truncated algebra."""
        return self.p ** sum(self.m)


def validate_for_kind(params: FieldParams, kind: str) -> None:
    """Kind-specific constraints: S needs n >= 2, H and Hbar need n even."""
    if kind == "S" and params.n < 2:
        raise ParameterError("S requires n >= 2")
    if kind in ("H", "Hbar") and params.n % 2 != 0:
        raise ParameterError(f"{kind} requires even n, got n={params.n}")


def delta_of(params: FieldParams) -> MultiIndex:
    """The top multi-index delta with delta_i = p^{m_i} - 1."""
    return tuple(params.p ** mi - 1 for mi in params.m)


def binom_lucas(a: int, b: int, p: int) -> int:
    """C(a, b) mod p via base-p digits; 0 when b > a or b < 0."""
    if b < 0 or b > a:
        return 0
    r = 1
    while b > 0 and r != 0:
        r = r * math.comb(a % p, b % p) % p
        a //= p
        b //= p
    return r


def multi_binom(alpha: MultiIndex, beta: MultiIndex, p: int) -> int:
    """Componentwise product of binom_lucas values mod p."""
    if len(alpha) != len(beta):
        raise ValueError("multi-index length mismatch")
    r = 1
    for a, b in zip(alpha, beta):
        r = r * binom_lucas(a, b, p) % p
        if r == 0:
            return 0
    return r


def multi_binom_int(alpha: MultiIndex, beta: MultiIndex) -> int:
    """Exact integer product of componentwise binomials (the Z-lift)."""
    r = 1
    for a, b in zip(alpha, beta):
        if b < 0 or b > a:
            return 0
        r *= math.comb(a, b)
    return r


def mi_add(alpha: MultiIndex, beta: MultiIndex, delta: MultiIndex):
    """Componentwise sum, or None when any component overflows delta.

    Overflow is the signaled outcome that callers map to the zero product
    (the truncation x_i^{p^{m_i}} = 0).
    """
    out = tuple(a + b for a, b in zip(alpha, beta))
    if any(o > d for o, d in zip(out, delta)):
        return None
    return out


def mi_sub(alpha: MultiIndex, beta: MultiIndex):
    """Componentwise difference, or None when any component goes negative."""
    out = tuple(a - b for a, b in zip(alpha, beta))
    if any(o < 0 for o in out):
        return None
    return out


def mi_leq(alpha: MultiIndex, beta: MultiIndex) -> bool:
    return all(a <= b for a, b in zip(alpha, beta))


def p_valuation(x: int, p: int) -> int:
    """Largest e with p^e dividing x; x must be nonzero."""
    if x == 0:
        raise ValueError("valuation of 0 is undefined")
    e = 0
    while x % p == 0:
        x //= p
        e += 1
    return e
