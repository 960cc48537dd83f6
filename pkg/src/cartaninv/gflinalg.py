"""Small dense linear algebra over the prime field F_p.

Dimensions here are tiny (basis sizes up to ~100, monomial supports up to a
few tens of thousands for span tests), so plain row reduction on Python ints
is exact and fast enough.
"""

from __future__ import annotations


class SpanSolver:
    """Incremental Gauss-Jordan elimination with expression tracking.

    Vectors are dense lists of residues mod p.  ``insert`` keeps a vector
    when it is independent of the span so far; ``solve`` expresses a vector
    as a combination of the inserted independent vectors (keyed by insertion
    order), returning None when it lies outside the span.

    The stored rows are kept fully reduced against each other (RREF), so a
    single left-to-right sweep reduces any vector completely.
    """

    def __init__(self, p: int, width: int):
        self.p = p
        self.width = width
        self.rows = {}  # pivot column -> (unit-pivot row, {inserted index: coeff})
        self.ninserted = 0

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _reduce(self, vec):
        # returns (residual, expr) with residual = vec + sum expr[k] * inserted_k
        p = self.p
        vec = [x % p for x in vec]
        expr = {}
        for col in range(self.width):
            x = vec[col]
            if x == 0:
                continue
            hit = self.rows.get(col)
            if hit is None:
                continue
            row, rexpr = hit
            for j in range(col, self.width):
                if row[j]:
                    vec[j] = (vec[j] - x * row[j]) % p
            for k, c in rexpr.items():
                expr[k] = (expr.get(k, 0) - x * c) % p
        return vec, expr

    def insert(self, vec) -> bool:
        """Add a vector to the span; True iff it was independent."""
        return self._insert(vec) is None

    def insert_or_relation(self, vec):
        """Add a vector; None when independent, else the linear relation.

        The relation is a dict {inserted index: coeff} with
        sum coeff * inserted_k = 0, including this vector's own index.
        """
        return self._insert(vec)

    def _insert(self, vec):
        p = self.p
        red, expr = self._reduce(vec)
        mine = self.ninserted
        self.ninserted += 1
        pivot = next((c for c in range(self.width) if red[c]), None)
        if pivot is None:
            relation = {k: c for k, c in expr.items() if c}
            relation[mine] = 1
            return relation
        inv = pow(red[pivot], p - 2, p)
        row = [x * inv % p for x in red]
        rexpr = {k: c * inv % p for k, c in expr.items() if c}
        rexpr[mine] = inv
        # back-substitute into existing rows to keep the RREF invariant
        for pc, (orow, oexpr) in self.rows.items():
            f = orow[pivot]
            if f == 0:
                continue
            for j in range(self.width):
                if row[j]:
                    orow[j] = (orow[j] - f * row[j]) % p
            for k, c in rexpr.items():
                nc = (oexpr.get(k, 0) - f * c) % p
                if nc:
                    oexpr[k] = nc
                else:
                    oexpr.pop(k, None)
        self.rows[pivot] = (row, rexpr)
        return None

    def solve(self, vec):
        """Coefficients over inserted vectors with sum = vec, or None."""
        red, expr = self._reduce(vec)
        if any(red):
            return None
        return {k: (-c) % self.p for k, c in expr.items() if c % self.p}


def kernel_basis(rows, width: int, p: int):
    """Basis of the right kernel {v : M v = 0} of the matrix with given rows."""
    nrows = len(rows)
    solver = SpanSolver(p, nrows)
    out = []
    for j in range(width):
        col = [rows[i][j] % p for i in range(nrows)]
        rel = solver.insert_or_relation(col)
        if rel is not None:
            v = [0] * width
            for k, c in rel.items():
                v[k] = c
            out.append(v)
    return out
