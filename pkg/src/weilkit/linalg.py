"""Exact Gaussian elimination over the rationals (matrices are lists of rows)."""

from dataclasses import dataclass
from fractions import Fraction


def rref(rows, ncols=None):
    """Reduced row echelon form; returns (rows, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows, ncols=None):
    return len(rref(rows, ncols)[1])


def nullspace(rows, ncols):
    """Basis of {v : A v = 0}, one vector per free column, in column order."""
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


@dataclass
class Solution:
    status: str  # "unique" | "underdetermined" | "inconsistent"
    x: list  # a particular solution (free variables 0), None if inconsistent
    rank: int
    unknowns: int
    equations: int

    def to_json(self):
        return {
            "status": self.status,
            "rank": self.rank,
            "unknowns": self.unknowns,
            "equations": self.equations,
        }


def solve(A, b, ncols=None):
    """Solve A x = b exactly."""
    if ncols is None:
        ncols = len(A[0]) if A else 0
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    red, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return Solution("inconsistent", None, len(pivots) - 1, ncols, len(A))
    x = [Fraction(0)] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[ncols]
    status = "unique" if len(pivots) == ncols else "underdetermined"
    return Solution(status, x, len(pivots), ncols, len(A))


def span_basis(vectors, ncols):
    return rref(vectors, ncols)[0]


def in_span(v, basis_rows, ncols):
    return rank(list(basis_rows) + [v], ncols) == rank(basis_rows, ncols)


def matmul(A, B):
    return [[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in zip(*B)] for row in A]


def matvec(A, v):
    return [sum((a * x for a, x in zip(row, v)), Fraction(0)) for row in A]


def transpose(A):
    return [list(c) for c in zip(*A)]


def inverse(M):
    n = len(M)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]
