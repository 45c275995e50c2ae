"""Small exact-rational linear algebra: dense solves and pivoted LDL^T.

Everything here works on ``fractions.Fraction`` scalars so results are
decisions, not tolerances. Sizes are tiny (4x4 barycentric systems, (mn)x(mn)
flattenings with mn <= ~64), so plain Gaussian elimination is the right tool.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

__all__ = ["solve_linear", "LDLTerm", "LDLResult", "ldlt_psd"]


def solve_linear(A, b) -> list[Fraction]:
    """Solve A x = b exactly by Gaussian elimination with partial pivoting.

    A is an n x n nested sequence (or object array) of Fractions, b a length-n
    sequence. Raises ValueError if A is singular.
    """
    n = len(b)
    M = [[Fraction(A[r][c]) for c in range(n)] + [Fraction(b[r])] for r in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if M[r][col] != 0), None)
        if pivot is None:
            raise ValueError("singular linear system")
        M[col], M[pivot] = M[pivot], M[col]
        prow = M[col]
        for r in range(col + 1, n):
            factor = M[r][col] / prow[col]
            if factor == 0:
                continue
            for c in range(col, n + 1):
                M[r][c] -= factor * prow[c]
    x = [Fraction(0)] * n
    for r in range(n - 1, -1, -1):
        acc = M[r][n] - sum(M[r][c] * x[c] for c in range(r + 1, n))
        x[r] = acc / M[r][r]
    return x


@dataclass(frozen=True)
class LDLTerm:
    """One rank-1 term pivot * v v^T of a PSD factorization (v has a unit
    leading coefficient at the pivot index)."""

    pivot: Fraction
    vector: tuple


@dataclass(frozen=True)
class LDLResult:
    """Outcome of the pivoted PSD factorization attempt.

    ``ok`` means M = sum_k pivot_k v_k v_k^T with every pivot > 0 (zero
    pivots contribute nothing and are dropped). On failure, ``failure`` is
    either ``negative_pivot`` (a principal 1x1 minor went negative during
    elimination) or ``zero_diagonal_nonzero_row`` (a zero diagonal with a
    surviving off-diagonal entry, which no PSD matrix allows); ``index`` and
    ``value`` locate the violation.
    """

    ok: bool
    terms: tuple = ()
    failure: str | None = None
    index: int | None = None
    value: Fraction | None = None

    @property
    def pivots(self) -> tuple:
        return tuple(t.pivot for t in self.terms)


def ldlt_psd(M: np.ndarray) -> LDLResult:
    """Pivoted exact LDL^T of a symmetric rational matrix, as a PSD test.

    Pivots greedily on the largest remaining diagonal entry. Succeeds iff M is
    positive semidefinite; the returned terms reconstruct M exactly.
    """
    N = M.shape[0]
    A = np.array(M, dtype=object)
    if not bool((A == A.T).all()):
        raise ValueError("matrix is not symmetric")
    active = list(range(N))
    terms = []
    while active:
        p = max(active, key=lambda r: (A[r, r], -r))
        d = A[p, p]
        if d < 0:
            return LDLResult(False, tuple(terms), "negative_pivot", p, d)
        if d == 0:
            # All remaining diagonals are <= 0 here; a PSD matrix with a zero
            # diagonal entry has the whole row zero.
            for r in active:
                if A[r, r] < 0:
                    return LDLResult(False, tuple(terms), "negative_pivot", r, A[r, r])
            for r in active:
                for c in active:
                    if A[r, c] != 0:
                        return LDLResult(False, tuple(terms), "zero_diagonal_nonzero_row", r, A[r, c])
            break
        col = {r: A[r, p] for r in active}
        vec = [Fraction(0)] * N
        for r, v in col.items():
            vec[r] = v / d
        terms.append(LDLTerm(d, tuple(vec)))
        active.remove(p)
        for r in active:
            if col[r] == 0:
                continue
            for c in active:
                if col[c] != 0:
                    A[r, c] -= col[r] * col[c] / d
    return LDLResult(True, tuple(terms))
