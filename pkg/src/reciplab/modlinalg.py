"""Small linear algebra: over F_ell (numpy), over Q (exact), and over Z/W.

Matrices here are tiny (a few dozen columns at most), so clarity wins over
blocking or vectorized pivoting.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import PreconditionError


def rref_mod(A, ell: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over F_ell; returns (nonzero rows, pivot columns)."""
    M = np.array(A, dtype=np.int64) % ell
    if M.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    rows, cols = M.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + nz[0]
        if p != r:
            M[[r, p]] = M[[p, r]]
        M[r] = M[r] * pow(int(M[r, c]), -1, ell) % ell
        for i in range(rows):
            if i != r and M[i, c]:
                M[i] = (M[i] - M[i, c] * M[r]) % ell
        pivots.append(c)
        r += 1
    return M[:r], pivots


def rank_mod(A, ell: int) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(rref_mod(A, ell)[1])


def span_coefficients(rows, v, ell: int) -> list[int] | None:
    """Coefficients c with sum c_i rows[i] = v over F_ell, or None if v is outside the span."""
    rows = np.array(rows, dtype=np.int64).reshape(-1, len(v)) % ell
    v = np.array(v, dtype=np.int64) % ell
    k = rows.shape[0]
    if k == 0:
        return [] if not v.any() else None
    # solve rows^T c = v through the augmented matrix [rows^T | v]
    aug = np.concatenate([rows.T, v[:, None]], axis=1)
    R, pivots = rref_mod(aug, ell)
    if k in pivots:
        return None
    c = [0] * k
    for row, p in zip(R, pivots):
        c[p] = int(row[k])
    return c


def in_span_mod(rows, v, ell: int) -> bool:
    return span_coefficients(rows, v, ell) is not None


def nullspace_mod(A, ell: int) -> np.ndarray:
    """Basis (as rows) of {x : A x = 0} over F_ell."""
    A = np.array(A, dtype=np.int64)
    n = A.shape[1]
    R, pivots = rref_mod(A, ell)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = np.zeros(n, dtype=np.int64)
        x[f] = 1
        for row, p in zip(R, pivots):
            x[p] = (-row[f]) % ell
        basis.append(x)
    return np.array(basis, dtype=np.int64).reshape(len(basis), n)


def rational_rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    M = [[Fraction(x) for x in row] for row in rows]
    if not M:
        return [], []
    ncols = len(M[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rational_rank(rows) -> int:
    return len(rational_rref(rows)[1])


def rational_left_kernel(rows) -> list[list[int]]:
    """Integer basis of {c : sum c_i rows[i] = 0} (primitive, smallest denominators cleared)."""
    rows = [list(r) for r in rows]
    if not rows:
        return []
    ncols = len(rows[0])
    transposed = [[rows[i][j] for i in range(len(rows))] for j in range(ncols)]
    R, pivots = rational_rref(transposed) if ncols else ([], [])
    k = len(rows)
    out = []
    for f in (c for c in range(k) if c not in pivots):
        x = [Fraction(0)] * k
        x[f] = Fraction(1)
        for row, p in zip(R, pivots):
            x[p] = -row[f]
        den = 1
        for a in x:
            den = den * a.denominator // _gcd(den, a.denominator)
        out.append([int(a * den) for a in x])
    return out


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _echelon_mod(A: list[list[int]], b: list[int], W: int):
    """Unimodular row reduction of [A | b] over Z, entries kept reduced mod W."""
    rows = [[x % W for x in row] + [y % W] for row, y in zip(A, b)]
    ncols = len(A[0]) if A else 0
    echelon = []  # (pivot column, row)
    for c in range(ncols):
        active = [row for row in rows if row[c]]
        if not active:
            continue
        rest = [row for row in rows if not row[c]]
        piv = active[0]
        for other in active[1:]:
            g, s, t = _xgcd(piv[c], other[c])
            u, v = piv[c] // g, other[c] // g
            new_piv = [(s * x + t * y) % W for x, y in zip(piv, other)]
            reduced = [(u * y - v * x) % W for x, y in zip(piv, other)]
            piv = new_piv
            rest.append(reduced)
        echelon.append((c, piv))
        rows = rest
    # rows left over have zeros in every coefficient column
    consistent = all(row[-1] % W == 0 for row in rows)
    return echelon, consistent


def solve_congruences(A: Sequence[Sequence[int]], b: Sequence[int], W: int,
                      limit: int = 10_000) -> tuple[list[tuple[int, ...]], bool]:
    """All x in (Z/W)^n with A x = b (mod W).

    Returns (solutions, complete); ``complete`` is False when enumeration was
    cut off at ``limit`` solutions.  Free columns are enumerated over all of
    Z/W, so callers should keep the unknown count small.
    """
    if W < 1:
        raise PreconditionError("modulus must be positive")
    A = [list(map(int, row)) for row in A]
    b = [int(y) for y in b]
    if len(A) != len(b):
        raise ValueError("A and b have different numbers of rows")
    n = len(A[0]) if A else 0
    if W == 1:
        return [tuple([0] * n)], True
    echelon, consistent = _echelon_mod(A, b, W)
    if not consistent:
        return [], True
    by_col = dict(echelon)
    out: list[tuple[int, ...]] = []
    x = [0] * n

    def assign(c: int) -> bool:
        if c < 0:
            out.append(tuple(x))
            return len(out) < limit
        row = by_col.get(c)
        if row is None:
            choices = range(W)
        else:
            rhs = (row[-1] - sum(row[j] * x[j] for j in range(c + 1, n))) % W
            g = _gcd(row[c], W)
            if rhs % g:
                return True
            step = W // g
            base = (rhs // g) * pow(row[c] // g, -1, step) % step if step > 1 else 0
            choices = range(base, W, step)
        for v in choices:
            x[c] = v
            if not assign(c - 1):
                return False
        x[c] = 0
        return True

    complete = assign(n - 1)
    return sorted(out), complete
