"""Exact integer matrices, Hermite and Smith normal forms, lattice solving.

All arithmetic is exact on unbounded Python ints; there are no overflow
semantics anywhere.  Matrices are immutable once built, and matrices with
zero rows or zero columns are legal everywhere (they denote zero modules
and zero maps).
"""

from __future__ import annotations

from functools import lru_cache
from operator import index as _int
from typing import Iterable, Optional, Sequence


class IntMatrix:
    """Dense immutable matrix of exact integers, row-major."""

    __slots__ = ("nrows", "ncols", "_rows", "_hash")

    def __init__(self, rows: Iterable[Iterable[int]], ncols: int | None = None):
        data = tuple(tuple(_int(e) for e in row) for row in rows)
        if data:
            width = len(data[0])
            if any(len(row) != width for row in data):
                raise ValueError("rows of unequal length")
            if ncols is not None and ncols != width:
                raise ValueError(f"ncols={ncols} does not match row width {width}")
            ncols = width
        elif ncols is None:
            ncols = 0
        if ncols < 0:
            raise ValueError("negative ncols")
        self.nrows = len(data)
        self.ncols = ncols
        self._rows = data
        self._hash = None

    @classmethod
    def _raw(cls, rows: tuple, ncols: int) -> "IntMatrix":
        # trusted fast path: rows must already be a tuple of equal-width
        # tuples of Python ints
        obj = object.__new__(cls)
        obj.nrows = len(rows)
        obj.ncols = ncols
        obj._rows = rows
        obj._hash = None
        return obj

    # -- construction helpers ------------------------------------------------

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "IntMatrix":
        row = (0,) * ncols
        return cls([row] * nrows, ncols=ncols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], ncols=n)

    @classmethod
    def diagonal(cls, entries: Sequence[int], nrows: int | None = None,
                 ncols: int | None = None) -> "IntMatrix":
        entries = [_int(e) for e in entries]
        m = len(entries) if nrows is None else nrows
        n = len(entries) if ncols is None else ncols
        rows = [[entries[i] if (i == j and i < len(entries)) else 0
                 for j in range(n)] for i in range(m)]
        return cls(rows, ncols=n)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[int]], nrows: int) -> "IntMatrix":
        for c in cols:
            if len(c) != nrows:
                raise ValueError("column of wrong length")
        rows = [[c[i] for c in cols] for i in range(nrows)]
        return cls(rows, ncols=len(cols))

    @classmethod
    def column(cls, vec: Sequence[int]) -> "IntMatrix":
        return cls([[v] for v in vec], ncols=1)

    # -- access ----------------------------------------------------------------

    def __getitem__(self, ij) -> int:
        i, j = ij
        return self._rows[i][j]

    def row(self, i: int) -> tuple:
        return self._rows[i]

    def col(self, j: int) -> tuple:
        if not 0 <= j < self.ncols:
            raise IndexError(j)
        return tuple(row[j] for row in self._rows)

    def columns(self) -> list:
        return [self.col(j) for j in range(self.ncols)]

    def top_rows(self, k: int) -> "IntMatrix":
        return IntMatrix._raw(self._rows[:k], self.ncols)

    def to_lists(self) -> list:
        return [list(row) for row in self._rows]

    # -- arithmetic --------------------------------------------------------------

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if not isinstance(other, IntMatrix):
            return NotImplemented
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        orows = other._rows
        ncols = other.ncols
        out = []
        for arow in self._rows:
            acc = [0] * ncols
            for k, a in enumerate(arow):
                if a:
                    brow = orows[k]
                    for j, b in enumerate(brow):
                        if b:
                            acc[j] += a * b
            out.append(tuple(acc))
        return IntMatrix._raw(tuple(out), ncols)

    def apply(self, vec: Sequence[int]) -> tuple:
        """Matrix-vector product."""
        if len(vec) != self.ncols:
            raise ValueError("vector of wrong length")
        out = []
        for row in self._rows:
            s = 0
            for a, b in zip(row, vec):
                if a and b:
                    s += a * b
            out.append(s)
        return tuple(out)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix._raw(tuple(tuple(a + b for a, b in zip(r1, r2))
                                    for r1, r2 in zip(self._rows, other._rows)),
                              self.ncols)

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix._raw(tuple(tuple(a - b for a, b in zip(r1, r2))
                                    for r1, r2 in zip(self._rows, other._rows)),
                              self.ncols)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix._raw(tuple(tuple(-a for a in row) for row in self._rows),
                              self.ncols)

    def __rmul__(self, c: int) -> "IntMatrix":
        c = _int(c)
        return IntMatrix._raw(tuple(tuple(c * a for a in row) for row in self._rows),
                              self.ncols)

    def transpose(self) -> "IntMatrix":
        return IntMatrix._raw(tuple(self.col(j) for j in range(self.ncols)),
                              self.nrows)

    def mod(self, p: int) -> "IntMatrix":
        if p <= 0:
            raise ValueError("modulus must be positive")
        return IntMatrix._raw(tuple(tuple(a % p for a in row) for row in self._rows),
                              self.ncols)

    # -- predicates ----------------------------------------------------------------

    @property
    def shape(self) -> tuple:
        return (self.nrows, self.ncols)

    def is_zero(self) -> bool:
        return all(not a for row in self._rows for a in row)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.ncols == other.ncols and self._rows == other._rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ncols, self._rows))
        return self._hash

    def __repr__(self) -> str:
        if self.nrows == 0 or self.ncols == 0:
            return f"IntMatrix(zeros {self.nrows}x{self.ncols})"
        body = ", ".join(str(list(row)) for row in self._rows)
        return f"IntMatrix([{body}])"


def hstack(*mats: IntMatrix) -> IntMatrix:
    if not mats:
        raise ValueError("hstack of nothing")
    nrows = mats[0].nrows
    if any(m.nrows != nrows for m in mats):
        raise ValueError("hstack: row counts differ")
    rows = tuple(sum((m._rows[i] for m in mats), ()) for i in range(nrows))
    return IntMatrix._raw(rows, sum(m.ncols for m in mats))


@lru_cache(maxsize=None)
def augmented(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    """Cached two-block [a | b]; solver state attaches to the result."""
    return hstack(a, b)


def vstack(*mats: IntMatrix) -> IntMatrix:
    if not mats:
        raise ValueError("vstack of nothing")
    ncols = mats[0].ncols
    if any(m.ncols != ncols for m in mats):
        raise ValueError("vstack: column counts differ")
    rows = [row for m in mats for row in m._rows]
    return IntMatrix(rows, ncols=ncols)


# -- Hermite normal form (column style) ------------------------------------------


@lru_cache(maxsize=None)
def _hnf_cached(M: IntMatrix):
    m, n = M.nrows, M.ncols
    cols = [list(M.col(j)) for j in range(n)]
    ucols = [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    pivots = []
    c = 0
    for i in range(m):
        if c == n:
            break
        live = [j for j in range(c, n) if cols[j][i]]
        if not live:
            continue
        while len(live) > 1:
            j0 = min(live, key=lambda j: (abs(cols[j][i]), j))
            a = cols[j0][i]
            base, ubase = cols[j0], ucols[j0]
            for j in live:
                if j == j0:
                    continue
                q = cols[j][i] // a
                if q:
                    cj, uj = cols[j], ucols[j]
                    for t in range(m):
                        if base[t]:
                            cj[t] -= q * base[t]
                    for t in range(n):
                        if ubase[t]:
                            uj[t] -= q * ubase[t]
            live = [j for j in live if cols[j][i]]
        j0 = live[0]
        if j0 != c:
            cols[c], cols[j0] = cols[j0], cols[c]
            ucols[c], ucols[j0] = ucols[j0], ucols[c]
        if cols[c][i] < 0:
            cols[c] = [-x for x in cols[c]]
            ucols[c] = [-x for x in ucols[c]]
        piv = cols[c][i]
        base, ubase = cols[c], ucols[c]
        for j in range(c):
            q = cols[j][i] // piv
            if q:
                cj, uj = cols[j], ucols[j]
                for t in range(m):
                    if base[t]:
                        cj[t] -= q * base[t]
                for t in range(n):
                    if ubase[t]:
                        uj[t] -= q * ubase[t]
        pivots.append((i, c))
        c += 1
    H = IntMatrix.from_columns(cols, m)
    U = IntMatrix.from_columns(ucols, n)
    hcols = tuple(tuple(col) for col in cols)
    ucols_t = tuple(tuple(col) for col in ucols)
    return H, U, tuple(pivots), hcols, ucols_t


def hnf(M: IntMatrix):
    """Column Hermite normal form.

    Returns (H, U) with M @ U = H and U unimodular.  H is column echelon:
    pivot rows strictly increase left to right, pivots are positive, the
    entries left of a pivot in its row lie in [0, pivot), and zero columns
    are collected on the right.  H is the canonical form of the column
    lattice of M, so two matrices span the same lattice iff their H agree.
    """
    H, U, _, _, _ = _hnf_cached(M)
    return H, U


def lattice_solve(M: IntMatrix, b: Sequence[int]) -> Optional[tuple]:
    """Solve M @ x = b over the integers.

    Returns a coefficient vector x when b lies in the column lattice of M,
    and None otherwise (a definite answer either way).
    """
    b = tuple(b)
    if len(b) != M.nrows:
        raise ValueError("right-hand side of wrong length")
    _, _, pivots, hcols, ucols = _hnf_cached(M)
    res = list(b)
    support = []
    for (i, c) in pivots:
        v = res[i]
        if v:
            col = hcols[c]
            piv = col[i]
            if v % piv:
                return None
            q = v // piv
            for idx, entry in enumerate(col):
                if entry:
                    res[idx] -= q * entry
            support.append((c, q))
    if any(res):
        return None
    out = [0] * M.ncols
    for c, q in support:
        ucol = ucols[c]
        for idx, entry in enumerate(ucol):
            if entry:
                out[idx] += q * entry
    return tuple(out)


def lattice_contains(M: IntMatrix, vectors: Iterable[Sequence[int]]) -> bool:
    """Whether every given vector lies in the column lattice of M."""
    return all(lattice_solve(M, v) is not None for v in vectors)


def kernel_basis(M: IntMatrix) -> IntMatrix:
    """Basis of the integer kernel lattice {x : M @ x = 0}, as columns."""
    _, U, pivots, _, _ = _hnf_cached(M)
    npiv = len(pivots)
    return IntMatrix.from_columns([U.col(j) for j in range(npiv, M.ncols)], M.ncols)


def preimage_basis(f: IntMatrix, rel: IntMatrix) -> IntMatrix:
    """Columns spanning {x : f @ x lies in the column lattice of rel}."""
    if f.nrows != rel.nrows:
        raise ValueError("row counts differ")
    K = kernel_basis(augmented(f, rel))
    return K.top_rows(f.ncols)


def is_unimodular(M: IntMatrix) -> bool:
    if M.nrows != M.ncols:
        return False
    H, _ = hnf(M)
    return H == IntMatrix.identity(M.nrows)


def unimodular_inverse(M: IntMatrix) -> IntMatrix:
    """Exact inverse of a unimodular matrix (via its Hermite form)."""
    if M.nrows != M.ncols:
        raise ValueError("matrix is not square")
    H, U = hnf(M)
    if H != IntMatrix.identity(M.nrows):
        raise ValueError("matrix is not unimodular")
    return U


# -- Smith normal form -------------------------------------------------------------


def _swap_rows(A, i, j):
    A[i], A[j] = A[j], A[i]


def _swap_cols(A, i, j):
    for row in A:
        row[i], row[j] = row[j], row[i]


@lru_cache(maxsize=None)
def _snf_cached(M: IntMatrix):
    m, n = M.nrows, M.ncols
    A = [list(row) for row in M._rows]
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    V = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    for t in range(min(m, n)):
        # minimal-absolute-value pivot in the trailing submatrix
        best = None
        pi = pj = -1
        for i in range(t, m):
            Ai = A[i]
            for j in range(t, n):
                a = Ai[j]
                if a:
                    v = a if a > 0 else -a
                    if best is None or v < best:
                        best, pi, pj = v, i, j
                        if v == 1:
                            break
            if best == 1:
                break
        if best is None:
            break
        if pi != t:
            _swap_rows(A, t, pi)
            _swap_rows(U, t, pi)
        if pj != t:
            _swap_cols(A, t, pj)
            _swap_cols(V, t, pj)

        while True:
            if any(A[i][t] for i in range(t + 1, m)):
                i0 = min((i for i in range(t, m) if A[i][t]),
                         key=lambda i: (abs(A[i][t]), i))
                if i0 != t:
                    _swap_rows(A, t, i0)
                    _swap_rows(U, t, i0)
                piv = A[t][t]
                At, Ut = A[t], U[t]
                for i in range(t + 1, m):
                    a = A[i][t]
                    if a:
                        q = a // piv
                        if q:
                            Ai, Ui = A[i], U[i]
                            for jj in range(n):
                                if At[jj]:
                                    Ai[jj] -= q * At[jj]
                            for jj in range(m):
                                if Ut[jj]:
                                    Ui[jj] -= q * Ut[jj]
                continue
            if any(A[t][j] for j in range(t + 1, n)):
                j0 = min((j for j in range(t, n) if A[t][j]),
                         key=lambda j: (abs(A[t][j]), j))
                if j0 != t:
                    _swap_cols(A, t, j0)
                    _swap_cols(V, t, j0)
                piv = A[t][t]
                for j in range(t + 1, n):
                    a = A[t][j]
                    if a:
                        q = a // piv
                        if q:
                            for row in A:
                                if row[t]:
                                    row[j] -= q * row[t]
                            for row in V:
                                if row[t]:
                                    row[j] -= q * row[t]
                continue
            piv = A[t][t]
            bad = None
            for i in range(t + 1, m):
                Ai = A[i]
                for j in range(t + 1, n):
                    if Ai[j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            # fold the offending row into the pivot row; the next pass
            # shrinks the pivot to a divisor of everything remaining
            Abad, Ubad = A[bad], U[bad]
            At, Ut = A[t], U[t]
            for jj in range(n):
                At[jj] += Abad[jj]
            for jj in range(m):
                Ut[jj] += Ubad[jj]

        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]

    return IntMatrix(A, ncols=n), IntMatrix(U, ncols=m), IntMatrix(V, ncols=n)


def snf(M: IntMatrix):
    """Smith normal form.

    Returns (S, U, V) with U @ M @ V = S, U and V unimodular, S diagonal
    with nonnegative entries d1 | d2 | ... (zeros last).  Pivoting always
    picks the minimal-absolute-value nonzero entry, which keeps the
    intermediate entries small; correctness, not speed, is the contract.
    """
    return _snf_cached(M)


def snf_diagonal(M: IntMatrix) -> tuple:
    S, _, _ = _snf_cached(M)
    return tuple(S[i, i] for i in range(min(S.nrows, S.ncols)))


def det(M: IntMatrix) -> int:
    """Exact determinant (fraction-free Bareiss elimination)."""
    if M.nrows != M.ncols:
        raise ValueError("determinant of a non-square matrix")
    n = M.nrows
    if n == 0:
        return 1
    a = [list(row) for row in M._rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]
