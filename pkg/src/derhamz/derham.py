"""Monomial bases of polynomial differential forms over Z and their maps.

The graded piece of form degree i and total degree n in r variables has
basis x^alpha dx_T with |alpha| = n - i and T an i-subset of {1..r}; the
element x^alpha dx_{t1} ^ ... ^ dx_{ti} is stored as (alpha, T).

Basis order is fixed so matrices are reproducible across runs: primary key
T in colexicographic increasing order, secondary key alpha in lexicographic
decreasing order.  Golden files depend on this order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import NamedTuple

from .intlinalg import IntMatrix


class BasisElement(NamedTuple):
    alpha: tuple            # exponent vector, length r, nonnegative
    T: tuple                # strictly increasing subset of {1..r}


def _compositions_desc(total: int, parts: int):
    """Exponent vectors of given length summing to total, lex decreasing."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions_desc(total - first, parts - 1):
            yield (first,) + rest


def _subsets_colex(r: int, i: int):
    """i-subsets of {1..r} in colexicographic increasing order."""
    from itertools import combinations

    return sorted(combinations(range(1, r + 1), i),
                  key=lambda T: tuple(reversed(T)))


@dataclass(frozen=True)
class GradedPiece:
    r: int
    n: int
    i: int
    elements: tuple

    @property
    def dim(self) -> int:
        return len(self.elements)

    def index(self, elem: BasisElement) -> int:
        return _index_map(self.r, self.n, self.i)[elem]

    def __iter__(self):
        return iter(self.elements)


@lru_cache(maxsize=None)
def basis(r: int, n: int, i: int) -> GradedPiece:
    """The documented ordered basis of the (r, n, i) graded piece.

    Out-of-range i yields the zero piece.  The dimension is
    C(n-i+r-1, r-1) * C(r, i) when 0 <= i <= min(n, r).
    """
    if r < 0 or n < 0:
        raise ValueError("r and n must be nonnegative")
    if i < 0 or i > r or i > n:
        return GradedPiece(r, n, i, ())
    elems = tuple(BasisElement(alpha, T)
                  for T in _subsets_colex(r, i)
                  for alpha in _compositions_desc(n - i, r))
    return GradedPiece(r, n, i, elems)


@lru_cache(maxsize=None)
def _index_map(r: int, n: int, i: int) -> dict:
    return {e: k for k, e in enumerate(basis(r, n, i).elements)}


def dim_formula(r: int, n: int, i: int) -> int:
    if i < 0 or i > r or i > n:
        return 0
    if r == 0:
        return 1 if n == i else 0
    return comb(n - i + r - 1, r - 1) * comb(r, i)


def _merge_sign(T: tuple, j: int) -> int:
    """Sign of moving dx_j past dx_T into sorted position."""
    return -1 if sum(1 for t in T if t < j) % 2 else 1


@lru_cache(maxsize=None)
def d_matrix(r: int, n: int, i: int) -> IntMatrix:
    """Polynomial differentiation on the (r, n, i) piece.

    d(x^alpha dx_T) = sum over j not in T of
    alpha_j x^(alpha - e_j) dx_j ^ dx_T.
    """
    src = basis(r, n, i)
    tgt = basis(r, n, i + 1)
    idx = _index_map(r, n, i + 1)
    cols = []
    for alpha, T in src:
        col = [0] * tgt.dim
        in_T = set(T)
        for j in range(1, r + 1):
            if j in in_T or alpha[j - 1] == 0:
                continue
            new_alpha = list(alpha)
            new_alpha[j - 1] -= 1
            new_T = tuple(sorted(T + (j,)))
            k = idx[BasisElement(tuple(new_alpha), new_T)]
            col[k] += _merge_sign(T, j) * alpha[j - 1]
        cols.append(col)
    return IntMatrix.from_columns(cols, tgt.dim)


@lru_cache(maxsize=None)
def koszul_matrix(r: int, n: int, i: int) -> IntMatrix:
    """The Koszul contraction: polynomials to 0, dx_t to x_t.

    kappa(x^alpha dx_T) = sum over positions k of
    (-1)^(k-1) x^(alpha + e_{t_k}) dx_{T minus t_k}.
    """
    src = basis(r, n, i)
    tgt = basis(r, n, i - 1)
    idx = _index_map(r, n, i - 1)
    cols = []
    for alpha, T in src:
        col = [0] * tgt.dim
        for pos, t in enumerate(T):
            new_alpha = list(alpha)
            new_alpha[t - 1] += 1
            new_T = T[:pos] + T[pos + 1:]
            k = idx[BasisElement(tuple(new_alpha), new_T)]
            col[k] += -1 if pos % 2 else 1
        cols.append(col)
    return IntMatrix.from_columns(cols, tgt.dim)


@lru_cache(maxsize=None)
def frobenius_matrix(r: int, n: int, i: int, p: int) -> IntMatrix:
    """The p-th power chain map: x to x^p, dx to p x^(p-1) dx.

    F(x^alpha dx_T) = p^i x^(p alpha + (p-1) 1_T) dx_T, landing in total
    degree p*n.  Defined only after the coordinate basis is chosen; it is
    not natural and no naturality is claimed.
    """
    src = basis(r, n, i)
    tgt = basis(r, p * n, i)
    idx = _index_map(r, p * n, i)
    coeff = p ** i
    cols = []
    for alpha, T in src:
        col = [0] * tgt.dim
        new_alpha = tuple(p * a + (p - 1 if (j + 1) in T else 0)
                          for j, a in enumerate(alpha))
        col[idx[BasisElement(new_alpha, T)]] = coeff
        cols.append(col)
    return IntMatrix.from_columns(cols, tgt.dim)


@lru_cache(maxsize=None)
def cartier_rep_matrix(r: int, n: int, i: int, p: int) -> IntMatrix:
    """Cochain representative of the inverse Cartier map, mod p.

    x^alpha dx_T maps to x^(p alpha + (p-1) 1_T) dx_T; this is the
    Frobenius divided by p^i, read modulo p.  Every image column is a mod-p
    cocycle in total degree p*n.
    """
    src = basis(r, n, i)
    tgt = basis(r, p * n, i)
    idx = _index_map(r, p * n, i)
    cols = []
    for alpha, T in src:
        col = [0] * tgt.dim
        new_alpha = tuple(p * a + (p - 1 if (j + 1) in T else 0)
                          for j, a in enumerate(alpha))
        col[idx[BasisElement(new_alpha, T)]] = 1
        cols.append(col)
    return IntMatrix.from_columns(cols, tgt.dim)


def substitution_map(f: IntMatrix, n: int, i: int) -> IntMatrix:
    """Functoriality under the linear substitution given by f (s x r).

    x_j maps to sum_k f[k][j] y_k and dx_j to sum_k f[k][j] dy_k, expanded
    multiplicatively; the result commutes with both d and kappa.
    """
    s, r = f.nrows, f.ncols
    src = basis(r, n, i)
    tgt = basis(s, n, i)
    idx = _index_map(s, n, i)
    cols = []
    zero_alpha = (0,) * s
    for alpha, T in src:
        terms = {(zero_alpha, ()): 1}
        for j in range(1, r + 1):
            for _ in range(alpha[j - 1]):
                new = {}
                for (a, W), c in terms.items():
                    for k in range(s):
                        fk = f[k, j - 1]
                        if fk:
                            a2 = a[:k] + (a[k] + 1,) + a[k + 1:]
                            key = (a2, W)
                            new[key] = new.get(key, 0) + c * fk
                terms = new
        for j in T:
            new = {}
            for (a, W), c in terms.items():
                for k in range(1, s + 1):
                    fk = f[k - 1, j - 1]
                    if fk and k not in W:
                        sign = -1 if sum(1 for w in W if w > k) % 2 else 1
                        key = (a, tuple(sorted(W + (k,))))
                        new[key] = new.get(key, 0) + c * fk * sign
            terms = new
        col = [0] * tgt.dim
        for (a, W), c in terms.items():
            if c:
                col[idx[BasisElement(a, W)]] += c
        cols.append(col)
    return IntMatrix.from_columns(cols, tgt.dim)


def reduce_mod_p(M: IntMatrix, p: int) -> IntMatrix:
    """Entrywise residues in 0..p-1."""
    return M.mod(p)


@dataclass(frozen=True)
class ComplexZ:
    """The de Rham complex in one total degree, as integer matrices."""
    r: int
    n: int
    differentials: tuple   # d^i for i = 0 .. min(n, r)

    @property
    def top(self) -> int:
        return len(self.differentials) - 1

    def d(self, i: int) -> IntMatrix:
        if 0 <= i <= self.top:
            return self.differentials[i]
        dim = dim_formula(self.r, self.n, i)
        return IntMatrix.zeros(dim_formula(self.r, self.n, i + 1), dim)


@lru_cache(maxsize=None)
def complex_z(r: int, n: int) -> ComplexZ:
    top = min(n, r)
    ds = tuple(d_matrix(r, n, i) for i in range(top + 1))
    for i in range(top):
        if not (ds[i + 1] @ ds[i]).is_zero():
            raise AssertionError(f"d∘d != 0 at (r={r}, n={n}, i={i})")
    return ComplexZ(r, n, ds)
