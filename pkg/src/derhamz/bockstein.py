"""Bockstein exact couples of the de Rham complex and their derived pages.

The couple at a prime p is H --(xp)--> H --(reduce)--> H(mod p) --(del)-->,
generated by the short exact coefficient sequence for multiplication by p.
Deriving it repeatedly yields the spectral-sequence pages; a closed-form
lattice computation of the same pages serves as an independent oracle.

Pages are stored as elementary abelian p-groups with explicit cochain-level
representatives, so later comparisons are matrix equalities rather than
abstract isomorphism claims.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from . import modp
from .abgroups import (
    FgAbGroup,
    Homomorphism,
    corestrict,
    express_through,
    is_exact_at,
    preimage_basis,
    subgroup_presentation,
)
from .cohomology import integral_cohomology, modp_cohomology
from .derham import cartier_rep_matrix, complex_z, dim_formula
from .intlinalg import IntMatrix, hstack, lattice_solve, unimodular_inverse
from .modp import check_prime, valuation


class ExactnessError(RuntimeError):
    """An exact couple failed its exactness certificate."""


class ExactCouple:
    """One stage of the Bockstein tower for a fixed (r, n, p).

    D and E hold the per-degree groups, i/j/k the three maps (k raises the
    degree by one and lands in the zero group at the top).  e_reps carries
    mod-p cochain representatives for the E generators; parent points to
    the couple this one was derived from.
    """

    def __init__(self, r, n, p, level, D, E, i_maps, j_maps, k_maps,
                 e_reps, parent=None, modp_result=None,
                 stage_reps=None, stage_im=None):
        self.r = r
        self.n = n
        self.p = p
        self.level = level
        self.imax = len(E) - 1
        self.D = tuple(D)
        self.E = tuple(E)
        self.i_maps = tuple(i_maps)
        self.j_maps = tuple(j_maps)
        self.k_maps = tuple(k_maps)
        self.e_reps = tuple(e_reps)
        self.parent = parent
        self._modp = modp_result
        self._stage_reps = stage_reps      # E generators in parent-E coords
        self._stage_im = stage_im          # image of the parent differential
        self._solvers = {}

    def D_at(self, i: int) -> FgAbGroup:
        if 0 <= i <= self.imax:
            return self.D[i]
        return FgAbGroup.zero()

    def e_dim(self, i: int) -> int:
        if 0 <= i <= self.imax:
            return self.E[i].ngens
        return 0

    @property
    def dims(self) -> tuple:
        return tuple(g.ngens for g in self.E)

    def d_matrix(self, i: int) -> IntMatrix:
        """The page differential j∘k on E, entries reduced mod p."""
        if i + 1 > self.imax:
            return IntMatrix.zeros(0, self.e_dim(i))
        return (self.j_maps[i + 1].matrix @ self.k_maps[i].matrix).mod(self.p)

    def _stage_solver(self, i: int) -> modp.Solver:
        solver = self._solvers.get(i)
        if solver is None:
            solver = modp.Solver(
                hstack(self._stage_reps[i], self._stage_im[i]), self.p)
            self._solvers[i] = solver
        return solver

    def express_cochain(self, i: int, z: Sequence[int]) -> Optional[tuple]:
        """Coordinates on E^i of the class of a mod-p cochain, walking the
        tower of subquotients; None when the class does not survive to this
        page (or z is no cocycle)."""
        if self.parent is None:
            return self._modp.express(i, z)
        prev = self.parent.express_cochain(i, z)
        if prev is None:
            return None
        return self.express_cochain_from_parent_coords(i, prev)

    def express_cochain_from_parent_coords(self, i: int,
                                           prev: Sequence[int]) -> Optional[tuple]:
        sol = self._stage_solver(i).solve(prev)
        if sol is None:
            return None
        return sol[: self.e_dim(i)]

    def exactness_failures(self) -> list:
        """All broken exactness nodes, each with a witness element."""
        failures = []
        zero_E = FgAbGroup.zero()
        for i in range(self.imax + 1):
            if i >= 1:
                k_in = self.k_maps[i - 1]
            else:
                k_in = Homomorphism.zero(zero_E, self.D[0])
            for label, (f, g) in (
                ("ker i = im k", (k_in, self.i_maps[i])),
                ("ker j = im i", (self.i_maps[i], self.j_maps[i])),
                ("ker k = im j", (self.j_maps[i], self.k_maps[i])),
            ):
                ok, witness = is_exact_at(f, g)
                if not ok:
                    failures.append((label, i, witness))
        return failures

    def check_exactness(self) -> None:
        failures = self.exactness_failures()
        if failures:
            label, i, witness = failures[0]
            raise ExactnessError(
                f"couple level {self.level} at (r={self.r}, n={self.n}, "
                f"p={self.p}) fails {label} in degree {i}; witness {witness}")


def initial_couple(r: int, n: int, p: int) -> ExactCouple:
    """The couple of the mod-p coefficient sequence in total degree n.

    D is integral cohomology with the multiplication-by-p map, E is mod-p
    cohomology with j the reduction of lifts and k the connecting map
    sending a class [z] to [(d z~)/p] for any integral lift z~.
    """
    check_prime(p)
    if n < 1:
        raise ValueError("total degree must be >= 1")
    HZ = integral_cohomology(r, n)
    MP = modp_cohomology(r, n, p)
    cpx = complex_z(r, n)
    imax = cpx.top

    D = [HZ.group(i) for i in range(imax + 1)]
    E = [FgAbGroup.elementary(p, MP.dim(i)) for i in range(imax + 1)]
    i_maps = [Homomorphism(D[i], D[i], p * IntMatrix.identity(D[i].ngens))
              for i in range(imax + 1)]

    j_maps = []
    for i in range(imax + 1):
        cols = []
        lift = HZ.lift(i)
        for j in range(D[i].ngens):
            coords = MP.express(i, [v % p for v in lift.col(j)])
            if coords is None:
                raise RuntimeError("integral cocycle failed to reduce mod p")
            cols.append(list(coords))
        j_maps.append(Homomorphism(
            D[i], E[i], IntMatrix.from_columns(cols, E[i].ngens)))

    k_maps = []
    for i in range(imax + 1):
        target = D[i + 1] if i + 1 <= imax else FgAbGroup.zero()
        cols = []
        for rep in MP.degree(i).reps:
            dv = cpx.d(i).apply(rep)
            if any(v % p for v in dv):
                raise RuntimeError("d of a mod-p cocycle lift not divisible by p")
            w = tuple(v // p for v in dv)
            coords = HZ.express(i + 1, w) if i + 1 <= imax else ()
            cols.append(list(coords))
        k_maps.append(Homomorphism(
            E[i], target, IntMatrix.from_columns(cols, target.ngens)))

    e_reps = [MP.rep_matrix(i) for i in range(imax + 1)]
    return ExactCouple(r, n, p, 1, D, E, i_maps, j_maps, k_maps, e_reps,
                       modp_result=MP)


def derive(c: ExactCouple) -> ExactCouple:
    """The derived couple: D' = im(i), E' = ker(jk)/im(jk).

    The input couple must be exact (checked).  j' needs preimages under i;
    whenever the preimage is ambiguous modulo a nontrivial kernel, the
    value is recomputed with a second solution and both must agree.
    """
    c.check_exactness()
    p = c.p
    imax = c.imax

    subs = []
    incls = []
    for i in range(imax + 1):
        sub, incl = subgroup_presentation(c.D[i], c.i_maps[i].matrix)
        subs.append(sub)
        incls.append(incl)

    new_i = []
    for i in range(imax + 1):
        comp = c.i_maps[i] @ incls[i]
        cor = corestrict(comp, subs[i], incls[i])
        if cor is None:
            raise ExactnessError("restriction of i does not land in im(i)")
        new_i.append(cor)

    # E' = ker d / im d with d = j∘k, handled entirely mod p
    stage_reps = []
    stage_im = []
    new_E = []
    new_e_reps = []
    for i in range(imax + 1):
        d_here = c.d_matrix(i)
        d_prev = c.d_matrix(i - 1) if i >= 1 else IntMatrix.zeros(c.e_dim(0), 0)
        kernel = modp.nullspace(d_here, p)
        im_basis, _ = modp.image_basis(d_prev.mod(p), p)
        added = modp.complete_basis(im_basis, kernel, p)
        reps = [kernel[t] for t in added]
        dim_e = c.e_dim(i)
        stage_reps.append(IntMatrix.from_columns(reps, dim_e))
        stage_im.append(IntMatrix.from_columns(im_basis, dim_e))
        new_E.append(FgAbGroup.elementary(p, len(reps)))
        new_e_reps.append((c.e_reps[i] @ stage_reps[i]).mod(p))

    out = ExactCouple(c.r, c.n, p, c.level + 1, subs, new_E,
                      new_i, [None] * (imax + 1), [None] * (imax + 1),
                      new_e_reps, parent=c,
                      stage_reps=stage_reps, stage_im=stage_im)

    new_j = []
    for i in range(imax + 1):
        i_mat = c.i_maps[i].matrix
        kernel_i = preimage_basis(i_mat, c.D[i].relations)
        spare = None
        for j in range(kernel_i.ncols):
            col = kernel_i.col(j)
            if not c.D[i].element_is_zero(col):
                spare = col
                break
        cols = []
        for g in range(subs[i].ngens):
            a = incls[i].matrix.col(g)
            x = express_through(i_mat, c.D[i].relations, a)
            if x is None:
                raise ExactnessError("generator of im(i) has no i-preimage")
            coords = out.express_cochain_from_parent_coords(
                i, c.j_maps[i].matrix.apply(x))
            if coords is None:
                raise ExactnessError("j' value does not survive to E'")
            if spare is not None:
                x2 = tuple(u + v for u, v in zip(x, spare))
                coords2 = out.express_cochain_from_parent_coords(
                    i, c.j_maps[i].matrix.apply(x2))
                if coords2 is None or any(
                        (u - v) % p for u, v in zip(coords, coords2)):
                    raise ExactnessError(
                        "j' is not independent of the preimage choice")
            cols.append([v % p for v in coords])
        new_j.append(Homomorphism(
            subs[i], new_E[i], IntMatrix.from_columns(cols, new_E[i].ngens)))

    new_k = []
    for i in range(imax + 1):
        target = subs[i + 1] if i + 1 <= imax else FgAbGroup.zero()
        target_incl = incls[i + 1].matrix if i + 1 <= imax \
            else IntMatrix.zeros(0, 0)
        target_rel = c.D[i + 1].relations if i + 1 <= imax \
            else IntMatrix.zeros(0, 0)
        cols = []
        for t in range(new_E[i].ngens):
            u = stage_reps[i].col(t)
            w = c.k_maps[i].matrix.apply(u)
            y = express_through(target_incl, target_rel, w)
            if y is None:
                raise ExactnessError("k of a surviving class misses im(i)")
            cols.append(list(y))
        new_k.append(Homomorphism(
            new_E[i], target, IntMatrix.from_columns(cols, target.ngens)))

    out.j_maps = tuple(new_j)
    out.k_maps = tuple(new_k)
    return out


_COUPLES: dict = {}


def couples(r: int, n: int, p: int, upto: int) -> list:
    """The first `upto` couples (levels 1..upto) for (r, n, p), cached."""
    key = (r, n, p)
    chain = _COUPLES.get(key)
    if chain is None:
        chain = [initial_couple(r, n, p)]
        _COUPLES[key] = chain
    while len(chain) < upto:
        chain.append(derive(chain[-1]))
    return chain[:upto]


@dataclass(frozen=True)
class SpectralPage:
    """Page k: per-degree dimensions over F_p, differentials d_k, and mod-p
    cochain representatives of the chosen generators."""
    r: int
    n: int
    p: int
    k: int
    dims: tuple
    differentials: tuple
    cochain_reps: tuple

    @property
    def is_zero(self) -> bool:
        return all(d == 0 for d in self.dims)


def pages(r: int, n: int, p: int, kmax: int | None = None) -> list:
    """Pages 1..kmax extracted from iterated derived couples.

    kmax defaults to nu_p(n) + 1; pages past nu_p(n) are computed honestly
    and must come out zero.
    """
    check_prime(p)
    if n < 1:
        raise ValueError("total degree must be >= 1")
    if kmax is None:
        kmax = valuation(n, p) + 1
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    chain = couples(r, n, p, kmax)
    out = []
    for c in chain:
        diffs = tuple(c.d_matrix(i) for i in range(c.imax + 1))
        for i in range(c.imax):
            if not (diffs[i + 1] @ diffs[i]).mod(p).is_zero():
                raise RuntimeError("page differential does not square to zero")
        out.append(SpectralPage(r, n, p, c.level, c.dims, diffs, c.e_reps))
    return out


# -- closed-form oracle ------------------------------------------------------------


@lru_cache(maxsize=None)
def _z_basis(r: int, n: int, p: int, j: int, i: int) -> IntMatrix:
    """Basis of Z_j = {x in the (n, i) piece : dx in p^j * (next piece)}."""
    dim = dim_formula(r, n, i)
    if j == 0:
        return IntMatrix.identity(dim)
    cpx = complex_z(r, n)
    d = cpx.d(i)
    return preimage_basis(d, (p ** j) * IntMatrix.identity(d.nrows))


@lru_cache(maxsize=None)
def _closed_form_degree(r: int, n: int, p: int, k: int, i: int):
    """Minimal presentation data of Z_k / (p Z_{k-1} + p^(1-k) d Z_{k-1})."""
    cpx = complex_z(r, n)
    N = _z_basis(r, n, p, k, i)
    N_prev = _z_basis(r, n, p, k - 1, i)
    den_cols = [tuple(p * v for v in N_prev.col(j))
                for j in range(N_prev.ncols)]
    if i >= 1:
        N_low = _z_basis(r, n, p, k - 1, i - 1)
        scale = p ** (k - 1)
        for j in range(N_low.ncols):
            dv = cpx.d(i - 1).apply(N_low.col(j))
            if any(v % scale for v in dv):
                raise RuntimeError("denominator column is not divisible")
            den_cols.append(tuple(v // scale for v in dv))
    rel_cols = []
    for col in den_cols:
        y = lattice_solve(N, col)
        if y is None:
            raise RuntimeError("denominator does not lie in the numerator")
        rel_cols.append(list(y))
    G = FgAbGroup(N.ncols, IntMatrix.from_columns(rel_cols, N.ncols))
    diag = G.diagonal
    if any(d not in (1, p) for d in diag):
        raise RuntimeError(
            f"closed-form page not elementary abelian at degree {i}: {diag}")
    _, U, _ = G._snf_data()
    Uinv = unimodular_inverse(U)
    kept = tuple(idx for idx, d in enumerate(diag) if d == p)
    return N, U, Uinv, kept


def closed_form_page(r: int, n: int, p: int, k: int) -> SpectralPage:
    """Independent page computation from integer lattices.

    E_k^i = Z_k^i / (p Z_{k-1}^i + p^(1-k) d Z_{k-1}^(i-1)) with
    d_k[x] = [dx / p^k]; Z lattices come from Hermite forms of [d | -p^k I].
    Must agree degreewise, compatibly with d_k, with pages(...)[k-1].
    """
    check_prime(p)
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    cpx = complex_z(r, n)
    imax = cpx.top
    data = [_closed_form_degree(r, n, p, k, i) for i in range(imax + 1)]
    dims = tuple(len(kept) for (_, _, _, kept) in data)
    scale = p ** k

    reps = []
    for i in range(imax + 1):
        N, _, Uinv, kept = data[i]
        cols = [tuple(v % p for v in N.apply(Uinv.col(idx))) for idx in kept]
        reps.append(IntMatrix.from_columns(cols, dim_formula(r, n, i)))

    diffs = []
    for i in range(imax + 1):
        N, _, Uinv, kept = data[i]
        if i == imax:
            diffs.append(IntMatrix.zeros(0, dims[i]))
            continue
        N_next, U_next, _, kept_next = data[i + 1]
        cols = []
        for idx in kept:
            x = N.apply(Uinv.col(idx))
            dv = cpx.d(i).apply(x)
            if any(v % scale for v in dv):
                raise RuntimeError("d of a Z_k element not divisible by p^k")
            y = lattice_solve(N_next, tuple(v // scale for v in dv))
            if y is None:
                raise RuntimeError("d_k image left the numerator lattice")
            full = U_next.apply(y)
            cols.append([full[t] % p for t in kept_next])
        diffs.append(IntMatrix.from_columns(cols, dims[i + 1]))

    return SpectralPage(r, n, p, k, dims, tuple(diffs), tuple(reps))


def compare_with_closed_form(r: int, n: int, p: int,
                             kmax: int | None = None) -> list:
    """Check derived-couple pages against the closed-form oracle.

    For each page the canonical map sends a closed-form generator to the
    class of its cochain representative; the check demands equal dimensions,
    bijectivity, and conjugation of the differentials.  Returns one dict
    per page with an "ok" flag and a witness on failure.
    """
    if kmax is None:
        kmax = valuation(n, p) + 1
    chain = couples(r, n, p, kmax)
    results = []
    for k in range(1, kmax + 1):
        couple = chain[k - 1]
        cf = closed_form_page(r, n, p, k)
        report = {"k": k, "ok": True, "dims_derived": couple.dims,
                  "dims_closed_form": cf.dims}
        if couple.dims != cf.dims:
            report.update(ok=False, reason="dimension mismatch")
            results.append(report)
            continue
        phis = []
        for i in range(couple.imax + 1):
            cols = []
            failed = None
            for j in range(cf.cochain_reps[i].ncols):
                coords = couple.express_cochain(i, cf.cochain_reps[i].col(j))
                if coords is None:
                    failed = j
                    break
                cols.append([v % p for v in coords])
            if failed is not None:
                report.update(ok=False, reason="class does not survive",
                              degree=i, generator=failed)
                break
            phi = IntMatrix.from_columns(cols, couple.e_dim(i))
            if modp.rank(phi, p) != cf.dims[i]:
                report.update(ok=False, reason="comparison map not bijective",
                              degree=i)
                break
            phis.append(phi)
        if not report["ok"]:
            results.append(report)
            continue
        for i in range(couple.imax):
            lhs = (phis[i + 1] @ cf.differentials[i]).mod(p)
            rhs = (couple.d_matrix(i) @ phis[i]).mod(p)
            if lhs != rhs:
                report.update(ok=False, reason="differentials not conjugate",
                              degree=i, lhs=lhs.to_lists(), rhs=rhs.to_lists())
                break
        results.append(report)
    return results


# -- page identification (Cartier composite) ------------------------------------


@dataclass(frozen=True)
class PageIdentification:
    r: int
    n: int
    p: int
    k: int
    ok: bool
    dims_source: tuple
    dims_page: tuple
    checks: tuple
    witness: Optional[dict]


def verify_page_identification(r: int, n: int, p: int,
                               k: int) -> PageIdentification:
    """Identify page k with the mod-p de Rham complex of total degree n/p^k.

    Builds the explicit map by composing k Cartier cochain representatives,
    then checks it is an isomorphism of complexes: bijective per degree and
    conjugating d into d_k.  At k = nu_p(n) the next page must vanish.
    """
    check_prime(p)
    nu = valuation(n, p)
    if not 1 <= k <= nu:
        raise ValueError(f"need 1 <= k <= nu_p(n) = {nu}")
    m = n // p ** k
    couple = couples(r, n, p, k)[k - 1]
    cpx_n = complex_z(r, n)
    cpx_m = complex_z(r, m)
    imax = couple.imax
    checks = []
    witness = None
    ok = True

    dims_source = tuple(dim_formula(r, m, i) for i in range(imax + 1))
    dims_page = couple.dims
    if dims_source != dims_page:
        ok = False
        witness = {"check": "dimensions", "source": list(dims_source),
                   "page": list(dims_page)}
    checks.append(("dimensions agree", dims_source == dims_page))

    phis = []
    if ok:
        for i in range(imax + 1):
            comp = IntMatrix.identity(dim_formula(r, m, i))
            for s in range(k):
                comp = (cartier_rep_matrix(r, m * p ** s, i, p) @ comp).mod(p)
            if not (cpx_n.d(i) @ comp).mod(p).is_zero():
                ok = False
                witness = {"check": "cocycle", "degree": i}
                break
            cols = []
            for j in range(comp.ncols):
                coords = couple.express_cochain(i, comp.col(j))
                if coords is None:
                    ok = False
                    witness = {"check": "class survives", "degree": i,
                               "column": list(comp.col(j))}
                    break
                cols.append([v % p for v in coords])
            if not ok:
                break
            phi = IntMatrix.from_columns(cols, couple.e_dim(i))
            if modp.rank(phi, p) != dims_source[i]:
                ok = False
                witness = {"check": "bijective", "degree": i,
                           "matrix": phi.to_lists()}
                break
            phis.append(phi)
    checks.append(("cartier composite is an isomorphism per degree", ok))

    if ok:
        for i in range(imax):
            lhs = (phis[i + 1] @ cpx_m.d(i)).mod(p)
            rhs = (couple.d_matrix(i) @ phis[i]).mod(p)
            if lhs != rhs:
                ok = False
                witness = {"check": "conjugates d", "degree": i,
                           "lhs": lhs.to_lists(), "rhs": rhs.to_lists()}
                break
        checks.append(("conjugates the differential", ok))

    if ok and k == nu:
        nxt = couples(r, n, p, k + 1)[k]
        vanish = all(d == 0 for d in nxt.dims)
        checks.append(("page beyond nu vanishes", vanish))
        if not vanish:
            ok = False
            witness = {"check": "vanishing", "dims": list(nxt.dims)}

    return PageIdentification(r, n, p, k, ok, dims_source, dims_page,
                              tuple(checks), witness)
