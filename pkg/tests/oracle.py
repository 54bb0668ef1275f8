"""Brute-force reference computations, written without the library's linear algebra.

Nothing here imports multss.exactlin.  Ranks and solutions use Fraction
elimination, integer kernels use column reduction by the extended Euclidean
algorithm, invariant factors come from determinantal divisors, and finite
quotients are counted by enumerating subgroups element by element.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd


# ---------------------------------------------------------------------------
# rational linear algebra


def rank(rows) -> int:
    A = [[Fraction(x) for x in r] for r in rows]
    if not A:
        return 0
    m, n = len(A), len(A[0])
    rk = 0
    for c in range(n):
        p = next((i for i in range(rk, m) if A[i][c]), None)
        if p is None:
            continue
        A[rk], A[p] = A[p], A[rk]
        for i in range(m):
            if i != rk and A[i][c]:
                f = A[i][c] / A[rk][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[rk])]
        rk += 1
    return rk


def det(M) -> int:
    n = len(M)
    A = [[Fraction(x) for x in r] for r in M]
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if A[i][c]), None)
        if p is None:
            return 0
        if p != c:
            A[c], A[p] = A[p], A[c]
            d = -d
        d *= A[c][c]
        for i in range(c + 1, n):
            f = A[i][c] / A[c][c]
            A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return int(d)


def solve_rational(basis, v):
    """Coefficients x with sum x_i basis_i = v (basis linearly independent), or None."""
    k = len(basis)
    if k == 0:
        return [] if not any(v) else None
    n = len(v)
    aug = [[Fraction(basis[j][i]) for j in range(k)] + [Fraction(v[i])] for i in range(n)]
    piv = []
    r = 0
    for c in range(k):
        p = next((i for i in range(r, n) if aug[i][c]), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        aug[r] = [a / aug[r][c] for a in aug[r]]
        for i in range(n):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        piv.append(c)
        r += 1
    if any(aug[i][k] for i in range(r, n)):
        return None
    x = [Fraction(0)] * k
    for i, c in enumerate(piv):
        x[c] = aug[i][k]
    return x


# ---------------------------------------------------------------------------
# integer lattices


def row_echelon_basis(gens, dim: int) -> list:
    """A Z-basis of the span of integer vectors (Euclidean row reduction)."""
    rows = [list(g) for g in gens if any(g)]
    basis = []
    col = 0
    while rows and col < dim:
        rows = [r for r in rows if any(r)]
        live = [r for r in rows if r[col]]
        if not live:
            col += 1
            continue
        while len([r for r in live if r[col]]) > 1:
            live.sort(key=lambda r: abs(r[col]) if r[col] else float("inf"))
            piv = live[0]
            for r in live[1:]:
                if r[col]:
                    q = r[col] // piv[col]
                    for j in range(dim):
                        r[j] -= q * piv[j]
            live = [r for r in live if any(r)]
        piv = next(r for r in live if r[col])
        basis.append(list(piv))
        rows = [r for r in rows if r is not piv]
        col += 1
    return basis


def integer_kernel(M, ncols: int) -> list:
    """Z-basis of {x in Z^ncols : M x = 0} by unimodular column operations."""
    m = len(M)
    A = [list(r) for r in M]
    U = [[int(i == j) for j in range(ncols)] for i in range(ncols)]   # columns track operations
    col0 = 0
    for i in range(m):
        while True:
            nz = [j for j in range(col0, ncols) if A[i][j]]
            if len(nz) <= 1:
                break
            p = min(nz, key=lambda j: abs(A[i][j]))
            for j in nz:
                if j != p:
                    q = A[i][j] // A[i][p]
                    for r in range(m):
                        A[r][j] -= q * A[r][p]
                    for r in range(ncols):
                        U[r][j] -= q * U[r][p]
        nz = [j for j in range(col0, ncols) if A[i][j]]
        if nz:
            j = nz[0]
            for r in range(m):
                A[r][col0], A[r][j] = A[r][j], A[r][col0]
            for r in range(ncols):
                U[r][col0], U[r][j] = U[r][j], U[r][col0]
            col0 += 1
    return [[U[r][j] for r in range(ncols)] for j in range(col0, ncols)]


def determinantal_invariants(M) -> tuple[int, list]:
    """(rank, nontrivial invariant factors) of the row lattice of M via gcds of minors."""
    rows = [list(r) for r in M if any(r)]
    if not rows:
        return 0, []
    r = rank(rows)
    n = len(rows[0])
    d_prev = 1
    out = []
    for k in range(1, r + 1):
        g = 0
        for rs in itertools.combinations(range(len(rows)), k):
            for cs in itertools.combinations(range(n), k):
                g = gcd(g, det([[rows[i][j] for j in cs] for i in rs]))
                if g == 1:
                    break
            if g == 1:
                break
        out.append(g // d_prev)
        d_prev = g
    return r, [x for x in out if x != 1]


def quotient_invariants(S_basis, T_gens) -> tuple[int, list]:
    """Z-rank and torsion of span(S_basis) / span(T_gens) for T inside S."""
    k = len(S_basis)
    coords = []
    for t in T_gens:
        x = solve_rational(S_basis, t)
        assert x is not None and all(c.denominator == 1 for c in x), "T is not inside S"
        coords.append([int(c) for c in x])
    coords = row_echelon_basis(coords, k) if coords else []
    r, tors = determinantal_invariants(coords) if coords else (0, [])
    return k - r, sorted(tors)


# ---------------------------------------------------------------------------
# finite groups: enumerate


def span_mod(gens, m: int, dim: int) -> set:
    """All elements of the subgroup of (Z/m)^dim spanned by gens."""
    zero = (0,) * dim
    seen = {zero}
    frontier = [zero]
    gens = [tuple(x % m for x in g) for g in gens]
    while frontier:
        nxt = []
        for v in frontier:
            for g in gens:
                w = tuple((a + b) % m for a, b in zip(v, g))
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return seen


def kernel_mod_p(M, ncols: int, p: int) -> list:
    """Basis of {x in F_p^ncols : M x = 0} by Gauss-Jordan over F_p."""
    A = [[x % p for x in r] for r in M]
    m = len(A)
    piv = []
    r = 0
    for c in range(ncols):
        q = next((i for i in range(r, m) if A[i][c]), None)
        if q is None:
            continue
        A[r], A[q] = A[q], A[r]
        inv = pow(A[r][c], -1, p)
        A[r] = [a * inv % p for a in A[r]]
        for i in range(m):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [(a - f * b) % p for a, b in zip(A[i], A[r])]
        piv.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in piv]
    out = []
    for fcol in free:
        v = [0] * ncols
        v[fcol] = 1
        for i, c in enumerate(piv):
            v[c] = (-A[i][fcol]) % p
        out.append(v)
    return out


# ---------------------------------------------------------------------------
# spectral sequence pages of a filtered complex, straight from the definition


class BruteForcePages:
    """E_r^{f,n} = Z_r / (Z_(r-1)^(f+1) + d Z_(r-1)^(f-r+1)) over Z or F_p.

    The complex is given by cell degrees, filtrations and a dense differential
    (a function returning the integer matrix C^n -> C^(n+1)).
    """

    def __init__(self, degrees, filtrations, dcols, modulus: int = 0):
        self.deg = list(degrees)
        self.filt = list(filtrations)
        self.m = modulus
        self.cells = {}
        for g, n in enumerate(self.deg):
            self.cells.setdefault(n, []).append(g)
        self.dcols = dcols

    def dmat(self, n):
        src, tgt = self.cells.get(n, []), self.cells.get(n + 1, [])
        pos = {g: i for i, g in enumerate(tgt)}
        M = [[0] * len(src) for _ in tgt]
        for j, g in enumerate(src):
            for i, c in self.dcols[g].items():
                M[pos[i]][j] += c
        return M

    def _F(self, n, f):
        return [i for i, g in enumerate(self.cells.get(n, [])) if self.filt[g] >= f]

    def Z(self, n, r, f) -> list:
        """Generators of {x in F^f : dx in F^(f+r)} (plus m Z^N in the finite case)."""
        src = self._F(n, f)
        N = len(self.cells.get(n, []))
        tgt = self.cells.get(n + 1, [])
        low = [i for i, g in enumerate(tgt) if self.filt[g] < f + r]
        D = self.dmat(n)
        sub = [[D[i][j] for j in src] for i in low]
        if self.m:
            ker = kernel_mod_p(sub, len(src), self.m) if src else []
        else:
            ker = integer_kernel(sub, len(src)) if src else []
        out = []
        for v in ker:
            x = [0] * N
            for a, j in zip(v, src):
                x[j] = a
            out.append(x)
        return out

    def B(self, n, r, f) -> list:
        gens = list(self.Z(n, r - 1, f + 1))
        low = self.Z(n - 1, r - 1, f - r + 1)
        D = self.dmat(n - 1)
        N = len(self.cells.get(n, []))
        for v in low:
            gens.append([sum(D[i][j] * v[j] for j in range(len(v))) for i in range(N)])
        return gens

    def entry(self, r, f, n) -> tuple[int, list]:
        """(rank, torsion) over Z; (0, [p]*k) for F_p coefficients."""
        N = len(self.cells.get(n, []))
        Zg, Bg = self.Z(n, r, f), self.B(n, r, f)
        if self.m:
            zs = span_mod(Zg, self.m, N)
            bs = span_mod(Bg, self.m, N)
            assert bs <= zs
            k = 0
            idx = len(zs) // len(bs)
            while idx > 1:
                assert idx % self.m == 0
                idx //= self.m
                k += 1
            return 0, [self.m] * k
        Sb = row_echelon_basis(Zg, N)
        return quotient_invariants(Sb, [b for b in Bg if any(b)])


def brute_pages(C, modulus: int | None = None) -> BruteForcePages:
    """Oracle for a multss FilteredCochainComplex (uniform modulus only)."""
    ms = set(C.moduli)
    assert len(ms) <= 1
    m = ms.pop() if ms else 0
    return BruteForcePages(C.degrees, C.filtrations, C.d, m if modulus is None else modulus)


def cohomology_invariants(dmats, p: int, modulus: int = 0) -> tuple[int, list]:
    """H^p of a cochain complex given dense coboundary matrices dmats[p]: C^p -> C^(p+1)."""
    dp = dmats.get(p)
    dprev = dmats.get(p - 1)
    n = len(dp[0]) if dp and dp[0] else (len(dprev) if dprev else 0)
    if n == 0:
        return 0, []
    if modulus:
        ker = kernel_mod_p(dp, n, modulus) if dp else [[int(i == j) for j in range(n)] for i in range(n)]
        img = [[row[j] for row in dprev] for j in range(len(dprev[0]))] if dprev else []
        zs, bs = span_mod(ker, modulus, n), span_mod(img, modulus, n)
        k, idx = 0, len(zs) // len(bs)
        while idx > 1:
            idx //= modulus
            k += 1
        return 0, [modulus] * k
    ker = integer_kernel(dp, n) if dp else [[int(i == j) for j in range(n)] for i in range(n)]
    img = [[row[j] for row in dprev] for j in range(len(dprev[0]))] if dprev else []
    return quotient_invariants(row_echelon_basis(ker, n), [v for v in img if any(v)])


def betti(dmats, p: int) -> int:
    """Free rank of H^p from rational ranks: dim ker d_p - rank d_(p-1)."""
    dp, dprev = dmats.get(p), dmats.get(p - 1)
    n = len(dp[0]) if dp and dp[0] else (len(dprev) if dprev else 0)
    return n - (rank(dp) if dp else 0) - (rank(dprev) if dprev else 0)
