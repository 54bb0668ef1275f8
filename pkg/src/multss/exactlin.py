"""Exact integer linear algebra.

Smith normal form with unimodular transforms, lattices in Z^n, finitely
generated abelian groups in normal form, subquotients span(S)/span(T) with
coordinate maps, and homomorphisms induced on subquotients.

All arithmetic uses Python integers, so nothing overflows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Sequence, Union

Vector = tuple  # tuple[int, ...]


class SubgroupViolation(ValueError):
    """A generator of the denominator is not in the numerator."""


class NotWellDefined(ValueError):
    """A map does not carry numerator into numerator or denominator into denominator."""


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class IntegerMatrix:
    rows: int
    cols: int
    entries: tuple = ()

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> "IntegerMatrix":
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        flat = []
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
            flat.extend(int(x) for x in r)
        return cls(len(rows), ncols, tuple(flat))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int) -> "IntegerMatrix":
        columns = [tuple(c) for c in columns]
        for c in columns:
            if len(c) != nrows:
                raise ValueError("column length mismatch")
        return cls(nrows, len(columns),
                   tuple(int(columns[j][i]) for i in range(nrows) for j in range(len(columns))))

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntegerMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Vector:
        return self.entries[j::self.cols] if self.cols else ()

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.cols)]

    @property
    def T(self) -> "IntegerMatrix":
        return IntegerMatrix.from_columns([self.row(i) for i in range(self.rows)], self.cols)

    def __matmul__(self, other):
        if isinstance(other, IntegerMatrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch")
            ocols = other.columns()
            out = []
            for i in range(self.rows):
                r = self.row(i)
                nz = [(k, a) for k, a in enumerate(r) if a]
                for c in ocols:
                    out.append(sum(a * c[k] for k, a in nz))
            return IntegerMatrix(self.rows, other.cols, tuple(out))
        return self.apply(other)

    def apply(self, v: Sequence[int]) -> Vector:
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        nz = [(k, x) for k, x in enumerate(v) if x]
        c = self.cols
        e = self.entries
        return tuple(sum(e[i * c + k] * x for k, x in nz) for i in range(self.rows))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __repr__(self):
        return f"IntegerMatrix({self.to_rows()})"


def _as_rows(A) -> tuple[list[list[int]], int, int]:
    if isinstance(A, IntegerMatrix):
        return A.to_rows(), A.rows, A.cols
    rows = [list(map(int, r)) for r in A]
    return rows, len(rows), (len(rows[0]) if rows else 0)


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithDecomposition:
    """U @ A @ V == D with U, V unimodular and D diagonal with d1 | d2 | ..."""

    U: IntegerMatrix
    D: IntegerMatrix
    V: IntegerMatrix
    U_inv: IntegerMatrix
    shape: tuple

    @cached_property
    def diagonal(self) -> tuple:
        return tuple(self.D[i, i] for i in range(min(self.D.rows, self.D.cols)))

    @cached_property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)

    @cached_property
    def invariant_factors(self) -> tuple:
        return tuple(d for d in self.diagonal if d)


def smith(A) -> SmithDecomposition:
    """Smith normal form of an integer matrix.

    Pivot choice: smallest nonzero absolute value in the active block, first in
    row-major order on ties, so the result is a deterministic function of A.
    """
    a, m, n = _as_rows(A)
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    Ui = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_add(dst, src, c):
        # row_dst += c * row_src
        ra, rs = a[dst], a[src]
        for j in range(n):
            if rs[j]:
                ra[j] += c * rs[j]
        ua, us = U[dst], U[src]
        for j in range(m):
            if us[j]:
                ua[j] += c * us[j]
        for r in Ui:
            if r[dst]:
                r[src] -= c * r[dst]

    def row_swap(i, k):
        a[i], a[k] = a[k], a[i]
        U[i], U[k] = U[k], U[i]
        for r in Ui:
            r[i], r[k] = r[k], r[i]

    def row_neg(i):
        a[i] = [-x for x in a[i]]
        U[i] = [-x for x in U[i]]
        for r in Ui:
            r[i] = -r[i]

    def col_add(dst, src, c):
        for r in a:
            if r[src]:
                r[dst] += c * r[src]
        for r in V:
            if r[src]:
                r[dst] += c * r[src]

    def col_swap(j, k):
        for r in a:
            r[j], r[k] = r[k], r[j]
        for r in V:
            r[j], r[k] = r[k], r[j]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            ri = a[i]
            for j in range(t, n):
                x = ri[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        if pi != t:
            row_swap(t, pi)
        if pj != t:
            col_swap(t, pj)
        while True:
            p = a[t][t]
            clean = True
            for i in range(t + 1, m):
                if a[i][t]:
                    row_add(i, t, -(a[i][t] // p))
                    if a[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if a[t][j]:
                    col_add(j, t, -(a[t][j] // p))
                    if a[t][j]:
                        clean = False
            if not clean:
                # move the smallest leftover in row t / column t to the pivot
                cand = [(abs(a[i][t]), 0, i) for i in range(t + 1, m) if a[i][t]]
                cand += [(abs(a[t][j]), 1, j) for j in range(t + 1, n) if a[t][j]]
                _, kind, idx = min(cand)
                if kind == 0:
                    row_swap(t, idx)
                else:
                    col_swap(t, idx)
                continue
            bad = None
            for i in range(t + 1, m):
                ri = a[i]
                for j in range(t + 1, n):
                    if ri[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_add(t, bad, 1)
        if a[t][t] < 0:
            row_neg(t)
        t += 1

    return SmithDecomposition(
        U=IntegerMatrix.from_rows(U, m),
        D=IntegerMatrix.from_rows(a, n),
        V=IntegerMatrix.from_rows(V, n),
        U_inv=IntegerMatrix.from_rows(Ui, m),
        shape=(m, n),
    )


# ---------------------------------------------------------------------------
# finitely generated abelian groups


@dataclass(frozen=True)
class FGAbelianGroup:
    """Z^rank + Z/t1 + Z/t2 + ... with t1 | t2 | ... and every ti >= 2.

    Coordinates of an element list the torsion components first, reduced into
    [0, ti), followed by the free components.
    """

    rank: int = 0
    torsion: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(t) for t in self.torsion))
        if self.rank < 0:
            raise ValueError("negative rank")
        for t in self.torsion:
            if t < 2:
                raise ValueError(f"torsion coefficient {t} < 2")
        for s, t in zip(self.torsion, self.torsion[1:]):
            if t % s:
                raise ValueError(f"torsion {self.torsion} is not a divisibility chain")

    @classmethod
    def from_invariants(cls, rank: int, factors: Iterable[int]) -> "FGAbelianGroup":
        """Normalize an arbitrary list of cyclic orders (0 meaning Z) to the chain form."""
        rank = int(rank)
        primes: dict[int, list[int]] = {}
        for f in factors:
            f = abs(int(f))
            if f == 0:
                rank += 1
                continue
            for p, e in _factorize(f).items():
                primes.setdefault(p, []).append(p ** e)
        chains = []
        width = max((len(v) for v in primes.values()), default=0)
        for p in primes:
            primes[p].sort()
        for k in range(width):
            t = 1
            for p, powers in primes.items():
                idx = len(powers) - width + k
                if idx >= 0:
                    t *= powers[idx]
            if t > 1:
                chains.append(t)
        return cls(rank, tuple(chains))

    @property
    def ngens(self) -> int:
        return len(self.torsion) + self.rank

    @property
    def moduli(self) -> tuple:
        return self.torsion + (0,) * self.rank

    @property
    def order(self):
        """Cardinality, or None when infinite."""
        if self.rank:
            return None
        out = 1
        for t in self.torsion:
            out *= t
        return out

    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def reduce(self, v: Sequence[int]) -> Vector:
        return tuple(x % m if m else x for x, m in zip(v, self.moduli))

    def relations(self) -> "Lattice":
        n = self.ngens
        gens = []
        for i, t in enumerate(self.torsion):
            g = [0] * n
            g[i] = t
            gens.append(g)
        return Lattice(n, gens)

    def __str__(self):
        parts = [f"Z/{t}" for t in self.torsion]
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        return " + ".join(parts) if parts else "0"


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def cokernel(A) -> FGAbelianGroup:
    """Isomorphism class of Z^rows / image(A)."""
    a, m, n = _as_rows(A)
    snf = smith(A)
    free = m - snf.rank
    return FGAbelianGroup(free, tuple(d for d in snf.invariant_factors if d > 1))


# ---------------------------------------------------------------------------
# lattices


class Lattice:
    """The subgroup of Z^dim spanned by a list of generators."""

    def __init__(self, dim: int, gens: Iterable[Sequence[int]] = ()):
        self.dim = int(dim)
        gs = []
        for g in gens:
            g = tuple(int(x) for x in g)
            if len(g) != self.dim:
                raise ValueError(f"generator of length {len(g)} in Z^{self.dim}")
            if any(g):
                gs.append(g)
        self.gens = tuple(gs)

    @classmethod
    def full(cls, dim: int) -> "Lattice":
        return cls(dim, [tuple(int(i == j) for j in range(dim)) for i in range(dim)])

    @classmethod
    def coordinate(cls, dim: int, indices: Iterable[int], moduli: Sequence[int] = ()) -> "Lattice":
        """Span of the basis vectors e_i, i in indices, plus m_i e_i for every modulus m_i > 0."""
        gens = []
        seen = set()
        for i in indices:
            seen.add(i)
            gens.append(tuple(int(k == i) for k in range(dim)))
        for i, m in enumerate(moduli):
            if m and i not in seen:
                gens.append(tuple(m if k == i else 0 for k in range(dim)))
        return cls(dim, gens)

    @cached_property
    def _echelon(self) -> tuple:
        rows, pivots, _ = _echelon([list(g) for g in self.gens], self.dim)
        return tuple(tuple(r) for r in rows), tuple(pivots)

    @property
    def rank(self) -> int:
        return len(self._echelon[1])

    @property
    def basis(self) -> tuple:
        """Hermite-style echelon basis (positive pivots in increasing columns)."""
        return self._echelon[0]

    def coords(self, x: Sequence[int]):
        """Coordinates of x in `basis`, or None if x is not in the lattice."""
        if len(x) != self.dim:
            raise ValueError("vector length mismatch")
        rows, pivots = self._echelon
        y = list(x)
        out = []
        for b, c in zip(rows, pivots):
            q, rem = divmod(y[c], b[c])
            if rem:
                return None
            out.append(q)
            if q:
                for j in range(c, self.dim):
                    if b[j]:
                        y[j] -= q * b[j]
        if any(y):
            return None
        return tuple(out)

    def __contains__(self, x) -> bool:
        return self.coords(x) is not None

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(g in self for g in other.gens)

    def __eq__(self, other):
        if not isinstance(other, Lattice):
            return NotImplemented
        return self.dim == other.dim and self.contains_lattice(other) and other.contains_lattice(self)

    __hash__ = None

    def __add__(self, other: "Lattice") -> "Lattice":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        return Lattice(self.dim, self.basis + other.basis)

    def intersect(self, other: "Lattice") -> "Lattice":
        b1, b2 = self.basis, other.basis
        if not b1 or not b2:
            return Lattice(self.dim)
        cols = list(b1) + [tuple(-x for x in v) for v in b2]
        ker = kernel(IntegerMatrix.from_columns(cols, self.dim))
        r1 = len(b1)
        out = []
        for c in ker:
            v = [0] * self.dim
            for k in range(r1):
                if c[k]:
                    ck, bk = c[k], b1[k]
                    for i, x in enumerate(bk):
                        if x:
                            v[i] += ck * x
            out.append(tuple(v))
        return Lattice(self.dim, out)

    def image(self, f: Union[IntegerMatrix, Callable], target_dim: int | None = None) -> "Lattice":
        if isinstance(f, IntegerMatrix):
            return Lattice(f.rows, [f.apply(b) for b in self.basis])
        if target_dim is None:
            raise ValueError("target_dim needed for a callable map")
        return Lattice(target_dim, [f(b) for b in self.basis])

    @classmethod
    def preimage(cls, A: IntegerMatrix, L: "Lattice") -> "Lattice":
        """{x in Z^A.cols : A x in L}."""
        if A.rows != L.dim:
            raise ValueError("dimension mismatch")
        n = A.cols
        cols = A.columns() + [tuple(-x for x in b) for b in L.basis]
        ker = kernel(IntegerMatrix.from_columns(cols, A.rows))
        return cls(n, [c[:n] for c in ker])

    def __repr__(self):
        return f"Lattice(dim={self.dim}, rank={self.rank})"


def kernel(A) -> list[Vector]:
    """Basis of the integer kernel {x : A x = 0}.

    Row-reduces [A^T | I] on the A^T block; rows whose A^T part vanishes
    carry a basis of the kernel in their identity part.
    """
    a, m, n = _as_rows(A)
    aug = [[a[i][j] for i in range(m)] + [int(k == j) for k in range(n)] for j in range(n)]
    _, _, rest = _echelon(aug, m)
    return [tuple(r[m:]) for r in rest]


def _echelon(rows: list, upto: int) -> tuple:
    """Integer row echelon form on the first `upto` columns (Euclidean steps).

    Returns (pivot rows, pivot columns, remaining rows); the remaining rows
    vanish on the first `upto` columns.  Rows are modified in place.
    """
    live = [r for r in rows if any(r)]
    out, pivots = [], []
    for c in range(upto):
        hit = [r for r in live if r[c]]
        if not hit:
            continue
        while len(hit) > 1:
            hit.sort(key=lambda r: abs(r[c]))
            p = hit[0]
            pc = p[c]
            nxt = [p]
            for r in hit[1:]:
                q = r[c] // pc
                for j, v in enumerate(p):
                    if v:
                        r[j] -= q * v
                if r[c]:
                    nxt.append(r)
            hit = nxt
        p = hit[0]
        if p[c] < 0:
            for j in range(len(p)):
                p[j] = -p[j]
        out.append(p)
        pivots.append(c)
        live = [r for r in live if r is not p]
    return out, pivots, [r for r in live if any(r)]


# ---------------------------------------------------------------------------
# subquotients


class Subquotient:
    """The group span(S)/span(T) for lattices T <= S <= Z^ambient.

    Elements of S are sent to normal-form coordinates with `coords`; the
    ambient vectors in `generators` represent the normal-form generators.
    """

    def __init__(self, S: Lattice, T: Lattice, *, check: bool = True):
        if S.dim != T.dim:
            raise ValueError("S and T live in different ambients")
        self.S = S
        self.T = T
        self.ambient = S.dim
        basis = S.basis
        X = []
        for g in T.gens:
            c = S.coords(g)
            if c is None:
                if check:
                    raise SubgroupViolation(f"{g} is not in the numerator lattice")
                raise SubgroupViolation("denominator escapes numerator")
            X.append(c)
        r = len(basis)
        snf = smith(IntegerMatrix.from_columns(X, r))
        d = snf.diagonal
        rk = snf.rank
        kept = [i for i in range(rk) if d[i] > 1] + list(range(rk, r))
        self._U = snf.U
        self._kept = kept
        self.group = FGAbelianGroup(r - rk, tuple(d[i] for i in range(rk) if d[i] > 1))
        Ui = snf.U_inv
        gens = []
        for i in kept:
            col = Ui.column(i)
            gens.append(tuple(sum(col[k] * basis[k][a] for k in range(r)) for a in range(self.ambient)))
        self.generators = tuple(gens)

    def coords(self, x: Sequence[int]) -> Vector:
        y = self.S.coords(x)
        if y is None:
            raise SubgroupViolation(f"{tuple(x)} is not in the numerator lattice")
        z = self._U.apply(y) if y else ()
        out = tuple(z[i] for i in self._kept)
        return self.group.reduce(out)

    def is_zero(self, x: Sequence[int]) -> bool:
        """True when x lies in T (x must lie in S)."""
        return not any(self.coords(x))

    def lift(self, v: Sequence[int]) -> Vector:
        """Ambient representative of the element with coordinates v."""
        out = [0] * self.ambient
        for c, g in zip(v, self.generators):
            if c:
                for a in range(self.ambient):
                    out[a] += c * g[a]
        return tuple(out)

    def __repr__(self):
        return f"Subquotient({self.group})"


def subquotient(ambient: int, gens_S, gens_T) -> Subquotient:
    """span(gens_S)/span(gens_T) inside Z^ambient; generators are matrix columns."""

    def cols(g):
        if isinstance(g, IntegerMatrix):
            if g.rows != ambient and g.cols:
                raise ValueError("generator matrix has the wrong number of rows")
            return g.columns()
        return list(g)

    return Subquotient(Lattice(ambient, cols(gens_S)), Lattice(ambient, cols(gens_T)))


# ---------------------------------------------------------------------------
# homomorphisms


@dataclass(frozen=True)
class GroupHom:
    """A homomorphism between normal-form groups given on coordinates."""

    source: FGAbelianGroup
    target: FGAbelianGroup
    matrix: IntegerMatrix = field(default=None)

    def __post_init__(self):
        m = self.matrix
        if m is None:
            m = IntegerMatrix.zeros(self.target.ngens, self.source.ngens)
        if (m.rows, m.cols) != (self.target.ngens, self.source.ngens):
            raise ValueError("matrix shape does not match groups")
        mods = self.target.moduli
        rows = [[x % mods[i] if mods[i] else x for x in m.row(i)] for i in range(m.rows)]
        m = IntegerMatrix.from_rows(rows, m.cols)
        object.__setattr__(self, "matrix", m)
        for j, t in enumerate(self.source.torsion):
            img = tuple(t * x for x in m.column(j))
            if any(self.target.reduce(img)):
                raise NotWellDefined(f"torsion generator {j} of order {t} maps to an element of other order")

    def __call__(self, v: Sequence[int]) -> Vector:
        return self.target.reduce(self.matrix.apply(v))

    def __matmul__(self, other: "GroupHom") -> "GroupHom":
        if other.target != self.source:
            raise ValueError("composition of incompatible maps")
        return GroupHom(other.source, self.target, self.matrix @ other.matrix)

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def __eq__(self, other):
        if not isinstance(other, GroupHom):
            return NotImplemented
        return (self.source, self.target, self.matrix) == (other.source, other.target, other.matrix)

    def __hash__(self):
        return hash((self.source, self.target, self.matrix))

    def kernel(self) -> Subquotient:
        """Kernel as a subquotient of source coordinates (denominator = source relations)."""
        rel_t = self.target.relations()
        K = Lattice.preimage(self.matrix, rel_t)
        return Subquotient(K, self.source.relations())

    def image(self) -> Subquotient:
        rel_t = self.target.relations()
        img = Lattice(self.target.ngens, self.matrix.columns()) + rel_t
        return Subquotient(img, rel_t)

    def cokernel(self) -> Subquotient:
        rel_t = self.target.relations()
        img = Lattice(self.target.ngens, self.matrix.columns()) + rel_t
        return Subquotient(Lattice.full(self.target.ngens), img)

    def is_iso(self) -> bool:
        return self.kernel().group.is_trivial() and self.cokernel().group.is_trivial()

    @classmethod
    def identity(cls, g: FGAbelianGroup) -> "GroupHom":
        return cls(g, g, IntegerMatrix.identity(g.ngens))


def _apply_map(f, x, target_dim):
    if isinstance(f, IntegerMatrix):
        return f.apply(x)
    y = tuple(f(x))
    if len(y) != target_dim:
        raise ValueError("map produced a vector of the wrong length")
    return y


def induced_map(f, source: Subquotient, target: Subquotient, *, check: bool = True) -> GroupHom:
    """Map on subquotients induced by an ambient map f (matrix or callable).

    With check=True, verifies f(S) <= S' and f(T) <= T' on lattice generators
    and raises NotWellDefined otherwise.
    """
    tdim = target.ambient
    if check:
        for b in source.S.basis:
            if _apply_map(f, b, tdim) not in target.S:
                raise NotWellDefined("f does not map the source numerator into the target numerator")
        for b in source.T.gens:
            y = _apply_map(f, b, tdim)
            if y not in target.S or not target.is_zero(y):
                raise NotWellDefined("f does not map the source denominator into the target denominator")
    cols = [target.coords(_apply_map(f, g, tdim)) for g in source.generators]
    return GroupHom(source.group, target.group,
                    IntegerMatrix.from_columns(cols, target.group.ngens))


def homology_group(incoming: GroupHom | None, outgoing: GroupHom | None, group: FGAbelianGroup) -> Subquotient:
    """ker(outgoing)/im(incoming) for maps into and out of `group` (coordinates)."""
    n = group.ngens
    rel = group.relations()
    if outgoing is None:
        K = Lattice.full(n)
    else:
        K = Lattice.preimage(outgoing.matrix, outgoing.target.relations())
    if incoming is None:
        B = rel
    else:
        B = Lattice(n, incoming.matrix.columns()) + rel
    return Subquotient(K, B)


def solve(A: IntegerMatrix, y: Sequence[int]):
    """An integer solution x of A x = y, or None if there is none."""
    s = smith(A)
    z = s.U.apply(y)
    d = s.diagonal
    r = s.rank
    if any(z[r:]):
        return None
    w = []
    for k in range(A.cols):
        if k < r:
            if z[k] % d[k]:
                return None
            w.append(z[k] // d[k])
        else:
            w.append(0)
    return s.V.apply(w)
