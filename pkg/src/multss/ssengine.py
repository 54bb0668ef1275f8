"""Spectral sequence of a finite filtered cochain complex.

Bigrading is (f, c): f is the filtration degree and c = f - n the
coefficient degree, n the total degree.  With

    Z_r^f = {x in F^f : dx in F^(f+r)}

the page is E_r^f = Z_r^f / (Z_(r-1)^(f+1) + d Z_(r-1)^(f-r+1)) and d_r goes
from (f, c) to (f + r, c + r - 1).  Cells may carry a modulus m; the
complex is then handled over Z with the relations m * cell added to every
filtration stage.
"""

from __future__ import annotations

import csv
import io
import itertools
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

from .exactlin import (FGAbelianGroup, GroupHom, IntegerMatrix, Lattice, NotWellDefined,
                       Subquotient, SubgroupViolation, homology_group, induced_map)
from .graded import SignFamily, PairingSign, SCHEMA_VERSION
from .simplicial import IntChainComplex, cup_sign


class InvalidFilteredComplex(ValueError):
    pass


class NotFiltrationAdditive(ValueError):
    pass


Sparse = dict  # {global cell index: coefficient}


class FilteredCochainComplex:
    """Cells with total degree, filtration degree and modulus; sparse differential.

    `differential[j]` is the sparse column d(e_j).  `product(i, j)`, when
    given, returns the sparse product e_i * e_j.
    """

    def __init__(self, degrees: Sequence[int], filtrations: Sequence[int],
                 differential: Sequence[Mapping[int, int]], moduli: Sequence[int] | None = None,
                 product: Callable[[int, int], Mapping[int, int]] | None = None,
                 labels: Sequence | None = None, name: str = "", coefficients: str = "Z",
                 check: bool = True, check_product: bool = True,
                 fast_product: Callable[[Mapping, Mapping], Mapping] | None = None):
        N = len(degrees)
        self.degrees = tuple(int(n) for n in degrees)
        self.filtrations = tuple(int(f) for f in filtrations)
        self.moduli = tuple(int(m) for m in (moduli if moduli is not None else [0] * N))
        self.labels = tuple(labels) if labels is not None else tuple(range(N))
        self.name = name
        self.coefficients = coefficients
        if len(self.filtrations) != N or len(self.moduli) != N or len(differential) != N:
            raise InvalidFilteredComplex("cell data of unequal lengths")
        if any(f < 0 for f in self.filtrations):
            raise InvalidFilteredComplex("filtration degrees must be >= 0")
        self.d = tuple({int(i): int(c) for i, c in col.items() if self._red(int(i), int(c))}
                       for col in differential)
        self._product = product
        self._fast = fast_product
        self.by_degree: dict[int, list[int]] = {}
        for g, n in enumerate(self.degrees):
            self.by_degree.setdefault(n, []).append(g)
        self.local = {g: k for n, gs in self.by_degree.items() for k, g in enumerate(gs)}
        self._cache: dict = {}
        if check:
            self._validate()
            if product is not None and check_product:
                self.check_product()

    # -- basic data ----------------------------------------------------
    def _red(self, i: int, c: int) -> int:
        m = self.moduli[i]
        return c % m if m else c

    @property
    def has_product(self) -> bool:
        return self._product is not None

    def product(self, i: int, j: int) -> dict:
        if self._product is None:
            raise ValueError("no chain-level product on this complex")
        out = {}
        for k, c in self._product(i, j).items():
            c = self._red(k, c)
            if c:
                out[k] = c
        return out

    @property
    def min_filtration(self) -> int:
        return min(self.filtrations, default=0)

    @property
    def max_filtration(self) -> int:
        return max(self.filtrations, default=0)

    @property
    def length(self) -> int:
        return self.max_filtration - self.min_filtration

    @property
    def total_degrees(self) -> list[int]:
        return sorted(self.by_degree)

    def dim(self, n: int) -> int:
        return len(self.by_degree.get(n, ()))

    def apply_d(self, x: Mapping[int, int]) -> dict:
        out: dict = {}
        for j, a in x.items():
            if a:
                for i, c in self.d[j].items():
                    out[i] = out.get(i, 0) + a * c
        return {i: v for i, v in ((i, self._red(i, v)) for i, v in out.items()) if v}

    def multiply(self, x: Mapping[int, int], y: Mapping[int, int]) -> dict:
        if self._fast is not None:
            z = self._fast(x, y)
            return {k: v for k, v in ((k, self._red(k, v)) for k, v in z.items()) if v}
        out: dict = {}
        for i, a in x.items():
            if not a:
                continue
            for j, b in y.items():
                if not b:
                    continue
                for k, c in self.product(i, j).items():
                    out[k] = out.get(k, 0) + a * b * c
        return {k: v for k, v in ((k, self._red(k, v)) for k, v in out.items()) if v}

    def _validate(self):
        for j, col in enumerate(self.d):
            for i, c in col.items():
                if self.degrees[i] != self.degrees[j] + 1:
                    raise InvalidFilteredComplex(f"d(cell {self.labels[j]}) leaves degree +1")
                if self.filtrations[i] < self.filtrations[j]:
                    raise InvalidFilteredComplex(f"d lowers filtration at cell {self.labels[j]}")
            m = self.moduli[j]
            if m:
                for i, c in col.items():
                    if self._red(i, m * c):
                        raise InvalidFilteredComplex(f"d does not respect the modulus of cell {self.labels[j]}")
            if self.apply_d(self.d[j]):
                raise InvalidFilteredComplex(f"d o d != 0 on cell {self.labels[j]}")

    def check_product(self, pairs: Iterable[tuple[int, int]] | None = None) -> None:
        """Filtration additivity and the derivation law d(xy) = dx y + (-1)^|x| x dy on cells."""
        N = len(self.degrees)
        if pairs is None:
            pairs = itertools.product(range(N), repeat=2)
        for i, j in pairs:
            pr = self.product(i, j)
            for k in pr:
                if self.degrees[k] != self.degrees[i] + self.degrees[j]:
                    raise InvalidFilteredComplex(f"product of cells {i},{j} has the wrong degree")
                if self.filtrations[k] < self.filtrations[i] + self.filtrations[j]:
                    raise NotFiltrationAdditive(f"cells {self.labels[i]}, {self.labels[j]}")
            lhs = self.apply_d(pr)
            s = -1 if self.degrees[i] % 2 else 1
            rhs = self.multiply(self.d[i], {j: 1})
            for k, v in self.multiply({i: 1}, self.d[j]).items():
                rhs[k] = rhs.get(k, 0) + s * v
            diff = {k: self._red(k, lhs.get(k, 0) - rhs.get(k, 0)) for k in set(lhs) | set(rhs)}
            if any(diff.values()):
                raise InvalidFilteredComplex(f"d is not a derivation on cells {self.labels[i]}, {self.labels[j]}")

    # -- vectors in one degree --------------------------------------------
    def to_local(self, n: int, x: Mapping[int, int]) -> tuple:
        v = [0] * self.dim(n)
        for g, a in x.items():
            v[self.local[g]] += a
        return tuple(v)

    def to_global(self, n: int, v: Sequence[int]) -> dict:
        gs = self.by_degree.get(n, [])
        return {gs[k]: a for k, a in enumerate(v) if a}

    def dmatrix(self, n: int) -> IntegerMatrix:
        key = ("d", n)
        if key not in self._cache:
            rows, cols = self.dim(n + 1), self.dim(n)
            ent = [0] * (rows * cols)
            for k, g in enumerate(self.by_degree.get(n, [])):
                for i, c in self.d[g].items():
                    ent[self.local[i] * cols + k] += c
            self._cache[key] = IntegerMatrix(rows, cols, tuple(ent))
        return self._cache[key]

    # -- filtration lattices ----------------------------------------------
    def _clamp(self, f: int) -> int:
        return max(self.min_filtration, min(f, self.max_filtration + 1))

    def relations(self, n: int) -> Lattice:
        key = ("R", n)
        if key not in self._cache:
            gs = self.by_degree.get(n, [])
            self._cache[key] = Lattice.coordinate(len(gs), (), [self.moduli[g] for g in gs])
        return self._cache[key]

    def F(self, n: int, f: int) -> Lattice:
        f = self._clamp(f)
        key = ("F", n, f)
        if key not in self._cache:
            gs = self.by_degree.get(n, [])
            idx = [k for k, g in enumerate(gs) if self.filtrations[g] >= f]
            self._cache[key] = Lattice.coordinate(len(gs), idx, [self.moduli[g] for g in gs])
        return self._cache[key]

    def Z(self, n: int, r: int, f: int) -> Lattice:
        """{x in F^f : dx in F^(f+r)} in degree n."""
        t = self._clamp(f + r)
        f = self._clamp(f)
        key = ("Z", n, f, t)
        if key not in self._cache:
            pre = Lattice.preimage(self.dmatrix(n), self.F(n + 1, t))
            self._cache[key] = pre.intersect(self.F(n, f)) + self.relations(n)
        return self._cache[key]

    def B(self, n: int, r: int, f: int) -> Lattice:
        key = ("B", n, r, f)
        if key not in self._cache:
            low = self.Z(n - 1, r - 1, f - r + 1)
            img = low.image(self.dmatrix(n - 1)) if self.dim(n - 1) else Lattice(self.dim(n))
            self._cache[key] = self.Z(n, r - 1, f + 1) + img
        return self._cache[key]

    def entry(self, r: int, f: int, n: int) -> Subquotient:
        key = ("E", r, f, n)
        if key not in self._cache:
            self._cache[key] = Subquotient(self.Z(n, r, f), self.B(n, r, f))
        return self._cache[key]

    def cycles(self, n: int) -> Lattice:
        return Lattice.preimage(self.dmatrix(n), self.relations(n + 1)) + self.relations(n)

    def boundaries(self, n: int) -> Lattice:
        img = Lattice(self.dim(n), self.dmatrix(n - 1).columns()) if self.dim(n - 1) else Lattice(self.dim(n))
        return img + self.relations(n)

    def cohomology(self, n: int) -> Subquotient:
        return Subquotient(self.cycles(n), self.boundaries(n))

    def __repr__(self):
        return f"FilteredCochainComplex({self.name or '?'}, cells={len(self.degrees)}, L={self.length})"

    # -- builders ----------------------------------------------------------
    @classmethod
    def from_chain_complex(cls, C: IntChainComplex, filtration: Callable, modulus: int = 0,
                           product: bool = True, name: str = "", check_product: bool = False
                           ) -> "FilteredCochainComplex":
        """Cochains of C with the Koszul coboundary, filtered by filtration(cell, degree)."""
        degrees, filts, labels, d = [], [], [], []
        gid = {}
        for n in C.degrees:
            for k, cell in enumerate(C.cells[n]):
                gid[(n, k)] = len(degrees)
                degrees.append(n)
                filts.append(int(filtration(cell, n)))
                labels.append(cell)
        for n in C.degrees:
            dT = C.coboundary_matrix(n)
            for k in range(C.rank(n)):
                col = {}
                for i in range(dT.rows):
                    c = dT[i, k]
                    if c:
                        col[gid[(n + 1, i)]] = c
                d.append(col)
        prod = fast = None
        if product and C.split is not None:
            def prod(i, j):
                p, q = degrees[i], degrees[j]
                t = C.joins(p, q).get((i - gid[(p, 0)], j - gid[(q, 0)]))
                if t is None:
                    return {}
                return {gid[(p + q, t)]: cup_sign(p, q)}

            def fast(x, y):
                return _split_product(x, y, degrees, gid, C.joins, lambda p, q: cup_sign(p, q))
        return cls(degrees, filts, d, [modulus] * len(degrees), prod, labels,
                   name=name or C.name, coefficients="Z" if not modulus else f"Z/{modulus}",
                   check_product=check_product, fast_product=fast)


def _split_product(x: Mapping, y: Mapping, degrees, gid, joins, sign) -> dict:
    """Front/back product of sparse cochains by walking the split table of each degree pair."""
    xs: dict = {}
    ys: dict = {}
    for g, a in x.items():
        if a:
            p = degrees[g]
            xs.setdefault(p, {})[g - gid[(p, 0)]] = a
    for g, b in y.items():
        if b:
            q = degrees[g]
            ys.setdefault(q, {})[g - gid[(q, 0)]] = b
    out: dict = {}
    for p, xp in xs.items():
        for q, yq in ys.items():
            J = joins(p, q)
            if not J:
                continue
            s = sign(p, q)
            base = gid.get((p + q, 0))
            for (fi, bi), t in J.items():
                a = xp.get(fi)
                if a:
                    b = yq.get(bi)
                    if b:
                        out[base + t] = out.get(base + t, 0) + s * a * b
    return out


# ---------------------------------------------------------------------------
# pages


@dataclass(frozen=True)
class PageEntry:
    f: int
    c: int
    n: int
    subquotient: Subquotient

    @property
    def group(self) -> FGAbelianGroup:
        return self.subquotient.group

    @property
    def bidegree(self) -> tuple:
        return (self.f, self.c)


class Page:
    """E_r of a filtered complex: entries by (f, c) and the differentials d_r."""

    def __init__(self, C: FilteredCochainComplex, r: int, parallel: bool = False):
        if r < 0:
            raise ValueError("page index must be >= 0")
        self.complex = C
        self.r = r
        keys = [(f, n) for n in C.total_degrees for f in range(C.min_filtration, C.max_filtration + 1)]

        def build(key):
            f, n = key
            return PageEntry(f, f - n, n, C.entry(r, f, n))

        if parallel:
            with ThreadPoolExecutor() as ex:
                ents = list(ex.map(build, keys))
        else:
            ents = [build(k) for k in keys]
        self.all_entries = {e.bidegree: e for e in ents}
        self._d: dict = {}

    # -- PageView protocol -------------------------------------------------
    def bidegrees(self) -> list:
        return sorted(b for b, e in self.all_entries.items() if not e.group.is_trivial())

    @property
    def entries(self) -> dict:
        return {b: self.all_entries[b] for b in self.bidegrees()}

    def _sq(self, b) -> Subquotient:
        f, c = b
        e = self.all_entries.get((f, c))
        if e is not None:
            return e.subquotient
        return self.complex.entry(self.r, f, f - c)

    def group(self, b) -> FGAbelianGroup:
        return self._sq(b).group

    def total_degree(self, b) -> int:
        return b[0] - b[1]

    @staticmethod
    def add(b1, b2) -> tuple:
        return (b1[0] + b2[0], b1[1] + b2[1])

    @property
    def d_shift(self) -> tuple:
        return (self.r, self.r - 1)

    def lift(self, b, coords) -> dict:
        """Chain-level representative (sparse, global indices)."""
        return self.complex.to_global(self.total_degree(b), self._sq(b).lift(coords))

    def coords(self, b, x: Mapping[int, int]) -> tuple:
        n = self.total_degree(b)
        try:
            return self._sq(b).coords(self.complex.to_local(n, x))
        except SubgroupViolation as exc:
            raise NotWellDefined(f"element is not a cycle representative at {b}") from exc

    def indeterminacy(self, b) -> list[dict]:
        n = self.total_degree(b)
        return [self.complex.to_global(n, g) for g in self._sq(b).T.gens]

    def cycle_generators(self, b) -> list[dict]:
        n = self.total_degree(b)
        return [self.complex.to_global(n, g) for g in self._sq(b).S.basis]

    def differential(self, b) -> tuple:
        """(target bidegree, d_r as a GroupHom)."""
        if b not in self._d:
            f, c = b
            n = f - c
            tb = (f + self.r, c + self.r - 1)
            src, tgt = self._sq(b), self._sq(tb)
            self._d[b] = (tb, induced_map(self.complex.dmatrix(n), src, tgt))
        return self._d[b]

    def is_degenerate(self) -> bool:
        """True when every d_r vanishes."""
        return all(self.differential(b)[1].is_zero() for b in self.bidegrees())

    def ranks(self) -> dict:
        return {b: e.group.rank for b, e in self.entries.items()}

    def table(self) -> dict:
        return {b: e.group for b, e in self.entries.items()}

    def __repr__(self):
        return f"Page(r={self.r}, {{{', '.join(f'{b}: {g}' for b, g in self.table().items())}}})"


def page(C: FilteredCochainComplex, r: int, parallel: bool = False) -> Page:
    return Page(C, r, parallel=parallel)


def e_infinity(C: FilteredCochainComplex) -> Page:
    """The stable page, with `limit_index` = first r from which every d_r vanishes."""
    L = C.length
    stable = Page(C, L + 1)
    limit = L + 1
    for r in range(L, 0, -1):
        if Page(C, r).is_degenerate():
            limit = r
        else:
            break
    stable.limit_index = limit
    return stable


def verify_next_page(C: FilteredCochainComplex, r: int) -> list:
    """Bidegrees where H(E_r, d_r) and E_(r+1) have different normal forms."""
    Pr, Pn = Page(C, r), Page(C, r + 1)
    bad = []
    for b in Pr.all_entries:
        src = (b[0] - r, b[1] - r + 1)
        incoming = Pr.differential(src)[1] if Pr.complex.dim(Pr.total_degree(src)) else None
        outgoing = Pr.differential(b)[1]
        H = homology_group(incoming, outgoing, Pr.group(b))
        if H.group != Pn.group(b):
            bad.append(b)
    return bad


# ---------------------------------------------------------------------------
# abutment


@dataclass
class AbutmentReport:
    ok: bool
    degrees: dict          # n -> {"H": group, "pieces": {f: group}, "isomorphisms": {f: GroupHom}}
    mismatches: list

    def __str__(self):
        if self.ok:
            return "abutment OK"
        return "MISMATCH in degrees " + ", ".join(str(m) for m in self.mismatches)


def abutment_check(C: FilteredCochainComplex, einf: Page | None = None) -> AbutmentReport:
    """Compare E_infinity with the associated graded of the filtration on H^n(Tot)."""
    P = einf if einf is not None else e_infinity(C)
    out = {}
    bad = []
    for n in C.total_degrees:
        Zn, Bn = C.cycles(n), C.boundaries(n)
        pieces, isos = {}, {}
        for f in range(C.min_filtration, C.max_filtration + 1):
            num = Zn.intersect(C.F(n, f)) + Bn
            den = Zn.intersect(C.F(n, f + 1)) + Bn
            G = Subquotient(num, den)
            E = P._sq((f, f - n))
            try:
                phi = induced_map(IntegerMatrix.identity(C.dim(n)), E, G)
                ok = phi.is_iso()
            except NotWellDefined:
                phi, ok = None, False
            pieces[f] = G.group
            isos[f] = phi
            if not ok or G.group != E.group:
                bad.append((n, f))
        out[n] = {"H": C.cohomology(n).group, "pieces": pieces, "isomorphisms": isos}
    return AbutmentReport(not bad, out, bad)


# ---------------------------------------------------------------------------
# pairings


ChainProduct = Callable[[Mapping[int, int], Mapping[int, int]], dict]


class PagePairing:
    """Bilinear maps X_r(a) x Y_r(b) -> XY_r(a + b) induced by a chain-level product.

    The three arguments are page views (objects with group/lift/coords/
    differential/add/total_degree methods); `chain_product` multiplies
    chain-level representatives.
    """

    def __init__(self, X, Y, XY, chain_product: ChainProduct, check: bool = True, name: str = ""):
        self.X, self.Y, self.XY = X, Y, XY
        self.chain_product = chain_product
        self.name = name
        self.r = XY.r
        self._table: dict = {}
        if check:
            self.check_well_defined()

    def target(self, bx, by):
        return self.XY.add(bx, by)

    def multiply(self, bx, u, by, v) -> tuple:
        """Coordinates of (class u at bx) * (class v at by)."""
        x = self.X.lift(bx, u)
        y = self.Y.lift(by, v)
        return self.XY.coords(self.target(bx, by), self.chain_product(x, y))

    def table(self, bx, by) -> list:
        """table[i][j] = coordinates of generator i times generator j."""
        key = (bx, by)
        if key not in self._table:
            gx, gy = self.X.group(bx), self.Y.group(by)
            ex = [tuple(int(k == i) for k in range(gx.ngens)) for i in range(gx.ngens)]
            ey = [tuple(int(k == j) for k in range(gy.ngens)) for j in range(gy.ngens)]
            self._table[key] = [[self.multiply(bx, a, by, b) for b in ey] for a in ex]
        return self._table[key]

    def pairs(self) -> list:
        return [(bx, by) for bx in self.X.bidegrees() for by in self.Y.bidegrees()]

    def check_well_defined(self, samples: int = 3, seed: int = 0) -> None:
        """Representative independence on generators.

        Every generator of the indeterminacy of one factor is multiplied with
        the representative of every page generator of the other factor and
        with `samples` pseudo-random cycles; each product must vanish.
        """
        rng = random.Random(seed)

        def reps(P, b):
            g = P.group(b)
            out = [P.lift(b, tuple(int(k == i) for k in range(g.ngens))) for i in range(g.ngens)]
            cyc = P.cycle_generators(b)
            for _ in range(samples if cyc else 0):
                z: dict = {}
                for v in cyc:
                    c = rng.randint(-2, 2)
                    if c:
                        for key, val in v.items():
                            z[key] = z.get(key, 0) + c * val
                out.append({k: v for k, v in z.items() if v})
            return out

        for bx, by in self.pairs():
            tb = self.target(bx, by)
            rx, ry = reps(self.X, bx), reps(self.Y, by)
            tx, ty = self.X.indeterminacy(bx), self.Y.indeterminacy(by)
            for a, b in itertools.chain(itertools.product(tx, ry), itertools.product(rx, ty)):
                if any(self.XY.coords(tb, self.chain_product(a, b))):
                    raise NotWellDefined(f"product depends on representatives at {bx} x {by}")

    def is_zero(self) -> bool:
        return all(not any(v) for bx, by in self.pairs() for row in self.table(bx, by) for v in row)

    def __repr__(self):
        return f"PagePairing({self.name or '?'}, r={self.r})"


def page_pairing(Cx: FilteredCochainComplex, Cy: FilteredCochainComplex, Cxy: FilteredCochainComplex,
                 chain_pairing: Callable[[int, int], Mapping[int, int]] | None, r: int,
                 check: bool = True) -> PagePairing:
    """Pairing E_r(Cx) x E_r(Cy) -> E_r(Cxy) from a cell-level product.

    With chain_pairing=None and Cx is Cy is Cxy, the complex's own product is used.
    """
    diagonal = chain_pairing is None
    if diagonal:
        if not (Cx is Cy is Cxy):
            raise ValueError("an external pairing needs an explicit chain_pairing")
        chain_pairing = Cxy.product
    if check:
        for i, j in itertools.product(range(len(Cx.degrees)), range(len(Cy.degrees))):
            for k, c in chain_pairing(i, j).items():
                if c and Cxy.filtrations[k] < Cx.filtrations[i] + Cy.filtrations[j]:
                    raise NotFiltrationAdditive(f"cells {Cx.labels[i]} x {Cy.labels[j]} -> {Cxy.labels[k]}")

    def prod(x, y):
        if diagonal:
            return Cxy.multiply(x, y)
        out: dict = {}
        for i, a in x.items():
            for j, b in y.items():
                for k, c in chain_pairing(i, j).items():
                    out[k] = out.get(k, 0) + a * b * c
        return {k: v for k, v in out.items() if Cxy._red(k, v)}

    return PagePairing(Page(Cx, r), Page(Cy, r), Page(Cxy, r), prod, check=check,
                       name=f"{Cx.name}*{Cy.name}")


@dataclass
class LeibnizReport:
    ok: bool
    checked: int
    failures: list

    def __str__(self):
        return f"Leibniz: {self.checked} generator pairs, {len(self.failures)} failures"


def _add(g: FGAbelianGroup, a, b, s=1) -> tuple:
    return g.reduce(tuple(x + s * y for x, y in zip(a, b)))


def leibniz_check(pp: PagePairing) -> LeibnizReport:
    """d(xy) = d(x) y + (-1)^|x| x d(y) on all generator pairs."""
    fails, count = [], 0
    for bx, by in pp.pairs():
        tb = pp.target(bx, by)
        dtb, dxy = pp.XY.differential(tb)
        dbx, dx = pp.X.differential(bx)
        dby, dy = pp.Y.differential(by)
        G = pp.XY.group(dtb)
        sign = -1 if pp.X.total_degree(bx) % 2 else 1
        for i in range(pp.X.group(bx).ngens):
            u = tuple(int(k == i) for k in range(pp.X.group(bx).ngens))
            du = dx(u)
            for j in range(pp.Y.group(by).ngens):
                v = tuple(int(k == j) for k in range(pp.Y.group(by).ngens))
                dv = dy(v)
                lhs = dxy(pp.multiply(bx, u, by, v))
                r1 = pp.multiply(dbx, du, by, v) if any(du) else (0,) * G.ngens
                r2 = pp.multiply(bx, u, dby, dv) if any(dv) else (0,) * G.ngens
                rhs = _add(G, r1, r2, sign)
                count += 1
                if G.reduce(lhs) != rhs:
                    fails.append((bx, i, by, j, lhs, rhs))
    return LeibnizReport(not fails, count, fails)


# ---------------------------------------------------------------------------
# global isomorphism of pairings


@dataclass
class IsoVerdict:
    yes: bool
    maps: dict
    counterexample: tuple | None = None
    reason: str = ""

    def __bool__(self):
        return self.yes


def _fam(family, b) -> int:
    """Evaluate a two-variable sign family on a bidegree; single keys read as (d, 0)."""
    return family(*b) if len(b) == 2 else family(b[0], 0)


def _tw(twist, bx, by) -> int:
    if len(bx) == 2:
        return twist(*bx, *by)
    return twist(bx[0], 0, by[0], 0)


def _identity_maps(A: PagePairing, B: PagePairing, bidegrees) -> dict:
    out = {}
    for b in bidegrees:
        ga, gb = A.XY.group(b), B.XY.group(b)
        if ga != gb:
            raise ValueError(f"no identity witness at {b}: {ga} vs {gb}")
        out[b] = GroupHom.identity(ga)
    return out


def compare_global_iso(pairA: PagePairing, pairB: PagePairing, family=SignFamily.identity(),
                       maps: Mapping | Callable | None = None, twist: PairingSign | None = None) -> IsoVerdict:
    """Decide whether eps(b) * maps[b] intertwines the two pairings (up to `twist`).

    The condition checked on all generator pairs u at a, v at b is
        eps(a+b) phi(u *_A v) = twist(a, b) * eps(a) phi(u) *_B eps(b) phi(v).
    Here the same maps are used for both factors and the target (the
    diagonal situation); `maps` may be a dict or a callable on bidegrees.
    """
    bids = set()
    for bx, by in pairA.pairs():
        bids.update([bx, by, pairA.target(bx, by)])
    if maps is None:
        maps = _identity_maps(pairA, pairB, bids)
    get = maps if callable(maps) else maps.__getitem__
    witnesses = {}
    for b in sorted(bids):
        phi = get(b)
        if not phi.is_iso():
            return IsoVerdict(False, witnesses, (b,), "witness is not an isomorphism")
        witnesses[b] = phi
    for bx, by in pairA.pairs():
        tb = pairA.target(bx, by)
        G = pairB.XY.group(tb)
        tab = pairA.table(bx, by)
        s = _fam(family, tb) * _fam(family, bx) * _fam(family, by)
        if twist is not None:
            s *= _tw(twist, bx, by)
        for i, row in enumerate(tab):
            u = witnesses[bx](tuple(int(k == i) for k in range(len(tab))))
            for j, w in enumerate(row):
                v = witnesses[by](tuple(int(k == j) for k in range(len(row))))
                lhs = witnesses[tb](w)
                rhs = G.reduce(tuple(s * x for x in pairB.multiply(bx, u, by, v)))
                if lhs != rhs:
                    return IsoVerdict(False, witnesses, (bx, by, i, j, lhs, rhs), "pairings differ")
    return IsoVerdict(True, witnesses)


def discrepancy_signs(pairA: PagePairing, pairB: PagePairing, maps: Mapping | Callable | None = None,
                      family=SignFamily.identity()) -> dict:
    """For each bidegree pair, the set of signs s with phi(u *_A v) = s * (phi u *_B phi v).

    Generator pairs whose products cannot tell +1 from -1 (zero or 2-torsion)
    are skipped; a pair matching neither sign is recorded as 0.
    """
    bids = set()
    for bx, by in pairA.pairs():
        bids.update([bx, by, pairA.target(bx, by)])
    if maps is None:
        maps = _identity_maps(pairA, pairB, bids)
    get = maps if callable(maps) else maps.__getitem__
    out = {}
    for bx, by in pairA.pairs():
        tb = pairA.target(bx, by)
        G = pairB.XY.group(tb)
        seen = set()
        e = _fam(family, tb) * _fam(family, bx) * _fam(family, by)
        tab = pairA.table(bx, by)
        for i, row in enumerate(tab):
            u = get(bx)(tuple(int(k == i) for k in range(len(tab))))
            for j, w in enumerate(row):
                v = get(by)(tuple(int(k == j) for k in range(len(row))))
                lhs = get(tb)(w)
                rhs = G.reduce(tuple(e * x for x in pairB.multiply(bx, u, by, v)))
                neg = G.reduce(tuple(-x for x in rhs))
                if rhs == neg:
                    if lhs != rhs:
                        seen.add(0)
                    continue
                seen.add(1 if lhs == rhs else (-1 if lhs == neg else 0))
        if seen:
            out[(bx, by)] = seen
    return out


# ---------------------------------------------------------------------------
# maps between pages


def induced_page_map(src: FilteredCochainComplex, dst: FilteredCochainComplex, r: int,
                     chain_map: Callable[[int, tuple], tuple] | None = None) -> dict:
    """GroupHoms E_r(src) -> E_r(dst) per bidegree induced by a filtered chain map.

    chain_map(n, v) maps a degree-n local vector; default is the identity
    (same cells in the same order).
    """
    Ps, Pd = Page(src, r), Page(dst, r)
    out = {}
    for b in set(Ps.all_entries) | set(Pd.all_entries):
        n = b[0] - b[1]
        f = (lambda v, _n=n: tuple(chain_map(_n, v))) if chain_map else IntegerMatrix.identity(src.dim(n))
        out[b] = induced_map(f, Ps._sq(b), Pd._sq(b))
    return out


# ---------------------------------------------------------------------------
# export


def page_record(P: Page, with_zero: bool = False) -> dict:
    ents = []
    bids = sorted(P.all_entries) if with_zero else P.bidegrees()
    for b in bids:
        g = P.group(b)
        tb, dr = P.differential(b)
        ents.append({
            "bidegree": [b[0], b[1]],
            "total_degree": b[0] - b[1],
            "rank": g.rank,
            "torsion": list(g.torsion),
            "d_target": [tb[0], tb[1]] if not dr.is_zero() else None,
            "d_matrix": [[str(x) for x in row] for row in dr.matrix.to_rows()] if not dr.is_zero() else None,
        })
    return {"r": P.r, "entries": ents}


def pages_document(C: FilteredCochainComplex, rs: Iterable[int], meta: Mapping | None = None) -> dict:
    doc = {"schema_version": SCHEMA_VERSION, "kind": "pages", "indexing": "engine",
           "name": C.name, "coefficients": C.coefficients}
    if meta:
        doc.update(meta)
    doc["pages"] = [page_record(Page(C, r)) for r in rs]
    return doc


def pages_csv(doc: Mapping) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["r", "x", "y", "rank", "torsion", "d_target", "d_matrix"])
    for pg in doc["pages"]:
        for e in pg["entries"]:
            dm = e.get("d_matrix")
            w.writerow([pg["r"], e["bidegree"][0], e["bidegree"][1], e["rank"],
                        " ".join(str(t) for t in e["torsion"]),
                        "" if e.get("d_target") is None else f"{e['d_target'][0]} {e['d_target'][1]}",
                        "" if dm is None else ";".join(",".join(row) for row in dm)])
    return buf.getvalue()
