"""Builders for the named spectral sequences on simplicial input.

* AHSS: skeletal filtration of bigraded cochains with a graded coefficient ring.
* Serre: preimage-of-skeleta filtration along a simplicial map.
* product vs skeletal filtration of a product complex.
* group cohomology page from the normalized bar complex.
* descent: Cech double complex of a closed cover by subcomplexes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .exactlin import FGAbelianGroup, GroupHom, IntegerMatrix, Lattice, NotWellDefined, Subquotient, \
    SubgroupViolation, induced_map
from .graded import (BigradedCochain, GradedRing, SignFamily, graded_cup, graded_delta_sign,
                     koszul_sign, ungraded_cup)
from .simplicial import (IntChainComplex, OrderedComplex, SimplicialMap, cohomology, koszul_delta_sign,
                         nerve, product)
from .ssengine import (FilteredCochainComplex, Page, PagePairing, compare_global_iso,
                       induced_page_map, page_pairing)


class NontrivialActionUnsupported(ValueError):
    pass


class NotACover(ValueError):
    pass


def _chain(K) -> IntChainComplex:
    return K.chain_complex if isinstance(K, OrderedComplex) else K


# ---------------------------------------------------------------------------
# Atiyah-Hirzebruch


def tower_d1_sign(f: int, c: int) -> int:
    """d_1 sign (-1)^(p-1) with p = c - f the homotopy degree of the tower."""
    return -1 if (c - f - 1) % 2 else 1


def tower_product_sign(fa: int, ca: int, fb: int, cb: int) -> int:
    """Sign from S^p S^q S^s S^t -> S^p S^s S^q S^t for classes at (f, c) = (q, p + q), (t, s + t)."""
    p, q = ca - fa, fa
    s, t = cb - fb, fb
    return koszul_sign([p, q, s, t], [0, 2, 1, 3])


class AHSSComplex(FilteredCochainComplex):
    """Skeletal filtration on cochains with coefficients in a graded ring.

    A cell is a pair (simplex, q) with total degree dim - q and filtration dim;
    the block (p, q) holds the p-cells with coefficients A_q.
    """

    def __init__(self, C: IntChainComplex, A: GradedRing, window: Sequence[int] | None = None,
                 name: str = "", check_product: bool | None = None, max_filtration: int | None = None):
        qs = A.support(window)
        self.chain = C
        self.ring = A
        self.qs = tuple(qs)
        ps = [p for p in C.degrees if max_filtration is None or p <= max_filtration]
        degrees, filts, moduli, labels = [], [], [], []
        self.blocks: dict = {}
        block_of = []
        for p in ps:
            for q in qs:
                self.blocks[(p, q)] = len(degrees)
                for k, cell in enumerate(C.cells[p]):
                    degrees.append(p - q)
                    filts.append(p)
                    moduli.append(A.modulus(q))
                    labels.append((cell, q))
                    block_of.append((p, q, k))
        self.block_of = tuple(block_of)
        d = []
        for g, (p, q, k) in enumerate(block_of):
            col = {}
            if (p + 1, q) in self.blocks:
                dT = C.boundary_matrix(p + 1).T
                s = tower_d1_sign(p, q)
                base = self.blocks[(p + 1, q)]
                for i in range(dT.rows):
                    c = dT[i, k]
                    if c:
                        col[base + i] = s * c
            d.append(col)

        def prod(i, j):
            return self._cell_product(i, j)

        if check_product is None:
            check_product = len(degrees) <= 120
        super().__init__(degrees, filts, d, moduli, prod, labels, name=name or f"AHSS({C.name};{A.name})",
                         coefficients=A.name or "A", check_product=check_product,
                         fast_product=self._fast)

    def _cell_product(self, i, j) -> dict:
        p, q, a = self.block_of[i]
        s, t, b = self.block_of[j]
        tgt = self.blocks.get((p + s, q + t))
        const = self.ring.constant(q, t)
        if tgt is None or not const:
            return {}
        k = self.chain.joins(p, s).get((a, b))
        if k is None:
            return {}
        return {tgt + k: tower_product_sign(p, q, s, t) * const}

    def _fast(self, x, y) -> dict:
        xs: dict = {}
        ys: dict = {}
        for g, a in x.items():
            if a:
                p, q, k = self.block_of[g]
                xs.setdefault((p, q), {})[k] = a
        for g, b in y.items():
            if b:
                s, t, k = self.block_of[g]
                ys.setdefault((s, t), {})[k] = b
        out: dict = {}
        for (p, q), xp in xs.items():
            for (s, t), ys_ in ys.items():
                tgt = self.blocks.get((p + s, q + t))
                const = self.ring.constant(q, t)
                if tgt is None or not const:
                    continue
                sg = tower_product_sign(p, q, s, t) * const
                for (fa, fb), k in self.chain.joins(p, s).items():
                    u = xp.get(fa)
                    if u:
                        v = ys_.get(fb)
                        if v:
                            out[tgt + k] = out.get(tgt + k, 0) + sg * u * v
        return out

    def block_projection(self, f: int, c: int) -> Callable:
        """Degree-(f-c) local vector -> values of its (f, c) block (a cochain on f-cells)."""
        n = f - c
        start = self.blocks.get((f, c))
        size = self.chain.rank(f)

        def proj(v):
            if start is None:
                return (0,) * size
            gs = self.by_degree.get(n, [])
            out = [0] * size
            for loc, val in enumerate(v):
                g = gs[loc]
                if start <= g < start + size:
                    out[g - start] = val
            return tuple(out)
        return proj


def build_ahss(K, A: GradedRing, window: Sequence[int] | None = None, **kw) -> AHSSComplex:
    return AHSSComplex(_chain(K), A, window, **kw)


def e1_identification(C: AHSSComplex) -> dict:
    """Check E_1 = (C_grd, graded delta) block by block.

    Returns {(f, c): True/False}: the E_1 entry is the block's cochain group
    and d_1 is the graded coboundary matrix in the cell basis.
    """
    P1 = Page(C, 1)
    out = {}
    for (p, q), start in C.blocks.items():
        sq = P1._sq((p, q))
        A = C.ring
        m = A.modulus(q)
        size = C.chain.rank(p)
        expect = FGAbelianGroup.from_invariants(0, [m] * size) if m else FGAbelianGroup(size, ())
        ok = sq.group == expect
        # the block's unit cochains are cycles of E_1; their images under d_1
        tb, d1 = P1.differential((p, q))
        dT = C.chain.boundary_matrix(p + 1).T
        sgn = graded_delta_sign(p, q)
        tsq = P1._sq(tb)
        for k in range(size):
            x = {start + k: 1}
            u = P1.coords((p, q), x)
            lhs = d1(u)
            if (p + 1, q) in C.blocks:
                y = {C.blocks[(p + 1, q)] + i: sgn * dT[i, k] for i in range(dT.rows) if dT[i, k]}
                rhs = P1.coords(tb, {g: v for g, v in y.items()})
            else:
                rhs = (0,) * d1.target.ngens
            ok = ok and tuple(lhs) == tsq.group.reduce(tuple(rhs))
        out[(p, q)] = ok
    return out


# ---------------------------------------------------------------------------
# graded cochain cohomology as a page view


class CochainCohomology:
    """H^{P,Q}(C; A) computed from bigraded cochains, presented as a page view.

    Chain-level elements are sparse dicts keyed (P, Q, cell index).  With
    graded=True the product is the graded cup product, otherwise the
    ungraded one.
    """

    r = 2

    def __init__(self, C: IntChainComplex, A: GradedRing, window: Sequence[int] | None = None,
                 graded: bool = True, max_degree: int | None = None):
        self.C, self.A = C, A
        self.graded = graded
        self.qs = tuple(A.support(window))
        self.max_degree = max_degree if max_degree is not None else C.dimension
        self._sq = {}
        for P in range(0, self.max_degree + 1):
            for Q in self.qs:
                self._sq[(P, Q)] = self._subquotient(P, Q)

    def _subquotient(self, P, Q) -> Subquotient:
        return cohomology(self.C, P, self.A.modulus(Q))

    def bidegrees(self) -> list:
        return sorted(b for b, sq in self._sq.items()
                      if 0 <= b[0] <= self.max_degree and b[1] in self.qs and not sq.group.is_trivial())

    def _get(self, b) -> Subquotient:
        if b not in self._sq:
            n = self.C.rank(b[0]) if b[0] >= 0 else 0
            self._sq[b] = Subquotient(Lattice(n), Lattice(n))
        return self._sq[b]

    def group(self, b) -> FGAbelianGroup:
        return self._get(b).group

    def total_degree(self, b) -> int:
        return b[0] - b[1]

    @staticmethod
    def add(b1, b2):
        return (b1[0] + b2[0], b1[1] + b2[1])

    def lift(self, b, coords) -> dict:
        v = self._get(b).lift(coords)
        return {(b[0], b[1], i): a for i, a in enumerate(v) if a}

    def coords(self, b, x) -> tuple:
        vec = [0] * self._get(b).ambient
        for (P, Q, i), a in x.items():
            vec[i] += a
        try:
            return self._get(b).coords(vec)
        except SubgroupViolation as exc:
            raise NotWellDefined(f"not a cocycle at {b}") from exc

    def cycle_generators(self, b) -> list:
        return [{(b[0], b[1], i): a for i, a in enumerate(v) if a} for v in self._get(b).S.basis]

    def indeterminacy(self, b) -> list:
        return [{(b[0], b[1], i): a for i, a in enumerate(v) if a} for v in self._get(b).T.gens]

    def differential(self, b) -> tuple:
        tb = (b[0] + 1, b[1])
        return tb, GroupHom(self.group(b), self.group(tb))

    def product(self, x, y) -> dict:
        if not x or not y:
            return {}
        (P, Q, _), (S, T, _) = next(iter(x)), next(iter(y))
        a = BigradedCochain(self.C, self.A, P, Q, tuple(x.get((P, Q, i), 0) for i in range(self.C.rank(P))))
        b = BigradedCochain(self.C, self.A, S, T, tuple(y.get((S, T, i), 0) for i in range(self.C.rank(S))))
        if self.C.rank(P + S) == 0:
            return {}
        z = graded_cup(a, b) if self.graded else ungraded_cup(a, b)
        return {(z.p, z.q, i): v for i, v in enumerate(z.values) if v}


def cochain_pairing(C, A: GradedRing, window=None, graded: bool = True, max_degree: int | None = None) -> PagePairing:
    H = CochainCohomology(_chain(C), A, window, graded, max_degree)
    return PagePairing(H, H, H, H.product, name="graded cup" if graded else "ungraded cup")


class _Bounded:
    """Restrict a page view to bidegrees with filtration below a bound."""

    def __init__(self, view, bound: int):
        self._v = view
        self.bound = bound
        self.r = view.r

    def __getattr__(self, name):
        return getattr(self._v, name)

    def bidegrees(self) -> list:
        return [b for b in self._v.bidegrees() if b[0] < self.bound]


def ahss_to_cochain_maps(C: AHSSComplex, P: Page, H: CochainCohomology) -> Callable:
    """E_r^{f,c} -> H^{f,c}: project a representative onto its own block."""
    cache = {}

    def get(b):
        if b not in cache:
            src = P._sq(b)
            tgt = H._get(b)
            cache[b] = induced_map(C.block_projection(*b), src, tgt)
        return cache[b]
    return get


@dataclass
class AHSSComparison:
    complex: AHSSComplex
    e2: PagePairing
    graded: PagePairing
    ungraded: PagePairing
    maps: Callable

    def against_graded(self, family=SignFamily.identity(), twist=None):
        return compare_global_iso(self.e2, self.graded, family, self.maps, twist)

    def against_ungraded(self, family=SignFamily.identity(), twist=None):
        return compare_global_iso(self.e2, self.ungraded, family, self.maps, twist)


def ahss_comparison(K, A: GradedRing, window=None, max_degree: int | None = None) -> AHSSComparison:
    """E_2 pairing of the AHSS next to the graded and ungraded cup products on H*(K; A)."""
    C = _chain(K)
    top = max_degree if max_degree is not None else C.dimension
    X = build_ahss(C, A, window, max_filtration=top)
    pp = page_pairing(X, X, X, None, 2)
    gr = cochain_pairing(C, A, window, True, top)
    un = cochain_pairing(C, A, window, False, top)
    if max_degree is not None:
        bound = max_degree
        pp = PagePairing(_Bounded(pp.X, bound), _Bounded(pp.Y, bound), pp.XY, pp.chain_product,
                         check=False, name=pp.name)
        pp.pairs = _bounded_pairs(pp, bound)
    maps = ahss_to_cochain_maps(X, pp.XY, gr.XY)
    return AHSSComparison(X, pp, gr, un, maps)


def _bounded_pairs(pp: PagePairing, bound: int):
    base = PagePairing.pairs

    def pairs():
        return [(bx, by) for bx, by in base(pp) if pp.target(bx, by)[0] < bound]
    return pairs


# ---------------------------------------------------------------------------
# Serre


def build_serre(p: SimplicialMap, modulus: int = 0) -> FilteredCochainComplex:
    """Cochains of the source filtered by the dimension of the image simplex."""
    X = p.source
    return FilteredCochainComplex.from_chain_complex(
        X.chain_complex, lambda cell, n: p.image_dimension(cell), modulus,
        name=f"Serre({X.name}->{p.target.name})")


def kunneth_grid(base: OrderedComplex, fiber: OrderedComplex, modulus: int) -> dict:
    """(f, c) -> dim H^f(B) * dim H^(-c)(F) over a prime field Z/modulus."""
    def betti(K):
        C = K.chain_complex
        return [cohomology(C, q, modulus).group.ngens for q in range(K.dimension + 1)]
    bb, bf = betti(base), betti(fiber)
    return {(f, -q): bb[f] * bf[q] for f in range(len(bb)) for q in range(len(bf)) if bb[f] * bf[q]}


# ---------------------------------------------------------------------------
# product vs skeletal filtration


@dataclass
class ProductFiltrationVerdict:
    e1_product: dict
    e1_skeletal: dict
    e2_product: dict
    e2_skeletal: dict
    e2_maps: dict

    @property
    def e1_differ(self) -> bool:
        return self.e1_product != self.e1_skeletal

    @property
    def e2_isomorphic(self) -> bool:
        return all(m.is_iso() for m in self.e2_maps.values())


def product_filtrations(Kx: OrderedComplex, Ky: OrderedComplex, modulus: int = 0):
    P, p1, p2 = product(Kx, Ky)
    C = P.chain_complex
    prod_f = FilteredCochainComplex.from_chain_complex(
        C, lambda cell, n: p1.image_dimension(cell) + p2.image_dimension(cell), modulus,
        name=f"{P.name}[product]")
    skel = FilteredCochainComplex.from_chain_complex(C, lambda cell, n: n, modulus, name=f"{P.name}[skeletal]")
    return P, prod_f, skel


def compare_product_filtrations(Kx: OrderedComplex, Ky: OrderedComplex, modulus: int = 0
                                ) -> ProductFiltrationVerdict:
    """E_1 and E_2 of both filtrations; the identity (skeletal -> product) certifies E_2."""
    _, prod_f, skel = product_filtrations(Kx, Ky, modulus)
    t = lambda P: {b: g for b, g in P.table().items()}
    maps = induced_page_map(skel, prod_f, 2)
    return ProductFiltrationVerdict(t(Page(prod_f, 1)), t(Page(skel, 1)),
                                    t(Page(prod_f, 2)), t(Page(skel, 2)), maps)


# ---------------------------------------------------------------------------
# group cohomology


@dataclass
class GroupPage:
    complex: AHSSComplex
    comparison: AHSSComparison
    maxdim: int

    @property
    def page(self) -> Page:
        return self.comparison.e2.XY

    def table(self) -> dict:
        return {b: g for b, g in self.page.table().items() if b[0] < self.maxdim}


def build_group_page(table: Sequence[Sequence[int]], A: GradedRing, maxdim: int,
                     window: Sequence[int] | None = None, action: Sequence | None = None) -> GroupPage:
    """H^q(G; A_*) for q < maxdim through the normalized bar complex, with its pairing."""
    if maxdim < 2:
        raise ValueError("maxdim must be at least 2")
    if action is not None:
        for g, a in enumerate(action):
            trivial = a is None or a == 1 or (isinstance(a, (list, tuple)) and list(a) == [1])
            if not trivial:
                raise NontrivialActionUnsupported(f"element {g} acts nontrivially on the coefficients")
    B = nerve(table, maxdim)
    cmp_ = ahss_comparison(B, A, window, max_degree=maxdim)
    return GroupPage(cmp_.complex, cmp_, maxdim)


# ---------------------------------------------------------------------------
# descent


@dataclass
class CoverData:
    base: OrderedComplex
    pieces: list            # list of OrderedComplex (subcomplexes, same vertex list)

    def __post_init__(self):
        if not self.pieces:
            raise NotACover("empty cover")
        allsimp = set()
        for U in self.pieces:
            if U.vertices != self.base.vertices:
                raise NotACover("pieces must share the base vertex list")
            # vertices of unused singletons are added by the constructor; restrict to used simplices
            for s in U.simplices():
                if s not in self.base:
                    raise NotACover(f"{s} is not a simplex of the base")
            allsimp.update(self.used(U))
        missing = [s for s in self.base.simplices() if s not in allsimp]
        if missing:
            raise NotACover(f"pieces miss {missing[0]}")

    @staticmethod
    def used(U: OrderedComplex) -> set:
        return set(U.simplices())

    @classmethod
    def from_facets(cls, base: OrderedComplex, pieces: Sequence[Sequence[Sequence[int]]]) -> "CoverData":
        return cls(base, [base.subcomplex(f) for f in pieces])

    def intersection(self, I: Sequence[int]) -> set:
        out = self.used(self.pieces[I[0]])
        for i in I[1:]:
            out &= self.used(self.pieces[i])
        return out


class DescentComplex(FilteredCochainComplex):
    """Cech double complex with total differential cech + (-1)^m delta, filtered by m."""

    def __init__(self, cover: CoverData, modulus: int = 0, name: str = ""):
        self.cover = cover
        K = cover.base
        k = len(cover.pieces)
        self.nerve = []
        simps = {}
        for m in range(k):
            for I in itertools.combinations(range(k), m + 1):
                S = cover.intersection(I)
                if S:
                    self.nerve.append(I)
                    simps[I] = S
        self.pieces_of = simps
        cells, degrees, filts = [], [], []
        index = {}
        for I in self.nerve:
            m = len(I) - 1
            for s in sorted(simps[I], key=lambda s: (len(s), s)):
                index[(I, s)] = len(cells)
                cells.append((I, s))
                degrees.append(m + len(s) - 1)
                filts.append(m)
        d = []
        for I, s in cells:
            m, l = len(I) - 1, len(s) - 1
            col = {}
            for j in range(k):
                if j in I:
                    continue
                J = tuple(sorted(I + (j,)))
                if (J, s) in index:
                    col[index[(J, s)]] = -1 if J.index(j) % 2 else 1
            sg = (-1 if m % 2 else 1) * koszul_delta_sign(l)
            for v in range(len(K.vertices)):
                if v in s:
                    continue
                t = tuple(sorted(s + (v,)))
                if (I, t) in index:
                    pos = t.index(v)
                    col[index[(I, t)]] = col.get(index[(I, t)], 0) + sg * (-1 if pos % 2 else 1)
            d.append(col)
        super().__init__(degrees, filts, d, [modulus] * len(cells), None, cells,
                         name=name or f"Cech({K.name})", coefficients="Z" if not modulus else f"Z/{modulus}")
        self.modulus = modulus

    def acyclic_pieces(self) -> bool:
        K = self.cover.base
        for I in self.nerve:
            U = _restricted(K, self.pieces_of[I])
            C = U.chain_complex
            for q in range(1, U.dimension + 1):
                if not cohomology(C, q, self.modulus).group.is_trivial():
                    return False
        return True


def _restricted(K: OrderedComplex, simps: set) -> OrderedComplex:
    used = sorted({v for s in simps for v in s})
    idx = {v: i for i, v in enumerate(used)}
    return OrderedComplex([K.vertices[v] for v in used], [tuple(idx[v] for v in s) for s in simps])


def build_descent(cover: CoverData, modulus: int = 0) -> DescentComplex:
    return DescentComplex(cover, modulus)


# ---------------------------------------------------------------------------
# tower specifications


KINDS = ("ahss", "serre", "bockstein", "descent", "group")


@dataclass
class TowerSpec:
    kind: str
    complex: OrderedComplex | None = None
    map: SimplicialMap | None = None
    cover: CoverData | None = None
    group: list | None = None
    ring: GradedRing | None = None
    modulus: int = 0
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown tower kind {self.kind!r}")
        need = {"ahss": "complex", "serre": "map", "bockstein": "complex", "descent": "cover", "group": "group"}
        if getattr(self, need[self.kind]) is None:
            raise ValueError(f"a {self.kind} tower needs a {need[self.kind]}")
        if self.kind == "bockstein" and self.modulus < 2:
            raise ValueError("a bockstein tower needs --modulus >= 2")

    def build(self):
        """The filtered complex (or, for bockstein, the chain couple) of this tower."""
        window = self.options.get("window")
        if self.kind == "ahss":
            return build_ahss(self.complex, self.ring or GradedRing.integers(), window)
        if self.kind == "serre":
            return build_serre(self.map, self.modulus)
        if self.kind == "descent":
            return build_descent(self.cover, self.modulus)
        if self.kind == "group":
            maxdim = int(self.options.get("maxdim", 4))
            return build_group_page(self.group, self.ring or GradedRing.integers(), maxdim, window,
                                    self.options.get("action"))
        from .couple import bockstein_couple
        return bockstein_couple(self.complex, self.modulus)


# ---------------------------------------------------------------------------
# the exact couple of a filtered complex


def filtered_couple(C: FilteredCochainComplex, degrees: Iterable[int] | None = None,
                    periodic: bool = True, check: bool = True):
    """D^{f,n} = H^n(F^f), E^{f,n} = H^n(F^f / F^(f+1)).

    i: D^{f+1,n} -> D^{f,n} is inclusion, j the quotient, k the connecting
    map into D^{f+1,n+1}.  Filtration degrees run one step below the bottom
    so that i reaches the unfiltered cohomology; that edge is excluded from
    the exactness check, as are the outermost degrees of an explicit window.
    """
    from .couple import BigradedExactCouple, Periodicity

    ns = sorted(set(C.total_degrees) if degrees is None else degrees)
    lo, hi = C.min_filtration, C.max_filtration
    fs = range(lo - 1, hi + 1)

    def dsq(f, n):
        F = C.F(n, f) if f >= lo else Lattice.full(C.dim(n))
        Fl = C.F(n - 1, f) if f >= lo else Lattice.full(C.dim(n - 1))
        S = Lattice.preimage(C.dmatrix(n), C.relations(n + 1)).intersect(F) + C.relations(n)
        T = (Fl.image(C.dmatrix(n - 1)) if C.dim(n - 1) else Lattice(C.dim(n))) + C.relations(n)
        return Subquotient(S, T)

    def esq(f, n):
        return Subquotient(C.Z(n, 1, f), C.F(n, f + 1) + (C.F(n - 1, f).image(C.dmatrix(n - 1))
                                                          if C.dim(n - 1) else Lattice(C.dim(n))))

    Dsq = {(f, n): dsq(f, n) for f in fs for n in ns}
    Esq = {(f, n): esq(f, n) for f in fs if f >= lo for n in ns}
    zero = lambda dim: Subquotient(Lattice(dim), Lattice(dim))

    def D(key):
        return Dsq.get(key) or zero(C.dim(key[1]))

    def E(key):
        return Esq.get(key) or zero(C.dim(key[1]))

    i, j, k = {}, {}, {}
    for (f, n), sq in Dsq.items():
        if (f - 1, n) in Dsq:
            i[(f, n)] = induced_map(IntegerMatrix.identity(C.dim(n)), sq, D((f - 1, n)))
        if (f, n) in Esq:
            j[(f, n)] = induced_map(IntegerMatrix.identity(C.dim(n)), sq, E((f, n)))
    for (f, n), sq in Esq.items():
        if (f + 1, n + 1) in Dsq:
            k[(f, n)] = induced_map(C.dmatrix(n), sq, D((f + 1, n + 1)))
    inner = (lambda n: True) if degrees is None else (lambda n: ns[0] < n < ns[-1])
    interior = [key for key in set(Dsq) | set(Esq) if key[0] >= lo and inner(key[1])]
    return BigradedExactCouple({b: s.group for b, s in Dsq.items()}, {b: s.group for b, s in Esq.items()},
                               i, j, k, {"i": (-1, 0), "j": (0, 0), "k": (1, 1)},
                               Periodicity("beta") if periodic else None, check=check,
                               name=f"couple({C.name})", interior=interior)
