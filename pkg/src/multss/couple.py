"""Bigraded exact couples, derived couples and Bockstein spectral sequences.

Groups are kept in normal-form coordinates (FGAbelianGroup) and maps as
GroupHoms; keys are integer tuples and each of i, j, k carries a key shift.
Every derived group remembers how its generators lift to the previous
stage, so classes can always be pulled back to chain level.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .exactlin import (FGAbelianGroup, GroupHom, IntegerMatrix, Lattice, NotWellDefined, Subquotient,
                       SubgroupViolation, induced_map, solve)
from .graded import SCHEMA_VERSION
from .simplicial import Cochain, IntChainComplex, OrderedComplex, cup, cup_sign
from .ssengine import PagePairing


class ExactnessViolation(ValueError):
    pass


class NoPeriodicityDeclared(ValueError):
    pass


def _shift(key: tuple, s: tuple) -> tuple:
    return tuple(a + b for a, b in zip(key, s))


def _unshift(key: tuple, s: tuple) -> tuple:
    return tuple(a - b for a, b in zip(key, s))


_TRIVIAL = FGAbelianGroup(0, ())


@dataclass(frozen=True)
class Periodicity:
    """Declares that i (with its key shift) is the map to be inverted."""

    name: str = "beta"


class BigradedExactCouple:
    """D, E tables with i: D -> D, j: D -> E, k: E -> D, exact at every node.

    `i[key]` is the GroupHom out of D[key] into D[key + shift_i]; likewise
    for j and k.  Missing keys are zero groups.
    """

    def __init__(self, D: Mapping[tuple, FGAbelianGroup], E: Mapping[tuple, FGAbelianGroup],
                 i: Mapping[tuple, GroupHom], j: Mapping[tuple, GroupHom], k: Mapping[tuple, GroupHom],
                 shifts: Mapping[str, tuple], periodicity: Periodicity | None = None,
                 check: bool = True, name: str = "", interior: Iterable | None = None):
        self.D = dict(D)
        # keys where exactness is asserted; a truncated couple leaves its edge out
        self.interior = frozenset(interior) if interior is not None else None
        self.E = dict(E)
        self.i, self.j, self.k = dict(i), dict(j), dict(k)
        self.shifts = {m: tuple(s) for m, s in shifts.items()}
        self.periodicity = periodicity
        self.name = name
        if check:
            self.check_exactness()

    def dgroup(self, key) -> FGAbelianGroup:
        return self.D.get(key, _TRIVIAL)

    def egroup(self, key) -> FGAbelianGroup:
        return self.E.get(key, _TRIVIAL)

    def _map(self, which: str, key) -> GroupHom:
        table = getattr(self, which)
        if key in table:
            return table[key]
        src = self.dgroup(key) if which in "ij" else self.egroup(key)
        tk = _shift(key, self.shifts[which])
        tgt = self.egroup(tk) if which == "j" else self.dgroup(tk)
        return GroupHom(src, tgt)

    def map(self, which: str, key) -> GroupHom:
        return self._map(which, key)

    def keys(self) -> list:
        return sorted(set(self.D) | set(self.E))

    def d(self, key) -> GroupHom:
        """d = j k: E[key] -> E[key + shift_k + shift_j]."""
        k = self._map("k", key)
        j = self._map("j", _shift(key, self.shifts["k"]))
        return j @ k

    @property
    def d_shift(self) -> tuple:
        return _shift(self.shifts["k"], self.shifts["j"])

    def check_exactness(self) -> None:
        """im = ker at D (i then j), at E (j then k) and at D (k then i)."""
        si, sj, sk = self.shifts["i"], self.shifts["j"], self.shifts["k"]
        nodes = set()
        for key in list(self.D) + list(self.E):
            nodes.add(key)
        if self.interior is not None:
            nodes &= self.interior
        for key in sorted(nodes):
            checks = [
                ("D", self._map("i", _unshift(key, si)), self._map("j", key)),
                ("E", self._map("j", _unshift(key, sj)), self._map("k", key)),
                ("D", self._map("k", _unshift(key, sk)), self._map("i", key)),
            ]
            for node, into, out in checks:
                G = self.dgroup(key) if node == "D" else self.egroup(key)
                if into.target != G or out.source != G:
                    raise ExactnessViolation(f"maps do not meet at {node}{key}")
                if not (out @ into).is_zero():
                    raise ExactnessViolation(f"composite is nonzero at {node}{key}")
                ker = Lattice.preimage(out.matrix, out.target.relations()) if G.ngens else Lattice(0)
                im = Lattice(G.ngens, into.matrix.columns()) + G.relations()
                if not im.contains_lattice(ker):
                    raise ExactnessViolation(f"kernel exceeds image at {node}{key}")

    def i_injective(self) -> bool:
        keys = self.D if self.interior is None else [k for k in self.D if k in self.interior]
        return all(self._map("i", key).kernel().group.is_trivial() for key in keys)

    def __repr__(self):
        return f"BigradedExactCouple({self.name or '?'}, E={ {k: str(g) for k, g in self.E.items() if not g.is_trivial()} })"


@dataclass
class DerivedCouple:
    couple: BigradedExactCouple
    # E'[key] as a subquotient of the coordinate space of E[key]
    e_lift: dict
    d_lift: dict


def _coordinate_sq(G: FGAbelianGroup, gens_S) -> Subquotient:
    S = Lattice(G.ngens, gens_S) + G.relations()
    return Subquotient(S, G.relations())


def derive(c: BigradedExactCouple, check: bool = True) -> DerivedCouple:
    """The derived couple D' = im i, E' = ker d / im d."""
    si, sj, sk = c.shifts["i"], c.shifts["j"], c.shifts["k"]
    sd = c.d_shift
    keysD = set(c.D)
    keysE = set(c.E)
    Dsq, Esq = {}, {}
    for key in keysD:
        G = c.dgroup(key)
        ii = c.map("i", _unshift(key, si))
        Dsq[key] = _coordinate_sq(G, ii.matrix.columns())
    for key in keysE:
        G = c.egroup(key)
        dout = c.d(key)
        din = c.d(_unshift(key, sd))
        K = Lattice.preimage(dout.matrix, dout.target.relations()) if G.ngens else Lattice(0)
        B = Lattice(G.ngens, din.matrix.columns()) + G.relations()
        Esq[key] = Subquotient(K + G.relations(), B)
    D2 = {key: sq.group for key, sq in Dsq.items()}
    E2 = {key: sq.group for key, sq in Esq.items()}

    def dsq(key):
        return Dsq.get(key) or Subquotient(Lattice(c.dgroup(key).ngens), Lattice(c.dgroup(key).ngens))

    def esq(key):
        return Esq.get(key) or Subquotient(Lattice(c.egroup(key).ngens), Lattice(c.egroup(key).ngens))

    i2, j2, k2 = {}, {}, {}
    for key in keysD:
        ii = c.map("i", key)
        i2[key] = induced_map(ii.matrix, dsq(key), dsq(_shift(key, si)))
    # j'(i x) = j x : D'[key] -> E'[key - si + sj]
    for key in keysD:
        src = dsq(key)
        pre = _unshift(key, si)
        ii = c.map("i", pre)
        jj = c.map("j", pre)
        tkey = _shift(pre, sj)
        tgt = esq(tkey)
        A = IntegerMatrix.from_columns(list(ii.matrix.columns()) + list(c.dgroup(key).relations().gens),
                                       c.dgroup(key).ngens) if c.dgroup(key).ngens else None
        cols = []
        for g in src.generators:
            if A is None:
                x = ()
            else:
                sol = solve(A, g)
                if sol is None:
                    raise ExactnessViolation(f"generator of D'{key} is not in the image of i")
                x = sol[:ii.source.ngens]
            y = jj(x) if x else (0,) * jj.target.ngens
            cols.append(tgt.coords(y))
        j2[key] = GroupHom(src.group, tgt.group, IntegerMatrix.from_columns(cols, tgt.group.ngens))
    for key in keysE:
        kk = c.map("k", key)
        k2[key] = induced_map(kk.matrix, esq(key), dsq(_shift(key, sk)))
    shifts = dict(c.shifts)
    shifts["j"] = _unshift(sj, si)
    out = BigradedExactCouple(D2, E2, i2, j2, k2, shifts, c.periodicity, check=check, name=c.name + "'",
                              interior=c.interior)
    return DerivedCouple(out, Esq, Dsq)


# ---------------------------------------------------------------------------
# Bockstein couple


def _integral_cohomology_sq(C: IntChainComplex, p: int) -> Subquotient:
    n = C.rank(p)
    dout = C.coboundary_matrix(p)
    din = C.coboundary_matrix(p - 1)
    Z = Lattice.preimage(dout, Lattice(dout.rows))
    return Subquotient(Z, Lattice(n, din.columns()))


def _mod_cohomology_sq(C: IntChainComplex, p: int, n: int) -> Subquotient:
    m = C.rank(p)
    dout = C.coboundary_matrix(p)
    din = C.coboundary_matrix(p - 1)
    Z = Lattice.preimage(dout, Lattice.coordinate(dout.rows, (), [n] * dout.rows))
    B = Lattice(m, din.columns()) + Lattice.coordinate(m, (), [n] * m)
    return Subquotient(Z + Lattice.coordinate(m, (), [n] * m), B)


@dataclass
class ChainCouple:
    """A couple together with the chain-level subquotients its groups came from."""

    couple: BigradedExactCouple
    D_sq: dict
    E_sq: dict
    complex: IntChainComplex
    modulus: int


def bockstein_couple(K: OrderedComplex | IntChainComplex, n: int) -> ChainCouple:
    """D = H*(K;Z), E = H*(K;Z/n), i = x n, j = reduction, k = delta(-)/n."""
    if n < 2:
        raise ValueError("modulus must be at least 2")
    C = K.chain_complex if isinstance(K, OrderedComplex) else K
    degs = list(range(0, C.dimension + 1))
    Dsq = {(p,): _integral_cohomology_sq(C, p) for p in degs}
    Esq = {(p,): _mod_cohomology_sq(C, p, n) for p in degs}
    i, j, k = {}, {}, {}
    for p in degs:
        rk = C.rank(p)
        i[(p,)] = induced_map(lambda x: tuple(n * a for a in x), Dsq[(p,)], Dsq[(p,)])
        j[(p,)] = induced_map(IntegerMatrix.identity(rk), Dsq[(p,)], Esq[(p,)])
        if (p + 1,) in Dsq:
            dT = C.coboundary_matrix(p)

            def conn(x, dT=dT):
                y = dT.apply(x)
                if any(v % n for v in y):
                    raise NotWellDefined("coboundary of a mod-n cocycle is not divisible by n")
                return tuple(v // n for v in y)
            k[(p,)] = induced_map(conn, Esq[(p,)], Dsq[(p + 1,)])
    couple = BigradedExactCouple({key: s.group for key, s in Dsq.items()},
                                 {key: s.group for key, s in Esq.items()},
                                 i, j, k, {"i": (0,), "j": (0,), "k": (1,)},
                                 name=f"Bockstein({C.name}, {n})")
    return ChainCouple(couple, Dsq, Esq, C, n)


@dataclass
class BocksteinPages:
    chain: ChainCouple
    couples: list           # couples[r-1] is the r-th couple (r = 1 ...)
    lifts: list             # lifts[r-2] = derived.e_lift of couple r-1 -> r
    limit_index: int
    modulus: int

    def E(self, r: int) -> dict:
        return self.couples[min(r, len(self.couples)) - 1].E

    def d(self, r: int, key) -> GroupHom:
        return self.couples[min(r, len(self.couples)) - 1].d(key)

    def ranks(self, r: int, top: int | None = None) -> tuple:
        """Number of Z/n-summands per degree (exponent vectors for prime n)."""
        E = self.E(r)
        top = max(k[0] for k in E) if top is None else top
        return tuple(_zn_count(E.get((p,), _TRIVIAL), self.modulus) for p in range(top + 1))

    @property
    def stable(self) -> dict:
        return self.couples[-1].E

    def page(self, r: int) -> "BocksteinPageView":
        r = min(r, len(self.couples))
        return BocksteinPageView(self, r)


def _zn_count(g: FGAbelianGroup, n: int) -> int:
    """Number of cyclic summands (the rank over Z/n when every summand is Z/n)."""
    return g.rank + len(g.torsion)


def bockstein_pages(cc: ChainCouple, r_max: int = 50) -> BocksteinPages:
    """Derive until i is injective (the couple is then stationary) or r_max is reached."""
    couples = [cc.couple]
    lifts = []
    while len(couples) < r_max and not couples[-1].i_injective():
        dc = derive(couples[-1])
        couples.append(dc.couple)
        lifts.append(dc.e_lift)
    return BocksteinPages(cc, couples, lifts, len(couples), cc.modulus)


class BocksteinPageView:
    """Page-view adapter for E_r of a Bockstein spectral sequence."""

    def __init__(self, bp: BocksteinPages, r: int):
        self.bp = bp
        self.r = r
        self.couple = bp.couples[r - 1]
        self.stages = bp.lifts[:r - 1]
        self.base = bp.chain.E_sq
        self.C = bp.chain.complex

    def bidegrees(self) -> list:
        return sorted(k for k, g in self.couple.E.items() if not g.is_trivial())

    def group(self, b) -> FGAbelianGroup:
        return self.couple.egroup(b)

    def total_degree(self, b) -> int:
        return b[0]

    @staticmethod
    def add(b1, b2):
        return _shift(b1, b2)

    def _to_e1(self, b, coords) -> tuple:
        v = tuple(coords)
        for st in reversed(self.stages):
            v = st[b].lift(v)
        return v

    def lift(self, b, coords) -> dict:
        sq = self.base.get(b)
        if sq is None or not sq.group.ngens:
            return {}
        v = self._to_e1(b, coords)
        x = sq.lift(v)
        return {(b[0], a): val for a, val in enumerate(x) if val}

    def coords(self, b, x: Mapping) -> tuple:
        sq = self.base.get(b)
        if sq is None:
            return ()
        vec = [0] * sq.ambient
        for (deg, a), val in x.items():
            vec[a] += val
        try:
            v = sq.coords(vec)
            for st in self.stages:
                v = st[b].coords(v)
        except SubgroupViolation as exc:
            raise NotWellDefined(f"class does not survive to E_{self.r} at {b}") from exc
        return v

    def _e1_lattices(self, b):
        """S and T of E_r pulled back to chain level (as lists of sparse vectors)."""
        sq = self.base.get(b)
        if sq is None:
            return [], []
        if not self.stages:
            S, T = list(sq.S.basis), list(sq.T.gens)
        else:
            # S_r, T_r in E_1 coordinates, then lifted; E_1 relations join T
            top = self.stages[-1][b]
            S_c, T_c = list(top.S.basis), list(top.T.gens)
            for st in reversed(self.stages[:-1]):
                S_c = [st[b].lift(v) for v in S_c]
                T_c = [st[b].lift(v) for v in T_c] + [st[b].lift(v) for v in st[b].T.gens]
            S = [sq.lift(v) for v in S_c]
            T = [sq.lift(v) for v in T_c] + list(sq.T.gens)
        to = lambda v: {(b[0], a): val for a, val in enumerate(v) if val}
        return [to(v) for v in S], [to(v) for v in T]

    def cycle_generators(self, b) -> list:
        return self._e1_lattices(b)[0]

    def indeterminacy(self, b) -> list:
        return self._e1_lattices(b)[1]

    def differential(self, b) -> tuple:
        return _shift(b, self.couple.d_shift), self.couple.d(b)


def _cup_product(C: IntChainComplex, n: int, sign: bool = True):
    """Chain product on sparse {(degree, index): value} cochains, reduced mod n."""
    def prod(x, y):
        xs: dict = {}
        ys: dict = {}
        for (p, a), u in x.items():
            xs.setdefault(p, {})[a] = u
        for (q, b), v in y.items():
            ys.setdefault(q, {})[b] = v
        out: dict = {}
        for p, xp in xs.items():
            for q, yq in ys.items():
                s = cup_sign(p, q) if sign else 1
                for (a, b), t in C.joins(p, q).items():
                    u = xp.get(a)
                    if u:
                        v = yq.get(b)
                        if v:
                            out[(p + q, t)] = out.get((p + q, t), 0) + s * u * v
        return {k: val % n for k, val in out.items() if val % n}
    return prod


def bockstein_pairing(Kx, Ky, n: int, r: int, pages: BocksteinPages | None = None) -> PagePairing:
    """Pairing on E_r of the mod-n Bockstein spectral sequence induced by cup product.

    Only the diagonal case Kx is Ky is supported (internal cup product).
    """
    if Kx != Ky:
        raise NotImplementedError("external Bockstein pairings: pull back to a product complex first")
    if pages is None:
        pages = bockstein_pages(bockstein_couple(Kx, n))
    P = pages.page(r)
    return PagePairing(P, P, P, _cup_product(pages.chain.complex, n), name=f"Bockstein E_{r}")


def mod_cup_pairing(K, n: int, cc: ChainCouple | None = None) -> PagePairing:
    """The ordinary mod-n cup product on H*(K;Z/n) as a pairing (E_1 of the Bockstein couple)."""
    cc = cc if cc is not None else bockstein_couple(K, n)
    bp = BocksteinPages(cc, [cc.couple], [], 1, n)
    P = BocksteinPageView(bp, 1)
    C = cc.complex

    def prod(x, y):
        # evaluate through Cochain objects and the library cup product
        deg = lambda z: next(iter(z))[0] if z else None
        p, q = deg(x), deg(y)
        if p is None or q is None:
            return {}
        a = Cochain(C, p, tuple(x.get((p, i), 0) for i in range(C.rank(p))), n)
        b = Cochain(C, q, tuple(y.get((q, i), 0) for i in range(C.rank(q))), n)
        if C.rank(p + q) == 0:
            return {}
        z = cup(a, b)
        return {(p + q, i): v for i, v in enumerate(z.values) if v}
    return PagePairing(P, P, P, prod, name="mod-n cup")


# ---------------------------------------------------------------------------
# localization along a periodicity


@dataclass(frozen=True)
class LocalizedGroup:
    """colim(G -> G -> ...) along an endomorphism, stored as a presentation.

    The free part is Z^rank with the endomorphism `matrix` inverted; `inverted`
    is |det matrix| (for rank one, the group is Z[1/inverted]).
    """

    rank: int
    torsion: tuple
    matrix: IntegerMatrix
    inverted: int

    def __str__(self):
        tors = " + ".join(f"Z/{t}" for t in self.torsion)
        if self.rank == 0:
            free = ""
        elif self.inverted == 1:
            free = "Z" if self.rank == 1 else f"Z^{self.rank}"
        elif self.rank == 1:
            free = f"Z[1/{self.inverted}]"
        else:
            free = f"colim(Z^{self.rank}, det {self.inverted})"
        parts = [p for p in (tors, free) if p]
        return " + ".join(parts) if parts else "0"

    @property
    def is_finitely_generated(self) -> bool:
        return self.rank == 0 or self.inverted == 1


def _localize_endomorphism(f: GroupHom) -> LocalizedGroup:
    G = f.source
    n = G.ngens
    # generalized kernel: union of ker f^m, stabilizes after at most n + (total torsion length) steps
    power = GroupHom.identity(G)
    K = Lattice(n) + G.relations()
    for _ in range(4 * n + 4):
        power = f @ power
        K2 = Lattice.preimage(power.matrix, G.relations())
        if K2 == K:
            break
        K = K2
    Q = Subquotient(Lattice.full(n) + G.relations(), K + G.relations())
    fq = induced_map(f.matrix, Q, Q)
    H = Q.group
    # free part modulo torsion
    r = H.rank
    t = len(H.torsion)
    M = IntegerMatrix.from_rows([[fq.matrix[t + a, t + b] for b in range(r)] for a in range(r)], r) if r else IntegerMatrix(0, 0, ())
    det = abs(_det(M.to_rows())) if r else 1
    if r and det == 0:
        raise ValueError("endomorphism is not injective modulo its generalized kernel")
    return LocalizedGroup(r, H.torsion, M, det)


def _det(rows) -> int:
    from fractions import Fraction
    n = len(rows)
    A = [[Fraction(x) for x in row] for row in rows]
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if A[i][c]), None)
        if p is None:
            return 0
        if p != c:
            A[c], A[p] = A[p], A[c]
            det = -det
        det *= A[c][c]
        for i in range(c + 1, n):
            if A[i][c]:
                m = A[i][c] / A[c][c]
                A[i] = [a - m * b for a, b in zip(A[i], A[c])]
    return int(det)


@dataclass
class Localization:
    groups: dict            # key -> LocalizedGroup
    e_infinity: dict        # key -> FGAbelianGroup (stable E of the couple)
    limit_index: int


def beta_localize(c: BigradedExactCouple, r_max: int = 50) -> Localization:
    """Colimit of D along the declared periodicity map i, per key.

    For a key-preserving i this is the localization of each D[key]; for a
    shifting i the colimit is the eventual value of the chain
    D[key] -> D[key + s] -> ..., which finite data forces to stabilize.
    """
    if c.periodicity is None:
        raise NoPeriodicityDeclared("couple declares no periodicity map")
    s = c.shifts["i"]
    out = {}
    if not any(s):
        for key in c.D:
            out[key] = _localize_endomorphism(c.map("i", key))
    else:
        for key in c.D:
            k = key
            steps = 0
            # walk until the maps become isomorphisms between equal groups
            while steps < r_max:
                if _shift(k, s) not in c.D:
                    break           # the tower ends here: its last group is the colimit
                f = c.map("i", k)
                if f.is_iso():
                    break
                k = _shift(k, s)
                steps += 1
            g = c.dgroup(k)
            out[key] = LocalizedGroup(g.rank, g.torsion, IntegerMatrix.identity(g.rank), 1)
    cur = c
    limit = 1
    while not cur.i_injective() and limit < r_max:
        cur = derive(cur).couple
        limit += 1
    return Localization(out, dict(cur.E), limit)


# ---------------------------------------------------------------------------
# export


def couple_document(c: BigradedExactCouple) -> dict:
    ents = []
    for node, table in (("D", c.D), ("E", c.E)):
        for key in sorted(table):
            g = table[key]
            ent = {"node": node, "key": list(key), "rank": g.rank, "torsion": list(g.torsion), "maps": {}}
            for m in (("i", "j") if node == "D" else ("k",)):
                f = c.map(m, key)
                ent["maps"][m] = {"target": list(_shift(key, c.shifts[m])),
                                  "matrix": [[str(x) for x in row] for row in f.matrix.to_rows()]}
            ents.append(ent)
    return {"schema_version": SCHEMA_VERSION, "kind": "couple", "name": c.name,
            "shifts": {k: list(v) for k, v in c.shifts.items()}, "entries": ents}
