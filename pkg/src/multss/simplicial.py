"""Ordered simplicial complexes, chain complexes and cochains.

Cochains use the Koszul-corrected conventions

    (delta a)(c)   = -(-1)^p a(dc)                      for a of degree p
    (a cup b)(c)   = (-1)^(pq) a(front_p c) * b(back_q c)

with the Alexander-Whitney front/back faces of an ordered simplex.  The
classical conventions are available as `classical_delta` / `classical_cup`
for comparison.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Callable, Hashable, Iterable, Sequence

from .exactlin import IntegerMatrix


class NotAComplex(ValueError):
    """Simplex set is not closed under faces, or a boundary squares to nonzero."""


class InvalidGroupTable(ValueError):
    pass


class InvalidSimplicialMap(ValueError):
    pass


def koszul_delta_sign(p: int) -> int:
    """Sign in front of a(dc) for the coboundary of a degree-p cochain."""
    return -1 if p % 2 == 0 else 1


def cup_sign(p: int, q: int) -> int:
    return -1 if (p * q) % 2 else 1


# ---------------------------------------------------------------------------
# chain complexes


class IntChainComplex:
    """Free chain complex with ordered cell bases per degree.

    `boundary[n]` is the matrix of d: C_n -> C_{n-1} (rows: cells of degree
    n-1).  `split(cell, p)` returns the Alexander-Whitney pair
    (front p-face, back face) or None; it is what the cup product evaluates.
    """

    def __init__(self, cells: dict[int, Sequence[Hashable]], boundary: dict[int, IntegerMatrix],
                 split: Callable | None = None, join: Callable | None = None, name: str = ""):
        self.cells = {n: tuple(c) for n, c in cells.items() if len(c)}
        self.boundary = dict(boundary)
        self.split = split
        self.join = join
        self.name = name
        self.index = {n: {c: i for i, c in enumerate(cs)} for n, cs in self.cells.items()}
        for n, cs in self.cells.items():
            if n > 0 and (n - 1) in self.cells:
                d = self.boundary.get(n)
                if d is None or (d.rows, d.cols) != (len(self.cells[n - 1]), len(cs)):
                    raise NotAComplex(f"boundary matrix in degree {n} has the wrong shape")
        for n in self.cells:
            if n - 1 in self.cells and n - 2 in self.cells:
                if not (self.boundary[n - 1] @ self.boundary[n]).is_zero():
                    raise NotAComplex(f"d o d != 0 in degree {n}")

    @property
    def degrees(self) -> list[int]:
        return sorted(self.cells)

    @property
    def dimension(self) -> int:
        return max(self.cells, default=-1)

    def rank(self, n: int) -> int:
        return len(self.cells.get(n, ()))

    def boundary_matrix(self, n: int) -> IntegerMatrix:
        """d_n: C_n -> C_{n-1}, zero matrix where either side is empty."""
        if n in self.boundary and n in self.cells and n - 1 in self.cells:
            return self.boundary[n]
        return IntegerMatrix.zeros(self.rank(n - 1), self.rank(n))

    def coboundary_matrix(self, p: int, classical: bool = False) -> IntegerMatrix:
        """Matrix of delta: C^p -> C^(p+1) on cell-indicator cochains."""
        dT = self.boundary_matrix(p + 1).T
        if classical:
            return dT
        s = koszul_delta_sign(p)
        return IntegerMatrix(dT.rows, dT.cols, tuple(s * x for x in dT.entries))

    @cached_property
    def _joins(self) -> dict:
        # (p, q) -> {(front_index, back_index): target_index}
        out: dict = {}
        if self.split is None:
            return out
        for n, cs in self.cells.items():
            for t, c in enumerate(cs):
                for p in range(n + 1):
                    fb = self.split(c, p)
                    if fb is None:
                        continue
                    f, b = fb
                    fi = self.index.get(p, {}).get(f)
                    bi = self.index.get(n - p, {}).get(b)
                    if fi is None or bi is None:
                        continue
                    out.setdefault((p, n - p), {})[(fi, bi)] = t
        return out

    def joins(self, p: int, q: int) -> dict:
        """{(front index, back index): index of the (p+q)-cell they split from}."""
        return self._joins.get((p, q), {})

    def __repr__(self):
        ranks = tuple(self.rank(n) for n in range(self.dimension + 1))
        return f"IntChainComplex({self.name or '?'}, ranks={ranks})"


# ---------------------------------------------------------------------------
# ordered simplicial complexes


class OrderedComplex:
    """Finite simplicial complex with a total order on its vertices.

    Simplices are stored as increasing tuples of vertex indices.
    """

    def __init__(self, vertices: Sequence[Hashable], simplices: Iterable[Sequence[int]], name: str = ""):
        self.vertices = tuple(vertices)
        nv = len(self.vertices)
        simps = set()
        for s in simplices:
            s = tuple(int(v) for v in s)
            if not s:
                continue
            if any(b <= a for a, b in zip(s, s[1:])):
                raise NotAComplex(f"simplex {s} is not listed in increasing vertex order")
            if s[0] < 0 or s[-1] >= nv:
                raise NotAComplex(f"simplex {s} uses an unknown vertex")
            simps.add(s)
        for v in range(nv):
            simps.add((v,))
        for s in simps:
            if len(s) > 1:
                for i in range(len(s)):
                    f = s[:i] + s[i + 1:]
                    if f not in simps:
                        raise NotAComplex(f"face {f} of {s} is missing")
        self._simplices = frozenset(simps)
        self.name = name

    @classmethod
    def from_facets(cls, vertices, facets, name: str = "") -> "OrderedComplex":
        simps = set()
        for f in facets:
            f = tuple(sorted(f))
            for k in range(1, len(f) + 1):
                simps.update(itertools.combinations(f, k))
        return cls(vertices, simps, name=name)

    @classmethod
    def from_vertex_sets(cls, facets: Iterable[Iterable[Hashable]], name: str = "") -> "OrderedComplex":
        """Complex on sorted vertex labels from facets given by labels."""
        facets = [tuple(f) for f in facets]
        labels = sorted({v for f in facets for v in f})
        idx = {v: i for i, v in enumerate(labels)}
        return cls.from_facets(labels, [[idx[v] for v in f] for f in facets], name=name)

    def __contains__(self, s) -> bool:
        return tuple(s) in self._simplices

    def __eq__(self, other):
        return (isinstance(other, OrderedComplex) and self.vertices == other.vertices
                and self._simplices == other._simplices)

    def __hash__(self):
        return hash((self.vertices, self._simplices))

    @property
    def dimension(self) -> int:
        return max((len(s) - 1 for s in self._simplices), default=-1)

    @cached_property
    def _by_dim(self) -> dict[int, tuple]:
        out: dict[int, list] = {}
        for s in self._simplices:
            out.setdefault(len(s) - 1, []).append(s)
        return {d: tuple(sorted(v)) for d, v in out.items()}

    def simplices(self, d: int | None = None):
        if d is None:
            return [s for k in sorted(self._by_dim) for s in self._by_dim[k]]
        return list(self._by_dim.get(d, ()))

    def f_vector(self) -> tuple:
        return tuple(len(self._by_dim.get(d, ())) for d in range(self.dimension + 1))

    def is_subcomplex(self, simplices: Iterable[Sequence[int]]) -> bool:
        return all(tuple(s) in self._simplices for s in simplices)

    def subcomplex(self, simplices: Iterable[Sequence[int]], name: str = "") -> "OrderedComplex":
        """Closure of the given simplices, on the same vertex list."""
        closed = set()
        for s in simplices:
            s = tuple(s)
            if s not in self._simplices:
                raise NotAComplex(f"{s} is not a simplex of {self.name or 'the complex'}")
            for k in range(1, len(s) + 1):
                closed.update(itertools.combinations(s, k))
        sub = OrderedComplex.__new__(OrderedComplex)
        sub.vertices = self.vertices
        sub._simplices = frozenset(closed)
        sub.name = name
        return sub

    @cached_property
    def chain_complex(self) -> IntChainComplex:
        return chain_complex(self)

    def __repr__(self):
        return f"OrderedComplex({self.name or '?'}, f={self.f_vector()})"


def _simplex_split(c, p):
    return c[:p + 1], c[p:]


def chain_complex(K: OrderedComplex) -> IntChainComplex:
    """Simplicial chain complex with d[v0..vn] = sum (-1)^i [v0..^vi..vn]."""
    cells = {d: K.simplices(d) for d in range(K.dimension + 1)}
    index = {d: {s: i for i, s in enumerate(cs)} for d, cs in cells.items()}
    boundary = {}
    for d in range(1, K.dimension + 1):
        rows = len(cells[d - 1])
        ent = [0] * (rows * len(cells[d]))
        ncol = len(cells[d])
        for j, s in enumerate(cells[d]):
            for i in range(d + 1):
                f = s[:i] + s[i + 1:]
                ent[index[d - 1][f] * ncol + j] += -1 if i % 2 else 1
        boundary[d] = IntegerMatrix(rows, ncol, tuple(ent))
    return IntChainComplex(cells, boundary, split=_simplex_split, name=K.name)


# ---------------------------------------------------------------------------
# cochains


@dataclass(frozen=True)
class Cochain:
    """A degree-p cochain: one value per p-cell, in Z (modulus 0) or Z/modulus."""

    complex: IntChainComplex
    degree: int
    values: tuple
    modulus: int = 0

    def __post_init__(self):
        n = self.complex.rank(self.degree)
        if len(self.values) != n:
            raise ValueError(f"expected {n} values in degree {self.degree}, got {len(self.values)}")
        m = self.modulus
        object.__setattr__(self, "values", tuple(int(v) % m if m else int(v) for v in self.values))

    @classmethod
    def zero(cls, C: IntChainComplex, p: int, modulus: int = 0) -> "Cochain":
        return cls(C, p, (0,) * C.rank(p), modulus)

    def __add__(self, other: "Cochain") -> "Cochain":
        self._compatible(other)
        return Cochain(self.complex, self.degree,
                       tuple(a + b for a, b in zip(self.values, other.values)), self.modulus)

    def __sub__(self, other: "Cochain") -> "Cochain":
        self._compatible(other)
        return Cochain(self.complex, self.degree,
                       tuple(a - b for a, b in zip(self.values, other.values)), self.modulus)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, k: int) -> "Cochain":
        return Cochain(self.complex, self.degree, tuple(k * a for a in self.values), self.modulus)

    def is_zero(self) -> bool:
        return not any(self.values)

    def _compatible(self, other):
        if other.complex is not self.complex or other.degree != self.degree or other.modulus != self.modulus:
            raise ValueError("cochains live in different groups")

    def __call__(self, cell) -> int:
        return self.values[self.complex.index[self.degree][cell]]


def _coboundary(alpha: Cochain, sign: int) -> Cochain:
    C = alpha.complex
    p = alpha.degree
    d = C.boundary_matrix(p + 1)
    vals = d.T.apply(alpha.values) if d.cols else ()
    return Cochain(C, p + 1, tuple(sign * v for v in vals), alpha.modulus)


def delta(alpha: Cochain) -> Cochain:
    """(delta a)(c) = -(-1)^p a(dc)."""
    return _coboundary(alpha, koszul_delta_sign(alpha.degree))


def classical_delta(alpha: Cochain) -> Cochain:
    """(delta a)(c) = a(dc)."""
    return _coboundary(alpha, 1)


@dataclass(frozen=True)
class CoefficientPairing:
    """Coefficient pairing x (x) y -> constant * x * y in Z/modulus (None: gcd rule)."""

    constant: int = 1
    modulus: int | None = None

    def target_modulus(self, m1: int, m2: int) -> int:
        if self.modulus is not None:
            return self.modulus
        return gcd(m1, m2)


def _front_back_product(alpha: Cochain, beta: Cochain, sign: int, pairing: CoefficientPairing) -> Cochain:
    C = alpha.complex
    if beta.complex is not C:
        raise ValueError("cup product needs cochains on the same complex")
    p, q = alpha.degree, beta.degree
    out = [0] * C.rank(p + q)
    av, bv = alpha.values, beta.values
    k = sign * pairing.constant
    for (fi, bi), t in C.joins(p, q).items():
        a = av[fi]
        if a:
            b = bv[bi]
            if b:
                out[t] += k * a * b
    return Cochain(C, p + q, tuple(out), pairing.target_modulus(alpha.modulus, beta.modulus))


def cup(alpha: Cochain, beta: Cochain, pairing: CoefficientPairing = CoefficientPairing()) -> Cochain:
    """(a cup b)(c) = (-1)^(pq) a(front_p c) b(back_q c)."""
    return _front_back_product(alpha, beta, cup_sign(alpha.degree, beta.degree), pairing)


def classical_cup(alpha: Cochain, beta: Cochain, pairing: CoefficientPairing = CoefficientPairing()) -> Cochain:
    return _front_back_product(alpha, beta, 1, pairing)


# ---------------------------------------------------------------------------
# the classical-vs-Koszul comparison


@dataclass(frozen=True)
class ClassicalIso:
    """Degreewise signs phi(p) with phi o delta = delta_cl o phi and phi(a cup b) = phi a cup_cl phi b."""

    signs: tuple
    solutions: int

    def __call__(self, p: int) -> int:
        return self.signs[p]

    def apply(self, alpha: Cochain) -> Cochain:
        return alpha.scale(self.signs[alpha.degree])


def classical_iso(K=None, max_degree: int = 6) -> ClassicalIso:
    """Search all sign sequences on degrees 0..max_degree for a dga isomorphism.

    Both identities are checked through the sign functions the cochain
    operations actually use.  Raises if no candidate, or more than one, exists.
    """
    found = []
    for bits in itertools.product((1, -1), repeat=max_degree + 1):
        ok = True
        for p in range(max_degree):
            # phi(p+1) * delta_new = delta_cl * phi(p)
            if bits[p + 1] * koszul_delta_sign(p) != bits[p]:
                ok = False
                break
        if not ok:
            continue
        for p in range(max_degree + 1):
            for q in range(max_degree + 1 - p):
                if bits[p + q] * cup_sign(p, q) != bits[p] * bits[q]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            found.append(bits)
    if len(found) != 1:
        raise RuntimeError(f"expected a unique sign family, found {len(found)}")
    return ClassicalIso(found[0], len(found))


# ---------------------------------------------------------------------------
# maps and products


class SimplicialMap:
    """Vertex map that sends simplices to simplices and is monotone on each simplex."""

    def __init__(self, source: OrderedComplex, target: OrderedComplex, vertex_map: Sequence[int]):
        self.source = source
        self.target = target
        self.vertex_map = tuple(int(v) for v in vertex_map)
        if len(self.vertex_map) != len(source.vertices):
            raise InvalidSimplicialMap("vertex map has the wrong length")
        for s in source.simplices():
            img = [self.vertex_map[v] for v in s]
            if any(b < a for a, b in zip(img, img[1:])):
                raise InvalidSimplicialMap(f"not monotone on {s}")
            if tuple(sorted(set(img))) not in target:
                raise InvalidSimplicialMap(f"image of {s} is not a simplex")

    def image(self, s: Sequence[int]) -> tuple:
        return tuple(sorted({self.vertex_map[v] for v in s}))

    def image_dimension(self, s: Sequence[int]) -> int:
        return len({self.vertex_map[v] for v in s}) - 1

    def pullback(self, alpha: Cochain) -> Cochain:
        """(f*a)(s) = a(f s) when f s is nondegenerate of the same dimension, else 0."""
        src = self.source.chain_complex
        p = alpha.degree
        vals = []
        for s in src.cells.get(p, ()):
            img = tuple(self.vertex_map[v] for v in s)
            if len(set(img)) == len(img):
                vals.append(alpha(img))
            else:
                vals.append(0)
        return Cochain(src, p, tuple(vals), alpha.modulus)

    def __repr__(self):
        return f"SimplicialMap({self.source.name} -> {self.target.name})"


def product(K: OrderedComplex, L: OrderedComplex, name: str = "") -> tuple:
    """Staircase triangulation of K x L with lexicographic vertex order.

    Returns (K x L, projection to K, projection to L).
    """
    nk, nl = len(K.vertices), len(L.vertices)
    verts = [(a, b) for a in range(nk) for b in range(nl)]
    vid = {v: i for i, v in enumerate(verts)}
    simps = set()

    def extend(chain):
        simps.add(tuple(vid[v] for v in chain))
        a0, b0 = chain[-1]
        for a in range(a0, nk):
            for b in range(b0, nl):
                if (a, b) == (a0, b0):
                    continue
                pa = tuple(sorted({x for x, _ in chain} | {a}))
                pb = tuple(sorted({y for _, y in chain} | {b}))
                if pa in K and pb in L:
                    extend(chain + [(a, b)])

    for v in verts:
        extend([v])
    labels = [(K.vertices[a], L.vertices[b]) for a, b in verts]
    P = OrderedComplex(labels, simps, name=name or f"{K.name}x{L.name}")
    p1 = SimplicialMap(P, K, [a for a, _ in verts])
    p2 = SimplicialMap(P, L, [b for _, b in verts])
    return P, p1, p2


def cross(alpha: Cochain, beta: Cochain, p1: SimplicialMap, p2: SimplicialMap,
          pairing: CoefficientPairing = CoefficientPairing()) -> Cochain:
    """External product p1*a cup p2*b on the product complex."""
    return cup(p1.pullback(alpha), p2.pullback(beta), pairing)


# ---------------------------------------------------------------------------
# group nerves


def _check_group_table(table: Sequence[Sequence[int]]) -> int:
    n = len(table)
    if n == 0:
        raise InvalidGroupTable("empty table")
    for row in table:
        if len(row) != n or any(not (0 <= x < n) for x in row):
            raise InvalidGroupTable("table is not square over 0..n-1")
    ids = [e for e in range(n) if list(table[e]) == list(range(n))
           and all(table[g][e] == g for g in range(n))]
    if len(ids) != 1:
        raise InvalidGroupTable("no two-sided identity")
    e = ids[0]
    for a in range(n):
        if not any(table[a][b] == e and table[b][a] == e for b in range(n)):
            raise InvalidGroupTable(f"element {a} has no inverse")
        for b in range(n):
            for c in range(n):
                if table[table[a][b]][c] != table[a][table[b][c]]:
                    raise InvalidGroupTable(f"not associative at {(a, b, c)}")
    return e


def cyclic_group(n: int) -> list[list[int]]:
    return [[(a + b) % n for b in range(n)] for a in range(n)]


def nerve(table: Sequence[Sequence[int]], maxdim: int) -> IntChainComplex:
    """Normalized bar complex of the group with this multiplication table, degrees 0..maxdim.

    Degree-n cells are tuples (g1, ..., gn) of non-identity elements;
    d(g1..gn) = (g2..gn) + sum_{0<i<n} (-1)^i (.., g_i g_{i+1}, ..) + (-1)^n (g1..g_{n-1}).
    """
    if maxdim < 1:
        raise ValueError("maxdim must be at least 1")
    e = _check_group_table(table)
    elems = [g for g in range(len(table)) if g != e]
    cells = {n: list(itertools.product(elems, repeat=n)) for n in range(maxdim + 1)}
    index = {n: {c: i for i, c in enumerate(cs)} for n, cs in cells.items()}
    boundary = {}
    for n in range(1, maxdim + 1):
        rows, cols = len(cells[n - 1]), len(cells[n])
        ent = [0] * (rows * cols)
        for j, c in enumerate(cells[n]):
            faces = [(1, c[1:])]
            for i in range(1, n):
                g = table[c[i - 1]][c[i]]
                if g != e:
                    faces.append(((-1) ** i, c[:i - 1] + (g,) + c[i + 1:]))
            faces.append(((-1) ** n, c[:-1]))
            for s, f in faces:
                ent[index[n - 1][f] * cols + j] += s
        boundary[n] = IntegerMatrix(rows, cols, tuple(ent))
    return IntChainComplex(cells, boundary, split=lambda c, p: (c[:p], c[p:]), name="BG")


# ---------------------------------------------------------------------------
# cohomology helpers


def cohomology(C: IntChainComplex, p: int, modulus: int = 0):
    """H^p(C; Z/modulus) as a Subquotient of the cochain lattice Z^{C_p}."""
    from .exactlin import Lattice, Subquotient

    n = C.rank(p)
    mods = [modulus] * n
    d_out = C.coboundary_matrix(p)
    d_in = C.coboundary_matrix(p - 1)
    target_mod = Lattice.coordinate(d_out.rows, (), [modulus] * d_out.rows)
    Z = Lattice.preimage(d_out, target_mod)
    B = Lattice(n, d_in.columns()) + Lattice.coordinate(n, (), mods)
    return Subquotient(Z, B)
