"""Canonical small complexes used by tests, demos and the CLI."""

from __future__ import annotations

import itertools
from functools import lru_cache

from .simplicial import OrderedComplex, SimplicialMap, product

# 6-vertex RP^2 (vertices 0..5)
_RP2 = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5),
        (1, 2, 4), (1, 3, 4), (1, 3, 5), (2, 3, 5), (2, 4, 5)]

# 11-vertex RP^3 (40 tetrahedra, f-vector (11, 51, 80, 40))
_RP3 = [(0, 1, 2, 6), (0, 1, 2, 10), (0, 1, 3, 5), (0, 1, 3, 6), (0, 1, 5, 10), (0, 2, 4, 9),
        (0, 2, 4, 10), (0, 2, 6, 9), (0, 3, 5, 8), (0, 3, 6, 9), (0, 3, 8, 9), (0, 4, 8, 9),
        (0, 4, 8, 10), (0, 5, 8, 10), (1, 2, 6, 8), (1, 2, 7, 8), (1, 2, 7, 10), (1, 3, 4, 5),
        (1, 3, 4, 6), (1, 4, 5, 9), (1, 4, 6, 8), (1, 4, 8, 9), (1, 5, 9, 10), (1, 7, 8, 9),
        (1, 7, 9, 10), (2, 3, 4, 5), (2, 3, 4, 10), (2, 3, 5, 8), (2, 3, 7, 8), (2, 3, 7, 10),
        (2, 4, 5, 9), (2, 5, 6, 8), (2, 5, 6, 9), (3, 4, 6, 10), (3, 6, 9, 10), (3, 7, 8, 9),
        (3, 7, 9, 10), (4, 6, 8, 10), (5, 6, 8, 10), (5, 6, 9, 10)]


@lru_cache(maxsize=None)
def point() -> OrderedComplex:
    return OrderedComplex(["*"], [], name="point")


@lru_cache(maxsize=None)
def simplex(n: int) -> OrderedComplex:
    if not 0 <= n <= 3:
        raise ValueError("simplex fixtures exist for n <= 3")
    return OrderedComplex.from_facets([str(i) for i in range(n + 1)], [tuple(range(n + 1))], name=f"D{n}")


@lru_cache(maxsize=None)
def circle() -> OrderedComplex:
    """Boundary of the 2-simplex."""
    return OrderedComplex.from_facets(["0", "1", "2"], [(0, 1), (1, 2), (0, 2)], name="S1")


@lru_cache(maxsize=None)
def sphere() -> OrderedComplex:
    """Boundary of the 3-simplex."""
    return OrderedComplex.from_facets([str(i) for i in range(4)],
                                      list(itertools.combinations(range(4), 3)), name="S2")


@lru_cache(maxsize=None)
def cone_on_circle() -> OrderedComplex:
    """Cone on the triangle circle, apex last; the circle is the subcomplex on 0, 1, 2."""
    return OrderedComplex.from_facets(["0", "1", "2", "a"], [(0, 1, 3), (1, 2, 3), (0, 2, 3)], name="CS1")


@lru_cache(maxsize=None)
def rp2() -> OrderedComplex:
    return OrderedComplex.from_facets([str(i) for i in range(6)], _RP2, name="RP2")


@lru_cache(maxsize=None)
def rp3() -> OrderedComplex:
    return OrderedComplex.from_facets([str(i) for i in range(11)], _RP3, name="RP3")


@lru_cache(maxsize=None)
def _torus():
    P, p1, p2 = product(circle(), circle(), name="T2")
    return P, p1, p2


def torus() -> OrderedComplex:
    return _torus()[0]


def torus_projection() -> SimplicialMap:
    return _torus()[1]


@lru_cache(maxsize=None)
def _klein():
    # grid Z/3 x Z/3 with (3, b) glued to (0, -b)
    def v(a, b):
        if a == 3:
            a, b = 0, (-b) % 3
        return (a, b % 3)
    facets = []
    for a in range(3):
        for b in range(3):
            facets.append((v(a, b), v(a + 1, b), v(a + 1, b + 1)))
            facets.append((v(a, b), v(a, b + 1), v(a + 1, b + 1)))
    labels = sorted({x for f in facets for x in f})
    idx = {x: i for i, x in enumerate(labels)}
    K = OrderedComplex.from_facets([f"{a}{b}" for a, b in labels],
                                   [tuple(idx[x] for x in f) for f in facets], name="Klein")
    p = SimplicialMap(K, circle(), [a for a, _ in labels])
    return K, p


def klein_bottle() -> OrderedComplex:
    return _klein()[0]


def klein_projection() -> SimplicialMap:
    return _klein()[1]


FIXTURES = {
    "point": point,
    "D0": lambda: simplex(0),
    "D1": lambda: simplex(1),
    "D2": lambda: simplex(2),
    "D3": lambda: simplex(3),
    "S1": circle,
    "S2": sphere,
    "CS1": cone_on_circle,
    "RP2": rp2,
    "RP3": rp3,
    "T2": torus,
    "Klein": klein_bottle,
}


def fixture(name: str) -> OrderedComplex:
    try:
        return FIXTURES[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}") from None
