from __future__ import annotations

import itertools
import json
import random

import pytest
from hypothesis import given, strategies as st

from multss import (BigradedCochain, Cochain, GradedRing, InvalidGradedRing, SignFamily, delta, eta_commutation,
                    graded_cup, graded_delta, koszul_sign, reindex_identity_holds, reindex_transform,
                    strict_families, transport_sign, ungraded_cup)
from multss.fixtures import simplex, torus, torus_projection
from multss.graded import (INDEXINGS, SIGN_Q_T_MINUS_S, SIGN_SQ, SIGN_T_P_MINUS_Q, SIGN_T_P_PLUS_Q, Periodicity,
                           graded_cup_sign, rescale)


def test_ring_shorthands():
    Z = GradedRing.integers()
    assert Z.support() == [0] and Z.level(0).rank == 1
    assert GradedRing.mod(4).reduce(0, 9) == 1
    E = GradedRing.exterior(1)
    assert E.constant(1, 1) == 0 and E.constant(0, 1) == 1
    L = GradedRing.laurent(2)
    assert L.modulus(-4) == 0 and L.is_zero(3)
    with pytest.raises(ValueError):
        L.support()
    assert L.support(range(-3, 4)) == [-2, 0, 2]


@pytest.mark.parametrize("levels, pairing, period", [
    ({1: 0}, {}, None),                                 # no unit
    ({0: 0, 1: 2, 2: 0}, {}, None),                     # Z/2 x Z/2 -> Z not well defined
    ({0: 0, 1: 0, 2: 0, 3: 0}, {(1, 1): 2, (2, 1): 1, (1, 2): 3}, None),   # not associative
    ({0: 0, 2: 0}, {}, Periodicity(2)),                 # levels outside one fundamental period
    ({0: 0, 1: None}, {(0, 0): 2}, None),               # degree-0 generator not a unit
])
def test_invalid_rings(levels, pairing, period):
    with pytest.raises(InvalidGradedRing):
        GradedRing(levels, pairing, period)


def test_ring_json_round_trip():
    for A in (GradedRing.integers(), GradedRing.mod(3), GradedRing.exterior(1, 3), GradedRing.laurent(2)):
        doc = json.loads(json.dumps(A.to_json()))
        assert GradedRing.from_json(doc) == A
    with pytest.raises(InvalidGradedRing):
        GradedRing.from_json({"pairing": []})


def test_graded_delta_signs():
    C = simplex(1).chain_complex
    A = GradedRing.exterior(1)
    for q in (0, 1):
        a = BigradedCochain(C, A, 0, q, [2, 7])
        d = graded_delta(a)
        assert d.values == ((-1 if q == 0 else 1) * (7 - 2),)
    a0 = BigradedCochain(C, A, 0, 0, [2, 7])
    assert graded_delta(a0).values == delta(Cochain(C, 0, [2, 7])).values


def test_graded_cup_signs():
    assert graded_cup_sign(1, 0, 1, 1) == 1
    assert graded_cup_sign(0, 5, 1, 0) == 1
    assert graded_cup_sign(1, 0, 1, 2) == -1
    C = torus().chain_complex
    A = GradedRing({0: 0, 1: 0, 2: 0, 3: 0}, {})
    rng = random.Random(3)
    x = BigradedCochain(C, A, 1, 0, [rng.randint(-2, 2) for _ in range(C.rank(1))])
    for t in (1, 2):
        y = BigradedCochain(C, A, 1, t, [rng.randint(-2, 2) for _ in range(C.rank(1))])
        sign = (-1) ** (1 * t)                     # the two cups differ by (-1)^(pt)
        assert graded_cup(x, y).values == tuple(sign * v for v in ungraded_cup(x, y).values)


def test_eta_tables():
    assert eta_commutation(SignFamily.identity(), 4).uniform == "(-1)^(pt)"
    assert eta_commutation(SignFamily.pq(), 4).uniform == "(-1)^(sq)"
    assert len(SignFamily.all()) == 32
    assert strict_families(3) == []


@given(st.lists(st.integers(0, 5), min_size=1, max_size=5), st.randoms())
def test_koszul_sign_matches_pairwise_count(degrees, rnd):
    order = list(range(len(degrees)))
    rnd.shuffle(order)
    inv = sum(1 for a, b in itertools.combinations(range(len(order)), 2)
              if order[a] > order[b] and degrees[order[a]] % 2 and degrees[order[b]] % 2)
    assert koszul_sign(degrees, order) == (-1) ** inv


def test_koszul_examples():
    assert koszul_sign([1, 1], [1, 0]) == -1
    assert koszul_sign([2, 1], [1, 0]) == 1
    assert koszul_sign([1, 0, 1, 1], [0, 2, 1, 3]) == 1
    assert koszul_sign([1, 1, 1, 1], [0, 2, 1, 3]) == -1


def test_reindex_identity_and_transport():
    assert reindex_identity_holds(5)
    # rescaling by (-1)^(pq) turns (-1)^(t(p-q)) into (-1)^(q(t-s))
    assert rescale(SIGN_T_P_MINUS_Q, SignFamily.pq()).agrees(SIGN_Q_T_MINUS_S, 5)
    # (-1)^(t(p+q)) in ahss indexing becomes a sign on engine bidegrees; check it pointwise
    tw = transport_sign(SIGN_T_P_PLUS_Q, "ahss", "engine")
    for f1, c1, f2, c2 in itertools.product(range(-2, 4), repeat=4):
        p1, q1 = INDEXINGS["ahss"].from_engine(f1, c1)
        p2, q2 = INDEXINGS["ahss"].from_engine(f2, c2)
        assert tw(f1, c1, f2, c2) == (-1) ** (q2 * (p1 + q1))
    assert transport_sign(SIGN_SQ, "engine", "engine").agrees(SIGN_SQ, 3)


def test_transported_twist_is_graded_vs_ungraded_discrepancy():
    tw = transport_sign(SIGN_T_P_PLUS_Q, "ahss", "engine")
    eta = eta_commutation(SignFamily.pq(), 4).table
    for key, v in eta.items():
        assert tw(*key) == v


def test_reindex_transform():
    doc = {"indexing": "engine", "pages": [{"r": 2, "entries": [
        {"bidegree": [1, 3], "group": "Z", "d_target": [3, 4]}]}]}
    assert reindex_transform(doc, "engine") == doc
    a = reindex_transform(doc, "ahss")
    assert a["pages"][0]["entries"][0]["bidegree"] == [2, 1]
    assert reindex_transform(a, "engine") == doc
    w = reindex_transform(doc, "whitehead")
    assert w["pages"][0]["entries"][0]["bidegree"] == [2, 3]
    with pytest.raises(ValueError):
        reindex_transform(doc, "serre")


@pytest.mark.parametrize("fam", [SignFamily.identity(), SignFamily.pq()])
def test_eta_rescaled_cups_are_natural_under_simplicial_maps(fam):
    # the eta-rescaled product x . y = eta(p+q, s+t) eta(p,s) eta(q,t) (x graded-cup y) commutes with pullback
    f = torus_projection()
    A = GradedRing({0: 0, 1: 0, 2: 0, 3: 0}, {})
    B, X = f.target.chain_complex, f.source.chain_complex
    rng = random.Random(11)
    nonzero = 0

    def pull(x):
        return BigradedCochain(X, A, x.p, x.q, f.pullback(Cochain(B, x.p, x.values)).values)

    def prod(x, y):
        e = fam(x.p + y.p, x.q + y.q) * fam(x.p, x.q) * fam(y.p, y.q)
        return tuple(e * v for v in graded_cup(x, y).values)

    for p, s, q, t in [(0, 1, 1, 1), (1, 1, 0, 2), (0, 0, 1, 1), (1, 0, 0, 1)]:
        x = BigradedCochain(B, A, p, s, [rng.randint(-3, 3) for _ in range(B.rank(p))])
        y = BigradedCochain(B, A, q, t, [rng.randint(-3, 3) for _ in range(B.rank(q))])
        lhs = f.pullback(Cochain(B, p + q, prod(x, y))).values
        assert lhs == prod(pull(x), pull(y))
        nonzero += any(lhs)
    assert nonzero >= 3
