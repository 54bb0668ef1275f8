"""Acceptance criteria 1-10; the terminal summary prints one PASS/FAIL line per criterion."""

from __future__ import annotations

import functools
import itertools
import json
import random

import pytest

from conftest import ACCEPTANCE
from oracle import betti, brute_pages, cohomology_invariants
from multss import (BigradedCochain, Cochain, CoverData, GradedRing, Page, SignFamily, abutment_check,
                    bockstein_couple, bockstein_pages, bockstein_pairing, build_ahss, build_descent,
                    build_group_page, build_serre, compare_global_iso, compare_product_filtrations, cup,
                    cyclic_group, delta, discrepancy_signs, eta_commutation, graded_cup,
                    graded_delta, mod_cup_pairing, nerve, pages_document, reindex_transform,
                    strict_families, strict_family_exists, ungraded_cup)
from multss.fixtures import (FIXTURES, circle, cone_on_circle, klein_bottle, klein_projection, rp2, rp3,
                             simplex, sphere, torus, torus_projection)
from multss.graded import INDEXINGS, SIGN_T_P_PLUS_Q, transport_sign
from multss.instances import ahss_comparison, product_filtrations
from multss.io import dumps
from multss.simplicial import SimplicialMap


def criterion(k: int, title: str):
    def deco(fn):
        @functools.wraps(fn)
        def run(*a, **kw):
            try:
                fn(*a, **kw)
            except BaseException:
                ACCEPTANCE[k] = (title, False)
                raise
            ACCEPTANCE[k] = (title, True)
        return run
    return deco


def _dense(C, p):
    """Coboundary C^p -> C^(p+1) of an IntChainComplex as dense rows."""
    if C.rank(p) == 0:
        return None
    if C.rank(p + 1) == 0:
        return [[0] * C.rank(p)]
    return C.boundary_matrix(p + 1).T.to_rows()


def _integral_cohomology(K, modulus=0):
    C = K.chain_complex
    ds = {p: _dense(C, p) for p in range(-1, K.dimension + 2)}
    return [cohomology_invariants(ds, p, modulus) for p in range(K.dimension + 1)]


CORPUS = [circle, sphere, rp2, torus, klein_bottle, cone_on_circle, lambda: simplex(3), rp3]


@criterion(1, "cochain sign conventions on 200 random cochains")
def test_criterion_1_sign_conventions():
    rng = random.Random(20261016)
    A = GradedRing.exterior(1)
    checked = 0
    while checked < 200:
        K = rng.choice(CORPUS)()
        C = K.chain_complex
        m = rng.choice([0, 0, 2, 3])
        p = rng.randint(0, K.dimension)
        s = rng.randint(0, K.dimension - p)
        a = Cochain(C, p, [rng.randint(-4, 4) for _ in range(C.rank(p))], m)
        b = Cochain(C, s, [rng.randint(-4, 4) for _ in range(C.rank(s))], m)
        assert delta(delta(a)).is_zero()
        if p + s < K.dimension:
            lhs = delta(cup(a, b))
            rhs = cup(delta(a), b) + cup(a, delta(b)).scale((-1) ** p)
            assert lhs.values == rhs.values
        q, t = rng.choice([0, 1]), rng.choice([0, 1])
        x = BigradedCochain(C, A, p, q, a.values if not m else [rng.randint(-4, 4) for _ in range(C.rank(p))])
        y = BigradedCochain(C, A, s, t, b.values if not m else [rng.randint(-4, 4) for _ in range(C.rank(s))])
        assert graded_delta(graded_delta(x)).is_zero()
        if p + s < K.dimension:
            lhs = graded_delta(graded_cup(x, y))
            r1, r2 = graded_cup(graded_delta(x), y), graded_cup(x, graded_delta(y))
            expect = tuple(A.reduce(q + t, u + (-1) ** (p - q) * v) for u, v in zip(r1.values, r2.values))
            assert lhs.values == expect
        checked += 1


@criterion(2, "eta discrepancies and no strict family on [0,6]^4")
def test_criterion_2_eta():
    ident = eta_commutation(SignFamily.identity(), 6)
    pq = eta_commutation(SignFamily.pq(), 6)
    # independent check of the tables: the sign is read off the formulas in closed form
    for (p, q, s, t), v in ident.table.items():
        assert v == (-1) ** (p * t)
    for (p, q, s, t), v in pq.table.items():
        assert v == (-1) ** (s * q)
    assert ident.uniform == "(-1)^(pt)"
    assert pq.uniform == "(-1)^(sq)"
    assert strict_families(6) == []
    assert not strict_family_exists(6)
    # the identity-family discrepancy is what actual cochains show
    C, A = torus().chain_complex, GradedRing.exterior(1)
    rng = random.Random(2)
    for p, q, s, t in [(1, 0, 1, 1), (1, 1, 1, 1), (0, 1, 1, 1), (1, 1, 1, 0)]:
        x = BigradedCochain(C, A, p, q, [rng.randint(-3, 3) for _ in range(C.rank(p))])
        y = BigradedCochain(C, A, s, t, [rng.randint(-3, 3) for _ in range(C.rank(s))])
        g, u = graded_cup(x, y), ungraded_cup(x, y)
        sign = (-1) ** (p * t)        # (s - t) p + p s = p t mod 2
        assert g.values == tuple(A.reduce(q + t, sign * v) for v in u.values)


@criterion(3, "reindexing identity on [0,5]^4 and bit-exact page round trips")
def test_criterion_3_reindex():
    for p, q, s, t in itertools.product(range(6), repeat=4):
        assert (t * (p - q) + p * q + s * t + (p + s) * (q + t)) % 2 == (q * (t - s)) % 2
    C = build_ahss(torus(), GradedRing.exterior(1))
    doc = json.loads(dumps(pages_document(C, [1, 2, 3])))
    text = dumps(doc)
    for a in INDEXINGS:
        for b in INDEXINGS:
            there = reindex_transform(doc, a)
            back = reindex_transform(reindex_transform(json.loads(dumps(there)), b), "engine")
            assert dumps(back) == text


@pytest.fixture(scope="module")
def torus_z():
    return ahss_comparison(torus(), GradedRing.integers())


@pytest.fixture(scope="module")
def torus_ext():
    return ahss_comparison(torus(), GradedRing.exterior(1))


@criterion(4, "torus AHSS E_2 ring vs graded and ungraded cup products")
def test_criterion_4_torus_ahss(torus_z, torus_ext):
    twist = transport_sign(SIGN_T_P_PLUS_Q, "ahss", "engine")
    H = _integral_cohomology(torus())
    for cmp_ in (torus_z, torus_ext):
        tab = cmp_.e2.XY.table()
        for (f, c), g in tab.items():
            assert (g.rank, list(g.torsion)) == H[f]
        assert compare_global_iso(cmp_.e2, cmp_.graded, SignFamily.identity(), cmp_.maps)
        assert compare_global_iso(cmp_.e2, cmp_.ungraded, SignFamily.pq(), cmp_.maps, twist)
    # Z in degree 0: the twist is trivial and the ungraded product already agrees
    assert compare_global_iso(torus_z.e2, torus_z.ungraded, SignFamily.identity(), torus_z.maps)
    # with an odd-degree coefficient the twist is visible and necessary
    assert not compare_global_iso(torus_ext.e2, torus_ext.ungraded, SignFamily.pq(), torus_ext.maps)
    disc = discrepancy_signs(torus_ext.e2, torus_ext.ungraded, torus_ext.maps, SignFamily.pq())
    for (bx, by), signs in disc.items():
        assert signs == {twist(*bx, *by)}
    assert {-1} in disc.values()


def _free_rank(K):
    C = K.chain_complex
    ds = {p: _dense(C, p) for p in range(-1, K.dimension + 2)}
    return [betti(ds, p) for p in range(K.dimension + 1)]


@criterion(5, "Bockstein spectral sequence: RP3 pages, free part, E_1 = mod-p cup")
def test_criterion_5_bockstein():
    bp2 = bockstein_pages(bockstein_couple(rp3(), 2))
    assert bp2.ranks(1, 3) == (1, 1, 1, 1)
    assert bp2.ranks(2, 3) == (1, 0, 0, 1)
    assert bp2.limit_index == 2 and bp2.ranks(bp2.limit_index, 3) == (1, 0, 0, 1)
    bp3 = bockstein_pages(bockstein_couple(rp3(), 3))
    assert bp3.limit_index == 1 and bp3.ranks(1, 3) == (1, 0, 0, 1)
    for name, make in FIXTURES.items():
        K = make()
        free = _free_rank(K)
        for p in (2, 3):
            bp = bp3 if (K is rp3() and p == 3) else bp2 if (K is rp3()) else bockstein_pages(bockstein_couple(K, p))
            assert bp.ranks(bp.limit_index, K.dimension) == tuple(free), (name, p)
            for key, g in bp.stable.items():
                assert g.rank == 0 and all(x == p for x in g.torsion)
    for K, p, bp in [(rp3(), 2, bp2), (rp2(), 2, None), (torus(), 3, None)]:
        bp = bp or bockstein_pages(bockstein_couple(K, p))
        e1 = bockstein_pairing(K, K, p, 1, bp)
        assert compare_global_iso(e1, mod_cup_pairing(K, p, bp.chain), SignFamily.identity())


@criterion(6, "product vs skeletal filtration: E_1 differ, E_2 isomorphic")
def test_criterion_6_product_filtration():
    for Kx, Ky in [(simplex(1), simplex(1)), (circle(), circle())]:
        v = compare_product_filtrations(Kx, Ky)
        assert v.e1_differ
        assert v.e2_isomorphic
        assert {b: g for b, g in v.e2_product.items() if not g.is_trivial()} == \
               {b: g for b, g in v.e2_skeletal.items() if not g.is_trivial()}
    _, prod_f, skel = product_filtrations(simplex(1), simplex(1))
    for C in (prod_f, skel):
        O = brute_pages(C)
        for r in (1, 2):
            for (f, c), g in Page(C, r).all_entries.items():
                assert (g.group.rank, list(g.group.torsion)) == O.entry(r, f, f - c)


def _towers():
    Z, Z2, E1 = GradedRing.integers(), GradedRing.mod(2), GradedRing.exterior(1)
    for name, make in FIXTURES.items():
        K = make()
        for A in (Z, Z2, E1):
            if A is E1 and K.f_vector()[0] > 10:
                continue
            yield f"ahss {name} {A.name}", build_ahss(K, A)
        ident = SimplicialMap(K, K, range(len(K.vertices)))
        yield f"serre id {name}", build_serre(ident)
        yield f"descent whole {name}", build_descent(CoverData(K, [K]))
    yield "ahss S2 laurent", build_ahss(sphere(), GradedRing.laurent(2), range(-4, 3))
    yield "serre torus", build_serre(torus_projection())
    yield "serre torus mod 2", build_serre(torus_projection(), 2)
    yield "serre klein mod 2", build_serre(klein_projection(), 2)
    yield "descent S1 arcs", build_descent(CoverData.from_facets(circle(), [[(0, 1), (1, 2)], [(0, 2)]]))
    yield "descent S2 disks", build_descent(
        CoverData.from_facets(sphere(), [[(0, 1, 2), (0, 1, 3), (0, 2, 3)], [(1, 2, 3)]]))
    yield "group Z/2", build_group_page(cyclic_group(2), GradedRing.integers(), 5).complex
    yield "group Z/3", build_group_page(cyclic_group(3), GradedRing.exterior(1, 3), 4).complex
    for Kx, Ky in [(simplex(1), simplex(1)), (circle(), circle())]:
        _, a, b = product_filtrations(Kx, Ky)
        yield f"product {Kx.name}x{Ky.name}", a
        yield f"skeletal {Kx.name}x{Ky.name}", b


@criterion(7, "every generated tower converges (abutment check)")
def test_criterion_7_convergence():
    failures = []
    count = 0
    for name, C in _towers():
        rep = abutment_check(C)
        count += 1
        if not rep.ok:
            failures.append((name, rep.mismatches))
    assert count > 40
    assert not failures, failures


@criterion(8, "group cohomology page of Z/2 and the (-1)^(t(p+q)) pairing sign")
def test_criterion_8_group_page():
    G = build_group_page(cyclic_group(2), GradedRing.integers(), 5)
    tab = G.table()
    got = [tab.get((q, 0)) for q in range(5)]
    assert [str(g) if g is not None else "0" for g in got] == ["Z", "0", "Z/2", "0", "Z/2"]
    B = nerve(cyclic_group(2), 5)
    ds = {p: _dense(B, p) for p in range(-1, 6)}
    for q in range(5):
        g = tab.get((q, 0))
        assert ((g.rank, list(g.torsion)) if g is not None else (0, [])) == cohomology_invariants(ds, q)
    twist = transport_sign(SIGN_T_P_PLUS_Q, "ahss", "engine")
    for page in (G, build_group_page(cyclic_group(3), GradedRing.exterior(1, 3), 4)):
        c = page.comparison
        assert compare_global_iso(c.e2, c.graded, SignFamily.identity(), c.maps)
        assert compare_global_iso(c.e2, c.ungraded, SignFamily.pq(), c.maps, twist)
        for (bx, by), signs in discrepancy_signs(c.e2, c.ungraded, c.maps, SignFamily.pq()).items():
            assert signs == {twist(*bx, *by)}
    c = build_group_page(cyclic_group(3), GradedRing.exterior(1, 3), 4).comparison
    assert not compare_global_iso(c.e2, c.ungraded, SignFamily.pq(), c.maps)


@criterion(9, "descent: two arcs on S1, two disks on S2")
def test_criterion_9_descent():
    D = build_descent(CoverData.from_facets(circle(), [[(0, 1), (1, 2)], [(0, 2)]]))
    assert D.acyclic_pieces()
    E2 = Page(D, 2)
    assert all(c == 0 for f, c in E2.bidegrees())
    H = _integral_cohomology(circle())
    assert [(E2.group((n, 0)).rank, list(E2.group((n, 0)).torsion)) for n in range(2)] == H
    assert abutment_check(D).ok

    D = build_descent(CoverData.from_facets(sphere(), [[(0, 1, 2), (0, 1, 3), (0, 2, 3)], [(1, 2, 3)]]))
    assert not D.acyclic_pieces()
    rep = abutment_check(D)
    assert rep.ok
    assert [(rep.degrees[n]["H"].rank, list(rep.degrees[n]["H"].torsion)) for n in range(3)] == \
        _integral_cohomology(sphere())
    P1 = Page(D, 1)
    assert any(not P1.differential(b)[1].is_zero() for b in P1.bidegrees())
    assert str(Page(D, 2).group((1, -1))) == "Z"          # H^2 from H^1 of the intersection circle


def _small_towers():
    for name, C in _towers():
        if len(C.degrees) <= 30 and len(set(C.moduli)) <= 1:
            yield name, C


@criterion(10, "page entries of complexes with <= 30 cells match brute force")
def test_criterion_10_oracle():
    seen = 0
    for name, C in _small_towers():
        O = brute_pages(C)
        for r in range(1, C.length + 2):
            P = Page(C, r)
            for n in sorted(set(C.degrees)):
                for f in range(C.min_filtration, C.max_filtration + 1):
                    g = P.group((f, f - n))
                    assert (g.rank, list(g.torsion)) == O.entry(r, f, n), (name, r, f, n)
                    seen += 1
    assert seen > 500
