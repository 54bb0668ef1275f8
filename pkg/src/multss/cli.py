"""Command line: compute pages, compare pairings, run the sign suite, convert indexings."""

from __future__ import annotations

import argparse
import itertools
import random
import sys
from pathlib import Path
from typing import Sequence

from .couple import (bockstein_couple, bockstein_pages, bockstein_pairing, couple_document,
                     mod_cup_pairing)
from .fixtures import circle, rp2, sphere, torus
from .graded import (INDEXINGS, SCHEMA_VERSION, SIGN_Q_T_MINUS_S, SIGN_T_P_MINUS_Q,
                     SIGN_T_P_PLUS_Q, BigradedCochain, GradedRing, SignFamily, eta_commutation,
                     graded_cup, graded_delta, reindex_identity_holds, reindex_transform, rescale,
                     strict_families, strict_family_exists, transport_sign)
from .instances import GroupPage, TowerSpec, ahss_comparison, build_ahss
from .io import SchemaError, atomic_write, dumps, load_json, parse_ring, parse_tower
from .simplicial import Cochain, classical_iso, cup, delta
from .ssengine import (abutment_check, compare_global_iso, discrepancy_signs,
                       e_infinity, leibniz_check, page_pairing, page_record, pages_csv, pages_document)

UNGRADED_TWIST = transport_sign(SIGN_T_P_PLUS_Q, "ahss", "engine")


class Failure(Exception):
    pass


def _page_range(text: str | None) -> tuple[int, int] | None:
    if not text:
        return None
    a, _, b = text.partition("..")
    r1, r2 = int(a), int(b or a)
    if r1 < 1 or r2 < r1:
        raise argparse.ArgumentTypeError("pages are given as r1..r2 with 1 <= r1 <= r2")
    return r1, r2


def _load_spec(path: str, args) -> TowerSpec:
    ring = None
    if args.coeff:
        p = Path(args.coeff)
        ring = parse_ring(load_json(p)) if p.exists() else parse_ring(load_json_text(args.coeff))
    return parse_tower(load_json(path), ring=ring, modulus=args.modulus)


def load_json_text(text: str):
    from .io import _Doc
    return _Doc(text, None, "--coeff")


def _bids(doc_rows, maxdim):
    return [e for e in doc_rows if maxdim is None or e["bidegree"][0] < maxdim]


# ---------------------------------------------------------------------------
# compute


def compute_document(spec: TowerSpec, pages: tuple[int, int] | None) -> dict:
    built = spec.build()
    meta = {"tower": spec.kind}
    if spec.kind == "bockstein":
        bp = bockstein_pages(built)
        hi = pages[1] if pages else bp.limit_index
        lo = pages[0] if pages else 1
        doc = {"schema_version": SCHEMA_VERSION, "kind": "bockstein", "modulus": spec.modulus,
               "name": built.couple.name, "limit_index": bp.limit_index, "pages": []}
        for r in range(lo, hi + 1):
            ents = []
            for key, g in sorted(bp.E(r).items()):
                if g.is_trivial():
                    continue
                d = bp.d(r, key)
                ents.append({"degree": key[0], "rank": g.rank, "torsion": list(g.torsion),
                             "d_matrix": None if d.is_zero() else [[str(x) for x in row] for row in d.matrix.to_rows()]})
            doc["pages"].append({"r": r, "entries": ents})
        doc["couple"] = couple_document(built.couple)
        return doc
    maxdim = None
    if isinstance(built, GroupPage):
        maxdim = built.maxdim
        C = built.complex
        meta["maxdim"] = maxdim
    else:
        C = built
    einf = e_infinity(C)
    lo, hi = pages if pages else (1, einf.limit_index if hasattr(einf, "limit_index") else C.length + 1)
    doc = pages_document(C, range(lo, hi + 1), meta)
    if spec.kind == "descent":
        doc["convention"] = "total differential = cech + (-1)^m delta on column m"
    rec = page_record(einf)
    rec["r"] = "inf"
    doc["e_infinity"] = rec
    doc["limit_index"] = getattr(einf, "limit_index", None)
    rep = abutment_check(C, einf)
    doc["abutment"] = {"ok": rep.ok, "detail": str(rep)}
    if maxdim is not None:
        for pg in doc["pages"] + [doc["e_infinity"]]:
            pg["entries"] = _bids(pg["entries"], maxdim)
    return doc


def _write(out: str | None, name: str, doc: dict, fmt: str) -> Path | None:
    if fmt == "csv" and doc.get("kind") == "pages":
        text, suffix = pages_csv(doc), ".csv"
    else:
        text, suffix = dumps(doc), ".json"
    if out is None:
        sys.stdout.write(text)
        return None
    path = Path(out) / f"{name}{suffix}"
    atomic_write(path, text)
    return path


def cmd_compute(args) -> int:
    status = 0
    for i, inp in enumerate(args.input):
        spec = _load_spec(inp, args)
        doc = compute_document(spec, args.pages)
        name = Path(inp).stem
        p = _write(args.out, f"{name}.pages", doc, args.format)
        if p:
            print(f"wrote {p}")
        if "abutment" in doc and not doc["abutment"]["ok"]:
            print(f"FAIL abutment {name}: {doc['abutment']['detail']}", file=sys.stderr)
            status = 1
    return status


# ---------------------------------------------------------------------------
# pair


def _table_doc(pp) -> list:
    rows = []
    for bx, by in pp.pairs():
        rows.append({"left": list(bx), "right": list(by), "target": list(pp.target(bx, by)),
                     "table": [[list(c) for c in row] for row in pp.table(bx, by)]})
    return rows


def _verdict_doc(name, verdict, expect=True) -> dict:
    d = {"comparison": name, "isomorphic": bool(verdict), "expected": expect}
    if not verdict:
        d["counterexample"] = [str(x) for x in verdict.counterexample or ()]
        d["reason"] = verdict.reason
    return d


def pair_document(spec: TowerSpec, r: int = 2) -> tuple:
    doc = {"schema_version": SCHEMA_VERSION, "kind": "pairing", "tower": spec.kind, "indexing": "engine"}
    verdicts = []
    window = spec.options.get("window")
    if spec.kind in ("ahss", "group"):
        if spec.kind == "ahss":
            cmp_ = ahss_comparison(spec.complex, spec.ring or GradedRing.integers(), window)
        else:
            cmp_ = spec.build().comparison
        pp = cmp_.e2
        verdicts.append(_verdict_doc("E2 vs graded cup, identity family", cmp_.against_graded()))
        verdicts.append(_verdict_doc("E2 vs ungraded cup, family (-1)^(pq), twist (-1)^(t(p+q)) [ahss indexing]",
                                     cmp_.against_ungraded(SignFamily.pq(), UNGRADED_TWIST)))
        disc = discrepancy_signs(pp, cmp_.ungraded, cmp_.maps)
        doc["ungraded_discrepancy"] = [{"left": list(a), "right": list(b), "signs": sorted(s)}
                                       for (a, b), s in sorted(disc.items())]
    elif spec.kind == "bockstein":
        bp = bockstein_pages(spec.build())
        pp = bockstein_pairing(spec.complex, spec.complex, spec.modulus, 1, bp)
        ref = mod_cup_pairing(spec.complex, spec.modulus, bp.chain)
        verdicts.append(_verdict_doc("E1 vs mod-n cup, identity family", compare_global_iso(pp, ref)))
        r = 1
    elif spec.kind == "serre":
        C = spec.build()
        pp = page_pairing(C, C, C, None, r)
    else:
        raise Failure("descent towers carry no product")
    lb = leibniz_check(pp)
    verdicts.append({"comparison": "Leibniz rule", "isomorphic": lb.ok, "expected": True,
                     "checked": lb.checked, "failures": [str(f) for f in lb.failures[:5]]})
    doc["r"] = r
    doc["pairs"] = _table_doc(pp)
    doc["verdicts"] = verdicts
    return doc, pp


def cmd_pair(args) -> int:
    status = 0
    results = []
    if len(args.input) > 2:
        raise Failure("pair takes one or two towers")
    for inp in args.input:
        spec = _load_spec(inp, args)
        doc, pp = pair_document(spec)
        results.append((inp, doc, pp))
    if len(results) == 2:
        (_, da, pa), (_, db, pb) = results
        v = compare_global_iso(pa, pb)
        da["verdicts"].append(_verdict_doc(f"against {Path(args.input[1]).stem}, identity maps", v))
        db["verdicts"].append(_verdict_doc(f"against {Path(args.input[0]).stem}, identity maps", v))
    for inp, doc, _ in results:
        for v in doc["verdicts"]:
            ok = v["isomorphic"] == v["expected"]
            print(f"{'PASS' if ok else 'FAIL'} {Path(inp).stem}: {v['comparison']}"
                  + ("" if ok else f" witness {v.get('counterexample') or v.get('failures')}"))
            status |= not ok
        p = _write(args.out, f"{Path(inp).stem}.pairing", doc, "json")
        if p:
            print(f"wrote {p}")
    return int(status)


# ---------------------------------------------------------------------------
# check: the sign suite


def _random_cochain(K, p, rng, modulus=0):
    vals = [rng.randint(-3, 3) for _ in K.chain_complex.cells.get(p, ())]
    return Cochain(K.chain_complex, p, vals, modulus)


def sign_suite(n: int, seed: int = 0, samples: int = 20) -> list[tuple[str, bool, str]]:
    out = []

    def rec(name, ok, witness=""):
        out.append((name, bool(ok), "" if ok else witness))

    rep = eta_commutation(SignFamily.identity(), n)
    rec("eta(identity) has uniform discrepancy (-1)^(pt)", rep.uniform == "(-1)^(pt)", str(rep.matches))
    rep = eta_commutation(SignFamily.pq(), n)
    rec("eta((-1)^(pq)) has uniform discrepancy (-1)^(sq)", rep.uniform == "(-1)^(sq)", str(rep.matches))
    rec("no quadratic sign family is strict", not strict_families(n))
    rec("no sign function at all is strict", not strict_family_exists(max(n, 1)))
    rec("t(p-q)+pq+st+(p+s)(q+t) = q(t-s) mod 2", reindex_identity_holds(n))
    rec("rescaling (-1)^(t(p-q)) by (-1)^(pq) gives (-1)^(q(t-s))",
        rescale(SIGN_T_P_MINUS_Q, SignFamily.pq()).agrees(SIGN_Q_T_MINUS_S, n))

    C = build_ahss(torus(), GradedRing.integers())
    doc = pages_document(C, [1, 2])
    trips = []
    for a, b in itertools.permutations(INDEXINGS, 2):
        back = reindex_transform(reindex_transform(reindex_transform(doc, a), b), "engine")
        trips.append(dumps(back) == dumps(doc))
    rec("reindex_transform round trips bit-exactly", all(trips))

    try:
        iso = classical_iso(max_degree=max(n, 2))
        rec("classical dga isomorphism is unique", iso.solutions == 1)
    except RuntimeError as exc:
        rec("classical dga isomorphism is unique", False, str(exc))

    rng = random.Random(seed)
    bad = []
    for K in (circle(), sphere(), rp2(), torus()):
        top = K.dimension
        for _ in range(samples):
            p = rng.randint(0, top)
            q = rng.randint(0, top - p)
            a, b = _random_cochain(K, p, rng), _random_cochain(K, q, rng)
            if p + 1 < top + 1 and any(delta(delta(a)).values):
                bad.append((K.name, "dd", p))
            if p + q + 1 <= top:
                lhs = delta(cup(a, b))
                rhs = cup(delta(a), b) + cup(a, delta(b)).scale(-1 if p % 2 else 1)
                if lhs.values != rhs.values:
                    bad.append((K.name, "leibniz", p, q))
    rec("delta^2 = 0 and Leibniz on random cochains", not bad, str(bad[:3]))

    A = GradedRing.exterior(1)
    bad = []
    for K in (circle(), torus()):
        CC = K.chain_complex
        for _ in range(samples):
            p = rng.randint(0, K.dimension)
            s = rng.randint(0, K.dimension - p)
            q, t = rng.choice(A.support()), rng.choice(A.support())
            a = BigradedCochain(CC, A, p, q, tuple(rng.randint(-3, 3) for _ in range(CC.rank(p))))
            b = BigradedCochain(CC, A, s, t, tuple(rng.randint(-3, 3) for _ in range(CC.rank(s))))
            if any(graded_delta(graded_delta(a)).values):
                bad.append((K.name, "dd", p, q))
            if p + s + 1 <= K.dimension:
                lhs = graded_delta(graded_cup(a, b))
                sg = -1 if (p - q) % 2 else 1
                r1, r2 = graded_cup(graded_delta(a), b), graded_cup(a, graded_delta(b))
                rhs = tuple(A.reduce(q + t, x + sg * y) for x, y in zip(r1.values, r2.values))
                if tuple(A.reduce(q + t, x) for x in lhs.values) != rhs:
                    bad.append((K.name, "graded leibniz", p, q, s, t))
    rec("graded delta^2 = 0 and graded Leibniz on random cochains", not bad, str(bad[:3]))

    pp = page_pairing(C, C, C, None, 2)
    lb = leibniz_check(pp)
    rec("Leibniz on the torus AHSS E_2 pairing", lb.ok, str(lb.failures[:3]))
    bp = bockstein_pages(bockstein_couple(rp2(), 2))
    lb = leibniz_check(bockstein_pairing(rp2(), rp2(), 2, 1, bp))
    rec("Leibniz on the RP2 mod-2 Bockstein E_1 pairing", lb.ok, str(lb.failures[:3]))
    return out


def cmd_check(args) -> int:
    results = sign_suite(args.range, args.seed)
    for name, ok, witness in results:
        print(f"{'PASS' if ok else 'FAIL'} {name}" + (f": {witness}" if witness else ""))
    failed = sum(not ok for _, ok, _ in results)
    print(f"{len(results) - failed}/{len(results)} assertions hold")
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# convert


def cmd_convert(args) -> int:
    for inp in args.input:
        doc = load_json(inp).data
        if not isinstance(doc, dict) or doc.get("kind") not in ("pages", "pairing"):
            raise SchemaError("not a page document", "$.kind", None, inp)
        out = reindex_transform(doc, args.to)
        p = _write(args.out, f"{Path(inp).stem}.{args.to}", out, args.format)
        if p:
            print(f"wrote {p}")
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="multss", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, inputs=True):
        if inputs:
            p.add_argument("--input", action="append", required=True, help="tower or page JSON file")
        p.add_argument("--out", help="output directory (default: stdout)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("compute", help="pages of a tower")
    common(p)
    p.add_argument("--coeff", help="graded ring JSON file or shorthand Z, Z/m")
    p.add_argument("--modulus", type=int)
    p.add_argument("--pages", type=_page_range, help="r1..r2")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("pair", help="pairings and isomorphism verdicts")
    common(p)
    p.add_argument("--coeff")
    p.add_argument("--modulus", type=int)
    p.set_defaults(func=cmd_pair)

    p = sub.add_parser("check", help="sign-convention suite")
    common(p, inputs=False)
    p.add_argument("--range", type=int, default=4)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("convert", help="reindex page files")
    common(p)
    p.add_argument("--to", choices=sorted(INDEXINGS), default="ahss")
    p.set_defaults(func=cmd_convert)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except (Failure, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
