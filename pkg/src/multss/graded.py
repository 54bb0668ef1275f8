"""Graded coefficient rings, bigraded cochains and the sign-family calculus.

A bigraded cochain of bidegree (p, q) takes values in A_q on p-cells; its
total degree is p - q.  The coboundary and cup product are

    (delta a)(c)   = -(-1)^(p-q) a(dc)
    (a cup b)(c)   = (-1)^((s-t)p) a(front_p c) * b(back_s c)

for a of bidegree (p, q) and b of bidegree (s, t).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

from .exactlin import FGAbelianGroup
from .simplicial import IntChainComplex, cup_sign

# ---------------------------------------------------------------------------
# graded rings


class InvalidGradedRing(ValueError):
    pass


@dataclass(frozen=True)
class Periodicity:
    degree: int
    unit: bool = True


def _level_from_str(s) -> int | None:
    """'0' -> None, 'Z' -> 0, 'Z/m' -> m (the modulus)."""
    s = str(s).strip().replace(" ", "")
    if s == "0":
        return None
    if s == "Z":
        return 0
    if s.startswith("Z/"):
        m = int(s[2:])
        if m < 2:
            raise InvalidGradedRing(f"bad level {s!r}")
        return m
    raise InvalidGradedRing(f"unknown level {s!r}; expected '0', 'Z' or 'Z/m'")


def _level_to_str(m: int | None) -> str:
    if m is None:
        return "0"
    return "Z" if m == 0 else f"Z/{m}"


class GradedRing:
    """Coefficient ring A_* with each level 0, Z or Z/m and one generator per level.

    The product of the level generators g_q * g_t equals constant(q, t) * g_{q+t}.
    Unlisted constants default to 1.  With a periodicity of degree d, levels
    and constants are read modulo the period: level(q) = level(q mod d).
    """

    def __init__(self, levels: Mapping[int, int | None], pairing: Mapping[tuple, int] | None = None,
                 period: Periodicity | None = None, name: str = ""):
        self._levels = {int(q): m for q, m in levels.items()}
        self._pairing = {(int(q), int(t)): int(c) for (q, t), c in (pairing or {}).items()}
        self.period = period
        self.name = name
        if period is not None:
            d = period.degree
            if d <= 0:
                raise InvalidGradedRing("period degree must be positive")
            if any(not (0 <= q < d) for q in self._levels):
                raise InvalidGradedRing("a periodic ring lists one fundamental period 0..d-1")
        self.validate()

    # -- levels ---------------------------------------------------------
    def modulus(self, q: int) -> int | None:
        """0 for Z, m for Z/m, None for the zero group."""
        if self.period is not None:
            q = q % self.period.degree
        return self._levels.get(q)

    def level(self, q: int) -> FGAbelianGroup:
        m = self.modulus(q)
        if m is None:
            return FGAbelianGroup(0, ())
        return FGAbelianGroup(1, ()) if m == 0 else FGAbelianGroup(0, (m,))

    def is_zero(self, q: int) -> bool:
        return self.modulus(q) is None

    def support(self, window: Iterable[int] | None = None) -> list[int]:
        if window is None:
            if self.period is not None:
                raise ValueError("a periodic ring needs an explicit degree window")
            return sorted(q for q, m in self._levels.items() if m is not None)
        return [q for q in window if not self.is_zero(q)]

    def constant(self, q: int, t: int) -> int:
        if self.is_zero(q) or self.is_zero(t) or self.is_zero(q + t):
            return 0
        if self.period is not None:
            d = self.period.degree
            # monomial ring: constants depend only on residues and on nothing else
            return self._pairing.get((q % d, t % d), 1)
        return self._pairing.get((q, t), 1)

    def reduce(self, q: int, x: int) -> int:
        m = self.modulus(q)
        if m is None:
            return 0
        return x % m if m else x

    def multiply(self, q: int, x: int, t: int, y: int) -> int:
        return self.reduce(q + t, self.constant(q, t) * x * y)

    # -- checks ---------------------------------------------------------
    def _check_degrees(self) -> list[int]:
        if self.period is not None:
            d = self.period.degree
            return list(range(-2 * d, 2 * d + 1))
        sup = self.support()
        if not sup:
            return [0]
        lo, hi = min(sup), max(sup)
        return list(range(min(lo, 0) - 1, max(hi, 0) + 2))

    def validate(self) -> None:
        degs = self._check_degrees()
        if self.is_zero(0):
            raise InvalidGradedRing("no unit: level 0 is zero")
        for q in degs:
            if self.is_zero(q):
                continue
            if self.reduce(q, self.constant(0, q) - 1) or self.reduce(q, self.constant(q, 0) - 1):
                raise InvalidGradedRing(f"generator of degree 0 is not a unit on level {q}")
        for q, t in itertools.product(degs, repeat=2):
            # well defined on torsion levels: m_q * g_q * g_t must vanish
            for a, b in ((q, t), (t, q)):
                m = self.modulus(a)
                if m and not self.is_zero(q + t) and self.reduce(q + t, m * self.constant(q, t)):
                    raise InvalidGradedRing(f"pairing {q}x{t} does not respect the order of level {a}")
        for q, t, u in itertools.product(degs, repeat=3):
            if self.is_zero(q + t + u):
                continue
            lhs = self.constant(q, t) * self.constant(q + t, u)
            rhs = self.constant(t, u) * self.constant(q, t + u)
            if self.reduce(q + t + u, lhs - rhs):
                raise InvalidGradedRing(f"pairing is not associative at {(q, t, u)}")
        if self.period is not None:
            d = self.period.degree
            if self.is_zero(d):
                raise InvalidGradedRing("periodicity generator has zero level")
            for q in degs:
                if self.modulus(q) != self.modulus(q + d):
                    raise InvalidGradedRing("periodicity does not preserve levels")
                m = self.modulus(q)
                if m is None:
                    continue
                c = self.constant(d, q)
                unit = c in (1, -1) if m == 0 else _gcd(c, m) == 1
                if not unit:
                    raise InvalidGradedRing(f"multiplication by the periodicity generator is not onto level {q + d}")

    # -- JSON -----------------------------------------------------------
    def to_json(self) -> dict:
        out = {"levels": {str(q): _level_to_str(m) for q, m in sorted(self._levels.items())},
               "pairing": [{"q": q, "t": t, "constant": c} for (q, t), c in sorted(self._pairing.items())]}
        if self.period is not None:
            out["period"] = {"degree": self.period.degree, "unit": self.period.unit}
        return out

    @classmethod
    def from_json(cls, doc: Mapping, name: str = "") -> "GradedRing":
        if "levels" not in doc:
            raise InvalidGradedRing("graded ring needs a 'levels' table")
        levels = {int(q): _level_from_str(v) for q, v in doc["levels"].items()}
        pairing = {(int(e["q"]), int(e["t"])): int(e["constant"]) for e in doc.get("pairing", [])}
        period = None
        if doc.get("period"):
            period = Periodicity(int(doc["period"]["degree"]), bool(doc["period"].get("unit", True)))
        return cls(levels, pairing, period, name=name)

    # -- common rings ---------------------------------------------------
    @classmethod
    def integers(cls) -> "GradedRing":
        return cls({0: 0}, name="Z")

    @classmethod
    def mod(cls, m: int) -> "GradedRing":
        return cls({0: m}, name=f"Z/{m}")

    @classmethod
    def laurent(cls, degree: int = 2, modulus: int = 0) -> "GradedRing":
        """Z[b, 1/b] (or Z/m[b, 1/b]) with |b| = degree."""
        levels = {q: (modulus if q == 0 else None) for q in range(degree)}
        return cls(levels, period=Periodicity(degree), name=f"Z[b,1/b],|b|={degree}")

    @classmethod
    def exterior(cls, degree: int = 1, modulus: int = 0) -> "GradedRing":
        """Z[u]/(u^2) (or with Z/m levels) with |u| = degree."""
        return cls({0: modulus, degree: modulus}, {(degree, degree): 0}, name=f"Z[u]/u^2,|u|={degree}")

    def __repr__(self):
        return f"GradedRing({self.name or self.to_json()['levels']})"

    def __eq__(self, other):
        return (isinstance(other, GradedRing) and self._levels == other._levels
                and self.period == other.period
                and all(self.constant(q, t) == other.constant(q, t)
                        for q, t in itertools.product(self._check_degrees(), repeat=2)))

    __hash__ = None


def _gcd(a: int, b: int) -> int:
    from math import gcd
    return gcd(a, b)


# ---------------------------------------------------------------------------
# bigraded cochains


def graded_delta_sign(p: int, q: int) -> int:
    """Sign in front of a(dc) for a of bidegree (p, q)."""
    return -1 if (p - q) % 2 == 0 else 1


def graded_cup_sign(p: int, q: int, s: int, t: int) -> int:
    return -1 if ((s - t) * p) % 2 else 1


@dataclass(frozen=True)
class BigradedCochain:
    """Element of C^{p,q} = Hom(C_p, A_q): one value per p-cell."""

    complex: IntChainComplex
    ring: GradedRing
    p: int
    q: int
    values: tuple

    def __post_init__(self):
        n = self.complex.rank(self.p)
        if len(self.values) != n:
            raise ValueError(f"expected {n} values, got {len(self.values)}")
        object.__setattr__(self, "values", tuple(self.ring.reduce(self.q, int(v)) for v in self.values))

    @property
    def total_degree(self) -> int:
        return self.p - self.q

    @property
    def bidegree(self) -> tuple:
        return (self.p, self.q)

    def __add__(self, other: "BigradedCochain") -> "BigradedCochain":
        if (other.complex, other.p, other.q) != (self.complex, self.p, self.q):
            raise ValueError("cochains of different bidegree")
        return BigradedCochain(self.complex, self.ring, self.p, self.q,
                               tuple(a + b for a, b in zip(self.values, other.values)))

    def scale(self, k: int) -> "BigradedCochain":
        return BigradedCochain(self.complex, self.ring, self.p, self.q, tuple(k * a for a in self.values))

    def is_zero(self) -> bool:
        return not any(self.values)

    @classmethod
    def zero(cls, C: IntChainComplex, A: GradedRing, p: int, q: int) -> "BigradedCochain":
        return cls(C, A, p, q, (0,) * C.rank(p))


def graded_delta(alpha: BigradedCochain) -> BigradedCochain:
    C = alpha.complex
    d = C.boundary_matrix(alpha.p + 1)
    vals = d.T.apply(alpha.values) if d.cols else ()
    s = graded_delta_sign(alpha.p, alpha.q)
    return BigradedCochain(C, alpha.ring, alpha.p + 1, alpha.q, tuple(s * v for v in vals))


def graded_cup(alpha: BigradedCochain, beta: BigradedCochain) -> BigradedCochain:
    C = alpha.complex
    if beta.complex is not C:
        raise ValueError("graded cup needs cochains on the same complex")
    A = alpha.ring
    p, q, s, t = alpha.p, alpha.q, beta.p, beta.q
    k = graded_cup_sign(p, q, s, t) * A.constant(q, t)
    out = [0] * C.rank(p + s)
    if k:
        av, bv = alpha.values, beta.values
        for (fi, bi), c in C.joins(p, s).items():
            if av[fi] and bv[bi]:
                out[c] += k * av[fi] * bv[bi]
    return BigradedCochain(C, A, p + s, q + t, tuple(out))


def ungraded_cup(alpha: BigradedCochain, beta: BigradedCochain) -> BigradedCochain:
    """Cup product of C^p(X;A_q) x C^s(X;A_t) with the ordinary (-1)^(ps) sign."""
    C = alpha.complex
    A = alpha.ring
    p, q, s, t = alpha.p, alpha.q, beta.p, beta.q
    k = cup_sign(p, s) * A.constant(q, t)
    out = [0] * C.rank(p + s)
    if k:
        for (fi, bi), c in C.joins(p, s).items():
            out[c] += k * alpha.values[fi] * beta.values[bi]
    return BigradedCochain(C, A, p + s, q + t, tuple(out))


# ---------------------------------------------------------------------------
# sign families


@dataclass(frozen=True)
class SignFamily:
    """epsilon(p, q) = (-1)^(a p^2 + b pq + c q^2 + d p + e q)."""

    a: int = 0
    b: int = 0
    c: int = 0
    d: int = 0
    e: int = 0

    def exponent(self, p: int, q: int) -> int:
        return (self.a * p * p + self.b * p * q + self.c * q * q + self.d * p + self.e * q) % 2

    def __call__(self, p: int, q: int) -> int:
        return -1 if self.exponent(p, q) else 1

    @property
    def coefficients(self) -> tuple:
        return (self.a % 2, self.b % 2, self.c % 2, self.d % 2, self.e % 2)

    def reduced(self) -> tuple:
        """(b, d + a, e + c) mod 2: p^2 = p on integers mod 2."""
        return (self.b % 2, (self.d + self.a) % 2, (self.e + self.c) % 2)

    @classmethod
    def identity(cls) -> "SignFamily":
        return cls()

    @classmethod
    def pq(cls) -> "SignFamily":
        return cls(b=1)

    @classmethod
    def all(cls) -> list["SignFamily"]:
        return [cls(*bits) for bits in itertools.product((0, 1), repeat=5)]

    def __str__(self):
        terms = [n for n, k in zip(("p^2", "pq", "q^2", "p", "q"), self.coefficients) if k]
        return "(-1)^(" + " + ".join(terms) + ")" if terms else "1"


@dataclass(frozen=True)
class PairingSign:
    """A sign (-1)^e(p, q, s, t) attached to pairs of bidegrees (p, q), (s, t)."""

    exponent: Callable[[int, int, int, int], int]
    name: str = ""

    def __call__(self, p, q, s, t) -> int:
        return -1 if self.exponent(p, q, s, t) % 2 else 1

    def agrees(self, other: "PairingSign", rng: int) -> bool:
        return all(self(*x) == other(*x) for x in itertools.product(range(rng + 1), repeat=4))

    def times(self, other: "PairingSign") -> "PairingSign":
        return PairingSign(lambda p, q, s, t: self.exponent(p, q, s, t) + other.exponent(p, q, s, t),
                           f"{self.name}*{other.name}")

    def __repr__(self):
        return f"PairingSign({self.name or '?'})"


ONE = PairingSign(lambda p, q, s, t: 0, "1")
SIGN_SQ = PairingSign(lambda p, q, s, t: s * q, "(-1)^(sq)")
SIGN_PT = PairingSign(lambda p, q, s, t: p * t, "(-1)^(pt)")
SIGN_T_P_PLUS_Q = PairingSign(lambda p, q, s, t: t * (p + q), "(-1)^(t(p+q))")
SIGN_T_P_MINUS_Q = PairingSign(lambda p, q, s, t: t * (p - q), "(-1)^(t(p-q))")
SIGN_Q_T_MINUS_S = PairingSign(lambda p, q, s, t: q * (t - s), "(-1)^(q(t-s))")


def family_coboundary(family) -> PairingSign:
    """The sign eps(p,q) eps(s,t) eps(p+s,q+t) by which rescaling with eps changes a pairing."""
    def e(p, q, s, t):
        return ((family(p, q) * family(s, t) * family(p + s, q + t)) < 0)
    return PairingSign(lambda p, q, s, t: int(e(p, q, s, t)), f"d{family}")


@dataclass(frozen=True)
class EtaReport:
    family: SignFamily
    range: int
    table: dict          # (p, q, s, t) -> +1/-1
    matches: tuple       # names of the uniform signs the table equals

    @property
    def uniform(self) -> str | None:
        return self.matches[0] if self.matches else None


def eta_commutation(family: SignFamily, rng: int) -> EtaReport:
    """Sign by which eta = family intertwines graded and ungraded cup products.

    For a of bidegree (p,q), b of bidegree (s,t):
        eta(a cup_grd b) = sign * eta(a) cup eta(b),
    computed from the two cup-sign functions used by the cochain code.
    """
    table = {}
    for p, q, s, t in itertools.product(range(rng + 1), repeat=4):
        lhs = family(p + s, q + t) * graded_cup_sign(p, q, s, t)
        rhs = family(p, q) * family(s, t) * cup_sign(p, s)
        table[(p, q, s, t)] = lhs * rhs
    candidates = [("+1", ONE), ("(-1)^(sq)", SIGN_SQ), ("(-1)^(pt)", SIGN_PT)]
    matches = tuple(n for n, sg in candidates if all(sg(*k) == v for k, v in table.items()))
    return EtaReport(family, rng, table, matches)


def strict_families(rng: int) -> list[SignFamily]:
    """All quadratic families for which the comparison squares commute on the nose."""
    return [f for f in SignFamily.all() if eta_commutation(f, rng).uniform == "+1"]


def strict_family_exists(rng: int) -> bool:
    """Whether ANY function eps on [0, 2 rng]^2 makes the squares commute on the nose.

    Solves the mod-2 linear system e(p,q) + e(s,t) + e(p+s,q+t) = pt by
    Gaussian elimination over GF(2); not restricted to quadratic families.
    """
    side = 2 * rng + 1
    idx = {(p, q): p * side + q for p in range(side) for q in range(side)}
    rows = []
    for p, q, s, t in itertools.product(range(rng + 1), repeat=4):
        mask = 0
        for key in ((p, q), (s, t), (p + s, q + t)):
            mask ^= 1 << idx[key]
        rhs = (p * t) % 2
        rows.append((mask, rhs))
    pivots: dict[int, tuple[int, int]] = {}
    for mask, rhs in rows:
        while mask:
            hb = mask.bit_length() - 1
            if hb not in pivots:
                pivots[hb] = (mask, rhs)
                break
            pm, pr = pivots[hb]
            mask ^= pm
            rhs ^= pr
        else:
            if rhs:
                return False
    return True


def koszul_sign(degrees: Sequence[int], order: Sequence[int]) -> int:
    """Sign of reordering symbols of the given degrees into `order` (a permutation)."""
    sign = 1
    for a in range(len(order)):
        for b in range(a + 1, len(order)):
            if order[a] > order[b] and (degrees[order[a]] * degrees[order[b]]) % 2:
                sign = -sign
    return sign


# ---------------------------------------------------------------------------
# indexing dictionaries


@dataclass(frozen=True)
class Indexing:
    """An invertible linear change of bigrading to engine (f, c) coordinates."""

    name: str
    to_engine: Callable[[int, int], tuple]
    from_engine: Callable[[int, int], tuple]


INDEXINGS = {
    "engine": Indexing("engine", lambda f, c: (f, c), lambda f, c: (f, c)),
    # homotopy-style (p, q): E^{p,q} houses C^{q, p+q}
    "ahss": Indexing("ahss", lambda p, q: (q, p + q), lambda f, c: (c - f, f)),
    # Postnikov/Whitehead style (p, q): E^{p,q} houses C^{q-p, q}
    "whitehead": Indexing("whitehead", lambda p, q: (q - p, q), lambda f, c: (c - f, c)),
}


def transport_sign(sign: PairingSign, source: str, target: str) -> PairingSign:
    """Re-express a pairing sign written in `source` indexing in `target` indexing."""
    src, tgt = INDEXINGS[source], INDEXINGS[target]

    def e(x1, y1, x2, y2):
        a = src.from_engine(*tgt.to_engine(x1, y1))
        b = src.from_engine(*tgt.to_engine(x2, y2))
        return sign.exponent(a[0], a[1], b[0], b[1])
    return PairingSign(e, f"{sign.name}[{source}->{target}]")


def transport_family(family: Callable[[int, int], int], source: str, target: str) -> Callable[[int, int], int]:
    src, tgt = INDEXINGS[source], INDEXINGS[target]
    return lambda x, y: family(*src.from_engine(*tgt.to_engine(x, y)))


def rescale(sign: PairingSign, family) -> PairingSign:
    """The sign a pairing acquires after rescaling every group by `family`."""
    fc = family_coboundary(family)
    return sign.times(fc)


def reindex_identity_holds(rng: int) -> bool:
    """t(p-q) + pq + st + (p+s)(q+t) = q(t-s) mod 2 on [0, rng]^4."""
    return all((t * (p - q) + p * q + s * t + (p + s) * (q + t) - q * (t - s)) % 2 == 0
               for p, q, s, t in itertools.product(range(rng + 1), repeat=4))


SCHEMA_VERSION = 1


def reindex_transform(doc: Mapping, target: str) -> dict:
    """Rewrite a page document's bidegree keys into another indexing.

    Entries carry their bidegree under "bidegree"; differential targets under
    "d_target".  Everything else is copied unchanged, so converting back is
    bit-exact.
    """
    source = doc.get("indexing", "engine")
    if source not in INDEXINGS or target not in INDEXINGS:
        raise ValueError(f"unknown indexing {source!r} -> {target!r}")
    src, tgt = INDEXINGS[source], INDEXINGS[target]

    def conv(bd):
        return list(tgt.from_engine(*src.to_engine(int(bd[0]), int(bd[1]))))

    pages = []
    for pg in doc.get("pages", []):
        npg = {k: v for k, v in pg.items() if k != "entries"}
        ents = []
        for e in pg.get("entries", []):
            ne = dict(e)
            ne["bidegree"] = conv(e["bidegree"])
            if e.get("d_target") is not None:
                ne["d_target"] = conv(e["d_target"])
            ents.append(ne)
        npg["entries"] = ents
        pages.append(npg)
    # rebuild in the original key order so a round trip is byte-identical
    out = {}
    for k, v in doc.items():
        out[k] = target if k == "indexing" else pages if k == "pages" else v
    out.setdefault("indexing", target)
    out.setdefault("pages", pages)
    return out
