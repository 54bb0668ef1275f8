"""Torus AHSS: the E_2 product against the graded and ungraded cup products.

Run with ``python demos/torus_ahss_signs.py``.
"""
from __future__ import annotations

from multss import GradedRing, Page, ahss_comparison, build_ahss
from multss.fixtures import torus

# %% E_1 and E_2 of the skeletal tower with integer coefficients
C = build_ahss(torus(), GradedRing.integers())
for r in (1, 2):
    print(f"E_{r}:", {b: str(g) for b, g in Page(C, r).table().items()})

# %% The E_2 product of the two degree-1 generators
cmp_ = ahss_comparison(torus(), GradedRing.integers())
print("E_2 product table at (1,0) x (1,0):", cmp_.e2.table((1, 0), (1, 0)))

# %% Verdicts: the page ring matches the graded cup product outright, and the
# ungraded one only after the transported (-1)^(t(p+q)) twist
print("isomorphic to graded cup ring:", bool(cmp_.against_graded()))
print("isomorphic to ungraded cup ring (twisted):", bool(cmp_.against_ungraded()))
