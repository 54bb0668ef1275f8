"""The 2-sphere with Laurent coefficients Z[b, 1/b], |b| = 2, and b-localization.

Run with ``python demos/sphere_laurent.py``.
"""
from __future__ import annotations

from multss import GradedRing, Page, abutment_check, beta_localize, build_ahss, filtered_couple
from multss.fixtures import sphere

# %% Coefficients are truncated to the degree window [-4, 2]
C = build_ahss(sphere(), GradedRing.laurent(2), range(-4, 3))
print("E_2:", {b: str(g) for b, g in Page(C, 2).table().items()})
print("degenerate at E_2:", Page(C, 2).is_degenerate())

# %% Abutment: each even total degree carries two copies of Z, in filtrations 0 and 2
rep = abutment_check(C)
for n in (0, 2):
    pieces = {f: str(g) for f, g in rep.degrees[n]["pieces"].items() if not g.is_trivial()}
    print(f"H^{n} = {rep.degrees[n]['H']}  pieces {pieces}")

# %% Localizing the associated exact couple at b leaves the colimit unchanged
loc = beta_localize(filtered_couple(C))
lo = C.min_filtration
print("colimit by degree:", {n: str(loc.groups[(lo - 1, n)]) for n in range(0, 5)})
