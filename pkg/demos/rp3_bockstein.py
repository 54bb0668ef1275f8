"""Bockstein spectral sequence of RP^3 at the primes 2 and 3.

Run with ``python demos/rp3_bockstein.py``.
"""
from __future__ import annotations

from multss import bockstein_couple, bockstein_pages
from multss.fixtures import rp3

# %% mod 2: E_1 is H*(RP3; Z/2), d_1 is the Bockstein, and E_2 = E_inf is the free part
bp = bockstein_pages(bockstein_couple(rp3(), 2))
for r in range(1, bp.limit_index + 1):
    print(f"p=2  E_{r} ranks by degree:", bp.ranks(r, 3))
print("p=2  d_1 out of degree 1 is zero:", bp.d(1, (1,)).is_zero())

# %% mod 3: the 2-torsion is invisible, so the sequence collapses at once
bp3 = bockstein_pages(bockstein_couple(rp3(), 3))
print("p=3  E_1 ranks by degree:", bp3.ranks(1, 3), " limit page:", bp3.limit_index)
