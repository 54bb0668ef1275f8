"""Multiplicative spectral sequences of filtered cochain complexes over the integers."""

from .exactlin import (FGAbelianGroup, GroupHom, IntegerMatrix, Lattice, NotWellDefined, Subquotient,
                       SubgroupViolation, cokernel, homology_group, induced_map, kernel, smith, solve,
                       subquotient)
from .simplicial import (ClassicalIso, Cochain, CoefficientPairing, IntChainComplex, InvalidGroupTable,
                         InvalidSimplicialMap, NotAComplex, OrderedComplex, SimplicialMap, chain_complex,
                         classical_cup, classical_delta, classical_iso, cohomology, cross, cup, cyclic_group,
                         delta, nerve, product)
from .graded import (INDEXINGS, BigradedCochain, EtaReport, GradedRing, InvalidGradedRing, PairingSign,
                     SignFamily, eta_commutation, graded_cup, graded_delta, koszul_sign, reindex_identity_holds,
                     reindex_transform, rescale, strict_families, strict_family_exists, transport_sign,
                     ungraded_cup)
from .ssengine import (AbutmentReport, FilteredCochainComplex, IsoVerdict, LeibnizReport, NotFiltrationAdditive,
                       Page, PagePairing, abutment_check, compare_global_iso, discrepancy_signs, e_infinity,
                       induced_page_map, leibniz_check, page, page_pairing, pages_csv, pages_document,
                       verify_next_page)
from .couple import (BigradedExactCouple, ExactnessViolation, LocalizedGroup, NoPeriodicityDeclared,
                     beta_localize, bockstein_couple, bockstein_pages, bockstein_pairing, derive,
                     mod_cup_pairing)
from .instances import (CoverData, NontrivialActionUnsupported, NotACover, TowerSpec, ahss_comparison,
                        build_ahss, build_descent, build_group_page, build_serre, compare_product_filtrations,
                        filtered_couple)

__version__ = "0.1.0"
