"""Difference matrices and contracted difference matrices over finite abelian groups."""

from .catalog import catalog_entries, catalog_get, catalog_verify_all
from .constructions import (ChainPlan, best_known_cdm, best_known_k, buratti_chain, chain_cdm, chain_dm,
                            chain_dm_kronecker, concat_compose_cdm, contracted_field_cdm, drake_dm,
                            hom_image_cdm, hom_image_dm, kronecker_compose_dm, noncyclic2_cdm,
                            pan_chang_cdm, pan_chang_dm, product_compose_dm, searched_cdm,
                            sum_compose_dm)
from .designs import (ContractedDifferenceMatrix, DifferenceMatrix, delete_rows, normalize_dm, p_expand,
                      trivial_cdm, trivial_dm, verify, verify_cdm_fast, verify_cdm_full, verify_dm)
from .errors import (CapacityError, DiffMatError, SchemaError, StructuralError, UnsupportedError,
                     VerificationError)
from .gf import FieldSpec, find_primitive_poly
from .groups import DiagonalSubgroup, GroupElement, GroupSpec, Homomorphism, abelian_p_groups
from .linking import DifferenceSet, LinkingSystem, build_linking_system, verify_difference_set, verify_linking
from .reproduce import reproduce
from .search import Mode, Outcome, SearchConfig, SearchResult, Symmetry, search_cdm
from .serialize import parse_design, render_design

__all__ = [name for name in dir() if not name.startswith("_")]
