"""Hibi rings and Rees algebras of distributive lattices: Gröbner bases,
indispensability and the lattice conditions that classify them."""

from .binomial import Binomial, Ring, TermOrder, Variable, buchberger, is_groebner_basis, toric_kernel
from .errors import *  # noqa: F401,F403
from .grid import GridEmbedding, classify_corners, find_grid_embedding, grid_embedding, is_chain_ladder
from .harness import Campaign, EquivalenceReport, check_equivalences, enumerate_lattices, enumerate_posets, run_campaign
from .hibi import (
    all_hibi_indispensable,
    defense_gb_check,
    hibi_relations,
    hibi_ring,
    is_indispensable,
    quad_fiber,
    rank_lex,
    rank_lex_gb,
    rank_revlex,
    product_lex1,
    rees_gb_check,
    rees_presentation,
)
from .lattice import (
    Lattice,
    MeetSemilattice,
    associated_distributive_lattice,
    build_lattice,
    complementary_sets,
    ideal_lattice,
    is_conditionally_urc,
    is_distributive,
    is_meet_distributive,
    is_urc,
    join_irreducibles,
)
from .poset import Poset, build_poset, load_poset, poset_from_json, two_chain_cover

__version__ = "0.1.0"
