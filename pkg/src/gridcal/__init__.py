"""Rectangular torus diagrams of links and their elementary move calculus."""

from .grid_core import (BadComponentNumbering, Diagram, DiagramError,
                        FIGURE_EIGHT_6, NotAPermutation, ParseError,
                        SignClash, SizeTooSmall,
                        TREFOIL_5, UNKNOT_2, canonical_form, canonical_key,
                        component_cycles, decode_key, default_numbering,
                        encode, encode_key,
                        flip_orientation, key_from_hex, key_hex, parse,
                        reflect_theta, shift, validate)
from .moves import (ALL_MOVES, EXCHANGE, EXCHANGES_ONLY, DESTABILIZATION,
                    Move, MoveFilter, NotAnElementaryMove, ORIENTED_TYPES,
                    STABILIZATION, apply_move, classify, classify_all,
                    enumerate_moves, filter_from_token, inverse_move,
                    is_local, legendrian_filter, parse_move, transport_move,
                    transverse_filter)
from .invariants import (ClassicalInvariants, DELTA_KEYS, SL_KEYS,
                         all_invariants,
                         classical_invariants, corner_counts, crossings,
                         cusp_counts,
                         determinant, invariant_delta, rotation,
                         rotation_multisets, self_linking,
                         thurston_bennequin, writhe)
from .exchange import (CapExceeded, ExchangeClass, class_fingerprint,
                       class_members, exchange_class, is_simplifiable)
from .search import (LambdaResult, MalformedCertificate, MiddleResult,
                     ReplayFailed, SearchCaps, Verdict,
                     certificate_text, default_caps, equiv_legendrian,
                     equiv_transverse, find_middle, lambda_classes,
                     pad_diagram, reachable_set, replay_certificate)
from .census import (CensusRecord, CensusResult, KnotFilter, anchor_caps,
                     enumerate_all, enumerate_sharded,
                     nonsimplifiable_census)
from .atlas import AtlasReport, AtlasTable, atlas_verify, default_atlas_caps

__version__ = "0.1.0"
