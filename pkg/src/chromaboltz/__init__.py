"""Boltzmann sampling of k-colored and size-colored combinatorial objects.

Specify a class with the small text DSL (`parse_spec`), evaluate its
colored generating functions (`build_oracle`, `series_f`), draw
profiled objects (`SamplerContext`, `sample`) and turn them into
colored samples (`color_profiled`, `gamma_colored`,
`sample_kcolored_exact`).  `enumerate_colored` provides exhaustive
small-size ground truth for validation.
"""

from .coloring import (ColoringParams, RejectionStats, color_profiled,
                       expected_attempts_bound, filter_sampler,
                       gamma_colored, sample_kcolored_exact, window_sizes)
from .cycle_index import (CycleIndexSeries, series_cycle_index, series_f,
                          totient)
from .dsl import (Atom, ClassExpr, Cyc, Epsilon, MSet, Product, Ref, Seq,
                  SpecSystem, Union, ValidationReport, builtin_spec_names,
                  load_builtin, min_size, parse_spec, pretty, pretty_system,
                  validate)
from .errors import (CapExceededError, ChromaBoltzError, DepthExceededError,
                     DivergenceError, DuplicateDefinitionError,
                     InsufficientDataError, InvalidParameterError,
                     NoProfileError, NoSolutionError, SampleTimeoutError,
                     SpecSyntaxError, UnknownNameError)
from .exhaustive import EnumTable, boltzmann_pmf, enumerate_colored
from .kernel import RandomStream, available_backends, backend_name
from .objects import (AtomNode, CycNode, DiagNode, MSetNode, ProfiledObject,
                      TupleNode, canonicalize, encode, expand, from_json_dict,
                      iter_atoms, merge_copies, profile, profile_parts,
                      profile_weight, size, to_json_dict, to_text)
from .oracle import (MinPartsTable, OracleTable, build_oracle, eval_diag,
                     eval_f, expected_size, min_parts, min_parts_table, tune)
from .samplers import (SamplerContext, SizeCeilingHit, bern, geom, pois,
                       pois_pos, sample, sample_cyc, sample_mset, sample_seq)
from .stats import chi_square_test, gammaq

__version__ = "0.1.0"
