"""Monochromatic configurations in finite colorings of the positive integers."""

from .cnf import CNF, export_cnf, parse_dimacs
from .fs import (
    FiniteSumSet,
    GeneratingSequence,
    dilate_preimage,
    extract_fs_subsequence,
    find_divisible,
    finite_sums,
    lemma3_split,
    minimal_ipr_for_divisibility,
    shift_intersect,
)
from .pattern import (
    PRESETS,
    Coloring,
    Pattern,
    eval_term,
    format_pattern,
    instantiate,
    is_monochromatic,
    parse_coloring,
    parse_pattern,
)
from .search import (
    Avoiding,
    Forced,
    RadoResult,
    Unknown,
    enumerate_instances,
    find_avoiding,
    find_witness,
    rado_number,
    verify_avoidance,
)
from .simulate import (
    ExplicitRule,
    IntervalRule,
    ProofTrace,
    ResidueRule,
    SimulationFailure,
    induced_coloring,
    simulate,
)
