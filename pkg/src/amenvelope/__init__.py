"""Weighted word lengths, envelope norms and nuclearity witnesses for
countable semigroups."""
from .core import (
    ClosureResult,
    Element,
    GeneratorList,
    MultiplicationOracle,
    SemigroupError,
    SemigroupSpec,
    closure,
    detect_identity,
    generated_subsemigroup,
    make_oracle,
    product,
)
from .length import (
    LengthTable,
    WeightFunction,
    brute_force_length,
    check_subadditivity,
    dominating_weight,
    length_table,
    verify_domination,
)
from .normspace import (
    AlgebraElement,
    NormComparison,
    comparison_constants,
    convolve,
    norm_of,
    partial_norm,
    submultiplicativity_ratio,
)
from .nuclearity import (
    NuclearityReport,
    bounded_compositions_count,
    compositions_count,
    defect_census,
    nuclear_sum_bound,
    nuclearity_report,
    staircase,
)
from .classify import ClassificationReport, desk_classify, growth_profile, local_finiteness_probe
from .spec_io import emit_report, parse_spec

__version__ = "0.1.0"
