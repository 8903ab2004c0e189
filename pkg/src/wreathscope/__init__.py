"""Toolkit for hyperbolic structures on lamplighter-type wreath products."""

from .groups import (
    Coeff,
    Config,
    Element,
    Group,
    GroupMismatchError,
    OrderBoundError,
    PolyParseError,
    Subgroup,
    coeff_add,
    coeff_order,
    config_add,
    config_shift,
    elem_inv,
    elem_mul,
    format_poly,
    full_subgroup,
    parse_element,
    parse_poly,
    subgroup_closure,
    trivial_subgroup,
)
from .metrics import (
    DeltaEstimate,
    DistanceTable,
    GenSet,
    StateLimitError,
    Variant,
    WalkPlan,
    WindowError,
    bfs_distances,
    bfs_word_length,
    busemann,
    delta_four_point,
    induced_distance,
    word_length,
    word_length_with_plan,
    wordlen_lineal,
    wordlen_qp,
    wordlen_standard,
)
from .structures import (
    BPoset,
    Relation,
    StructureKind,
    StructureNode,
    build_b_poset,
    compare_empirical,
    compare_exact,
    enumerate_subgroups,
    poset_to_dot,
    poset_to_json,
    qp_count,
)
from .confining import (
    ConfiningReport,
    EquivalenceReport,
    QSpec,
    QSpecError,
    RecoveryResult,
    SaturationState,
    check_confining,
    mirror_qspec,
    q_membership,
    recover_subgroup,
    saturate,
    validate_equivalence,
)

__all__ = [name for name in dir() if not name.startswith("_")]
