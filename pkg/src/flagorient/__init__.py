"""Orientability of real flag manifolds and of stable/unstable bundles, by root-system combinatorics."""
__version__ = "0.1.0"

from .rootsys import (  # noqa: E402
    DEFAULT_WEYL_LIMIT,
    ParabolicSubset,
    Root,
    RootSystem,
    RootSystemError,
    RootSystemSpec,
    WeylElement,
    WeylLimitError,
    WeylWord,
    build_root_system,
    cartan_integer,
    longest_element,
    parse_type,
    parse_word,
    reflect,
    root_length_class,
    span_subset,
    weyl_apply,
    weyl_enumerate,
    weyl_order,
)
from .orientability import (  # noqa: E402
    STABLE,
    UNSTABLE,
    BundleQuery,
    ChamberElement,
    FixedComponent,
    OrientabilityReport,
    bundle_orientable,
    determinant_sum,
    fixed_components_scan,
    flag_orientable,
    flag_orientable_full,
    flag_orientable_reduced,
    gamma_det_sign,
    stable_root_set,
)
from .classical import (  # noqa: E402
    FlagDims,
    cross_validate,
    dims_to_theta,
    mod2_condition,
    orientable_closed_form,
    parse_flag_dims,
    published_closed_form,
)
from .tables import (  # noqa: E402
    SubdiagramContribution,
    classify_subdiagram,
    connected_components,
    contribution,
    reproduce_tables,
    subdiagram_contribution,
)

__all__ = [name for name in dir() if not name.startswith("_")]
