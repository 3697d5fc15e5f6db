"""Coarse-geometric invariants of finitely generated groups, computed from
finite Cayley-graph windows: end counts, end-approximation trees, coarsely
clopen certificates, growth and covering data, and an asymptotic-dimension
upper-bound witness for window-hyperbolic inputs.
"""

from .asdim import (
    AnnulusCover,
    AsdimWitness,
    CoverStats,
    CoveringSample,
    GrowthRow,
    GrowthTable,
    SeparatedNet,
    asdim_upper_bound,
    bounded_geometry_check,
    build_annulus_cover,
    covering_number,
    estimate_delta,
    exact_covering_number,
    greedy_ball_cover,
    growth_series,
    verify_cover,
)
from .cayley import DEFAULT_CAP, Geodesic, Window, build_window, window_cache_key
from .covers import (
    ClopenCertificate,
    InterfaceReport,
    ScaleEntry,
    clopen_intersection_law,
    clopen_scale_test,
    coarsely_identical,
    interface,
    scale_difference_set,
    star,
    star_preserves_clopen,
)
from .ends import (
    BoundedMassReport,
    Component,
    ComponentDecomposition,
    EndEvidence,
    EndTree,
    EndVerdict,
    RadiusCount,
    TreeLevel,
    TreeNode,
    bounded_mass_report,
    classify_counts,
    component_tree,
    components,
    end_count,
    k4_component_bound,
    union_component_clopen_check,
)
from .errors import (
    CoarseEndsError,
    CoreRadiusError,
    CoverVerificationError,
    ElementSyntaxError,
    EmptyShellError,
    MismatchError,
    NonHyperbolicError,
    OutOfWindowError,
    ParameterError,
    SelectorError,
    SpecSyntaxError,
    UnsupportedSpecError,
    WindowCapError,
)
from .groups import (
    Cyclic,
    DirectProduct,
    Free,
    FreeAbelian,
    FreeProduct,
    GeneratorSet,
    Group,
    parse_spec,
    power_generators,
    spec_to_string,
    standard_generators,
)

__version__ = "0.1.0"

__all__ = [
    "AnnulusCover",
    "AsdimWitness",
    "BoundedMassReport",
    "ClopenCertificate",
    "CoarseEndsError",
    "Component",
    "ComponentDecomposition",
    "CoreRadiusError",
    "CoverStats",
    "CoverVerificationError",
    "CoveringSample",
    "Cyclic",
    "DEFAULT_CAP",
    "DirectProduct",
    "ElementSyntaxError",
    "EmptyShellError",
    "EndEvidence",
    "EndTree",
    "EndVerdict",
    "Free",
    "FreeAbelian",
    "FreeProduct",
    "GeneratorSet",
    "Geodesic",
    "Group",
    "GrowthRow",
    "GrowthTable",
    "InterfaceReport",
    "MismatchError",
    "NonHyperbolicError",
    "OutOfWindowError",
    "ParameterError",
    "RadiusCount",
    "ScaleEntry",
    "SelectorError",
    "SeparatedNet",
    "SpecSyntaxError",
    "TreeLevel",
    "TreeNode",
    "UnsupportedSpecError",
    "Window",
    "WindowCapError",
    "asdim_upper_bound",
    "bounded_geometry_check",
    "bounded_mass_report",
    "build_annulus_cover",
    "build_window",
    "classify_counts",
    "clopen_intersection_law",
    "clopen_scale_test",
    "coarsely_identical",
    "component_tree",
    "components",
    "covering_number",
    "end_count",
    "estimate_delta",
    "exact_covering_number",
    "greedy_ball_cover",
    "growth_series",
    "interface",
    "k4_component_bound",
    "parse_spec",
    "power_generators",
    "scale_difference_set",
    "spec_to_string",
    "standard_generators",
    "star",
    "star_preserves_clopen",
    "union_component_clopen_check",
    "verify_cover",
    "window_cache_key",
]
