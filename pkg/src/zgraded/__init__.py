"""Exact computation in strongly Z-graded rings: normal forms, partitions of
unity, series inversion, and detectors for contractibility over the degree-0
subring and for finite domination, each with re-checkable certificates."""

from .complexes import (
    Contraction,
    DegreewiseMapFamily,
    FreeChainComplex,
    FullRing,
    NovmWindow,
    ProtoContraction,
    PspWindow,
    R0Complex,
    R0Target,
    RationalFunctionField,
    base_change,
    complex_to_text,
    parse_complex_text,
    proto_to_contraction,
    r0_contractibility,
    r0_routes_report,
    validate_complex,
    zeta_cone,
)
from .domination import (
    FinDomCertificate,
    FredholmVerdict,
    check_findom_certificate,
    findom_detect,
    graded_cokernel,
    is_fredholm,
    leavitt_findom_example,
    novikov_contractibility,
    suitable_shift,
)
from .exprs import element_to_str, matrix_to_str, parse_element, parse_matrix
from .matrices import RingMatrix
from .partitions import (
    DualBasisData,
    PartitionOfUnity,
    bimodule_iso_check,
    check_dual_basis,
    check_strongly_graded,
    compose_partitions,
    dual_basis,
    leavitt_q_iso,
    partition_for_degree,
    trivial_partition,
    verify_partition,
)
from .resolution import canonical_resolution, half_torus, mather_cone
from .rings import RingElement, get_ring, normal_form, tr0, truncate
from .series import (
    InversionCertificate,
    SeriesMatrix,
    SeriesWindow,
    in_tilde_omega_plus,
    invert_series_matrix,
)
from .certificates import verify_certificate

__all__ = [name for name in dir() if not name.startswith("_")]
