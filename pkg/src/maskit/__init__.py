"""Numerical toolkit for once-punctured-torus quasifuchsian slices.

The package pins down one two-parameter family of representations,
computes slope traces exactly, classifies points of the parameter
slice, locates boundary cusps to high precision, rasterizes slices,
and certifies a rectangle witnessing infinitely many bounded
components in an extension locus.
"""

from .classify import (
    AMembership,
    AVerdict,
    Classification,
    ClassifierConfig,
    RealClassifier,
    SyntheticSlice,
    Verdict,
    a_membership,
    classify_point,
    membership_with,
)
from .cusps import (
    BoundaryCuspError,
    CuspResult,
    RootSolveError,
    cusp_point,
    poly_roots,
)
from .farey import (
    FareySlope,
    TraceCache,
    TracePolynomial,
    farey_difference,
    farey_parents,
    mediant,
    slope,
    slope_word,
    slopes_up_to,
    trace_of_slope,
    trace_polynomial,
)
from .moebius import (
    ExtendedRep,
    Moebius,
    PuncturedTorusRep,
    commutator,
    make_moebius,
    make_sigma_z,
    make_sigma_zw,
    normalized_length,
    trace,
    word_matrix,
)
from .raster import (
    CELL_INSIDE_MINUS,
    CELL_INSIDE_PLUS,
    CELL_MEMBER,
    CELL_NON_MEMBER,
    CELL_OUTSIDE,
    CELL_UNDETERMINED,
    Component,
    ComponentReport,
    Raster,
    Window,
    check_symmetries,
    components,
    rasterize_a_slice,
    rasterize_maskit,
    save_ppm,
    to_ppm_bytes,
)
from .selftest import run_selftest
from .witness import (
    AxisRectangle,
    ComponentsNearInfinity,
    SearchParams,
    WitnessReport,
    WitnessSearchError,
    build_R,
    components_near_infinity,
    find_rectangle,
    verify_witness,
)

__version__ = "0.1.0"

__all__ = [
    "AMembership",
    "AVerdict",
    "AxisRectangle",
    "BoundaryCuspError",
    "CELL_INSIDE_MINUS",
    "CELL_INSIDE_PLUS",
    "CELL_MEMBER",
    "CELL_NON_MEMBER",
    "CELL_OUTSIDE",
    "CELL_UNDETERMINED",
    "Classification",
    "ClassifierConfig",
    "Component",
    "ComponentReport",
    "ComponentsNearInfinity",
    "CuspResult",
    "ExtendedRep",
    "FareySlope",
    "Moebius",
    "PuncturedTorusRep",
    "Raster",
    "RealClassifier",
    "RootSolveError",
    "SearchParams",
    "SyntheticSlice",
    "TraceCache",
    "TracePolynomial",
    "Verdict",
    "Window",
    "WitnessReport",
    "WitnessSearchError",
    "a_membership",
    "build_R",
    "check_symmetries",
    "classify_point",
    "commutator",
    "components",
    "components_near_infinity",
    "cusp_point",
    "farey_difference",
    "farey_parents",
    "find_rectangle",
    "make_moebius",
    "make_sigma_z",
    "make_sigma_zw",
    "mediant",
    "membership_with",
    "normalized_length",
    "poly_roots",
    "rasterize_a_slice",
    "rasterize_maskit",
    "run_selftest",
    "save_ppm",
    "slope",
    "slope_word",
    "slopes_up_to",
    "trace",
    "trace_of_slope",
    "trace_polynomial",
    "word_matrix",
]
