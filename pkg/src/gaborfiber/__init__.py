"""Gabor frames through Hilbert C*-modules over L^inf of an interval.

Frame bounds, dual windows and Bessel estimates for Gabor systems are
computed fiberwise: the frame operator decomposes into a field of finite
Hermitian matrices over a fundamental domain of the translation lattice.
"""
from .errors import (
    AlignmentError,
    CompatibilityError,
    ConditioningWarning,
    GaborFiberError,
    NotAFrameError,
    NumericalError,
    PreconditionError,
    RealExpectedError,
    SnapWarning,
    TruncationError,
    TruncationWarning,
)
from .gabor import (
    GaborAnalysis,
    Lattice,
    analyze_system,
    bessel_estimates,
    direct_frame_apply,
    direct_frame_bounds,
    dual_window,
    fiber_frame_matrix,
    gabor_frame_bounds,
    modulation_correlation,
    parseval_test,
    translate_correlation,
    walnut_apply,
    wexler_raz_verify,
)
from .hmod import (
    FiberMatrixField,
    FrameBounds,
    ModuleSequence,
    ModuleVector,
    canonical_dual,
    gram_matrix,
    inner_product,
    module_norm,
    weak_frame_bounds,
)
from .kernels import BACKEND
from .schur import SchurReport, bessel_from_gram, schur_conditions
from .spaces import (
    SpaceMembership,
    TailModel,
    Verdict,
    WindowSpec,
    bracket_product,
    classify_space,
    defiberize,
    dilate,
    fiberize,
    norm_equivalence_factors,
    translate,
)
from .valg import FiberField, alg_mul, ess_bounds, sup_norm

__version__ = "0.1.0"
