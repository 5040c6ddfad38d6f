"""mafoliate: desk-scale verification of Monge-Ampere exhaustions on C^2.

Exact Wirtinger calculus for real polynomials in (z, zbar), pointwise
Monge-Ampere residuals and the complex gradient, finite-type analysis via
exact Lie brackets with gradient extension across Levi-degenerate points,
foliation leaf tracing, and the homogeneous / weighted-circular verdicts.
"""

__version__ = "0.1.0"

from .calculus import (
    BidegreeProfile,
    GaussianRational,
    HermitianPolynomial,
    MinEigenReport,
    MonomialKey,
    Point,
    Polynomial,
    WirtingerJet,
    bidegree_decompose,
    canonical_json,
    eval_jet,
    parse_polynomial,
    polynomial_hash,
    psh_min_eigen,
    serialize_polynomial,
    substitute_linear,
    wirtinger_derive,
)
from .corpus import CORPUS_NAMES, MA_CORPUS_NAMES, corpus, load, ma_corpus
from .errors import (
    AllRaysDegenerate,
    ComplexEigenvalues,
    DegenerateLevi,
    FlowEscape,
    IncompleteTrace,
    MafoliateError,
    NegativeExponent,
    NoConvergence,
    NonPositiveRho,
    NonVanishingAtCenter,
    NotHomogeneous,
    NotPositive,
    RankDeficientSamples,
    RealityViolation,
    TypeCapExceeded,
    VanishingPhi,
    ZeroDifferential,
)
from .finite_type import (
    BracketIdentityReport,
    BracketWord,
    LeafChart,
    PolyVectorField,
    TypeReport,
    bracket_identities_check,
    extend_gradient,
    extension_ingredients,
    gradient_anywhere,
    lie_bracket,
    pair_d_rho,
    point_type,
    tangential_field,
)
from .foliation import (
    BurnsVerdict,
    FlowConfig,
    HolomorphicFit,
    LeafDiagnostics,
    LeafTrace,
    TransportReport,
    WeightEstimate,
    ZeroSetReport,
    burns_verify,
    estimate_weights,
    fit_holomorphic_Z,
    leaf_diagnostics,
    level_set_samples,
    level_transport,
    make_grid,
    trace_leaf,
    weighted_homogeneity_check,
    write_leaf_csv,
    zero_set_check,
)
from .monge_ampere import (
    GradientValue,
    HermitianPairing,
    MAReport,
    complex_gradient,
    ma_residual,
    ma_scan,
    omega_pairing,
    write_ma_csv,
)

__all__ = [name for name in dir() if not name.startswith("_")]
