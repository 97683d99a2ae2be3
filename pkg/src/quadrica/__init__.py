"""quadrica: exact certification of stable irrationality verdicts for
quadric surface bundles over P^2 and P^1 x P^1."""

__version__ = "0.1.0"

from .poly import (  # noqa: F401
    FactorError,
    FactoredPoly,
    ParseError,
    Poly,
    PolyError,
    RatFn,
    degree_profile,
    exact_div,
    factor,
    format_poly,
    gcd_all,
    is_irreducible,
    multiplicity,
    normalize,
    parse_poly,
    poly_gcd,
    poly_sqrt,
    square_class_part,
    square_free_part,
    valuation,
)
from .funfield import (  # noqa: F401
    CurveClass,
    CurveParam,
    HenselWitness,
    PrimeDivisor,
    SquareClass,
    SurfaceModel,
    UnsupportedCurveError,
    coordinate_divisors,
    dehomogenize,
    hensel_report,
    hensel_square_test,
    homogenize,
    is_square_on_curve,
    multiply_classes,
    parametrize,
    prime_divisor,
    restrict_unit,
    square_class,
    surface,
    valuation_along,
)
from .brauer import (  # noqa: F401
    EMPTY_CLASS,
    BrauerClass,
    ResidueProfile,
    add_classes,
    classes_equal,
    is_unramified_over_C,
    residue_profile,
    symbol,
    tame_residue,
)
from .quadform import (  # noqa: F401
    AbsorbSquares,
    BundleType,
    DiagForm,
    MultiplyEntry,
    QuadformError,
    Reorder,
    Scale,
    SimilarityWitness,
    apply_move,
    canonical_quadric,
    chart_quadric,
    clifford_invariant,
    discriminant,
    generic_fiber,
    hpt_alpha,
    hpt_target,
    is_weak_bundle,
    make_affine_form,
    make_diag_form,
    normalize_to_hpt,
    type_of,
    verify_witness,
    weak_gcd,
)
from .certify import (  # noqa: F401
    BASE_FACT,
    NOT_STABLY_RATIONAL,
    OPEN,
    RATIONAL,
    UNKNOWN,
    ArasonResult,
    Certificate,
    CertifyError,
    ConstructionError,
    PirutkaReport,
    PirutkaRow,
    Verdict,
    arason_nontriviality,
    build_certificate,
    certificate_digest,
    certificate_json,
    construct_degeneration_p1xp1,
    construct_degeneration_p2,
    enumerate_types_p1xp1,
    enumerate_types_p2,
    pirutka_check,
    replay_certificate,
    select_rule_p1xp1,
    verdict_for,
    verdict_json,
    verdict_p1xp1,
    verdict_p2,
)
