"""Diagonal quadratic forms over the base surfaces.

Covers bundle types, weak-bundle validity, the generic fiber over the
affine chart, discriminant and Clifford invariants, the legal rewrite
moves (global scaling, square absorption, entrywise monomial twists,
reordering), and the similarity normalizer that recognizes forms whose
fiber is, up to similarity, the Hassett-Pirutka-Tschinkel quadric

    < y, x, xy, F(x, y, 1) >,   F = x^2 + y^2 + z^2 - 2(xy + xz + yz).

The normalizer searches the finite set of scalings given by subset
products of the entries (any similarity between forms with entries that
are monomials times the canonical quadric lies in that set modulo
squares), absorbs squares, and matches the target pattern over all 24
orderings.  Every hit is returned with a replayable witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations

from .brauer import BrauerClass, add_classes, symbol
from .funfield import (
    SquareClass,
    SurfaceModel,
    blocks,
    dehomogenize,
    is_chart_poly,
    is_model_homogeneous,
    square_class,
    surface,
)
from .poly import (
    Poly,
    RatFn,
    exact_div,
    factor,
    normalized_with_unit,
    parse_poly,
    poly_sqrt,
    square_class_part,
)


class QuadformError(Exception):
    """Invalid form, illegal move, or out-of-class normalizer input."""


# ------------------------------------------------------------ canonical data


@lru_cache(maxsize=None)
def canonical_quadric(s: SurfaceModel) -> Poly:
    """The degeneration quadric on the model: F on P^2, h on P^1 x P^1."""
    if s.kind == "p2":
        return parse_poly("x^2+y^2+z^2-2*(x*y+x*z+y*z)", s.variables)
    return parse_poly(
        "x1^2*y0^2+x0^2*y1^2+x0^2*y0^2-2*(x1*y1*x0*y0+x1*x0*y0^2+y1*y0*x0^2)",
        s.variables)


@lru_cache(maxsize=None)
def chart_quadric(s: SurfaceModel) -> Poly:
    return dehomogenize(s, canonical_quadric(s))


def chart_pair(s: SurfaceModel) -> tuple[Poly, Poly]:
    """The chart coordinates (x, y) resp. (x1, y1) as polynomials."""
    a, b = s.chart_vars
    return Poly.var(s.variables, a), Poly.var(s.variables, b)


def hpt_target(s: SurfaceModel) -> tuple[Poly, Poly, Poly, Poly]:
    xv, yv = chart_pair(s)
    return (yv, xv, xv * yv, chart_quadric(s))


def hpt_alpha(s: SurfaceModel) -> BrauerClass:
    xv, yv = chart_pair(s)
    return symbol(xv, yv)


# ------------------------------------------------------------------- forms


@dataclass(frozen=True)
class DiagForm:
    """Diagonal rank-4 quadratic form over the surface; entries are
    (bi)homogeneous on the projective model, or chart polynomials when
    affine."""

    entries: tuple[Poly, Poly, Poly, Poly]
    surface: SurfaceModel
    affine: bool

    def __str__(self) -> str:
        tag = "affine " if self.affine else ""
        return f"<{', '.join(str(e) for e in self.entries)}> ({tag}{self.surface.kind})"


def make_diag_form(entries, s: SurfaceModel) -> DiagForm:
    es = tuple(entries)
    if len(es) != 4:
        raise QuadformError("a diagonal quadric surface form needs exactly 4 entries")
    for e in es:
        if not isinstance(e, Poly) or e.variables != s.variables:
            raise QuadformError(f"entries must be polynomials over {s.variables}")
        if e.is_zero():
            raise QuadformError("weak bundle requires nonzero diagonal entries")
        if not is_model_homogeneous(s, e):
            raise QuadformError(f"entry {e} is not (bi)homogeneous on {s.kind}")
    return DiagForm(es, s, affine=False)


def make_affine_form(entries, s: SurfaceModel) -> DiagForm:
    es = tuple(entries)
    if len(es) != 4:
        raise QuadformError("a diagonal quadric surface form needs exactly 4 entries")
    for e in es:
        if not isinstance(e, Poly) or e.variables != s.variables:
            raise QuadformError(f"entries must be polynomials over {s.variables}")
        if e.is_zero():
            raise QuadformError("affine form entries must be nonzero")
        if not is_chart_poly(s, e):
            raise QuadformError(f"entry {e} involves a boundary variable")
    return DiagForm(es, s, affine=True)


def generic_fiber(f: DiagForm) -> DiagForm:
    """Dehomogenize to the affine chart; entries stay nonzero."""
    if f.affine:
        return f
    es = tuple(dehomogenize(f.surface, e) for e in f.entries)
    for e in es:
        assert not e.is_zero()
    return DiagForm(es, f.surface, affine=True)


# -------------------------------------------------------------------- types


@dataclass(frozen=True)
class BundleType:
    """Sorted (bi)degree vector of a diagonal form."""

    surface_kind: str
    data: tuple  # 4 ints for p2, 4 int-pairs for p1xp1
    reordered: bool = False

    @staticmethod
    def of(surface_kind: str, seq) -> BundleType:
        raw = tuple(tuple(p) if isinstance(p, (tuple, list)) else int(p) for p in seq)
        if len(raw) != 4:
            raise QuadformError("a bundle type has exactly 4 components")
        srt = tuple(sorted(raw))
        return BundleType(surface_kind, srt, reordered=(srt != raw))

    @property
    def parity_valid(self) -> bool:
        if self.surface_kind == "p2":
            return len({d % 2 for d in self.data}) == 1
        ds = {p[0] % 2 for p in self.data}
        es = {p[1] % 2 for p in self.data}
        return len(ds) == 1 and len(es) == 1

    @property
    def nonnegative(self) -> bool:
        if self.surface_kind == "p2":
            return all(d >= 0 for d in self.data)
        return all(d >= 0 and e >= 0 for d, e in self.data)

    def validate(self) -> None:
        if not self.nonnegative:
            raise QuadformError(f"type {self} has negative components")
        if not self.parity_valid:
            raise QuadformError(f"type {self} violates the parity constraint")

    def ds(self) -> tuple[int, int, int, int]:
        if self.surface_kind == "p2":
            return self.data  # type: ignore[return-value]
        return tuple(p[0] for p in self.data)  # type: ignore[return-value]

    def es(self) -> tuple[int, int, int, int]:
        if self.surface_kind != "p1xp1":
            raise QuadformError("second degrees exist only on p1xp1")
        return tuple(p[1] for p in self.data)  # type: ignore[return-value]

    def __str__(self) -> str:
        if self.surface_kind == "p2":
            return ",".join(str(d) for d in self.data)
        return ",".join(f"{d}:{e}" for d, e in self.data)


def type_of(f: DiagForm) -> BundleType:
    """Per-entry (bi)degrees, sorted lexicographically."""
    if f.affine:
        raise QuadformError("bundle types are read off the projective form")
    s = f.surface
    if s.kind == "p2":
        degs = [e.total_degree() for e in f.entries]
    else:
        degs = [e_bidegree(s, e) for e in f.entries]
    return BundleType.of(s.kind, degs)


def e_bidegree(s: SurfaceModel, e: Poly) -> tuple[int, int]:
    from .poly import degree_profile
    bd = degree_profile(e, blocks(s))
    assert bd != "inhomogeneous"
    return bd  # type: ignore[return-value]


def weak_gcd(f: DiagForm) -> Poly:
    from .poly import gcd_all
    return gcd_all(list(f.entries))


def is_weak_bundle(f: DiagForm) -> bool:
    """True iff the entries have no common factor."""
    return weak_gcd(f).is_constant()


# ---------------------------------------------------------------- invariants


def discriminant(f: DiagForm) -> SquareClass:
    """Square class of the product of the four entries, read over the chart."""
    fiber = generic_fiber(f)
    prod = fiber.entries[0]
    for e in fiber.entries[1:]:
        prod = prod * e
    return square_class(prod)


def clifford_invariant(f: DiagForm) -> BrauerClass:
    """Clifford invariant of the generic fiber.

    The form is scaled by its first entry to <1, -a, -b, abd> with
    a = e0*e1, b = e0*e2, d = discr modulo squares (signs are squares over
    C); the invariant of the scaled form is (a, b) + (ab, d).
    """
    fiber = generic_fiber(f)
    e0, e1, e2, e3 = fiber.entries
    a = square_class_part(e0 * e1)
    b = square_class_part(e0 * e2)
    d = square_class_part(e0 * e1 * e2 * e3)
    # normal-form audit: the fourth scaled slot must be a*b*d modulo squares
    if square_class_part(a * b * d) != square_class_part(e0 * e3):
        raise QuadformError(f"entries of {f} do not match the <1,-a,-b,abd> pattern")
    return add_classes(symbol(a, b), symbol(square_class_part(a * b), d))


# -------------------------------------------------------------------- moves


@dataclass(frozen=True)
class Scale:
    factor: Poly


@dataclass(frozen=True)
class AbsorbSquares:
    pass


@dataclass(frozen=True)
class Reorder:
    permutation: tuple[int, int, int, int]


@dataclass(frozen=True)
class MultiplyEntry:
    index: int
    monomial: Poly


def _require_legal_twist(s: SurfaceModel, m: Poly) -> None:
    if len(m._terms) != 1:
        raise QuadformError(f"{m} is not a monomial")
    for v in s.chart_vars:
        if m.degree_in(v) % 2:
            raise QuadformError(
                f"odd power of chart variable {v} in {m} changes the fiber")


def apply_move(f: DiagForm, move) -> DiagForm:
    """Apply a similarity-class-preserving rewrite move."""
    s = f.surface
    if isinstance(move, Scale):
        lam = move.factor
        if lam.is_zero():
            raise QuadformError("scaling by zero")
        es = tuple(lam * e for e in f.entries)
    elif isinstance(move, AbsorbSquares):
        es = tuple(square_class_part(e) for e in f.entries)
    elif isinstance(move, Reorder):
        perm = move.permutation
        if sorted(perm) != [0, 1, 2, 3]:
            raise QuadformError(f"{perm} is not a permutation of 0..3")
        es = tuple(f.entries[perm[i]] for i in range(4))
    elif isinstance(move, MultiplyEntry):
        _require_legal_twist(s, move.monomial)
        es = list(f.entries)
        es[move.index] = es[move.index] * move.monomial
        es = tuple(es)
    else:
        raise QuadformError(f"unknown move {move!r}")
    return make_affine_form(es, s) if f.affine else make_diag_form(es, s)


# --------------------------------------------------------------- normalizer


@dataclass(frozen=True)
class SimilarityWitness:
    """Certificate that scale * entry_i = unit_i * square_i^2 * target_perm(i)."""

    scale: RatFn
    square_factors: tuple[RatFn, RatFn, RatFn, RatFn]
    units: tuple[Fraction, Fraction, Fraction, Fraction]
    permutation: tuple[int, int, int, int]  # source slot i -> target slot


def _entry_in_monomial_quadric_class(s: SurfaceModel, e: Poly) -> bool:
    fq = chart_quadric(s)
    for q, _ in factor(e).factors:
        if q == fq:
            continue
        if q.total_degree() != 1 or len(q._terms) != 1:
            return False
    return True


def normalize_to_hpt(f: DiagForm) -> SimilarityWitness | None:
    """Search for a similarity taking the affine form onto the canonical
    quadric fiber <y', x', x'y', F(x', y', 1)>; None when no witness exists."""
    if not f.affine:
        raise QuadformError("the normalizer takes the affine fiber")
    s = f.surface
    for e in f.entries:
        if not _entry_in_monomial_quadric_class(s, e):
            raise QuadformError(
                f"entry {e} is outside the monomial x quadric class")
    target = hpt_target(s)
    one = Poly.const(s.variables, 1)
    for size in range(5):
        for subset in combinations(range(4), size):
            lam = one
            for i in subset:
                lam = lam * f.entries[i]
            scaled = [lam * e for e in f.entries]
            reps = [square_class_part(p) for p in scaled]
            for perm in permutations(range(4)):
                if all(reps[i] == target[perm[i]] for i in range(4)):
                    squares = []
                    units = []
                    for i in range(4):
                        q = exact_div(scaled[i], reps[i])
                        assert q is not None
                        unit, prim = normalized_with_unit(q)
                        root = poly_sqrt(prim)
                        assert root is not None
                        squares.append(RatFn(root))
                        units.append(unit)
                    return SimilarityWitness(
                        scale=RatFn(lam),
                        square_factors=tuple(squares),
                        units=tuple(units),
                        permutation=perm,
                    )
    return None


def verify_witness(f: DiagForm, w: SimilarityWitness) -> bool:
    """Replay the witness arithmetic exactly."""
    target = hpt_target(f.surface)
    lam = w.scale.num
    if not w.scale.den.is_constant() or w.scale.den.constant_value() != 1:
        return False
    for i in range(4):
        sq = w.square_factors[i].num
        lhs = lam * f.entries[i]
        rhs = sq * sq * target[w.permutation[i]] * w.units[i]
        if lhs != rhs:
            return False
    return True
