"""Two-torsion Brauer classes of the surface function field.

A class is a mod-2 set of symbols (a, b); each slot is stored by its
canonical square-free representative, since the symbol only depends on
the square classes of its entries.  The tame residue of (f, g) along a
prime divisor with valuations m = v(f), n = v(g) is the square class of
the restriction of f^n / g^m to the divisor; the sign (-1)^(mn) of the
general tame-symbol formula is a constant, hence a square over C, and
is dropped.

Equality of classes is decided by total residue triviality on the fixed
rational model: the unramified 2-torsion Brauer group of P^2 and of
P^1 x P^1 vanishes, so a class with empty residue profile is zero.  The
test is documented as model-dependent and is not claimed beyond these
two surfaces.
"""

from __future__ import annotations

from dataclasses import dataclass

from .funfield import (
    CurveClass,
    PrimeDivisor,
    SurfaceModel,
    coordinate_divisors,
    homogenize,
    prime_divisor,
    require_chart,
    restrict_unit,
    valuation_along,
)
from .poly import Poly, PolyError, RatFn, as_ratfn, factor, square_class_part


@dataclass(frozen=True)
class BrauerClass:
    """Formal F_2-sum of symbols; slots are canonical square-free polys."""

    symbols: frozenset[tuple[Poly, Poly]]

    @property
    def is_formally_empty(self) -> bool:
        return not self.symbols

    def sorted_symbols(self) -> tuple[tuple[Poly, Poly], ...]:
        return tuple(sorted(self.symbols, key=lambda ab: (str(ab[0]), str(ab[1]))))

    def __str__(self) -> str:
        if not self.symbols:
            return "0"
        return " + ".join(f"({a}, {b})" for a, b in self.sorted_symbols())


EMPTY_CLASS = BrauerClass(frozenset())


def symbol(a: RatFn | Poly, b: RatFn | Poly) -> BrauerClass:
    """The one-symbol class (a, b); trivial slots collapse it to zero."""
    fa, fb = as_ratfn(a), as_ratfn(b)
    if fa.is_zero() or fb.is_zero():
        raise PolyError("symbol entries must be nonzero")
    ra = square_class_part(fa.num * fa.den)
    rb = square_class_part(fb.num * fb.den)
    if ra.is_constant() or rb.is_constant():
        return EMPTY_CLASS
    return BrauerClass(frozenset({(ra, rb)}))


def add_classes(u: BrauerClass, v: BrauerClass) -> BrauerClass:
    return BrauerClass(u.symbols ^ v.symbols)


def tame_residue(u: BrauerClass, c: PrimeDivisor) -> CurveClass:
    """Product over symbols of the residue square classes along c."""
    res = CurveClass.trivial()
    for a, b in u.sorted_symbols():
        fa, fb = RatFn(a), RatFn(b)
        m = valuation_along(fa, c)
        n = valuation_along(fb, c)
        if m == 0 and n == 0:
            continue
        w = (fa ** n) / (fb ** m)
        res = res * CurveClass.from_ratfn(restrict_unit(w, c))
    return res


@dataclass(frozen=True)
class ResidueProfile:
    """The divisors with nontrivial residue, with their residue classes."""

    entries: tuple[tuple[PrimeDivisor, CurveClass], ...]  # sorted by divisor

    @property
    def is_empty(self) -> bool:
        return not self.entries

    def divisors(self) -> tuple[PrimeDivisor, ...]:
        return tuple(c for c, _ in self.entries)

    def residue_at(self, c: PrimeDivisor) -> CurveClass:
        for d, r in self.entries:
            if d == c:
                return r
        return CurveClass.trivial()

    def __str__(self) -> str:
        if not self.entries:
            return "unramified"
        return "; ".join(f"{d}: {r}" for d, r in self.entries)


def candidate_divisors(u: BrauerClass, s: SurfaceModel) -> tuple[PrimeDivisor, ...]:
    """Factors of all symbol entries, homogenized, plus the coordinate
    divisors of the model (residues vanish along everything else)."""
    divs = set(coordinate_divisors(s))
    for a, b in u.symbols:
        for slot in (a, b):
            require_chart(s, slot)
            if slot.is_constant():
                continue
            for q, _ in factor(slot).factors:
                divs.add(prime_divisor(s, homogenize(s, q)))
    return tuple(sorted(divs, key=str))


def residue_profile(u: BrauerClass, s: SurfaceModel) -> ResidueProfile:
    entries = []
    for c in candidate_divisors(u, s):
        r = tame_residue(u, c)
        if not r.is_trivial:
            entries.append((c, r))
    return ResidueProfile(tuple(entries))


def is_unramified_over_C(u: BrauerClass, s: SurfaceModel) -> bool:
    return residue_profile(u, s).is_empty


def classes_equal(u: BrauerClass, v: BrauerClass, s: SurfaceModel) -> bool:
    """Equality in H^2(K, mu_2 x mu_2), decided on the rational model."""
    return is_unramified_over_C(add_classes(u, v), s)
