"""Square classes and rational curves on the two base surfaces.

The function field K of the surface is presented through its affine
chart: on P^2 the chart z=1 with coordinates (x, y), on P^1 x P^1 the
chart x0=y0=1 with coordinates (x1, y1).  Elements of K are reduced
fractions of chart polynomials; prime divisors are irreducible
(bi)homogeneous polynomials on the projective model, including the
chart-boundary divisors.

The constant field is algebraically closed, so every nonzero rational
constant is a square: square classes drop constants, and squareness of
a restriction to a rational curve is decided by "the square-free part
over Q is constant", which is equivalent over C(t) because a
nonconstant square-free rational polynomial has a simple complex root.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd as _int_gcd

from .poly import (
    Poly,
    PolyError,
    RatFn,
    as_ratfn,
    degree_profile,
    exact_div,
    factor,
    format_poly,
    is_irreducible,
    multiplicity,
    normalize,
    poly_gcd,
    square_class_part,
)

T_VARS = ("t",)


class UnsupportedCurveError(Exception):
    """The divisor is outside the parametrizable class."""


@dataclass(frozen=True)
class SurfaceModel:
    kind: str                       # "p2" | "p1xp1"
    variables: tuple[str, ...]      # projective coordinates
    chart_vars: tuple[str, ...]     # coordinates of the affine chart
    boundary_vars: tuple[str, ...]  # set to 1 on the chart

    def __str__(self) -> str:
        return self.kind


_P2 = SurfaceModel("p2", ("x", "y", "z"), ("x", "y"), ("z",))
_P1XP1 = SurfaceModel("p1xp1", ("x0", "x1", "y0", "y1"), ("x1", "y1"), ("x0", "y0"))


def surface(kind: str) -> SurfaceModel:
    if kind == "p2":
        return _P2
    if kind == "p1xp1":
        return _P1XP1
    raise ValueError(f"unknown surface {kind!r}")


def blocks(s: SurfaceModel) -> tuple[tuple[str, str], tuple[str, str]]:
    """The two ruling blocks of P^1 x P^1."""
    if s.kind != "p1xp1":
        raise ValueError("blocks are only defined on p1xp1")
    return ("x0", "x1"), ("y0", "y1")


def is_chart_poly(s: SurfaceModel, p: Poly) -> bool:
    return p.variables == s.variables and all(
        p.degree_in(v) <= 0 for v in s.boundary_vars)


def require_chart(s: SurfaceModel, p: Poly) -> None:
    if p.variables != s.variables:
        raise PolyError(f"expected polynomial over {s.variables}")
    if not is_chart_poly(s, p):
        raise PolyError(f"{p} involves a boundary variable of the {s.kind} chart")


def dehomogenize(s: SurfaceModel, p: Poly) -> Poly:
    return p.substitute({v: 1 for v in s.boundary_vars})


def homogenize(s: SurfaceModel, p: Poly) -> Poly:
    """Minimal (bi)homogenization of a chart polynomial: boundary variables
    pad each term up to the (bi)degree, and do not divide the result."""
    require_chart(s, p)
    if p.is_zero():
        raise PolyError("cannot homogenize the zero polynomial")
    vs = s.variables
    if s.kind == "p2":
        d = p.total_degree()
        iz = vs.index("z")
        ix, iy = vs.index("x"), vs.index("y")
        terms = {}
        for e, c in p._terms.items():
            ne = list(e)
            ne[iz] = d - e[ix] - e[iy]
            terms[tuple(ne)] = c
        return Poly(vs, terms)
    dx = p.degree_in("x1")
    dy = p.degree_in("y1")
    i0, i1 = vs.index("x0"), vs.index("x1")
    j0, j1 = vs.index("y0"), vs.index("y1")
    terms = {}
    for e, c in p._terms.items():
        ne = list(e)
        ne[i0] = dx - e[i1]
        ne[j0] = dy - e[j1]
        terms[tuple(ne)] = c
    return Poly(vs, terms)


def is_model_homogeneous(s: SurfaceModel, p: Poly) -> bool:
    if p.is_zero():
        return False
    if s.kind == "p2":
        return degree_profile(p) != "inhomogeneous"
    return degree_profile(p, blocks(s)) != "inhomogeneous"


def graded_pair(s: SurfaceModel, f: RatFn) -> tuple[Poly, Poly]:
    """A degree-zero presentation of a chart function: two (bi)homogeneous
    polynomials of equal (bi)degree with f = first/second on the chart."""
    num, den = f.num, f.den
    require_chart(s, num)
    require_chart(s, den)
    if num.is_zero():
        raise PolyError("graded pair of zero")
    hn = homogenize(s, num)
    hd = homogenize(s, den)
    vs = s.variables
    if s.kind == "p2":
        z = Poly.var(vs, "z")
        return hn * z ** den.total_degree(), hd * z ** num.total_degree()
    x0 = Poly.var(vs, "x0")
    y0 = Poly.var(vs, "y0")
    pn = hn * x0 ** den.degree_in("x1") * y0 ** den.degree_in("y1")
    pd = hd * x0 ** num.degree_in("x1") * y0 ** num.degree_in("y1")
    return pn, pd


# -------------------------------------------------------------- prime divisors


@dataclass(frozen=True)
class PrimeDivisor:
    surface: SurfaceModel
    poly: Poly  # irreducible, normalized, (bi)homogeneous

    def __str__(self) -> str:
        return format_poly(self.poly)

    def __repr__(self) -> str:
        return f"PrimeDivisor({self})"


def prime_divisor(s: SurfaceModel, p: Poly) -> PrimeDivisor:
    if p.variables != s.variables:
        raise PolyError(f"divisor polynomial must live over {s.variables}")
    if p.is_zero() or p.is_constant():
        raise PolyError("a prime divisor needs a non-constant polynomial")
    q = normalize(p)
    if not is_model_homogeneous(s, q):
        raise PolyError(f"{q} is not (bi)homogeneous on {s.kind}")
    if not is_irreducible(q):
        raise PolyError(f"{q} is not irreducible")
    return PrimeDivisor(s, q)


def coordinate_divisors(s: SurfaceModel) -> tuple[PrimeDivisor, ...]:
    return tuple(PrimeDivisor(s, Poly.var(s.variables, v)) for v in s.variables)


def valuation_along(f: RatFn | Poly, c: PrimeDivisor) -> int:
    """Order of vanishing of a chart function along the divisor."""
    f = as_ratfn(f)
    if f.is_zero():
        raise PolyError("valuation of zero is undefined")
    pn, pd = graded_pair(c.surface, f)
    return multiplicity(pn, c.poly) - multiplicity(pd, c.poly)


# -------------------------------------------------------------- square classes


@dataclass(frozen=True)
class SquareClass:
    """Element of K*/(K*)^2 over an algebraically closed constant field,
    as the set of irreducible chart polynomials with odd exponent."""

    variables: tuple[str, ...]
    support: frozenset[Poly]

    @property
    def is_trivial(self) -> bool:
        return not self.support

    def __mul__(self, other: SquareClass) -> SquareClass:
        if self.variables != other.variables:
            raise PolyError("square classes over different variable sets")
        return SquareClass(self.variables, self.support ^ other.support)

    def representative(self) -> Poly:
        acc = Poly.const(self.variables, 1)
        for q in sorted(self.support, key=lambda q: (q.total_degree(), str(q))):
            acc = acc * q
        return acc

    def __str__(self) -> str:
        if not self.support:
            return "1"
        return "{" + ", ".join(
            format_poly(q) for q in sorted(self.support, key=lambda q: (q.total_degree(), str(q)))) + "}"


def square_class(f: RatFn | Poly) -> SquareClass:
    """Square-free support of f with exponents reduced mod 2, constants
    dropped (they are squares over C)."""
    f = as_ratfn(f)
    if f.is_zero():
        raise PolyError("zero has no square class")
    counts: dict[Poly, int] = {}
    for part in (f.num, f.den):
        for q, e in factor(part).factors:
            counts[q] = counts.get(q, 0) + e
    support = frozenset(q for q, e in counts.items() if e % 2)
    return SquareClass(f.variables, support)


def multiply_classes(a: SquareClass, b: SquareClass) -> SquareClass:
    return a * b


@dataclass(frozen=True)
class CurveClass:
    """Square class of C(t)*, canonically represented by the square-free
    normalized part of a defining rational function."""

    rep: Poly  # over ("t",); the constant 1 for the trivial class

    @staticmethod
    def trivial() -> CurveClass:
        return CurveClass(Poly.const(T_VARS, 1))

    @staticmethod
    def from_ratfn(r: RatFn) -> CurveClass:
        if r.is_zero():
            raise PolyError("zero has no square class on the curve")
        return CurveClass(square_class_part(r.num * r.den))

    @property
    def is_trivial(self) -> bool:
        return self.rep.is_constant()

    def __mul__(self, other: CurveClass) -> CurveClass:
        return CurveClass(square_class_part(self.rep * other.rep))

    def __str__(self) -> str:
        return format_poly(self.rep)


# -------------------------------------------------------------------- curves


@dataclass(frozen=True)
class CurveParam:
    """Rational parametrization of a divisor: projective coordinates as
    polynomials in t (3 for P^2, 4 for P^1 x P^1)."""

    curve: PrimeDivisor
    coords: tuple[Poly, ...]
    point: tuple[int, ...] | None  # rational point used for a conic


def _normalize_int_vector(v: tuple[int, ...]) -> tuple[int, ...]:
    g = 0
    for a in v:
        g = _int_gcd(g, abs(a))
    if g:
        v = tuple(a // g for a in v)
    for a in v:
        if a:
            return v if a > 0 else tuple(-b for b in v)
    return v


def _line_points(coeffs: tuple[int, int, int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Two independent points spanning the line a*X + b*Y + c*Z = 0."""
    a, b, c = coeffs
    cands = [(b, -a, 0), (c, 0, -a), (0, c, -b)]
    kept: list[tuple[int, ...]] = []
    for v in cands:
        if all(k == 0 for k in v):
            continue
        nv = _normalize_int_vector(v)
        if nv not in kept:
            kept.append(nv)
    if len(kept) < 2:
        raise PolyError(f"degenerate line coefficients {coeffs}")
    return kept[0], kept[1]


def _int_coeffs(p: Poly, names: tuple[str, ...]) -> tuple[int, ...]:
    q = normalize(p)
    out = []
    for name in names:
        e = tuple(1 if v == name else 0 for v in p.variables)
        c = q.coefficient(e)
        assert c.denominator == 1
        out.append(c.numerator)
    return tuple(out)


def _gram(C: Poly, names: tuple[str, str, str]) -> list[list]:
    from fractions import Fraction
    idx = [C.variables.index(n) for n in names]

    def coeff(i: int, j: int) -> Fraction:
        e = [0] * len(C.variables)
        e[idx[i]] += 1
        e[idx[j]] += 1
        return C.coefficient(tuple(e))

    M = [[Fraction(0)] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            M[i][j] = coeff(i, i) if i == j else coeff(i, j) / 2
    return M


def _search_conic_point(C: Poly, names: tuple[str, str, str], bound: int) -> tuple[int, int, int] | None:
    """First projective rational point of height <= bound on the conic, in
    lexicographic scan order by growing height shells.  A definite Gram
    matrix has no real zero at all, so the search is skipped."""
    M = _gram(C, names)
    m1 = M[0][0]
    m2 = M[0][0] * M[1][1] - M[0][1] * M[1][0]
    m3 = (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
          - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
          + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]))
    if (m1 > 0 and m2 > 0 and m3 > 0) or (m1 < 0 and m2 > 0 and m3 < 0):
        return None

    # integer evaluation: clear denominators once
    idx = [C.variables.index(n) for n in names]
    L = 1
    for c in C._terms.values():
        L = L * c.denominator // _int_gcd(L, c.denominator)
    terms = [((e[idx[0]], e[idx[1]], e[idx[2]]), int(c * L))
             for e, c in C._terms.items()]

    def value(a: int, b: int, c: int) -> int:
        total = 0
        for (i, j, k), coef in terms:
            total += coef * a ** i * b ** j * c ** k
        return total

    for h in range(bound + 1):
        for a in range(-h, h + 1):
            inner = abs(a) < h
            for b in range(-h, h + 1):
                cs = (range(-h, h + 1) if not (inner and abs(b) < h) else (-h, h))
                for c in cs:
                    if a == 0 and b == 0 and c == 0:
                        continue
                    if value(a, b, c) == 0:
                        return _normalize_int_vector((a, b, c))  # type: ignore[return-value]
    return None


def _compose(p: Poly, coords: tuple[Poly, ...]) -> Poly:
    """Evaluate a polynomial on t-parametrized coordinates."""
    acc = Poly.zero(T_VARS)
    one = Poly.const(T_VARS, 1)
    for e, c in p._terms.items():
        term = one * c
        for k, exp in enumerate(e):
            if exp:
                term = term * coords[k] ** exp
        acc = acc + term
    return acc


def _verify_param(c: PrimeDivisor, coords: tuple[Poly, ...]) -> None:
    if not _compose(c.poly, coords).is_zero():
        raise PolyError(f"parametrization of {c} failed verification")
    # non-constant: some coordinate ratio must genuinely vary
    n = len(coords)
    for i in range(n):
        for j in range(i + 1, n):
            w = coords[i] * coords[j].derivative("t") - coords[j] * coords[i].derivative("t")
            if not w.is_zero():
                return
    raise PolyError(f"parametrization of {c} is constant")


CONIC_POINT_HEIGHT_BOUND = 100


@lru_cache(maxsize=None)
def parametrize(c: PrimeDivisor) -> CurveParam:
    """Rational parametrization of a line, ruling, or conic-type divisor."""
    s = c.surface
    if s.kind == "p2":
        d = c.poly.total_degree()
        if d == 1:
            a, b, cz = _int_coeffs(c.poly, ("x", "y", "z"))
            va, vb = _line_points((a, b, cz))
            t = Poly.var(T_VARS, "t")
            coords = tuple(Poly.const(T_VARS, vb[k]) + t * va[k] for k in range(3))
            param = CurveParam(c, coords, None)
        elif d == 2:
            pt = _search_conic_point(c.poly, ("x", "y", "z"), CONIC_POINT_HEIGHT_BOUND)
            if pt is None:
                raise UnsupportedCurveError(
                    f"no rational point of height <= {CONIC_POINT_HEIGHT_BOUND} on {c}")
            coords = _conic_param_checked(c.poly, ("x", "y", "z"), pt)
            param = CurveParam(c, coords, pt)
        else:
            raise UnsupportedCurveError(f"degree-{d} curve {c} on p2 is unsupported")
        _verify_param(c, param.coords)
        return param

    # p1xp1
    bd = degree_profile(c.poly, blocks(s))
    t = Poly.var(T_VARS, "t")
    one = Poly.const(T_VARS, 1)
    if bd == (1, 0):
        a, b = _int_coeffs(c.poly, ("x0", "x1"))
        pt = _normalize_int_vector((b, -a))
        coords = (Poly.const(T_VARS, pt[0]), Poly.const(T_VARS, pt[1]), one, t)
        param = CurveParam(c, coords, None)
    elif bd == (0, 1):
        a, b = _int_coeffs(c.poly, ("y0", "y1"))
        pt = _normalize_int_vector((b, -a))
        coords = (one, t, Poly.const(T_VARS, pt[0]), Poly.const(T_VARS, pt[1]))
        param = CurveParam(c, coords, None)
    else:
        chart = dehomogenize(s, c.poly)
        if chart.is_constant() or chart.total_degree() > 2:
            raise UnsupportedCurveError(
                f"divisor {c} of bidegree {bd} is outside the supported class")
        # plane model in the chart coordinates plus a homogenizing slot
        aux_vars = ("u", "v", "w")
        g = _to_plane(chart, s.chart_vars, aux_vars)
        if g.total_degree() == 1:
            a, b, cz = _int_coeffs(g, aux_vars)
            va, vb = _line_points((a, b, cz))
            U, V, W = (Poly.const(T_VARS, vb[k]) + t * va[k] for k in range(3))
            pt3 = None
        else:
            pt3 = _search_conic_point(g, aux_vars, CONIC_POINT_HEIGHT_BOUND)
            if pt3 is None:
                raise UnsupportedCurveError(
                    f"no rational point of height <= {CONIC_POINT_HEIGHT_BOUND} on {c}")
            U, V, W = _conic_param_checked(g, aux_vars, pt3)
        x0, x1 = _reduce_pair(W, U)
        y0, y1 = _reduce_pair(W, V)
        coords = (x0, x1, y0, y1)
        param = CurveParam(c, coords, pt3)
    _verify_param(c, param.coords)
    return param


def _to_plane(chart: Poly, chart_vars: tuple[str, ...], aux: tuple[str, str, str]) -> Poly:
    """Homogenize a chart curve equation into the plane (u, v, w)."""
    d = chart.total_degree()
    i1 = chart.variables.index(chart_vars[0])
    i2 = chart.variables.index(chart_vars[1])
    terms = {}
    for e, c in chart._terms.items():
        a, b = e[i1], e[i2]
        terms[(a, b, d - a - b)] = c
    return Poly(aux, terms)


def _conic_param_checked(C: Poly, names: tuple[str, str, str], pt) -> tuple[Poly, Poly, Poly]:
    coords = _conic_param_raw(C, names, pt)
    # verify C(coords) == 0 in the t-ring
    comp = Poly.zero(T_VARS)
    idx = [C.variables.index(n) for n in names]
    for e, c in C._terms.items():
        term = Poly.const(T_VARS, c)
        for k, i in enumerate(idx):
            if e[i]:
                term = term * coords[k] ** e[i]
        comp = comp + term
    if not comp.is_zero():
        raise PolyError("conic parametrization failed verification")
    return coords


def _conic_param_raw(C: Poly, names: tuple[str, str, str], point) -> tuple[Poly, Poly, Poly]:
    from fractions import Fraction
    M = _gram(C, names)

    def mdot(u, v) -> Fraction:
        return sum(u[i] * M[i][j] * v[j] for i in range(3) for j in range(3))

    P = point
    base = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (1, 0, 1), (0, 1, 1), (1, 1, 1)]
    chosen = None
    for i in range(len(base)):
        for j in range(i + 1, len(base)):
            Qa, Qb = base[i], base[j]
            det = (P[0] * (Qa[1] * Qb[2] - Qa[2] * Qb[1])
                   - P[1] * (Qa[0] * Qb[2] - Qa[2] * Qb[0])
                   + P[2] * (Qa[0] * Qb[1] - Qa[1] * Qb[0]))
            if det == 0:
                continue
            if mdot(P, Qa) == 0 and mdot(P, Qb) == 0:
                continue
            chosen = (Qa, Qb)
            break
        if chosen:
            break
    assert chosen is not None
    Qa, Qb = chosen
    t = Poly.var(T_VARS, "t")
    R = [Poly.const(T_VARS, Qa[k]) + t * Qb[k] for k in range(3)]
    CR = Poly.const(T_VARS, mdot(Qa, Qa)) + t * (2 * mdot(Qa, Qb)) + t * t * mdot(Qb, Qb)
    BPR = Poly.const(T_VARS, 2 * mdot(P, Qa)) + t * (2 * mdot(P, Qb))
    coords = [CR * P[k] - BPR * R[k] for k in range(3)]
    g: Poly | None = None
    for c in coords:
        if c.is_zero():
            continue
        g = c if g is None else poly_gcd(g, c)
    if g is not None and not g.is_constant():
        coords = [exact_div(c, g) if not c.is_zero() else c for c in coords]  # type: ignore[list-item]
    return tuple(coords)  # type: ignore[return-value]


def _reduce_pair(w: Poly, u: Poly) -> tuple[Poly, Poly]:
    """Reduce one P^1 factor of a parametrized point (w : u)."""
    if w.is_zero() or u.is_zero():
        return w, u
    g = poly_gcd(w, u)
    if not g.is_constant():
        w = exact_div(w, g)  # type: ignore[assignment]
        u = exact_div(u, g)  # type: ignore[assignment]
    return w, u


# ------------------------------------------------------------------ restriction


def restrict_unit(f: RatFn | Poly, c: PrimeDivisor) -> RatFn:
    """Restriction of a unit along c to the curve, as a rational function of
    the curve parameter t."""
    f = as_ratfn(f)
    if f.is_zero():
        raise PolyError("cannot restrict zero")
    pn, pd = graded_pair(c.surface, f)
    vn = multiplicity(pn, c.poly)
    vd = multiplicity(pd, c.poly)
    if vn != vd:
        raise PolyError(f"{f} is not a unit along {c} (valuation {vn - vd})")
    if vn:
        pn = exact_div(pn, c.poly ** vn)
        pd = exact_div(pd, c.poly ** vd)
        assert pn is not None and pd is not None
    param = parametrize(c)
    num_t = _compose(pn, param.coords)
    den_t = _compose(pd, param.coords)
    if den_t.is_zero() or num_t.is_zero():
        raise PolyError(f"restriction of {f} to {c} degenerated")
    return RatFn(num_t, den_t)


def is_square_on_curve(f: RatFn | Poly, c: PrimeDivisor) -> bool:
    """True iff f, a unit along c, restricts to a square in C(curve)."""
    return CurveClass.from_ratfn(restrict_unit(f, c)).is_trivial


@dataclass(frozen=True)
class HenselWitness:
    """Record of the completed-local-ring square test for a discriminant."""

    divisor: PrimeDivisor
    valuation: int
    unit_restriction: RatFn | None  # restriction of d / pi^v to the curve
    is_square: bool | None
    passed: bool


def _padding_form(s: SurfaceModel, pi: Poly, block: tuple[str, str]) -> Poly:
    for name in block:
        v = Poly.var(s.variables, name)
        if v != pi:
            return v
    raise PolyError("no padding form available")


def hensel_report(d: RatFn | Poly, c: PrimeDivisor) -> HenselWitness:
    """Decide whether d becomes a square in the fraction field of the
    completed local ring at c: even valuation, and the unit part restricts
    to a square in the residue field."""
    d = as_ratfn(d)
    if d.is_zero():
        raise PolyError("discriminant is zero")
    s = c.surface
    v = valuation_along(d, c)
    if v % 2 != 0:
        return HenselWitness(c, v, None, None, False)
    pn, pd = graded_pair(s, d)
    vn = multiplicity(pn, c.poly)
    vd = multiplicity(pd, c.poly)
    if vn:
        pn = exact_div(pn, c.poly ** vn)
        assert pn is not None
    if vd:
        pd = exact_div(pd, c.poly ** vd)
        assert pd is not None
    # rebalance degrees with boundary-side units; the exponent shift is
    # v * deg(pi) per block, even, so the square class on the curve is safe
    if s.kind == "p2":
        diff = pn.total_degree() - pd.total_degree()
        pad = _padding_form(s, c.poly, ("z", "x", "y"))
        if diff < 0:
            pn = pn * pad ** (-diff)
        elif diff > 0:
            pd = pd * pad ** diff
    else:
        dpx = degree_profile(pn, blocks(s))
        dqx = degree_profile(pd, blocks(s))
        dx = dpx[0] - dqx[0]
        dy = dpx[1] - dqx[1]
        padx = _padding_form(s, c.poly, ("x0", "x1"))
        pady = _padding_form(s, c.poly, ("y0", "y1"))
        if dx < 0:
            pn = pn * padx ** (-dx)
        elif dx > 0:
            pd = pd * padx ** dx
        if dy < 0:
            pn = pn * pady ** (-dy)
        elif dy > 0:
            pd = pd * pady ** dy
    param = parametrize(c)
    num_t = _compose(pn, param.coords)
    den_t = _compose(pd, param.coords)
    if num_t.is_zero() or den_t.is_zero():
        raise PolyError(f"unit part of {d} degenerated along {c}")
    r = RatFn(num_t, den_t)
    ok = CurveClass.from_ratfn(r).is_trivial
    return HenselWitness(c, v, r, ok, ok)


def hensel_square_test(d: RatFn | Poly, c: PrimeDivisor) -> bool:
    return hensel_report(d, c).passed
