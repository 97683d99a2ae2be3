"""The verdict engine.

Encodes the rationality / open / not-stably-rational trichotomies for
quadric surface bundle types over P^2 and over P^1 x P^1, constructs the
explicit degeneration forms for the certifiable branch, runs the
Pirutka residue-matching diagnostic and the Arason nontriviality
criterion on the degenerate fiber, and assembles certificates in which
every boolean can be recomputed from the stored data.

The engine treats one statement as an imported base fact, cited in
certificates by the tag "HPT-Prop11": for the quadric given by
<y, x, xy, F(x,y,1)> over C(x,y), the pullback of the symbol (x, y) is
nonzero and unramified over C.  Everything the engine can check about
that fact (nonzero residues of (x, y), nontrivial discriminant, the
residue-matching condition at every divisor) is recomputed and recorded.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from . import __version__ as ENGINE_VERSION
from .brauer import BrauerClass, ResidueProfile, residue_profile
from .funfield import (
    CurveClass,
    HenselWitness,
    PrimeDivisor,
    SquareClass,
    SurfaceModel,
    UnsupportedCurveError,
    hensel_report,
    surface,
)
from .poly import Poly, RatFn, format_poly
from .quadform import (
    BundleType,
    DiagForm,
    SimilarityWitness,
    canonical_quadric,
    clifford_invariant,
    discriminant,
    generic_fiber,
    hpt_alpha,
    is_weak_bundle,
    make_diag_form,
    normalize_to_hpt,
    type_of,
    verify_witness,
    weak_gcd,
)

BASE_FACT = "HPT-Prop11"

RATIONAL = "Rational"
NOT_STABLY_RATIONAL = "NotStablyRational"
OPEN = "Open"
UNKNOWN = "Unknown"

OPEN_P2_TYPES = {(1, 1, 1, 3), (0, 2, 2, 2)}


class CertifyError(Exception):
    """A certificate link failed; the message names the failing link."""


class ConstructionError(CertifyError):
    """No degeneration form of the requested type exists for the rule."""


# ----------------------------------------------------------------- reports


@dataclass(frozen=True)
class PirutkaRow:
    divisor: PrimeDivisor
    alpha_residue: CurveClass
    beta_residue: CurveClass
    hensel: HenselWitness

    @property
    def alpha_nonzero(self) -> bool:
        return not self.alpha_residue.is_trivial

    @property
    def residues_match(self) -> bool:
        return self.alpha_residue == self.beta_residue

    @property
    def satisfied(self) -> bool:
        return (not self.alpha_nonzero) or (self.residues_match and self.hensel.passed)


@dataclass(frozen=True)
class PirutkaReport:
    rows: tuple[PirutkaRow, ...]
    passed: bool | None           # None = inconclusive (unsupported divisor)
    problems: tuple[str, ...] = ()


@dataclass(frozen=True)
class ArasonResult:
    discriminant_nontrivial: bool
    alpha_ramified: bool
    witness: PrimeDivisor | None
    note: str

    @property
    def passed(self) -> bool:
        return self.discriminant_nontrivial and self.alpha_ramified


def pirutka_check(fiber: DiagForm, alpha: BrauerClass) -> PirutkaReport:
    """Residue-matching condition: wherever the residue of alpha is nonzero,
    it must equal the residue of the Clifford invariant, and the
    discriminant must become a square in the completed local ring."""
    s = fiber.surface
    problems: list[str] = []
    try:
        alpha_prof = residue_profile(alpha, s)
        beta = clifford_invariant(fiber)
        beta_prof = residue_profile(beta, s)
    except UnsupportedCurveError as exc:
        return PirutkaReport((), None, (str(exc),))
    divisors = sorted(set(alpha_prof.divisors()) | set(beta_prof.divisors()), key=str)
    d_rep = RatFn(discriminant(fiber).representative())
    rows: list[PirutkaRow] = []
    for c in divisors:
        try:
            hz = hensel_report(d_rep, c)
        except UnsupportedCurveError as exc:
            problems.append(f"{c}: {exc}")
            continue
        rows.append(PirutkaRow(
            divisor=c,
            alpha_residue=alpha_prof.residue_at(c),
            beta_residue=beta_prof.residue_at(c),
            hensel=hz,
        ))
    if problems:
        return PirutkaReport(tuple(rows), None, tuple(problems))
    return PirutkaReport(tuple(rows), all(r.satisfied for r in rows))


def arason_nontriviality(fiber: DiagForm, alpha: BrauerClass) -> ArasonResult:
    """Nontrivial discriminant makes the pullback to the quadric injective,
    so a class with a nonzero residue pulls back to a nonzero class."""
    d = discriminant(fiber)
    prof = residue_profile(alpha, fiber.surface)
    witness = prof.divisors()[0] if not prof.is_empty else None
    if d.is_trivial:
        note = "discriminant trivial: the pullback kernel is {1, clifford}"
    elif prof.is_empty:
        note = "class has no nonzero residue; nontriviality not witnessed"
    else:
        note = f"nonzero residue at {witness} and nontrivial discriminant"
    return ArasonResult(not d.is_trivial, not prof.is_empty, witness, note)


# -------------------------------------------------------------- certificates


@dataclass(frozen=True)
class Certificate:
    input_type: BundleType
    rule: str
    degeneration: DiagForm
    weak_bundle_ok: bool
    weak_gcd: Poly
    fiber: DiagForm
    similarity: SimilarityWitness
    discriminant: SquareClass
    alpha: BrauerClass
    alpha_residues: ResidueProfile
    clifford: BrauerClass
    pirutka: PirutkaReport
    arason: ArasonResult
    conclusion: tuple[str, ...]
    engine_version: str = ENGINE_VERSION
    base_fact: str = BASE_FACT


@dataclass(frozen=True)
class Verdict:
    outcome: str
    reason: str
    bundle_type: BundleType
    certificate: Certificate | None = None
    notes: tuple[str, ...] = ()


# ----------------------------------------------------- degenerations over P^2


def construct_degeneration_p2(t: BundleType) -> tuple[DiagForm, str]:
    """The explicit weak-bundle degeneration for a certifiable type."""
    s = surface("p2")
    t.validate()
    d0, d1, d2, d3 = t.ds()
    F = canonical_quadric(s)
    x, y, z = (Poly.var(s.variables, v) for v in s.variables)
    if (d0, d1, d2, d3) == (2, 2, 2, 2):
        return make_diag_form((y * z, x * z, x * y, F), s), "hpt-direct"
    if sum(t.ds()) < 8 or d1 < 1 or d3 < 3:
        raise ConstructionError(f"type {t} is not in a certifiable branch")
    if d0 % 2 == 0:
        entries = (z ** d0, x * z ** (d1 - 1), x ** (d2 - 1) * y,
                   y * z ** (d3 - 3) * F)
        rule = "q2"
    elif d2 >= 3:
        entries = (z ** d0, x ** d1, x * y * z ** (d2 - 2),
                   y * z ** (d3 - 3) * F)
        rule = "q1"
    else:
        # d0 odd with d2 = 1 forces d0 = d1 = d2 = 1 and d3 >= 5
        assert d2 == 1 and d3 - 4 >= 1, f"exponent safety violated for {t}"
        entries = (z ** d0, x ** d1, y * z ** (d2 - 1),
                   x * y * z ** (d3 - 4) * F)
        rule = "q3"
    return make_diag_form(entries, s), rule


def verdict_p2(data) -> Verdict:
    """Trichotomy for quadric surface bundle types over P^2."""
    t = BundleType.of("p2", data)
    t.validate()
    notes = ("input reordered to the lexicographic form",) if t.reordered else ()
    ds = t.ds()
    if ds[1] == 0:
        # at least two zero degrees: a constant 2x2 block gives a section
        return Verdict(RATIONAL, "section-constant-block", t, notes=notes)
    if sum(ds) <= 4:
        # remaining case is (1,1,1,1): projection of a (1,2)-hypersurface
        return Verdict(RATIONAL, "section-bidegree-12-projection", t, notes=notes)
    if ds in OPEN_P2_TYPES:
        return Verdict(OPEN, "open-sextic-k3", t, notes=notes)
    cert = build_certificate(t)
    return Verdict(NOT_STABLY_RATIONAL, f"degeneration-{cert.rule}", t,
                   certificate=cert, notes=notes)


# ---------------------------------------------- degenerations over P^1 x P^1


def select_rule_p1xp1(t: BundleType) -> str:
    """Case dispatch in the not-stably-rational branch (d3, e3 >= 3)."""
    d = t.ds()
    e = t.es()
    if e[1] >= 1:
        sub = {(0, 0): "A1", (1, 0): "A2", (0, 1): "A3", (1, 1): "A4"}
        return sub[(d[0] % 2, e[0] % 2)]
    if e[0] >= 1:
        return "B1" if d[0] % 2 == 0 else "B2"
    return "C1" if d[0] % 2 == 0 else "C2"


def _mono(s: SurfaceModel, **exps: int) -> Poly:
    for name, k in exps.items():
        if k < 0:
            raise ConstructionError(f"negative exponent {name}^{k}")
    return Poly.monomial(s.variables, exps)


def construct_degeneration_p1xp1(t: BundleType, rule: str) -> DiagForm:
    """The explicit degeneration for the selected rule; every exponent is
    checked non-negative."""
    s = surface("p1xp1")
    t.validate()
    if rule in ("Q1", "Q2"):
        return _cor53_form(t, rule)
    d = t.ds()
    e = t.es()
    h = canonical_quadric(s)
    m = lambda **kw: _mono(s, **kw)  # noqa: E731
    tail = m(x0=d[3] - 3, y0=e[3] - 3, x1=1, y1=1) * h
    if rule == "A1":
        entries = (m(x1=d[0], y1=e[0]),
                   m(x0=d[1], y0=e[1] - 1, y1=1),
                   m(x0=d[2] - 1, x1=1, y0=e[2]),
                   tail)
    elif rule == "A2":
        entries = (m(x0=d[0], y1=e[0]),
                   m(x0=d[1], y0=e[1] - 1, y1=1),
                   m(x1=d[2], y0=e[2]),
                   tail)
    elif rule == "A3":
        entries = (m(x1=d[0], y0=e[0]),
                   m(x0=d[1], y1=e[1]),
                   m(x0=d[2] - 1, x1=1, y0=e[2]),
                   tail)
    elif rule == "A4":
        entries = (m(x0=d[0], y0=e[0]),
                   m(x0=d[1], y1=e[1]),
                   m(x1=d[2], y0=e[2]),
                   tail)
    elif rule == "B1":
        entries = (m(x1=d[0], y0=e[0] - 1, y1=1),
                   m(x0=d[1]),
                   m(x0=d[2] - 1, x1=1, y0=e[2]),
                   tail)
    elif rule == "B2":
        entries = (m(x0=d[0], y0=e[0] - 1, y1=1),
                   m(x0=d[1]),
                   m(x1=d[2], y0=e[2]),
                   tail)
    elif rule == "C1":
        entries = (m(x1=d[0]),
                   m(x0=d[1] - 1, x1=1),
                   m(x0=d[2], y0=e[2] - 1, y1=1),
                   tail)
    elif rule == "C2":
        entries = (m(x0=d[0]),
                   m(x1=d[1]),
                   m(x0=d[2], y0=e[2] - 1, y1=1),
                   tail)
    else:
        raise ConstructionError(f"unknown rule {rule!r}")
    form = make_diag_form(entries, s)
    if not is_weak_bundle(form):
        raise ConstructionError(f"rule {rule} produced non-coprime entries for {t}")
    return form


def cond_cor53_q1(t: BundleType) -> bool:
    d, e = t.ds(), t.es()
    return d[1] >= 1 and d[3] >= 2 and e[1] + e[2] >= 1 and e[3] >= 3


def cond_cor53_q2(t: BundleType) -> bool:
    d, e = t.ds(), t.es()
    return (d[1] >= 1 and d[3] >= 2 and e[0] >= 1
            and e[1] + e[2] >= 1 and e[2] >= 2)


def cor53_rule(t: BundleType) -> str | None:
    if cond_cor53_q1(t):
        return "Q1"
    if cond_cor53_q2(t):
        return "Q2"
    return None


def _cor53_bases(s: SurfaceModel, rule: str) -> list[tuple[Poly, tuple[int, int]]]:
    h = canonical_quadric(s)
    x1 = Poly.var(s.variables, "x1")
    y1 = Poly.var(s.variables, "y1")
    one = Poly.const(s.variables, 1)
    if rule == "Q1":
        # <1, x1, x1*y1, y1*h>
        return [(one, (0, 0)), (x1, (1, 0)), (x1 * y1, (1, 1)), (y1 * h, (2, 3))]
    # <y1, x1, x1*y1, h>
    return [(y1, (0, 1)), (x1, (1, 0)), (x1 * y1, (1, 1)), (h, (2, 2))]


def _cor53_form(t: BundleType, rule: str) -> DiagForm:
    """Pad a starting form of the requested similarity class up to the
    target type: boundary powers are free, chart powers must stay even.
    Among the valid assignments the one with the least total boundary
    exponent wins (ties broken by the printed form)."""
    from itertools import permutations, product

    s = surface("p1xp1")
    bases = _cor53_bases(s, rule)
    slots = t.data  # lex-sorted pairs
    best: tuple[int, str, DiagForm] | None = None
    for assign in permutations(range(4)):
        if not all(slots[i][0] >= bases[assign[i]][1][0]
                   and slots[i][1] >= bases[assign[i]][1][1] for i in range(4)):
            continue
        pad_options = []
        for i in range(4):
            base_poly, (p, q) = bases[assign[i]]
            dx = slots[i][0] - p
            dy = slots[i][1] - q
            xopts = sorted({dx % 2, dx})      # x0-exponent; rest goes to x1^even
            yopts = sorted({dy % 2, dy})
            pad_options.append([(a, (dx - a) // 2, b, (dy - b) // 2)
                                for a in xopts for b in yopts])
        for pads in product(*pad_options):
            entries = []
            boundary_total = 0
            for i in range(4):
                base_poly, _ = bases[assign[i]]
                a, bx, b, by = pads[i]
                boundary_total += a + b
                entries.append(
                    base_poly * _mono(s, x0=a, x1=2 * bx, y0=b, y1=2 * by))
            form = make_diag_form(tuple(entries), s)
            if type_of(form).data != t.data:
                continue
            if not is_weak_bundle(form):
                continue
            key = (boundary_total, str(form), form)
            if best is None or (key[0], key[1]) < (best[0], best[1]):
                best = key
    if best is None:
        raise ConstructionError(
            f"no degeneration of type {t} exists in the {rule} similarity class")
    return best[2]


def verdict_p1xp1(data) -> Verdict:
    """Trichotomy for quadric surface bundle types over P^1 x P^1."""
    t = BundleType.of("p1xp1", data)
    t.validate()
    notes: list[str] = []
    if t.reordered:
        notes.append("input reordered to the lexicographic form")
    d, e = t.ds(), t.es()
    if d[3] >= 3 and e[3] >= 3:
        if d[2] == 0:
            return Verdict(RATIONAL, "section-conic-bundle-first-factor", t,
                           notes=tuple(notes))
        if d[1] == 0 and e[1] == 0 and e[0] == 0:
            return Verdict(RATIONAL, "section-constant-block", t, notes=tuple(notes))
        if e[0] == 0 and e[1] == 0 and e[2] == 0:
            return Verdict(RATIONAL, "section-conic-bundle-second-factor", t,
                           notes=tuple(notes))
        rule = select_rule_p1xp1(t)
        alt = cor53_rule(t)
        if alt is not None:
            notes.append(f"also certifiable via the low-degree route {alt}")
        cert = build_certificate(t, rule=rule)
        return Verdict(NOT_STABLY_RATIONAL, f"degeneration-{cert.rule}", t,
                       certificate=cert, notes=tuple(notes))
    rule = cor53_rule(t)
    if rule is None:
        return Verdict(UNKNOWN, "outside-corollary-hypotheses", t, notes=tuple(notes))
    try:
        cert = build_certificate(t, rule=rule)
    except ConstructionError as exc:
        notes.append(str(exc))
        return Verdict(UNKNOWN, "degeneration-unconstructible", t, notes=tuple(notes))
    return Verdict(NOT_STABLY_RATIONAL, f"degeneration-{cert.rule}", t,
                   certificate=cert, notes=tuple(notes))


def verdict_for(surface_kind: str, data) -> Verdict:
    if surface_kind == "p2":
        return verdict_p2(data)
    if surface_kind == "p1xp1":
        return verdict_p1xp1(data)
    raise ValueError(f"unknown surface {surface_kind!r}")


# --------------------------------------------------------- certificate build


def build_certificate(t: BundleType, rule: str | None = None) -> Certificate:
    """Run the full certification chain; any failed link raises with the
    link named."""
    t.validate()
    if t.surface_kind == "p2":
        form, rule = construct_degeneration_p2(t)
    else:
        if rule is None:
            d, e = t.ds(), t.es()
            if d[3] >= 3 and e[3] >= 3:
                rule = select_rule_p1xp1(t)
            else:
                rule = cor53_rule(t)
                if rule is None:
                    raise ConstructionError(f"type {t} is not in a certifiable branch")
        form = construct_degeneration_p1xp1(t, rule)
    s = form.surface
    if type_of(form).data != t.data:
        raise CertifyError(f"link type-match: {type_of(form)} != {t}")
    g = weak_gcd(form)
    weak = g.is_constant()
    if not weak:
        raise CertifyError(f"link weak-bundle: entries share the factor {g}")
    fiber = generic_fiber(form)
    witness = normalize_to_hpt(fiber)
    if witness is None:
        raise CertifyError("link similarity: fiber is not similar to the canonical quadric")
    if not verify_witness(fiber, witness):
        raise CertifyError("link similarity: witness replay failed")
    alpha = hpt_alpha(s)
    disc = discriminant(fiber)
    if disc.is_trivial:
        raise CertifyError("link discriminant: trivial discriminant")
    aras = arason_nontriviality(fiber, alpha)
    if not aras.passed:
        raise CertifyError(f"link arason: {aras.note}")
    pir = pirutka_check(fiber, alpha)
    if pir.passed is None:
        raise CertifyError(f"link pirutka: inconclusive ({'; '.join(pir.problems)})")
    if not pir.passed:
        raise CertifyError("link pirutka: residue-matching condition failed")
    alpha_prof = residue_profile(alpha, s)
    beta = clifford_invariant(fiber)
    conclusion = (
        f"degeneration:{rule}",
        "weak-bundle-integrality",
        "fiber-similar-to-canonical-quadric",
        f"base-fact:{BASE_FACT}",
        "discriminant-nontrivial",
        "arason-nontriviality",
        "pirutka-residue-matching",
        "specialization:not-stably-rational",
    )
    return Certificate(
        input_type=t,
        rule=rule,
        degeneration=form,
        weak_bundle_ok=weak,
        weak_gcd=g,
        fiber=fiber,
        similarity=witness,
        discriminant=disc,
        alpha=alpha,
        alpha_residues=alpha_prof,
        clifford=beta,
        pirutka=pir,
        arason=aras,
        conclusion=conclusion,
    )


# ------------------------------------------------------------------- replay


def replay_certificate(cert: Certificate) -> bool:
    """Recompute every boolean in the certificate from its stored data."""
    form = cert.degeneration
    fiber = cert.fiber
    s = form.surface
    if type_of(form).data != cert.input_type.data:
        return False
    if is_weak_bundle(form) != cert.weak_bundle_ok or not cert.weak_bundle_ok:
        return False
    if generic_fiber(form) != fiber:
        return False
    if not verify_witness(fiber, cert.similarity):
        return False
    if discriminant(fiber) != cert.discriminant or cert.discriminant.is_trivial:
        return False
    if residue_profile(cert.alpha, s) != cert.alpha_residues:
        return False
    if clifford_invariant(fiber) != cert.clifford:
        return False
    aras = arason_nontriviality(fiber, cert.alpha)
    if (aras.discriminant_nontrivial, aras.alpha_ramified) != (
            cert.arason.discriminant_nontrivial, cert.arason.alpha_ramified):
        return False
    if not aras.passed:
        return False
    pir = pirutka_check(fiber, cert.alpha)
    if pir.passed is not True or cert.pirutka.passed is not True:
        return False
    if len(pir.rows) != len(cert.pirutka.rows):
        return False
    for fresh, stored in zip(pir.rows, cert.pirutka.rows):
        if fresh != stored:
            return False
    return True


# --------------------------------------------------------------------- JSON


def _ratfn_str(f: RatFn) -> str:
    return str(f)


def certificate_json(cert: Certificate) -> dict:
    sim = cert.similarity
    return {
        "schema": "quadrica-cert/1",
        "engine_version": cert.engine_version,
        "base_fact": cert.base_fact,
        "surface": cert.input_type.surface_kind,
        "input_type": [list(p) if isinstance(p, tuple) else p for p in cert.input_type.data],
        "rule": cert.rule,
        "degeneration": [format_poly(e) for e in cert.degeneration.entries],
        "weak_bundle": {"ok": cert.weak_bundle_ok, "gcd": format_poly(cert.weak_gcd)},
        "fiber": [format_poly(e) for e in cert.fiber.entries],
        "similarity": {
            "scale": _ratfn_str(sim.scale),
            "square_factors": [_ratfn_str(q) for q in sim.square_factors],
            "units": [str(u) for u in sim.units],
            "permutation": list(sim.permutation),
        },
        "discriminant": {
            "support": [format_poly(q) for q in sorted(
                cert.discriminant.support, key=lambda q: (q.total_degree(), str(q)))],
            "nontrivial": not cert.discriminant.is_trivial,
        },
        "alpha": [[str(a), str(b)] for a, b in cert.alpha.sorted_symbols()],
        "alpha_residues": {str(c): str(r) for c, r in cert.alpha_residues.entries},
        "clifford": [[str(a), str(b)] for a, b in cert.clifford.sorted_symbols()],
        "pirutka": {
            "rows": [
                {
                    "divisor": str(r.divisor),
                    "alpha_residue": str(r.alpha_residue),
                    "beta_residue": str(r.beta_residue),
                    "alpha_nonzero": r.alpha_nonzero,
                    "residues_match": r.residues_match,
                    "hensel": {
                        "valuation": r.hensel.valuation,
                        "unit_restriction": (None if r.hensel.unit_restriction is None
                                             else _ratfn_str(r.hensel.unit_restriction)),
                        "is_square": r.hensel.is_square,
                        "passed": r.hensel.passed,
                    },
                    "satisfied": r.satisfied,
                }
                for r in cert.pirutka.rows
            ],
            "passed": cert.pirutka.passed,
        },
        "arason": {
            "discriminant_nontrivial": cert.arason.discriminant_nontrivial,
            "alpha_ramified": cert.arason.alpha_ramified,
            "alpha_nonzero_witness": (None if cert.arason.witness is None
                                      else str(cert.arason.witness)),
            "passed": cert.arason.passed,
            "note": cert.arason.note,
        },
        "conclusion": list(cert.conclusion),
    }


def certificate_digest(cert: Certificate) -> str:
    payload = json.dumps(certificate_json(cert), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def verdict_json(v: Verdict) -> dict:
    out = {
        "surface": v.bundle_type.surface_kind,
        "type": str(v.bundle_type),
        "outcome": v.outcome,
        "reason": v.reason,
        "notes": list(v.notes),
    }
    if v.certificate is not None:
        out["certificate"] = certificate_json(v.certificate)
        out["digest"] = certificate_digest(v.certificate)
    return out


# -------------------------------------------------------------- enumeration


def enumerate_types_p2(bound: int) -> list[tuple[int, int, int, int]]:
    """All lexicographic equal-parity types with coordinates <= bound."""
    from itertools import combinations_with_replacement
    out = []
    for parity in (0, 1):
        vals = range(parity, bound + 1, 2)
        out.extend(combinations_with_replacement(vals, 4))
    return sorted(out)


def enumerate_types_p1xp1(bound: int) -> list[tuple[tuple[int, int], ...]]:
    """All lexicographically ordered parity-valid types with all
    coordinates <= bound."""
    from itertools import combinations_with_replacement
    out = []
    for pd in (0, 1):
        for pe in (0, 1):
            pairs = [(d, e) for d in range(pd, bound + 1, 2)
                     for e in range(pe, bound + 1, 2)]
            out.extend(combinations_with_replacement(pairs, 4))
    return sorted(out)
