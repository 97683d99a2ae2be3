"""Diagonal forms: types, weak bundles, fibers, invariants, moves, and the
similarity normalizer."""

import random

import pytest

from quadrica.brauer import add_classes, classes_equal, symbol
from quadrica.funfield import square_class
from quadrica.poly import Poly, parse_poly
from quadrica.quadform import (
    AbsorbSquares,
    BundleType,
    MultiplyEntry,
    QuadformError,
    Reorder,
    Scale,
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

from conftest import P1XP1_VARS, P2_VARS


def one():
    return Poly.const(P2_VARS, 1)


def test_make_diag_form_validation(p2, F, xyz):
    x, y, z = xyz
    form = make_diag_form((z ** 2, x * z, x * y, y * F), p2)
    # a valid weak-bundle form even though the degrees are mixed parity
    assert not type_of(form).parity_valid
    with pytest.raises(QuadformError, match="nonzero"):
        make_diag_form((Poly.zero(P2_VARS), x, y, F), p2)
    with pytest.raises(QuadformError, match="homogeneous"):
        make_diag_form((x + 1, x, y, F), p2)


def test_type_of_examples(p2, F, xyz):
    x, y, z = xyz
    hpt = make_diag_form((y * z, x * z, x * y, F), p2)
    assert type_of(hpt).data == (2, 2, 2, 2)
    q1 = make_diag_form((z, x, x * y * z, y * F), p2)
    assert type_of(q1).data == (1, 1, 3, 3)


def test_type_of_p1xp1(p1xp1, hpoly, x4):
    x0, x1, y0, y1 = x4
    form = make_diag_form((x0 * y0, x0 * y1, x1 * y0, x1 * y1 * hpoly), p1xp1)
    assert type_of(form).data == ((1, 1), (1, 1), (1, 1), (3, 3))


def test_bundle_type_sorting_and_parity():
    t = BundleType.of("p2", (4, 0, 2, 2))
    assert t.data == (0, 2, 2, 4) and t.reordered
    assert t.parity_valid
    with pytest.raises(QuadformError):
        BundleType.of("p2", (1, 2, 2, 2)).validate()
    with pytest.raises(QuadformError):
        BundleType.of("p2", (-2, 2, 2, 2)).validate()


def test_is_weak_bundle(p2, F, xyz):
    x, y, z = xyz
    q2ish = make_diag_form((z ** 2, x * z, x * y, y * z * F), p2)
    assert is_weak_bundle(q2ish)
    bad = make_diag_form((x, x * y, x * z, x * F), p2)
    assert not is_weak_bundle(bad)
    assert weak_gcd(bad) == x
    hpt = make_diag_form((y * z, x * z, x * y, F), p2)
    assert is_weak_bundle(hpt)


def test_generic_fiber(p2, F, Fb, xyz):
    x, y, z = xyz
    hpt = make_diag_form((y * z, x * z, x * y, F), p2)
    fib = generic_fiber(hpt)
    assert fib.affine
    assert fib.entries == (y, x, x * y, Fb)


def test_generic_fiber_p1xp1(p1xp1, hpoly, x4):
    x0, x1, y0, y1 = x4
    Fc = chart_quadric(p1xp1)
    # subcase with even d0, e0: entries x1^2*y1^2, y0*y1, x0*x1*y0^2, x1*y1*h
    form = make_diag_form(
        (x1 ** 2 * y1 ** 2, y0 * y1, x0 * x1 * y0 ** 2, x1 * y1 * hpoly), p1xp1)
    fib = generic_fiber(form)
    assert fib.entries == (x1 ** 2 * y1 ** 2, y1, x1, x1 * y1 * Fc)


def test_discriminant_examples(p2, Fb, xyz):
    x, y, _ = xyz
    fib = make_affine_form((y, x, x * y, Fb), p2)
    assert discriminant(fib).support == frozenset({Fb})
    split = make_affine_form((one(), one(), one(), one()), p2)
    assert discriminant(split).is_trivial
    trivial_d = make_affine_form((one(), x, y, x * y), p2)
    assert discriminant(trivial_d).is_trivial


def test_clifford_invariant_hpt(p2, Fb, xyz):
    x, y, _ = xyz
    fib = make_affine_form((y, x, x * y, Fb), p2)
    cl = clifford_invariant(fib)
    # scaling by y gives <1, xy, x, yF>: a = xy, b = x, d = F;
    # (xy, x) + (x^2 y, F) = (x, y) + (y, F) over C
    want = add_classes(symbol(x, y), symbol(y, Fb))
    assert classes_equal(cl, want, p2)


def test_clifford_split_form(p2):
    fib = make_affine_form((one(), one(), one(), one()), p2)
    assert clifford_invariant(fib).is_formally_empty


def test_clifford_scale_law(p2, Fb, xyz):
    # cl(lambda * q) = cl(q) + (lambda, discr q)
    x, y, _ = xyz
    fib = make_affine_form((y, x, x * y, Fb), p2)
    base = clifford_invariant(fib)
    d_rep = discriminant(fib).representative()
    for lam in (x, y, x * y, Fb, x * y ** 2):
        scaled = clifford_invariant(apply_move(fib, Scale(lam)))
        assert classes_equal(add_classes(scaled, base), symbol(lam, d_rep), p2)


def test_moves(p2, Fb, xyz):
    x, y, _ = xyz
    form = make_affine_form((y ** 2, x * y, x * y ** 2, y ** 2 * Fb), p2)
    absorbed = apply_move(form, AbsorbSquares())
    assert absorbed.entries == (one(), x * y, x, Fb)
    reordered = apply_move(make_affine_form((y, x * y, x, Fb), p2), Reorder((2, 1, 0, 3)))
    assert reordered.entries == (x, x * y, y, Fb)
    with pytest.raises(QuadformError, match="odd power"):
        apply_move(form, MultiplyEntry(3, x))
    twisted = apply_move(form, MultiplyEntry(3, x ** 2))
    assert twisted.entries[3] == x ** 2 * y ** 2 * Fb


def test_boundary_twists_on_p1xp1(p1xp1, hpoly, x4):
    x0, x1, y0, y1 = x4
    form = make_diag_form((x0 * y0, x0 * y1, x1 * y0, x1 * y1 * hpoly), p1xp1)
    # arbitrary boundary powers are legal moves
    t2 = apply_move(form, MultiplyEntry(0, x0 * y0 ** 3))
    assert type_of(t2).data[0] == (1, 1)  # sorted; entry 0 now has bidegree (2,4)
    with pytest.raises(QuadformError):
        apply_move(form, MultiplyEntry(1, x1))


def test_discriminant_invariant_under_moves(p2, Fb, xyz):
    rng = random.Random(12)
    x, y, _ = xyz
    fib = make_affine_form((y, x, x * y, Fb), p2)
    moves = [Scale(x), Scale(y * x), AbsorbSquares(), Reorder((3, 1, 0, 2)),
             MultiplyEntry(1, x ** 2), MultiplyEntry(2, y ** 4)]
    d0 = discriminant(fib)
    form = fib
    for _ in range(40):
        form = apply_move(form, moves[rng.randrange(len(moves))])
        assert discriminant(form) == d0


def test_normalize_to_hpt_q2prime(p2, Fb, xyz):
    # q2' with d0 even and squares absorbed: <1, x, xy, yF>
    x, y, _ = xyz
    q2p = make_affine_form((one(), x, x * y, y * Fb), p2)
    w = normalize_to_hpt(q2p)
    assert w is not None
    assert verify_witness(q2p, w)
    # the witness scale is y modulo squares (x^2 y here)
    assert square_class(w.scale.num).support == frozenset({y})


def test_normalize_to_hpt_p1xp1_canonical(p1xp1, x4):
    x0, x1, y0, y1 = x4
    Fc = chart_quadric(p1xp1)
    q = make_affine_form((Poly.const(P1XP1_VARS, 1), y1, x1, x1 * y1 * Fc), p1xp1)
    w = normalize_to_hpt(q)
    assert w is not None and verify_witness(q, w)
    assert square_class(w.scale.num).support == frozenset({x1, y1})


def test_normalize_to_hpt_identity(p2, Fb, xyz):
    x, y, _ = xyz
    fib = make_affine_form((y, x, x * y, Fb), p2)
    w = normalize_to_hpt(fib)
    assert w is not None
    assert w.permutation == (0, 1, 2, 3)
    assert w.scale.num.is_constant()


def test_normalize_to_hpt_rejects_wrong_pattern(p2, Fb, xyz):
    x, y, _ = xyz
    assert normalize_to_hpt(make_affine_form((one(), x, y, Fb), p2)) is None


def test_normalize_to_hpt_out_of_class(p2, Fb, xyz):
    x, y, _ = xyz
    with pytest.raises(QuadformError, match="class"):
        normalize_to_hpt(make_affine_form((y + 1, x, x * y, Fb), p2))


def test_normalize_move_closure(p2, Fb, xyz):
    rng = random.Random(77)
    x, y, _ = xyz
    fib = make_affine_form((y, x, x * y, Fb), p2)
    moves = [Scale(x), Scale(y), AbsorbSquares(), Reorder((1, 0, 3, 2)),
             Reorder((2, 3, 0, 1)), MultiplyEntry(0, x ** 2), MultiplyEntry(3, y ** 2)]
    form = fib
    for _ in range(25):
        form = apply_move(form, moves[rng.randrange(len(moves))])
        w = normalize_to_hpt(form)
        assert w is not None and verify_witness(form, w)


def test_type_shift_under_entry_twist(p1xp1, hpoly, x4):
    # twisting entry i by a monomial shifts exactly one multiset element
    # by the monomial's bidegree
    x0, x1, y0, y1 = x4
    form = make_diag_form((x0 * y0, x0 * y1, x1 * y0, x1 * y1 * hpoly), p1xp1)
    old = list(type_of(form).data)
    m = x0 ** 2 * y0
    twisted = apply_move(form, MultiplyEntry(1, m))
    new = list(type_of(twisted).data)
    old.remove((1, 1))
    new.remove((1 + 2, 1 + 1))
    assert sorted(old) == sorted(new)


def test_hpt_target_and_alpha(p2, p1xp1):
    tgt = hpt_target(p2)
    assert [str(e) for e in tgt] == ["y", "x", "x*y", "x^2-2*x*y+y^2-2*x-2*y+1"]
    assert str(hpt_alpha(p2)) == "(x, y)"
    tgt4 = hpt_target(p1xp1)
    assert [str(e) for e in tgt4][:3] == ["y1", "x1", "x1*y1"]


def test_canonical_quadric_consistency(p2, p1xp1, F, hpoly):
    assert canonical_quadric(p2) == F
    assert canonical_quadric(p1xp1) == hpoly
    # the chart quadric on p1xp1 is F in the chart coordinates
    Fc = chart_quadric(p1xp1)
    assert Fc == parse_poly("x1^2+y1^2+1-2*(x1*y1+x1+y1)", P1XP1_VARS)
