from fractions import Fraction

import pytest

from qtorus.errors import InvalidWitness, TorusMismatch, UnmappedRepresentative
from qtorus.morita import MoritaWitness, decide_morita
from qtorus.quad_field import Mat2Z, mobius_apply, parse_quad
from qtorus.torus_core import (
    CanonicalBasisElem,
    Monomial,
    RepPair,
    Torus,
    apply_U,
    apply_V,
    apply_word,
    pairing,
)
from qtorus.transform import (
    GeoTransform,
    RepBijection,
    apply_L,
    basis_universe,
    build_transform,
    check_diagram_U,
    check_diagram_V,
    check_pairing_preserved,
    default_universe,
    transport,
    verify_transform,
)

SQRT2 = parse_quad("sqrt(2)")
HALF = SQRT2 / 2


@pytest.fixture(scope="module")
def t_half():
    w = decide_morita(SQRT2, HALF)
    return build_transform(SQRT2, HALF, w, default_universe(SQRT2))


def test_build_examples():
    w = decide_morita(SQRT2, HALF)
    assert w.scaling_theta == HALF
    t = build_transform(SQRT2, HALF, w, [(Fraction(0), Fraction(0))])
    zero = RepPair(Fraction(0), Fraction(0))
    assert t.rep_bij(zero) == zero
    t = build_transform(SQRT2, HALF, w, [(Fraction(1, 3), Fraction(1, 5))])
    assert t.rep_bij(RepPair(Fraction(1, 3), Fraction(1, 5))) == RepPair(SQRT2 / 6, SQRT2 / 10)


def test_build_rejects_tampered_witness():
    w = decide_morita(SQRT2, HALF)
    bad = MoritaWitness(SQRT2, HALF, Mat2Z.identity(), w.scaling_theta)
    with pytest.raises(InvalidWitness):
        build_transform(SQRT2, HALF, bad, default_universe(SQRT2))
    with pytest.raises(InvalidWitness):
        build_transform(SQRT2, 1 + SQRT2, w, default_universe(SQRT2))


def test_build_rejects_repeated_coset_pairs():
    w = decide_morita(SQRT2, HALF)
    with pytest.raises(ValueError):
        build_transform(SQRT2, HALF, w, [(Fraction(1, 3), Fraction(0)), (Fraction(4, 3), SQRT2)])


def test_apply_L_examples(t_half):
    rep = RepPair(Fraction(0), Fraction(0))
    image = t_half.rep_bij(rep)
    assert apply_L(t_half, CanonicalBasisElem(rep, 0, 0)) == CanonicalBasisElem(image, 0, 0)
    e = CanonicalBasisElem(rep, 2, 3)
    out = apply_L(t_half, e)
    assert out == CanonicalBasisElem(image, 2, 3)
    assert out.to_element(t_half.target) == t_half.target.u(image, 2, Monomial.q(6))
    with pytest.raises(UnmappedRepresentative):
        apply_L(t_half, CanonicalBasisElem(RepPair("x", "y"), 0, 0))


def test_apply_L_general_flag(t_half):
    rep = next(iter(t_half.rep_bij))
    x = t_half.source.u(rep, 1, Monomial(Fraction(1), 2, 1, 0))
    with pytest.raises(TypeError):
        apply_L(t_half, x)
    assert apply_L(t_half, x, general=True) == t_half.target.u(
        t_half.rep_bij(rep), 1, Monomial(Fraction(1), 2, 1, 0)
    )
    with pytest.raises(TorusMismatch):
        transport(t_half, t_half.target.u(rep))


def test_diagram_examples(t_half):
    rep = next(iter(t_half.rep_bij))
    img = t_half.rep_bij(rep)
    tgt = t_half.target
    x0 = t_half.source.u(rep, 0)
    assert transport(t_half, apply_U(x0)) == tgt.u(img, 0, Monomial(Fraction(1), 0, 1, 0))
    x3 = t_half.source.u(rep, 3)
    assert transport(t_half, apply_U(x3)) == apply_U(transport(t_half, x3))
    assert apply_U(transport(t_half, x3)) == tgt.u(img, 3, Monomial(Fraction(1), 3, 1, 0))
    x1 = t_half.source.u(rep, 1)
    assert transport(t_half, apply_V(x1)) == tgt.u(img, 0, Monomial(Fraction(1), 0, 0, 1))
    assert check_diagram_U(t_half, 8).ok and check_diagram_V(t_half, 8).ok


def test_pairing_examples(t_half):
    rep = next(iter(t_half.rep_bij))
    src = t_half.source
    base = (src.v(rep), src.u(rep))
    assert pairing(*base).exponent == 0
    assert pairing(*(transport(t_half, b) for b in base)).exponent == 0
    v, u = src.v(rep, 2, Monomial.q(1)), src.u(rep, 4, Monomial.q(3))
    assert pairing(v, u).exponent == -6
    assert pairing(transport(t_half, v), transport(t_half, u)).exponent == -6
    su, sv = (apply_word(transport(t_half, b), 2, 1) for b in (src.u(rep), src.v(rep)))
    assert pairing(sv, su, strict=False).exponent == 0
    report = check_pairing_preserved(t_half, 2)
    assert report.ok and report.checked > 0


def test_verify_transform_passes(t_half):
    report = verify_transform(t_half, 3, 2)
    assert report.ok, report.lines(only_failures=True)


def test_L_is_bijective_on_universe(t_half):
    elems = basis_universe(list(t_half.rep_bij), 2, 2)
    images = [apply_L(t_half, e) for e in elems]
    assert len(set(images)) == len(set(elems))
    expected = set(basis_universe([t_half.rep_bij(r) for r in t_half.rep_bij], 2, 2))
    assert set(images) == expected


def test_composition():
    theta1, theta2 = SQRT2, HALF
    theta3 = mobius_apply(Mat2Z(2, 1, 1, 1), theta2)
    w12, w23 = decide_morita(theta1, theta2), decide_morita(theta2, theta3)
    assert w23
    universe = default_universe(theta1)
    t12 = build_transform(theta1, theta2, w12, universe)
    mid = [(w12.scaling_theta * a, w12.scaling_theta * b) for a, b in universe]
    t23 = build_transform(theta2, theta3, w23, mid, ("q2", "q3"))
    t13 = build_transform(theta1, theta3, w12.then(w23), universe, ("q1", "q3"))
    for e in basis_universe(list(t12.rep_bij), 3, 3):
        assert apply_L(t13, e) == apply_L(t23, apply_L(t12, e))
    assert t12.rep_bij.then(t23.rep_bij) == t13.rep_bij


def test_transform_requires_distinct_tori():
    with pytest.raises(ValueError):
        GeoTransform(Torus("q"), Torus("q"), RepBijection({}))
    with pytest.raises(ValueError):
        RepBijection({RepPair(1, 1): RepPair(0, 0), RepPair(2, 2): RepPair(0, 0)})
