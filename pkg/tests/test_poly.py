import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from splicekit.poly import (ZERO_DEGREE, DegenerateSample, FamilyInstance, FamilyPolys, MultiPoly,
                            add_horizontal, build_family, degree_check, expected_degree,
                            family_degree, fiber_inverse_check, fiber_inverse_sweep, fixtures,
                            irregular_values, rescale_check, rescaled_instance, russell,
                            strip_horizontal_check, x_plus_s_squared)
from splicekit.splice import SimpleTypeParams, ValidationError
from splicekit.verify import SweepBounds, sample_instance, sample_params

X, Y = MultiPoly.x(), MultiPoly.y()
WORKED = SimpleTypeParams("F1", 1, 1, 1, 2, (2,))
SX, SY = sympy.symbols("x y")


def to_sympy(p: MultiPoly):
    return sum((sympy.Rational(c.numerator, c.denominator) * SX ** i * SY ** j
                for (i, j), c in p.items()), sympy.Integer(0))


# -- MultiPoly basics -------------------------------------------------------------

def test_basic_examples():
    assert (X + Y).substitute(X, X) == 2 * X
    assert (X ** 2 * Y ** 3 + 1).total_degree() == 5
    assert X.substitute(X, 1 + X * Y) == X
    assert MultiPoly().total_degree() is ZERO_DEGREE


def test_text_round_trip_and_shorthand():
    f = Fraction(3, 2) * X * Y ** 2 - 7 + Y
    assert MultiPoly.parse(f.to_text()) == f
    assert MultiPoly.parse("x + y^2 + 3/2 x y") == X + Y ** 2 + Fraction(3, 2) * X * Y
    assert MultiPoly().to_text() == "0"
    assert MultiPoly.parse("0") == MultiPoly()


polys = st.dictionaries(st.tuples(st.integers(0, 4), st.integers(0, 4)),
                        st.fractions(max_denominator=7).filter(lambda c: abs(c) < 20),
                        max_size=6).map(MultiPoly)


@settings(max_examples=100, deadline=None)
@given(polys, polys, polys, polys)
def test_substitute_is_a_ring_homomorphism(f, g, a, b):
    assert (f + g).substitute(a, b) == f.substitute(a, b) + g.substitute(a, b)
    assert (f * g).substitute(a, b) == f.substitute(a, b) * g.substitute(a, b)


@settings(max_examples=100, deadline=None)
@given(polys, polys)
def test_arithmetic_matches_sympy(f, g):
    assert sympy.expand(to_sympy(f * g) - to_sympy(f) * to_sympy(g)) == 0
    d = (f * g).total_degree()
    if f.is_zero() or g.is_zero():
        assert d is ZERO_DEGREE
    else:
        assert d == f.total_degree() + g.total_degree()


# -- the families -------------------------------------------------------------------

def test_build_f1_worked():
    fam = build_family(FamilyInstance(WORKED, (1,), (1,)))
    s = 1 + X * Y
    assert fam.s == s
    assert fam.g == X * s
    assert fam.f == X * s + s * (1 - X * s) ** 2


def test_build_f2_example():
    fam = build_family(FamilyInstance(SimpleTypeParams("F2", 2, 1, 3, 2, (1,)), (1,), (1,)))
    s = 1 + X * Y
    assert fam.f == X * s ** 2 * (1 - X * s)


def test_build_f3_example():
    fam = build_family(FamilyInstance(SimpleTypeParams("F3", a=(2,)), (), (1,), (0, 1)))
    assert fam.f == Y * (X - 1) ** 2 + X
    assert fam.s is None


def test_family_polys_round_trip():
    fam = build_family(FamilyInstance(WORKED, (Fraction(2, 3),), (-3,)))
    assert FamilyPolys.from_dict(fam.to_dict()) == fam


def test_instance_validation():
    assert FamilyInstance(WORKED, (1,), (0,)).errors()
    assert FamilyInstance(WORKED, (), (1,)).errors()
    assert FamilyInstance(SimpleTypeParams("F1", 1, 1, 1, 2, (1, 1)), (1,), (2, 2)).errors()
    assert FamilyInstance(SimpleTypeParams("F3", a=(2,)), (), (1,), (0, 1, 1)).errors()
    with pytest.raises(ValidationError):
        build_family(FamilyInstance(WORKED, (1,), (0,)))


@pytest.mark.parametrize("inst, deg", [
    (FamilyInstance(WORKED, (1,), (1,)), 8),
    (FamilyInstance(SimpleTypeParams("F2", 2, 1, 3, 2, (1,)), (1,), (1,)), 8),
    (FamilyInstance(SimpleTypeParams("F3", a=(2,)), (), (1,), (0, 1)), 3),
])
def test_degree_examples(inst, deg):
    assert build_family(inst).f.total_degree() == deg == expected_degree(inst.params)
    assert family_degree(inst) == deg
    assert degree_check(inst)


def _small_instances(n, family, seed=5):
    rng = random.Random(seed)
    return [sample_instance(p, rng) for p in sample_params(n, seed, family, SweepBounds(6, 4, 2))]


@pytest.mark.parametrize("family", ["F1", "F2", "F3"])
def test_degree_against_sympy(family):
    for inst in _small_instances(8, family):
        f = to_sympy(build_family(inst).f)
        assert sympy.Poly(f, SX, SY).total_degree() == expected_degree(inst.params)
        assert family_degree(inst) == expected_degree(inst.params)


@pytest.mark.parametrize("family", ["F1", "F2"])
def test_top_band_degree_matches_full_expansion(family):
    for inst in _small_instances(15, family, seed=9):
        assert family_degree(inst, width=1) == build_family(inst).f.total_degree()


# -- fibre inverse ----------------------------------------------------------------

def test_fibre_inverse_worked_point():
    inst = FamilyInstance(WORKED, (1,), (3,))
    assert fiber_inverse_check(inst, (1, 1))


def test_fibre_inverse_f3_point():
    inst = FamilyInstance(SimpleTypeParams("F3", a=(2,)), (), (1,), (0, 1))
    assert build_family(inst).f.evaluate(2, 5) == 7
    assert fiber_inverse_check(inst, (2, 5))


def test_fibre_inverse_degenerate_point():
    inst = FamilyInstance(SimpleTypeParams("F3", a=(2,)), (), (1,), (0, 1))
    with pytest.raises(DegenerateSample):
        fiber_inverse_check(inst, (1, 5))


@pytest.mark.parametrize("family", ["F1", "F2", "F3"])
def test_fibre_inverse_sweep(family):
    for inst in _small_instances(5, family, seed=3):
        res = fiber_inverse_sweep(inst, samples=50, seed=1)
        assert res["ok"] == 50 and res["failed"] == 0


# -- irregular values --------------------------------------------------------------

def test_irregular_values_examples():
    iv = irregular_values(FamilyInstance(SimpleTypeParams("F1", 2, 1, 3, 2, (1,)), (1,), (5,)))
    assert iv.values == (0, 5)
    # P = 1 adds alpha_0 * beta_1^a_1 = 9
    iv = irregular_values(FamilyInstance(WORKED, (1,), (3,)))
    assert iv.values == (0, 3, 9)
    assert not iv.non_generic
    iv = irregular_values(FamilyInstance(WORKED, (Fraction(1, 3),), (3,)))
    assert iv.values == (0, 3) and iv.non_generic
    # q = 1 adds alpha_0
    iv = irregular_values(FamilyInstance(SimpleTypeParams("F1", 2, 1, 1, 1, (2,)), (7,), (3,)))
    assert 7 in iv.values


def _reducible(f, t):
    _, factors = sympy.factor_list(sympy.expand(f - t), SX, SY)
    return len(factors) > 1 or any(m > 1 for _, m in factors)


@pytest.mark.parametrize("family", ["F1", "F2"])
def test_irregular_values_against_factorisation(family):
    rng = random.Random(11)
    for inst in _small_instances(6, family, seed=21):
        f = to_sympy(build_family(inst).f)
        for v in irregular_values(inst).values:
            assert _reducible(f, sympy.Rational(v.numerator, v.denominator))
        for _ in range(2):
            t = sympy.Rational(rng.randint(50, 99), rng.randint(1, 3))
            assert not _reducible(f, t)


# -- rescaling ----------------------------------------------------------------------

def test_rescale_identity_lambda_one():
    inst = FamilyInstance(WORKED, (2,), (3,))
    assert rescaled_instance(inst, 1) == inst
    assert rescale_check(inst, 1)


@pytest.mark.parametrize("lam", [-1, 2, Fraction(3, 2)])
@pytest.mark.parametrize("family", ["F1", "F2"])
def test_rescale_sweep(family, lam):
    for inst in _small_instances(6, family, seed=17):
        assert rescale_check(inst, lam)


def test_rescale_worked_lambda_two():
    inst = FamilyInstance(WORKED, (1,), (3,))
    f = build_family(inst).f
    lhs = f.scale_variables(2 ** 2, Fraction(1, 2 ** 3)) * Fraction(1, 2)
    assert lhs == build_family(rescaled_instance(inst, 2)).f


# -- horizontal curves and fixtures ---------------------------------------------------

def test_add_horizontal_examples():
    assert add_horizontal(Y, [0]) == X * Y
    assert add_horizontal(X + Y ** 2, [0]) == X + X ** 2 * Y ** 2
    assert add_horizontal(X, [3, 4]) == X
    assert x_plus_s_squared([1]) == X + (1 + X * Y) ** 2


@settings(max_examples=50, deadline=None)
@given(polys, st.lists(st.integers(-3, 3), min_size=1, max_size=3),
       st.integers(1, 5), st.integers(-5, 5))
def test_strip_horizontal(f, coeffs, x0, y0):
    assert strip_horizontal_check(f, coeffs, (x0, y0))


def test_russell_fixture():
    f = russell()
    assert f.total_degree() == 21
    assert f.evaluate(0, 0) == 0
    s = SX * SY + 1
    oracle = sympy.expand((SY ** 2 * s ** 4 + SY * (s + SX * SY) * s + 1)
                          * (SY * s ** 5 + 2 * SX * SY * s ** 2 + SX))
    assert sympy.expand(to_sympy(f) - oracle) == 0
    assert sympy.Poly(oracle, SX, SY).total_degree() == 21
    assert set(fixtures()) == {"russell", "x_plus_s_squared"}


def test_f2_betas_are_regular_values():
    for inst in _small_instances(4, "F2", seed=5):
        f = to_sympy(build_family(inst).f)
        for b in inst.betas:
            assert not _reducible(f, sympy.Rational(b.numerator, b.denominator))
        assert all(v not in irregular_values(inst).values for v in inst.betas)
