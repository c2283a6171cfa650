import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from lorenz_acim.classifier import (
    NoAcim,
    PeriodicIdentity,
    UniqueBoundedVariation,
    UniqueEquivalentBounded,
    classify,
    conjugacy_condition,
    conjugate_map_eval,
    describe,
    h_s,
    h_s_inverse,
    identity_power,
)
from lorenz_acim.core_map import Side, SidedPoint, compose_pieces, evaluate, validate
from lorenz_acim.errors import IndeterminateRationality, PreconditionViolation

from conftest import rational_maps


def test_classify_no_acim():
    cls = classify(validate(0.9, 1.05, 0.5))
    assert isinstance(cls, NoAcim)
    assert cls.boundary_sum == pytest.approx(0.9 * 0.5 + 1.05 * 0.5)


def test_classify_expanding():
    cls = classify(validate(1.5, 1.5, 0.5))
    assert isinstance(cls, UniqueBoundedVariation) and cls.boundary_sum == 1.5


def test_classify_bounded():
    cls = classify(validate(2, F(1, 3), F(2, 5)))
    assert isinstance(cls, UniqueEquivalentBounded)
    assert cls.boundary_sum == 1
    assert (cls.r_lo, cls.r_hi) == (F(1, 6**4), F(6**4))


def test_classify_periodic():
    cls = classify(validate(4, F(1, 2), F(1, 7)))
    assert isinstance(cls, PeriodicIdentity) and cls.n == 3
    assert "n=3" in describe(cls)


def test_identity_power_examples():
    p = validate(4, F(1, 2), F(1, 7))
    assert identity_power(p) == 3
    assert all(pc.slope == 1 and pc.offset == 0 for pc in compose_pieces(p, 3))
    assert identity_power(validate(1, 1, F(1, 4))) == 4


def test_identity_power_irrational_rigid():
    p = validate(1, 1, 1 / math.sqrt(2))
    assert isinstance(classify(p), UniqueEquivalentBounded)
    with pytest.raises(PreconditionViolation):
        identity_power(p)


def test_float_boundary_is_indeterminate():
    with pytest.raises(IndeterminateRationality):
        classify(validate(4.0, 0.5, 1 / 7))


def test_conjugacy_examples():
    assert conjugacy_condition(validate(2, 2, F(1, 2)))
    assert conjugacy_condition(validate(F(6, 5), F(6, 5), F(1, 2)))
    assert not conjugacy_condition(validate(0.9, 1.05, 0.5))
    assert 0.5 * (math.sqrt(0.9) + math.sqrt(1.05)) == pytest.approx(0.9867, abs=1e-4)


def test_conjugacy_exact_matches_float():
    for a, b, c in [(F(9, 10), F(21, 20), F(1, 2)), (2, F(1, 3), F(2, 5)), (F(3, 2), F(1, 2), F(1, 2))]:
        p = validate(a, b, c)
        assert conjugacy_condition(p) == conjugacy_condition(p.to_float())


def test_conjugate_map_examples():
    p = validate(2, 2, F(1, 2))
    for x in [F(1, 5), F(3, 4), SidedPoint(F(1, 2), Side.LEFT)]:
        assert conjugate_map_eval(p, 1, x) == evaluate(p, x)
    assert conjugate_map_eval(p, 2, 0) == 0
    assert h_s_inverse(2, F(1, 2)) == F(1, 3)
    assert conjugate_map_eval(p, 2, F(1, 2)) == F(4, 5)
    assert h_s(3, h_s_inverse(3, F(2, 7))) == F(2, 7)


@settings(max_examples=200)
@given(rational_maps())
def test_classification_total_and_exclusive(params):
    p = validate(*params)
    cls = classify(p)
    s = p.a * p.c + p.b * (1 - p.c)
    if s < 1:
        assert isinstance(cls, NoAcim)
    elif s > 1:
        assert isinstance(cls, UniqueBoundedVariation)
    else:
        assert isinstance(cls, (PeriodicIdentity, UniqueEquivalentBounded))
    if isinstance(cls, UniqueEquivalentBounded):
        assert cls.r_lo == min((p.a / p.b) ** 4, (p.b / p.a) ** 4)
        assert cls.r_hi == 1 / cls.r_lo


@settings(max_examples=100)
@given(rational_maps())
def test_backend_invariance(params):
    p = validate(*params)
    if p.a * p.c + p.b * (1 - p.c) == 1:
        return
    assert type(classify(p)) is type(classify(p.to_float()))
