import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from flexnum.blockage import (
    BlockageProcess,
    BodyGeometry,
    Deployment,
    blockage_free_radius,
    blockage_probability,
    los_slot_probability,
    shadow_cone_width,
)
from flexnum.radio_params import PreconditionError
from geometry_oracle import orientation_mc

HAND = BodyGeometry(0.4, 0.3, 0.4)
POCKET = BodyGeometry(0.4, 0.0, 0.4)


@pytest.mark.parametrize("r, h_a, z", [(0.3, 5.0, 3.75), (0.0, 5.0, 0.0), (0.3, 2.5, 1.875)])
def test_blockage_free_radius(r, h_a, z):
    assert blockage_free_radius(BodyGeometry(0.4, r, 0.4), Deployment(1.0, h_a)) == pytest.approx(z)


def test_blockage_probability_cases():
    for d in (0.0, 1.0, 10.0):
        assert blockage_probability(POCKET, Deployment(d)) == 0.5
    assert blockage_probability(HAND, Deployment(1.0)) == 0.0
    assert blockage_probability(HAND, Deployment(10.0)) == pytest.approx(0.187167041810999, rel=1e-12)


def test_blockage_probability_vs_orientation_mc():
    mc = orientation_mc(HAND, Deployment(10.0), 1_000_000, seed=1)
    assert abs(mc - blockage_probability(HAND, Deployment(10.0))) < 1e-3
    assert orientation_mc(HAND, Deployment(1.0), 100_000, seed=2) == 0.0


def test_shadow_cone_width():
    phi = shadow_cone_width(HAND)
    assert phi == pytest.approx(2 * math.atan(2 / 3), rel=1e-15)
    mc = orientation_mc(HAND, Deployment(10.0), 1_000_000, seed=3) * 2 * math.pi
    assert abs(mc - phi) < 2 * math.pi * 1e-3
    assert phi / (2 * math.pi) == pytest.approx(blockage_probability(HAND, Deployment(10.0)), rel=1e-15)
    assert shadow_cone_width(BodyGeometry(1e-12, 0.3, 0.4)) == pytest.approx(0.0, abs=1e-11)
    with pytest.raises(ValueError):
        shadow_cone_width(POCKET)


def test_boundary_belongs_to_blocked_branch():
    z = blockage_free_radius(HAND, Deployment(0.0))
    assert blockage_probability(HAND, Deployment(z)) > 0
    assert blockage_probability(HAND, Deployment(math.nextafter(z, 0))) == 0


@given(w=st.floats(0.05, 2.0), r=st.floats(0.05, 2.0), dw=st.floats(0.01, 1.0), dr=st.floats(0.01, 1.0))
def test_blockage_probability_monotone(w, r, dw, dr):
    far = Deployment(1e4)
    base = blockage_probability(BodyGeometry(w, r, 0.4), far)
    assert blockage_probability(BodyGeometry(w + dw, r, 0.4), far) > base
    assert blockage_probability(BodyGeometry(w, r + dr, 0.4), far) < base
    assert 0 <= base <= 0.5


def test_los_slot_probability_examples():
    assert los_slot_probability(3, BlockageProcess(0.5, Fraction(1, 16))) == 0.125
    assert los_slot_probability(1, BlockageProcess(0.0, Fraction(1, 4))) == 1.0
    assert los_slot_probability(2, BlockageProcess(0.1, Fraction(1, 4))) == pytest.approx(0.43046721, rel=1e-14)
    assert los_slot_probability(1, BlockageProcess(1.0, Fraction(1, 16))) == 0.0


def test_los_slot_probability_rejects_fractional_k():
    with pytest.raises(PreconditionError):
        los_slot_probability(1, BlockageProcess(0.1, Fraction(1, 10)))


@given(p=st.floats(0.0, 1.0), i=st.integers(1, 40), k=st.sampled_from([1, 2, 4, 8, 16]))
def test_los_slot_probability_properties(p, i, k):
    proc = BlockageProcess(p, Fraction(k, 16))
    v = los_slot_probability(i, proc)
    assert 0.0 <= v <= 1.0
    assert los_slot_probability(i + 1, proc) <= v
    assert los_slot_probability(i, BlockageProcess(p, Fraction(2 * k, 16))) <= v
    brute = 1.0
    for _ in range(i * k):
        brute *= 1.0 - p
    assert v == pytest.approx(brute, rel=1e-12, abs=1e-300)
