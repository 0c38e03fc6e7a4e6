import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from capmarkov.capacity import (
    DEFAULT_SEED,
    DN_LADDER,
    TOL_MONO,
    CapacityEstimate,
    capacity,
    dn_estimate,
    dn_ladder,
    dn_select,
    lemniscate_capacity,
)
from capmarkov.levelset import extract_components
from capmarkov.poly import Poly
from capmarkov.sets import Cloud, Disc, Polyline, Segment


def circle(n=512, r=1.0, c=0.0):
    th = 2 * np.pi * np.arange(n) / n
    return c + r * np.exp(1j * th)


# -- closed forms --

def test_segment_oracle():
    est = capacity(Segment(0, 2 + 0j))
    assert est.method == "oracle_segment"
    assert est.value == pytest.approx(0.5, rel=1e-15)


def test_disc_oracle():
    est = capacity(Disc(3 - 1j, 2.5))
    assert est.method == "oracle_disc"
    assert est.value == 2.5


def test_segment_oracle_rotation_invariant():
    a = capacity(Segment(-1, 1)).value
    b = capacity(Segment(1j, -1j)).value
    c = capacity(Segment(0, 2 * np.exp(0.3j))).value
    assert a == pytest.approx(b, rel=1e-12)
    assert a == pytest.approx(c, rel=1e-12)


def test_lemniscate_oracle():
    assert lemniscate_capacity(Poly([-1, 0, 1])) == pytest.approx(1.0, rel=1e-12)
    # leading coefficient 4, degree 2: (1/4)^(1/2)
    assert lemniscate_capacity(Poly([0, 0, 4])) == pytest.approx(0.5, rel=1e-12)
    # level scales as t^(1/d)
    assert lemniscate_capacity(Poly([0, 0, 1]), level=9.0) == pytest.approx(3.0)


def test_lemniscate_oracle_rejects_disconnected():
    with pytest.raises(ValueError):
        lemniscate_capacity(Poly([-4, 0, 1]))   # z^2-4 splits at level 1


# -- the n-point functional --

@pytest.mark.parametrize("n", [4, 8, 16, 32])
def test_circle_dn_closed_form(n):
    # equally spaced points are optimal on a circle: d_n = n^(1/(n-1))
    v, sel = dn_select(circle(), n, seed=3)
    assert v == pytest.approx(n ** (1.0 / (n - 1)), rel=1e-12)
    assert len(sel) == n
    assert np.allclose(np.abs(sel), 1.0)


def test_dn_scales_linearly():
    pts = circle(256)
    v1 = dn_estimate(pts, 12, seed=0)
    v2 = dn_estimate(2.5 * pts + (1 + 1j), 12, seed=0)
    assert v2 == pytest.approx(2.5 * v1, rel=1e-9)


def test_dn_select_validation():
    with pytest.raises(ValueError):
        dn_select(circle(8), 1)
    with pytest.raises(ValueError):
        dn_select(circle(8), 20)


def test_dn_deterministic_for_seed():
    pts = np.random.default_rng(1).normal(size=300) + \
        1j * np.random.default_rng(2).normal(size=300)
    a1, s1 = dn_select(pts, 24, seed=9)
    a2, s2 = dn_select(pts, 24, seed=9)
    assert a1 == a2
    assert np.array_equal(s1, s2)


@given(st.integers(0, 10_000))
@settings(max_examples=25, deadline=None)
def test_dn_exchange_matches_exhaustive(seed):
    # micro instances small enough to brute force
    rng = np.random.default_rng(seed)
    k = int(rng.integers(6, 13))
    n = int(rng.integers(3, 6))
    pts = rng.normal(size=k) + 1j * rng.normal(size=k)
    v, sel = dn_select(pts, n, seed=seed)
    got = sum(math.log(abs(a - b)) for a, b in itertools.combinations(sel, 2))
    best = max(
        sum(math.log(abs(a - b)) for a, b in itertools.combinations(combo, 2))
        for combo in itertools.combinations(pts, n))
    assert got >= best - 1e-12 * max(1.0, abs(best))


def test_ladder_monotone_and_converging():
    est = dn_ladder(circle(1024), seed=DEFAULT_SEED)
    assert est.method == "dn_search"
    values = [v for _, v in est.history]
    assert list(est.history)[0][0] == DN_LADDER[0]
    # d_n decreases in n (up to search slack) and stays above the capacity
    for a, b in zip(values, values[1:]):
        assert b <= a * (1 + TOL_MONO)
    assert values[-1] >= 1.0


def test_ladder_skips_oversized_rungs():
    pts = circle(48)
    est = dn_ladder(pts, ladder=(16, 32, 64), seed=1)
    assert est.n == 32
    assert any("skipped" in w for w in est.warnings)


def test_segment_dn_vs_oracle():
    pts = np.linspace(-1.0, 1.0, 2048).astype(complex)
    est = dn_ladder(pts, seed=DEFAULT_SEED)
    assert est.value == pytest.approx(0.5, rel=0.05)
    assert est.value >= 0.5    # the functional bounds capacity from above


# -- dispatch --

def test_capacity_dispatch_polyline():
    est = capacity(Polyline((0, 1, 1 + 1j)), seed=4)
    assert est.method == "dn_search"
    assert 0.25 <= est.value <= 1.0


def test_capacity_dispatch_cloud():
    est = capacity(Cloud(tuple(circle(256))), seed=4)
    assert est.value == pytest.approx(1.0, rel=0.05)


def test_capacity_method_override():
    est = capacity(Segment(-1, 1), method="dn", seed=2)
    assert est.method == "dn_search"
    with pytest.raises(ValueError):
        capacity(Polyline((0, 1)), method="oracle")


def test_capacity_component_full_lemniscate_uses_oracle():
    comps = extract_components(Poly([-1, 0, 1]), level=1.0)
    assert len(comps) == 1
    est = capacity(comps[0])
    assert est.method == "oracle_lemniscate"
    assert est.value == pytest.approx(1.0, rel=1e-12)


def test_capacity_component_of_split_lemniscate_uses_dn():
    comps = extract_components(Poly([-4, 0, 1]), level=1.0)   # z^2-4
    assert len(comps) == 2
    est = capacity(comps[0], seed=8)
    assert est.method == "dn_search"
    # each oval sits around +-2 with radius ~1/4 of the pair scale
    assert 0.2 <= est.value <= 0.6


def test_capacity_estimate_serialization():
    est = CapacityEstimate(value=0.5, n=64, history=((16, 0.6), (64, 0.5)),
                           method="dn_search", warnings=("w",))
    d = est.to_dict()
    assert d["value"] == 0.5 and d["history"] == [[16, 0.6], [64, 0.5]]
    assert d["warnings"] == ["w"]
