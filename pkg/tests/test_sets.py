import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from capmarkov.sets import (
    Cloud,
    Disc,
    Polyline,
    Segment,
    check_diam_cap,
    diameter,
    parse_set,
    sample_boundary,
)

small = st.floats(min_value=-50, max_value=50, allow_nan=False)
cnum = st.builds(complex, small, small)


# -- construction --

def test_segment_validation():
    with pytest.raises(ValueError):
        Segment(1 + 1j, 1 + 1j)


def test_disc_validation():
    with pytest.raises(ValueError):
        Disc(0, 0.0)
    with pytest.raises(ValueError):
        Disc(0, -1.0)


def test_polyline_validation():
    with pytest.raises(ValueError):
        Polyline((1,))
    with pytest.raises(ValueError):
        Polyline((0, 0, 1))     # zero-length edge


def test_cloud_validation():
    with pytest.raises(ValueError):
        Cloud(())
    c = Cloud((0, 1, 1j))
    assert c.connected


def test_describe_is_parseable_text():
    for s in (Segment(-1, 1), Disc(1j, 2.0), Polyline((0, 1, 1 + 1j))):
        assert isinstance(s.describe(), str) and s.describe()


# -- boundary sampling --

def test_segment_sampling_includes_endpoints():
    s = Segment(-1, 1)
    pts = sample_boundary(s, 17)
    assert len(pts) == 17
    assert pts[0] == -1 and pts[-1] == 1
    assert np.all(np.abs(pts.imag) == 0)


def test_disc_sampling_on_circle():
    s = Disc(1 + 2j, 3.0)
    pts = sample_boundary(s, 64)
    assert len(pts) == 64
    assert np.allclose(np.abs(pts - (1 + 2j)), 3.0)


def test_polyline_sampling_arclength_uniform():
    s = Polyline((0, 1, 1 + 1j))    # two unit edges
    pts = sample_boundary(s, 201)
    gaps = np.abs(np.diff(pts))
    # uniform spacing except possibly at the corner
    assert gaps.max() <= 2.1 * gaps.min()
    assert abs(pts[0]) == 0 and abs(pts[-1] - (1 + 1j)) < 1e-12


def test_cloud_sampling_returns_points():
    pts = (0 + 0j, 1 + 0j, 1j)
    got = sample_boundary(Cloud(pts), 10)
    assert set(np.asarray(got)) <= set(pts)


def test_sampling_rejects_tiny_counts():
    with pytest.raises(ValueError):
        sample_boundary(Segment(-1, 1), 1)


# -- diameter --

def test_diameter_exact_cases():
    assert diameter(np.array([0, 3 + 4j])) == 5.0
    th = 2 * np.pi * np.arange(360) / 360
    assert diameter(np.exp(1j * th)) == pytest.approx(2.0, abs=1e-12)


def test_diameter_collinear():
    pts = np.linspace(0, 1, 9) * (1 + 1j)
    assert diameter(pts) == pytest.approx(np.sqrt(2), abs=1e-12)


@given(st.lists(cnum, min_size=2, max_size=60))
@settings(max_examples=60, deadline=None)
def test_diameter_matches_bruteforce(pts):
    arr = np.array(pts)
    brute = max(abs(a - b) for a in pts for b in pts)
    assert diameter(arr) == pytest.approx(brute, rel=1e-12, abs=1e-12)


def test_diameter_large_set_uses_hull():
    rng = np.random.default_rng(5)
    pts = rng.normal(size=6000) + 1j * rng.normal(size=6000)
    sub = rng.choice(pts, size=500, replace=False)
    brute = max(abs(a - b) for a in sub for b in sub)
    assert diameter(pts) >= brute - 1e-12


# -- diameter vs capacity --

def test_diam_cap_segment_is_extremal():
    rep = check_diam_cap(Segment(-1, 1))
    assert rep.cap_method == "oracle_segment"
    assert rep.ratio == pytest.approx(4.0, rel=1e-9)
    assert rep.passed


def test_diam_cap_disc():
    rep = check_diam_cap(Disc(0.5j, 2.0))
    assert rep.ratio == pytest.approx(2.0, rel=1e-9)
    assert rep.passed


def test_diam_cap_polyline():
    rep = check_diam_cap(Polyline((0, 1, 1 + 1j)), seed=11)
    assert rep.passed
    assert rep.ratio <= 4.0 * 1.02
    d = rep.to_dict()
    assert d["pass"] is True and "ratio" in d


# -- parsing --

@pytest.mark.parametrize("text,kind", [
    ("segment:-1,1", Segment),
    ("disc:1+1i,2", Disc),
    ("polyline:0;1;1+1i", Polyline),
    ("cloud:0;1;1i", Cloud),
])
def test_parse_set_kinds(text, kind):
    assert isinstance(parse_set(text), kind)


def test_parse_set_cloud_file(tmp_path):
    p = tmp_path / "pts.csv"
    p.write_text("0+0i\n1+0i\n0+1i\n")
    c = parse_set(f"cloud:@{p}")
    assert isinstance(c, Cloud)
    assert len(c.points) == 3


@pytest.mark.parametrize("bad", [
    "", "segment:1", "disc:0", "disc:0,-1", "polyline:0",
    "blob:1,2", "segment:1,1", "cloud:",
])
def test_parse_set_rejects(bad):
    with pytest.raises(ValueError):
        parse_set(bad)


def test_parse_roundtrip_describe():
    s = parse_set("segment:-1,1")
    assert isinstance(parse_set(s.describe()), Segment)


def test_check_diam_cap_accepts_lemniscate_component():
    from capmarkov.levelset import extract_components
    from capmarkov.poly import Poly

    comp = extract_components(Poly([-1, 0, 1]))[0]
    rep = check_diam_cap(comp)
    assert rep.passed
    assert rep.cap_method == "oracle_lemniscate"
    # touching figure-eight: diameter 2*sqrt(2), capacity 1
    assert rep.ratio == pytest.approx(2 * np.sqrt(2), rel=1e-6)
    assert "lemniscate" in rep.subject
