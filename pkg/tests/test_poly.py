import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from capmarkov.poly import (
    Poly,
    RootFindingError,
    affine_compose,
    chebyshev,
    critical_points,
    critical_values,
    eval_poly,
    format_complex,
    format_poly,
    parse_complex,
    parse_poly,
    root_bound,
    roots,
)

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)
small = st.floats(min_value=-10, max_value=10, allow_nan=False)
cnum = st.builds(complex, small, small)


def test_trailing_zeros_trimmed():
    p = Poly([1, 2, 0, 0])
    assert p.coeffs == (1 + 0j, 2 + 0j)
    assert p.degree == 1


def test_zero_sentinel():
    z = Poly([0, 0])
    assert z.is_zero
    assert z.degree == -1
    assert z(3.0) == 0j
    with pytest.raises(ValueError):
        z.leading


def test_immutability_and_hash():
    p = Poly([1, 1])
    with pytest.raises(AttributeError):
        p.coeffs = (2,)
    assert p == Poly([1.0, 1.0])
    assert hash(p) == hash(Poly([1, 1]))


def test_is_monic():
    assert Poly([3, 0, 1]).is_monic()
    assert not Poly([0, 2]).is_monic()
    assert Poly([0, 1 + 1e-12]).is_monic(tol=1e-9)


@given(st.lists(cnum, min_size=1, max_size=8), cnum)
def test_eval_matches_numpy(cs, z):
    p = Poly(cs)
    ref = np.polyval(np.array(list(reversed(p.coeffs)) or [0]), z)
    scale = max(1.0, max(abs(c) for c in cs) * max(1.0, abs(z)) ** 8)
    assert abs(p(z) - ref) <= 1e-9 * scale


@given(st.lists(cnum, min_size=1, max_size=6), st.lists(cnum, min_size=1, max_size=6), cnum)
def test_ring_identities(a, b, z):
    p, q = Poly(a), Poly(b)
    scale = 1.0 + sum(abs(c) for c in a) * sum(abs(c) for c in b) * max(1.0, abs(z)) ** 10
    assert abs((p + q)(z) - (p(z) + q(z))) <= 1e-9 * scale
    assert abs((p * q)(z) - p(z) * q(z)) <= 1e-9 * scale
    assert abs((p - q)(z) - (p(z) - q(z))) <= 1e-9 * scale


def test_scalar_and_array_eval_agree():
    p = Poly([1, -2, 0.5, 3j])
    zs = np.array([0.3, -1.2 + 0.7j, 2.0])
    arr = p(zs)
    for z, v in zip(zs, arr):
        assert abs(p(complex(z)) - v) < 1e-12


def test_derivative_rules():
    p = Poly([5, 3, 2])          # 2z^2 + 3z + 5
    assert p.derivative().coeffs == (3 + 0j, 4 + 0j)
    assert Poly([7]).derivative().is_zero
    # product rule at a point
    q = Poly([0, 1, 1])
    z = 0.37 + 0.21j
    lhs = (p * q).derivative()(z)
    rhs = p.derivative()(z) * q(z) + p(z) * q.derivative()(z)
    assert abs(lhs - rhs) < 1e-12


# -- Chebyshev --

def test_chebyshev_integer_coefficients():
    assert chebyshev(0).coeffs == (1 + 0j,)
    assert chebyshev(1).coeffs == (0j, 1 + 0j)
    assert chebyshev(2).coeffs == (-1 + 0j, 0j, 2 + 0j)
    assert chebyshev(3).coeffs == (0j, -3 + 0j, 0j, 4 + 0j)
    for d in range(1, 16):
        T = chebyshev(d)
        assert T.leading == 2 ** (d - 1)
        assert all(c.real == int(c.real) and c.imag == 0 for c in T.coeffs)


@pytest.mark.parametrize("d", range(1, 21))
def test_chebyshev_cosine_identity(d):
    # evaluation must hold the identity to 1e-10 through degree 20
    T = chebyshev(d)
    th = np.linspace(0.0, np.pi, 257)
    assert np.max(np.abs(T(np.cos(th)) - np.cos(d * th))) <= 1e-10


def test_chebyshev_three_term_recurrence():
    for d in range(2, 12):
        lhs = chebyshev(d)
        rhs = Poly([0, 2]) * chebyshev(d - 1) - chebyshev(d - 2)
        assert lhs == rhs


def test_chebyshev_critical_values_unimodular():
    # interior critical values all have modulus exactly 1
    for d in (3, 5, 8):
        for a in critical_values(chebyshev(d)):
            assert abs(abs(a) - 1.0) < 1e-9


def test_chebyshev_rejects_negative():
    with pytest.raises(ValueError):
        chebyshev(-1)


# -- affine substitution --

@given(st.lists(cnum, min_size=2, max_size=6), cnum,
       cnum.filter(lambda c: abs(c) > 1e-3), cnum)
def test_affine_compose_pointwise(cs, b, c, z):
    p = Poly(cs)
    q = affine_compose(p, c, b)
    scale = 1.0 + sum(abs(x) for x in cs) * max(1.0, abs(c * z + b)) ** 6
    assert abs(q(z) - p(c * z + b)) <= 1e-9 * scale


def test_affine_compose_rejects_degenerate():
    with pytest.raises(ValueError):
        affine_compose(Poly([0, 1]), 0.0, 1.0)


# -- roots --

def test_roots_simple():
    got = roots(Poly([-1, 0, 1]))
    assert got == [(-1 + 0j), (1 + 0j)]


def test_roots_multiplicity_cluster():
    # (z-1)^3: triple roots are only determined to ~eps^(1/3); the cluster
    # step must still fuse the three estimates into one reported root x3
    p = Poly([-1, 3, -3, 1])
    got = roots(p)
    assert len(got) == 3
    assert len(set(got)) == 1
    assert all(abs(r - 1) < 1e-5 for r in got)


@pytest.mark.parametrize("seed", range(8))
def test_roots_against_numpy(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(2, 9))
    cs = rng.normal(size=d + 1) + 1j * rng.normal(size=d + 1)
    p = Poly(cs)
    ours = np.array(roots(p))
    ref = np.sort_complex(np.roots(list(reversed(p.coeffs))))
    assert len(ours) == len(ref)
    # match by nearest pairing
    ref_left = list(ref)
    for r in ours:
        k = int(np.argmin(np.abs(np.array(ref_left) - r)))
        assert abs(ref_left[k] - r) < 1e-7 * max(1.0, abs(r))
        ref_left.pop(k)


@given(st.lists(cnum, min_size=3, max_size=7))
@settings(max_examples=40, deadline=None)
def test_root_bound_contains_roots(cs):
    p = Poly(cs)
    if p.degree < 1:
        return
    R = root_bound(p)
    for r in roots(p):
        assert abs(r) <= R * (1 + 1e-8)


def test_roots_rejects_constants():
    with pytest.raises(ValueError):
        roots(Poly([3]))


def test_root_finding_error_carries_state():
    err = RootFindingError("stalled", roots=[1j], residuals=[0.5])
    assert err.roots == [1j]
    assert err.residuals == [0.5]


# -- critical points / values --

def test_critical_points_cubic():
    p = Poly([0, -3, 0, 1])      # z^3 - 3z
    cps = critical_points(p)
    assert sorted(z.real for z in cps) == pytest.approx([-1.0, 1.0], abs=1e-10)
    cvs = sorted(critical_values(p), key=lambda w: w.real)
    assert cvs[0].real == pytest.approx(-2.0, abs=1e-9)
    assert cvs[1].real == pytest.approx(2.0, abs=1e-9)


def test_critical_values_need_degree_two():
    with pytest.raises(ValueError):
        critical_values(Poly([0, 1]))


# -- parsing / formatting --

@pytest.mark.parametrize("text,value", [
    ("1", 1 + 0j),
    ("-2.5", -2.5 + 0j),
    ("3i", 3j),
    ("-i", -1j),
    ("1+2i", 1 + 2j),
    ("1.5-0.5i", 1.5 - 0.5j),
    ("2e-3+1e2i", 0.002 + 100j),
])
def test_parse_complex_forms(text, value):
    assert parse_complex(text) == value


@pytest.mark.parametrize("bad", ["", "i+", "1+2", "2++3i", "abc", "1 + 2i-"])
def test_parse_complex_rejects(bad):
    with pytest.raises(ValueError):
        parse_complex(bad)


@given(st.builds(complex, finite, finite))
def test_complex_roundtrip(z):
    assert parse_complex(format_complex(z)) == z


@given(st.lists(st.builds(complex, finite, finite), min_size=1, max_size=7))
def test_poly_roundtrip(cs):
    p = Poly(cs)
    if p.is_zero:
        return
    assert parse_poly(format_poly(p)) == p


def test_parse_poly_example():
    p = parse_poly("-1,0,1")
    assert p.coeffs == (-1 + 0j, 0j, 1 + 0j)


def test_eval_poly_function():
    assert eval_poly(Poly([1, 1]), 2.0) == 3 + 0j
