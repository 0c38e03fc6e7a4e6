"""Complex polynomial core.

Polynomials are stored by ascending-power coefficient tuples.  Everything the
verification pipeline needs lives here: Horner evaluation, differentiation,
Chebyshev construction, affine substitution z -> c*z + b, and a simultaneous
(Aberth-style) root finder that refines all roots together.
"""

from __future__ import annotations

import math
import re

import numpy as np

# Residual acceptance for a computed root, relative to max coefficient magnitude.
TOL_ROOT = 1e-12
# Roots closer than TOL_CLUSTER_REL times the root bound merge into a multiple root.
TOL_CLUSTER_REL = 1e-6
# Degrees above this still work but double precision starts eating digits.
MAX_RECOMMENDED_DEGREE = 64

# Irrational rotation applied to the initial root circle so the start
# configuration never shares a symmetry axis with the polynomial.
_GOLDEN_ANGLE = 2.0 * math.pi * (2.0 / (1.0 + math.sqrt(5.0)) ** 2)

_EPS = np.finfo(float).eps


class RootFindingError(RuntimeError):
    """Simultaneous iteration ran out of iterations; carries the residuals attained."""

    def __init__(self, message: str, roots=None, residuals=None):
        super().__init__(message)
        self.roots = roots
        self.residuals = residuals


class Poly:
    """Polynomial with complex coefficients in ascending power order.

    The zero polynomial is a sentinel (``is_zero``, degree -1); inequality
    entry points reject it.  Instances are immutable and hashable.
    """

    __slots__ = ("coeffs", "_np", "_realc")

    def __init__(self, coeffs):
        cs = [complex(c) for c in coeffs]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        if not cs or (len(cs) == 1 and cs[0] == 0):
            cs = []
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "_np", np.asarray(cs if cs else [0j], dtype=complex))
        realc = np.array([c.real for c in cs]) if cs and all(
            c.imag == 0 for c in cs) else None
        object.__setattr__(self, "_realc", realc)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def zero(cls) -> "Poly":
        return cls([])

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> complex:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_monic(self, tol: float = 1e-9) -> bool:
        return not self.is_zero and abs(self.leading - 1.0) <= tol

    def __call__(self, z):
        """Evaluate by Horner's scheme; accepts scalars or numpy arrays.

        Real coefficients at real points go through the compensated variant,
        which keeps high-degree Chebyshev evaluations at working accuracy.
        """
        if self.is_zero:
            return 0j if np.isscalar(z) else np.zeros(np.shape(z), dtype=complex)
        if self._realc is not None:
            if isinstance(z, (int, float)) and not isinstance(z, bool):
                return complex(_comp_horner(self._realc, np.float64(z)))
            if not np.isscalar(z):
                zs = np.asarray(z)
                if not np.iscomplexobj(zs):
                    return _comp_horner(self._realc, zs.astype(float)).astype(complex)
        if isinstance(z, (int, float, complex)):
            acc = self.coeffs[-1]
            for c in self.coeffs[-2::-1]:
                acc = acc * z + c
            return acc
        zs = np.asarray(z, dtype=complex)
        return _horner(self._np, zs)

    def derivative(self) -> "Poly":
        """First derivative; constants map to the zero sentinel."""
        if self.degree < 1:
            return Poly.zero()
        return Poly([k * c for k, c in enumerate(self.coeffs)][1:])

    # -- arithmetic (enough for the deformation families and tests) --

    def __add__(self, other):
        if isinstance(other, (int, float, complex)):
            other = Poly([other])
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = list(self.coeffs), list(other.coeffs)
        if len(a) < len(b):
            a, b = b, a
        for i, c in enumerate(b):
            a[i] += c
        return Poly(a)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, (int, float, complex)):
            other = Poly([other])
        if not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return Poly([other * c for c in self.coeffs])
        if not isinstance(other, Poly):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return Poly.zero()
        return Poly(np.convolve(self._np, other._np))

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly('{format_poly(self)}')"


def _horner(c: np.ndarray, z: np.ndarray) -> np.ndarray:
    acc = np.full(z.shape, c[-1], dtype=complex)
    for k in range(len(c) - 2, -1, -1):
        acc = acc * z + c[k]
    return acc


_SPLIT = 134217729.0  # 2^27 + 1, Dekker's splitting constant


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _two_prod(a, b):
    p = a * b
    ah = _SPLIT * a
    ah = ah - (ah - a)
    al = a - ah
    bh = _SPLIT * b
    bh = bh - (bh - b)
    bl = b - bh
    return p, al * bl - (((p - ah * bh) - al * bh) - ah * bl)


def _comp_horner(c: np.ndarray, x):
    """Compensated Horner for real data: carries the rounding error of every
    step in a parallel accumulator, matching twice-precision accumulation."""
    acc = np.full(np.shape(x), c[-1], dtype=float)
    err = np.zeros(np.shape(x))
    for k in range(len(c) - 2, -1, -1):
        p, pi = _two_prod(acc, x)
        acc, sg = _two_sum(p, c[k])
        err = err * x + (pi + sg)
    return acc + err


def eval_poly(p: Poly, z: complex) -> complex:
    """p(z) by nested evaluation; total on any non-zero Poly."""
    return p(z)


def derivative(p: Poly) -> Poly:
    return p.derivative()


def chebyshev(d: int) -> Poly:
    """Chebyshev polynomial T_d from cos(d*t) = T_d(cos t).

    Built by the three-term recurrence T_{d+1} = 2z*T_d - T_{d-1} in exact
    integer arithmetic, so the leading coefficient is exactly 2**(d-1).
    """
    if d < 0:
        raise ValueError("degree must be nonnegative")
    if d == 0:
        return Poly([1])
    prev, cur = [1], [0, 1]
    for _ in range(d - 1):
        nxt = [0] + [2 * x for x in cur]
        for i, x in enumerate(prev):
            nxt[i] -= x
        prev, cur = cur, nxt
    return Poly(cur)


def affine_compose(p: Poly, c: complex, b: complex) -> Poly:
    """The polynomial q(z) = p(c*z + b), expanded by synthetic substitution."""
    if c == 0:
        raise ValueError("c = 0 collapses the degree")
    if p.is_zero:
        return Poly.zero()
    c, b = complex(c), complex(b)
    res = [p.coeffs[-1]]
    for coef in p.coeffs[-2::-1]:
        new = [0j] * (len(res) + 1)
        for i, r in enumerate(res):
            new[i] += r * b
            new[i + 1] += r * c
        new[0] += coef
        res = new
    return Poly(res)


def root_bound(p: Poly) -> float:
    """Cauchy-style radius: all roots lie in |z| <= 1 + max|c_k|/|c_d|."""
    if p.degree < 1:
        raise ValueError("need degree >= 1")
    lead = abs(p.leading)
    return 1.0 + max(abs(c) for c in p.coeffs[:-1]) / lead if p.degree >= 1 else 1.0


def _aberth(c: np.ndarray, init: np.ndarray, max_iter: int) -> np.ndarray:
    """Aberth-Ehrlich simultaneous refinement; preserves the positional order
    of `init`, which boundary continuation relies on."""
    dc = c[1:] * np.arange(1, len(c))
    z = init.astype(complex).copy()
    d = len(z)
    for _ in range(max_iter):
        pv = _horner(c, z)
        dv = _horner(dc, z) if len(dc) else np.zeros_like(z)
        dv = np.where(dv == 0, _EPS * (1 + np.abs(z)), dv)
        w = pv / dv
        if d > 1:
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            s = (1.0 / diff).sum(axis=1)
        else:
            s = np.zeros_like(z)
        den = 1.0 - w * s
        den = np.where(den == 0, 1.0, den)
        corr = w / den
        # a wild step means the linearization lied; damp it to the root bound scale
        big = np.abs(corr) > 1.0 + np.abs(z)
        if big.any():
            corr = np.where(big, corr / np.abs(corr) * (1.0 + np.abs(z)), corr)
        z = z - corr
        if np.all(np.abs(corr) <= 1e-13 * (1.0 + np.abs(z))):
            break
    return z


def _initial_circle(p: Poly) -> np.ndarray:
    d = p.degree
    r = root_bound(p)
    k = np.arange(d)
    return r * np.exp(1j * (2.0 * np.pi * k / d + _GOLDEN_ANGLE))


def _residual_floor(p: Poly, z: np.ndarray) -> np.ndarray:
    # evaluation roundoff floor: eps * sum |c_k| |z|^k
    cond = _horner(np.abs(p._np).astype(complex), np.abs(z).astype(complex))
    return 8.0 * _EPS * np.abs(cond)


def roots(p: Poly, tol_root: float = TOL_ROOT, max_iter: int = 400,
          tol_cluster: float | None = None) -> list[complex]:
    """All degree(p) roots with multiplicity, by simultaneous iteration.

    Nearby roots (within ``tol_cluster``, default 1e-6 of the root bound)
    are merged to their centroid and reported with multiplicity.  Raises
    RootFindingError with the attained residuals if the iteration stalls
    above the acceptance threshold.
    """
    if p.degree < 1:
        raise ValueError("need degree >= 1")
    c = p._np
    if p.degree == 1:
        return [complex(-c[0] / c[1])]
    z = _aberth(c, _initial_circle(p), max_iter)
    scale = max(abs(x) for x in p.coeffs)
    res = np.abs(_horner(c, z))
    accept = np.maximum(tol_root * scale, _residual_floor(p, z))
    if not np.all(res <= accept):
        # a perturbed restart shakes loose the occasional bad configuration
        z2 = _aberth(c, _initial_circle(p) * (1.0 + 0.05j), max_iter)
        res2 = np.abs(_horner(c, z2))
        if np.all(res2 <= np.maximum(tol_root * scale, _residual_floor(p, z2))):
            z, res = z2, res2
        else:
            raise RootFindingError(
                f"root iteration stalled; worst residual {res.max():.3e} "
                f"(acceptance {accept.max():.3e})", roots=z, residuals=res)
    if tol_cluster is None:
        tol_cluster = TOL_CLUSTER_REL * root_bound(p)
    merged = _cluster(z, tol_cluster)
    return sorted(merged, key=lambda w: (w.real, w.imag))


def _cluster(z: np.ndarray, tol: float) -> list[complex]:
    """Merge roots within `tol` to their cluster centroid, kept with multiplicity."""
    n = len(z)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(z[i] - z[j]) <= tol:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    out: list[complex] = []
    for members in groups.values():
        centroid = complex(np.mean(z[members]))
        out.extend([centroid] * len(members))
    return out


def critical_values(p: Poly, tol_root: float = TOL_ROOT) -> list[complex]:
    """p at every root of p' (with multiplicity)."""
    if p.degree < 2:
        raise ValueError("need degree >= 2")
    return [p(r) for r in roots(p.derivative(), tol_root=tol_root)]


def critical_points(p: Poly, tol_root: float = TOL_ROOT) -> list[complex]:
    """Roots of p' (with multiplicity)."""
    if p.degree < 2:
        raise ValueError("need degree >= 2")
    return roots(p.derivative(), tol_root=tol_root)


# -- text form: comma-separated `a+bi` literals, ascending powers --

_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_RE_FULL = re.compile(rf"([+-]?{_NUM})([+-]{_NUM}?)i")
_RE_IMAG = re.compile(rf"([+-]?(?:{_NUM})?)i")
_RE_REAL = re.compile(rf"([+-]?{_NUM})")


def _imag_part(text: str) -> float:
    # a bare sign (or nothing) before i means coefficient 1
    if text in ("", "+"):
        return 1.0
    if text == "-":
        return -1.0
    return float(text)


def parse_complex(token: str) -> complex:
    """Parse `a+bi` (sign before bi mandatory); bare `a`, `bi`, `i` also work."""
    t = token.strip().replace(" ", "")
    m = _RE_FULL.fullmatch(t)
    if m:
        return complex(float(m.group(1)), _imag_part(m.group(2)))
    m = _RE_IMAG.fullmatch(t)
    if m:
        return complex(0.0, _imag_part(m.group(1)))
    m = _RE_REAL.fullmatch(t)
    if m:
        return complex(float(m.group(1)), 0.0)
    raise ValueError(f"cannot parse complex literal {token!r} (expected a+bi)")


def format_complex(z: complex) -> str:
    z = complex(z)
    return f"{z.real:.17g}{z.imag:+.17g}i"


def parse_poly(text: str) -> Poly:
    """Polynomial from comma-separated complex coefficients, ascending powers."""
    tokens = [t for t in text.split(",") if t.strip()]
    if not tokens:
        raise ValueError("empty polynomial literal")
    return Poly([parse_complex(t) for t in tokens])


def format_poly(p: Poly) -> str:
    if p.is_zero:
        return "0+0i"
    return ",".join(format_complex(c) for c in p.coeffs)
