"""Sharp Markov-type derivative bounds on plane continua.

The central quantity is the quotient

    Q = sup_E |q'| * cap(E) / (2^(1/d - 1) * d^2 * sup_E |q|),

which the sharp inequality keeps at or below 1 for every polynomial q of
degree d and every continuum E.  Equality forces E to be the filled
lemniscate of a scaled Chebyshev polynomial, which ``certify_extremal``
detects by reconstructing the scaling.
"""

from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .capacity import DEFAULT_SEED, CapacityEstimate, capacity as compute_capacity
from .levelset import (
    LevelSetComponent,
    boundary_points,
    components,
    is_connected,
    sup_on_boundary,
    sup_on_component,
)
from .poly import Poly, affine_compose, chebyshev, critical_points, format_complex
from .sets import Cloud, Disc, Polyline, Segment, diameter, sample_boundary

# Default slack on quotient <= 1 when capacity comes from a closed form.
TOL_VERIFY_ORACLE = 0.005
# Wider slack when capacity comes from the transfinite-diameter search,
# which overestimates at finite n.
TOL_VERIFY_DN = 0.05
TOL_MONIC = 1e-9
TOL_CERT = 1e-6


def bound(d: int) -> float:
    """Sharp constant 2^(1/d - 1) * d^2; equals 1 at d = 1."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    return 2.0 ** (1.0 / d - 1.0) * d * d


def corollary_bound(d: int) -> float:
    """Diameter-form constant 2^(1/d + 1) * d^2 (capacity replaced by diam/4)."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    return 2.0 ** (1.0 / d + 1.0) * d * d


def pommerenke_bound(d: int) -> float:
    """Classical e * d^2 / 2 comparison constant, strictly above bound(d)."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    return math.e * d * d / 2.0


def quotient(sup_deriv: float, sup_poly: float, cap: float, d: int) -> float:
    """Normalized Markov quotient; the sharp inequality is quotient <= 1."""
    if sup_poly <= 0 or cap <= 0:
        raise ValueError("sup norm and capacity must be positive")
    return sup_deriv * cap / (bound(d) * sup_poly)


# -- sup norms over the supported sets --

def _polyline_point(vertices: tuple, cum: np.ndarray, t: float) -> complex:
    s = t * cum[-1]
    i = int(np.searchsorted(cum, s, side="right")) - 1
    i = min(max(i, 0), len(vertices) - 2)
    seg = cum[i + 1] - cum[i]
    frac = 0.0 if seg == 0 else (s - cum[i]) / seg
    return vertices[i] + frac * (vertices[i + 1] - vertices[i])


def sup_on_set(q: Poly, s, n: int = 4096, refine: bool = True) -> float:
    """max |q| over a continuum.  Boundary sampling plus a golden-section
    sharpening along the local parametrization; clouds use their points as-is.
    """
    if isinstance(s, LevelSetComponent):
        return sup_on_component(q, s, refine=refine)
    pts = sample_boundary(s, n)
    vals = np.abs(q(pts))
    i = int(np.argmax(vals))
    best = float(vals[i])
    if not refine or isinstance(s, Cloud):
        return best

    if isinstance(s, Segment):
        def point(t: float) -> complex:
            return s.a + t * (s.b - s.a)
        t0, wrap = i / (n - 1), False
    elif isinstance(s, Disc):
        def point(t: float) -> complex:
            return s.center + s.radius * cmath.exp(2j * math.pi * t)
        t0, wrap = i / n, True
    else:
        verts = s.vertices
        lens = np.abs(np.diff(np.asarray(verts)))
        cum = np.concatenate([[0.0], np.cumsum(lens)])

        def point(t: float) -> complex:
            return _polyline_point(verts, cum, t)
        t0, wrap = i / (n - 1), False

    w = 1.5 / n
    lo, hi = (t0 - w, t0 + w) if wrap else (max(0.0, t0 - w), min(1.0, t0 + w))
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    e = a + inv_phi * (b - a)
    fc, fe = abs(q(point(c))), abs(q(point(e)))
    for _ in range(60):
        if fc >= fe:
            b, e, fe = e, c, fc
            c = b - inv_phi * (b - a)
            fc = abs(q(point(c)))
        else:
            a, c, fc = c, e, fe
            e = a + inv_phi * (b - a)
            fe = abs(q(point(e)))
        if b - a < 1e-12:
            break
    return max(best, fc, fe)


def set_diameter(s) -> float:
    """Euclidean diameter; exact for segments and discs."""
    if isinstance(s, Segment):
        return abs(s.b - s.a)
    if isinstance(s, Disc):
        return 2.0 * s.radius
    if isinstance(s, Polyline):
        return diameter(np.asarray(s.vertices))
    if isinstance(s, Cloud):
        return diameter(np.asarray(s.points))
    if isinstance(s, LevelSetComponent):
        return diameter(s.boundary_samples(min_points=1024))
    raise TypeError(f"unsupported set {type(s).__name__}")


# -- reports --

@dataclass(frozen=True)
class MarkovReport:
    """Outcome of one inequality check, JSON- and CSV-serializable."""
    theorem: str
    degree: int
    set_description: str
    sup_deriv: float
    sup_poly: float
    capacity: float | None
    capacity_method: str
    bound_constant: float
    quotient: float
    tolerance: float
    passed: bool
    diameter: float | None = None
    warnings: tuple[str, ...] = ()
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "degree": self.degree,
            "set": self.set_description,
            "sup_deriv": self.sup_deriv,
            "sup_poly": self.sup_poly,
            "capacity": self.capacity,
            "capacity_method": self.capacity_method,
            "diameter": self.diameter,
            "bound_constant": self.bound_constant,
            "quotient": self.quotient,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "warnings": list(self.warnings),
            "details": self.details,
        }

    CSV_HEADER = ("theorem", "degree", "set", "sup_deriv", "sup_poly",
                  "capacity", "diameter", "bound_constant", "quotient",
                  "tolerance", "pass")

    def to_csv_row(self) -> list[str]:
        def fmt(x):
            if x is None:
                return ""
            if isinstance(x, bool):
                return str(x).lower()
            if isinstance(x, float):
                return format(x, ".17g")
            return str(x)
        return [fmt(getattr(self, k) if k != "set" else self.set_description)
                for k in ("theorem", "degree", "set", "sup_deriv", "sup_poly",
                          "capacity", "diameter", "bound_constant", "quotient",
                          "tolerance")] + [fmt(self.passed)]


def _cap_of(s, method: str, seed: int | None, candidates: int) -> CapacityEstimate:
    return compute_capacity(s, candidates=candidates, seed=seed, method=method)


def verify_theorem1(q: Poly, s, *, capacity_method: str = "auto",
                    n_boundary: int = 4096, candidates: int = 2048,
                    seed: int | None = DEFAULT_SEED,
                    tol: float | None = None) -> MarkovReport:
    """Check the sharp inequality for an arbitrary polynomial on a continuum."""
    d = q.degree
    if d < 1:
        raise ValueError("polynomial must be nonconstant")
    est = _cap_of(s, capacity_method, seed, candidates)
    sup_p = sup_on_set(q, s, n=n_boundary)
    sup_dp = sup_on_set(q.derivative(), s, n=n_boundary)
    qv = quotient(sup_dp, sup_p, est.value, d)
    if tol is None:
        tol = TOL_VERIFY_ORACLE if est.method.startswith("oracle") else TOL_VERIFY_DN
    desc = s.describe() if hasattr(s, "describe") else f"component {s.label} of |f|<={s.level}"
    return MarkovReport(
        theorem="1", degree=d, set_description=desc,
        sup_deriv=sup_dp, sup_poly=sup_p,
        capacity=est.value, capacity_method=est.method,
        bound_constant=bound(d), quotient=qv, tolerance=tol,
        passed=qv <= 1.0 + tol, warnings=est.warnings)


def verify_theorem2(f: Poly, level: float = 1.0, *, m: int | None = None,
                    tol: float = TOL_VERIFY_ORACLE) -> MarkovReport:
    """Check the inequality for f on its own filled lemniscate {|f| <= level}.

    Capacity is the closed form (level/|lead|)^(1/d), so the lemniscate must
    be connected.  Scaled Chebyshev polynomials reach quotient 1 here.
    """
    d = f.degree
    if d < 1:
        raise ValueError("polynomial must be nonconstant")
    conn = is_connected(f, level)
    if not conn:
        raise ValueError("lemniscate is disconnected; the closed-form capacity "
                         "only covers the connected case")
    sample = boundary_points(f, level=level, m=m)
    sup_p = float(np.abs(f(sample.points)).max())
    sup_dp = sup_on_boundary(f.derivative(), sample)
    cap = (level / abs(f.leading)) ** (1.0 / d)
    qv = quotient(sup_dp, sup_p, cap, d)
    cert = certify_extremal(f)
    warnings = ("level curve passes through a critical point",) if conn.boundary_touching else ()
    return MarkovReport(
        theorem="2", degree=d, set_description=f"filled lemniscate |f| <= {level:g}",
        sup_deriv=sup_dp, sup_poly=sup_p,
        capacity=cap, capacity_method="oracle_lemniscate",
        bound_constant=bound(d), quotient=qv, tolerance=tol,
        passed=qv <= 1.0 + tol, warnings=warnings,
        details={"extremal": cert.extremal, "certificate": cert.to_dict()})


def verify_theoremA(f: Poly, *, m: int | None = None,
                    tol: float = TOL_VERIFY_ORACLE) -> MarkovReport:
    """Monic normalization: on the unit-level lemniscate of a monic f the
    capacity is exactly 1, so the check reduces to sup |f'| <= 2^(1/d-1) d^2.
    """
    if not f.is_monic(TOL_MONIC):
        raise ValueError("polynomial must be monic")
    rep = verify_theorem2(f, level=1.0, m=m, tol=tol)
    return MarkovReport(
        theorem="A", degree=rep.degree, set_description=rep.set_description,
        sup_deriv=rep.sup_deriv, sup_poly=rep.sup_poly,
        capacity=1.0, capacity_method="oracle_lemniscate",
        bound_constant=rep.bound_constant, quotient=rep.quotient,
        tolerance=tol, passed=rep.passed, warnings=rep.warnings,
        details=rep.details)


def verify_corollary(q: Poly, s, *, n_boundary: int = 4096,
                     tol: float = TOL_VERIFY_ORACLE) -> MarkovReport:
    """Diameter form: sup |q'| * diam(E) <= 2^(1/d+1) d^2 sup |q|.

    Both inequalities folded into it (diam <= 4 cap and the sharp bound) are
    tight on different sets, so the quotient stays strictly below 1.
    """
    d = q.degree
    if d < 1:
        raise ValueError("polynomial must be nonconstant")
    diam = set_diameter(s)
    sup_p = sup_on_set(q, s, n=n_boundary)
    sup_dp = sup_on_set(q.derivative(), s, n=n_boundary)
    qv = sup_dp * diam / (corollary_bound(d) * sup_p)
    desc = s.describe() if hasattr(s, "describe") else f"component {s.label} of |f|<={s.level}"
    return MarkovReport(
        theorem="corollary", degree=d, set_description=desc,
        sup_deriv=sup_dp, sup_poly=sup_p,
        capacity=None, capacity_method="none",
        bound_constant=corollary_bound(d), quotient=qv, tolerance=tol,
        passed=qv <= 1.0 + tol, diameter=diam)


# -- extremal certificates --

@dataclass(frozen=True)
class ExtremalCertificate:
    """Reconstruction f =? a * T_d(c z + b); extremal means the residual is
    small and |a| = 1."""
    extremal: bool
    a: complex | None
    b: complex | None
    c: complex | None
    residual: float

    def to_dict(self) -> dict:
        return {
            "extremal": self.extremal,
            "a": None if self.a is None else format_complex(self.a),
            "b": None if self.b is None else format_complex(self.b),
            "c": None if self.c is None else format_complex(self.c),
            "abs_a": None if self.a is None else abs(self.a),
            "residual": self.residual,
        }


def _cheb_compose(d: int, a: complex, c: complex, b: complex) -> Poly:
    return affine_compose(chebyshev(d), c, b) * a


def certify_extremal(f: Poly, tol_cert: float = TOL_CERT) -> ExtremalCertificate:
    """Decide whether f = a T_d(c z + b) with |a| = 1 and recover (a, b, c).

    The critical points pin the affine map: their mean is -b/c and the one
    farthest from the mean is (cos(pi/d) - b)/c.  The leading coefficient
    then determines a.  Degree-1 polynomials are always of this form.
    """
    d = f.degree
    if d < 1:
        raise ValueError("polynomial must be nonconstant")
    lead = f.leading
    if d == 1:
        a = lead / abs(lead)
        c = abs(lead)
        b = f.coeffs[0] / a
        return ExtremalCertificate(True, a, b, c, 0.0)

    crit = critical_points(f)
    mu = complex(np.mean(crit))
    if d == 2:
        # single critical point; its value is a * T_2(0) = -a
        a = -f(crit[0])
        if a == 0:
            return ExtremalCertificate(False, None, None, None, math.inf)
        c = cmath.sqrt(lead / (2.0 * a))
    else:
        far = max(crit, key=lambda z: abs(z - mu))
        if far == mu:
            return ExtremalCertificate(False, None, None, None, math.inf)
        c = math.cos(math.pi / d) / (far - mu)
        a = lead / (2.0 ** (d - 1) * c ** d)
    b = -mu * c
    g = _cheb_compose(d, a, c, b)
    ga = np.zeros(d + 1, dtype=complex)
    fa = np.zeros(d + 1, dtype=complex)
    ga[: len(g.coeffs)] = g.coeffs
    fa[: len(f.coeffs)] = f.coeffs
    scale = max(1.0, float(np.abs(fa).max()))
    residual = float(np.abs(ga - fa).max()) / scale
    ok = residual <= tol_cert and abs(abs(a) - 1.0) <= tol_cert
    return ExtremalCertificate(ok, a, b, c, residual)


def normalize_pair(f: Poly, beta: complex = 0.0) -> Poly:
    """Recenter at beta and rescale to monic: z -> f(z + beta) / lead(f)."""
    if f.degree < 1:
        raise ValueError("polynomial must be nonconstant")
    return affine_compose(f, 1.0, beta) * (1.0 / f.leading)


# -- random soundness sweeps --

@dataclass(frozen=True)
class SweepCase:
    degree: int
    coeffs: tuple[complex, ...]
    component: int
    n_components: int
    quotient: float
    capacity_method: str
    tolerance: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "coeffs": [format_complex(z) for z in self.coeffs],
            "component": self.component,
            "n_components": self.n_components,
            "quotient": self.quotient,
            "capacity_method": self.capacity_method,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


@dataclass(frozen=True)
class SweepResult:
    seed: int
    degrees: tuple[int, ...]
    per_degree: int
    cases: tuple[SweepCase, ...]
    elapsed: float

    @property
    def failures(self) -> tuple[SweepCase, ...]:
        return tuple(c for c in self.cases if not c.passed)

    @property
    def n_polynomials(self) -> int:
        return len(self.degrees) * self.per_degree

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "degrees": list(self.degrees),
            "per_degree": self.per_degree,
            "n_polynomials": self.n_polynomials,
            "n_components_checked": len(self.cases),
            "n_failures": len(self.failures),
            "elapsed_seconds": self.elapsed,
            "failures": [c.to_dict() for c in self.failures],
        }


_ROOT_RADIUS = 1.6


def _random_monic(rng: np.random.Generator, d: int) -> Poly:
    # roots uniform in a radius-1.6 disc: level-1 lemniscates then split into
    # several components often enough to exercise the search-based capacity
    # route alongside the closed form
    r = _ROOT_RADIUS * np.sqrt(rng.uniform(0.0, 1.0, d))
    th = rng.uniform(0.0, 2.0 * np.pi, d)
    zs = r * np.exp(1j * th)
    c = np.array([1.0 + 0.0j])
    for z in zs:
        c = np.convolve(c, np.array([1.0, -z]))
    return Poly(c[::-1])


def sweep_random(degrees=(2, 3, 4, 5, 6), per_degree: int = 500,
                 seed: int = DEFAULT_SEED, level: float = 1.0,
                 tol_oracle: float = TOL_VERIFY_ORACLE,
                 tol_dn: float = TOL_VERIFY_DN,
                 m: int | None = None,
                 progress=None) -> SweepResult:
    """Exercise the inequality on random monic polynomials, one check per
    lemniscate component.

    Connected lemniscates use the closed-form capacity (tight tolerance);
    individual components of disconnected ones fall back to the
    transfinite-diameter search (loose tolerance).  A degenerate extraction
    is retried with doubled phase resolution before being recorded.
    """
    t0 = time.monotonic()
    rng = np.random.default_rng(seed)
    cases = []
    for d in degrees:
        for _ in range(per_degree):
            f = _random_monic(rng, d)
            comps = components(f, level=level, m=m)
            tries = 0
            while any(c.degenerate for c in comps) and tries < 2:
                tries += 1
                m_retry = (m or max(64, 32 * d)) * 2 ** tries
                comps = components(f, level=level, m=m_retry)
            df = f.derivative()
            for comp in comps:
                if comp.full_lemniscate:
                    cap = (level / abs(f.leading)) ** (1.0 / d)
                    method, tol = "oracle_lemniscate", tol_oracle
                else:
                    est = compute_capacity(comp, seed=seed)
                    cap, method = est.value, est.method
                    tol = tol_oracle if est.method.startswith("oracle") else tol_dn
                sup_p = float(max(np.abs(f(b)).max() for b in comp.boundary))
                sup_dp = sup_on_component(df, comp)
                qv = quotient(sup_dp, sup_p, cap, d)
                cases.append(SweepCase(
                    degree=d, coeffs=f.coeffs, component=comp.label,
                    n_components=len(comps), quotient=qv,
                    capacity_method=method, tolerance=tol,
                    passed=qv <= 1.0 + tol))
            if progress is not None:
                progress(d, len(cases))
    return SweepResult(seed=seed, degrees=tuple(degrees), per_degree=per_degree,
                       cases=tuple(cases), elapsed=time.monotonic() - t0)
