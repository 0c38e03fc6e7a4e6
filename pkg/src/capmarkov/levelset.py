"""Lemniscate extraction: boundary tracing of {z : |f(z)| <= level}, component
decomposition, connectivity, and sup-norms over components.

Boundary points come from solving f(z) = level*e^(i*theta) per phase; the d
solutions per phase are matched across phases into strands, strands close up
into cycles, and cycles become component boundaries.  This root-based route
keeps spectral accuracy where marching grids lose thin necks.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .poly import Poly, RootFindingError, _aberth, _horner, _initial_circle, _residual_floor, roots

logger = logging.getLogger(__name__)

# Relative residual allowed on |f(z)| - level for emitted boundary points.
TOL_LEVEL = 1e-9
# Critical values within this relative distance of the level mean the level
# curve passes through a critical point (components touch).
TOL_TOUCH = 1e-9
# Strands closer than this (relative to the configuration scale) make the
# phase matching ambiguous.
TOL_MERGE_REL = 1e-6
# Stop refining a boundary supremum when the improvement drops below this.
TOL_SUP = 1e-10
# Windings farther than this from an integer (in turns) flag the extraction.
WINDING_TOL = 0.25


class BoundaryExtractionError(RuntimeError):
    """Phase solve failed; carries the phase index."""

    def __init__(self, message: str, phase_index: int, residuals=None):
        super().__init__(message)
        self.phase_index = phase_index
        self.residuals = residuals


def default_phase_count(degree: int) -> int:
    return max(64, 32 * degree)


@dataclass(frozen=True)
class ConnectivityResult:
    """Lemniscate connectivity verdict (exact criterion: every critical value
    has modulus <= level).  Truthiness is the verdict itself."""
    connected: bool
    boundary_touching: bool
    critical_values: tuple[complex, ...]
    level: float

    def __bool__(self) -> bool:
        return self.connected


def is_connected(f: Poly, level: float = 1.0, tol_touch: float = TOL_TOUCH) -> ConnectivityResult:
    """Connectivity of {|f| <= level}; degree-1 polynomials are always discs.

    A critical value with modulus within ``tol_touch`` of the level means the
    curve passes through a critical point: connected under the closed-set
    convention, flagged boundary-touching.
    """
    if f.degree < 1:
        raise ValueError("need degree >= 1")
    if level <= 0:
        raise ValueError("level must be positive")
    if f.degree == 1:
        return ConnectivityResult(True, False, (), level)
    from .poly import critical_values as _cv
    cv = tuple(_cv(f))
    mods = np.array([abs(a) for a in cv])
    touching = bool(np.any(np.abs(mods - level) <= tol_touch * level))
    connected = bool(np.all(mods <= level * (1.0 + tol_touch)))
    return ConnectivityResult(connected, touching, cv, level)


@dataclass(frozen=True)
class BoundarySample:
    """All d*m boundary solutions, strand-aligned.

    ``points[k, j]`` is the j-th strand at phase theta_k = 2*pi*k/m; strand j
    continues past theta = 2*pi into strand ``wrap_perm[j]``.  Iterating
    yields (phase index, point) pairs.
    """
    poly: Poly
    level: float
    m: int
    phases: np.ndarray
    points: np.ndarray
    wrap_perm: np.ndarray
    min_strand_gap: float

    def __len__(self) -> int:
        return self.points.size

    def __iter__(self):
        for k in range(self.m):
            for z in self.points[k]:
                yield k, complex(z)

    def all_points(self) -> np.ndarray:
        return self.points.ravel()


def _solve_phase(base: np.ndarray, w: complex, warm: np.ndarray | None,
                 p: Poly, k: int) -> np.ndarray:
    """Roots of f(z) - w, warm-started from the previous phase."""
    c = base.copy()
    c[0] -= w
    shifted = Poly(c)
    scale = max(abs(x) for x in c)
    attempts = []
    if warm is not None:
        attempts.append((warm, 60))
    attempts.append((_initial_circle(shifted), 400))
    attempts.append((_initial_circle(shifted) * (1.0 + 0.05j), 400))
    for init, iters in attempts:
        z = _aberth(c, np.asarray(init, dtype=complex), iters)
        res = np.abs(_horner(c, z))
        accept = np.maximum(1e-12 * scale, _residual_floor(shifted, z))
        if np.all(res <= accept):
            return z
    raise BoundaryExtractionError(
        f"phase {k}: boundary solve stalled (worst residual {res.max():.3e})",
        phase_index=k, residuals=res)


def boundary_points(f: Poly, level: float = 1.0, m: int | None = None) -> BoundarySample:
    """Sample the curve |f| = level at m phases (default max(64, 32*degree)).

    Every emitted point satisfies ||f(z)| - level| <= TOL_LEVEL * level.
    Raises BoundaryExtractionError naming the phase if a solve fails.
    """
    d = f.degree
    if d < 1:
        raise ValueError("need degree >= 1")
    if level <= 0:
        raise ValueError("level must be positive")
    if m is None:
        m = default_phase_count(d)
    if m < 8 * d:
        raise ValueError(f"need m >= 8*degree = {8 * d}, got {m}")
    base = np.asarray(f.coeffs, dtype=complex)
    phases = 2.0 * np.pi * np.arange(m) / m
    pts = np.empty((m, d), dtype=complex)
    min_gap = math.inf
    prev = None
    for k, th in enumerate(phases):
        w = level * complex(math.cos(th), math.sin(th))
        z = _solve_phase(base, w, prev, f, k)
        if prev is not None and d > 1:
            cost = np.abs(prev[:, None] - z[None, :])
            _, cols = linear_sum_assignment(cost)
            z = z[cols]
        pts[k] = z
        if d > 1:
            dz = np.abs(z[:, None] - z[None, :])
            np.fill_diagonal(dz, np.inf)
            min_gap = min(min_gap, float(dz.min()))
        prev = z
    if d > 1:
        cost = np.abs(pts[-1][:, None] - pts[0][None, :])
        _, wrap = linear_sum_assignment(cost)
    else:
        wrap = np.array([0])
    return BoundarySample(poly=f, level=float(level), m=m, phases=phases,
                          points=pts, wrap_perm=np.asarray(wrap),
                          min_strand_gap=min_gap if d > 1 else math.inf)


@dataclass(frozen=True)
class LevelSetComponent:
    """One connected component of {|f| <= level} with its sampled boundary.

    ``boundary`` holds one or more closed branches (a touching pair keeps a
    branch per lobe); ``phases`` aligns a phase angle with every point.
    """
    label: int
    level: float
    boundary: tuple[np.ndarray, ...]
    phases: tuple[np.ndarray, ...]
    zeros_inside: tuple[complex, ...]
    poly: Poly
    full_lemniscate: bool
    degenerate: bool = False
    boundary_touching: bool = False
    flags: tuple[str, ...] = field(default=())

    def all_boundary_points(self) -> np.ndarray:
        return np.concatenate([b for b in self.boundary])

    def boundary_samples(self, min_points: int = 0) -> np.ndarray:
        """Boundary points, Newton-densified until at least ``min_points``."""
        pts = self.all_boundary_points()
        if len(pts) >= min_points:
            return pts
        factor = int(math.ceil(min_points / len(pts)))
        dense = [
            _densify_branch(self.poly, self.level, b, ph, factor)
            for b, ph in zip(self.boundary, self.phases)
        ]
        return np.concatenate(dense)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "level": self.level,
            "boundary": [[[float(z.real), float(z.imag)] for z in branch]
                         for branch in self.boundary],
            "zeros": [[float(z.real), float(z.imag)] for z in self.zeros_inside],
            "full_lemniscate": self.full_lemniscate,
            "degenerate": self.degenerate,
            "boundary_touching": self.boundary_touching,
            "flags": list(self.flags),
        }


def _winding(curve: np.ndarray, z0: complex) -> float:
    rel = curve - z0
    ratio = np.roll(rel, -1) / rel
    return float(np.angle(ratio).sum() / (2.0 * np.pi))


def _touch_radius(f: Poly, zc: complex, level: float, m: int) -> float:
    """Local half-width of the level curve near a boundary critical point:
    from |f - f(zc)| ~ |f^(v)(zc)| |z-zc|^v / v!, with one phase step of slack."""
    df = f.derivative()
    fact = 1.0
    for order in range(2, f.degree + 1):
        df = df.derivative()
        fact *= order
        if df.is_zero:
            break
        mag = abs(df(zc)) / fact
        if mag > 1e-12:
            return 1.5 * (2.0 * level * (2.0 * np.pi / m) / mag) ** (1.0 / order)
    return 1.5 * (2.0 * level * (2.0 * np.pi / m)) ** 0.5


def components(f: Poly, sample: BoundarySample | None = None,
               level: float = 1.0, m: int | None = None,
               tol_touch: float = TOL_TOUCH) -> list[LevelSetComponent]:
    """Split the sampled lemniscate into connected components.

    Strand cycles become component boundaries; each component is assigned the
    zeros of f it encloses by winding number.  Cycles meeting at a critical
    point on the curve (critical value modulus = level within tolerance) are
    merged into one component, matching the closed-set convention.
    """
    if sample is None:
        sample = boundary_points(f, level=level, m=m)
    level = sample.level
    d = f.degree
    zs = roots(f)
    flags: list[str] = []
    degenerate = False

    # decompose the wrap permutation into strand cycles
    seen = np.zeros(d, dtype=bool)
    cycles: list[list[int]] = []
    for j in range(d):
        if seen[j]:
            continue
        cyc = []
        cur = j
        while not seen[cur]:
            seen[cur] = True
            cyc.append(cur)
            cur = int(sample.wrap_perm[cur])
        cycles.append(cyc)

    curves = []
    curve_phases = []
    for cyc in cycles:
        curves.append(np.concatenate([sample.points[:, j] for j in cyc]))
        curve_phases.append(np.concatenate([sample.phases for _ in cyc]))

    scale = max(1.0, float(np.abs(sample.points).max()))
    if sample.min_strand_gap < TOL_MERGE_REL * scale:
        degenerate = True
        flags.append("ambiguous strand matching (near-collision on the curve)")

    # zeros per cycle by winding number
    unique_zeros: dict[complex, int] = {}
    for z in zs:
        unique_zeros[z] = unique_zeros.get(z, 0) + 1
    cycle_zeros: list[list[complex]] = [[] for _ in cycles]
    claimed: dict[complex, int] = {}
    for ci, curve in enumerate(curves):
        for z0, mult in unique_zeros.items():
            w = _winding(curve, z0)
            if abs(w - round(w)) > WINDING_TOL:
                degenerate = True
                flags.append(f"non-integral winding {w:.3f} about zero {z0:.6g}")
            if round(w) >= 1 and z0 not in claimed:
                claimed[z0] = ci
                cycle_zeros[ci].extend([z0] * mult)
    for z0, mult in unique_zeros.items():
        if z0 not in claimed:
            # rescue: attach to the nearest cycle so zero coverage stays exact
            dists = [np.abs(curve - z0).min() for curve in curves]
            ci = int(np.argmin(dists))
            claimed[z0] = ci
            cycle_zeros[ci].extend([z0] * mult)
            degenerate = True
            flags.append(f"zero {z0:.6g} rescued to nearest cycle")

    # merge cycles that meet at a critical point lying on the curve
    parent = list(range(len(cycles)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    boundary_touching = False
    if d >= 2 and len(cycles) > 1:
        from .poly import critical_points as _cp
        for zc in _cp(f):
            fzc = f(zc)
            if abs(abs(fzc) - level) <= tol_touch * level:
                boundary_touching = True
                r_touch = _touch_radius(f, zc, level, sample.m)
                near = [ci for ci, curve in enumerate(curves)
                        if np.abs(curve - zc).min() <= r_touch]
                for ci in near[1:]:
                    parent[find(ci)] = find(near[0])
    elif d >= 2:
        conn = is_connected(f, level, tol_touch)
        boundary_touching = conn.boundary_touching

    groups: dict[int, list[int]] = {}
    for ci in range(len(cycles)):
        groups.setdefault(find(ci), []).append(ci)

    comps = []
    order = sorted(groups.values(), key=lambda g: min(
        (curves[ci][0].real, curves[ci][0].imag) for ci in g))
    full = len(order) == 1
    for label, group in enumerate(order):
        comps.append(LevelSetComponent(
            label=label,
            level=level,
            boundary=tuple(curves[ci] for ci in group),
            phases=tuple(curve_phases[ci] for ci in group),
            zeros_inside=tuple(z for ci in group for z in cycle_zeros[ci]),
            poly=f,
            full_lemniscate=full,
            degenerate=degenerate,
            boundary_touching=boundary_touching,
            flags=tuple(flags),
        ))
    return comps


def extract_components(f: Poly, level: float = 1.0, m: int | None = None) -> list[LevelSetComponent]:
    """boundary_points + components in one call."""
    return components(f, boundary_points(f, level=level, m=m))


# -- suprema over boundaries --

def _newton_on_level(f: Poly, df: Poly, w: complex, z0: complex) -> complex | None:
    z = z0
    target = 1e-13 * max(1.0, abs(w))
    for _ in range(40):
        r = f(z) - w
        if abs(r) <= target:
            return z
        dv = df(z)
        if dv == 0:
            return None
        step = r / dv
        if not np.isfinite(step.real) or not np.isfinite(step.imag):
            return None
        z = z - step
    return z if abs(f(z) - w) <= 100 * target else None


def _refine_local_max(f: Poly, level: float, q: Poly, theta0: float, z0: complex,
                      half_width: float, tol_sup: float = TOL_SUP) -> float:
    """Golden-section maximization of |q| along the curve f(z)=level*e^(i*t),
    bracketing t in [theta0 - half_width, theta0 + half_width]."""
    df = f.derivative()
    cache = {0.0: z0}

    def value(offset: float) -> float:
        anchor = min(cache, key=lambda s: abs(s - offset))
        w = level * complex(math.cos(theta0 + offset), math.sin(theta0 + offset))
        z = _newton_on_level(f, df, w, cache[anchor])
        if z is None:
            return -math.inf
        cache[offset] = z
        return abs(q(z))

    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = -half_width, half_width
    c = b - inv_phi * (b - a)
    e = a + inv_phi * (b - a)
    fc, fe = value(c), value(e)
    best = max(abs(q(z0)), fc, fe)
    for _ in range(80):
        if fc >= fe:
            b, e, fe = e, c, fc
            c = b - inv_phi * (b - a)
            fc = value(c)
        else:
            a, c, fc = c, e, fe
            e = a + inv_phi * (b - a)
            fe = value(e)
        new_best = max(best, fc, fe)
        if new_best - best <= tol_sup * max(1.0, best) and (b - a) < 1e-10:
            best = new_best
            break
        best = new_best
    return best


def sup_on_component(q: Poly, comp: LevelSetComponent,
                     tol_sup: float = TOL_SUP, refine: bool = True) -> float:
    """max |q| over the component.  By the maximum principle this lives on the
    boundary, so we scan the samples and sharpen around the best one."""
    total = sum(len(b) for b in comp.boundary)
    if total < 8:
        raise ValueError("component boundary has fewer than 8 points")
    best = 0.0
    best_branch, best_idx = 0, 0
    for bi, branch in enumerate(comp.boundary):
        vals = np.abs(q(branch))
        i = int(np.argmax(vals))
        if vals[i] > best:
            best = float(vals[i])
            best_branch, best_idx = bi, i
    if not refine:
        return best
    branch = comp.boundary[best_branch]
    phases = comp.phases[best_branch]
    theta0 = float(phases[best_idx])
    half = _phase_step(phases)
    refined = _refine_local_max(comp.poly, comp.level, q, theta0,
                                complex(branch[best_idx]), half, tol_sup)
    return max(best, refined)


def _phase_step(phases: np.ndarray) -> float:
    if len(phases) < 2:
        return 2.0 * np.pi
    d = np.diff(phases)
    d = d[d != 0]
    return float(np.median(np.abs(d))) if len(d) else 2.0 * np.pi


def sup_on_boundary(q: Poly, sample: BoundarySample,
                    tol_sup: float = TOL_SUP, refine: bool = True) -> float:
    """max |q| over all strands of a boundary sample (the whole curve |f|=level)."""
    vals = np.abs(q(sample.points))
    k, j = np.unravel_index(int(np.argmax(vals)), vals.shape)
    best = float(vals[k, j])
    if not refine:
        return best
    theta0 = float(sample.phases[k])
    half = 2.0 * np.pi / sample.m
    refined = _refine_local_max(sample.poly, sample.level, q, theta0,
                                complex(sample.points[k, j]), half, tol_sup)
    return max(best, refined)


def _densify_branch(f: Poly, level: float, branch: np.ndarray, phases: np.ndarray,
                    factor: int) -> np.ndarray:
    """Insert factor-1 Newton-continued points between consecutive samples."""
    if factor <= 1:
        return branch
    df = f.derivative()
    out = [branch]
    n = len(branch)
    for s in range(1, factor):
        frac = s / factor
        new = np.empty(n, dtype=complex)
        ok = np.ones(n, dtype=bool)
        for i in range(n):
            th0 = phases[i]
            th1 = phases[(i + 1) % n]
            dth = (th1 - th0) % (2.0 * np.pi)
            if dth == 0.0:
                dth = 2.0 * np.pi / n
            th = th0 + frac * dth
            w = level * complex(math.cos(th), math.sin(th))
            z = _newton_on_level(f, df, w, complex(branch[i]))
            if z is None:
                ok[i] = False
            else:
                new[i] = z
        out.append(new[ok])
    return np.concatenate(out)
