"""Deformation scans: track F(lambda) = log(cap E * sup_E |f'|) for the
shifted family f + lambda over a lattice in the lambda-plane and test the
discrete sub-mean-value property.

Shifting by lambda moves every critical value rigidly while the critical
points and f' stay fixed, so connectivity of {|f + lambda| <= level} is read
directly off |f(crit) + lambda| and the capacity of the connected lemniscate
stays at the closed form.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .capacity import DEFAULT_SEED, dn_ladder
from .levelset import boundary_points, sup_on_boundary
from .poly import Poly, critical_points

logger = logging.getLogger(__name__)

# Sub-mean-value slack: center may exceed the circle average by this much
# before a lattice point counts as a violation.
TOL_SUBH = 1e-2
# F range below this over the valid region is reported as constant.
TOL_CONST = 1e-8


def family_shift(f: Poly, lam: complex) -> Poly:
    """The deformed polynomial f + lambda."""
    return f + lam


def F_functional(f: Poly, level: float = 1.0, m: int | None = None,
                 capacity_policy: str = "auto", seed: int = DEFAULT_SEED) -> float:
    """log(cap E * sup_E |f'|) on the filled lemniscate E = {|f| <= level}.

    Connected lemniscates use cap = (level/|lead|)^(1/d), which holds for any
    leading coefficient.  Disconnected ones are rejected under the "oracle"
    policy and fall back to the transfinite-diameter search under "dn"/"auto".
    """
    if f.degree < 1:
        raise ValueError("polynomial must be nonconstant")
    from .levelset import is_connected
    conn = is_connected(f, level)
    sample = boundary_points(f, level=level, m=m)
    sup_dp = sup_on_boundary(f.derivative(), sample)
    if conn:
        cap = (level / abs(f.leading)) ** (1.0 / f.degree)
    elif capacity_policy == "oracle":
        raise ValueError("lemniscate is disconnected; no closed-form capacity")
    else:
        est = dn_ladder(sample.all_points(), seed=seed)
        cap = est.value
    return math.log(cap * sup_dp)


@dataclass(frozen=True)
class DeformationGrid:
    """F(lambda) on a square lattice; invalid points carry NaN and mask False."""
    poly: Poly
    level: float
    center: complex
    radius: float
    res: int
    lam: np.ndarray
    F: np.ndarray
    valid: np.ndarray
    capacity_policy: str
    tol_topology: float
    n_masked_topology: int
    n_masked_disconnected: int

    @property
    def step(self) -> float:
        return 2.0 * self.radius / (self.res - 1)

    def to_dict(self) -> dict:
        good = self.F[self.valid]
        return {
            "center": [self.center.real, self.center.imag],
            "radius": self.radius,
            "res": self.res,
            "level": self.level,
            "capacity_policy": self.capacity_policy,
            "tol_topology": self.tol_topology,
            "n_points": int(self.res * self.res),
            "n_valid": int(self.valid.sum()),
            "n_masked_topology": self.n_masked_topology,
            "n_masked_disconnected": self.n_masked_disconnected,
            "F_min": float(good.min()) if good.size else None,
            "F_max": float(good.max()) if good.size else None,
        }

    def to_rows(self):
        """(re, im, F, valid) per lattice point, row-major."""
        for i in range(self.res):
            for j in range(self.res):
                lam = self.lam[i, j]
                yield (float(lam.real), float(lam.imag),
                       float(self.F[i, j]) if self.valid[i, j] else None,
                       bool(self.valid[i, j]))


def scan(f: Poly, center: complex = 0.0, radius: float = 0.5, res: int = 21,
         level: float = 1.0, capacity_policy: str = "oracle",
         tol_topology: float | None = None, m: int | None = None,
         seed: int = DEFAULT_SEED) -> DeformationGrid:
    """Evaluate F(lambda) for f + lambda over a (2*radius)^2 square lattice.

    Lattice points where a critical value sits within ``tol_topology`` of the
    level are masked: the component structure changes there and F is not
    smooth.  Under the "oracle" policy the disconnected regime is masked too;
    under "dn" it is scanned with the search-based capacity.
    """
    if f.degree < 1:
        raise ValueError("polynomial must be nonconstant")
    if res < 3:
        raise ValueError("res must be >= 3")
    if radius <= 0:
        raise ValueError("radius must be positive")
    if capacity_policy not in ("oracle", "dn"):
        raise ValueError("capacity_policy must be 'oracle' or 'dn'")
    step = 2.0 * radius / (res - 1)
    if tol_topology is None:
        tol_topology = max(0.01, step)
    xs = np.linspace(-radius, radius, res)
    lam = center + xs[None, :] + 1j * xs[:, None]
    crit_base = (np.array([f(z) for z in critical_points(f)])
                 if f.degree >= 2 else np.array([]))
    df = f.derivative()
    F = np.full((res, res), np.nan)
    valid = np.zeros((res, res), dtype=bool)
    n_topo = 0
    n_disc = 0
    for i in range(res):
        for j in range(res):
            lv = complex(lam[i, j])
            if crit_base.size:
                mods = np.abs(crit_base + lv)
                if np.abs(mods - level).min() < tol_topology:
                    n_topo += 1
                    continue
                disconnected = bool(np.any(mods > level))
            else:
                disconnected = False
            if disconnected and capacity_policy == "oracle":
                n_disc += 1
                continue
            g = f + lv
            sample = boundary_points(g, level=level, m=m)
            sup_dp = sup_on_boundary(df, sample)
            if disconnected:
                cap = dn_ladder(sample.all_points(), seed=seed).value
            else:
                cap = (level / abs(f.leading)) ** (1.0 / f.degree)
            F[i, j] = math.log(cap * sup_dp)
            valid[i, j] = True
    return DeformationGrid(poly=f, level=level, center=complex(center),
                           radius=float(radius), res=res, lam=lam, F=F,
                           valid=valid, capacity_policy=capacity_policy,
                           tol_topology=float(tol_topology),
                           n_masked_topology=n_topo,
                           n_masked_disconnected=n_disc)


@dataclass(frozen=True)
class SubharmonicityReport:
    """Discrete sub-mean-value check over a deformation grid."""
    n_tested: int
    n_skipped: int
    n_violations: int
    min_excess: float | None
    violations: tuple[dict, ...]
    test_radius: float
    n_angles: int
    tol_subh: float
    constant: bool
    f_range: float | None
    passed: bool

    def to_dict(self) -> dict:
        return {
            "n_tested": self.n_tested,
            "n_skipped": self.n_skipped,
            "n_violations": self.n_violations,
            "min_excess": self.min_excess,
            "violations": list(self.violations),
            "test_radius": self.test_radius,
            "n_angles": self.n_angles,
            "tol_subh": self.tol_subh,
            "constant": self.constant,
            "f_range": self.f_range,
            "pass": self.passed,
        }


def _bilinear(F: np.ndarray, valid: np.ndarray, x: float, y: float) -> float | None:
    """Interpolate at fractional indices (x along columns, y along rows);
    None when any of the four surrounding nodes is invalid or out of range."""
    res = F.shape[0]
    j0, i0 = math.floor(x), math.floor(y)
    if i0 < 0 or j0 < 0 or i0 + 1 >= res or j0 + 1 >= res:
        return None
    if not (valid[i0, j0] and valid[i0, j0 + 1]
            and valid[i0 + 1, j0] and valid[i0 + 1, j0 + 1]):
        return None
    tx, ty = x - j0, y - i0
    return float(
        F[i0, j0] * (1 - tx) * (1 - ty)
        + F[i0, j0 + 1] * tx * (1 - ty)
        + F[i0 + 1, j0] * (1 - tx) * ty
        + F[i0 + 1, j0 + 1] * tx * ty)


def subharmonicity_test(grid: DeformationGrid, test_radius: float | None = None,
                        n_angles: int = 16, tol_subh: float = TOL_SUBH,
                        tol_const: float = TOL_CONST) -> SubharmonicityReport:
    """Check F(center) <= circle average + tol at every testable lattice point.

    Circle values come from bilinear interpolation; a lattice point is tested
    only when every interpolation corner on its circle is valid, so masked
    regions silently shrink the tested set instead of poisoning it.
    """
    if test_radius is None:
        test_radius = 2.0 * grid.step
    if test_radius <= 0 or test_radius > grid.radius:
        raise ValueError("test_radius must lie in (0, radius]")
    if n_angles < 4:
        raise ValueError("circle average needs at least 4 angles")
    res = grid.res
    step = grid.step
    angles = 2.0 * np.pi * np.arange(n_angles) / n_angles
    n_tested = 0
    n_skipped = 0
    violations = []
    min_excess = None
    for i in range(res):
        for j in range(res):
            if not grid.valid[i, j]:
                continue
            vals = []
            ok = True
            for th in angles:
                x = j + test_radius * math.cos(th) / step
                y = i + test_radius * math.sin(th) / step
                v = _bilinear(grid.F, grid.valid, x, y)
                if v is None:
                    ok = False
                    break
                vals.append(v)
            if not ok:
                n_skipped += 1
                continue
            n_tested += 1
            excess = float(np.mean(vals)) - float(grid.F[i, j])
            if min_excess is None or excess < min_excess:
                min_excess = excess
            if excess < -tol_subh:
                lam = grid.lam[i, j]
                violations.append({
                    "lambda": [float(lam.real), float(lam.imag)],
                    "excess": excess,
                })
    good = grid.F[grid.valid]
    f_range = float(good.max() - good.min()) if good.size >= 2 else None
    constant = f_range is not None and f_range <= tol_const
    return SubharmonicityReport(
        n_tested=n_tested, n_skipped=n_skipped,
        n_violations=len(violations), min_excess=min_excess,
        violations=tuple(violations), test_radius=float(test_radius),
        n_angles=n_angles, tol_subh=tol_subh,
        constant=constant, f_range=f_range,
        passed=len(violations) == 0)
