"""Transfinite diameter (logarithmic capacity) estimation.

The workhorse is a discrete Fekete-subset search: greedy Leja seeding over a
candidate cloud followed by single-point exchanges until stationary, all in
log space.  Exact closed forms take over for segments, discs, and connected
polynomial lemniscates.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .poly import Poly
from . import sets as sets_mod

logger = logging.getLogger(__name__)

DEFAULT_SEED = 1729
DN_LADDER = (16, 32, 64, 128)
DEFAULT_CANDIDATES = 2048
# Relative slack on the decreasing d_n history (local search noise).
TOL_MONO = 1e-3

_NEG_INF = float("-inf")


@dataclass(frozen=True)
class CapacityEstimate:
    """A capacity value plus how it was obtained.

    ``history`` lists the (n, d_n) ladder for search-based estimates; it is
    empty for the exact oracles.  Search values estimate d_n over a finite
    candidate set, so they are neither strict upper nor lower bounds for cap.
    """
    value: float
    n: int
    history: tuple[tuple[int, float], ...]
    method: str
    warnings: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "n": self.n,
            "history": [[k, v] for k, v in self.history],
            "method": self.method,
            "warnings": list(self.warnings),
        }


def _log_dist(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    d = np.abs(a[:, None] - b[None, :])
    with np.errstate(divide="ignore"):
        return np.log(d)


def _pair_logsum(sel: np.ndarray) -> float:
    n = len(sel)
    total = 0.0
    for i in range(n):
        total += float(np.sum(np.log(np.abs(sel[i + 1:] - sel[i]))))
    return total


def dn_select(points, n: int, seed: int | None = None,
              restarts: int | None = None) -> tuple[float, np.ndarray]:
    """d_n estimate over a candidate set, returning the chosen points.

    Seeds with greedy Leja points (each new point maximizes its product of
    distances to those already chosen), then runs single-point exchanges
    until no swap improves the pairwise product.  Products are accumulated
    as log sums.  Deterministic for a fixed seed.
    """
    cand = np.unique(np.asarray(points, dtype=complex).ravel())
    if n < 2:
        raise ValueError("need n >= 2")
    if len(cand) < n:
        raise ValueError(f"need at least n={n} distinct candidates, got {len(cand)}")
    rng = np.random.default_rng(DEFAULT_SEED if seed is None else seed)

    best_sel, best_obj = _leja_exchange(cand, n, rng, init=None)
    if restarts is None:
        # micro instances are where local optima bite; polish them harder
        restarts = 6 if len(cand) * n <= 4096 else 1
    for _ in range(max(0, restarts - 1)):
        init = rng.choice(len(cand), size=n, replace=False)
        sel, obj = _leja_exchange(cand, n, rng, init=init)
        if obj > best_obj:
            best_sel, best_obj = sel, obj
    value = float(np.exp(2.0 * best_obj / (n * (n - 1))))
    return value, best_sel


def _leja_exchange(cand: np.ndarray, n: int, rng,
                   init: np.ndarray | None) -> tuple[np.ndarray, float]:
    m = len(cand)
    if init is None:
        # start from the diameter pair, then greedy Leja
        far = np.argmax(np.abs(cand - cand[int(np.argmax(np.abs(cand - cand.mean())))]))
        anchor = int(np.argmax(np.abs(cand - cand[far])))
        sel_idx = [int(far), anchor]
        cum = _log_dist(cand, cand[sel_idx]).sum(axis=1)
        while len(sel_idx) < n:
            nxt = int(np.argmax(cum))
            sel_idx.append(nxt)
            cum = cum + _log_dist(cand, cand[[nxt]])[:, 0]
    else:
        sel_idx = [int(i) for i in init]

    sel_idx = np.asarray(sel_idx, dtype=int)
    ld = _log_dist(cand, cand[sel_idx])          # (m, n)
    # zero the self-distance entries so every sum stays finite; rowsum at a
    # selected row is then exactly that point's contribution to the pair sum
    ld[sel_idx, np.arange(n)] = 0.0
    rowsum = ld.sum(axis=1)

    improved = True
    sweeps = 0
    while improved and sweeps < 200:
        improved = False
        sweeps += 1
        order = rng.permutation(n)
        for i in order:
            # gain of swapping selected point i for candidate c
            contrib_i = rowsum[sel_idx[i]]
            gain = (rowsum - ld[:, i]) - contrib_i
            gain[sel_idx] = _NEG_INF
            c = int(np.argmax(gain))
            if gain[c] > 1e-13 * max(1.0, abs(contrib_i)):
                new_col = _log_dist(cand, cand[[c]])[:, 0]
                new_col[c] = 0.0
                rowsum += new_col - ld[:, i]
                ld[:, i] = new_col
                sel_idx[i] = c
                improved = True
    obj = _pair_logsum(cand[sel_idx])
    return cand[sel_idx], obj


def dn_estimate(points, n: int, seed: int | None = None) -> float:
    """The n-point transfinite-diameter functional
    sup prod |z_i - z_j|^(2/(n(n-1))) approximated over the candidate set."""
    value, _ = dn_select(points, n, seed=seed)
    return value


def dn_ladder(points, ladder=DN_LADDER, seed: int | None = None) -> CapacityEstimate:
    """Run dn_select along an increasing ladder of n; the last value is the
    capacity estimate, the full history rides along for convergence review."""
    cand = np.unique(np.asarray(points, dtype=complex).ravel())
    hist = []
    warnings = []
    value = None
    top = 0
    for n in ladder:
        if n > len(cand):
            warnings.append(f"ladder step n={n} skipped: only {len(cand)} candidates")
            continue
        v, _ = dn_select(cand, n, seed=seed)
        hist.append((n, v))
        value, top = v, n
    if value is None:
        raise ValueError("no ladder step fit the candidate set")
    return CapacityEstimate(value=value, n=top, history=tuple(hist),
                            method="dn_search", warnings=tuple(warnings))


def lemniscate_capacity(f: Poly, level: float = 1.0) -> float:
    """cap {|f| <= level} = (level/|lead|)^(1/d) when the set is connected."""
    from .levelset import is_connected
    if f.degree < 1:
        raise ValueError("need degree >= 1")
    if level <= 0:
        raise ValueError("level must be positive")
    conn = is_connected(f, level)
    if not conn:
        raise ValueError("lemniscate is disconnected; the closed form does not apply")
    return float((level / abs(f.leading)) ** (1.0 / f.degree))


def capacity(s, candidates: int = DEFAULT_CANDIDATES, ladder=DN_LADDER,
             seed: int | None = None, method: str = "auto") -> CapacityEstimate:
    """Logarithmic capacity of a Continuum or LevelSetComponent.

    ``method='auto'`` dispatches to the exact oracle where one exists
    (segment: length/4, disc: radius, connected lemniscate of a polynomial:
    (level/|lead|)^(1/d)) and otherwise runs the d_n ladder over a boundary
    sample.  ``method='dn'`` forces the search; ``method='oracle'`` errors
    when no closed form applies.
    """
    from .levelset import LevelSetComponent

    if method not in ("auto", "dn", "oracle"):
        raise ValueError("method must be auto, dn, or oracle")

    if isinstance(s, sets_mod.Segment):
        if method != "dn":
            return CapacityEstimate(abs(s.b - s.a) / 4.0, 0, (), "oracle_segment")
        return dn_ladder(sets_mod.sample_boundary(s, candidates), ladder, seed)
    if isinstance(s, sets_mod.Disc):
        if method != "dn":
            return CapacityEstimate(float(s.radius), 0, (), "oracle_disc")
        return dn_ladder(sets_mod.sample_boundary(s, candidates), ladder, seed)
    if isinstance(s, (sets_mod.Polyline, sets_mod.Cloud)):
        if method == "oracle":
            raise ValueError(f"no capacity oracle for {type(s).__name__}")
        return dn_ladder(sets_mod.sample_boundary(s, candidates), ladder, seed)
    if isinstance(s, LevelSetComponent):
        if s.full_lemniscate and method != "dn":
            value = (s.level / abs(s.poly.leading)) ** (1.0 / s.poly.degree)
            return CapacityEstimate(float(value), 0, (), "oracle_lemniscate")
        if method == "oracle":
            raise ValueError("component is not the full lemniscate; no oracle")
        pts = s.boundary_samples(min_points=max(candidates // 4, 512))
        est = dn_ladder(pts, ladder, seed)
        warn = est.warnings
        if not s.full_lemniscate and method == "auto":
            warn = warn + ("disconnected lemniscate: capacity by d_n search "
                           "on this component's boundary",)
        return CapacityEstimate(est.value, est.n, est.history, est.method, warn)
    raise TypeError(f"cannot estimate capacity of {type(s).__name__}")
