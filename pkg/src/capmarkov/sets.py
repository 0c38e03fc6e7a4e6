"""Plane continua (segments, discs, polylines, point clouds): boundary
sampling, diameters, and the classical diameter/capacity ratio check."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Slack accepted on the classical continuum bound diam <= 4 cap, to absorb
# discretization error of the capacity search.
TOL_DIAM_CAP = 0.02

# Above this sample size, pairwise search switches to the convex hull.
_ALL_PAIRS_MAX = 4096


@dataclass(frozen=True)
class Segment:
    a: complex
    b: complex

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError("segment endpoints must differ")

    def describe(self) -> str:
        from .poly import format_complex
        return f"segment:{format_complex(self.a)},{format_complex(self.b)}"


@dataclass(frozen=True)
class Disc:
    center: complex
    radius: float

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("disc radius must be positive")

    def describe(self) -> str:
        from .poly import format_complex
        return f"disc:{format_complex(self.center)},{self.radius:g}"


@dataclass(frozen=True)
class Polyline:
    vertices: tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(complex(v) for v in self.vertices))
        if len(self.vertices) < 2:
            raise ValueError("polyline needs at least 2 vertices")
        if any(a == b for a, b in zip(self.vertices, self.vertices[1:])):
            raise ValueError("polyline has a zero-length edge")

    def describe(self) -> str:
        return f"polyline[{len(self.vertices)} vertices]"


@dataclass(frozen=True)
class Cloud:
    """Finite boundary sample of a set the caller asserts to be connected.

    Connectivity of a finite sample is not checkable, so the assertion is
    carried along and surfaced in reports rather than verified.
    """
    points: tuple[complex, ...]
    connected: bool = field(default=True)

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(complex(p) for p in self.points))
        if len(self.points) < 2:
            raise ValueError("cloud needs at least 2 points")

    def describe(self) -> str:
        return f"cloud[{len(self.points)} points, connected asserted={self.connected}]"


Continuum = Segment | Disc | Polyline | Cloud


def sample_boundary(s: Continuum, n: int) -> np.ndarray:
    """n points on the outer boundary: arc-length uniform for segment and
    polyline, angle uniform for disc, farthest-point thinning for clouds."""
    if n < 2:
        raise ValueError("need n >= 2")
    if isinstance(s, Segment):
        t = np.linspace(0.0, 1.0, n)
        return s.a + t * (s.b - s.a)
    if isinstance(s, Disc):
        ang = 2.0 * np.pi * np.arange(n) / n
        return s.center + s.radius * np.exp(1j * ang)
    if isinstance(s, Polyline):
        v = np.asarray(s.vertices, dtype=complex)
        seg_len = np.abs(np.diff(v))
        cum = np.concatenate([[0.0], np.cumsum(seg_len)])
        total = cum[-1]
        if total == 0:
            raise ValueError("degenerate polyline (zero length)")
        t = np.linspace(0.0, total, n)
        idx = np.clip(np.searchsorted(cum, t, side="right") - 1, 0, len(seg_len) - 1)
        frac = (t - cum[idx]) / np.where(seg_len[idx] == 0, 1.0, seg_len[idx])
        return v[idx] + frac * (v[idx + 1] - v[idx])
    if isinstance(s, Cloud):
        pts = np.asarray(s.points, dtype=complex)
        if n >= len(pts):
            return pts.copy()
        return _farthest_point_thin(pts, n)
    raise TypeError(f"not a Continuum: {type(s).__name__}")


def _farthest_point_thin(pts: np.ndarray, n: int) -> np.ndarray:
    # greedy maximin: keeps the geometric extent of the cloud
    chosen = [int(np.argmax(np.abs(pts - pts.mean())))]
    dist = np.abs(pts - pts[chosen[0]])
    for _ in range(n - 1):
        nxt = int(np.argmax(dist))
        chosen.append(nxt)
        dist = np.minimum(dist, np.abs(pts - pts[nxt]))
    return pts[np.sort(chosen)]


def diameter(points) -> float:
    """Max pairwise distance over the sample; exact (all pairs up to 4096
    points, convex hull antipodal search above)."""
    pts = np.asarray(points, dtype=complex).ravel()
    if len(pts) < 2:
        raise ValueError("need at least 2 points")
    if len(pts) <= _ALL_PAIRS_MAX:
        return _diameter_all_pairs(pts)
    hull = _hull_vertices(pts)
    return _diameter_all_pairs(hull)


def _diameter_all_pairs(pts: np.ndarray) -> float:
    best = 0.0
    block = 512
    for i in range(0, len(pts), block):
        chunk = pts[i:i + block]
        d = np.abs(chunk[:, None] - pts[None, :])
        best = max(best, float(d.max()))
    return best


def _hull_vertices(pts: np.ndarray) -> np.ndarray:
    from scipy.spatial import ConvexHull, QhullError
    xy = np.column_stack([pts.real, pts.imag])
    try:
        hull = ConvexHull(xy)
    except QhullError:
        # collinear input (e.g. a dense segment sample): extremes suffice
        proj = pts - pts[0]
        direction = proj[np.argmax(np.abs(proj))]
        if direction == 0:
            return pts[:2]
        t = (proj / direction).real
        return pts[[int(np.argmin(t)), int(np.argmax(t))]]
    return pts[hull.vertices]


@dataclass(frozen=True)
class DiamCapReport:
    """Outcome of the diam <= 4 cap check for one continuum."""
    subject: str
    diam: float
    cap: float
    cap_method: str
    ratio: float
    passed: bool
    tol: float

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "diam": self.diam,
            "cap": self.cap,
            "cap_method": self.cap_method,
            "ratio": self.ratio,
            "pass": self.passed,
            "tol": self.tol,
        }


def check_diam_cap(s: Continuum, n_sample: int = 2048, seed: int | None = None,
                   tol: float = TOL_DIAM_CAP) -> DiamCapReport:
    """Diameter over capacity for a continuum; the classical bound says the
    ratio is at most 4, with the segment as the extremal witness.

    Accepts lemniscate components as well: their boundary curves stand in
    for the sampled boundary."""
    from .capacity import capacity as compute_capacity
    est = compute_capacity(s, candidates=n_sample, seed=seed)
    if hasattr(s, "boundary_samples"):
        pts = s.boundary_samples(min_points=max(n_sample, 2))
        subject = f"lemniscate component {s.label} at level {s.level:g}"
    else:
        pts = sample_boundary(s, max(n_sample, 2))
        subject = s.describe()
    diam = diameter(pts)
    ratio = diam / est.value
    return DiamCapReport(
        subject=subject,
        diam=diam,
        cap=est.value,
        cap_method=est.method,
        ratio=ratio,
        passed=ratio <= 4.0 * (1.0 + tol),
        tol=tol,
    )


def parse_set(text: str) -> Continuum:
    """Continuum from a CLI literal.

    Grammar: ``segment:a,b`` | ``disc:center,radius`` |
    ``polyline:z1;z2;...`` | ``cloud:@file.csv`` (one complex per line) |
    ``cloud:z1;z2;...``.  Complex literals use the `a+bi` form.
    """
    from .poly import parse_complex
    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    if not rest:
        raise ValueError(f"set literal {text!r} has no payload")
    if kind == "segment":
        parts = rest.split(",")
        if len(parts) != 2:
            raise ValueError("segment needs exactly two endpoints: segment:a,b")
        return Segment(parse_complex(parts[0]), parse_complex(parts[1]))
    if kind == "disc":
        parts = rest.split(",")
        if len(parts) != 2:
            raise ValueError("disc needs center and radius: disc:c,r")
        return Disc(parse_complex(parts[0]), float(parts[1]))
    if kind == "polyline":
        return Polyline(tuple(parse_complex(t) for t in rest.split(";") if t.strip()))
    if kind == "cloud":
        if rest.startswith("@"):
            with open(rest[1:], "r", encoding="utf-8") as fh:
                pts = [parse_complex(line) for line in fh if line.strip()]
        else:
            pts = [parse_complex(t) for t in rest.split(";") if t.strip()]
        return Cloud(tuple(pts))
    raise ValueError(f"unknown set kind {kind!r} (segment/disc/polyline/cloud)")
