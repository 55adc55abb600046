"""Brute-force geometric ground truth for curve transport.

Curves are polylines in the marked plane (marked points at (k, 0)).  A half
twist about a loop is realized as a damped rotation: the core of the loop's
disk rotates rigidly by t*pi and the rotation angle falls off linearly to
zero at the loop circle, so punctures are permuted exactly and the map is
continuous.  Faithfulness of polyline images is maintained by adaptive
resampling inside the support disk before every map; correctness is defended
by the refinement-stability property (doubling the sampling density must not
change any reduced intersection count) rather than exact arithmetic.

Intersection machinery lives here too: cyclic intersection words of a curve
against families of axis arcs, innermost-bigon reduction to minimal
position, and reduced curve/curve intersection for disjointness checks.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import BudgetExceeded, TangencyError
from .plat_model import TwistSpec, row_length
from .twist_calculus import loop_center, loop_punctures

LOOP_RADIUS = 0.75


@dataclass(frozen=True)
class OracleConfig:
    step: float = 0.01  # max segment length inside a twist support disk
    eps: float = 1e-9
    vertex_cap: int = 2_000_000
    magnitude_budget: int = 6

    def refined(self, factor: float = 2.0) -> "OracleConfig":
        return replace(self, step=self.step / factor, vertex_cap=self.vertex_cap * 4)


@dataclass(frozen=True)
class PlanarCurve:
    pts: np.ndarray  # (n, 2), consecutive vertices; closed curves do not repeat pts[0]
    closed: bool
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "pts", np.asarray(self.pts, dtype=float))

    @property
    def n(self) -> int:
        return len(self.pts)

    def segments(self) -> tuple[np.ndarray, np.ndarray]:
        """Segment start/end arrays; closed curves wrap around."""
        a = self.pts
        b = np.roll(self.pts, -1, axis=0) if self.closed else self.pts[1:]
        if not self.closed:
            a = self.pts[:-1]
        return a, b


def circle_curve(center: tuple[float, float], radius: float, cfg: OracleConfig, name: str = "") -> PlanarCurve:
    n = max(24, int(np.ceil(2 * np.pi * radius / cfg.step)))
    # phase offset keeps vertices off the axis and off marked points
    th = 2 * np.pi * np.arange(n) / n + 0.37
    pts = np.stack([center[0] + radius * np.cos(th), center[1] + radius * np.sin(th)], axis=1)
    return PlanarCurve(pts, closed=True, name=name)


def seed_curve(b: int, cfg: OracleConfig) -> PlanarCurve:
    """Circle around the rightmost bottom bridge pair (2b-1, 2b)."""
    return circle_curve((2 * b - 0.5, 0.0), 0.58, cfg, name="seed")


def left_cap_curve(cfg: OracleConfig) -> PlanarCurve:
    """Circle around the leftmost pair (1, 2); stays fixed under transport."""
    return circle_curve((1.5, 0.0), 0.58, cfg, name="left-cap")


def bridge_arc_curve(b: int, cfg: OracleConfig) -> PlanarCurve:
    """The open arc joining marked points 2b-1 and 2b, bowed slightly off
    the axis so its transports stay transverse to the axis arcs (the bow
    sweeps past no marked point, so the class is the straight segment's)."""
    n = max(16, int(np.ceil(1.0 / cfg.step)))
    ss = np.linspace(0.0, 1.0, n + 1)
    xs = 2 * b - 1 + ss
    ys = -0.02 * np.sin(np.pi * ss)
    pts = np.stack([xs, ys], axis=1)
    return PlanarCurve(pts, closed=False, name="bridge-arc")


# ---------------------------------------------------------------------------
# Half twists
# ---------------------------------------------------------------------------


def _resample_for_twist(
    curve: PlanarCurve,
    center: np.ndarray,
    r_in: float,
    r_out: float,
    power: int,
    step: float,
    cap: int,
) -> PlanarCurve:
    """Split segments so their *images* under the twist stay short.

    The rigid disk is an isometry and the outside is the identity, so only
    segments meeting the collar annulus stretch, by up to
    1 + |power| * pi * rho / collar_width; those are subdivided by that
    factor so every image segment is at most `step` long.
    """
    a, b = curve.segments()
    da = np.linalg.norm(a - center, axis=1)
    db = np.linalg.norm(b - center, axis=1)
    lo = np.minimum(da, db)
    hi = np.maximum(da, db)
    margin = step
    meets_collar = (hi > r_in - margin) & (lo < r_out + margin)
    seg_len = np.linalg.norm(b - a, axis=1)
    stretch = 1.0 + abs(power) * np.pi * np.minimum(hi, r_out) / (r_out - r_in)
    pieces = np.ones(len(a), dtype=int)
    pieces[meets_collar] = np.maximum(
        1, np.ceil(seg_len[meets_collar] * stretch[meets_collar] / step).astype(int)
    )
    total = int(pieces.sum()) + (0 if curve.closed else 1)
    if total > cap:
        raise BudgetExceeded(f"resampling would need {total} vertices (cap {cap})")
    if np.all(pieces == 1):
        return curve
    out = np.empty((total, 2))
    pos = 0
    counts = pieces
    for i in range(len(a)):
        k = counts[i]
        ts = np.arange(k) / k
        out[pos : pos + k] = a[i] + ts[:, None] * (b[i] - a[i])
        pos += k
    if not curve.closed:
        out[pos] = curve.pts[-1]
    return PlanarCurve(out, closed=curve.closed, name=curve.name)


def support_radii(level: int) -> tuple[float, float]:
    """Rigid-disk and collar radii for a level's twist maps.

    The disk of radius r_in rotates rigidly; the rotation decays to zero
    across the collar (r_in, r_out).  Radii grow with the level's parity
    rank so that the spiral wraps a twist deposits in its collar lie wholly
    inside the rigid zone of any later same-center twist: that is what keeps
    natural curve images tight (no removable bigons).  r_out stays below 1
    so collar wraps cross the axis inside the correct unit interval.
    """
    rank = (level - 2) // 2
    r_in = 0.76 + 0.10 * rank
    r_out = r_in + 0.08
    if r_out >= 1.0:
        raise BudgetExceeded(f"no tight twist support available for level {level}")
    return r_in, r_out


def half_twist(curve: PlanarCurve, loop: tuple[int, int], power: int, cfg: OracleConfig) -> PlanarCurve:
    """Apply the k-th power of the half twist about loop (i, j).

    The rigid disk rotates by k*pi (so the loop's punctures are exchanged
    for odd k and earlier same-center structure is carried along without
    shearing); the angle decays linearly to zero across the level's collar,
    and beyond the collar the map is the identity.  Even powers therefore
    act as full twists supported in the collar annulus.

    Raises TangencyError when the curve runs along the loop circle itself.
    """
    if power == 0:
        return curve
    center = np.array([loop_center(*loop), 0.0])
    r_in, r_out = support_radii(loop[0])
    curve = _resample_for_twist(curve, center, r_in, r_out, power, cfg.step, cfg.vertex_cap)
    rel = curve.pts - center
    rho = np.linalg.norm(rel, axis=1)
    on_circle = np.abs(rho - LOOP_RADIUS) < cfg.eps
    if np.any(on_circle & np.roll(on_circle, 1)):
        raise TangencyError(f"curve tangent to loop {loop} at working precision")
    frac = np.clip((r_out - rho) / (r_out - r_in), 0.0, 1.0)
    ang = power * np.pi * frac
    ca, sa = np.cos(ang), np.sin(ang)
    rotated = np.stack([rel[:, 0] * ca - rel[:, 1] * sa, rel[:, 0] * sa + rel[:, 1] * ca], axis=1)
    return PlanarCurve(rotated + center, closed=curve.closed, name=curve.name)


def transport_explicit(
    spec: TwistSpec,
    curve: PlanarCurve,
    cfg: OracleConfig | None = None,
    through_level: int | None = None,
) -> PlanarCurve:
    """Image of the curve under the composed half twists, levels 2..h.

    Loops at a common level have disjoint supports, so their order within a
    level is irrelevant.  Magnitudes above the configured budget raise
    BudgetExceeded before any work is done.
    """
    cfg = cfg or OracleConfig()
    if spec.twists and max(abs(t) for t in spec.twists.values()) > cfg.magnitude_budget:
        raise BudgetExceeded(
            f"twist magnitude exceeds oracle budget {cfg.magnitude_budget}"
        )
    top = spec.h if through_level is None else through_level
    for level in range(2, top + 1):
        for j in range(1, row_length(level, spec.b) + 1):
            t = spec.t(level, j)
            if t:
                curve = half_twist(curve, (level, j), t, cfg)
    return curve


def puncture_images(spec: TwistSpec) -> dict[int, int]:
    """Where the composed twists send each marked point.

    A loop's half-twist power swaps its two punctures iff the power is odd;
    levels compose bottom to top.
    """
    image = {p: p for p in range(1, 2 * spec.b + 1)}
    pos = {p: p for p in range(1, 2 * spec.b + 1)}  # current position of point p
    for level in range(2, spec.h + 1):
        for j in range(1, row_length(level, spec.b) + 1):
            if spec.t(level, j) % 2:
                a, b = loop_punctures(level, j)
                swap = {p: q for p, q in pos.items()}
                for p, q in pos.items():
                    if q == a:
                        swap[p] = b
                    elif q == b:
                        swap[p] = a
                pos = swap
    return pos


# ---------------------------------------------------------------------------
# Intersection words
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Hit:
    arc: object  # caller-supplied arc id
    x: float  # crossing abscissa on the axis
    t: float  # position along the curve (segment index + fraction)
    upward: bool  # curve crosses the axis from below


@dataclass(frozen=True)
class IntersectionWord:
    hits: tuple[Hit, ...]  # ordered along the curve
    closed: bool

    def arcs(self) -> tuple:
        return tuple(h.arc for h in self.hits)

    def count(self, arc=None) -> int:
        if arc is None:
            return len(self.hits)
        return sum(1 for h in self.hits if h.arc == arc)


def axis_crossings(curve: PlanarCurve) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All transverse crossings of the curve with the axis y = 0.

    Returns (x, t, upward).  Vertices exactly on the axis are treated as
    lying at +0 so ties break deterministically.  Open-curve endpoints
    sitting on the axis (arcs pinned at marked points) inherit the side of
    their neighbouring vertex, so leaving a marked point never counts as a
    crossing.
    """
    a, b = curve.segments()
    ya, yb = a[:, 1].copy(), b[:, 1].copy()
    if not curve.closed and curve.n >= 2:
        if abs(curve.pts[0, 1]) < 1e-12:
            side = 1e-300 * (1 if curve.pts[1, 1] >= 0 else -1)
            ya[0] = side
        if abs(curve.pts[-1, 1]) < 1e-12:
            side = 1e-300 * (1 if curve.pts[-2, 1] >= 0 else -1)
            yb[-1] = side
    ya[ya == 0.0] = 1e-300
    yb[yb == 0.0] = 1e-300
    crossing = (ya > 0) != (yb > 0)
    idx = np.nonzero(crossing)[0]
    frac = ya[idx] / (ya[idx] - yb[idx])
    x = a[idx, 0] + frac * (b[idx, 0] - a[idx, 0])
    t = idx + frac
    upward = ya[idx] < 0
    return x, t, upward


def intersection_word(curve: PlanarCurve, arcs: dict) -> IntersectionWord:
    """Cyclic word of curve crossings with axis arcs {id: (x0, x1)}."""
    x, t, up = axis_crossings(curve)
    hits = []
    for xi, ti, ui in zip(x, t, up):
        for arc_id, (x0, x1) in arcs.items():
            if x0 < xi < x1:
                hits.append(Hit(arc=arc_id, x=float(xi), t=float(ti), upward=bool(ui)))
                break
    hits.sort(key=lambda h: h.t)
    return IntersectionWord(hits=tuple(hits), closed=curve.closed)


def _curve_piece(curve: PlanarCurve, t0: float, t1: float) -> np.ndarray:
    """Polyline along the curve from parameter t0 to t1 (wrapping if closed)."""
    pts = curve.pts
    n = len(pts)

    def point_at(t: float) -> np.ndarray:
        i = int(np.floor(t))
        f = t - i
        p0 = pts[i % n]
        p1 = pts[(i + 1) % n]
        return p0 + f * (p1 - p0)

    out = [point_at(t0)]
    i = int(np.floor(t0)) + 1
    if t1 < t0:
        if not curve.closed:
            raise ValueError("cannot wrap an open curve")
        t1 = t1 + n
    while i <= t1:
        out.append(pts[i % n].copy())
        i += 1
    out.append(point_at(t1 % n if curve.closed else t1))
    return np.array(out)


def _points_in_polygon(polygon: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Even-odd rule containment test, vectorized over query points."""
    x, y = points[:, 0], points[:, 1]
    inside = np.zeros(len(points), dtype=bool)
    px, py = polygon[:, 0], polygon[:, 1]
    qx, qy = np.roll(px, -1), np.roll(py, -1)
    for k in range(len(polygon)):
        x0, y0, x1, y1 = px[k], py[k], qx[k], qy[k]
        if y0 == y1:
            continue
        cond = (y0 > y) != (y1 > y)
        xint = x0 + (y - y0) / (y1 - y0) * (x1 - x0)
        inside ^= cond & (x < xint)
    return inside


def _bigon_is_empty(curve: PlanarCurve, h1: Hit, h2: Hit, punctures: np.ndarray) -> bool:
    piece = _curve_piece(curve, h1.t, h2.t)
    closing = np.array([[h2.x, 0.0], [h1.x, 0.0]])
    poly = np.vstack([piece, closing])
    return not np.any(_points_in_polygon(poly, punctures))


def reduce_word(curve: PlanarCurve, word: IntersectionWord, punctures) -> IntersectionWord:
    """Remove innermost bigons until the word is in minimal position.

    A bigon is a pair of hits adjacent along the curve and along a common
    arc whose disk (curve piece plus axis piece) contains no marked point.
    Removal is leftmost-first along the curve; the result is confluent and
    is checked as such in the test-suite.
    """
    punctures = np.array([[float(p), 0.0] for p in punctures])
    hits = list(word.hits)
    changed = True
    while changed:
        changed = False
        n = len(hits)
        if n < 2:
            break
        order = range(n) if word.closed else range(n - 1)
        for i in order:
            j = (i + 1) % n
            h1, h2 = hits[i], hits[j]
            if h1.arc != h2.arc:
                continue
            same_arc = sorted((h for h in hits if h.arc == h1.arc), key=lambda h: h.x)
            ia, ib = same_arc.index(h1), same_arc.index(h2)
            if abs(ia - ib) != 1:
                continue  # another strand hits the arc between them
            if not _bigon_is_empty(curve, h1, h2, punctures):
                continue
            del hits[max(i, j)]
            del hits[min(i, j)]
            changed = True
            break
    return IntersectionWord(hits=tuple(hits), closed=word.closed)


def reduced_word(curve: PlanarCurve, arcs: dict, punctures) -> IntersectionWord:
    return reduce_word(curve, intersection_word(curve, arcs), punctures)


# ---------------------------------------------------------------------------
# Curve/curve intersections
# ---------------------------------------------------------------------------


def _segment_intersections(c1: PlanarCurve, c2: PlanarCurve) -> list[tuple[float, float]]:
    """Transverse intersection parameters (t1, t2) of two polylines."""
    a1, b1 = c1.segments()
    a2, b2 = c2.segments()
    lo1, hi1 = np.minimum(a1, b1), np.maximum(a1, b1)
    lo2, hi2 = np.minimum(a2, b2), np.maximum(a2, b2)
    out = []
    for i in range(len(a1)):
        box = (
            (lo1[i, 0] <= hi2[:, 0])
            & (hi1[i, 0] >= lo2[:, 0])
            & (lo1[i, 1] <= hi2[:, 1])
            & (hi1[i, 1] >= lo2[:, 1])
        )
        for j in np.nonzero(box)[0]:
            p, r = a1[i], b1[i] - a1[i]
            q, s = a2[j], b2[j] - a2[j]
            denom = r[0] * s[1] - r[1] * s[0]
            if denom == 0:
                continue
            qp = q - p
            t = (qp[0] * s[1] - qp[1] * s[0]) / denom
            u = (qp[0] * r[1] - qp[1] * r[0]) / denom
            if 0 <= t < 1 and 0 <= u < 1:
                out.append((i + t, j + u))
    return out


def reduced_pair_count(c1: PlanarCurve, c2: PlanarCurve, punctures) -> int:
    """Geometric intersection number of two closed curves after removing
    empty bigons between them."""
    inter = _segment_intersections(c1, c2)
    pts = np.array([[float(p), 0.0] for p in punctures])
    changed = True
    while changed and len(inter) >= 2:
        changed = False
        by1 = sorted(inter, key=lambda ab: ab[0])
        n = len(by1)
        for i in range(n):
            t1a, t2a = by1[i]
            t1b, t2b = by1[(i + 1) % n]
            by2 = sorted(inter, key=lambda ab: ab[1])
            ia, ib = by2.index((t1a, t2a)), by2.index((t1b, t2b))
            if abs(ia - ib) != 1 and abs(ia - ib) != n - 1:
                continue
            piece1 = _curve_piece(c1, t1a, t1b)
            piece2 = _curve_piece(c2, t2b, t2a) if t2b != t2a else None
            if piece2 is None:
                continue
            poly = np.vstack([piece1, piece2])
            if np.any(_points_in_polygon(poly, pts)):
                # try the other side of the second curve
                piece2 = _curve_piece(c2, t2a, t2b)[::-1]
                poly = np.vstack([piece1, piece2])
                if np.any(_points_in_polygon(poly, pts)):
                    continue
            inter.remove((t1a, t2a))
            inter.remove((t1b, t2b))
            changed = True
            break
    return len(inter)


def disjointness(c1: PlanarCurve, c2: PlanarCurve, punctures) -> bool:
    """True iff the reduced geometric intersection number is zero."""
    return reduced_pair_count(c1, c2, punctures) == 0


# ---------------------------------------------------------------------------
# Convenience counters
# ---------------------------------------------------------------------------


def beta_arcs(b: int) -> dict[int, tuple[float, float]]:
    return {j: (2 * j - 1.0, 2.0 * j) for j in range(1, b + 1)}


def gamma_arcs(b: int) -> dict[int, tuple[float, float]]:
    return {j: (2.0 * j, 2 * j + 1.0) for j in range(1, b)}


def unit_intervals(b: int) -> dict[int, tuple[float, float]]:
    """All open axis intervals (k, k+1) between and beyond marked points."""
    return {k: (float(k), k + 1.0) for k in range(0, 2 * b + 1)}


def count_between(curve: PlanarCurve, loop: tuple[int, int], punctures) -> int:
    """Reduced crossings with the open segment joining the loop's punctures:
    how many strands pass between them."""
    lo, hi = loop_punctures(*loop)
    word = reduced_word(curve, {("between", loop): (float(lo), float(hi))}, punctures)
    return word.count()
