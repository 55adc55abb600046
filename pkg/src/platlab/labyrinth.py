"""Labyrinth structure extraction from transported curve geometry.

The labyrinth is the disk holding the transported seed curve; its boundary
is realized as an ellipse clearing the leftmost two axis arcs.  The curve
cuts it into a twice-punctured core (the image of the seed neighbourhood)
and a thrice-punctured outer region; three gates, found as short vertical
jumper segments across the outermost strand gaps between adjacent circle
families and validated against the expected five-face census, cut the
outer region into three once-punctured colored disks and an unpunctured
annulus.

Tracks are the minimal words of the essential arc that enters a colored
disk through its gate, loops the colored puncture, and exits.  They are
computed combinatorially from the disk's chord decomposition: the axis
pieces inside the disk are either barriers (bits of bridge-disk arcs),
passages (gamma-arc bits), or the slit ending at the puncture, and the
cells they cut form a tree whose unique gate-to-puncture path doubles into
the track.  A second, independent derivation reads chord nesting straight
off the disk's boundary word; both must agree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CensusMismatch, DegenerateSubdivision
from .curve_oracle import (
    OracleConfig,
    PlanarCurve,
    axis_crossings,
    bridge_arc_curve,
    puncture_images,
    seed_curve,
    transport_explicit,
)
from .faces import Arrangement, Chain, Face, points_in_polygon
from .plat_model import TwistSpec

GATE_COLORS = ("brown", "orange", "purple")


# ---------------------------------------------------------------------------
# Region boundary and census
# ---------------------------------------------------------------------------


def region_boundary(b: int, n_points: int = 720) -> PlanarCurve:
    """Ellipse bounding the labyrinth: inside are marked points 4..2b and the
    whole transported curve; outside is a neighbourhood of the two leftmost
    axis arcs (points 1, 2, 3)."""
    x_left, x_right = 3.25, 2 * b + 0.75
    cx, rx = 0.5 * (x_left + x_right), 0.5 * (x_right - x_left)
    th = 2 * np.pi * np.arange(n_points) / n_points + 0.1
    pts = np.stack([cx + rx * np.cos(th), 1.6 * np.sin(th)], axis=1)
    return PlanarCurve(pts, closed=True, name="region-boundary")


@dataclass(frozen=True)
class FaceInfo:
    kind: str  # "disk" or "annulus"
    punctures: tuple[int, ...]
    role: str  # "core", "brown", "orange", "purple", "annulus", "exterior"


@dataclass(frozen=True)
class FaceCensus:
    faces: tuple[FaceInfo, ...]

    def signature(self) -> tuple[tuple[str, int], ...]:
        return tuple(sorted((f.kind, len(f.punctures)) for f in self.faces if f.role != "exterior"))

    @property
    def expected_shape(self) -> bool:
        return self.signature() == (
            ("annulus", 0),
            ("disk", 1),
            ("disk", 1),
            ("disk", 1),
            ("disk", 2),
        )


EXPECTED_SIGNATURE = (("annulus", 0), ("disk", 1), ("disk", 1), ("disk", 1), ("disk", 2))


def _close_loop(pts: np.ndarray) -> np.ndarray:
    return np.vstack([pts, pts[:1]])


def _line_crossings(curve: PlanarCurve, x0: float) -> list[tuple[float, float]]:
    """(t, y) of transverse crossings with the vertical line x = x0."""
    a, b = curve.segments()
    xa, xb = a[:, 0] - x0, b[:, 0] - x0
    xa = np.where(xa == 0.0, 1e-300, xa)
    xb = np.where(xb == 0.0, 1e-300, xb)
    idx = np.nonzero((xa > 0) != (xb > 0))[0]
    frac = xa[idx] / (xa[idx] - xb[idx])
    y = a[idx, 1] + frac * (b[idx, 1] - a[idx, 1])
    return [(float(i + f), float(yy)) for i, f, yy in zip(idx, frac, y)]


@dataclass(frozen=True)
class Gate:
    color: str
    anchor: int  # the marked point whose pocket the gate cuts off
    side: str  # side the bow dips to: "below" or "above"
    params: tuple[float, float]  # curve parameters of the two endpoints
    pts: np.ndarray  # polyline from the params[0] point to the params[1] point


def _curve_point(curve: PlanarCurve, t: float) -> np.ndarray:
    i = int(np.floor(t)) % curve.n
    f = t - np.floor(t)
    return curve.pts[i] + f * (curve.pts[(i + 1) % curve.n] - curve.pts[i])


def _axis_gate(curve: PlanarCurve, puncture: int, side: str, depth: float = 1e-4) -> Gate:
    """Gate candidate for one marked point: the axis path between the two
    curve crossings nearest the point, bowed slightly to one side.

    The open interval between those crossings meets the curve nowhere, and
    every strand is a near-circular arc centered on the axis, so nothing
    can duck under the shallow bow: the arc is embedded in the face that
    holds the point, with both endpoints on the curve.
    """
    x, t, _ = axis_crossings(curve)
    order = np.argsort(x)
    xs, ts = x[order], t[order]
    k = int(np.searchsorted(xs, float(puncture)))
    if k == 0 or k == len(xs):
        raise DegenerateSubdivision(f"no curve crossings around point {puncture}")
    xa, xb = float(xs[k - 1]), float(xs[k])
    ta, tb = float(ts[k - 1]), float(ts[k])
    n = 48
    ss = np.linspace(0.0, 1.0, n + 1)
    bow_x = xa + ss * (xb - xa)
    sign = -1.0 if side == "below" else 1.0
    bow_y = sign * depth * np.sin(np.pi * ss)
    return Gate(
        color="?",
        anchor=puncture,
        side=side,
        params=(ta, tb),
        pts=np.stack([bow_x, bow_y], axis=1),
    )


def _census_arrangement(
    curve: PlanarCurve, boundary: PlanarCurve, gates: tuple[Gate, ...]
) -> tuple[Arrangement, dict]:
    """Arrangement of curve + region boundary + gate segments.

    The curve is split at gate endpoints; each gate becomes a two-point
    chain.  Returns the arrangement and a map of gate index -> chain id.
    """
    nodes: dict[int, np.ndarray] = {}
    chains: list[Chain] = []
    cid = 0
    if gates:
        events = []  # (param, node_id)
        for gi, g in enumerate(gates):
            for k, end in ((0, g.pts[0]), (1, g.pts[-1])):
                nodes[len(nodes)] = np.asarray(end, dtype=float)
                events.append((g.params[k] % curve.n, len(nodes) - 1))
        events.sort()
        # curve arcs between consecutive gate endpoints
        for e in range(len(events)):
            t0, n0 = events[e]
            t1, n1 = events[(e + 1) % len(events)]
            pts = _curve_slice(curve, t0, t1)
            chains.append(Chain(cid, n0, n1, pts))
            cid += 1
        gate_chain: dict[int, int] = {}
        for gi, g in enumerate(gates):
            n0 = next(nid for (t, nid) in events if abs((g.params[0] % curve.n) - t) < 1e-12)
            n1 = next(nid for (t, nid) in events if abs((g.params[1] % curve.n) - t) < 1e-12)
            chains.append(Chain(cid, n0, n1, g.pts.copy()))
            gate_chain[gi] = cid
            cid += 1
    else:
        anchor = len(nodes)
        nodes[anchor] = curve.pts[0]
        chains.append(Chain(cid, anchor, anchor, _close_loop(curve.pts), closed=True))
        gate_chain = {}
        cid += 1
    anchor = len(nodes)
    nodes[anchor] = boundary.pts[0]
    chains.append(Chain(cid, anchor, anchor, _close_loop(boundary.pts), closed=True))
    boundary_cid = cid
    arr = Arrangement(nodes, chains)
    return arr, {"gate_chain": gate_chain, "boundary_chain": boundary_cid}


def _curve_slice(curve: PlanarCurve, t0: float, t1: float) -> np.ndarray:
    n = curve.n
    p0, p1 = _curve_point(curve, t0), _curve_point(curve, t1)
    if t1 <= t0:
        t1 += n
    idx = []
    i = int(np.floor(t0)) + 1
    while i <= t1:
        idx.append(i % n)
        i += 1
    mid = curve.pts[idx] if idx else np.empty((0, 2))
    pts = [p0[None, :]]
    if len(mid) and np.allclose(mid[0], p0):
        mid = mid[1:]
    if len(mid) and np.allclose(mid[-1], p1):
        mid = mid[:-1]
    pts.append(mid)
    pts.append(p1[None, :])
    return np.vstack(pts)


def _classify_census(
    arr: Arrangement, meta: dict, gates: tuple[Gate, ...], punctures: list[int]
) -> tuple[FaceCensus, dict]:
    """Assign roles to the arrangement faces and check the expected shape."""
    pts = np.array([[float(p), 0.0] for p in punctures])
    assignments: dict[int, list[int]] = {i: [] for i in range(len(arr.faces))}
    for p in punctures:
        fi = arr.face_of_axis_point(float(p))
        assignments[fi].append(p)

    roles: dict[int, str] = {}
    gate_face: dict[int, int] = {}
    for fi, face in enumerate(arr.faces):
        if face.outer is None:
            roles[fi] = "exterior"
            continue
        chain_ids = {c for c, _ in face.outer.halves}
        if meta["boundary_chain"] in chain_ids:
            roles[fi] = "annulus" if face.holes else "region"
            continue
        gate_here = [gi for gi, gc in meta["gate_chain"].items() if gc in chain_ids]
        if len(gate_here) == 1 and len(face.outer.halves) == 2:
            roles[fi] = GATE_COLORS[gate_here[0]] if len(gates) == 3 else f"pocket{gate_here[0]}"
            gate_face[gate_here[0]] = fi
        elif not gate_here:
            roles[fi] = "core"
        else:
            roles[fi] = "other"

    infos = []
    for fi, face in enumerate(arr.faces):
        kind = "annulus" if (face.outer is not None and face.holes) else "disk"
        infos.append(
            FaceInfo(
                kind=kind if face.outer is not None else "disk",
                punctures=tuple(sorted(assignments[fi])),
                role=roles[fi],
            )
        )
    return FaceCensus(faces=tuple(infos)), {"roles": roles, "gate_face": gate_face}


def compute_census(
    curve: PlanarCurve,
    b: int,
    gates: tuple[Gate, ...] = (),
    boundary: PlanarCurve | None = None,
) -> tuple[FaceCensus, Arrangement, dict]:
    boundary = boundary or region_boundary(b)
    arr, meta = _census_arrangement(curve, boundary, gates)
    census, info = _classify_census(arr, meta, gates, list(range(1, 2 * b + 1)))
    meta.update(info)
    return census, arr, meta


def locate_gates(curve: PlanarCurve, b: int) -> tuple[Gate, ...]:
    """Find the three gates by validated search over lens-line jumpers.

    The pre-gate census must show the expected two-face split (twice
    punctured core inside the curve, thrice punctured outer region).  Gap
    candidates on each lens line are screened one gate at a time (the cut
    pocket must hold exactly one marked point), then the full triple is
    accepted once the five-face census validates.  Raises CensusMismatch
    when no configuration works.
    """
    census0, arr0, meta0 = compute_census(curve, b)
    bounded = [f for f in census0.faces if f.role not in ("exterior",)]
    counts = sorted(len(f.punctures) for f in bounded)
    if counts != [2, 3]:
        raise CensusMismatch(f"pre-gate census has puncture counts {counts}")
    colored_points = sorted(
        next(
            f.punctures
            for f in census0.faces
            if len(f.punctures) == 3 and f.role != "exterior"
        )
    )

    def pocket_punctures(g: Gate) -> tuple[int, ...] | None:
        census, _, meta = compute_census(curve, b, (g,))
        for fi, f in enumerate(census.faces):
            if fi in meta["gate_face"].values():
                return f.punctures
        return None

    # One gate per colored point, leftmost first; the bow side is whichever
    # cuts off exactly that point.
    per_point: list[list[Gate]] = []
    for p in colored_points:
        keep = []
        for side in ("below", "above"):
            g = _axis_gate(curve, p, side)
            if pocket_punctures(g) == (p,):
                keep.append(g)
        if not keep:
            raise CensusMismatch(f"no gate pockets marked point {p} alone")
        per_point.append(keep)

    def validated(cand) -> tuple[Gate, ...] | None:
        gates = tuple(
            Gate(GATE_COLORS[i], g.anchor, g.side, g.params, g.pts)
            for i, g in enumerate(cand)
        )
        census, arr, meta = compute_census(curve, b, gates)
        if not census.expected_shape:
            return None
        for f in census.faces:
            if f.role in GATE_COLORS and len(f.punctures) != 1:
                return None
            if f.role == "annulus" and f.punctures:
                return None
            if f.role == "core" and len(f.punctures) != 2:
                return None
        if not {f.role for f in census.faces} >= set(GATE_COLORS):
            return None
        return gates

    import itertools

    for combo in itertools.product(*per_point):
        got = validated(combo)
        if got is not None:
            return got
    raise CensusMismatch("no gate configuration yields the five-face census")


def require_gates_census(census: FaceCensus) -> None:
    if not census.expected_shape:
        raise CensusMismatch(f"census signature {census.signature()} != expected")


# ---------------------------------------------------------------------------
# Lanes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Lane:
    arc: int  # bridge-arc index j (the arc between points 2j-1 and 2j)
    ordinal: int  # 1 = leftmost lane of that arc
    interval: tuple[float, float]
    cut_left: bool  # left endpoint is a transported-arc crossing
    cut_right: bool
    face_tags: frozenset[str]

    @property
    def lane_id(self) -> tuple[int, int]:
        return (self.arc, self.ordinal)

    @property
    def interior(self) -> bool:
        return self.cut_left and self.cut_right


@dataclass(frozen=True)
class LaneDecomposition:
    lanes: dict[int, tuple[Lane, ...]]

    def lane_at(self, arc: int, x: float) -> Lane:
        for lane in self.lanes[arc]:
            if lane.interval[0] <= x <= lane.interval[1]:
                return lane
        raise KeyError(f"no lane of arc {arc} contains x={x}")

    def all_lanes(self) -> list[Lane]:
        return [lane for arc in sorted(self.lanes) for lane in self.lanes[arc]]


def lane_decomposition(
    arc_curve: PlanarCurve,
    curve: PlanarCurve,
    b: int,
    arr: Arrangement,
    roles: dict[int, str],
) -> LaneDecomposition:
    """Cut each bridge arc at the transported-arc crossings and tag every
    lane with the census faces its interior meets."""
    ax, _, _ = axis_crossings(arc_curve)
    curve_ax, _, _ = axis_crossings(curve)
    curve_ax = np.sort(curve_ax)
    lanes: dict[int, tuple[Lane, ...]] = {}
    for j in range(1, b + 1):
        x0, x1 = 2 * j - 1.0, 2.0 * j
        cuts = sorted(float(x) for x in ax if x0 < x < x1)
        bounds = [x0] + cuts + [x1]
        out = []
        for k in range(len(bounds) - 1):
            lo, hi = bounds[k], bounds[k + 1]
            inner = [float(x) for x in curve_ax if lo < x < hi]
            samples = []
            pieces = [lo] + inner + [hi]
            for a, bb in zip(pieces, pieces[1:]):
                samples.append(0.5 * (a + bb))
            tags = set()
            for s in samples:
                tags.add(roles.get(arr.face_of_axis_point(s), "exterior"))
            out.append(
                Lane(
                    arc=j,
                    ordinal=k + 1,
                    interval=(lo, hi),
                    cut_left=k > 0,
                    cut_right=k < len(bounds) - 2,
                    face_tags=frozenset(tags),
                )
            )
        lanes[j] = tuple(out)
    return LaneDecomposition(lanes=lanes)


# ---------------------------------------------------------------------------
# Colored-disk chord structure and tracks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TrackSequence:
    color: str
    numbers: tuple[int, ...]
    lane_ids: tuple[tuple[int, int], ...]

    @property
    def palindrome(self) -> bool:
        return self.numbers == self.numbers[::-1] and self.lane_ids == self.lane_ids[::-1]

    @property
    def alternates_threes(self) -> bool:
        return all(
            (self.numbers[k] == 3) == (k % 2 == 0) for k in range(len(self.numbers))
        )

    @property
    def outermost(self) -> tuple[int, int]:
        return (self.numbers[0], self.numbers[1]) if len(self.numbers) >= 2 else (self.numbers[0], 0)

    @property
    def contains_fours(self) -> bool:
        return 4 in self.numbers

    def to_json(self) -> dict:
        return {
            "color": self.color,
            "sequence": list(self.numbers),
            "lanes": [list(l) for l in self.lane_ids],
            "palindrome": self.palindrome,
            "outermost": list(self.outermost),
        }


@dataclass(frozen=True)
class _DiskStructure:
    chords: list  # per chord: (number, lane_id, above_face, below_face, pos_pair)
    slit_number: int
    slit_lane: tuple[int, int]
    cell_of_face: dict[int, int]
    gate_cell: int
    puncture_cell: int
    boundary_positions: dict  # chord index -> (pos1, pos2); plus "gate", "slit"


def _disk_structure(
    polygon: np.ndarray,
    gate_vertex_span: tuple[int, int],
    puncture: int,
    b: int,
    lanes: LaneDecomposition,
) -> _DiskStructure:
    """Chamber/chord decomposition of one colored disk.

    The polygon is the disk boundary (counterclockwise, gate occupying the
    vertex range gate_vertex_span).  Axis pieces inside the polygon are
    classified as barriers (bridge-arc bits), passages (gamma bits), or the
    slit ending at the puncture; chambers merged across passages form the
    cells, and barriers are the chords of the cell tree.
    """
    n = len(polygon)
    y = polygon[:, 1]
    s = np.where(y == 0.0, 1e-300, y)
    cross_idx = np.nonzero((s > 0) != (np.roll(s, -1) > 0))[0]
    if len(cross_idx) == 0:
        raise DegenerateSubdivision("colored disk never meets the axis")
    frac = s[cross_idx] / (s[cross_idx] - np.roll(s, -1)[cross_idx])
    cross_x = polygon[cross_idx, 0] + frac * (np.roll(polygon[:, 0], -1)[cross_idx] - polygon[cross_idx, 0])
    params = cross_idx + frac
    if len(cross_x) > 1 and float(np.min(np.diff(np.sort(cross_x)))) < 1e-9:
        raise DegenerateSubdivision("coincident axis crossings on a disk boundary")

    # nodes: axis crossings (by polygon order), plus the puncture
    nodes = {k: np.array([cross_x[k], 0.0]) for k in range(len(cross_x))}
    p_node = len(nodes)
    nodes[p_node] = np.array([float(puncture), 0.0])

    chains: list[Chain] = []
    # polygon pieces between consecutive crossings (cyclic)
    piece_of_gate = None
    gate_probe = 0.5 * (gate_vertex_span[0] + gate_vertex_span[1])
    for k in range(len(params)):
        k2 = (k + 1) % len(params)
        t0, t1 = params[k], params[k2]
        pts = _polygon_slice(polygon, t0, t1)
        chains.append(Chain(len(chains), k, k2, pts))
        if _param_in_range(gate_probe, t0, t1, n):
            piece_of_gate = len(chains) - 1

    # axis pieces between consecutive crossings by x, split at the puncture;
    # only pieces inside the disk matter, decided exactly by crossing parity
    xs_sorted = np.sort(cross_x)
    node_by_x = {float(nodes[k][0]): k for k in range(len(cross_x))}

    def inside_disk(xm: float) -> bool:
        return int(np.searchsorted(xs_sorted, xm)) % 2 == 1

    axis_chains: list[tuple[int, str]] = []  # (chain id, classification)
    for xa, xb in zip(xs_sorted, xs_sorted[1:]):
        na, nb = node_by_x[float(xa)], node_by_x[float(xb)]
        if xa < puncture < xb:
            mids = [(na, p_node, (xa, float(puncture))), (p_node, nb, (float(puncture), xb))]
        else:
            mids = [(na, nb, (xa, xb))]
        for n0, n1, (lo, hi) in mids:
            pts = np.array([nodes[n0], nodes[n1]])
            chains.append(Chain(len(chains), n0, n1, pts))
            kind = _classify_interval(lo, hi, puncture, b) if inside_disk(0.5 * (lo + hi)) else "outside"
            axis_chains.append((len(chains) - 1, kind))

    arr = Arrangement(nodes, chains)

    # adjacency of faces across each chain
    face_of_half: dict[tuple[int, bool], int] = {}
    for fi, face in enumerate(arr.faces):
        cycles = ([face.outer] if face.outer is not None else []) + list(face.holes)
        for cyc in cycles:
            for h in cyc.halves:
                face_of_half[h] = fi

    # chambers: every face bordering an inside axis piece
    chambers: set[int] = set()
    for cid, kind in axis_chains:
        if kind == "outside":
            continue
        chambers.add(face_of_half[(cid, True)])
        chambers.add(face_of_half[(cid, False)])

    parent = {fi: fi for fi in chambers}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    chord_edges = []
    for cid, kind in axis_chains:
        if kind == "outside":
            continue
        fa = face_of_half[(cid, True)]
        fb = face_of_half[(cid, False)]
        if kind == "passage":
            parent[find(fa)] = find(fb)
        elif kind == "barrier":
            chord_edges.append((cid, fa, fb))
        # slit pieces neither merge nor count as chords

    cells = {fi: find(fi) for fi in chambers}

    # chord metadata
    chords = []
    for cid, fa, fb in chord_edges:
        chain = arr.chains[cid]
        xm = 0.5 * (chain.pts[0, 0] + chain.pts[-1, 0])
        arc = int(np.floor(xm)) // 2 + 1
        lane = lanes.lane_at(arc, xm)
        chords.append(
            {
                "chain": cid,
                "number": arc,
                "lane": lane.lane_id,
                "cells": (cells[fa], cells[fb]),
                "span": (float(min(chain.pts[0, 0], chain.pts[-1, 0])), float(max(chain.pts[0, 0], chain.pts[-1, 0]))),
            }
        )

    # slit data
    slit_arc = None
    for cid, kind in axis_chains:
        if kind == "slit":
            chain = arr.chains[cid]
            xm = 0.5 * (chain.pts[0, 0] + chain.pts[-1, 0])
            slit_arc = int(np.floor(xm)) // 2 + 1
            slit_lane = lanes.lane_at(slit_arc, xm).lane_id
            # puncture cell: chamber adjacent to the slit
            fa = face_of_half.get((cid, True))
            p_cell = cells[fa] if fa in cells else cells[face_of_half[(cid, False)]]
            break
    else:
        raise DegenerateSubdivision(f"no slit found at puncture {puncture}")

    gate_cell = None
    if piece_of_gate is not None:
        fa = face_of_half.get((piece_of_gate, True))
        fb = face_of_half.get((piece_of_gate, False))
        for f in (fa, fb):
            if f in cells:
                gate_cell = cells[f]
    if gate_cell is None:
        raise DegenerateSubdivision("gate-adjacent chamber not found")

    # boundary positions (for the independent nesting derivation)
    pos_of_node = {k: float(params[k]) for k in range(len(cross_x))}
    boundary_positions = {}
    for idx, ch in enumerate(chords):
        chain = arr.chains[ch["chain"]]
        boundary_positions[idx] = (pos_of_node[chain.node_a], pos_of_node[chain.node_b])
    slit_chain = next(cid for cid, kind in axis_chains if kind == "slit")
    sch = arr.chains[slit_chain]
    anchor = sch.node_a if sch.node_a != p_node else sch.node_b
    boundary_positions["slit"] = pos_of_node[anchor]
    boundary_positions["gate"] = float(gate_probe)

    return _DiskStructure(
        chords=chords,
        slit_number=slit_arc,
        slit_lane=slit_lane,
        cell_of_face=cells,
        gate_cell=gate_cell,
        puncture_cell=p_cell,
        boundary_positions=boundary_positions,
    )


def _polygon_slice(polygon: np.ndarray, t0: float, t1: float) -> np.ndarray:
    n = len(polygon)

    def at(t):
        i = int(np.floor(t)) % n
        f = t - np.floor(t)
        return polygon[i] + f * (polygon[(i + 1) % n] - polygon[i])

    p0, p1 = at(t0), at(t1)
    if t1 <= t0:
        t1 += n
    idx = []
    i = int(np.floor(t0)) + 1
    while i <= t1:
        idx.append(i % n)
        i += 1
    mid = polygon[idx] if idx else np.empty((0, 2))
    if len(mid) and np.allclose(mid[0], p0):
        mid = mid[1:]
    if len(mid) and np.allclose(mid[-1], p1):
        mid = mid[:-1]
    return np.vstack([p0[None, :], mid, p1[None, :]])


def _param_in_range(t: float, t0: float, t1: float, n: int) -> bool:
    if t1 <= t0:
        t1 += n
        if t < t0:
            t += n
    return t0 <= t <= t1


def _classify_interval(lo: float, hi: float, puncture: int, b: int) -> str:
    """Axis interval inside a colored disk: bridge-arc bit (barrier), gamma
    or outer bit (passage), or the slit: the bridge-arc bit ending at the
    puncture, which blocks nothing since chambers connect around its free
    end through the adjacent passage."""
    xm = 0.5 * (lo + hi)
    on_bridge_arc = 1 <= xm <= 2 * b and int(np.floor(xm)) % 2 == 1
    if abs(lo - puncture) < 1e-9 or abs(hi - puncture) < 1e-9:
        return "slit" if on_bridge_arc else "passage"
    return "barrier" if on_bridge_arc else "passage"


def _route_from_cells(ds: _DiskStructure) -> list[int]:
    """Chord indices crossed by the tight gate-to-puncture path, read off
    the cell tree by breadth-first search."""
    adj: dict[int, list[tuple[int, int]]] = {}
    for idx, ch in enumerate(ds.chords):
        ca, cb = ch["cells"]
        adj.setdefault(ca, []).append((cb, idx))
        adj.setdefault(cb, []).append((ca, idx))
    if ds.gate_cell == ds.puncture_cell:
        return []
    prev: dict[int, tuple[int, int]] = {}
    frontier = [ds.gate_cell]
    seen = {ds.gate_cell}
    while frontier and ds.puncture_cell not in seen:
        nxt = []
        for c in frontier:
            for c2, e in adj.get(c, []):
                if c2 not in seen:
                    seen.add(c2)
                    prev[c2] = (c, e)
                    nxt.append(c2)
        frontier = nxt
    if ds.puncture_cell not in prev:
        raise DegenerateSubdivision("puncture cell unreachable from the gate")
    path = []
    c = ds.puncture_cell
    while c != ds.gate_cell:
        c, e = prev[c]
        path.append(e)
    return path[::-1]


def _route_from_boundary(ds: _DiskStructure, circumference: float) -> list[int]:
    """Independent derivation: a chord is crossed iff its endpoints separate
    the gate position from the slit anchor in the boundary's cyclic order,
    and crossings sort by how many other separating chords shield them from
    the gate."""
    pos_gate = ds.boundary_positions["gate"]
    pos_slit = ds.boundary_positions["slit"]

    def separates(pair: tuple[float, float], a: float, b2: float) -> bool:
        p1, p2 = pair
        sa = (a - p1) % circumference < (p2 - p1) % circumference
        sb = (b2 - p1) % circumference < (p2 - p1) % circumference
        return sa != sb

    sep = [
        idx
        for idx in range(len(ds.chords))
        if separates(ds.boundary_positions[idx], pos_gate, pos_slit)
    ]

    def depth(idx: int) -> int:
        anchor = ds.boundary_positions[idx][0]
        return sum(
            1
            for other in sep
            if other != idx and separates(ds.boundary_positions[other], pos_gate, anchor)
        )

    return sorted(sep, key=depth)


def _assemble_track(ds: _DiskStructure, route: list[int], color: str) -> TrackSequence:
    numbers = [ds.chords[e]["number"] for e in route]
    lanes_ = [ds.chords[e]["lane"] for e in route]
    numbers = numbers + [ds.slit_number] + numbers[::-1]
    lanes_ = lanes_ + [ds.slit_lane] + lanes_[::-1]
    return TrackSequence(color=color, numbers=tuple(numbers), lane_ids=tuple(lanes_))


# ---------------------------------------------------------------------------
# Top-level analysis
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LabyrinthData:
    spec: TwistSpec
    curve: PlanarCurve
    arc_curve: PlanarCurve
    boundary: PlanarCurve
    gates: tuple[Gate, ...]
    census: FaceCensus
    lanes: LaneDecomposition
    tracks: dict[str, TrackSequence]
    tracks_by_boundary: dict[str, TrackSequence]
    core_punctures: tuple[int, int]
    colored_punctures: dict[str, int]
    routes: dict[str, list[dict]]

    def outermost_labels(self, color: str) -> tuple[int, int]:
        return self.tracks[color].outermost


def _snap_arc_endpoints(arc: PlanarCurve, b: int) -> PlanarCurve:
    pts = arc.pts.copy()
    for k in (0, -1):
        target = round(pts[k, 0])
        if not (1 <= target <= 2 * b) or abs(pts[k, 0] - target) > 1e-6 or abs(pts[k, 1]) > 1e-6:
            raise DegenerateSubdivision("transported arc endpoint missed its marked point")
        pts[k] = (float(target), 0.0)
    return PlanarCurve(pts, closed=False, name=arc.name)


def analyze_labyrinth(spec: TwistSpec, cfg: OracleConfig | None = None) -> LabyrinthData:
    """Run the full geometric pipeline for one twist vector."""
    cfg = cfg or OracleConfig()
    b = spec.b
    curve = transport_explicit(spec, seed_curve(b, cfg), cfg)
    arc = _snap_arc_endpoints(transport_explicit(spec, bridge_arc_curve(b, cfg), cfg), b)
    gates = locate_gates(curve, b)
    census, arr, meta = compute_census(curve, b, gates)
    require_gates_census(census)
    lanes = lane_decomposition(arc, curve, b, arr, meta["roles"])

    images = tuple(sorted(puncture_images(spec)[p] for p in (2 * b - 1, 2 * b)))

    tracks: dict[str, TrackSequence] = {}
    tracks_alt: dict[str, TrackSequence] = {}
    colored: dict[str, int] = {}
    routes: dict[str, list[dict]] = {}
    core_punctures: tuple[int, int] | None = None
    for fi, info in enumerate(census.faces):
        if info.role == "core":
            core_punctures = info.punctures
    if core_punctures is None or tuple(sorted(core_punctures)) != images:
        raise CensusMismatch(
            f"core face punctures {core_punctures} != transported pair {images}"
        )

    for gi, color in enumerate(GATE_COLORS):
        face_idx = meta["gate_face"][gi]
        face = arr.faces[face_idx]
        info = census.faces[face_idx]
        puncture = info.punctures[0]
        colored[color] = puncture
        halves = list(face.outer.halves)
        gate_cid = meta["gate_chain"][gi]
        k0 = next(i for i, (cid, _) in enumerate(halves) if cid == gate_cid)
        halves = halves[k0:] + halves[:k0]
        parts = []
        for cid, fwd in halves:
            pts = arr.chains[cid].pts
            parts.append((pts if fwd else pts[::-1])[:-1])
        polygon = np.vstack(parts)
        ds = _disk_structure(polygon, (0, 1), puncture, b, lanes)
        route = _route_from_cells(ds)
        route_alt = _route_from_boundary(ds, float(len(polygon)))
        tracks[color] = _assemble_track(ds, route, color)
        tracks_alt[color] = _assemble_track(ds, route_alt, color)
        routes[color] = [ds.chords[e] for e in route]

    return LabyrinthData(
        spec=spec,
        curve=curve,
        arc_curve=arc,
        boundary=region_boundary(b),
        gates=gates,
        census=census,
        lanes=lanes,
        tracks=tracks,
        tracks_by_boundary=tracks_alt,
        core_punctures=tuple(core_punctures),
        colored_punctures=colored,
        routes=routes,
    )


def escape_route_polyline(data: LabyrinthData, color: str) -> np.ndarray:
    """Piecewise route realization from the gate to the colored puncture,
    through the chord midpoints; intended for rendering."""
    gi = GATE_COLORS.index(color)
    gate = data.gates[gi]
    start = gate.pts[len(gate.pts) // 2]
    pts = [start]
    for ch in data.routes[color]:
        lo, hi = ch["span"]
        pts.append(np.array([0.5 * (lo + hi), 0.0]))
    pts.append(np.array([float(data.colored_punctures[color]), 0.0]))
    return np.vstack(pts)


@dataclass(frozen=True)
class LaneCoverage:
    covered: tuple[tuple[int, int], ...]
    uncovered: tuple[tuple[int, int], ...]
    vacuous: tuple[tuple[int, int], ...]  # interior lanes meeting the annulus/exterior

    @property
    def all_covered(self) -> bool:
        return not self.uncovered


def lanes_meet_tracks(lanes: LaneDecomposition, tracks: dict[str, TrackSequence]) -> LaneCoverage:
    """Check that every lane with both endpoints on the transported arc is
    crossed by some track (its lane id appears in a track's lane list)."""
    track_lanes = {lid for t in tracks.values() for lid in t.lane_ids}
    covered, uncovered, vacuous = [], [], []
    for lane in lanes.all_lanes():
        if not lane.interior:
            continue
        if lane.face_tags & {"annulus", "exterior"}:
            vacuous.append(lane.lane_id)
        if lane.lane_id in track_lanes:
            covered.append(lane.lane_id)
        else:
            uncovered.append(lane.lane_id)
    return LaneCoverage(tuple(covered), tuple(uncovered), tuple(vacuous))
