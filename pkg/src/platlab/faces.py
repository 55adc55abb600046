"""Face enumeration for arrangements of polyline chains.

The arrangements this package meets are almost intersection-free: chains
only touch at shared endpoints (nodes), so faces can be walked with the
standard rotation trick, next = clockwise-neighbour of the reversed
half-edge, which traverses every face boundary with the interior on the
left.  Counterclockwise cycles bound faces; clockwise cycles are holes and
get attached to the smallest containing counterclockwise cycle, which also
yields the annulus detection the census needs.

Chains carry full polyline geometry, so cycles know their signed area,
their polygon, and their axis crossings (queries for on-axis points such as
marked points reduce to a parity count of boundary crossings).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateSubdivision


@dataclass(frozen=True)
class Chain:
    """Polyline edge between two nodes (node_a at pts[0], node_b at pts[-1]).

    Closed loops use node_a == node_b and repeat the anchor, so pts[-1]
    equals pts[0].
    """

    cid: int
    node_a: int
    node_b: int
    pts: np.ndarray
    closed: bool = False

    def direction_from(self, node_end: str) -> np.ndarray:
        if node_end == "a":
            return self.pts[1] - self.pts[0]
        return self.pts[-2] - self.pts[-1]


@dataclass(frozen=True)
class Cycle:
    halves: tuple[tuple[int, bool], ...]  # (chain id, forward?)
    area: float
    polygon: np.ndarray
    axis_xs: np.ndarray  # sorted axis-crossing abscissae of the boundary

    def contains_axis_point(self, x: float) -> bool:
        return int(np.searchsorted(self.axis_xs, x)) % 2 == 1

    def contains_point(self, p) -> bool:
        return bool(points_in_polygon(self.polygon, np.asarray([p], dtype=float))[0])


@dataclass(frozen=True)
class Face:
    outer: Cycle | None  # None marks the unbounded face
    holes: tuple[Cycle, ...]

    @property
    def is_annulus(self) -> bool:
        return self.outer is not None and len(self.holes) == 1

    @property
    def boundary_count(self) -> int:
        return (1 if self.outer is not None else 0) + len(self.holes)

    def contains_axis_point(self, x: float) -> bool:
        if self.outer is not None and not self.outer.contains_axis_point(x):
            return False
        if self.outer is None:
            return not any(h.contains_axis_point(x) for h in self.holes)
        return not any(h.contains_axis_point(x) for h in self.holes)

    def contains_point(self, p) -> bool:
        if self.outer is not None and not self.outer.contains_point(p):
            return False
        return not any(h.contains_point(p) for h in self.holes)


def points_in_polygon(polygon: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Even-odd containment of points in a closed polygon (vectorized over
    polygon edges, looped over the handful of query points)."""
    x0, y0 = polygon[:, 0], polygon[:, 1]
    x1, y1 = np.roll(x0, -1), np.roll(y0, -1)
    dy = y1 - y0
    ok = dy != 0
    out = np.zeros(len(points), dtype=bool)
    with np.errstate(divide="ignore", invalid="ignore"):
        for k, (qx, qy) in enumerate(points):
            cond = ((y0 > qy) != (y1 > qy)) & ok
            xint = x0 + (qy - y0) / np.where(ok, dy, 1.0) * (x1 - x0)
            out[k] = bool(np.count_nonzero(cond & (qx < xint)) % 2)
    return out


def polygon_axis_crossings(polygon: np.ndarray) -> np.ndarray:
    y0 = polygon[:, 1]
    y1 = np.roll(y0, -1)
    s0 = np.where(y0 == 0.0, 1e-300, y0)
    s1 = np.where(y1 == 0.0, 1e-300, y1)
    idx = np.nonzero((s0 > 0) != (s1 > 0))[0]
    x0 = polygon[idx, 0]
    x1 = np.roll(polygon[:, 0], -1)[idx]
    frac = s0[idx] / (s0[idx] - s1[idx])
    return np.sort(x0 + frac * (x1 - x0))


def _shoelace(polygon: np.ndarray) -> float:
    x, y = polygon[:, 0], polygon[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def _face_side_probe(polygon: np.ndarray, offset: float = 1e-7) -> np.ndarray:
    """A point just inside the face a directed boundary cycle borders
    (interiors lie on the left of the traversal)."""
    k = int(np.argmin(polygon[:, 0]))
    p = polygon[k]
    d = polygon[(k + 1) % len(polygon)] - p
    n = math.hypot(d[0], d[1])
    if n == 0:
        raise DegenerateSubdivision("zero-length boundary segment")
    return p + offset * np.array([-d[1], d[0]]) / n


class Arrangement:
    """Faces of a set of chains meeting only at shared nodes."""

    def __init__(self, nodes: dict[int, np.ndarray], chains: list[Chain]):
        self.nodes = nodes
        self.chains = {c.cid: c for c in chains}
        self._build()

    def _build(self):
        # Outgoing half-edges per node, then sort by departure angle.
        outgoing: dict[int, list[tuple[int, bool]]] = {n: [] for n in self.nodes}
        for c in self.chains.values():
            if c.closed:
                outgoing[c.node_a].append((c.cid, True))
                outgoing[c.node_a].append((c.cid, False))
            else:
                outgoing[c.node_a].append((c.cid, True))
                outgoing[c.node_b].append((c.cid, False))

        def angle(node: int, half: tuple[int, bool]) -> float:
            cid, fwd = half
            d = self.chains[cid].direction_from("a" if fwd else "b")
            return math.atan2(d[1], d[0])

        self._rot: dict[int, list[tuple[int, bool]]] = {}
        for n, halves in outgoing.items():
            angles = [angle(n, h) for h in halves]
            if len(set(angles)) != len(angles):
                raise DegenerateSubdivision(f"coincident edge directions at node {n}")
            self._rot[n] = [h for _, h in sorted(zip(angles, halves))]

        # next(half) = clockwise neighbour of the reversed half at its head
        def next_half(half: tuple[int, bool]) -> tuple[int, bool]:
            cid, fwd = half
            chain = self.chains[cid]
            head = chain.node_b if fwd else chain.node_a
            twin = (cid, not fwd)
            ring = self._rot[head]
            i = ring.index(twin)
            return ring[(i - 1) % len(ring)]

        seen: set[tuple[int, bool]] = set()
        cycles: list[Cycle] = []
        for n, halves in outgoing.items():
            for h0 in halves:
                if h0 in seen:
                    continue
                cyc = []
                h = h0
                while h not in seen:
                    seen.add(h)
                    cyc.append(h)
                    h = next_half(h)
                polygon = self._cycle_polygon(cyc)
                cycles.append(
                    Cycle(
                        halves=tuple(cyc),
                        area=_shoelace(polygon),
                        polygon=polygon,
                        axis_xs=polygon_axis_crossings(polygon),
                    )
                )
        self.cycles = cycles

        # Holes only arise between connected components of the linework: a
        # component's outer boundary is its unique most-negative cycle, and
        # it punches a hole in whichever other component's face contains it.
        # Containment is tested with a component vertex, which sits at
        # macroscopic distance from every other component.
        comp = {cid: cid for cid in self.chains}

        def cfind(x: int) -> int:
            while comp[x] != x:
                comp[x] = comp[comp[x]]
                x = comp[x]
            return x

        by_node: dict[int, list[int]] = {}
        for c in self.chains.values():
            by_node.setdefault(c.node_a, []).append(c.cid)
            by_node.setdefault(c.node_b, []).append(c.cid)
        for cids in by_node.values():
            for other in cids[1:]:
                comp[cfind(cids[0])] = cfind(other)

        comp_of_cycle = [cfind(cyc.halves[0][0]) for cyc in cycles]
        components = sorted(set(comp_of_cycle))
        outer_of_comp: dict[int, int] = {}
        for k in components:
            members = [i for i, c in enumerate(comp_of_cycle) if c == k]
            outer_of_comp[k] = min(members, key=lambda i: cycles[i].area)

        positive = [i for i, cyc in enumerate(cycles) if cyc.area > 0]
        holes_of: dict[int, list[Cycle]] = {i: [] for i in positive}
        unbounded_holes: list[Cycle] = []
        for k in components:
            outer = cycles[outer_of_comp[k]]
            probe = outer.polygon[0]
            best = None
            for i in positive:
                if comp_of_cycle[i] == k:
                    continue
                if cycles[i].contains_point(probe):
                    if best is None or cycles[i].area < cycles[best].area:
                        best = i
            if best is None:
                unbounded_holes.append(outer)
            else:
                holes_of[best].append(outer)
        faces = [Face(outer=None, holes=tuple(unbounded_holes))]
        for i in positive:
            faces.append(Face(outer=cycles[i], holes=tuple(holes_of[i])))
        self.faces = faces

    def _cycle_polygon(self, halves) -> np.ndarray:
        parts = []
        for cid, fwd in halves:
            pts = self.chains[cid].pts
            seg = pts if fwd else pts[::-1]
            parts.append(seg[:-1])
        return np.vstack(parts)

    # -- queries --------------------------------------------------------

    def face_of_axis_point(self, x: float) -> int:
        hits = [
            i
            for i, f in enumerate(self.faces)
            if f.outer is not None and f.contains_axis_point(x)
        ]
        if len(hits) > 1:
            hits.sort(key=lambda i: abs(self.faces[i].outer.area))
        if hits:
            return hits[0]
        return 0

    def face_of_point(self, p) -> int:
        hits = [
            i
            for i, f in enumerate(self.faces)
            if f.outer is not None and f.contains_point(p)
        ]
        if len(hits) > 1:
            hits.sort(key=lambda i: abs(self.faces[i].outer.area))
        if hits:
            return hits[0]
        return 0
