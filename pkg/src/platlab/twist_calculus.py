"""Symbolic transport of curves through composed half twists.

The transported curve is kept as a weighted link diagram: one base circle
plus bundles of parallel twist-loop copies.  A bundle added for loop (i, j)
carries weight n * |t_i^j| where n is the strand count through the loop's
disk just before that level, and passes under every earlier strand when
t_i^j > 0, over when t_i^j < 0.  Later bundles on the same loop nest inside
earlier ones, so concentric bundles never cross each other.

The combinatorics ride on half-integer circle centers: a circle centered at
c separates the punctures of exactly the disks centered at c - 1 and c + 1,
so strand counts through a disk are sums of bundle weights at the two
adjacent centers.  Intersection predictions against the axis intervals
(k, k+1) follow the same rule.

Everything is immutable; transports of distinct specs can run in parallel.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable

from .errors import AmbiguousOrder, UnresolvedDiagram
from .plat_model import TwistSpec, row_length
from .weights import ONE, Weight, compare, magnitude_grid

LOOP_RADIUS = 0.75


def loop_center(i: int, j: int) -> float:
    """x-coordinate of twist loop (i, j); its disk sits under region (i, j).

    Even levels use 2j + 1/2 (puncture pair 2j, 2j+1), odd levels 2j - 1/2
    (pair 2j-1, 2j).
    """
    return 2 * j + 0.5 if i % 2 == 0 else 2 * j - 0.5


def loop_punctures(i: int, j: int) -> tuple[int, int]:
    c = loop_center(i, j)
    return (int(c - 0.5), int(c + 0.5))


@dataclass(frozen=True)
class MarkedSphere:
    """Marked points, axis arcs, and twist-loop layout for bridge number b."""

    b: int
    h: int = 4

    @property
    def marked_points(self) -> tuple[int, ...]:
        return tuple(range(1, 2 * self.b + 1))

    def beta_arc(self, j: int) -> tuple[float, float]:
        """beta^j joins marked points (2j-1, 2j)."""
        return (2 * j - 1.0, 2.0 * j)

    def gamma_arc(self, j: int) -> tuple[float, float]:
        """gamma^j joins marked points (2j, 2j+1)."""
        return (2.0 * j, 2 * j + 1.0)

    def loops(self, level: int) -> list[tuple[int, int]]:
        return [(level, j) for j in range(1, row_length(level, self.b) + 1)]

    def all_loops(self) -> list[tuple[int, int]]:
        return [lp for i in range(2, self.h + 1) for lp in self.loops(i)]


@dataclass(frozen=True)
class Bundle:
    """A family of parallel circle copies in the weighted diagram."""

    loop: tuple  # (i, j) for twist loops, ("base", name) for the seed curve
    center: float
    weight: Weight
    passes_under: bool  # crossing flag against all strands present earlier
    order: int  # insertion index; later bundles' flags win at crossings


@dataclass(frozen=True)
class WeightedDiagram:
    b: int
    bundles: tuple[Bundle, ...]
    level: int  # highest level already applied (1 = just the base curve)
    pending: bool = False  # set only by hand-built test diagrams

    def weight_at(self, center: float) -> Weight:
        total = Weight.const(0)
        for bu in self.bundles:
            if abs(bu.center - center) < 1e-9:
                total = total + bu.weight
        return total


def base_diagram(b: int, punctures: tuple[int, int] | None = None, name: str = "seed") -> WeightedDiagram:
    """Weight-1 circle around a pair of adjacent marked points (default the
    rightmost bottom bridge pair (2b-1, 2b))."""
    if punctures is None:
        punctures = (2 * b - 1, 2 * b)
    if punctures[1] != punctures[0] + 1:
        raise ValueError("base circle must enclose an adjacent puncture pair")
    center = punctures[0] + 0.5
    base = Bundle(loop=("base", name), center=center, weight=ONE, passes_under=False, order=0)
    return WeightedDiagram(b=b, bundles=(base,), level=1)


def strands_through(diagram: WeightedDiagram, loop: tuple[int, int]) -> Weight:
    """Total weight of strands separating the two punctures of the loop's disk.

    Circles concentric with the disk enclose both punctures and contribute
    nothing; circles at the two adjacent centers each pass between the
    punctures once per copy; anything farther is disjoint.
    """
    if diagram.pending:
        raise UnresolvedDiagram("crossing resolution pending; strand counts undefined")
    c = loop_center(*loop)
    return diagram.weight_at(c - 1.0) + diagram.weight_at(c + 1.0)


def apply_level(
    diagram: WeightedDiagram, level: int, spec: TwistSpec, symbolic: bool = False
) -> WeightedDiagram:
    """Push the diagram up one level: composed half twists about the level's
    loops add n * |t| parallel copies per loop (n from the pre-level diagram,
    which is safe because same-level disks are disjoint)."""
    if diagram.pending:
        raise UnresolvedDiagram("crossing resolution pending; cannot apply level")
    if level != diagram.level + 1:
        raise ValueError(f"diagram is at level {diagram.level}, cannot apply level {level}")
    bundles = list(diagram.bundles)
    order = max(bu.order for bu in bundles) + 1
    for j in range(1, row_length(level, spec.b) + 1):
        t = spec.t(level, j)
        if t == 0:
            continue
        n = strands_through(diagram, (level, j))
        if not n:
            continue
        mag = Weight.magnitude(level, j) if symbolic else Weight.const(abs(t))
        bundles.append(
            Bundle(
                loop=(level, j),
                center=loop_center(level, j),
                weight=n * mag,
                passes_under=t > 0,
                order=order,
            )
        )
        order += 1
    return WeightedDiagram(b=diagram.b, bundles=tuple(bundles), level=level)


def transport(spec: TwistSpec, symbolic: bool = False, base: WeightedDiagram | None = None) -> WeightedDiagram:
    """Transport the seed circle through levels 2..h of the twist grid."""
    d = base if base is not None else base_diagram(spec.b)
    for level in range(d.level + 1, spec.h + 1):
        d = apply_level(d, level, spec, symbolic=symbolic)
    return d


# ---------------------------------------------------------------------------
# Crossing resolution
# ---------------------------------------------------------------------------


def crossing_relation(a: Bundle, bu: Bundle) -> bool:
    """True iff bundle `a` passes under bundle `bu` where they cross.

    The later-added bundle crossed everything already present with its own
    flag, so the flag of max(order) decides.
    """
    late, early = (a, bu) if a.order > bu.order else (bu, a)
    if late is a:
        return late.passes_under
    return not late.passes_under


@dataclass(frozen=True)
class Circle:
    """A merged concentric family of the resolved diagram."""

    center: float
    weight: Weight
    members: tuple[tuple, ...]  # loop ids merged into this family

    @property
    def punctures(self) -> tuple[int, int]:
        return (int(self.center - 0.5), int(self.center + 0.5))


@dataclass(frozen=True)
class CrossingRecord:
    left_center: float
    right_center: float
    site: str  # "upper" or "lower" intersection of the two circles
    over_weight: Weight
    under_weight: Weight
    reroute: Weight  # strands that turn along the smaller family
    pass_through: Weight  # |larger - smaller| strands that continue straight
    heavier_under: bool


@dataclass(frozen=True)
class ResolvedDiagram:
    b: int
    circles: tuple[Circle, ...]  # ordered left to right
    crossings: tuple[CrossingRecord, ...]
    merge_log: tuple[str, ...]
    merge_clean: bool = True

    def weight_at(self, center: float) -> Weight:
        total = Weight.const(0)
        for c in self.circles:
            if abs(c.center - center) < 1e-9:
                total = total + c.weight
        return total

    def interval_counts(self) -> dict[int, Weight]:
        """Predicted curve crossings with each open axis interval (k, k+1).

        A family centered at c crosses the axis once per copy in each of
        (c-1.5, c-0.5)'s integer interval (c-1.5 rounded: k = c-1.5) and
        (k = c+0.5); crossings between families happen off-axis, so
        smoothing never moves these counts.
        """
        out: dict[int, Weight] = {}
        for c in self.circles:
            for k in (int(c.center - 1.5), int(c.center + 0.5)):
                out[k] = out.get(k, Weight.const(0)) + c.weight
        return {k: w for k, w in sorted(out.items())}

    def beta_counts(self) -> dict[int, Weight]:
        """Predicted crossings with each beta arc (interval (2j-1, 2j))."""
        iv = self.interval_counts()
        return {j: iv.get(2 * j - 1, Weight.const(0)) for j in range(1, self.b + 1)}


def resolve_crossings(diagram: WeightedDiagram, lower_bound: int = 2) -> ResolvedDiagram:
    """Merge concentric bundles and rewrite every family crossing.

    Concentric bundles merge only when they cross every neighbour with the
    same flag (the simplification step of the level pipeline).  At each
    surviving crossing of families with weights (N, n), N > n, the n copies
    of the smaller family reroute along the branch dictated by the flag and
    N - n strands pass through; the record keeps both counts, which together
    conserve strand endpoints on any transversal arc.

    Symbolic weights are ordered over the box {magnitudes >= lower_bound};
    an undecidable comparison raises AmbiguousOrder rather than guessing.
    """
    if diagram.pending:
        raise UnresolvedDiagram("crossing resolution pending")
    by_center: dict[float, list[Bundle]] = {}
    for bu in diagram.bundles:
        by_center.setdefault(bu.center, []).append(bu)
    centers = sorted(by_center)

    def neighbours(center: float) -> list[Bundle]:
        out = []
        for c2 in centers:
            if abs(abs(c2 - center) - 1.0) < 1e-9:
                out.extend(by_center[c2])
        return out

    merge_log: list[str] = []
    circles: list[Circle] = []
    rep: dict[int, Bundle] = {}  # circle index -> representative bundle
    merge_clean = True
    for center in centers:
        group = sorted(by_center[center], key=lambda bu: bu.order)
        nbs = neighbours(center)
        consistent = all(
            crossing_relation(group[0], nb) == crossing_relation(bu, nb)
            for bu in group[1:]
            for nb in nbs
        )
        if consistent:
            total = Weight.const(0)
            for bu in group:
                total = total + bu.weight
            rep[len(circles)] = group[0]
            circles.append(
                Circle(center=center, weight=total, members=tuple(bu.loop for bu in group))
            )
            if len(group) > 1:
                merge_log.append(
                    f"x={center}: merged {[bu.loop for bu in group]} into weight {total}"
                )
        else:
            # Mixed crossing flags: the simplified single-family form does
            # not exist at this center, so keep nested circles separate.
            merge_clean = False
            merge_log.append(
                f"x={center}: bundles {[bu.loop for bu in group]} kept separate "
                "(crossing flags disagree)"
            )
            for bu in group:
                rep[len(circles)] = bu
                circles.append(Circle(center=center, weight=bu.weight, members=(bu.loop,)))

    records: list[CrossingRecord] = []
    for ia, a in enumerate(circles):
        for ib in range(ia + 1, len(circles)):
            b2 = circles[ib]
            if abs(b2.center - a.center - 1.0) > 1e-9:
                continue  # concentric or non-adjacent circles never cross
            a_under = crossing_relation(rep[ia], rep[ib])
            rel = compare(a.weight, b2.weight, lo=lower_bound)
            heavier, lighter = (a, b2) if rel == ">" else (b2, a)
            heavier_under = (heavier is a) == a_under
            over_w, under_w = (b2.weight, a.weight) if a_under else (a.weight, b2.weight)
            for site in ("upper", "lower"):
                records.append(
                    CrossingRecord(
                        left_center=a.center,
                        right_center=b2.center,
                        site=site,
                        over_weight=over_w,
                        under_weight=under_w,
                        reroute=lighter.weight,
                        pass_through=heavier.weight - lighter.weight,
                        heavier_under=heavier_under,
                    )
                )
    return ResolvedDiagram(
        b=diagram.b,
        circles=tuple(circles),
        crossings=tuple(records),
        merge_log=tuple(merge_log),
        merge_clean=merge_clean,
    )


# ---------------------------------------------------------------------------
# Summary
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LabyrinthSummary:
    """The four circle weights of the resolved seed transport, with the
    positivity and adjacent-comparison verdicts."""

    weights: tuple[Weight, ...]  # summed per center, left to right
    centers: tuple[float, ...]
    values: tuple[int, ...] | None  # evaluated at the spec when concrete
    positive: tuple[bool, ...]
    inequalities: tuple[bool, ...]  # w1>w2, w2<w3, w3>w4 for the (4,4) layout
    structure_ok: bool  # heavier strand passes under at every crossing
    merge_clean: bool = True

    @property
    def n(self) -> tuple[int, ...]:
        if self.values is None:
            raise ValueError("symbolic summary has no evaluated values")
        return self.values

    def to_json(self) -> dict:
        return {
            "centers": list(self.centers),
            "weights": [repr(w) for w in self.weights],
            "N": list(self.values) if self.values is not None else None,
            "positive": list(self.positive),
            "inequalities": {
                "N1>N2": self.inequalities[0],
                "N2<N3": self.inequalities[1],
                "N3>N4": self.inequalities[2],
            }
            if len(self.inequalities) == 3
            else list(self.inequalities),
            "structure_ok": self.structure_ok,
        }


def summary(resolved: ResolvedDiagram, spec: TwistSpec, symbolic: bool = False) -> LabyrinthSummary:
    """Evaluate circle weights and the comparison verdicts for a spec.

    For concrete specs verdicts are per-evaluation facts; for symbolic runs
    they hold over the whole box {magnitudes >= 2} or an AmbiguousOrder
    escapes to the caller.
    """
    per_center: dict[float, Weight] = {}
    for c in resolved.circles:
        per_center[c.center] = per_center.get(c.center, Weight.const(0)) + c.weight
    centers = tuple(sorted(per_center))
    weights = tuple(per_center[c] for c in centers)
    lo = max(spec.twistedness, 1) if not symbolic else 2
    if symbolic:
        values = None
        positive = tuple(w.sign_over(lo) == 1 for w in weights)
    else:
        mags = magnitude_grid(spec)
        values = tuple(w.evaluate(mags) for w in weights)
        positive = tuple(v > 0 for v in values)

    def gt(a: Weight, b: Weight) -> bool:
        if not symbolic:
            return a.evaluate(magnitude_grid(spec)) > b.evaluate(magnitude_grid(spec))
        return compare(a, b, lo=lo) == ">"

    ineqs = []
    for idx in range(len(weights) - 1):
        left, right = weights[idx], weights[idx + 1]
        # expected alternating pattern >, <, > ... starting with >
        ineqs.append(gt(left, right) if idx % 2 == 0 else gt(right, left))
    structure_ok = all(r.heavier_under for r in resolved.crossings)
    return LabyrinthSummary(
        weights=weights,
        centers=centers,
        values=values,
        positive=positive,
        inequalities=tuple(ineqs),
        structure_ok=structure_ok,
        merge_clean=resolved.merge_clean,
    )


def seed_summary(spec: TwistSpec, symbolic: bool = False) -> LabyrinthSummary:
    """Transport, resolve and summarize the seed circle for a spec."""
    lo = 2 if symbolic else max(spec.twistedness, 1)
    return summary(resolve_crossings(transport(spec, symbolic=symbolic), lower_bound=lo), spec, symbolic=symbolic)


def diagram_dump(diagram: WeightedDiagram) -> list[dict]:
    """JSON-stable bundle list for golden-file tests."""
    out = []
    for depth, bu in enumerate(sorted(diagram.bundles, key=lambda x: x.order)):
        out.append(
            {
                "loop": list(bu.loop) if isinstance(bu.loop[0], int) else list(bu.loop),
                "center": bu.center,
                "weight": repr(bu.weight),
                "passes_under": bu.passes_under,
                "depth": depth,
            }
        )
    return out
