"""Plat-position links from twist grids.

A link is framed by vertical cylinders over circles c^j centered at
(j + 1/2, 0); twist regions sit over alternate circles, b per odd level and
b-1 per even level, and each region twists exactly two strands through t*pi.
Levels are enumerated bottom to top and only levels 2..h carry twist data.
Closing the braid with semicircular caps (bottom pairs (2k-1, 2k), top caps
depending on the parity of h) produces the link.

Everything here is exact integer combinatorics: strand permutations, link
components, the projected crossing diagram, alternation and splitness, and
the membership test for the even-middle family of 2-twisted (4,4) specs.
All values are immutable after construction; functions are pure.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .errors import ShapeError, TwistednessError

LEFT_POINTS = frozenset({1, 2, 3, 4})


def row_length(i: int, b: int) -> int:
    """Regions in level i: b when i is odd, b-1 when i is even."""
    return b if i % 2 == 1 else b - 1


def region_columns(i: int, j: int) -> tuple[int, int]:
    """Strand columns twisted by region (i, j): (2j, 2j+1) on even levels,
    (2j-1, 2j) on odd levels."""
    return (2 * j, 2 * j + 1) if i % 2 == 0 else (2 * j - 1, 2 * j)


@dataclass(frozen=True)
class TwistSpec:
    """A validated twist grid {t_i^j} for an (h, b)-plat link."""

    h: int
    b: int
    rows: tuple[tuple[int, ...], ...]  # rows[i-2] holds level i, i = 2..h

    def t(self, i: int, j: int) -> int:
        return self.rows[i - 2][j - 1]

    @property
    def twists(self) -> dict[tuple[int, int], int]:
        return {
            (i, j): self.t(i, j)
            for i in range(2, self.h + 1)
            for j in range(1, row_length(i, self.b) + 1)
        }

    def regions(self) -> Iterator[tuple[int, int]]:
        for i in range(2, self.h + 1):
            for j in range(1, row_length(i, self.b) + 1):
                yield (i, j)

    @property
    def twistedness(self) -> int:
        """Largest n such that the spec is n-twisted (0 if some t is 0)."""
        return min(abs(t) for t in self.twists.values())

    def is_n_twisted(self, n: int) -> bool:
        return self.twistedness >= n

    @property
    def sign_pattern(self) -> bool:
        """For h = 4: levels 2 and 4 all positive, level 3 all negative."""
        if self.h != 4:
            return False
        return (
            all(t > 0 for t in self.rows[0])
            and all(t < 0 for t in self.rows[1])
            and all(t > 0 for t in self.rows[2])
        )

    @property
    def family_member(self) -> bool:
        """2-twisted sign-pattern (4, b) spec with t_2^2 and t_4^2 even."""
        return (
            self.is_n_twisted(2)
            and self.sign_pattern
            and self.t(2, 2) % 2 == 0
            and self.t(4, 2) % 2 == 0
        )

    def crossing_count(self) -> int:
        return sum(abs(t) for t in self.twists.values())

    def to_json(self) -> dict:
        return {
            "h": self.h,
            "b": self.b,
            "rows": {str(i): list(self.rows[i - 2]) for i in range(2, self.h + 1)},
        }


def validate_spec(rows, n: int = 0, h: int | None = None, b: int | None = None) -> TwistSpec:
    """Build a TwistSpec from a raw grid, enforcing shape and twistedness.

    `rows` may be a mapping {level: [t...]} (levels 2..h, keys int or str)
    or a plain sequence of rows for levels 2..h.  Pass n = 0 ("raw mode")
    to allow zero twists; any n >= 1 rejects magnitudes below n.
    """
    if isinstance(rows, Mapping):
        try:
            levels = sorted(int(k) for k in rows.keys())
        except (TypeError, ValueError) as exc:
            raise ShapeError(f"row keys must be integer levels: {exc}") from exc
        if not levels:
            raise ShapeError("empty twist grid")
        if levels != list(range(2, levels[-1] + 1)):
            raise ShapeError(f"row levels must be consecutive 2..h, got {levels}")
        ordered = [tuple(int(t) for t in rows[k]) for k in sorted(rows, key=lambda k: int(k))]
        h_found = levels[-1]
    else:
        ordered = [tuple(int(t) for t in r) for r in rows]
        if not ordered:
            raise ShapeError("empty twist grid")
        h_found = len(ordered) + 1
    if h is not None and h != h_found:
        raise ShapeError(f"grid has h={h_found}, expected h={h}")
    h = h_found
    if h < 2:
        raise ShapeError(f"need h >= 2, got {h}")

    # Infer b from the first row and check every row against the parity rule.
    b_found = len(ordered[0]) + (1 if 2 % 2 == 0 else 0)
    b_found = len(ordered[0]) + 1  # level 2 is even: b-1 entries
    if b is not None and b != b_found:
        raise ShapeError(f"grid has b={b_found}, expected b={b}")
    b = b_found
    if b < 3:
        raise ShapeError(f"need b >= 3, got {b}")
    for i in range(2, h + 1):
        want = row_length(i, b)
        got = len(ordered[i - 2])
        if got != want:
            raise ShapeError(f"level {i} has {got} entries, parity rule wants {want}")

    spec = TwistSpec(h=h, b=b, rows=tuple(ordered))
    if n >= 1 and not spec.is_n_twisted(n):
        bad = [(i, j) for (i, j), t in spec.twists.items() if abs(t) < n]
        raise TwistednessError(f"|t| < {n} at regions {bad}")
    return spec


def spec_from_json(doc: str | dict, n: int = 0) -> TwistSpec:
    if isinstance(doc, str):
        doc = json.loads(doc)
    return validate_spec(doc["rows"], n=n, h=doc.get("h"), b=doc.get("b"))


# ---------------------------------------------------------------------------
# Permutation and components
# ---------------------------------------------------------------------------


def strand_permutation(spec: TwistSpec) -> tuple[int, ...]:
    """Bottom column -> top column map; entry k-1 is the image of column k.

    A region transposes its two columns iff its twist number is odd (each
    twisting arc turns through t*pi), and levels compose bottom to top.
    """
    where = list(range(2 * spec.b + 1))  # where[c] = current column of bottom strand c
    occupant = list(range(2 * spec.b + 1))  # occupant[col] = bottom strand there
    for i, j in spec.regions():
        if spec.t(i, j) % 2 != 0:
            c1, c2 = region_columns(i, j)
            s1, s2 = occupant[c1], occupant[c2]
            occupant[c1], occupant[c2] = s2, s1
            where[s1], where[s2] = c2, c1
    return tuple(where[1:])


def _cap_pairs(b: int, h: int, top: bool) -> dict[int, int]:
    """Cap partner map at the bottom (top=False) or top of the braid."""
    pairs: dict[int, int] = {}
    if not top or h % 2 == 0:
        for k in range(1, b + 1):
            pairs[2 * k - 1] = 2 * k
            pairs[2 * k] = 2 * k - 1
    else:
        for k in range(1, b):
            pairs[2 * k] = 2 * k + 1
            pairs[2 * k + 1] = 2 * k
        pairs[1] = 2 * b
        pairs[2 * b] = 1
    return pairs


def component_partition(spec: TwistSpec) -> tuple[tuple[int, ...], ...]:
    """Partition of the 2b bottom marked points into link components.

    Follows the closed traversal bottom cap -> braid -> top cap -> braid,
    i.e. cycles of the composite permutation.
    """
    perm = strand_permutation(spec)
    top_of = {c: perm[c - 1] for c in range(1, 2 * spec.b + 1)}
    bottom_of = {v: k for k, v in top_of.items()}
    top_cap = _cap_pairs(spec.b, spec.h, top=True)
    bottom_cap = _cap_pairs(spec.b, spec.h, top=False)

    seen: set[int] = set()
    components: list[tuple[int, ...]] = []
    for start in range(1, 2 * spec.b + 1):
        if start in seen:
            continue
        comp = set()
        c = start
        while c not in comp:
            comp.add(c)
            c = bottom_cap[bottom_of[top_cap[top_of[c]]]]
        # The orbit above walks strand->strand two caps at a time; also pull
        # in each strand's own cap partner so the component is closed.
        closed = set(comp)
        for x in comp:
            closed.add(bottom_cap[x])
            closed.add(bottom_of[top_cap[top_of[x]]])
        seen |= closed
        components.append(tuple(sorted(closed)))
    return tuple(sorted(components))


# ---------------------------------------------------------------------------
# Projection diagram
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Crossing:
    region: tuple[int, int]
    index: int  # 1..|t| within the region, bottom to top
    sign: int  # sign of the region's twist number
    over: int  # bottom-column id of the over strand
    under: int


@dataclass(frozen=True)
class LinkDiagram:
    spec: TwistSpec
    crossings: tuple[Crossing, ...]
    partition: tuple[tuple[int, ...], ...]
    # per component: over/under booleans in traversal order
    passages: tuple[tuple[bool, ...], ...]
    # per component: crossing ids in the same traversal order
    passage_crossings: tuple[tuple[int, ...], ...]

    def component_of(self, point: int) -> int:
        for idx, comp in enumerate(self.partition):
            if point in comp:
                return idx
        raise ValueError(f"no component contains marked point {point}")


def build_diagram(spec: TwistSpec) -> LinkDiagram:
    """Project the plat braid to the (x, z) plane and record its crossings.

    Each region (i, j) contributes |t_i^j| same-sign crossings.  In a
    positive region the current left-column occupant passes over at every
    crossing (the strands swap each time, so over/under alternates along
    each strand); negative regions are mirrored.  This matches positive =
    counterclockwise ascent viewed from the -y side.
    """
    occupant = list(range(2 * spec.b + 1))
    crossings: list[Crossing] = []
    strand_passages: dict[int, list[tuple[int, bool]]] = {
        s: [] for s in range(1, 2 * spec.b + 1)
    }
    for i, j in spec.regions():
        t = spec.t(i, j)
        c1, c2 = region_columns(i, j)
        for k in range(abs(t)):
            left_over = t > 0
            s_left, s_right = occupant[c1], occupant[c2]
            over, under = (s_left, s_right) if left_over else (s_right, s_left)
            cid = len(crossings)
            crossings.append(Crossing((i, j), k + 1, 1 if t > 0 else -1, over, under))
            strand_passages[over].append((cid, True))
            strand_passages[under].append((cid, False))
            occupant[c1], occupant[c2] = s_right, s_left

    partition = component_partition(spec)
    perm = strand_permutation(spec)
    top_of = {c: perm[c - 1] for c in range(1, 2 * spec.b + 1)}
    bottom_of = {v: k for k, v in top_of.items()}
    top_cap = _cap_pairs(spec.b, spec.h, top=True)
    bottom_cap = _cap_pairs(spec.b, spec.h, top=False)

    passages: list[tuple[bool, ...]] = []
    passage_crossings: list[tuple[int, ...]] = []
    for comp in partition:
        flags: list[bool] = []
        ids: list[int] = []
        start = comp[0]
        c = start
        while True:
            # ascend strand c
            for cid, over in strand_passages[c]:
                ids.append(cid)
                flags.append(over)
            d = bottom_of[top_cap[top_of[c]]]
            # descend strand d (reverse order)
            for cid, over in reversed(strand_passages[d]):
                ids.append(cid)
                flags.append(over)
            c = bottom_cap[d]
            if c == start:
                break
        passages.append(tuple(flags))
        passage_crossings.append(tuple(ids))

    return LinkDiagram(
        spec=spec,
        crossings=tuple(crossings),
        partition=partition,
        passages=tuple(passages),
        passage_crossings=tuple(passage_crossings),
    )


def is_alternating(diagram: LinkDiagram) -> bool:
    """True iff over/under alternates cyclically along every component."""
    for flags in diagram.passages:
        n = len(flags)
        if n == 0:
            continue
        if n % 2 == 1:
            return False
        if any(flags[i] == flags[(i + 1) % n] for i in range(n)):
            return False
    return True


def is_split_diagram(diagram: LinkDiagram) -> bool:
    """True iff some components share no crossing with the others.

    The 4-valent projection graph is disconnected across link components
    exactly when a circle in the plane separates the diagram.
    """
    ncomp = len(diagram.partition)
    if ncomp <= 1:
        return False
    parent = list(range(ncomp))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for cr in diagram.crossings:
        a, b = diagram.component_of(cr.over), diagram.component_of(cr.under)
        parent[find(a)] = find(b)
    return len({find(i) for i in range(ncomp)}) > 1


# ---------------------------------------------------------------------------
# Family membership
# ---------------------------------------------------------------------------


def _subdiagram_reduced(diagram: LinkDiagram, comp_ids: set[int]) -> bool:
    """No crossing of the sub-diagram is a cut vertex of its 4-valent graph."""
    sub = [
        cid
        for cid, cr in enumerate(diagram.crossings)
        if diagram.component_of(cr.over) in comp_ids
        and diagram.component_of(cr.under) in comp_ids
    ]
    if not sub:
        return True
    # Arcs join crossings consecutive along a component traversal.
    edges: dict[int, set[int]] = {cid: set() for cid in sub}
    for comp_idx in comp_ids:
        ids = [c for c in diagram.passage_crossings[comp_idx] if c in edges]
        n = len(ids)
        for k in range(n):
            a, b = ids[k], ids[(k + 1) % n]
            if a != b:
                edges[a].add(b)
                edges[b].add(a)
    for removed in sub:
        others = [c for c in sub if c != removed]
        if len(others) <= 1:
            continue
        seen = {others[0]}
        stack = [others[0]]
        while stack:
            x = stack.pop()
            for y in edges[x]:
                if y != removed and y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != len(others):
            return False
    return True


@dataclass(frozen=True)
class FamilyReport:
    member: bool
    reasons: tuple[str, ...]
    components: int
    partition: tuple[tuple[int, ...], ...]
    left_right_separated: bool
    alternating: bool
    non_split: bool
    l1_points: tuple[int, ...]
    l1_components: int
    l1_crossings: int
    l1_reduced: bool
    l1_nontrivial_certificate: bool

    def to_json(self) -> dict:
        return {
            "member": self.member,
            "reasons": list(self.reasons),
            "components": self.components,
            "partition": [list(c) for c in self.partition],
            "left_right_separated": self.left_right_separated,
            "alternating": self.alternating,
            "non_split": self.non_split,
            "l1": {
                "points": list(self.l1_points),
                "components": self.l1_components,
                "crossings": self.l1_crossings,
                "reduced": self.l1_reduced,
                "nontrivial_certificate": self.l1_nontrivial_certificate,
            },
        }


def family_membership(spec: TwistSpec) -> FamilyReport:
    """Check family membership and collect nontriviality evidence.

    A member is 2-twisted, follows the (+, -, +) sign pattern, and has even
    t_2^2 and t_4^2.  For members the left sublink L1 (through marked points
    1..4) is separated from the right one, and its sub-diagram is a reduced
    alternating diagram; >= 8 crossings then certify a nontrivial 2-bridge
    knot whenever L1 is a knot, since reduced alternating diagrams realize
    the minimal crossing number.
    """
    reasons = []
    if not spec.is_n_twisted(2):
        reasons.append("not 2-twisted")
    if not spec.sign_pattern:
        reasons.append("sign pattern (+,-,+) fails")
    if spec.h == 4:
        if spec.t(2, 2) % 2 != 0:
            reasons.append("t_2^2 odd")
        if spec.t(4, 2) % 2 != 0:
            reasons.append("t_4^2 odd")

    diagram = build_diagram(spec)
    partition = diagram.partition
    l1_comp_ids = {
        idx for idx, comp in enumerate(partition) if set(comp) & LEFT_POINTS
    }
    l1_points = tuple(sorted(p for idx in l1_comp_ids for p in partition[idx]))
    separated = not (set(l1_points) & {2 * spec.b - 1, 2 * spec.b})
    l1_crossings = sum(
        1
        for cr in diagram.crossings
        if diagram.component_of(cr.over) in l1_comp_ids
        and diagram.component_of(cr.under) in l1_comp_ids
    )
    alternating = is_alternating(diagram)
    non_split = not is_split_diagram(diagram)
    reduced = _subdiagram_reduced(diagram, l1_comp_ids)
    certificate = (
        alternating and reduced and l1_crossings >= 8 and len(l1_comp_ids) == 1
    )
    return FamilyReport(
        member=not reasons,
        reasons=tuple(reasons),
        components=len(partition),
        partition=partition,
        left_right_separated=separated,
        alternating=alternating,
        non_split=non_split,
        l1_points=l1_points,
        l1_components=len(l1_comp_ids),
        l1_crossings=l1_crossings,
        l1_reduced=reduced,
        l1_nontrivial_certificate=certificate,
    )
