import itertools

import pytest
from hypothesis import given, settings, strategies as st

from platlab.errors import ShapeError, TwistednessError
from platlab.plat_model import (
    build_diagram,
    component_partition,
    family_membership,
    is_alternating,
    is_split_diagram,
    region_columns,
    strand_permutation,
    validate_spec,
)

from conftest import sign_pattern_spec


def brute_permutation(spec):
    """Independent oracle: compose per-region transpositions bottom to top."""
    where = list(range(2 * spec.b + 1))
    for i in range(2, spec.h + 1):
        for j in range(1, (spec.b if i % 2 else spec.b - 1) + 1):
            if spec.t(i, j) % 2:
                c1, c2 = region_columns(i, j)
                for s in range(1, 2 * spec.b + 1):
                    if where[s] == c1:
                        where[s] = c2
                    elif where[s] == c2:
                        where[s] = c1
    return tuple(where[1:])


def grids(h=4, b=4, lo=-4, hi=4):
    return st.tuples(
        st.tuples(*[st.integers(lo, hi)] * (b - 1)),
        st.tuples(*[st.integers(lo, hi)] * b),
        st.tuples(*[st.integers(lo, hi)] * (b - 1)),
    )


class TestValidateSpec:
    def test_valid_family_spec(self, t2_spec):
        assert t2_spec.h == 4 and t2_spec.b == 4
        assert t2_spec.is_n_twisted(2)
        assert t2_spec.sign_pattern
        assert t2_spec.family_member

    def test_shape_error_wrong_row_length(self):
        with pytest.raises(ShapeError):
            validate_spec({"2": [2, 2, 2, 2], "3": [-2] * 4, "4": [2] * 3})

    def test_twistedness_error(self):
        with pytest.raises(TwistednessError):
            validate_spec({"2": [2, 1, 2], "3": [-2] * 4, "4": [2] * 3}, n=2)

    def test_raw_mode_allows_zero(self):
        spec = validate_spec({"2": [0, 0, 0], "3": [0] * 4, "4": [0] * 3}, n=0)
        assert spec.twistedness == 0

    def test_sign_pattern_flag_false(self):
        spec = sign_pattern_spec()
        rows = {"2": list(spec.rows[0]), "3": list(spec.rows[1]), "4": list(spec.rows[2])}
        rows["3"][0] = 2  # positive middle entry breaks the pattern
        bad = validate_spec(rows)
        assert not bad.sign_pattern and not bad.family_member

    def test_family_needs_even_middles(self):
        spec = sign_pattern_spec(m2=(2, 3, 2))
        assert spec.sign_pattern and not spec.family_member
        rep = family_membership(spec)
        assert "t_2^2 odd" in rep.reasons

    def test_json_roundtrip(self, t2_spec):
        from platlab.plat_model import spec_from_json

        assert spec_from_json(t2_spec.to_json()) == t2_spec


class TestPermutation:
    def test_all_even_is_identity(self, t2_spec):
        assert strand_permutation(t2_spec) == tuple(range(1, 9))

    def test_single_odd_region_transposes(self):
        spec = validate_spec({"2": [2, 2, 2], "3": [-3, -2, -2, -2], "4": [2, 2, 2]})
        perm = strand_permutation(spec)
        assert perm == (2, 1, 3, 4, 5, 6, 7, 8)

    @settings(max_examples=60, deadline=None)
    @given(grids())
    def test_matches_brute_composition(self, rows):
        spec = validate_spec({"2": rows[0], "3": rows[1], "4": rows[2]})
        assert strand_permutation(spec) == brute_permutation(spec)


class TestComponents:
    def test_all_even_four_components(self, t2_spec):
        assert component_partition(t2_spec) == ((1, 2), (3, 4), (5, 6), (7, 8))

    def test_odd_middle_spec_partition(self):
        spec = validate_spec({"2": [2, 2, 2], "3": [-3, -2, -2, -2], "4": [2, 2, 2]})
        assert component_partition(spec) == ((1, 2), (3, 4), (5, 6), (7, 8))

    def test_family_members_separate_ends(self):
        for m3 in itertools.product([2, 3], repeat=4):
            spec = sign_pattern_spec(m3=m3)
            parts = component_partition(spec)
            assert len(parts) >= 2
            left = next(p for p in parts if 1 in p)
            assert 7 not in left and 8 not in left

    @settings(max_examples=40, deadline=None)
    @given(grids(lo=-3, hi=3), st.integers(0, 9), st.integers(-1, 1))
    def test_partition_invariant_under_twist_shift_by_two(self, rows, which, delta):
        spec = validate_spec({"2": rows[0], "3": rows[1], "4": rows[2]})
        keys = sorted(spec.twists)
        i, j = keys[which % len(keys)]
        rows2 = [list(r) for r in spec.rows]
        rows2[i - 2][j - 1] += 2 * delta
        spec2 = validate_spec({"2": rows2[0], "3": rows2[1], "4": rows2[2]})
        assert component_partition(spec) == component_partition(spec2)


class TestDiagram:
    def test_crossing_count_is_magnitude_sum(self, t2_spec):
        assert len(build_diagram(t2_spec).crossings) == 20 == t2_spec.crossing_count()

    def test_region_contributes_magnitude_same_sign(self):
        spec = validate_spec({"2": [5, 2, 2], "3": [-2] * 4, "4": [2] * 3})
        d = build_diagram(spec)
        in_region = [c for c in d.crossings if c.region == (2, 1)]
        assert len(in_region) == 5
        assert {c.sign for c in in_region} == {1}

    def test_single_region_diagram_alternates(self):
        spec = validate_spec({"2": [3, 0, 0], "3": [0] * 4, "4": [0] * 3})
        assert is_alternating(build_diagram(spec))

    def test_sign_pattern_alternating_nonsplit(self, t2_spec):
        d = build_diagram(t2_spec)
        assert is_alternating(d)
        assert not is_split_diagram(d)

    def test_all_positive_matches_traversal_oracle(self):
        spec = validate_spec({"2": [2, 2, 2], "3": [2, 2, 2, 2], "4": [2, 2, 2]})
        d = build_diagram(spec)
        # strand walk over/under check, written out directly
        expected = all(
            all(f[i] != f[(i + 1) % len(f)] for i in range(len(f)))
            for f in d.passages
            if f
        )
        assert is_alternating(d) == expected

    def test_zero_twist_diagram_is_split(self):
        spec = validate_spec({"2": [0, 0, 0], "3": [0] * 4, "4": [0] * 3})
        assert is_split_diagram(build_diagram(spec))

    def test_components_chained_by_crossings_not_split(self):
        # every cap circle shares a crossing with its neighbour
        spec = validate_spec({"2": [2, 2, 2], "3": [0] * 4, "4": [0] * 3})
        assert not is_split_diagram(build_diagram(spec))

    def test_partially_joined_diagram_is_split(self):
        # circles (1,2)-(3,4) are clasped but (5,6) and (7,8) float free
        spec = validate_spec({"2": [2, 0, 0], "3": [0] * 4, "4": [0] * 3})
        assert is_split_diagram(build_diagram(spec))

    @settings(max_examples=40, deadline=None)
    @given(grids(lo=-3, hi=3))
    def test_crossing_count_always_matches(self, rows):
        spec = validate_spec({"2": rows[0], "3": rows[1], "4": rows[2]})
        assert len(build_diagram(spec).crossings) == spec.crossing_count()

    @settings(max_examples=30, deadline=None)
    @given(
        st.tuples(st.integers(1, 3), st.integers(1, 3), st.integers(1, 3)),
        st.tuples(st.integers(1, 3), st.integers(1, 3), st.integers(1, 3), st.integers(1, 3)),
        st.tuples(st.integers(1, 3), st.integers(1, 3), st.integers(1, 3)),
    )
    def test_sign_pattern_specs_alternating_nonsplit(self, m2, m3, m4):
        spec = sign_pattern_spec([x + 1 for x in m2], [x + 1 for x in m3], [x + 1 for x in m4])
        d = build_diagram(spec)
        assert is_alternating(d)
        assert not is_split_diagram(d)


class TestFamily:
    def test_t2_spec_report(self, t2_spec):
        rep = family_membership(t2_spec)
        assert rep.member
        assert rep.l1_crossings >= 8
        assert rep.alternating and rep.non_split
        assert rep.left_right_separated

    def test_larger_even_member(self):
        spec = sign_pattern_spec((4, 4, 4), (4, 4, 4, 4), (4, 4, 4))
        assert family_membership(spec).member

    def test_odd_middle_not_member(self):
        rep = family_membership(sign_pattern_spec(m2=(2, 3, 2)))
        assert not rep.member
