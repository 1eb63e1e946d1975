import math

import pytest

from scarfkit.mapping import MappingConfig
from scarfkit.model import AOIInstance, Box, GazeSample, Recording
from scarfkit.scarf import (
    ScarfModel,
    Segment,
    SubSegment,
    UnknownLabelError,
    assign_palette,
    build,
    confidence_series,
    filter_labels,
    merge_runs,
    white_space_fraction,
)


def box_at(center, half=(0.1, 0.1, 0.1)):
    return Box(
        tuple(center[i] - half[i] for i in range(3)),
        tuple(center[i] + half[i] for i in range(3)),
    )


def make_recording():
    """Three 10 ms samples: cup+bottle in line, then cup only, then nothing."""
    cup = AOIInstance(
        "cup-1", "cup", box_at((0.0, 0.0, 1.0)), 0.9, False, 0, 100,
        confidence_series=((0, 0.9), (50, 0.9)),
    )
    bottle = AOIInstance(
        "bottle-1", "bottle", box_at((0.0, 0.0, 2.0)), 0.8, False, 0, 100,
        confidence_series=((0, 0.8), (50, 0.8)),
    )
    up = (0.0, 1.0, 0.0)
    fwd = (0.0, 0.0, 1.0)
    samples = (
        GazeSample(0, (0.0, 0.0, 0.0), fwd, True),
        GazeSample(10, (0.0, 0.0, 1.5), fwd, True),  # past the cup: bottle only
        GazeSample(20, (0.0, 0.0, 0.0), up, True),  # hits nothing
    )
    return Recording(samples, (cup, bottle), {})


class TestBuild:
    def test_standard_single_full_height(self):
        model = build(make_recording(), "standard")
        seg = model.segments[0]
        assert len(seg.subsegments) == 1
        assert seg.subsegments[0].label == "cup"
        assert seg.subsegments[0].height == 1.0

    def test_depth_equal_heights_near_bottom(self):
        model = build(make_recording(), "depth")
        seg = model.segments[0]
        assert [s.label for s in seg.subsegments] == ["cup", "bottle"]
        assert [s.depth_rank for s in seg.subsegments] == [0, 1]
        assert all(s.height == pytest.approx(0.5) for s in seg.subsegments)

    def test_nn_heights_are_probabilities(self):
        model = build(make_recording(), "nn")
        seg = model.segments[0]
        # both centers on the ray: limit mode splits mass equally
        assert sum(s.height for s in seg.subsegments) == pytest.approx(1.0, abs=1e-9)
        assert [s.depth_rank for s in seg.subsegments] == list(range(len(seg.subsegments)))

    def test_white_segment_for_no_mapping(self):
        model = build(make_recording(), "standard")
        assert model.segments[2].subsegments == ()

    def test_tiling_exact(self):
        rec = make_recording()
        for variant in ("standard", "depth", "nn"):
            model = build(rec, variant)
            assert model.segments[0].t_start_ms == 0
            for a, b in zip(model.segments, model.segments[1:]):
                assert a.t_end_ms == b.t_start_ms
            total = sum(s.t_end_ms - s.t_start_ms for s in model.segments)
            assert total == rec.duration_ms()

    def test_standard_matches_depth_bottom(self):
        rec = make_recording()
        std = build(rec, "standard")
        dep = build(rec, "depth")
        for s1, s2 in zip(std.segments, dep.segments):
            if s1.subsegments:
                assert s1.subsegments[0].label == s2.subsegments[0].label
            else:
                assert s2.subsegments == ()

    def test_unknown_variant(self):
        with pytest.raises(ValueError):
            build(make_recording(), "fancy")

    def test_height_normalization_every_nonwhite_segment(self):
        rec = make_recording()
        for variant in ("standard", "depth", "nn"):
            for seg in build(rec, variant).segments:
                if seg.subsegments:
                    assert sum(s.height for s in seg.subsegments) == pytest.approx(1.0, abs=1e-9)


def seg(t0, t1, subs, conf=None):
    return Segment(t0, t1, tuple(subs), conf or {})


def sub(instance_id, height=1.0, rank=0, label=None):
    return SubSegment(instance_id, label or instance_id, height, rank)


class TestMergeRuns:
    def test_adjacent_identical_merge(self):
        model = ScarfModel(
            "standard",
            (seg(0, 10, [sub("a")]), seg(10, 20, [sub("a")]), seg(20, 30, [sub("b")])),
            {},
        )
        merged = merge_runs(model)
        assert [(s.t_start_ms, s.t_end_ms) for s in merged.segments] == [(0, 20), (20, 30)]

    def test_different_heights_not_merged(self):
        model = ScarfModel(
            "nn",
            (
                seg(0, 10, [sub("a", 0.75), sub("b", 0.25, 1)]),
                seg(10, 20, [sub("a", 0.6), sub("b", 0.4, 1)]),
            ),
            {},
        )
        assert len(merge_runs(model).segments) == 2

    def test_all_white_collapses(self):
        model = ScarfModel("standard", (seg(0, 10, []), seg(10, 20, []), seg(20, 30, [])), {})
        merged = merge_runs(model)
        assert len(merged.segments) == 1
        assert merged.segments[0].subsegments == ()

    def test_idempotent_and_duration_preserving(self):
        model = build(make_recording(), "depth")
        m1 = merge_runs(model)
        assert merge_runs(m1) == m1
        assert sum(s.t_end_ms - s.t_start_ms for s in m1.segments) == sum(
            s.t_end_ms - s.t_start_ms for s in model.segments
        )

    def test_confidence_duration_weighted(self):
        model = ScarfModel(
            "standard",
            (seg(0, 10, [sub("a")], {"a": 0.9}), seg(10, 30, [sub("a")], {"a": 0.6})),
            {},
        )
        merged = merge_runs(model)
        assert merged.segments[0].mean_confidence_by_label["a"] == pytest.approx(0.7)


class TestFilterLabels:
    def test_filter_then_build_equals_build_without(self):
        rec = make_recording()
        filtered, warnings = filter_labels(rec, {"bottle"})
        assert warnings == []
        bare = Recording(rec.samples, tuple(a for a in rec.aois if a.label != "bottle"), rec.meta)
        for variant in ("standard", "depth", "nn"):
            assert build(filtered, variant) == build(bare, variant)

    def test_unknown_label_warns(self):
        rec = make_recording()
        filtered, warnings = filter_labels(rec, {"ghost"})
        assert filtered.aois == rec.aois
        assert len(warnings) == 1

    def test_exclude_all_gives_white_plot(self):
        rec = make_recording()
        filtered, _ = filter_labels(rec, {"cup", "bottle"})
        model = build(filtered, "standard")
        assert all(not s.subsegments for s in model.segments)
        assert white_space_fraction(model) == 1.0

    def test_nn_renormalizes_after_filter(self):
        rec = make_recording()
        filtered, _ = filter_labels(rec, {"bottle"})
        model = build(filtered, "nn")
        seg0 = model.segments[0]
        assert [s.label for s in seg0.subsegments] == ["cup"]
        assert seg0.subsegments[0].height == pytest.approx(1.0)


class TestAssignPalette:
    def test_order_determined(self):
        pal = assign_palette(["cup", "bottle"])
        assert list(pal) == ["cup", "bottle"]
        assert pal["cup"] != pal["bottle"]

    def test_order_sensitive(self):
        assert assign_palette(["cup", "bottle"])["cup"] == assign_palette(["bottle", "cup"])["bottle"]

    def test_thirteenth_label_shifts_lightness(self):
        labels = [f"l{i}" for i in range(13)]
        pal = assign_palette(labels)
        assert len(set(pal.values())) == 13
        # 13th reuses hue slot 0 but must differ from it
        assert pal["l12"] != pal["l0"]

    def test_deterministic(self):
        labels = [f"l{i}" for i in range(20)]
        assert assign_palette(labels) == assign_palette(labels)


class TestConfidenceSeries:
    def test_equal_spacing_mean(self):
        rec = make_recording()
        points, mean = confidence_series(rec, "cup", 0, 100)
        assert points == [(0, 0.9), (50, 0.9)]
        assert mean == pytest.approx(0.9)

    def test_duration_weighted_mean(self):
        aoi = AOIInstance(
            "a", "a", box_at((0, 0, 1)), 0.85, False, 0, 20,
            confidence_series=((0, 0.9), (10, 0.8)),
        )
        rec = Recording((GazeSample(0, (0, 0, 0), (0, 0, 1), True),), (aoi,), {})
        _, mean = confidence_series(rec, "a", 0, 20)
        assert mean == pytest.approx(0.85)

    def test_unknown_label(self):
        with pytest.raises(UnknownLabelError):
            confidence_series(make_recording(), "ghost", 0, 100)

    def test_window_restricts_points(self):
        rec = make_recording()
        points, _ = confidence_series(rec, "cup", 40, 100)
        assert points == [(50, 0.9)]
