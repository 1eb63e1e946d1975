import json

import pytest

from scarfkit.ingest import (
    GAZE_HEADER,
    Detection,
    MissingHeaderError,
    parse_detections,
    parse_gaze_csv,
    synchronize,
    write_detections,
    write_gaze_csv,
)
from scarfkit.model import Box, Sphere


def det_line(**overrides):
    obj = {
        "timestamp_ms": 0,
        "instance_id": "bottle-1",
        "label": "bottle",
        "confidence": 0.9,
        "virtual": False,
        "shape": {"type": "aabb", "min": [0, 0, 1], "max": [1, 1, 2]},
    }
    obj.update(overrides)
    return json.dumps(obj)


class TestParseGazeCsv:
    def test_single_valid_row(self):
        samples, issues = parse_gaze_csv(GAZE_HEADER + "\n0,1,0,0,0,0,0,1\n")
        assert issues == []
        assert len(samples) == 1
        assert samples[0].direction == (0.0, 0.0, 1.0)
        assert samples[0].valid

    def test_invalid_row_keeps_timestamp(self):
        samples, issues = parse_gaze_csv(GAZE_HEADER + "\n42,0,0,0,0,0,0,0\n")
        assert issues == []
        assert samples[0].timestamp_ms == 42
        assert not samples[0].valid
        assert samples[0].direction == (0.0, 0.0, 0.0)

    def test_short_row_is_issue_not_abort(self):
        samples, issues = parse_gaze_csv(GAZE_HEADER + "\n0,1,0,0,0,0,1\n10,1,0,0,0,0,0,1\n")
        assert len(samples) == 1
        assert [i.code for i in issues] == ["RowParse"]

    def test_missing_header_fatal(self):
        with pytest.raises(MissingHeaderError):
            parse_gaze_csv("0,1,0,0,0,0,0,1\n")

    def test_near_unit_direction_normalized(self):
        samples, issues = parse_gaze_csv(GAZE_HEADER + "\n0,1,0,0,0,0,0,1.0005\n")
        assert issues == []
        assert samples[0].direction == (0.0, 0.0, 1.0)

    def test_far_from_unit_flagged(self):
        samples, issues = parse_gaze_csv(GAZE_HEADER + "\n0,1,0,0,0,0,0,2\n")
        assert [i.code for i in issues] == ["NonUnitDirection"]
        assert samples[0].direction == (0.0, 0.0, 2.0)

    def test_round_trip_byte_identical(self):
        text = GAZE_HEADER + "\n0,1,0.1,-0.2,1.5,0,0,1\n17,0,0,0,0,0,0,0\n33,1,0.25,0,0,0.707106781,0,0.707106781\n"
        samples, issues = parse_gaze_csv(text)
        assert issues == []
        assert write_gaze_csv(samples) == text
        # and the canonical writer is a fixed point
        samples2, _ = parse_gaze_csv(write_gaze_csv(samples))
        assert write_gaze_csv(samples2) == text


class TestParseDetections:
    def test_single_aabb(self):
        dets, issues = parse_detections(det_line() + "\n")
        assert issues == []
        assert dets[0].shape == Box((0, 0, 1), (1, 1, 2))

    def test_sphere(self):
        line = det_line(shape={"type": "sphere", "center": [0, 0, 2], "radius": 0.5})
        dets, _ = parse_detections(line + "\n")
        assert dets[0].shape == Sphere((0, 0, 2), 0.5)

    def test_confidence_out_of_range_is_warning(self):
        dets, issues = parse_detections(det_line(confidence=1.2) + "\n")
        assert [i.code for i in issues] == ["ConfidenceOutOfRange"]
        assert len(dets) == 1  # kept; validation reports it downstream

    def test_unsupported_shape(self):
        dets, issues = parse_detections(det_line(shape={"type": "mesh"}) + "\n")
        assert dets == []
        assert [i.code for i in issues] == ["UnsupportedShape"]

    def test_bad_json_line(self):
        dets, issues = parse_detections("{not json\n" + det_line() + "\n")
        assert len(dets) == 1
        assert [i.code for i in issues] == ["LineParse"]

    def test_unknown_keys_ignored(self):
        obj = json.loads(det_line())
        obj["extra"] = {"nested": True}
        dets, issues = parse_detections(json.dumps(obj) + "\n")
        assert issues == []
        assert len(dets) == 1

    def test_write_parse_round_trip(self):
        dets, _ = parse_detections(det_line() + "\n")
        text = write_detections(dets)
        dets2, issues = parse_detections(text)
        assert issues == []
        assert dets2 == dets
        assert write_detections(dets2) == text


def make_det(t, instance_id="bottle-1", confidence=0.9):
    return Detection(t, instance_id, "bottle", confidence, False, Box((0, 0, 1), (1, 1, 2)))


class TestSynchronize:
    def test_merge_within_window(self):
        rec = synchronize([], [make_det(0), make_det(100)], window_ms=100)
        assert len(rec.aois) == 1
        assert rec.aois[0].active_span == (0, 100)
        assert rec.aois[0].confidence_series == ((0, 0.9), (100, 0.9))

    def test_gap_splits_with_suffix(self):
        rec = synchronize([], [make_det(0), make_det(500)], window_ms=50)
        assert [a.instance_id for a in rec.aois] == ["bottle-1", "bottle-1#2"]

    def test_empty_detections(self):
        rec = synchronize([], [], window_ms=50)
        assert rec.aois == ()

    def test_permutation_invariant_within_timestamp(self):
        a = make_det(0, "a")
        b = make_det(0, "b")
        rec1 = synchronize([], [a, b], window_ms=50)
        rec2 = synchronize([], [b, a], window_ms=50)
        assert rec1 == rec2

    def test_confidence_mean(self):
        rec = synchronize([], [make_det(0, confidence=0.8), make_det(50, confidence=1.0)])
        assert rec.aois[0].confidence == pytest.approx(0.9)
