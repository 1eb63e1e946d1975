import pytest

from scarfkit.model import (
    AOIInstance,
    Box,
    GazeSample,
    Recording,
    Sphere,
    aoi_center,
    validate_recording,
)


def make_sample(t, direction=(0.0, 0.0, 1.0), valid=True):
    return GazeSample(t, (0.0, 0.0, 0.0), direction, valid)


def make_aoi(instance_id="a1", label="cup", confidence=0.9, t0=0, t1=1000):
    return AOIInstance(instance_id, label, Box((0, 0, 1), (1, 1, 2)), confidence, False, t0, t1)


class TestAoiCenter:
    def test_box_midpoint(self):
        assert aoi_center(Box((0, 0, 0), (2, 2, 2))) == (1, 1, 1)

    def test_sphere_identity(self):
        assert aoi_center(Sphere((3, 4, 5), 1)) == (3, 4, 5)

    def test_box_with_flat_axis(self):
        assert aoi_center(Box((-1, 0, 2), (1, 4, 2))) == (0, 2, 2)


class TestValidateRecording:
    def test_well_formed(self):
        rec = Recording((make_sample(0), make_sample(33)), (make_aoi(),))
        assert validate_recording(rec) == []

    def test_non_unit_direction(self):
        rec = Recording((make_sample(0, direction=(0, 0, 2)),), ())
        issues = validate_recording(rec)
        assert [i.code for i in issues] == ["NonUnitDirection"]
        assert issues[0].index == 0

    def test_confidence_out_of_range(self):
        rec = Recording((make_sample(0),), (make_aoi(confidence=1.3),))
        assert "ConfidenceOutOfRange" in [i.code for i in validate_recording(rec)]

    def test_non_monotonic_timestamps(self):
        rec = Recording((make_sample(10), make_sample(10)), ())
        assert "NonMonotonicTimestamp" in [i.code for i in validate_recording(rec)]

    def test_duplicate_instance_id(self):
        rec = Recording((make_sample(0),), (make_aoi("x"), make_aoi("x")))
        assert "DuplicateInstanceId" in [i.code for i in validate_recording(rec)]

    def test_span_outside_recording(self):
        rec = Recording((make_sample(0), make_sample(33)), (make_aoi(t0=5000, t1=6000),))
        assert "SpanOutsideRecording" in [i.code for i in validate_recording(rec)]

    def test_invalid_sample_direction_not_checked(self):
        rec = Recording((make_sample(0, direction=(0, 0, 0), valid=False),), ())
        assert validate_recording(rec) == []

    def test_pure(self):
        rec = Recording((make_sample(0, direction=(0, 0, 2)),), (make_aoi(confidence=2.0),))
        assert validate_recording(rec) == validate_recording(rec)


class TestRecordingTimeline:
    def test_duration_includes_trailing_period(self):
        rec = Recording((make_sample(0), make_sample(20), make_sample(40)), ())
        assert rec.nominal_period_ms() == 20
        assert rec.duration_ms() == 60

    def test_single_sample(self):
        rec = Recording((make_sample(5),), ())
        assert rec.duration_ms() == 1

    def test_labels_first_appearance_order(self):
        rec = Recording(
            (make_sample(0),),
            (make_aoi("a", "cup"), make_aoi("b", "bottle"), make_aoi("c", "cup")),
        )
        assert rec.labels() == ["cup", "bottle"]
