"""Tests for CSV and SVG export of distortion profiles."""
import math

import pytest

from foliation.analysis_service import DistortionProfile, DistortionSample
from foliation.export_service import ProfileExporter, get_exporter
from foliation.hgeom import LogScalar


@pytest.fixture
def profile():
    samples = (
        DistortionSample(0.0, LogScalar.zero(), "vertex", n=None, position=0.0),
        DistortionSample(2.5, LogScalar.from_value(3.0), "pair 0", n=0, position=0.1),
        DistortionSample(4.0, LogScalar.from_log(40.0), "pair 1", n=1, position=0.05),
        DistortionSample(5.5, LogScalar.from_log(900.0), "pair 2", n=2, position=0.025),
    )
    return DistortionProfile(samples, "h2 leaf oracle=tower n_max=2", 0.95, 1.05)


class TestCsv:

    def test_columns(self, profile):
        text = ProfileExporter().to_csv(profile)
        lines = text.splitlines()
        assert lines[0] == "n,theta,d_ambient,log_d_leaf,saturated"
        assert len(lines) == 5
        assert "\r" not in text

    def test_rows(self, profile):
        frame = ProfileExporter().profile_frame(profile)
        assert frame["n"].isna().iloc[0]
        assert frame["log_d_leaf"].iloc[1] == pytest.approx(math.log(3.0))
        assert frame["log_d_leaf"].iloc[2] == 40.0
        assert list(frame["saturated"]) == [False, False, False, True]

    def test_writes_file(self, profile, tmp_path):
        path = tmp_path / "distortion.csv"
        text = ProfileExporter().to_csv(profile, path)
        assert path.read_text() == text

    def test_deterministic(self, profile):
        assert ProfileExporter().to_csv(profile) == ProfileExporter().to_csv(profile)


class TestSvg:

    def test_is_svg(self, profile):
        data = ProfileExporter().to_svg(profile)
        assert b"<svg" in data
        assert b"<dc:date>" not in data

    def test_byte_identical_across_calls(self, profile):
        exporter = ProfileExporter()
        assert exporter.to_svg(profile) == exporter.to_svg(profile)

    def test_only_saturated(self, tmp_path):
        samples = (DistortionSample(3.0, LogScalar.from_log(800.0), "far", n=4, position=0.01),)
        profile = DistortionProfile(samples, "saturated only", 0.9, 1.1)
        path = tmp_path / "chart.svg"
        data = ProfileExporter().to_svg(profile, path)
        assert path.read_bytes() == data


def test_global_exporter():
    assert get_exporter() is get_exporter()
