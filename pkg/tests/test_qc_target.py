import numpy as np
import pytest

from scancell.errors import AnalysisError, DomainError
from scancell.qc import (
    CalibrationGeometry,
    Distortions,
    GrayRaster,
    ResolutionGroup,
    TargetLayout,
    analyze_target,
    crop_to_border,
    default_geometry,
    find_print_box,
    measure_scale_px,
    render_print_scan,
    render_target,
    smallest_resolvable_um,
    wedge_level,
    wedge_tones,
)

GEOM = default_geometry()
GROUP_STEP = 2.0 ** (1.0 / 6.0)


@pytest.fixture(scope="module")
def target_1200():
    return render_target(GEOM, 1200)


@pytest.fixture(scope="module")
def layout_1200():
    return TargetLayout.compute(GEOM, 1200)


class TestGeometry:
    def test_default_groups_descend_geometrically(self):
        widths = [g.line_width_um for g in GEOM.groups]
        assert widths[0] == 500.0
        assert min(widths) >= 10.0
        for a, b in zip(widths, widths[1:]):
            assert a / b == pytest.approx(GROUP_STEP, rel=1e-9)

    def test_wedge_segment_count_fixed(self):
        with pytest.raises(DomainError):
            CalibrationGeometry(wedge_segments=20)

    def test_group_widths_must_decrease(self):
        with pytest.raises(DomainError):
            CalibrationGeometry(
                groups=(ResolutionGroup(100, 5), ResolutionGroup(100, 5))
            )

    def test_degenerate_ppi_scale_length(self):
        assert TargetLayout.compute(GEOM, 1).expected_scale_px == pytest.approx(6.0)

    def test_oversized_raster_rejected(self):
        with pytest.raises(DomainError, match="raster limit"):
            render_target(GEOM, 6000)


class TestRender:
    def test_deterministic_given_seed(self):
        noisy = Distortions(noise_sigma=2.0)
        a = render_target(GEOM, 300, noisy, seed=5)
        b = render_target(GEOM, 300, noisy, seed=5)
        c = render_target(GEOM, 300, noisy, seed=6)
        assert a == b
        assert a != c

    def test_canvas_size(self, target_1200):
        assert target_1200.width == round(250 / 25.4 * 1200)
        assert target_1200.height == round(25 / 25.4 * 1200)


class TestMeasureScale:
    def test_undistorted_1200(self, target_1200):
        result = measure_scale_px(target_1200)
        assert result.expected_px == 7200
        assert abs(result.length_px - 7200) <= 1
        assert result.tolerance_px == pytest.approx(0.001 * 7200 + 1)
        assert result.passed

    def test_injected_scale_error_fails(self):
        raster = render_target(GEOM, 1200, Distortions(scale_error_fraction=0.002))
        result = measure_scale_px(raster)
        assert result.length_px == pytest.approx(7214.4, abs=1.0)
        assert not result.passed

    def test_blank_raster_is_an_error(self):
        blank = GrayRaster(np.full((600, 600), 255, dtype=np.uint8), 600)
        with pytest.raises(AnalysisError):
            measure_scale_px(blank)


class TestWedge:
    def test_undistorted_recovers_generator_levels(self, target_1200, layout_1200):
        tones = wedge_tones(
            target_1200, layout_1200.wedge_first_centroid, layout_1200.wedge_last_centroid
        )
        assert tones == tuple(wedge_level(k) for k in range(21))

    def test_equal_steps_by_construction(self):
        levels = [wedge_level(k) for k in range(21)]
        assert levels[0] == 0 and levels[-1] == 255
        assert levels == sorted(levels)

    def test_noisy_wedge_stays_close_and_monotone(self, layout_1200):
        raster = render_target(GEOM, 1200, Distortions(noise_sigma=2.0), seed=3)
        tones = wedge_tones(
            raster, layout_1200.wedge_first_centroid, layout_1200.wedge_last_centroid
        )
        reference = [wedge_level(k) for k in range(21)]
        assert all(abs(t - r) <= 3 for t, r in zip(tones, reference))
        assert all(a <= b for a, b in zip(tones, tones[1:]))

    def test_coincident_centroids_rejected(self, target_1200):
        with pytest.raises(DomainError, match="coincide"):
            wedge_tones(target_1200, (100, 100), (100, 100))

    def test_out_of_bounds_centroid_rejected(self, target_1200):
        with pytest.raises(DomainError, match="outside"):
            wedge_tones(target_1200, (-3, 10), (50, 10))


class TestResolutionTarget:
    def test_limit_within_one_group_step_of_nyquist_pair(self, target_1200):
        smallest = smallest_resolvable_um(target_1200, GEOM)
        ratio = smallest / (2 * target_1200.pitch_um)
        assert 1 / GROUP_STEP <= ratio <= GROUP_STEP

    def test_non_increasing_in_ppi(self):
        values = [
            smallest_resolvable_um(render_target(GEOM, ppi), GEOM)
            for ppi in (300, 600, 1200)
        ]
        assert values == sorted(values, reverse=True)

    def test_coarse_only_geometry_returns_finest_group(self):
        # every group at least 10x the pixel pitch: all count
        geom = CalibrationGeometry(
            groups=tuple(ResolutionGroup(w, 5) for w in (2000.0, 1500.0, 1000.0))
        )
        raster = render_target(geom, 300)
        assert smallest_resolvable_um(raster, geom) == 1000.0

    def test_fully_blurred_raster_is_an_error(self):
        raster = render_target(GEOM, 300, Distortions(blur_radius_px=40.0))
        with pytest.raises(AnalysisError, match="no resolution group"):
            smallest_resolvable_um(raster, GEOM)


class TestCrop:
    def test_border_geometry_at_300_ppi(self):
        raster = render_print_scan(300)
        cropped = crop_to_border(raster)
        print_px = round(228.6 / 25.4 * 300)
        border = round(5 * 300 / 25.4)
        assert cropped.width == print_px + 2 * border
        assert cropped.height == print_px + 2 * border

    def test_all_white_raster_identity(self):
        white = GrayRaster(np.full((40, 60), 255, dtype=np.uint8), 300)
        cropped = crop_to_border(white)
        assert cropped == white

    def test_all_dark_raster_is_an_error(self):
        dark = GrayRaster(np.full((40, 60), 5, dtype=np.uint8), 300)
        with pytest.raises(AnalysisError, match="no light print region"):
            crop_to_border(dark)

    def test_flush_edge_clamps(self):
        pixels = np.full((200, 200), 10, dtype=np.uint8)
        pixels[0:120, 0:120] = 220  # print touching top-left corner
        raster = GrayRaster(pixels, 300)
        cropped = crop_to_border(raster)
        border = round(5 * 300 / 25.4)
        assert cropped.width == 120 + border
        assert cropped.height == 120 + border

    def test_print_box_detection(self):
        pixels = np.full((100, 150), 12, dtype=np.uint8)
        pixels[20:70, 30:110] = 210
        box = find_print_box(GrayRaster(pixels, 300))
        assert box == (30, 20, 110, 70)


class TestAnalyzeTarget:
    def test_full_report(self, target_1200):
        report = analyze_target(target_1200)
        assert report.scale_verdict
        assert report.wedge_monotone
        assert len(report.wedge_values) == 21
        assert report.smallest_resolvable_um >= target_1200.pitch_um
        assert report.crop_box == (0, 0, target_1200.width, target_1200.height)

    def test_report_serialization(self, target_1200):
        data = analyze_target(target_1200).to_json_dict()
        assert data["scale_verdict"] == "pass"
        assert len(data["wedge_values"]) == 21
