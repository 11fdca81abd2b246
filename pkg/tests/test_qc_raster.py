import numpy as np
import pytest

from scancell.errors import AnalysisError, DomainError
from scancell.qc import GrayRaster
from scancell.qc.raster import add_noise, gaussian_blur, quantize


def checkerboard(w=8, h=6):
    grid = (np.indices((h, w)).sum(axis=0) % 2) * 255
    return grid.astype(np.uint8)


class TestGrayRaster:
    def test_pgm_round_trip_bit_exact(self, tmp_path):
        raster = GrayRaster(checkerboard(), ppi=600)
        path = tmp_path / "board.pgm"
        raster.save(path)
        loaded = GrayRaster.load(path)
        assert loaded == raster
        assert loaded.ppi == 600
        assert path.read_bytes() == loaded.to_pgm_bytes()

    def test_ppi_comment_in_header(self):
        data = GrayRaster(checkerboard(), ppi=1200).to_pgm_bytes()
        assert data.startswith(b"P5\n# ppi 1200\n8 6\n255\n")

    def test_missing_ppi_requires_argument(self):
        plain = b"P5\n2 2\n255\n" + bytes([0, 255, 255, 0])
        with pytest.raises(AnalysisError, match="ppi"):
            GrayRaster.from_pgm_bytes(plain)
        raster = GrayRaster.from_pgm_bytes(plain, ppi=300)
        assert raster.width == 2 and raster.ppi == 300

    def test_rejects_wrong_shape_and_dtype(self):
        with pytest.raises(DomainError):
            GrayRaster(np.zeros((2, 2, 3), dtype=np.uint8), 300)
        with pytest.raises(DomainError):
            GrayRaster(np.zeros((2, 2), dtype=np.float32), 300)
        with pytest.raises(DomainError):
            GrayRaster(checkerboard(), 0)

    def test_rejects_16_bit_pgm(self):
        data = b"P5\n1 1\n65535\n" + bytes([1, 0])
        with pytest.raises(AnalysisError, match="8-bit"):
            GrayRaster.from_pgm_bytes(data, ppi=300)

    def test_truncated_payload(self):
        data = b"P5\n4 4\n255\n" + bytes(3)
        with pytest.raises(AnalysisError, match="shorter"):
            GrayRaster.from_pgm_bytes(data, ppi=300)

    def test_pitch(self):
        assert GrayRaster(checkerboard(), 1200).pitch_um == pytest.approx(21.1667, abs=1e-3)


class TestFilters:
    def test_blur_preserves_constant_regions(self):
        image = np.full((20, 20), 200.0)
        assert np.allclose(gaussian_blur(image, 0.8), 200.0)

    def test_blur_softens_edges(self):
        image = np.zeros((10, 20))
        image[:, 10:] = 255.0
        blurred = gaussian_blur(image, 1.0)
        assert 0 < blurred[5, 10] < 255

    def test_noise_deterministic_per_seed(self):
        image = np.full((5, 5), 128.0)
        a = add_noise(image, 2.0, seed=9)
        b = add_noise(image, 2.0, seed=9)
        c = add_noise(image, 2.0, seed=10)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_quantize_clips(self):
        image = np.array([[-5.0, 300.0, 127.4]])
        assert quantize(image).tolist() == [[0, 255, 127]]
