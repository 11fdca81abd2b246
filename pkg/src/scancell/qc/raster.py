"""8-bit grayscale raster with a physical pitch, stored as binary PGM.

The portable graymap (P5) container is used for all raster I/O; the
samples-per-inch figure rides in a header comment (`# ppi 1200`) so files
round-trip bit-exactly with their physical scale.
"""
from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from ..errors import AnalysisError, DomainError

_PPI_COMMENT = re.compile(rb"^#\s*ppi\s+([0-9.eE+-]+)\s*$")


class GrayRaster:
    """Row-major 8-bit intensities (0 black, 255 white) plus pitch."""

    __slots__ = ("pixels", "ppi")

    def __init__(self, pixels: np.ndarray, ppi: float):
        array = np.asarray(pixels)
        if array.ndim != 2:
            raise DomainError(f"raster must be 2-D, got shape {array.shape}")
        if array.dtype != np.uint8:
            raise DomainError(f"raster must be uint8, got {array.dtype}")
        if not ppi > 0:
            raise DomainError("ppi must be positive")
        self.pixels = array
        self.ppi = float(ppi)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def pitch_um(self) -> float:
        """Pixel pitch in micrometres."""
        return 25_400.0 / self.ppi

    def px_per_mm(self) -> float:
        return self.ppi / 25.4

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GrayRaster):
            return NotImplemented
        return self.ppi == other.ppi and np.array_equal(self.pixels, other.pixels)

    def __repr__(self) -> str:
        return f"GrayRaster({self.width}x{self.height} @ {self.ppi:g} ppi)"

    def to_pgm_bytes(self) -> bytes:
        header = f"P5\n# ppi {self.ppi:g}\n{self.width} {self.height}\n255\n"
        return header.encode("ascii") + self.pixels.tobytes()

    @classmethod
    def from_pgm_bytes(cls, data: bytes, ppi: float | None = None) -> "GrayRaster":
        tokens: list[bytes] = []
        pos = 0
        found_ppi = None
        while len(tokens) < 4:
            if pos >= len(data):
                raise AnalysisError("truncated PGM header")
            ch = data[pos : pos + 1]
            if ch == b"#":
                end = data.find(b"\n", pos)
                if end < 0:
                    raise AnalysisError("unterminated PGM comment")
                match = _PPI_COMMENT.match(data[pos:end])
                if match:
                    found_ppi = float(match.group(1))
                pos = end + 1
            elif ch.isspace():
                pos += 1
            else:
                end = pos
                while end < len(data) and not data[end : end + 1].isspace():
                    end += 1
                tokens.append(data[pos:end])
                pos = end
        if tokens[0] != b"P5":
            raise AnalysisError(f"not a binary PGM (magic {tokens[0]!r})")
        width, height, maxval = (int(t) for t in tokens[1:4])
        if maxval != 255:
            raise AnalysisError(f"only 8-bit graymaps are supported, maxval {maxval}")
        pos += 1  # single whitespace after maxval
        expected = width * height
        raw = data[pos : pos + expected]
        if len(raw) != expected:
            raise AnalysisError("PGM pixel data shorter than header promises")
        pixels = np.frombuffer(raw, dtype=np.uint8).reshape(height, width)
        resolved = ppi if ppi is not None else found_ppi
        if resolved is None:
            raise AnalysisError("PGM carries no ppi comment; pass ppi explicitly")
        return cls(pixels.copy(), resolved)

    def save(self, path: str | Path) -> None:
        Path(path).write_bytes(self.to_pgm_bytes())

    @classmethod
    def load(cls, path: str | Path, ppi: float | None = None) -> "GrayRaster":
        return cls.from_pgm_bytes(Path(path).read_bytes(), ppi)


def gaussian_blur(image: np.ndarray, sigma: float) -> np.ndarray:
    """Separable Gaussian blur on a float image, kernel truncated at 3 sigma."""
    if sigma <= 0:
        return image
    radius = max(1, int(np.ceil(3.0 * sigma)))
    offsets = np.arange(-radius, radius + 1)
    kernel = np.exp(-0.5 * (offsets / sigma) ** 2)
    kernel /= kernel.sum()
    return _convolve_axis(_convolve_axis(image, kernel, axis=1), kernel, axis=0)


def _convolve_axis(image: np.ndarray, kernel: np.ndarray, axis: int) -> np.ndarray:
    radius = len(kernel) // 2
    pad = [(0, 0), (0, 0)]
    pad[axis] = (radius, radius)
    padded = np.pad(image, pad, mode="edge")
    out = np.zeros_like(image, dtype=np.float64)
    for i, weight in enumerate(kernel):
        if axis == 1:
            out += weight * padded[:, i : i + image.shape[1]]
        else:
            out += weight * padded[i : i + image.shape[0], :]
    return out


def add_noise(image: np.ndarray, sigma: float, seed: int) -> np.ndarray:
    """Additive Gaussian noise on a float image."""
    if sigma <= 0:
        return image
    rng = np.random.default_rng(seed)
    return image + rng.normal(0.0, sigma, size=image.shape)


def quantize(image: np.ndarray) -> np.ndarray:
    """Round and clip a float image to uint8."""
    return np.clip(np.rint(image), 0, 255).astype(np.uint8)
