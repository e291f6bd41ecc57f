import enum
from typing import List, NamedTuple, Sequence, Union

import numpy as np

from .exceptions import ChannelError, DimensionError, InvalidImageError

SUPPORTED_CHANNELS = (1, 3)


class Direction(enum.Enum):
    FORWARD = "forward"
    INVERSE = "inverse"


class Level(enum.Enum):
    FULL = "full"
    BASIC = "basic"


class Axis(enum.Enum):
    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"


class StageKind(enum.Enum):
    IDENTITY = "identity"
    ROW_SHIFT = "row_shift"
    COL_SHIFT = "col_shift"
    ARNOLD = "arnold"
    DISTRIBUTE = "distribute"


class ReportFormat(enum.Enum):
    TEXT = "text"
    STRUCTURED = "structured"


class Command(enum.Enum):
    ENCRYPT = "encrypt"
    DECRYPT = "decrypt"
    ANALYZE = "analyze"
    EXPERIMENTS = "experiments"
    KEYSPACE = "keyspace"


class PixelCoord(NamedTuple):
    row: int
    col: int


class Image:
    """Rectangular raster of 8-bit samples with 1 (grayscale) or 3 (RGB) channels.

    Samples are held as a read-only ``(height, width, channels)`` uint8 array in
    row-major order, so the flattened array is the file byte order of a P5/P6
    payload. Instances never change once built.
    """

    def __init__(self, pixels: Union[np.ndarray, Sequence]):
        array = np.asarray(pixels)
        if array.ndim == 2:
            array = array[:, :, np.newaxis]
        if array.ndim != 3:
            raise DimensionError(f"Expected a 2-D or 3-D sample array, got {array.ndim} dimensions")

        height, width, channels = array.shape
        if height < 1 or width < 1:
            raise DimensionError(f"Image must be at least 1x1, got {width}x{height}")
        if channels not in SUPPORTED_CHANNELS:
            raise ChannelError(f"Unsupported channel count {channels}")

        if array.dtype != np.uint8:
            if not np.issubdtype(array.dtype, np.integer):
                raise InvalidImageError(f"Samples must be integers, got {array.dtype}")
            if array.min() < 0 or array.max() > 255:
                raise InvalidImageError("Samples must lie in [0, 255]")

        self._pixels = np.array(array, dtype=np.uint8, copy=True)
        self._pixels.setflags(write=False)

    @classmethod
    def from_samples(cls, width: int, height: int, channels: int, samples) -> "Image":
        """Build an image from a flat row-major sample sequence"""
        if isinstance(samples, (bytes, bytearray, memoryview)):
            flat = np.frombuffer(bytes(samples), dtype=np.uint8)
        else:
            flat = np.asarray(samples)
        if width < 1 or height < 1:
            raise DimensionError(f"Image must be at least 1x1, got {width}x{height}")
        if channels not in SUPPORTED_CHANNELS:
            raise ChannelError(f"Unsupported channel count {channels}")
        if flat.size != width * height * channels:
            raise DimensionError(
                f"Expected {width * height * channels} samples for {width}x{height}x{channels}, got {flat.size}"
            )
        return cls(flat.reshape(height, width, channels))

    @property
    def width(self) -> int:
        return self._pixels.shape[1]

    @property
    def height(self) -> int:
        return self._pixels.shape[0]

    @property
    def channels(self) -> int:
        return self._pixels.shape[2]

    @property
    def pixels(self) -> np.ndarray:
        return self._pixels

    @property
    def samples(self) -> np.ndarray:
        return self._pixels.reshape(-1)

    @property
    def plane(self) -> np.ndarray:
        """The (height, width) sample plane of a single-channel image"""
        if self.channels != 1:
            raise ChannelError(f"Operation needs a single-channel image, got {self.channels} channels")
        return self._pixels[:, :, 0]

    @property
    def size(self) -> int:
        return self.width * self.height

    def sample_at(self, coord: PixelCoord, channel: int = 0) -> int:
        """Get one sample, checking the coordinate bounds"""
        if not (0 <= coord.row < self.height and 0 <= coord.col < self.width):
            raise DimensionError(f"{coord} is outside a {self.width}x{self.height} image")
        return int(self._pixels[coord.row, coord.col, channel])

    def to_bytes(self) -> bytes:
        return self._pixels.tobytes()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Image):
            return NotImplemented
        return self._pixels.shape == other._pixels.shape and np.array_equal(self._pixels, other._pixels)

    __hash__ = None

    def __repr__(self) -> str:
        return f"Image(width={self.width}, height={self.height}, channels={self.channels})"


def split_channels(image: Image) -> List[Image]:
    """Split an image into one grayscale image per channel"""
    if image.channels == 1:
        return [image]
    return [Image(image.pixels[:, :, channel]) for channel in range(image.channels)]


def merge_channels(images: Sequence[Image]) -> Image:
    """Stack 1 or 3 equally sized grayscale images into one image"""
    if len(images) not in SUPPORTED_CHANNELS:
        raise ChannelError(f"Cannot merge {len(images)} channels")
    if any(image.channels != 1 for image in images):
        raise ChannelError("Only single-channel images can be merged")
    shapes = {(image.height, image.width) for image in images}
    if len(shapes) != 1:
        raise DimensionError(f"Channel sizes differ: {sorted(shapes)}")
    if len(images) == 1:
        return images[0]
    return Image(np.stack([image.plane for image in images], axis=2))
