import logging
from functools import lru_cache

import numpy as np

from .exceptions import DimensionError, SizeMismatchError
from .models import Direction, Image, PixelCoord, StageKind
from .schemas import BlockGrid, Stage

logger = logging.getLogger(__name__)

# Safety bound for the brute-force period search
MAX_ARNOLD_PERIOD_SEARCH = 100000


class Permutation:
    """Bijection on pixel positions: forward[i] is the destination of source i"""

    def __init__(self, forward):
        forward = np.array(forward, dtype=np.int64, copy=True).reshape(-1)
        if not np.array_equal(np.sort(forward), np.arange(forward.size)):
            raise ValueError("forward table is not a bijection on [0, size)")
        forward.setflags(write=False)
        self._forward = forward

    @classmethod
    def identity(cls, size: int) -> "Permutation":
        return cls(np.arange(size))

    @property
    def forward(self) -> np.ndarray:
        return self._forward

    @property
    def size(self) -> int:
        return self._forward.size

    def inverse(self) -> "Permutation":
        backward = np.empty_like(self._forward)
        backward[self._forward] = np.arange(self.size)
        return Permutation(backward)

    def compose(self, then: "Permutation") -> "Permutation":
        """Permutation that applies self first and then `then`"""
        if then.size != self.size:
            raise SizeMismatchError(f"Cannot compose permutations of sizes {self.size} and {then.size}")
        return Permutation(then.forward[self._forward])

    def is_identity(self) -> bool:
        return bool(np.array_equal(self._forward, np.arange(self.size)))

    def apply(self, image: Image) -> Image:
        """Move every pixel (all channels together) to its destination"""
        if image.size != self.size:
            raise SizeMismatchError(f"Permutation of size {self.size} cannot act on {image.size} pixels")
        source = image.pixels.reshape(self.size, image.channels)
        moved = np.empty_like(source)
        moved[self._forward] = source
        return Image(moved.reshape(image.pixels.shape))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return np.array_equal(self._forward, other._forward)

    __hash__ = None

    def __repr__(self) -> str:
        return f"Permutation(size={self.size})"


def grid_for(image: Image, block: int) -> BlockGrid:
    """Block grid covering the image exactly"""
    return BlockGrid.for_shape(image.width, image.height, block)


def _check_grid(image: Image, grid: BlockGrid) -> None:
    if (grid.width, grid.height) != (image.width, image.height):
        raise DimensionError(
            f"Image size {image.width}x{image.height} is not covered by a "
            f"{grid.blocks_x}x{grid.blocks_y} grid of {grid.block}x{grid.block} blocks"
        )


def _sign(direction: Direction) -> int:
    return 1 if direction == Direction.FORWARD else -1


# Row / column shifts
def _row_displacements(plane: np.ndarray) -> np.ndarray:
    return plane.sum(axis=1, dtype=np.int64) % plane.shape[1]


def _col_displacements(plane: np.ndarray) -> np.ndarray:
    return plane.sum(axis=0, dtype=np.int64) % plane.shape[0]


def _shift_rows(target: np.ndarray, shifts: np.ndarray, direction: Direction) -> np.ndarray:
    width = target.shape[1]
    cols = (np.arange(width)[np.newaxis, :] + _sign(direction) * shifts[:, np.newaxis]) % width
    return np.take_along_axis(target, cols, axis=1)


def _shift_cols(target: np.ndarray, shifts: np.ndarray, direction: Direction) -> np.ndarray:
    height = target.shape[0]
    rows = (np.arange(height)[:, np.newaxis] + _sign(direction) * shifts[np.newaxis, :]) % height
    return np.take_along_axis(target, rows, axis=0)


# Block views
def _to_blocks(plane: np.ndarray, grid: BlockGrid) -> np.ndarray:
    """(n_blocks, pixels_per_block) view, both axes in raster order"""
    return (
        plane.reshape(grid.blocks_y, grid.block, grid.blocks_x, grid.block)
        .transpose(0, 2, 1, 3)
        .reshape(grid.n_blocks, grid.pixels_per_block)
    )


def _from_blocks(blocks: np.ndarray, grid: BlockGrid) -> np.ndarray:
    return (
        blocks.reshape(grid.blocks_y, grid.blocks_x, grid.block, grid.block)
        .transpose(0, 2, 1, 3)
        .reshape(grid.height, grid.width)
    )


# Arnold cat map
def _arnold_step(x, y, block: int, direction: Direction):
    if direction == Direction.FORWARD:
        return (x + y) % block, (x + 2 * y) % block
    return (2 * x - y) % block, (-x + y) % block


def arnold_period(block: int) -> int:
    """Smallest p > 0 such that p forward steps fix every point of the block"""
    x0, y0 = np.divmod(np.arange(block * block), block)
    x, y = x0, y0
    for period in range(1, MAX_ARNOLD_PERIOD_SEARCH + 1):
        x, y = _arnold_step(x, y, block, Direction.FORWARD)
        if np.array_equal(x, x0) and np.array_equal(y, y0):
            return period
    raise RuntimeError(f"No Arnold period found for block {block}")


@lru_cache(maxsize=32)
def _arnold_destinations(block: int, iterations: int) -> np.ndarray:
    """Local destination index of every local source index after forward iterations"""
    x, y = np.divmod(np.arange(block * block), block)
    for _ in range(iterations % arnold_period(block)):
        x, y = _arnold_step(x, y, block, Direction.FORWARD)
    destinations = x * block + y
    destinations.setflags(write=False)
    return destinations


def arnold_point(coord: PixelCoord, block: int, iterations: int = 1,
                 direction: Direction = Direction.FORWARD) -> PixelCoord:
    """Where one local block coordinate (row, col) lands"""
    x, y = coord.row, coord.col
    for _ in range(iterations):
        x, y = _arnold_step(x, y, block, direction)
    return PixelCoord(int(x), int(y))


def _arnold_blocks(target: np.ndarray, grid: BlockGrid, iterations: int, direction: Direction) -> np.ndarray:
    blocks = _to_blocks(target, grid)
    destinations = _arnold_destinations(grid.block, iterations)
    if direction == Direction.FORWARD:
        moved = np.empty_like(blocks)
        moved[:, destinations] = blocks
    else:
        moved = blocks[:, destinations]
    return _from_blocks(moved, grid)


# Uniform cross-block distribution
def _distribute_blocks(target: np.ndarray, grid: BlockGrid, direction: Direction) -> np.ndarray:
    # Block-linear index g = b * P + p goes to p * n + b: a transpose of the
    # (n, P) block matrix, read back as (n, P).
    blocks = _to_blocks(target, grid)
    n, pixels = grid.n_blocks, grid.pixels_per_block
    if direction == Direction.FORWARD:
        moved = blocks.T.reshape(n, pixels)
    else:
        moved = blocks.reshape(pixels, n).T
    return _from_blocks(np.ascontiguousarray(moved), grid)


def _move(stage: Stage, plane: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Apply a stage's position map, derived from plane, to target"""
    height, width = plane.shape
    if stage.kind == StageKind.IDENTITY:
        return target.copy()
    if stage.kind == StageKind.ROW_SHIFT:
        return _shift_rows(target, _row_displacements(plane), stage.direction)
    if stage.kind == StageKind.COL_SHIFT:
        return _shift_cols(target, _col_displacements(plane), stage.direction)

    grid = BlockGrid.for_shape(width, height, stage.block)
    if stage.kind == StageKind.ARNOLD:
        return _arnold_blocks(target, grid, stage.iterations, stage.direction)
    return _distribute_blocks(target, grid, stage.direction)


def apply_stage(stage: Stage, image: Image) -> Image:
    """Run one shuffling stage on a single-channel image"""
    plane = image.plane
    logger.debug(f"Applying {stage.kind.value} ({stage.direction.value}) to {image.width}x{image.height}")
    return Image(_move(stage, plane, plane))


def row_shift(image: Image, direction: Direction = Direction.FORWARD) -> Image:
    """Rotate each row by its sample sum modulo the width"""
    return apply_stage(Stage(kind=StageKind.ROW_SHIFT, direction=direction), image)


def col_shift(image: Image, direction: Direction = Direction.FORWARD) -> Image:
    """Rotate each column by its sample sum modulo the height"""
    return apply_stage(Stage(kind=StageKind.COL_SHIFT, direction=direction), image)


def arnold_block(image: Image, grid: BlockGrid, iterations: int = 1,
                 direction: Direction = Direction.FORWARD) -> Image:
    """Arnold cat map (x, y) -> (x + y, x + 2y) mod block inside every block"""
    if iterations < 1:
        raise ValueError(f"Arnold iterations must be at least 1, got {iterations}")
    _check_grid(image, grid)
    return apply_stage(
        Stage(kind=StageKind.ARNOLD, direction=direction, block=grid.block, iterations=iterations),
        image,
    )


def block_distribute(image: Image, grid: BlockGrid, direction: Direction = Direction.FORWARD) -> Image:
    """Spread the pixels of every block over all blocks"""
    _check_grid(image, grid)
    return apply_stage(Stage(kind=StageKind.DISTRIBUTE, direction=direction, block=grid.block), image)


def as_permutation(stage: Stage, image: Image) -> Permutation:
    """The stage's action on positions of this image as an explicit Permutation"""
    plane = image.plane
    size = plane.size
    sources = _move(stage, plane, np.arange(size, dtype=np.int64).reshape(plane.shape))
    forward = np.empty(size, dtype=np.int64)
    forward[sources.reshape(-1)] = np.arange(size)
    return Permutation(forward)
