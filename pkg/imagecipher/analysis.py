"""Statistics of plain and cipher images, one channel at a time"""
import logging
from typing import List, Optional, Sequence

import numpy as np

from .exceptions import DimensionError, SizeMismatchError, ZeroVarianceError
from .models import Axis, Image, split_channels
from .permutations import Permutation
from .schemas import HISTOGRAM_BINS, AnalysisReport, BlockGrid

logger = logging.getLogger(__name__)

MAX_ENTROPY_BITS = 8.0
CHANNEL_NAMES = {1: ("gray",), 3: ("red", "green", "blue")}
UNDEFINED = "undefined"


def histogram(image: Image) -> np.ndarray:
    """Count of samples per gray level"""
    return np.bincount(image.plane.reshape(-1), minlength=HISTOGRAM_BINS)


def _entropy_bits(counts: np.ndarray) -> float:
    counts = counts[counts > 0]
    p = counts / counts.sum()
    return abs(float(-np.sum(p * np.log2(p))))


def shannon_entropy(image: Image) -> float:
    """Gray-level Shannon entropy in bits"""
    return min(_entropy_bits(histogram(image)), MAX_ENTROPY_BITS)


def pearson(p: np.ndarray, q: np.ndarray) -> float:
    """Pearson coefficient of two equally long samples, population moments"""
    p = np.asarray(p, dtype=np.float64).reshape(-1)
    q = np.asarray(q, dtype=np.float64).reshape(-1)
    if p.size != q.size:
        raise SizeMismatchError(f"Samples differ in length: {p.size} and {q.size}")
    dp = p - p.mean()
    dq = q - q.mean()
    var_p = np.mean(dp * dp)
    var_q = np.mean(dq * dq)
    if var_p == 0 or var_q == 0:
        raise ZeroVarianceError("Correlation is undefined for a constant sample")
    r = np.mean(dp * dq) / np.sqrt(var_p * var_q)
    return float(np.clip(r, -1.0, 1.0))


def adjacent_correlation(image: Image, direction: Axis) -> float:
    """Correlation between each pixel and its right (horizontal) or lower (vertical) neighbour"""
    plane = image.plane
    if direction == Axis.HORIZONTAL:
        if image.width < 2:
            raise DimensionError("Horizontal correlation needs at least 2 columns")
        return pearson(plane[:, :-1], plane[:, 1:])
    if image.height < 2:
        raise DimensionError("Vertical correlation needs at least 2 rows")
    return pearson(plane[:-1, :], plane[1:, :])


def cross_correlation(first: Image, second: Image) -> float:
    """Sample-by-sample correlation of two equally sized single-channel images"""
    if (first.width, first.height) != (second.width, second.height):
        raise SizeMismatchError(
            f"Images differ in size: {first.width}x{first.height} and {second.width}x{second.height}"
        )
    return pearson(first.plane, second.plane)


def chi_square_uniformity(counts: Sequence[int]) -> float:
    """Chi-square statistic of a histogram against the uniform distribution"""
    observed = np.asarray(counts, dtype=np.float64)
    total = observed.sum()
    if total <= 0:
        raise ValueError("Histogram is empty")
    expected = total / observed.size
    return float(np.sum((observed - expected) ** 2 / expected))


def position_entropy(perm: Permutation, grid: BlockGrid) -> float:
    """Summed entropy, over destination blocks, of where their pixels came from.

    Reaches n * log2(n) when every destination block draws equally from all
    n source blocks, and 0 when each block keeps its own pixels.
    """
    if perm.size != grid.size:
        raise SizeMismatchError(f"Permutation of size {perm.size} does not match a grid of {grid.size} pixels")
    n = grid.n_blocks
    sources = grid.block_of(np.arange(perm.size))
    destinations = grid.block_of(perm.forward)
    _, counts = np.unique(destinations * n + sources, return_counts=True)
    # every destination block holds exactly pixels_per_block pixels
    p = counts / grid.pixels_per_block
    return abs(float(-np.sum(p * np.log2(p))))


def _safe_correlation(image: Image, direction: Axis, channel: str) -> Optional[float]:
    try:
        return adjacent_correlation(image, direction)
    except (ZeroVarianceError, DimensionError) as e:
        logger.warning(f"{direction.value} correlation of {channel} channel is {UNDEFINED}: {e}")
        return None


def analyze(image: Image, perm: Optional[Permutation] = None, grid: Optional[BlockGrid] = None,
            channel: str = "gray") -> AnalysisReport:
    """Collect every metric for one single-channel image"""
    if (perm is None) != (grid is None):
        raise ValueError("perm and grid must be given together")
    counts = histogram(image)
    return AnalysisReport(
        channel=channel,
        entropy_bits=shannon_entropy(image),
        corr_horizontal=_safe_correlation(image, Axis.HORIZONTAL, channel),
        corr_vertical=_safe_correlation(image, Axis.VERTICAL, channel),
        histogram=counts.tolist(),
        chi_square=chi_square_uniformity(counts),
        position_entropy_bits=None if perm is None else position_entropy(perm, grid),
    )


def analyze_channels(image: Image, perm: Optional[Permutation] = None,
                     grid: Optional[BlockGrid] = None) -> List[AnalysisReport]:
    """One report per channel"""
    names = CHANNEL_NAMES[image.channels]
    return [
        analyze(plane, perm, grid, channel=name)
        for name, plane in zip(names, split_channels(image))
    ]


def _format(value: Optional[float]) -> str:
    return UNDEFINED if value is None else f"{value:.6f}"


def report_text(reports: Sequence[AnalysisReport]) -> str:
    """Flat key-value text, one section per channel"""
    sections = []
    for report in reports:
        lines = [
            f"channel: {report.channel}",
            f"entropy: {_format(report.entropy_bits)}",
            f"horizontal_correlation: {_format(report.corr_horizontal)}",
            f"vertical_correlation: {_format(report.corr_vertical)}",
            f"chi_square: {_format(report.chi_square)}",
        ]
        if report.position_entropy_bits is not None:
            lines.append(f"position_entropy: {_format(report.position_entropy_bits)}")
        sections.append("\n".join(lines))
    return "\n\n".join(sections)


def report_structured(reports: Sequence[AnalysisReport]) -> str:
    """One JSON object per channel, one per line"""
    return "\n".join(report.model_dump_json() for report in reports)
