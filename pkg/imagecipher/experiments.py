import logging
from typing import Callable, List, Sequence, Tuple

import numpy as np

from .analysis import analyze_channels
from .cipher import decrypt, encrypt
from .exceptions import DimensionError
from .models import Image, merge_channels
from .schemas import CaseResult, CipherConfig, CipherKeys

logger = logging.getLogger(__name__)

HASH_MULTIPLIER = 2654435761
HASH_SHIFT = 8192
TEXTURE_PERIOD = 11
BINARY_THRESHOLD = 128


# Integer arithmetic only, so every platform builds the same images
def _grid(size: int) -> Tuple[np.ndarray, np.ndarray]:
    if size < 2:
        raise DimensionError(f"Test images need a side of at least 2, got {size}")
    return np.indices((size, size), dtype=np.int64)


def synthetic_scene(size: int = 256) -> Image:
    """Smooth natural-looking image: diagonal gradient, a bright disk and fine texture"""
    rows, cols = _grid(size)
    gradient = (rows + cols) * 255 // (2 * (size - 1))
    cy, cx, radius = size * 3 // 8, size * 5 // 8, size // 4
    inside = (rows - cy) ** 2 + (cols - cx) ** 2 < radius ** 2
    scene = np.where(inside, 255 - gradient // 2, gradient)
    texture = (rows * 7 + cols * 13) % TEXTURE_PERIOD - TEXTURE_PERIOD // 2
    return Image(np.clip(scene + texture, 0, 255))


def hashed_noise(size: int = 256) -> Image:
    """Plaintext that already has near-maximal entropy"""
    rows, cols = _grid(size)
    index = rows * size + cols
    return Image((index * HASH_MULTIPLIER // HASH_SHIFT) % 256)


def squeezed(image: Image, low: int, high: int) -> Image:
    """Compress the gray range of every channel into [low, high]"""
    if not 0 <= low <= high <= 255:
        raise ValueError(f"Invalid gray window [{low}, {high}]")
    pixels = image.pixels.astype(np.int64)
    return Image(low + pixels * (high - low) // 255)


def binarize(image: Image) -> Image:
    """Binary image stored as 0 / 255 samples"""
    return Image(np.where(image.pixels >= BINARY_THRESHOLD, 255, 0))


def synthetic_rgb(size: int = 256) -> Image:
    scene = synthetic_scene(size)
    red = scene
    green = Image(scene.plane[:, ::-1])
    blue = Image(squeezed(scene, 30, 220).plane.T)
    return merge_channels([red, green, blue])


SPECIAL_CASES: Sequence[Tuple[str, Callable[[int], Image]]] = (
    ("scene", synthetic_scene),
    ("high-entropy", hashed_noise),
    ("squeezed-100-130", lambda size: squeezed(synthetic_scene(size), 100, 130)),
    ("squeezed-0-30", lambda size: squeezed(synthetic_scene(size), 0, 30)),
    ("squeezed-220-250", lambda size: squeezed(synthetic_scene(size), 220, 250)),
    ("binary", lambda size: binarize(synthetic_scene(size))),
    ("rgb", synthetic_rgb),
)


def run_special_cases(keys: CipherKeys, config: CipherConfig = CipherConfig(),
                      size: int = 256) -> List[CaseResult]:
    """Encrypt every special case and compare plain and cipher statistics"""
    results = []
    for name, factory in SPECIAL_CASES:
        plain = factory(size)
        cipher = encrypt(plain, keys, config)
        round_trip = decrypt(cipher, keys, config) == plain
        if not round_trip:
            logger.error(f"Round trip failed for case {name}")
        plain_reports = analyze_channels(plain)
        cipher_reports = analyze_channels(cipher)
        for plain_report, cipher_report in zip(plain_reports, cipher_reports):
            label = name if plain.channels == 1 else f"{name}-{plain_report.channel}"
            results.append(CaseResult(name=label, plain=plain_report, cipher=cipher_report, round_trip=round_trip))
    return results


def _cell(value) -> str:
    return "undefined" if value is None else f"{value:.6f}"


def format_case_table(results: Sequence[CaseResult]) -> str:
    header = f"{'case':<20} {'plain_entropy':>14} {'entropy':>10} {'horizontal':>10} {'vertical':>10} {'round_trip':>10}"
    rows = [header]
    for result in results:
        rows.append(
            f"{result.name:<20} {_cell(result.plain.entropy_bits):>14} {_cell(result.cipher.entropy_bits):>10} "
            f"{_cell(result.cipher.corr_horizontal):>10} {_cell(result.cipher.corr_vertical):>10} "
            f"{'yes' if result.round_trip else 'NO':>10}"
        )
    return "\n".join(rows)
