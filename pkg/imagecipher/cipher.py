"""Six-stage multilevel image cipher"""
import logging

import numpy as np

from .keystream import generate, keystream_new
from .models import Direction, Image, Level, merge_channels, split_channels
from .permutations import arnold_block, block_distribute, col_shift, grid_for, row_shift
from .schemas import CipherConfig, CipherKeys

logger = logging.getLogger(__name__)

BYTE_MODULUS = 256


def _add_keystream(image: Image, segment: np.ndarray, sign: int) -> Image:
    plane = image.plane.astype(np.int16)
    mixed = (plane + sign * segment.reshape(plane.shape).astype(np.int16)) % BYTE_MODULUS
    return Image(mixed.astype(np.uint8))


def _xor_keystream(image: Image, segment: np.ndarray) -> Image:
    return Image(np.bitwise_xor(image.plane, segment.reshape(image.plane.shape)))


def _segments(keys: CipherKeys, n: int):
    # Step ii uses stream bytes [0, n), step v the next n, reached with skip(n)
    return generate(keys, n), generate(keys, n, offset=n)


def _encrypt_channel(image: Image, keys: CipherKeys, config: CipherConfig) -> Image:
    n = image.size
    if config.level == Level.BASIC:
        image = row_shift(image, Direction.FORWARD)
        return _add_keystream(image, generate(keys, n), 1)

    grid = grid_for(image, config.block)
    first, second = _segments(keys, n)
    image = row_shift(image, Direction.FORWARD)
    image = _add_keystream(image, first, 1)
    image = arnold_block(image, grid, config.arnold_iterations, Direction.FORWARD)
    image = block_distribute(image, grid, Direction.FORWARD)
    image = _xor_keystream(image, second)
    return col_shift(image, Direction.FORWARD)


def _decrypt_channel(image: Image, keys: CipherKeys, config: CipherConfig) -> Image:
    n = image.size
    if config.level == Level.BASIC:
        image = _add_keystream(image, generate(keys, n), -1)
        return row_shift(image, Direction.INVERSE)

    grid = grid_for(image, config.block)
    first, second = _segments(keys, n)
    image = col_shift(image, Direction.INVERSE)
    image = _xor_keystream(image, second)
    image = block_distribute(image, grid, Direction.INVERSE)
    image = arnold_block(image, grid, config.arnold_iterations, Direction.INVERSE)
    image = _add_keystream(image, first, -1)
    return row_shift(image, Direction.INVERSE)


def _check_inputs(image: Image, keys: CipherKeys, config: CipherConfig) -> None:
    keystream_new(keys)
    if config.level == Level.FULL:
        grid_for(image, config.block)


def encrypt(image: Image, keys: CipherKeys, config: CipherConfig = CipherConfig()) -> Image:
    """Encrypt every channel independently"""
    _check_inputs(image, keys, config)
    logger.info(
        f"Encrypting {image.width}x{image.height} image, {image.channels} channel(s), level {config.level.value}"
    )
    return merge_channels([_encrypt_channel(channel, keys, config) for channel in split_channels(image)])


def decrypt(image: Image, keys: CipherKeys, config: CipherConfig = CipherConfig()) -> Image:
    """Exact inverse of encrypt for the same keys and config"""
    _check_inputs(image, keys, config)
    logger.info(
        f"Decrypting {image.width}x{image.height} image, {image.channels} channel(s), level {config.level.value}"
    )
    return merge_channels([_decrypt_channel(channel, keys, config) for channel in split_channels(image)])
