import logging
import os
from contextlib import contextmanager
from typing import BinaryIO, Iterator, Tuple, Union

from .exceptions import (
    ImageIOError,
    MalformedHeaderError,
    TruncatedPayloadError,
    UnsupportedFormatError,
    UnsupportedMaxvalError,
)
from .models import Image

logger = logging.getLogger(__name__)

PathLike = Union[str, os.PathLike]

MAXVAL = 255
MAGIC_GRAY = b"P5"
MAGIC_RGB = b"P6"
MAGIC_CHANNELS = {MAGIC_GRAY: 1, MAGIC_RGB: 3}
CHANNEL_MAGIC = {channels: magic for magic, channels in MAGIC_CHANNELS.items()}

WHITESPACE = b" \t\n\r\v\f"
COMMENT = ord("#")


@contextmanager
def open_image_file(path: PathLike, mode: str) -> Iterator[BinaryIO]:
    """Open an image file, turning OS failures into codec errors"""
    try:
        handle = open(path, mode)
    except OSError as e:
        raise ImageIOError(f"Cannot open {path}: {e.strerror or e}")
    try:
        yield handle
    except OSError as e:
        raise ImageIOError(f"I/O failure on {path}: {e.strerror or e}")
    finally:
        handle.close()


def _skip_whitespace_and_comments(data: bytes, pos: int) -> int:
    while pos < len(data):
        if data[pos] in WHITESPACE:
            pos += 1
        elif data[pos] == COMMENT:
            end = data.find(b"\n", pos)
            pos = len(data) if end < 0 else end + 1
        else:
            break
    return pos


def parse_header(data: bytes) -> Tuple[int, int, int, int]:
    """Parse a P5/P6 header.

    Returns (width, height, channels, payload_offset). Comments are allowed
    anywhere between header tokens; exactly one whitespace byte separates the
    maxval from the payload.
    """
    magic = data[:2]
    if magic not in MAGIC_CHANNELS:
        shown = magic.decode("latin-1") if magic else "<empty>"
        raise UnsupportedFormatError(f"Unsupported magic number {shown!r}; expected P5 or P6")
    if len(data) > 2 and data[2] not in WHITESPACE and data[2] != COMMENT:
        raise MalformedHeaderError("Magic number must be followed by whitespace")

    tokens = []
    pos = 2
    while len(tokens) < 3:
        pos = _skip_whitespace_and_comments(data, pos)
        if pos >= len(data):
            raise MalformedHeaderError(f"Header ended after {len(tokens)} of 3 fields")
        start = pos
        while pos < len(data) and data[pos] not in WHITESPACE and data[pos] != COMMENT:
            pos += 1
        tokens.append(data[start:pos])

    if pos >= len(data) or data[pos] not in WHITESPACE:
        raise MalformedHeaderError("Maxval must be followed by a single whitespace byte")
    pos += 1

    for token in tokens:
        if not token.isdigit():
            raise MalformedHeaderError(f"Header field {token!r} is not a decimal number")
    width, height, maxval = (int(token) for token in tokens)

    if width < 1 or height < 1:
        raise MalformedHeaderError(f"Image size {width}x{height} must be positive")
    if maxval != MAXVAL:
        raise UnsupportedMaxvalError(f"Maxval {maxval} is not supported; only {MAXVAL} is")

    return width, height, MAGIC_CHANNELS[magic], pos


def decode_image(data: bytes) -> Image:
    """Decode the bytes of a P5/P6 file"""
    width, height, channels, offset = parse_header(data)
    expected = width * height * channels
    payload = data[offset:offset + expected]
    if len(payload) < expected:
        raise TruncatedPayloadError(
            f"Payload holds {len(payload)} bytes but the header declares {expected}"
        )
    if len(data) > offset + expected:
        logger.debug(f"Ignoring {len(data) - offset - expected} trailing bytes")
    return Image.from_samples(width, height, channels, payload)


def encode_image(image: Image) -> bytes:
    """Encode an image as P5/P6 bytes; no comments are emitted"""
    magic = CHANNEL_MAGIC[image.channels]
    header = magic + f"\n{image.width} {image.height}\n{MAXVAL}\n".encode("ascii")
    return header + image.to_bytes()


def load_image(path: PathLike) -> Image:
    """Load a binary PGM or PPM file"""
    with open_image_file(path, "rb") as handle:
        data = handle.read()
    image = decode_image(data)
    logger.info(f"Loaded {path}: {image.width}x{image.height}, {image.channels} channel(s)")
    return image


def save_image(image: Image, path: PathLike) -> None:
    """Write an image as binary PGM (1 channel) or PPM (3 channels)"""
    with open_image_file(path, "wb") as handle:
        handle.write(encode_image(image))
    logger.info(f"Saved {path}: {image.width}x{image.height}, {image.channels} channel(s)")
