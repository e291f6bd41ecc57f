from typing import Optional


class ImageCipherError(Exception):
    """Base error carrying a human readable detail and a process exit status"""

    exit_status = 1

    def __init__(self, detail: str, exit_status: Optional[int] = None):
        super().__init__(detail)
        self.detail = detail
        if exit_status is not None:
            self.exit_status = exit_status

    def __str__(self) -> str:
        return self.detail


class UsageError(ImageCipherError):
    exit_status = 2


class KeyRangeError(ImageCipherError):
    exit_status = 3


# Codec errors
class CodecError(ImageCipherError):
    exit_status = 4


class UnsupportedFormatError(CodecError):
    pass


class MalformedHeaderError(CodecError):
    pass


class UnsupportedMaxvalError(CodecError):
    pass


class TruncatedPayloadError(CodecError):
    pass


class ImageIOError(CodecError):
    pass


# Geometry errors
class DimensionError(ImageCipherError):
    exit_status = 5


class SizeMismatchError(DimensionError):
    pass


class ChannelError(ImageCipherError):
    exit_status = 5


class InvalidImageError(ImageCipherError):
    pass


class ZeroVarianceError(ImageCipherError):
    """Correlation coefficient is undefined because a marginal is constant"""
