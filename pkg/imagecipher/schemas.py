from pathlib import Path
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .exceptions import DimensionError, KeyRangeError, UsageError
from .models import Command, Direction, Level, ReportFormat, StageKind

# Cipher defaults
DEFAULT_BLOCK = 16
DEFAULT_ARNOLD_ITERATIONS = 1

A_RANGE = (0.0, 1.0)
K_RANGE = (3.5, 4.0)

HISTOGRAM_BINS = 256


# Key schemas
class CipherKeys(BaseModel):
    """Symmetric key pair seeding the logistic map: seed A and control parameter K"""

    model_config = ConfigDict(frozen=True)

    a: float
    k: float

    @field_validator("a")
    @classmethod
    def check_a(cls, value: float) -> float:
        low, high = A_RANGE
        if not low < value < high:
            raise KeyRangeError(f"Key A={value!r} must lie strictly inside ({low}, {high})")
        return value

    @field_validator("k")
    @classmethod
    def check_k(cls, value: float) -> float:
        low, high = K_RANGE
        if not low < value < high:
            raise KeyRangeError(f"Key K={value!r} must lie strictly inside ({low}, {high})")
        return value

    @classmethod
    def from_strings(cls, a: str, k: str) -> "CipherKeys":
        """Parse decimal key strings; the parsed binary64 values are the effective key"""
        try:
            parsed_a, parsed_k = float(a), float(k)
        except (TypeError, ValueError):
            raise UsageError(f"Keys must be decimal numbers, got A={a!r} K={k!r}")
        return cls(a=parsed_a, k=parsed_k)


class KeySpace(BaseModel):
    a_values: int
    k_values: int
    bits: float


# Geometry schemas
class CipherConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    block: int = Field(DEFAULT_BLOCK, ge=2)
    arnold_iterations: int = Field(DEFAULT_ARNOLD_ITERATIONS, ge=1)
    level: Level = Level.FULL


class BlockGrid(BaseModel):
    """Partition of an image into block x block tiles"""

    model_config = ConfigDict(frozen=True)

    block: int = Field(ge=1)
    blocks_x: int = Field(ge=1)
    blocks_y: int = Field(ge=1)

    @classmethod
    def for_shape(cls, width: int, height: int, block: int) -> "BlockGrid":
        if block < 1:
            raise DimensionError(f"Block size must be positive, got {block}")
        if width % block or height % block:
            raise DimensionError(
                f"Image size {width}x{height} is not a multiple of the {block}x{block} block size"
            )
        return cls(block=block, blocks_x=width // block, blocks_y=height // block)

    @property
    def width(self) -> int:
        return self.blocks_x * self.block

    @property
    def height(self) -> int:
        return self.blocks_y * self.block

    @property
    def n_blocks(self) -> int:
        return self.blocks_x * self.blocks_y

    @property
    def pixels_per_block(self) -> int:
        return self.block * self.block

    @property
    def size(self) -> int:
        return self.width * self.height

    def block_of(self, raster_index: np.ndarray) -> np.ndarray:
        """Map raster pixel indices to raster block indices"""
        rows, cols = np.divmod(np.asarray(raster_index), self.width)
        return (rows // self.block) * self.blocks_x + cols // self.block


class Stage(BaseModel):
    """One position-shuffling stage together with its parameters"""

    model_config = ConfigDict(frozen=True)

    kind: StageKind
    direction: Direction = Direction.FORWARD
    block: int = Field(DEFAULT_BLOCK, ge=1)
    iterations: int = Field(DEFAULT_ARNOLD_ITERATIONS, ge=1)


# Report schemas
class AnalysisReport(BaseModel):
    channel: str = "gray"
    entropy_bits: float = Field(ge=0.0, le=8.0)
    corr_horizontal: Optional[float] = Field(None, ge=-1.0, le=1.0)
    corr_vertical: Optional[float] = Field(None, ge=-1.0, le=1.0)
    histogram: List[int]
    chi_square: float = Field(ge=0.0)
    position_entropy_bits: Optional[float] = None

    @field_validator("histogram")
    @classmethod
    def check_histogram(cls, value: List[int]) -> List[int]:
        if len(value) != HISTOGRAM_BINS:
            raise ValueError(f"histogram must have {HISTOGRAM_BINS} bins")
        return value


class CaseResult(BaseModel):
    name: str
    plain: AnalysisReport
    cipher: AnalysisReport
    round_trip: bool


# CLI schemas
class CliInvocation(BaseModel):
    command: Command
    input: Optional[Path] = None
    output: Optional[Path] = None
    key_a: Optional[str] = None
    key_k: Optional[str] = None
    block: int = DEFAULT_BLOCK
    arnold_iterations: int = DEFAULT_ARNOLD_ITERATIONS
    level: Level = Level.FULL
    report: ReportFormat = ReportFormat.TEXT
    stage: Optional[StageKind] = None
    size: int = 256

    @model_validator(mode="after")
    def check_required(self) -> "CliInvocation":
        name = self.command.value
        if self.command in (Command.ENCRYPT, Command.DECRYPT, Command.EXPERIMENTS):
            if self.key_a is None or self.key_k is None:
                raise UsageError(f"{name} requires both --key-a and --key-k")
        if self.command in (Command.ENCRYPT, Command.DECRYPT):
            if self.input is None or self.output is None:
                raise UsageError(f"{name} requires --in and --out")
        if self.command == Command.ANALYZE and self.input is None:
            raise UsageError("analyze requires --in")
        return self

    def keys(self) -> CipherKeys:
        return CipherKeys.from_strings(self.key_a, self.key_k)

    def config(self) -> CipherConfig:
        return CipherConfig(block=self.block, arnold_iterations=self.arnold_iterations, level=self.level)
