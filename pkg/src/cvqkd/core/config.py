"""
Configuration models and file loading.

Sweep and SKR settings are pydantic models so that a config file, CLI flags
and programmatic callers all pass through the same validation. Files are
either a flat ``key = value`` document (dotted keys address nested codec
specs, comma-separated values become lists) or YAML.
"""

import logging
import math
import os
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

import yaml
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from cvqkd.core.constants import (
    DEFAULT_ALPHA_FIBER,
    DEFAULT_BATCH_SIZE,
    DEFAULT_CODE_RATE,
    DEFAULT_EPSILON,
    DEFAULT_ETA,
    DEFAULT_GAMMA,
    DEFAULT_MAX_BLOCKS,
    DEFAULT_MIN_BLOCK_ERRORS,
    DEFAULT_N_PRIVACY,
    DEFAULT_V_EL,
    DEFAULT_XI_CH,
    IRCC_DEFAULT_INTERLEAVER_SEED,
    IRCC_DEFAULT_ITERATIONS,
    LDPC_DEFAULT_DC,
    LDPC_DEFAULT_DV,
    LDPC_DEFAULT_MAX_ITER,
    SUPPORTED_DIMENSIONS,
)
from cvqkd.core.errors import ConfigurationError

logger = logging.getLogger(__name__)


def _as_list(value: Any) -> Any:
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    if isinstance(value, (int, float)):
        return [value]
    return value


class CodecSpec(BaseModel):
    """Parameters of one forward-error-correction codec."""

    model_config = ConfigDict(extra="forbid")

    kind: Literal["ldpc", "cc", "ircc"] = "ldpc"
    block_length: int = Field(1024, gt=0)  # coded bits N
    d_v: int = Field(LDPC_DEFAULT_DV, ge=2)
    d_c: int = Field(LDPC_DEFAULT_DC, ge=3)
    pcm_path: Optional[str] = None  # alist file, overrides construction
    seed: int = 1  # PEG construction seed
    decoder: Literal["bp", "bf"] = "bp"
    max_iter: int = Field(LDPC_DEFAULT_MAX_ITER, ge=1)
    ircc_fractions: Optional[List[float]] = None  # None = reference profile
    ircc_iterations: int = Field(IRCC_DEFAULT_ITERATIONS, ge=1)
    interleaver_seed: int = IRCC_DEFAULT_INTERLEAVER_SEED

    @field_validator("ircc_fractions", mode="before")
    @classmethod
    def _split_fractions(cls, value: Any) -> Any:
        return None if value is None else _as_list(value)

    @model_validator(mode="after")
    def _check_shape(self) -> "CodecSpec":
        if self.kind == "ldpc" and self.pcm_path is None:
            if (self.block_length * self.d_v) % self.d_c != 0:
                raise ValueError(
                    f"N*d_v must be divisible by d_c "
                    f"({self.block_length}*{self.d_v} % {self.d_c} != 0)"
                )
        if self.kind == "cc" and (self.block_length % 2 or self.block_length <= 12):
            raise ValueError("CC block_length must be even and exceed the 12 tail bits")
        return self

    @property
    def rate(self) -> float:
        if self.kind == "ldpc":
            return 1.0 - self.d_v / self.d_c
        if self.kind == "cc":
            return (self.block_length // 2 - 6) / self.block_length
        return DEFAULT_CODE_RATE


class SweepConfig(BaseModel):
    """A BLER/BER Monte-Carlo sweep over the quantum-channel SNR grid."""

    model_config = ConfigDict(extra="forbid")

    system: Literal["A", "B", "C", "D"] = "D"
    codec_q: CodecSpec = Field(default_factory=CodecSpec)
    codec_c: Optional[CodecSpec] = None  # defaults to codec_q
    snr_grid_db: List[float] = Field(default_factory=lambda: [1.0, 1.5, 2.0])
    clc_snr_db: float = math.inf
    clc_kind: Literal["error-free", "awgn", "rayleigh"] = "error-free"
    clc_protected: bool = True
    dimension: int = 8
    quc_mode: Literal["full-chain", "faded", "bi-awgn"] = "bi-awgn"
    master_seed: int = 1
    min_block_errors: int = Field(DEFAULT_MIN_BLOCK_ERRORS, gt=0)
    max_blocks: int = Field(DEFAULT_MAX_BLOCKS, gt=0)
    batch_size: int = Field(DEFAULT_BATCH_SIZE, gt=0)
    threads: int = Field(default_factory=lambda: int(os.getenv("CVQKD_THREADS", "1")), gt=0)

    @field_validator("snr_grid_db", mode="before")
    @classmethod
    def _split_grid(cls, value: Any) -> Any:
        return _as_list(value)

    @field_validator("clc_snr_db", mode="before")
    @classmethod
    def _parse_inf(cls, value: Any) -> Any:
        if isinstance(value, str) and value.strip().lower() in ("inf", "+inf", "infinity"):
            return math.inf
        return value

    @model_validator(mode="after")
    def _check_consistency(self) -> "SweepConfig":
        if not self.snr_grid_db:
            raise ValueError("snr_grid_db must not be empty")
        if any(b <= a for a, b in zip(self.snr_grid_db, self.snr_grid_db[1:])):
            raise ValueError("snr_grid_db must be strictly ascending")
        if self.dimension not in SUPPORTED_DIMENSIONS:
            raise ValueError(f"dimension must be one of {SUPPORTED_DIMENSIONS}")
        if self.system in ("A", "B") and self.codec_q.kind != "ldpc":
            raise ValueError(
                f"System {self.system} decodes against a syndrome and needs an LDPC codec_q"
            )
        if self.quc_mode != "bi-awgn" and self.codec_q.block_length % self.dimension:
            raise ValueError(
                f"block_length {self.codec_q.block_length} not divisible by D={self.dimension}"
            )
        if self.system == "D" and self.clc_codec.block_length != self.codec_q.block_length:
            raise ValueError("System D needs equal codeword lengths on both channels")
        if self.clc_kind != "error-free" and math.isinf(self.clc_snr_db):
            raise ValueError("a noisy classical channel needs a finite clc_snr_db")
        return self

    @property
    def clc_codec(self) -> CodecSpec:
        return self.codec_c if self.codec_c is not None else self.codec_q

    @property
    def block_length(self) -> int:
        return self.codec_q.block_length

    @property
    def rate(self) -> float:
        return self.codec_q.rate

    @property
    def stop_rule(self) -> Dict[str, int]:
        return {
            "min_block_errors": self.min_block_errors,
            "max_blocks": self.max_blocks,
        }


class SkrParameters(BaseModel):
    """Gaussian-modulation protocol scalars; ranges checked at construction."""

    model_config = ConfigDict(extra="forbid")

    V_A: float = Field(5.0, gt=1.0)
    xi_ch: float = Field(DEFAULT_XI_CH, ge=0.0)
    eta: float = Field(DEFAULT_ETA, gt=0.0, le=1.0)
    v_el: float = Field(DEFAULT_V_EL, ge=0.0)
    alpha_fiber: float = Field(DEFAULT_ALPHA_FIBER, gt=0.0)
    L: float = Field(0.0, ge=0.0)
    gamma: float = Field(DEFAULT_GAMMA, gt=0.0, le=1.0)
    epsilon: float = Field(DEFAULT_EPSILON, gt=0.0, lt=1.0)
    N_privacy: int = Field(DEFAULT_N_PRIVACY, gt=0)
    beta: float = Field(1.0, gt=0.0, le=1.0)
    P_B: float = Field(0.0, ge=0.0, le=1.0)
    R: float = Field(DEFAULT_CODE_RATE, gt=0.0, lt=1.0)


def _parse_key_value(text: str, source: str) -> Dict[str, Any]:
    data: Dict[str, Any] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(
                f"{source}:{number}: expected 'key = value'", line_number=number
            )
        key, value = (part.strip() for part in line.split("=", 1))
        target = data
        *parents, leaf = key.split(".")
        for parent in parents:
            target = target.setdefault(parent, {})
        target[leaf] = value
    return data


def load_config_file(path: str) -> Dict[str, Any]:
    """
    Read a config file into a plain dictionary.

    Args:
        path: ``.yaml``/``.yml`` for YAML, anything else for ``key = value``

    Returns:
        Nested dictionary ready for ``SweepConfig.model_validate``

    Raises:
        OSError: File cannot be read
        ConfigurationError: Malformed content
    """
    file_path = Path(path)
    text = file_path.read_text(encoding="utf-8")
    if file_path.suffix.lower() in (".yaml", ".yml"):
        loaded = yaml.safe_load(text) or {}
        if not isinstance(loaded, dict):
            raise ConfigurationError(f"{path}: top level must be a mapping")
        logger.info(f"Loaded YAML config from {path}")
        return loaded
    logger.info(f"Loaded key=value config from {path}")
    return _parse_key_value(text, str(path))


def merge_overrides(base: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    """Overlay non-None overrides (dotted keys allowed) onto ``base``."""
    merged = {
        key: (dict(value) if isinstance(value, dict) else value) for key, value in base.items()
    }
    for key, value in overrides.items():
        if value is None:
            continue
        target = merged
        *parents, leaf = key.split(".")
        for parent in parents:
            child = target.get(parent)
            if not isinstance(child, dict):
                child = {}
                target[parent] = child
            target = child
        target[leaf] = value
    return merged


def load_sweep_config(
    path: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None
) -> SweepConfig:
    """Build a validated SweepConfig from an optional file plus overrides."""
    data = load_config_file(path) if path else {}
    return SweepConfig.model_validate(merge_overrides(data, overrides or {}))


def load_skr_parameters(
    path: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None
) -> SkrParameters:
    """Build validated SkrParameters from an optional file plus overrides."""
    data = load_config_file(path) if path else {}
    return SkrParameters.model_validate(merge_overrides(data, overrides or {}))
