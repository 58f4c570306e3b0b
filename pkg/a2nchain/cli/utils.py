import math
import re
from typing import Any, Dict, List, Optional, Tuple

import yaml

from a2nchain.config import Settings, in_pydantic_v2, validator
from a2nchain.errors import InvalidConfigurationError
from a2nchain.types import REFERENCE_ETA, BoundarySet, ModelParams

if in_pydantic_v2:
    from pydantic.v1 import BaseModel, ValidationError
else:
    from pydantic import BaseModel, ValidationError  # type: ignore


def set_log_file_path(
    log_config_path: str, new_filename: str = "a2nchain.log"
) -> Dict[str, Any]:
    """This works with the standard log_config.yml file.
    It will not work with custom log configs that may use different handlers"""
    with open(f"{log_config_path}", "r") as file:
        log_config = yaml.safe_load(file)
    for handler in log_config["handlers"].values():
        if handler.get("class") == "logging.handlers.RotatingFileHandler":
            handler["filename"] = new_filename

    return log_config


def parse_eta(text: str) -> complex:
    """'re,im' to a complex number."""
    parts = [s.strip() for s in str(text).split(",")]
    if len(parts) != 2:
        raise InvalidConfigurationError(f"eta must be given as 're,im', got {text!r}")
    try:
        re_, im = float(parts[0]), float(parts[1])
    except ValueError:
        raise InvalidConfigurationError(f"eta must be given as 're,im', got {text!r}")
    if not (math.isfinite(re_) and math.isfinite(im)):
        raise InvalidConfigurationError(f"eta must be finite, got {text!r}")
    return complex(re_, im)


def parse_ints(text: str) -> List[int]:
    try:
        return [int(s) for s in str(text).split(",") if s.strip()]
    except ValueError:
        raise InvalidConfigurationError(
            f"expected comma-separated integers, got {text!r}"
        )


_RANGE = re.compile(r"^\s*(\d+)\s*(?:\.\.\s*(\d+))?\s*$")


def parse_range(text: str) -> Tuple[int, int]:
    """'2' or '1..3', inclusive."""
    if not (match := _RANGE.match(str(text))):
        raise InvalidConfigurationError(
            f"expected 'LO..HI' or a single integer, got {text!r}"
        )
    lo = int(match.group(1))
    hi = int(match.group(2)) if match.group(2) else lo
    if hi < lo:
        raise InvalidConfigurationError(f"empty range {text!r}")
    return lo, hi


class RunConfig(BaseModel):
    """Options shared by the commands; a YAML file supplies defaults and flags
    override it."""

    n: int = 1
    sites: int = 2
    eta: Tuple[float, float] = (REFERENCE_ETA.real, REFERENCE_ETA.imag)
    boundary: BoundarySet = BoundarySet.I
    m: Optional[List[int]] = None
    all: bool = False
    starts: int = 200
    seed: int = 0
    samples: int = 10
    tol: float = 1e-9
    probes: Optional[List[Tuple[float, float]]] = None
    check_tables: bool = False
    n_range: Tuple[int, int] = (1, 2)
    sites_range: Tuple[int, int] = (2, 3)
    sets: List[BoundarySet] = [BoundarySet.I, BoundarySet.II]
    out: Optional[str] = None
    csv: Optional[str] = None

    @validator("eta", pre=True, allow_reuse=True)
    def eta_pair(cls, v: Any) -> Any:
        if isinstance(v, str):
            z = parse_eta(v)
            return (z.real, z.imag)
        if isinstance(v, complex):
            return (v.real, v.imag)
        return v

    @validator("m", pre=True, allow_reuse=True)
    def m_list(cls, v: Any) -> Any:
        return parse_ints(v) if isinstance(v, str) else v

    @validator("n_range", "sites_range", pre=True, allow_reuse=True)
    def range_pair(cls, v: Any) -> Any:
        if isinstance(v, (str, int)):
            return parse_range(str(v))
        return v

    @validator("n", "sites", "starts", "samples", allow_reuse=True)
    def at_least_one(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"must be at least 1, got {v}")
        return v

    @validator("tol", allow_reuse=True)
    def tol_positive(cls, v: float) -> float:
        if not v > 0:
            raise ValueError(f"tolerance must be positive, got {v}")
        return v

    def params(self) -> ModelParams:
        return ModelParams(
            n=self.n, N=self.sites, eta=complex(*self.eta), boundary=self.boundary
        )

    def settings(self) -> Settings:
        overrides: Dict[str, Any] = {"identity_tol": self.tol}
        if self.probes:
            overrides["probe_points"] = [list(p) for p in self.probes]
        return Settings(**overrides)


def load_run_config(path: Optional[str], flags: Dict[str, Any]) -> RunConfig:
    """File values first, then every flag that was actually given."""
    values: Dict[str, Any] = {}
    if path is not None:
        try:
            with open(path, "r") as file:
                loaded = yaml.safe_load(file) or {}
        except OSError as e:
            raise InvalidConfigurationError(f"cannot read config file {path}: {e}")
        if not isinstance(loaded, dict):
            raise InvalidConfigurationError(f"config file {path} is not a mapping")
        values.update({str(k).replace("-", "_"): v for k, v in loaded.items()})
        if "set" in values:
            values["boundary"] = values.pop("set")
    values.update({k: v for k, v in flags.items() if v is not None})
    try:
        return RunConfig(**values)
    except ValidationError as e:
        raise InvalidConfigurationError(str(e))
