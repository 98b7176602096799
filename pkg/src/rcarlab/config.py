"""Run configuration: YAML files validated into typed experiment descriptors."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Annotated, List, Literal, Optional, Union

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError, model_validator

from .exceptions import ConfigError, InvalidLawError
from .mixing import MixingLaw
from .stable_core import Flavor, StableLaw

__all__ = [
    "InnovationConfig",
    "MixingConfig",
    "ThetaGrid",
    "SimulatePanelConfig",
    "SimulateZConfig",
    "LimitCfConfig",
    "RegimeTableConfig",
    "VerifyRegimeConfig",
    "RunConfig",
    "load_config",
    "parse_config",
    "config_hash",
]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class InnovationConfig(_Strict):
    """Innovation law.  Give ``c1``/``c2`` for explicit tail constants, or
    ``omega`` (default 1) for a symmetric law; ``variance`` applies at alpha = 2."""

    alpha: float = Field(gt=0.0, le=2.0)
    c1: Optional[float] = Field(default=None, ge=0.0)
    c2: Optional[float] = Field(default=None, ge=0.0)
    omega: Optional[float] = Field(default=None, gt=0.0)
    variance: float = Field(default=1.0, gt=0.0)
    flavor: Optional[Literal["exact_stable", "two_sided_pareto", "gaussian"]] = None

    def to_law(self) -> StableLaw:
        try:
            if self.alpha == 2.0:
                return StableLaw.gaussian(self.variance)
            flavor = Flavor(self.flavor or "exact_stable")
            if self.c1 is None and self.c2 is None:
                return StableLaw.symmetric(self.alpha, self.omega or 1.0, flavor)
            return StableLaw(self.alpha, self.c1 or 0.0, self.c2 or 0.0, flavor=flavor)
        except (InvalidLawError, ValueError) as exc:
            raise ConfigError(f"invalid innovation law: {exc}") from exc


class MixingConfig(_Strict):
    beta: float = Field(gt=0.0)

    def to_law(self) -> MixingLaw:
        return MixingLaw(self.beta)


class ThetaGrid(_Strict):
    start: float = -3.0
    stop: float = 3.0
    num: int = Field(default=61, ge=1, le=100_000)

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.num)


class _Run(_Strict):
    seed: int = Field(default=0, ge=0, lt=2 ** 64)
    workers: int = Field(default=1, ge=1)


class SimulatePanelConfig(_Run):
    experiment: Literal["simulate-panel"]
    replicates: int = Field(ge=1)
    innovation: InnovationConfig
    mixing: MixingConfig
    N: int = Field(ge=2)
    n: int = Field(ge=2)
    taus: List[float] = Field(default_factory=lambda: [1.0], min_length=1)
    burn_in_tol: float = Field(default=1e-8, gt=0.0, lt=1.0)
    mu_threshold: float = Field(default=4.0, gt=1.0)

    @model_validator(mode="after")
    def _check_taus(self):
        t = np.asarray(self.taus)
        if np.any(t <= 0) or np.any(np.diff(t) <= 0):
            raise ValueError("taus must be positive and strictly increasing")
        return self


class SimulateZConfig(_Run):
    experiment: Literal["simulate-z"]
    replicates: int = Field(ge=1)
    alpha: float = Field(gt=0.0, le=2.0)
    beta: float = Field(gt=0.0)
    psi1: float = Field(default=1.0, ge=0.0)
    tau_grid: List[float] = Field(default_factory=lambda: [1.0], min_length=1)
    x_min: Optional[float] = Field(default=None, gt=0.0)
    x_max: float = Field(default=50.0, gt=0.0)
    dt: float = Field(default=0.01, gt=0.0)
    trunc_tol: float = Field(default=1e-6, gt=0.0)
    innovation: Optional[InnovationConfig] = None

    @model_validator(mode="after")
    def _check(self):
        if not self.beta < self.alpha:
            raise ValueError("simulate-z needs 0 < beta < alpha")
        t = np.asarray(self.tau_grid)
        if np.any(t < 0) or np.any(np.diff(t) <= 0):
            raise ValueError("tau_grid must be non-negative and strictly increasing")
        if self.innovation is not None and self.innovation.alpha != self.alpha:
            raise ValueError("innovation.alpha must equal alpha")
        return self


LIMIT_NAMES = ("cf_levy", "cf_V", "cf_W", "cf_V1", "cf_Lambda", "cf_Z")


class LimitCfConfig(_Run):
    experiment: Literal["limit-cf"]
    law: Literal["cf_levy", "cf_V", "cf_W", "cf_V1", "cf_Lambda", "cf_Z"]
    alpha: float = Field(gt=0.0, le=2.0)
    beta: Optional[float] = Field(default=None, gt=0.0)
    psi1: Optional[float] = Field(default=None, gt=0.0)
    tau: float = Field(default=1.0, gt=0.0)
    thetas: ThetaGrid = Field(default_factory=ThetaGrid)
    innovation: Optional[InnovationConfig] = None

    @model_validator(mode="after")
    def _check(self):
        a, b = self.alpha, self.beta
        if self.law != "cf_levy" and self.law != "cf_V1" and b is None:
            raise ValueError(f"{self.law} needs beta")
        if self.law == "cf_V" and not b < 1.0:
            raise ValueError("cf_V needs beta < 1")
        if self.law in ("cf_W", "cf_Z") and not b < a:
            raise ValueError(f"{self.law} needs beta < alpha")
        if self.law == "cf_Lambda" and not (1.0 < b < a):
            raise ValueError("cf_Lambda needs 1 < beta < alpha")
        if self.law == "cf_V1" and not a > 1.0:
            raise ValueError("cf_V1 needs alpha > 1")
        if self.innovation is not None and self.innovation.alpha != a:
            raise ValueError("innovation.alpha must equal alpha")
        return self


class RegimeTableConfig(_Run):
    experiment: Literal["regime-table"]
    alphas: List[float] = Field(min_length=1)
    betas: List[float] = Field(min_length=1)
    N: int = Field(default=1000, ge=2)
    n: int = Field(default=1000, ge=2)
    mu_threshold: float = Field(default=4.0, gt=1.0)

    @model_validator(mode="after")
    def _check(self):
        if any(not (0 < a <= 2) for a in self.alphas) or any(b <= 0 for b in self.betas):
            raise ValueError("need 0 < alpha <= 2 and beta > 0")
        return self


class VerifyRegimeConfig(_Run):
    experiment: Literal["verify-regime"]
    replicates: int = Field(ge=2)
    innovation: InnovationConfig
    mixing: MixingConfig
    N: int = Field(ge=2)
    n: int = Field(ge=2)
    tau: float = Field(default=1.0, gt=0.0)
    burn_in_tol: float = Field(default=1e-8, gt=0.0, lt=1.0)
    mu_threshold: float = Field(default=4.0, gt=1.0)
    tolerance: float = Field(default=0.05, gt=0.0)
    thetas: ThetaGrid = Field(default_factory=ThetaGrid)


RunConfig = Annotated[
    Union[SimulatePanelConfig, SimulateZConfig, LimitCfConfig, RegimeTableConfig, VerifyRegimeConfig],
    Field(discriminator="experiment"),
]
_ADAPTER = TypeAdapter(RunConfig)


def parse_config(data: dict, experiment: Optional[str] = None, seed: Optional[int] = None,
                 workers: Optional[int] = None):
    """Validate a mapping; command-line ``experiment``/``seed``/``workers`` take precedence."""
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a mapping")
    data = dict(data)
    if experiment is not None:
        if data.setdefault("experiment", experiment) != experiment:
            raise ConfigError(f"config is for {data['experiment']!r}, not {experiment!r}")
    if seed is not None:
        data["seed"] = seed
    if workers is not None:
        data["workers"] = workers
    try:
        return _ADAPTER.validate_python(data)
    except ValidationError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path, **overrides):
    try:
        text = Path(path).read_text()
        data = yaml.safe_load(text)
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(data or {}, **overrides)


def config_hash(cfg) -> str:
    """SHA-256 of the validated config in canonical JSON, ``workers`` excluded
    (results do not depend on it)."""
    payload = cfg.model_dump(mode="json", exclude={"workers"})
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()
