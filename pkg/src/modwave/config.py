"""Run configuration: JSON file, flag overrides, validation."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from typing import Any

from .errors import ConfigError
from .stokes import EquationKind

#: asymptotic-regime caps; values above these draw a warning, not an error
XI_WARN = 0.1
A_WARN = 0.05

_EQUATIONS = {
    "kdv": EquationKind.KDV,
    "bbm": EquationKind.BBM,
    "boussinesq": EquationKind.BOUSSINESQ,
}


@dataclass
class RunConfig:
    """All knobs a command can take; commands validate what they need."""

    equation: str | None = None
    symbol: dict[str, Any] = field(default_factory=dict)
    k: float | None = None
    k_range: tuple[float, float] | None = None
    k_steps: int = 101
    a: float = 0.01
    xi: float | None = None
    xi_range: tuple[float, float] | None = None
    xi_steps: int = 21
    n_modes: int = 32
    n_max: int = 8
    tol: float = 1e-12
    alpha_range: tuple[float, float] = (2.0, 6.0)
    alpha_steps: int = 17
    output: str | None = None
    summary: str | None = None
    svg: str | None = None
    only: str | None = None

    def equation_kind(self) -> EquationKind:
        if self.equation is None:
            raise ConfigError("equation", "missing (one of kdv, bbm, boussinesq)")
        try:
            return _EQUATIONS[self.equation.lower()]
        except KeyError:
            raise ConfigError(
                "equation", f"unknown value {self.equation!r}; use kdv, bbm or boussinesq"
            ) from None

    def k_values(self) -> list[float]:
        if self.k is not None:
            return [float(self.k)]
        if self.k_range is not None:
            lo, hi = self.k_range
            if not (0 < lo <= hi):
                raise ConfigError("k_range", f"need 0 < lo <= hi, got {self.k_range}")
            if self.k_steps < 1:
                raise ConfigError("k_steps", "must be >= 1")
            if self.k_steps == 1:
                return [float(lo)]
            step = (hi - lo) / (self.k_steps - 1)
            return [lo + i * step for i in range(self.k_steps)]
        raise ConfigError("k", "need --k or --k-range")

    def xi_values(self) -> list[float]:
        if self.xi is not None:
            return [float(self.xi)]
        if self.xi_range is not None:
            lo, hi = self.xi_range
            if not (0 <= lo <= hi <= 0.5):
                raise ConfigError("xi_range", f"need 0 <= lo <= hi <= 0.5, got {self.xi_range}")
            if self.xi_steps < 1:
                raise ConfigError("xi_steps", "must be >= 1")
            if self.xi_steps == 1:
                return [float(lo)]
            step = (hi - lo) / (self.xi_steps - 1)
            return [lo + i * step for i in range(self.xi_steps)]
        raise ConfigError("xi", "need --xi or --xi-range")

    def warnings(self) -> list[str]:
        out = []
        if self.xi is not None and self.xi > XI_WARN:
            out.append(f"xi={self.xi} is above the asymptotic cap {XI_WARN}")
        if self.xi_range is not None and self.xi_range[1] > XI_WARN:
            out.append(f"xi range exceeds the asymptotic cap {XI_WARN}")
        if abs(self.a) > A_WARN:
            out.append(f"|a|={abs(self.a)} is above the asymptotic cap {A_WARN}")
        return out

    def emit(self) -> dict[str, Any]:
        """JSON-ready dict; parse(emit(cfg)) == cfg."""
        out = {}
        for f in fields(self):
            val = getattr(self, f.name)
            if val is None:
                continue
            if isinstance(val, tuple):
                val = list(val)
            out[f.name] = val
        return out

    @classmethod
    def parse(cls, data: dict[str, Any]) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        kwargs = {}
        for key, val in data.items():
            if key not in known:
                raise ConfigError(key, "unknown config field")
            if key in ("k_range", "xi_range", "alpha_range") and val is not None:
                if not isinstance(val, (list, tuple)) or len(val) != 2:
                    raise ConfigError(key, "expected a [lo, hi] pair")
                val = (float(val[0]), float(val[1]))
            kwargs[key] = val
        return cls(**kwargs)


def load_config(path: str) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError("<file>", f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("<file>", "top-level JSON value must be an object")
    return RunConfig.parse(data)


def merge_overrides(cfg: RunConfig, overrides: dict[str, Any]) -> RunConfig:
    """Apply non-None override values on top of a config; flags win."""
    data = asdict(cfg)
    for key, val in overrides.items():
        if val is not None:
            data[key] = val
    for key in ("k_range", "xi_range", "alpha_range"):
        if data.get(key) is not None:
            data[key] = tuple(data[key])
    return RunConfig(**data)
