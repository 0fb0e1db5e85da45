"""Flat ``key = value`` run configuration with command-line overrides."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from .bridge import BridgeBounds
from .errors import ConfigError

DEFAULT_TOLERANCES = {
    "idempotence": 1e-10,
    "trace": 1e-8,
    "equivariance": 1e-8,
    "defect_law": 1e-9,
    "x_independence": 1e-8,
    "highest_weight": 1e-10,
    "beta_gamma": 1e-8,
    "gamma_estimate": 1e-6,
    "clutching_det": 1e-12,
    "direct_sum": 1e-12,
    "unitarity": 1e-10,
}


@dataclass
class SweepConfig:
    k_list: list = field(default_factory=lambda: [-3, -2, -1, 0, 1, 2, 3])
    n_max: int = 20
    seed: int = 0
    haar_samples: int = 50
    lip_starts: int = 4
    lip_iterations: int = 60
    sphere_pairs: int = 4
    grid_size: int = 10_000
    bounds_mode: str = "placeholder"
    bound_h: Optional[float] = None
    bound_r: Optional[float] = None
    out_csv: str = "sweep.csv"
    out_json: str = ""
    out_report: str = "homotopy.json"
    demo_n: int = 3
    timing: bool = False
    workers: int = 1
    inject_fault: str = "none"
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))

    def validate(self) -> "SweepConfig":
        if not self.k_list:
            raise ConfigError("k_list is empty")
        need = max(1, 1 - min(self.k_list))
        if self.n_max < need:
            raise ConfigError(f"n_max must be at least {need} for k_list {self.k_list}")
        for name in ("haar_samples", "grid_size", "workers", "demo_n"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive")
        for name in ("lip_starts", "lip_iterations", "sphere_pairs"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be nonnegative")
        if self.bounds_mode not in ("placeholder", "config"):
            raise ConfigError(f"bounds_mode must be 'placeholder' or 'config', got {self.bounds_mode!r}")
        if self.inject_fault not in ("none", "idempotence"):
            raise ConfigError(f"unknown fault {self.inject_fault!r}")
        bad = [k for k, v in self.tolerances.items() if not v > 0]
        if bad:
            raise ConfigError(f"tolerances must be positive: {', '.join(bad)}")
        self.bounds()
        return self

    def bounds(self) -> BridgeBounds:
        if self.bounds_mode == "placeholder":
            return BridgeBounds.placeholder()
        if self.bound_h is None or self.bound_r is None:
            raise ConfigError("bounds_mode = config needs bound_h and bound_r")
        return BridgeBounds(self.bound_h, self.bound_r, "config-supplied")

    @property
    def json_path(self) -> str:
        return self.out_json or str(Path(self.out_csv).with_suffix(".json"))

    def pairs(self) -> list:
        return [(k, n) for k in sorted(set(self.k_list)) for n in range(max(1, -k), self.n_max + 1)]


def _parse_value(name: str, raw: str, current):
    raw = raw.strip()
    try:
        if name == "k_list":
            return [int(tok) for tok in raw.replace(",", " ").split()]
        if name in ("bound_h", "bound_r"):
            return None if raw.lower() in ("", "none") else float(raw)
        if isinstance(current, bool):
            if raw.lower() in ("1", "true", "on", "yes"):
                return True
            if raw.lower() in ("0", "false", "off", "no"):
                return False
            raise ValueError(raw)
        if isinstance(current, int):
            return int(raw)
        if isinstance(current, float):
            return float(raw)
        return raw
    except ValueError:
        raise ConfigError(f"bad value for {name}: {raw!r}") from None


def apply_pairs(cfg: SweepConfig, pairs: Iterable[tuple]) -> SweepConfig:
    names = {f.name for f in dataclasses.fields(SweepConfig)} - {"tolerances"}
    for key, raw in pairs:
        key = key.strip()
        if key.startswith("tol_"):
            tol = key[4:]
            if tol not in DEFAULT_TOLERANCES:
                raise ConfigError(f"unknown tolerance {tol!r}")
            try:
                cfg.tolerances[tol] = float(raw)
            except ValueError:
                raise ConfigError(f"bad tolerance {key} = {raw!r}") from None
        elif key in names:
            setattr(cfg, key, _parse_value(key, raw, getattr(cfg, key)))
        else:
            raise ConfigError(f"unknown config key {key!r}")
    return cfg


def parse_text(text: str) -> list:
    pairs = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, value = line.split("=", 1)
        pairs.append((key, value))
    return pairs


def load_config(path: Optional[str] = None, overrides: Iterable[str] = ()) -> SweepConfig:
    cfg = SweepConfig()
    if path:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        apply_pairs(cfg, parse_text(text))
    extra = []
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not key=value")
        extra.append(tuple(item.split("=", 1)))
    apply_pairs(cfg, extra)
    return cfg.validate()
