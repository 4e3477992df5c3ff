"""Suite configuration loaded from TOML.

Example::

    seed = 7
    out = "runs/demo"

    [[benchmarks]]
    family = "ghz"
    sizes = [3, 4, 5]

    [[benchmarks]]
    family = "bit_code"
    sizes = [3]
    params = { rounds = 2 }

    [[backends]]
    name = "noisy"
    shots = 2000
    repetitions = 5
    noise = { p1 = 0.001, p2 = 0.01, p_meas = 0.02 }
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .benchmarks import FAMILIES, BenchmarkInstance, make_instance
from .simulator import NoiseModel

DEFAULT_SHOTS = 2000
DEFAULT_REPETITIONS = 5


class ConfigError(ValueError):
    """Invalid or inconsistent suite configuration."""


@dataclass(frozen=True)
class BenchmarkSpec:
    family: str
    sizes: tuple[int, ...]
    params: dict[str, Any] = field(default_factory=dict)
    seed: int | None = None
    label: str = ""


@dataclass(frozen=True)
class BackendProfile:
    name: str
    noise: NoiseModel = NoiseModel()
    shots: int = DEFAULT_SHOTS
    repetitions: int = DEFAULT_REPETITIONS

    def __post_init__(self) -> None:
        if self.shots < 1:
            raise ConfigError(f"backend {self.name!r}: shots must be >= 1")
        if self.repetitions < 1:
            raise ConfigError(f"backend {self.name!r}: repetitions must be >= 1")


@dataclass(frozen=True)
class SuiteConfig:
    benchmarks: tuple[BenchmarkSpec, ...]
    backends: tuple[BackendProfile, ...]
    seed: int = 0
    out: str | None = None

    def __post_init__(self) -> None:
        names = [b.name for b in self.backends]
        if len(set(names)) != len(names):
            raise ConfigError("backend names must be unique")

    def instances(self, seed: int | None = None) -> list[BenchmarkInstance]:
        """Materialize every configured instance; ids must be unique."""
        base = self.seed if seed is None else seed
        out: list[BenchmarkInstance] = []
        seen: set[str] = set()
        for spec in self.benchmarks:
            for size in spec.sizes:
                try:
                    inst = make_instance(spec.family, size, base if spec.seed is None else spec.seed, spec.label, **spec.params)
                except ValueError as exc:
                    raise ConfigError(f"{spec.family} size {size}: {exc}") from exc
                if inst.id in seen:
                    raise ConfigError(f"duplicate benchmark id {inst.id!r}")
                seen.add(inst.id)
                out.append(inst)
        return out


def _int(value: Any, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{what} must be an integer, got {value!r}")
    return value


def _benchmark(raw: dict[str, Any]) -> BenchmarkSpec:
    unknown = set(raw) - {"family", "sizes", "size", "params", "seed", "label"}
    if unknown:
        raise ConfigError(f"unknown benchmark keys {sorted(unknown)}")
    family = raw.get("family")
    if family not in FAMILIES:
        raise ConfigError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    sizes = raw.get("sizes", [raw["size"]] if "size" in raw else None)
    if not sizes:
        raise ConfigError(f"{family}: give 'sizes' or 'size'")
    seed = raw.get("seed")
    return BenchmarkSpec(
        family,
        tuple(_int(s, f"{family} size") for s in sizes),
        dict(raw.get("params", {})),
        None if seed is None else _int(seed, "seed"),
        str(raw.get("label", "")),
    )


def _backend(raw: dict[str, Any]) -> BackendProfile:
    unknown = set(raw) - {"name", "noise", "shots", "repetitions"}
    if unknown:
        raise ConfigError(f"unknown backend keys {sorted(unknown)}")
    if "name" not in raw:
        raise ConfigError("every backend needs a name")
    try:
        noise = NoiseModel.from_dict(raw.get("noise", {}))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"backend {raw['name']!r}: {exc}") from exc
    return BackendProfile(
        str(raw["name"]),
        noise,
        _int(raw.get("shots", DEFAULT_SHOTS), "shots"),
        _int(raw.get("repetitions", DEFAULT_REPETITIONS), "repetitions"),
    )


def parse_config(raw: dict[str, Any]) -> SuiteConfig:
    unknown = set(raw) - {"benchmarks", "backends", "seed", "out"}
    if unknown:
        raise ConfigError(f"unknown top-level keys {sorted(unknown)}")
    benches = tuple(_benchmark(b) for b in raw.get("benchmarks", []))
    if not benches:
        raise ConfigError("config lists no benchmarks")
    backends = tuple(_backend(b) for b in raw.get("backends", [])) or (BackendProfile("noiseless"),)
    out = raw.get("out")
    return SuiteConfig(benches, backends, _int(raw.get("seed", 0), "seed"), None if out is None else str(out))


def load_config(path: str | Path) -> SuiteConfig:
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return parse_config(raw)
