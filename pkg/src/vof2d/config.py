"""Case configuration: defaults, validation and the key = value file format.

Config files are plain text with ``[section]`` headers and ``key = value``
lines; ``#`` starts a comment.  Sections: [case], [field], [output].
See the README for the full grammar and defaults.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field, replace

from .errors import ConfigError
from .velocity import VARIANTS, VelocityField

METHODS = ("youngs", "elvira")
DOMAIN = ((0.0, 1.0), (0.0, 0.25))  # fixed computational domain


@dataclass
class CaseConfig:
    n: int = 128
    cfl: float = 0.2
    t_end: float = 0.4
    method: str = "elvira"
    side: str = "left"
    beta: float = 0.5
    cap_center: tuple[float, float] = (0.4, -0.1)
    r0: float = 0.2
    sample_stride: int = 1
    variant: str = "linear"
    v0: float = -0.2
    c1: float = 0.1
    c2: float = -2.0
    tau: float = 0.2
    out_dir: str = "out"

    def validate(self) -> "CaseConfig":
        if self.n < 4 or self.n % 4 != 0:
            raise ConfigError(f"N = {self.n} must be a positive multiple of 4")
        if not (0.0 < self.cfl <= 1.0):
            raise ConfigError(f"CFL = {self.cfl} outside (0, 1]")
        if self.t_end < 0.0:
            raise ConfigError("t_end must be nonnegative")
        if self.method not in METHODS:
            raise ConfigError(f"method {self.method!r} not one of {METHODS}")
        if self.side not in ("left", "right"):
            raise ConfigError(f"side {self.side!r} not 'left' or 'right'")
        if not (0.0 <= self.beta <= 1.0):
            raise ConfigError(f"beta = {self.beta} outside [0, 1]")
        if not self.r0 > 0.0:
            raise ConfigError("r0 must be positive")
        if self.sample_stride < 1:
            raise ConfigError("sample_stride must be >= 1")
        if self.variant not in VARIANTS:
            raise ConfigError(f"velocity variant {self.variant!r} not one of {VARIANTS}")
        return self

    def make_field(self) -> VelocityField:
        return VelocityField(self.variant, v0=self.v0, c1=self.c1, c2=self.c2, tau=self.tau)

    def with_updates(self, **kw) -> "CaseConfig":
        return replace(self, **kw)


_CASE_KEYS = {
    "n": int,
    "cfl": float,
    "t_end": float,
    "method": str,
    "side": str,
    "beta": float,
    "r0": float,
    "sample_stride": int,
}
_FIELD_KEYS = {"variant": str, "v0": float, "c1": float, "c2": float, "tau": float}


def load_config(path) -> CaseConfig:
    """Parse a config file into a validated CaseConfig."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        with open(path) as f:
            parser.read_file(f)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from exc

    cfg = CaseConfig()
    kw = {}
    for section, keys in (("case", _CASE_KEYS), ("field", _FIELD_KEYS)):
        if not parser.has_section(section):
            continue
        for key, raw in parser.items(section):
            if key == "cap_center" and section == "case":
                try:
                    x, y = (float(p) for p in raw.split(","))
                except ValueError as exc:
                    raise ConfigError(f"[case] cap_center = {raw!r}: expected 'x, y'") from exc
                kw["cap_center"] = (x, y)
                continue
            if key not in keys:
                raise ConfigError(f"unknown key {key!r} in [{section}] of {path}")
            try:
                kw[key] = keys[key](raw)
            except ValueError as exc:
                raise ConfigError(f"[{section}] {key} = {raw!r}: {exc}") from exc
    if parser.has_section("output"):
        for key, raw in parser.items("output"):
            if key != "out_dir":
                raise ConfigError(f"unknown key {key!r} in [output] of {path}")
            kw["out_dir"] = raw
    return cfg.with_updates(**kw).validate()


def save_config(config: CaseConfig, path) -> None:
    """Write the fully resolved configuration; re-running it reproduces the case."""
    lines = [
        "[case]",
        f"n = {config.n}",
        f"cfl = {config.cfl!r}",
        f"t_end = {config.t_end!r}",
        f"method = {config.method}",
        f"side = {config.side}",
        f"beta = {config.beta!r}",
        f"cap_center = {config.cap_center[0]!r}, {config.cap_center[1]!r}",
        f"r0 = {config.r0!r}",
        f"sample_stride = {config.sample_stride}",
        "",
        "[field]",
        f"variant = {config.variant}",
        f"v0 = {config.v0!r}",
        f"c1 = {config.c1!r}",
        f"c2 = {config.c2!r}",
        f"tau = {config.tau!r}",
        "",
        "[output]",
        f"out_dir = {config.out_dir}",
        "",
    ]
    with open(path, "w") as f:
        f.write("\n".join(lines))
