"""Run configuration: precision targets, truncation caps, parallelism.

Defaults are frozen in ``data/defaults.cfg`` (plain key=value); CLI flags
override file values, file values override built-in defaults.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .errors import DomainError


@dataclass(frozen=True)
class Precision:
    """Precision targets used throughout the numerical kernels.

    abs_tol: target absolute error for special-function values.
    quad_tol: tolerance handed to adaptive quadrature.
    series_terms: hard cap on series lengths (guards runaway loops).
    """

    abs_tol: float = 1e-12
    quad_tol: float = 1e-10
    series_terms: int = 10_000_000

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.quad_tol > 0):
            raise DomainError("tolerances must be positive")
        if self.series_terms < 1:
            raise DomainError("series_terms must be >= 1")


@dataclass(frozen=True)
class RunConfig:
    """Full effective configuration of a CLI run."""

    precision: Precision = field(default_factory=Precision)
    t_max: int = 300           # hyperbolic class enumeration cutoff
    k_max: int = 10_000        # discrete-series weight cap
    q_max: int = 500_000_000   # modulus sweep guard
    x_max: float = 1e9         # counting sweep guard
    parallelism: int = 0       # 0 = all available cores
    out_format: str = "json"   # csv | json
    eigen_fixture: str = ""    # resolved lazily if empty
    dim_fixture: str = ""

    def __post_init__(self):
        if self.parallelism < 0:
            raise DomainError("parallelism must be >= 0 (0 = auto)")
        if self.out_format not in ("csv", "json"):
            raise DomainError(f"unknown output format {self.out_format!r}")

    def as_flat_dict(self) -> dict:
        d = {
            "abs_tol": self.precision.abs_tol,
            "quad_tol": self.precision.quad_tol,
            "series_terms": self.precision.series_terms,
        }
        for f in fields(self):
            if f.name == "precision":
                continue
            d[f.name] = getattr(self, f.name)
        return d


_SCALAR_KEYS = {
    "abs_tol": float,
    "quad_tol": float,
    "series_terms": int,
    "t_max": int,
    "k_max": int,
    "q_max": int,
    "x_max": float,
    "parallelism": int,
    "out_format": str,
    "eigen_fixture": str,
    "dim_fixture": str,
}


def parse_config_text(text: str) -> dict:
    """Parse key=value lines; '#' starts a comment; blank lines ignored."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"config line {lineno}: expected key=value, got {raw!r}")
        key, val = (part.strip() for part in line.split("=", 1))
        if key not in _SCALAR_KEYS:
            raise DomainError(f"config line {lineno}: unknown key {key!r}")
        out[key] = _SCALAR_KEYS[key](val)
    return out


def load_config(path: str | os.PathLike | None = None, overrides: dict | None = None) -> RunConfig:
    """Build a RunConfig from built-in defaults, optional file, and overrides."""
    values: dict = {}
    if path is None:
        default_path = data_dir() / "defaults.cfg"
        if default_path.is_file():
            values.update(parse_config_text(default_path.read_text()))
    else:
        values.update(parse_config_text(Path(path).read_text()))
    if overrides:
        for key, val in overrides.items():
            if val is None:
                continue
            if key not in _SCALAR_KEYS:
                raise DomainError(f"unknown config key {key!r}")
            values[key] = _SCALAR_KEYS[key](val)
    prec_kwargs = {k: values.pop(k) for k in ("abs_tol", "quad_tol", "series_terms") if k in values}
    cfg = RunConfig(precision=Precision(**prec_kwargs), **values)
    return cfg


def with_precision(cfg: RunConfig, **kwargs) -> RunConfig:
    return replace(cfg, precision=replace(cfg.precision, **kwargs))


def data_dir() -> Path:
    """Locate the canonical fixture directory.

    Order: $CZETA_DATA, ./data relative to cwd, data/ at the repository root
    (two levels above the package, for editable installs).
    """
    env = os.environ.get("CZETA_DATA")
    if env:
        return Path(env)
    local = Path.cwd() / "data"
    if local.is_dir():
        return local
    repo = Path(__file__).resolve().parents[2] / "data"
    return repo


def file_sha256(path: str | os.PathLike) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()
