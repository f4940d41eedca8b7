"""Run configuration: flat key=value text (INI style) or the JSON equivalent.

Every physics value is dimensionless (units of g). Unknown keys are
rejected by name so typos fail loudly; --override key=value pairs are
applied on top of the file before validation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .model import SystemParams
from .dynamics import TimeGrid

MODES = ("evolve", "master", "sweep", "wigner", "chain", "analyze")
SWEEP_AXES = ("delta", "f_drive", "kappa", "gamma_rd", "gamma_pd")

_FLOAT_KEYS = {
    "f_drive", "delta", "dxl", "kappa", "gamma_rd", "gamma_pd", "g_coupling",
    "t_final", "dt", "sweep_start", "sweep_stop", "stationary_tol",
    "stationary_tmax", "stationary_guard", "packet_valley_frac",
    "packet_min_norm", "wigner_zmax", "chain_lambda_lo", "chain_lambda_hi",
    "snapshot_time",
}
_INT_KEYS = {"n_max", "output_stride", "sweep_count", "wigner_points",
             "chain_size", "threads"}
_BOOL_KEYS = {"stationary", "store_states", "write_trajectory"}
_STR_KEYS = {"mode", "initial_state", "sweep_axis", "sweep_mode",
             "chain_branch", "input_timeseries", "input_pnt", "out_dir"}
_ALL_KEYS = _FLOAT_KEYS | _INT_KEYS | _BOOL_KEYS | _STR_KEYS


@dataclass
class SweepSpec:
    axis: str
    start: float
    stop: float
    count: int
    mode: str = "max_mean"  # or "stationary"

    def values(self) -> list[float]:
        if self.count == 1:
            return [self.start]
        step = (self.stop - self.start) / (self.count - 1)
        return [self.start + i * step for i in range(self.count)]


@dataclass
class RunConfig:
    mode: str
    params: SystemParams
    grid: TimeGrid | None
    initial_state: str = "bare_ground"
    sweep: SweepSpec | None = None
    out_dir: str = "."
    threads: int = 1
    store_states: bool = False
    stationary: bool = False
    stationary_tol: float = 1e-7
    stationary_tmax: float | None = None
    stationary_guard: float = 1e-8
    packet_valley_frac: float = 0.1
    packet_min_norm: float = 0.02
    wigner_zmax: float = 12.0
    wigner_points: int = 201
    snapshot_time: float | None = None
    chain_branch: str = "-"
    chain_size: int = 200
    chain_lambda_lo: float | None = None
    chain_lambda_hi: float | None = None
    input_timeseries: str | None = None
    input_pnt: str | None = None
    write_trajectory: bool = False
    raw: dict = field(default_factory=dict, repr=False)


def _convert(key: str, value):
    if key not in _ALL_KEYS:
        raise ConfigError(key, "unknown key")
    try:
        if key in _FLOAT_KEYS:
            return float(value)
        if key in _INT_KEYS:
            return int(value)
        if key in _BOOL_KEYS:
            if isinstance(value, bool):
                return value
            s = str(value).strip().lower()
            if s in ("true", "1", "yes", "on"):
                return True
            if s in ("false", "0", "no", "off"):
                return False
            raise ValueError(f"not a boolean: {value!r}")
        return str(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(key, str(exc)) from None


def parse_config_text(text: str, path_hint: str = "<config>") -> dict:
    """Parse flat key = value lines (# comments) into a raw dict."""
    raw: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path_hint}:{lineno}", f"expected 'key = value', got {stripped!r}")
        key, _, value = stripped.partition("=")
        raw[key.strip()] = value.strip()
    return raw


def load_raw(path: str | Path) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read config: {exc}") from None
    if path.suffix == ".json":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(str(path), f"invalid JSON: {exc}") from None
        if not isinstance(raw, dict):
            raise ConfigError(str(path), "JSON config must be an object")
        return raw
    return parse_config_text(text, str(path))


def apply_overrides(raw: dict, overrides: list[str]) -> dict:
    out = dict(raw)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(item, "override must look like key=value")
        key, _, value = item.partition("=")
        out[key.strip()] = value.strip()
    return out


def build_config(raw: dict, mode: str | None = None) -> RunConfig:
    """Validate the raw dict and assemble a RunConfig; mode from the CLI
    subcommand wins over the config file."""
    values = {k: _convert(k, v) for k, v in raw.items()}

    mode = mode or values.get("mode")
    if mode is None:
        raise ConfigError("mode", "missing (set in config or pick a subcommand)")
    if mode not in MODES:
        raise ConfigError("mode", f"must be one of {', '.join(MODES)}")

    def need(key):
        if key not in values:
            raise ConfigError(key, f"required for mode '{mode}'")
        return values[key]

    params = None
    if mode in ("evolve", "master", "sweep", "wigner", "chain", "analyze"):
        try:
            params = SystemParams(
                f_drive=need("f_drive"),
                delta=need("delta"),
                dxl=values.get("dxl", 0.0),
                kappa=values.get("kappa", 0.0),
                gamma_rd=values.get("gamma_rd", 0.0),
                gamma_pd=values.get("gamma_pd", 0.0),
                n_max=values.get("n_max", 160),
                g_coupling=values.get("g_coupling", 1.0),
            )
        except ValueError as exc:
            raise ConfigError("params", str(exc)) from None

    grid = None
    if mode in ("evolve", "master", "sweep", "wigner"):
        try:
            grid = TimeGrid(
                t_final=need("t_final") if mode != "sweep" else values.get("t_final", 300.0),
                dt=values.get("dt", 1e-3),
                output_stride=values.get("output_stride", 500),
            )
        except ValueError as exc:
            raise ConfigError("grid", str(exc)) from None

    sweep = None
    if mode == "sweep":
        axis = need("sweep_axis")
        if axis not in SWEEP_AXES:
            raise ConfigError("sweep_axis", f"must be one of {', '.join(SWEEP_AXES)}")
        count = need("sweep_count")
        if count < 2:
            raise ConfigError("sweep_count", "must be >= 2")
        smode = values.get("sweep_mode", "max_mean")
        if smode not in ("max_mean", "stationary"):
            raise ConfigError("sweep_mode", "must be max_mean or stationary")
        sweep = SweepSpec(axis=axis, start=need("sweep_start"),
                          stop=need("sweep_stop"), count=count, mode=smode)

    if mode == "chain" and values.get("chain_branch", "-") not in ("+", "-"):
        raise ConfigError("chain_branch", "must be '+' or '-'")

    return RunConfig(
        mode=mode,
        params=params,
        grid=grid,
        initial_state=values.get("initial_state", "bare_ground"),
        sweep=sweep,
        out_dir=values.get("out_dir", "."),
        threads=values.get("threads", 1),
        store_states=values.get("store_states", False),
        stationary=values.get("stationary", False),
        stationary_tol=values.get("stationary_tol", 1e-7),
        stationary_tmax=values.get("stationary_tmax"),
        stationary_guard=values.get("stationary_guard", 1e-8),
        packet_valley_frac=values.get("packet_valley_frac", 0.1),
        packet_min_norm=values.get("packet_min_norm", 0.02),
        wigner_zmax=values.get("wigner_zmax", 12.0),
        wigner_points=values.get("wigner_points", 201),
        snapshot_time=values.get("snapshot_time"),
        chain_branch=values.get("chain_branch", "-"),
        chain_size=values.get("chain_size", 200),
        chain_lambda_lo=values.get("chain_lambda_lo"),
        chain_lambda_hi=values.get("chain_lambda_hi"),
        input_timeseries=values.get("input_timeseries"),
        input_pnt=values.get("input_pnt"),
        write_trajectory=values.get("write_trajectory", False),
        raw=values,
    )
