"""Flat key=value configuration with documented defaults.

Every module parameter has a documented default so an empty file is a valid
configuration. dB-suffixed keys are converted to linear at load time; "inf"
is accepted for the control-channel mean SNRs (error-free link).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace

from risctl.errors import ConfigurationError
from risctl.timing import CC_KINDS, PARADIGMS


def _parse_float(v: str) -> float:
    return float(v)


def _parse_int(v: str) -> int:
    return int(v)


def _parse_db(v: str) -> float:
    """dB value -> linear; 'inf' passes through."""
    x = float(v)
    return math.inf if math.isinf(x) else 10.0 ** (x / 10.0)


def _parse_choice(*choices: str):
    def parse(v: str) -> str:
        if v not in choices:
            raise ValueError(f"expected one of {', '.join(choices)}")
        return v

    return parse


def _parse_ae_mode(v: str) -> str:
    if v in ("strict", "negligible") or v.startswith("margin:"):
        if v.startswith("margin:"):
            float(v.split(":", 1)[1])  # raises on garbage
        return v
    raise ValueError("expected strict | negligible | margin:<dB>")


def _parse_optional_float(v: str) -> float | None:
    return None if v.strip() == "" else float(v)


def _parse_str(v: str) -> str:
    return v


@dataclass(frozen=True)
class ExperimentConfig:
    """Typed view of a full experiment configuration (all linear units)."""

    # run
    paradigm: str = "oce"
    cc_kind: str = "obcc"
    n_trials: int = 10_000
    master_seed: int = 1
    output_path: str = ""
    # scenario
    n_elements: int = 100
    side_d_m: float = 20.0
    bs_x_m: float = 25.0
    bs_y_m: float = 5.0
    bs_z_m: float = 5.0
    carrier_frequency_hz: float = 3e9
    element_spacing_m: float | None = None
    # radio
    rho_u_dbm: float = 24.0
    rho_b_dbm: float = 24.0
    sigma_b2_dbm: float = -94.0
    sigma_u2_dbm: float = -94.0
    sigma_r2_dbm: float = -94.0
    bandwidth_data_hz: float = 180e3
    bandwidth_cc_ue_hz: float = 900e3
    bandwidth_cc_ris_hz: float = 900e3
    # codebook
    c_ce: int = 100
    bsw_stride: int = 3
    # frame
    tau_ms: float = 60.0
    t_ms: float = 0.5
    tau_s_us: float = 50.0
    a_ttis: int = 5
    t_n_us: float | None = None
    p: int = 1
    # paradigm knobs
    gamma0_db: float = 10.9
    ae_mode: str = "negligible"
    # control-channel mean SNRs (linear after parsing; inf = error free)
    lambda_u: float = math.inf
    lambda_r: float = math.inf
    # control packet content
    b_id: int = 8
    b_frame: int = 16
    b_guard: int = 16
    b_conf: int = 8
    b_se: int = 6
    b_quant: int = 2

    @property
    def gamma0(self) -> float:
        return 10.0 ** (self.gamma0_db / 10.0)

    @property
    def bsw_cardinality(self) -> int:
        if self.paradigm == "bsw-fixed":
            return -(-self.c_ce // self.bsw_stride)
        return self.c_ce


# key -> (dataclass field, parser, documented default text)
_SCHEMA: dict[str, tuple[str, object]] = {
    "paradigm": ("paradigm", _parse_choice(*PARADIGMS)),
    "cc_kind": ("cc_kind", _parse_choice(*CC_KINDS)),
    "n_trials": ("n_trials", _parse_int),
    "master_seed": ("master_seed", _parse_int),
    "output_path": ("output_path", _parse_str),
    "n_elements": ("n_elements", _parse_int),
    "side_d_m": ("side_d_m", _parse_float),
    "bs_x_m": ("bs_x_m", _parse_float),
    "bs_y_m": ("bs_y_m", _parse_float),
    "bs_z_m": ("bs_z_m", _parse_float),
    "carrier_frequency_hz": ("carrier_frequency_hz", _parse_float),
    "element_spacing_m": ("element_spacing_m", _parse_optional_float),
    "rho_u_dbm": ("rho_u_dbm", _parse_float),
    "rho_b_dbm": ("rho_b_dbm", _parse_float),
    "sigma_b2_dbm": ("sigma_b2_dbm", _parse_float),
    "sigma_u2_dbm": ("sigma_u2_dbm", _parse_float),
    "sigma_r2_dbm": ("sigma_r2_dbm", _parse_float),
    "bandwidth_data_hz": ("bandwidth_data_hz", _parse_float),
    "bandwidth_cc_ue_hz": ("bandwidth_cc_ue_hz", _parse_float),
    "bandwidth_cc_ris_hz": ("bandwidth_cc_ris_hz", _parse_float),
    "c_ce": ("c_ce", _parse_int),
    "bsw_stride": ("bsw_stride", _parse_int),
    "tau_ms": ("tau_ms", _parse_float),
    "t_ms": ("t_ms", _parse_float),
    "tau_s_us": ("tau_s_us", _parse_float),
    "a_ttis": ("a_ttis", _parse_int),
    "t_n_us": ("t_n_us", _parse_optional_float),
    "p": ("p", _parse_int),
    "gamma0_db": ("gamma0_db", _parse_float),
    "ae_mode": ("ae_mode", _parse_ae_mode),
    "lambda_u_db": ("lambda_u", _parse_db),
    "lambda_r_db": ("lambda_r", _parse_db),
    "b_id": ("b_id", _parse_int),
    "b_frame": ("b_frame", _parse_int),
    "b_guard": ("b_guard", _parse_int),
    "b_conf": ("b_conf", _parse_int),
    "b_se": ("b_se", _parse_int),
    "b_quant": ("b_quant", _parse_int),
}


def _validate(cfg: ExperimentConfig) -> ExperimentConfig:
    if cfg.tau_s_us >= cfg.t_ms * 1000.0:
        raise ConfigurationError("tau_s must be < T")
    if cfg.tau_ms < cfg.t_ms:
        raise ConfigurationError("tau must span at least one TTI")
    if cfg.n_trials < 1:
        raise ConfigurationError("n_trials must be >= 1")
    if cfg.c_ce < cfg.n_elements:
        raise ConfigurationError("c_ce must be >= n_elements")
    if cfg.bsw_stride < 1:
        raise ConfigurationError("bsw_stride must be >= 1")
    if cfg.p < 1 and cfg.t_n_us is None:
        raise ConfigurationError("set a positive pilot length p or a symbol period t_n_us")
    if cfg.cc_kind == "ibcc":
        if cfg.bandwidth_cc_ue_hz < cfg.bandwidth_data_hz:
            raise ConfigurationError("IBCC requires bandwidth_cc_ue_hz >= bandwidth_data_hz")
        if cfg.bandwidth_cc_ris_hz < cfg.bandwidth_data_hz:
            raise ConfigurationError("IBCC requires bandwidth_cc_ris_hz >= bandwidth_data_hz")
    if cfg.paradigm == "oce" and cfg.a_ttis < 1:
        raise ConfigurationError("OCE needs a_ttis >= 1")
    return cfg


def parse_config(text: str) -> ExperimentConfig:
    """Parse `key = value` lines (# comments allowed) into a validated config."""
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected key = value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _SCHEMA:
            raise ConfigurationError(f"line {lineno}: unknown key {key!r}")
        field_name, parser = _SCHEMA[key]
        try:
            values[field_name] = parser(value)
        except ValueError as exc:
            raise ConfigurationError(f"line {lineno}: bad value for {key!r}: {exc}") from exc
    return _validate(ExperimentConfig(**values))


def load_config(path: str | None) -> ExperimentConfig:
    if path is None:
        return _validate(ExperimentConfig())
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def with_overrides(cfg: ExperimentConfig, **overrides) -> ExperimentConfig:
    return _validate(replace(cfg, **overrides))


def default_lines() -> list[str]:
    """One `key = value` line per configuration key, at its default."""
    defaults = ExperimentConfig()
    inverse = {}
    for key, (field_name, parser) in _SCHEMA.items():
        value = getattr(defaults, field_name)
        if parser is _parse_db:
            value = "inf" if math.isinf(value) else 10.0 * math.log10(value)
        if value is None:
            value = ""
        inverse[key] = value
    return [f"{k} = {v}" for k, v in inverse.items()]
