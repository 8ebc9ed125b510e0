import math

import pytest

from risctl import config
from risctl.errors import ConfigurationError


def test_empty_file_gives_builtin_defaults():
    cfg = config.parse_config("")
    assert cfg.paradigm == "oce" and cfg.cc_kind == "obcc"
    assert cfg.n_elements == 100 and cfg.c_ce == 100
    assert cfg.rho_u_dbm == 24.0 and cfg.sigma_b2_dbm == -94.0
    assert cfg.tau_ms == 60.0 and cfg.t_ms == 0.5 and cfg.tau_s_us == 50.0
    assert cfg.a_ttis == 5 and cfg.gamma0_db == 10.9
    assert math.isinf(cfg.lambda_u) and math.isinf(cfg.lambda_r)
    assert (cfg.b_id, cfg.b_frame, cfg.b_guard, cfg.b_conf, cfg.b_se, cfg.b_quant) == (
        8, 16, 16, 8, 6, 2,
    )


def test_comments_and_spacing():
    cfg = config.parse_config("# comment\n  tau_ms = 90  # trailing\n\nparadigm=bsw-fixed\n")
    assert cfg.tau_ms == 90.0 and cfg.paradigm == "bsw-fixed"


def test_unknown_key_names_line():
    with pytest.raises(ConfigurationError, match="line 2.*unknown key 'taus'"):
        config.parse_config("tau_ms = 60\ntaus = 1\n")


def test_bad_value_names_key_and_line():
    with pytest.raises(ConfigurationError, match="line 1.*'n_trials'"):
        config.parse_config("n_trials = many\n")


def test_guard_exceeding_tti_rejected():
    with pytest.raises(ConfigurationError, match="tau_s must be < T"):
        config.parse_config("tau_s_us = 600\n")


def test_db_keys_convert_to_linear():
    cfg = config.parse_config("lambda_u_db = 10\nlambda_r_db = inf\n")
    assert cfg.lambda_u == pytest.approx(10.0)
    assert math.isinf(cfg.lambda_r)


def test_ae_mode_values():
    assert config.parse_config("ae_mode = margin:2.5\n").ae_mode == "margin:2.5"
    with pytest.raises(ConfigurationError):
        config.parse_config("ae_mode = sloppy\n")


def test_bsw_cardinality_property():
    cfg = config.parse_config("paradigm = bsw-fixed\n")
    assert cfg.bsw_cardinality == 34
    assert config.parse_config("paradigm = bsw-flexible\n").bsw_cardinality == 100


def test_default_lines_round_trip():
    text = "\n".join(config.default_lines())
    cfg = config.parse_config(text)
    assert cfg == config.ExperimentConfig()


def test_overrides_revalidate():
    cfg = config.parse_config("")
    with pytest.raises(ConfigurationError):
        config.with_overrides(cfg, tau_ms=0.1)
