import numpy as np
import pytest

from risctl import timing
from risctl.errors import ConfigurationError, ContractError


def _frame(tau_ms=60.0, t_ms=0.5, tau_s_us=50.0, a=5, **kw):
    return timing.FrameParams.from_seconds(
        tau_s=tau_ms * 1e-3, t_s=t_ms * 1e-3, tau_s_guard_s=tau_s_us * 1e-6, a_ttis=a, **kw
    )


def test_setup_and_ack_durations():
    t = 500_000  # 0.5 ms in ns
    assert timing.setup_duration(timing.OBCC, t) == t
    assert timing.setup_duration(timing.IBCC, t) == 3 * t
    assert timing.ack_duration(timing.OBCC, t, 50_000) == t + 50_000
    assert timing.ack_duration(timing.IBCC, t, 50_000) == 3 * t + 50_000


def test_algorithmic_durations():
    t = 500_000
    assert timing.algorithmic_duration(timing.OCE, t, 100, 5) == 105 * t
    assert timing.algorithmic_duration(timing.BSW_FIXED, t, 34, 0) == 34 * t
    assert timing.algorithmic_duration(timing.BSW_FLEXIBLE, t, 100, 0, c_star=7) == 13 * t
    assert timing.algorithmic_duration(timing.BSW_FLEXIBLE, t, 100, 0, c_star=100) == 199 * t
    with pytest.raises(ContractError):
        timing.algorithmic_duration(timing.BSW_FLEXIBLE, t, 100, 0)
    with pytest.raises(ContractError):
        timing.algorithmic_duration(timing.BSW_FLEXIBLE, t, 100, 0, c_star=0)


def test_oce_obcc_overhead_is_exact():
    ft = timing.frame_timing(timing.OCE, timing.OBCC, _frame(), cardinality=100)
    assert ft.overhead_ns == 53_550_000  # 53.55 ms on the nose
    assert ft.tau_pay_ns == 60_000_000 - 53_550_000
    assert ft.tau_set_ns + ft.tau_alg_ns + ft.tau_ack_ns + ft.tau_pay_ns == ft.tau_ns


def test_payload_clamps_at_zero():
    ft = timing.frame_timing(timing.OCE, timing.OBCC, _frame(tau_ms=50.0), cardinality=100)
    assert ft.tau_pay_ns == 0
    assert ft.payload_fraction == 0.0


def test_phase_sum_identity_random_parameters():
    rng = np.random.default_rng(20)
    for _ in range(50):
        t_ms = rng.uniform(0.1, 2.0)
        frame = _frame(
            tau_ms=rng.uniform(20, 300),
            t_ms=t_ms,
            tau_s_us=rng.uniform(1, t_ms * 900),
            a=int(rng.integers(1, 10)),
        )
        cardinality = int(rng.integers(10, 200))
        for paradigm in timing.PARADIGMS:
            for cc in timing.CC_KINDS:
                c_star = int(rng.integers(1, cardinality + 1))
                ft = timing.frame_timing(
                    paradigm, cc, frame, cardinality,
                    c_star=c_star if paradigm == timing.BSW_FLEXIBLE else None,
                )
                if ft.tau_pay_ns > 0:
                    assert ft.overhead_ns + ft.tau_pay_ns == ft.tau_ns


def test_pilot_length_floor_and_override():
    frame = _frame(t_n_s=66e-6)
    # (500 - 50) us / 66 us -> 6
    assert timing.pilot_length(frame) == 6
    assert timing.pilot_length(_frame(t_n_s=66e-6, p_override=4)) == 4
    with pytest.raises(ConfigurationError):
        timing.pilot_length(_frame())  # neither override nor symbol period


def test_frame_params_validation():
    with pytest.raises(ConfigurationError):
        _frame(tau_s_us=600.0)  # guard >= TTI
    with pytest.raises(ConfigurationError):
        _frame(tau_ms=0.2)  # frame shorter than a TTI
    with pytest.raises(ConfigurationError):
        timing.frame_timing(timing.OCE, timing.OBCC, _frame(a=0), cardinality=100)
