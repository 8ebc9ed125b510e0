"""Frame-phase durations for every (paradigm, control-channel) combination.

All durations are held as integer nanoseconds so the phase-sum identity
(setup + algorithmic + ack + payload = frame length) is exact; conversion to
seconds happens only at the reporting boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

from risctl.errors import ConfigurationError, ContractError

NS_PER_S = 1_000_000_000

OCE = "oce"
BSW_FIXED = "bsw-fixed"
BSW_FLEXIBLE = "bsw-flexible"
PARADIGMS = (OCE, BSW_FIXED, BSW_FLEXIBLE)

OBCC = "obcc"
IBCC = "ibcc"
CC_KINDS = (OBCC, IBCC)


def _to_ns(seconds: float) -> int:
    return round(seconds * NS_PER_S)


@dataclass(frozen=True)
class FrameParams:
    """Frame-level timing inputs, nanoseconds except the TTI count ``a_ttis``."""

    tau_ns: int
    t_ns: int
    tau_s_ns: int
    a_ttis: int
    t_n_ns: int | None = None
    p_override: int | None = None

    def __post_init__(self):
        if not (0 < self.tau_s_ns < self.t_ns):
            raise ConfigurationError("guard period must satisfy 0 < tau_s < T")
        if self.tau_ns < self.t_ns:
            raise ConfigurationError("frame must span at least one TTI")
        if self.a_ttis < 0:
            raise ConfigurationError("optimization duration A must be >= 0")

    @classmethod
    def from_seconds(
        cls,
        tau_s: float,
        t_s: float,
        tau_s_guard_s: float,
        a_ttis: int,
        t_n_s: float | None = None,
        p_override: int | None = None,
    ) -> "FrameParams":
        return cls(
            tau_ns=_to_ns(tau_s),
            t_ns=_to_ns(t_s),
            tau_s_ns=_to_ns(tau_s_guard_s),
            a_ttis=a_ttis,
            t_n_ns=None if t_n_s is None else _to_ns(t_n_s),
            p_override=p_override,
        )


@dataclass(frozen=True)
class FrameTiming:
    """Realized phase durations of one frame, nanoseconds."""

    tau_ns: int
    tau_set_ns: int
    tau_alg_ns: int
    tau_ack_ns: int
    tau_pay_ns: int

    @property
    def tau_pay_s(self) -> float:
        return self.tau_pay_ns / NS_PER_S

    @property
    def payload_fraction(self) -> float:
        return self.tau_pay_ns / self.tau_ns

    @property
    def overhead_ns(self) -> int:
        return self.tau_set_ns + self.tau_alg_ns + self.tau_ack_ns


def setup_duration(cc_kind: str, t_ns: int) -> int:
    """One TTI under OBCC; three under IBCC (SET-R plus its feedback)."""
    if t_ns <= 0:
        raise ConfigurationError("TTI duration must be positive")
    if cc_kind == OBCC:
        return t_ns
    if cc_kind == IBCC:
        return 3 * t_ns
    raise ConfigurationError(f"unknown control-channel kind {cc_kind!r}")


def ack_duration(cc_kind: str, t_ns: int, tau_s_ns: int) -> int:
    """Mirror of the setup phase plus the switching guard before the payload."""
    return setup_duration(cc_kind, t_ns) + tau_s_ns


def algorithmic_duration(
    paradigm: str,
    t_ns: int,
    cardinality: int,
    a_ttis: int,
    c_star: int | None = None,
) -> int:
    """Sweep/optimization time.

    OCE: (C + A) TTIs. Fixed-frame sweep: C TTIs. Flexible-frame sweep:
    (2 c* - 1) TTIs with ``c_star`` the 1-based accepted index; a sweep that
    exhausts the codebook consumes (2C - 1) TTIs.
    """
    if paradigm == OCE:
        return (cardinality + a_ttis) * t_ns
    if paradigm == BSW_FIXED:
        return cardinality * t_ns
    if paradigm == BSW_FLEXIBLE:
        if c_star is None:
            raise ContractError("flexible frame timing needs the realized c_star")
        if not (1 <= c_star <= cardinality):
            raise ContractError(f"c_star={c_star} outside 1..{cardinality}")
        return (2 * c_star - 1) * t_ns
    raise ConfigurationError(f"unknown paradigm {paradigm!r}")


def pilot_length(frame: FrameParams) -> int:
    """floor((T - tau_s) / T_n) samples; an explicit override wins."""
    if frame.p_override is not None:
        if frame.p_override < 1:
            raise ConfigurationError("pilot length override must be >= 1")
        return frame.p_override
    if frame.t_n_ns is None or frame.t_n_ns <= 0:
        raise ConfigurationError("symbol period T_n needed when p is not set")
    p = (frame.t_ns - frame.tau_s_ns) // frame.t_n_ns
    if p < 1:
        raise ConfigurationError("pilot length evaluates to zero; shrink T_n or tau_s")
    return int(p)


def payload_time(tau_ns: int, tau_set_ns: int, tau_alg_ns: int, tau_ack_ns: int) -> int:
    """Remaining frame time, clamped at zero (infeasible frames carry no payload)."""
    return max(0, tau_ns - tau_set_ns - tau_alg_ns - tau_ack_ns)


def frame_timing(
    paradigm: str,
    cc_kind: str,
    frame: FrameParams,
    cardinality: int,
    c_star: int | None = None,
) -> FrameTiming:
    """Assemble all four phase durations for one frame."""
    if paradigm == OCE and frame.a_ttis < 1:
        raise ConfigurationError("OCE needs A >= 1 (ACK-U guard assumption)")
    tau_set = setup_duration(cc_kind, frame.t_ns)
    if paradigm == BSW_FLEXIBLE and c_star is None:
        c_star = cardinality  # exhausted sweep: (2C - 1) TTIs
    tau_alg = algorithmic_duration(paradigm, frame.t_ns, cardinality, frame.a_ttis, c_star)
    tau_ack = ack_duration(cc_kind, frame.t_ns, frame.tau_s_ns)
    tau_pay = payload_time(frame.tau_ns, tau_set, tau_alg, tau_ack)
    return FrameTiming(
        tau_ns=frame.tau_ns,
        tau_set_ns=tau_set,
        tau_alg_ns=tau_alg,
        tau_ack_ns=tau_ack,
        tau_pay_ns=tau_pay,
    )
