"""Control-packet bit budgets, outage probabilities and reliability solutions.

Every frame needs four control packets: SET-U and ACK-U toward the UE,
SET-R and ACK-R toward the surface controller. Each packet fails through a
Rayleigh outage event; correct control requires all four to get through.
The closed forms below invert that product for reliability targets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from risctl.errors import ConfigurationError, ContractError
from risctl.timing import NS_PER_S

SET_U = "SET-U"
SET_R = "SET-R"
ACK_U = "ACK-U"
ACK_R = "ACK-R"
PACKETS = (SET_U, SET_R, ACK_U, ACK_R)
UE_PACKETS = (SET_U, ACK_U)
RIS_PACKETS = (SET_R, ACK_R)


@dataclass(frozen=True)
class BitFields:
    """Bit widths of the control-packet fields."""

    b_id: int = 8
    b_frame: int = 16
    b_guard: int = 16
    b_conf: int = 8
    b_se: int = 6
    b_quant: int = 2

    def __post_init__(self):
        for name in ("b_id", "b_frame", "b_guard", "b_conf", "b_se", "b_quant"):
            if getattr(self, name) < 0:
                raise ConfigurationError(f"{name} must be >= 0")


@dataclass(frozen=True)
class PacketBudget:
    """Informative bits and useful transmission time of one control packet."""

    packet: str
    bits: int
    useful_time_s: float
    bandwidth_hz: float
    destination: str  # "ue" | "risc"

    @property
    def spectral_load(self) -> float:
        """bits / (useful_time * bandwidth), the outage exponent."""
        return self.bits / (self.useful_time_s * self.bandwidth_hz)


def packet_bits(
    paradigm: str,
    packet: str,
    fields: BitFields,
    n_elements: int,
    codebook_cardinality: int,
) -> int:
    """Informative bits of one packet; ``paradigm`` is "oce" or "bsw"."""
    preamble = fields.b_id + 1
    if packet == SET_U:
        return preamble + fields.b_frame + fields.b_guard + fields.b_conf
    if packet == SET_R:
        return preamble + fields.b_frame + codebook_cardinality * fields.b_conf
    if packet == ACK_U:
        return preamble + (fields.b_se if paradigm == "oce" else 0)
    if packet == ACK_R:
        return preamble + (n_elements * fields.b_quant if paradigm == "oce" else fields.b_conf)
    raise ConfigurationError(f"unknown packet tag {packet!r}")


def useful_time_ns(paradigm: str, packet: str, t_ns: int, tau_s_ns: int, a_ttis: int = 1) -> int:
    """TTI time left after switching guards for one packet.

    The ACK-U keeps the whole TTI under OCE only while the optimization spans
    at least one TTI (the surface switches during it, not during the ACK).
    """
    if t_ns <= tau_s_ns:
        raise ConfigurationError("TTI must exceed the guard period")
    if packet == SET_U:
        return t_ns - tau_s_ns
    if packet == ACK_U:
        if paradigm == "oce":
            if a_ttis < 1:
                raise ContractError("OCE ACK-U guard-free time requires A >= 1")
            return t_ns
        return t_ns - tau_s_ns
    if packet in (SET_R, ACK_R):
        return t_ns
    raise ConfigurationError(f"unknown packet tag {packet!r}")


def build_budgets(
    paradigm: str,
    fields: BitFields,
    n_elements: int,
    codebook_cardinality: int,
    t_ns: int,
    tau_s_ns: int,
    a_ttis: int,
    bandwidth_ue_hz: float,
    bandwidth_ris_hz: float,
) -> list[PacketBudget]:
    """All four per-frame budgets, in (SET-U, SET-R, ACK-U, ACK-R) order."""
    budgets = []
    for packet in PACKETS:
        dest = "ue" if packet in UE_PACKETS else "risc"
        budgets.append(
            PacketBudget(
                packet=packet,
                bits=packet_bits(paradigm, packet, fields, n_elements, codebook_cardinality),
                useful_time_s=useful_time_ns(paradigm, packet, t_ns, tau_s_ns, a_ttis) / NS_PER_S,
                bandwidth_hz=bandwidth_ue_hz if dest == "ue" else bandwidth_ris_hz,
                destination=dest,
            )
        )
    return budgets


def packet_outage(bits: int, useful_time_s: float, bandwidth_hz: float, lam: float) -> float:
    """Outage probability 1 - exp(-(2^(b/(tau B)) - 1) / lambda)."""
    if useful_time_s <= 0 or bandwidth_hz <= 0:
        raise ValueError("useful time and bandwidth must be positive")
    if math.isinf(lam):
        return 0.0
    if lam <= 0:
        raise ConfigurationError(f"mean control SNR must be positive, got {lam}")
    threshold = 2.0 ** (bits / (useful_time_s * bandwidth_hz)) - 1.0
    return 1.0 - math.exp(-threshold / lam)


def _snr_sum_term(budgets: list[PacketBudget]) -> float:
    """S = sum_i 2^(b_i/(tau_i B_i)) - 2 over a destination's two packets."""
    if len(budgets) != 2:
        raise ContractError("each destination carries exactly two packets")
    return sum(2.0 ** b.spectral_load for b in budgets) - 2.0


def correct_control_prob(budgets: list[PacketBudget], lambda_u: float, lambda_r: float) -> float:
    """Probability that all four control packets are received.

    Equals exp(-S_u/lambda_u) * exp(-S_r/lambda_r); an infinite lambda_r
    (out-of-band link) makes the surface factor one.
    """
    if len(budgets) != 4:
        raise ContractError("exactly four packet budgets expected")
    ue = [b for b in budgets if b.destination == "ue"]
    ris = [b for b in budgets if b.destination == "risc"]
    p = 1.0
    for group, lam in ((ue, lambda_u), (ris, lambda_r)):
        if math.isinf(lam):
            continue
        p *= math.exp(-_snr_sum_term(group) / lam)
    return p


def outage_probabilities(budgets: list[PacketBudget], lambda_u: float, lambda_r: float) -> np.ndarray:
    """Per-packet outage probabilities in budget order."""
    lams = {"ue": lambda_u, "risc": lambda_r}
    return np.array(
        [packet_outage(b.bits, b.useful_time_s, b.bandwidth_hz, lams[b.destination]) for b in budgets]
    )


def simulate_control_success(
    budgets: list[PacketBudget],
    lambda_u: float,
    lambda_r: float,
    n_trials: int,
    rng: np.random.Generator,
) -> float:
    """Monte Carlo check of the closed form: 4 Bernoulli draws per trial."""
    p_out = outage_probabilities(budgets, lambda_u, lambda_r)
    failures = rng.random((n_trials, len(budgets))) < p_out[None, :]
    return float(np.mean(~failures.any(axis=1)))


def min_lambda_obcc(target_pcc: float, ue_budgets: list[PacketBudget]) -> float:
    """Smallest mean UE-CC SNR meeting the target when the surface link is error free."""
    if not (0.0 < target_pcc < 1.0):
        raise ConfigurationError("target probability must be in (0, 1)")
    s_u = _snr_sum_term(ue_budgets)
    if s_u <= 0.0:
        return 0.0
    return s_u / (-math.log(target_pcc))


def reliability_frontier(
    target_pcc: float,
    ue_budgets: list[PacketBudget],
    ris_budgets: list[PacketBudget],
    lambda_u_grid: list[float],
) -> list[tuple[float, float | None]]:
    """Minimal lambda_r per lambda_u grid point; None marks infeasibility."""
    if not (0.0 < target_pcc < 1.0):
        raise ConfigurationError("target probability must be in (0, 1)")
    s_u = _snr_sum_term(ue_budgets)
    s_r = _snr_sum_term(ris_budgets)
    out: list[tuple[float, float | None]] = []
    for lam_u in lambda_u_grid:
        if lam_u <= 0:
            raise ConfigurationError("grid values must be positive")
        denom = -math.log(target_pcc) - s_u / lam_u
        out.append((lam_u, s_r / denom if denom > 0 else None))
    return out
