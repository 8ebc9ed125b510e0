"""Channel-estimation paradigm: pilots, least squares, phase conjugation.

The pipeline sounds the channel through every codebook configuration, builds
the least-squares estimate of the equivalent per-element channel, aligns the
phases on it and adapts the spectral efficiency to the estimated SNR. Pilot
sequences are never materialized: the matched-filter output statistic
(phi^T z plus complex Gaussian noise of variance sigma_b^2 / (p rho_u)) is
simulated directly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from risctl.codebook import Codebook
from risctl.errors import ConfigurationError, EstimationError
from risctl.scenario import ChannelRealization, RadioParams


@dataclass(frozen=True)
class OceOutcome:
    estimated_channel: np.ndarray
    optimal_config: np.ndarray
    estimated_snr: float
    actual_snr: float
    spectral_efficiency: float
    algorithmic_error: bool


def pilot_observation(
    z: np.ndarray,
    config: np.ndarray,
    rho_u: float,
    sigma_b2: float,
    p: int,
    rng: np.random.Generator,
) -> complex:
    """One normalized matched-filter output: phi^T z + CN(0, sigma^2/(p rho))."""
    if p < 1:
        raise ConfigurationError(f"pilot length must be >= 1, got {p}")
    if rho_u <= 0 or sigma_b2 < 0:
        raise ConfigurationError("powers must be positive")
    var = sigma_b2 / (p * rho_u)
    noise = np.sqrt(var / 2.0) * (rng.standard_normal() + 1j * rng.standard_normal())
    return complex(config @ z + noise)


def _pilot_observations(z, theta, rho_u, sigma_b2, p, rng) -> np.ndarray:
    """Vectorized pilot round over all codebook columns (same statistics)."""
    c = theta.shape[1]
    var = sigma_b2 / (p * rho_u)
    noise = np.sqrt(var / 2.0) * (rng.standard_normal(c) + 1j * rng.standard_normal(c))
    return theta.T @ z + noise


def ls_estimate(
    observations: np.ndarray,
    theta: np.ndarray,
    cardinality: int,
    check_gram: bool = True,
) -> np.ndarray:
    """Least-squares channel estimate (1/C) theta^* y.

    Valid only when theta^* theta^T = C I_N; the check can be skipped by
    callers that validated the codebook once.
    """
    if check_gram:
        gram = np.conj(theta) @ theta.T
        target = cardinality * np.eye(theta.shape[0])
        if np.max(np.abs(gram - target)) > 1e-9 * cardinality:
            raise EstimationError("codebook matrix lacks the orthogonality property")
    return (np.conj(theta) @ observations) / cardinality


def optimal_config(z_hat: np.ndarray) -> np.ndarray:
    """Phase-conjugate configuration: entry n is exp(-j angle(z_hat_n)).

    Aligns every term so phi^T z_hat = sum |z_hat_n|. A zero component maps
    to phase 0.
    """
    return np.exp(-1j * np.angle(z_hat))


def parse_ae_mode(mode: str) -> tuple[str, float]:
    """Split an ae_mode string into (kind, margin_db)."""
    if mode in ("strict", "negligible"):
        return mode, 0.0
    if mode.startswith("margin:"):
        try:
            return "margin", float(mode.split(":", 1)[1])
        except ValueError:
            pass
    raise ConfigurationError(
        f"ae_mode must be strict | negligible | margin:<dB>, got {mode!r}"
    )


def run_oce(
    channel: ChannelRealization,
    codebook: Codebook,
    radio: RadioParams,
    p: int,
    rng: np.random.Generator,
    ae_mode: str = "negligible",
) -> OceOutcome:
    """Full pipeline: pilot round, LS estimate, phase alignment, adaptive SE."""
    if codebook.kind != "channel-estimation":
        raise ConfigurationError("run_oce needs a channel-estimation codebook")
    if codebook.cardinality < channel.z_d.size:
        raise ConfigurationError("codebook cardinality below the element count")
    if not codebook.has_gram_identity():
        raise EstimationError("codebook matrix lacks the orthogonality property")
    mode, margin_db = parse_ae_mode(ae_mode)

    y = _pilot_observations(
        channel.z_d, codebook.theta, radio.rho_u, radio.sigma_b2, p, rng
    )
    z_hat = ls_estimate(y, codebook.theta, codebook.cardinality, check_gram=False)
    phi = optimal_config(z_hat)
    scale = radio.snr_scale
    estimated_snr = scale * np.abs(phi @ z_hat) ** 2
    actual_snr = scale * np.abs(phi @ channel.z_d) ** 2

    if mode == "strict":
        error = bool(estimated_snr > actual_snr)
    elif mode == "margin":
        error = bool(estimated_snr > actual_snr * 10.0 ** (margin_db / 10.0))
    else:
        error = False

    return OceOutcome(
        estimated_channel=z_hat,
        optimal_config=phi,
        estimated_snr=float(estimated_snr),
        actual_snr=float(actual_snr),
        spectral_efficiency=float(np.log2(1.0 + estimated_snr)),
        algorithmic_error=error,
    )
