"""Beam-sweeping paradigm: per-configuration SNR probes and selection rules.

Each swept configuration yields a single noisy SNR estimate. The fixed frame
sweeps the whole codebook and takes the argmax among candidates above the
target; the flexible frame stops at the first estimate exceeding the target,
without look-ahead. The spectral efficiency is fixed a priori by the target
SNR and never depends on the channel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from risctl.codebook import Codebook
from risctl.errors import ConfigurationError
from risctl.scenario import ChannelRealization, RadioParams


@dataclass(frozen=True)
class BswOutcome:
    selected_index: int | None  # 0-based codebook index
    sweep_count: int
    estimated_snr: float | None
    actual_snr: float | None
    target_snr: float
    spectral_efficiency: float
    algorithmic_error: bool
    error_kind: str  # none | no-config | overestimation


def sweep_observation(
    z: np.ndarray,
    config: np.ndarray,
    rho_u: float,
    sigma_b2: float,
    p: int,
    rng: np.random.Generator,
) -> tuple[complex, float]:
    """One probe: y = sqrt(rho) phi^T z + CN(0, sigma^2/p); estimate |y|^2/sigma^2."""
    if p < 1:
        raise ConfigurationError(f"pilot length must be >= 1, got {p}")
    if rho_u <= 0 or sigma_b2 <= 0:
        raise ConfigurationError("powers must be positive")
    var = sigma_b2 / p
    noise = np.sqrt(var / 2.0) * (rng.standard_normal() + 1j * rng.standard_normal())
    y = complex(np.sqrt(rho_u) * (config @ z) + noise)
    return y, abs(y) ** 2 / sigma_b2


def sweep_estimates(
    z: np.ndarray,
    theta: np.ndarray,
    rho_u: float,
    sigma_b2: float,
    p: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """All per-configuration SNR estimates for one trial, as a C-vector."""
    c = theta.shape[1]
    var = sigma_b2 / p
    noise = np.sqrt(var / 2.0) * (rng.standard_normal(c) + 1j * rng.standard_normal(c))
    y = np.sqrt(rho_u) * (theta.T @ z) + noise
    return np.abs(y) ** 2 / sigma_b2


def select_fixed(estimates: np.ndarray, gamma0: float) -> int | None:
    """Argmax over candidates meeting the target; ties go to the lowest index."""
    estimates = np.asarray(estimates, dtype=float)
    if estimates.size == 0:
        raise ConfigurationError("empty estimate vector")
    mask = estimates >= gamma0
    if not mask.any():
        return None
    masked = np.where(mask, estimates, -np.inf)
    return int(np.argmax(masked))


def select_flexible(
    estimate_stream: Iterable[float],
    gamma0: float,
    max_count: int,
) -> tuple[int | None, int]:
    """First-exceed rule, drawing estimates one at a time.

    Returns (0-based index, estimates consumed); (None, max_count) on
    exhaustion. The stream is only advanced as far as needed.
    """
    if max_count < 1:
        raise ConfigurationError("max_count must be >= 1")
    it: Iterator[float] = iter(estimate_stream)
    for c in range(max_count):
        if next(it) >= gamma0:
            return c, c + 1
    return None, max_count


def chebyshev_bound(estimated_snr: float, gamma0: float, p: int) -> float:
    """Upper bound min(1, p^-1 / (estimate - target)) on the overestimation probability."""
    if estimated_snr <= gamma0:
        raise ValueError("bound defined only for estimates above the target")
    return min(1.0, (1.0 / p) / (estimated_snr - gamma0))


def run_bsw(
    channel: ChannelRealization,
    codebook: Codebook,
    radio: RadioParams,
    p: int,
    gamma0: float,
    frame_kind: str,
    rng: np.random.Generator,
) -> BswOutcome:
    """Sweep, select per ``frame_kind`` ("fixed" | "flexible"), classify errors."""
    if codebook.cardinality < 1:
        raise ConfigurationError("codebook is empty")
    if frame_kind not in ("fixed", "flexible"):
        raise ConfigurationError(f"frame_kind must be fixed or flexible, got {frame_kind!r}")

    cardinality = codebook.cardinality
    if frame_kind == "fixed":
        estimates = sweep_estimates(
            channel.z_d, codebook.theta, radio.rho_u, radio.sigma_b2, p, rng
        )
        selected = select_fixed(estimates, gamma0)
        sweep_count = cardinality
        est = None if selected is None else float(estimates[selected])
    else:
        drawn: list[float] = []

        def stream():
            for c in range(cardinality):
                _, snr = sweep_observation(
                    channel.z_d, codebook.config(c), radio.rho_u, radio.sigma_b2, p, rng
                )
                drawn.append(snr)
                yield snr

        selected, sweep_count = select_flexible(stream(), gamma0, cardinality)
        est = None if selected is None else float(drawn[selected])

    if selected is None:
        return BswOutcome(
            selected_index=None,
            sweep_count=sweep_count,
            estimated_snr=None,
            actual_snr=None,
            target_snr=gamma0,
            spectral_efficiency=math.log2(1.0 + gamma0),
            algorithmic_error=True,
            error_kind="no-config",
        )

    actual = radio.snr_scale * np.abs(codebook.config(selected) @ channel.z_d) ** 2
    overestimated = actual < gamma0
    return BswOutcome(
        selected_index=selected,
        sweep_count=sweep_count,
        estimated_snr=est,
        actual_snr=float(actual),
        target_snr=gamma0,
        spectral_efficiency=math.log2(1.0 + gamma0),
        algorithmic_error=bool(overestimated),
        error_kind="overestimation" if overestimated else "none",
    )
