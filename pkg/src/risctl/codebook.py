"""Configuration codebooks for the surface.

A configuration is a unit-modulus complex vector of per-element phase shifts.
Codebooks are index-addressed views over a common global codebook so that
control packets can reference entries by index.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from risctl.errors import ConfigurationError

logger = logging.getLogger(__name__)

UNIT_MODULUS_TOL = 1e-12
GRAM_TOL = 1e-9


@dataclass(frozen=True)
class Codebook:
    """An ordered set of configurations, stacked as the (N, C) matrix ``theta``.

    ``kind`` is one of "channel-estimation", "beam-sweeping-fixed",
    "beam-sweeping-flexible".
    """

    theta: np.ndarray
    kind: str
    _gram_ok: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.theta.ndim != 2 or self.theta.shape[1] < 1:
            raise ConfigurationError("codebook must be a nonempty (N, C) matrix")
        if np.max(np.abs(np.abs(self.theta) - 1.0)) > UNIT_MODULUS_TOL:
            raise ConfigurationError("codebook entries must be unit modulus")

    @property
    def n_elements(self) -> int:
        return self.theta.shape[0]

    @property
    def cardinality(self) -> int:
        return self.theta.shape[1]

    def config(self, index: int) -> np.ndarray:
        return self.theta[:, index]

    def has_gram_identity(self) -> bool:
        """True when theta^* theta^T = C I_N within tolerance (cached)."""
        if "ok" not in self._gram_ok:
            gram = np.conj(self.theta) @ self.theta.T
            target = self.cardinality * np.eye(self.n_elements)
            self._gram_ok["ok"] = bool(
                np.max(np.abs(gram - target)) <= GRAM_TOL * self.cardinality
            )
        return self._gram_ok["ok"]


def dft_codebook(n_elements: int, cardinality: int, kind: str = "channel-estimation") -> Codebook:
    """DFT codebook: entry (n, c) = exp(-j 2 pi n c / C), n, c zero-based.

    ``cardinality >= n_elements`` is required so that the stacked matrix has
    full row rank (estimation would otherwise be rank deficient).
    """
    if cardinality < n_elements:
        raise ConfigurationError(
            f"cardinality {cardinality} < n_elements {n_elements}: "
            "channel estimation would be rank-deficient"
        )
    n = np.arange(n_elements)[:, None]
    c = np.arange(cardinality)[None, :]
    theta = np.exp(-2j * np.pi * n * c / cardinality)
    return Codebook(theta=theta, kind=kind)


def subsample(cb: Codebook, stride: int, kind: str | None = None) -> Codebook:
    """Keep configurations at indices 0, stride, 2*stride, ... (order preserved)."""
    if stride < 1:
        raise ConfigurationError(f"stride must be >= 1, got {stride}")
    return Codebook(theta=cb.theta[:, ::stride].copy(), kind=kind or cb.kind)


def check_config_index_bits(b_conf: int, common_cardinality: int) -> None:
    """Warn when b_conf cannot address every entry of the common codebook.

    The floor(log2 C) sizing in circulation under-addresses non-power-of-two
    codebooks; we flag it instead of silently correcting.
    """
    needed = max(1, math.ceil(math.log2(common_cardinality)))
    if b_conf < needed:
        logger.warning(
            "b_conf=%d cannot address all %d codebook entries (need %d bits)",
            b_conf,
            common_cardinality,
            needed,
        )
