"""Geometry, line-of-sight data channels and control-channel SNR draws.

The base station and the surface are fixed; the user terminal is redrawn
uniformly inside a box at every Monte Carlo trial. The per-element data
channel uses a spherical-wave phase (exact distance to each element) with a
common far-field amplitude wavelength / (4 pi r_center) and isotropic
elements. Control channels are Rayleigh, i.e. their instantaneous SNR is
exponential with a configured mean; an infinite mean encodes the error-free
out-of-band RIS link.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from risctl.errors import ConfigurationError

SPEED_OF_LIGHT = 299_792_458.0


@dataclass(frozen=True)
class Geometry:
    """Fixed positions of the scenario, all in meters.

    ``element_positions`` is an (N, 3) array laid on the x-z plane (surface
    normal +y), centered on ``ris_center``. The UE box limits are stored
    normalized (lo <= hi componentwise).
    """

    bs_position: np.ndarray
    ris_center: np.ndarray
    element_positions: np.ndarray
    ue_region_lo: np.ndarray
    ue_region_hi: np.ndarray
    carrier_frequency_hz: float
    element_spacing_m: float

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_frequency_hz

    @property
    def n_elements(self) -> int:
        return self.element_positions.shape[0]


@dataclass(frozen=True)
class RadioParams:
    """Transmit/noise powers (dBm) and bandwidths (Hz) of the three channels."""

    rho_u_dbm: float = 24.0
    rho_b_dbm: float = 24.0
    sigma_b2_dbm: float = -94.0
    sigma_u2_dbm: float = -94.0
    sigma_r2_dbm: float = -94.0
    bandwidth_data_hz: float = 180e3
    bandwidth_cc_ue_hz: float = 900e3
    bandwidth_cc_ris_hz: float = 900e3

    @property
    def rho_u(self) -> float:
        """UE transmit power, linear mW."""
        return 10.0 ** (self.rho_u_dbm / 10.0)

    @property
    def sigma_b2(self) -> float:
        """BS noise power, linear mW."""
        return 10.0 ** (self.sigma_b2_dbm / 10.0)

    @property
    def snr_scale(self) -> float:
        """rho_u / sigma_b^2, the factor turning |phi^T z|^2 into an SNR."""
        return self.rho_u / self.sigma_b2


@dataclass(frozen=True)
class ChannelRealization:
    """One trial's equivalent data channel and control-channel mean SNRs."""

    z_d: np.ndarray
    lambda_u: float
    lambda_r: float
    ue_position: np.ndarray


def make_geometry(
    n_elements: int = 100,
    side_d_m: float = 20.0,
    bs_position=(25.0, 5.0, 5.0),
    carrier_frequency_hz: float = 3e9,
    element_spacing_m: float | None = None,
) -> Geometry:
    """Build the default square-grid geometry.

    The UE box limits are (-D/2, 0, 0) and (D/2, D, -D); inverted axes are
    normalized by componentwise min/max.
    """
    side = int(round(math.sqrt(n_elements)))
    if side * side != n_elements:
        raise ConfigurationError(
            f"n_elements={n_elements} is not a perfect square; "
            "the default grid construction needs one"
        )
    wavelength = SPEED_OF_LIGHT / carrier_frequency_hz
    d = wavelength / 2.0 if element_spacing_m is None else element_spacing_m
    if d <= 0:
        raise ConfigurationError("element spacing must be positive")

    # square grid on the x-z plane, centered at the origin
    idx = (np.arange(side) - (side - 1) / 2.0) * d
    xs, zs = np.meshgrid(idx, idx, indexing="ij")
    elements = np.column_stack(
        [xs.ravel(), np.zeros(n_elements), zs.ravel()]
    )

    half = side_d_m / 2.0
    corner_a = np.array([-half, 0.0, 0.0])
    corner_b = np.array([half, side_d_m, -side_d_m])
    lo = np.minimum(corner_a, corner_b)
    hi = np.maximum(corner_a, corner_b)

    return Geometry(
        bs_position=np.asarray(bs_position, dtype=float),
        ris_center=np.zeros(3),
        element_positions=elements,
        ue_region_lo=lo,
        ue_region_hi=hi,
        carrier_frequency_hz=carrier_frequency_hz,
        element_spacing_m=d,
    )


def sample_ue_position(rng: np.random.Generator, geometry: Geometry) -> np.ndarray:
    """Draw a UE position uniformly in the (normalized) box."""
    lo, hi = geometry.ue_region_lo, geometry.ue_region_hi
    if np.any(lo >= hi):
        raise ConfigurationError("degenerate UE box: lo >= hi on some axis")
    return lo + rng.random(3) * (hi - lo)


def los_channel(tx: np.ndarray, elements: np.ndarray, wavelength: float) -> np.ndarray:
    """Per-element LoS channel from a point source to the surface.

    Component n is (wavelength / (4 pi r_c)) * exp(-j 2 pi r_n / wavelength)
    with r_n the exact tx-to-element distance and r_c the tx-to-surface-center
    distance (the element grid is centered on its own centroid).
    """
    tx = np.asarray(tx, dtype=float)
    diffs = elements - tx
    r = np.linalg.norm(diffs, axis=1)
    if np.any(r <= 0.0):
        raise ValueError("transmitter coincides with a surface element")
    r_c = np.linalg.norm(elements.mean(axis=0) - tx)
    if r_c <= 0.0:
        raise ValueError("transmitter coincides with the surface center")
    amplitude = wavelength / (4.0 * np.pi * r_c)
    return amplitude * np.exp(-2j * np.pi * r / wavelength)


def equivalent_channel(h: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Element-wise product of the two hops (z = h . g)."""
    h = np.asarray(h)
    g = np.asarray(g)
    if h.shape != g.shape:
        raise ValueError(f"shape mismatch: {h.shape} vs {g.shape}")
    return h * g


def sample_cc_snr(rng: np.random.Generator, lam: float) -> float:
    """Exponential SNR draw with mean ``lam``; lam = inf is the error-free link."""
    if math.isinf(lam):
        return math.inf
    if lam <= 0:
        raise ConfigurationError(f"mean control SNR must be positive, got {lam}")
    return rng.exponential(lam)


def realize_channel(
    rng: np.random.Generator,
    geometry: Geometry,
    lambda_u: float,
    lambda_r: float,
    bs_channel: np.ndarray | None = None,
) -> ChannelRealization:
    """Draw the full per-trial realization (UE position and equivalent channel).

    ``bs_channel`` may carry the precomputed RIS-to-BS hop, which is trial
    invariant for a fixed geometry.
    """
    ue = sample_ue_position(rng, geometry)
    h = los_channel(ue, geometry.element_positions, geometry.wavelength)
    g = bs_channel
    if g is None:
        g = los_channel(geometry.bs_position, geometry.element_positions, geometry.wavelength)
    return ChannelRealization(
        z_d=equivalent_channel(h, g),
        lambda_u=lambda_u,
        lambda_r=lambda_r,
        ue_position=ue,
    )
