"""Monte Carlo driver: trials, aggregation, target-SNR calibration.

Every trial is a pure function of (configuration, master seed, trial index):
the trial's random stream is spawned from a seed sequence keyed on the pair,
so results are bit-identical across runs and across any degree of
parallelism. The per-trial draw order is UE position, paradigm noise,
control-packet uniforms.

Frame-length sweeps reuse the same paradigm outcomes: nothing random depends
on the frame duration tau, so goodput at any tau is a deterministic map of
the per-trial samples.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from risctl import bsw, codebook as cb, control, oce, scenario, timing
from risctl.config import ExperimentConfig
from risctl.errors import ConfigurationError


@dataclass(frozen=True)
class TrialResult:
    paradigm_outcome: object
    timing: timing.FrameTiming
    control_success: bool
    goodput_bps: float


@dataclass(frozen=True)
class ExperimentSummary:
    mean_goodput_bps: float
    empirical_p_ae: float
    empirical_p_cc: float
    goodput_cdf_samples: np.ndarray
    snr_cdf_actual: np.ndarray
    snr_cdf_estimated: np.ndarray
    n_trials: int
    master_seed: int


@dataclass(frozen=True)
class TrialSamples:
    """Frame-length-independent per-trial outcomes, as parallel arrays."""

    eta: np.ndarray
    algorithmic_error: np.ndarray
    control_success: np.ndarray
    c_star_1b: np.ndarray  # 1-based accepted index for bsw-flexible, 0 otherwise
    estimated_snr: np.ndarray  # NaN when nothing was selected
    actual_snr: np.ndarray


@dataclass(frozen=True)
class ExperimentContext:
    """Everything trial-invariant, computed once per experiment."""

    cfg: ExperimentConfig
    geometry: scenario.Geometry
    bs_channel: np.ndarray
    theta: np.ndarray  # paradigm codebook matrix
    ce_codebook: cb.Codebook | None
    radio: scenario.RadioParams
    frame: timing.FrameParams
    p: int
    budgets: list[control.PacketBudget]
    outage_probs: np.ndarray
    lambda_r_effective: float


def trial_rng(master_seed: int, trial_index: int) -> np.random.Generator:
    """Independent sub-stream for one trial."""
    return np.random.default_rng(
        np.random.SeedSequence(entropy=master_seed, spawn_key=(trial_index,))
    )


def build_context(cfg: ExperimentConfig) -> ExperimentContext:
    """Validate the configuration cross-field and precompute shared state."""
    geometry = scenario.make_geometry(
        n_elements=cfg.n_elements,
        side_d_m=cfg.side_d_m,
        bs_position=(cfg.bs_x_m, cfg.bs_y_m, cfg.bs_z_m),
        carrier_frequency_hz=cfg.carrier_frequency_hz,
        element_spacing_m=cfg.element_spacing_m,
    )
    radio = scenario.RadioParams(
        rho_u_dbm=cfg.rho_u_dbm,
        rho_b_dbm=cfg.rho_b_dbm,
        sigma_b2_dbm=cfg.sigma_b2_dbm,
        sigma_u2_dbm=cfg.sigma_u2_dbm,
        sigma_r2_dbm=cfg.sigma_r2_dbm,
        bandwidth_data_hz=cfg.bandwidth_data_hz,
        bandwidth_cc_ue_hz=cfg.bandwidth_cc_ue_hz,
        bandwidth_cc_ris_hz=cfg.bandwidth_cc_ris_hz,
    )
    frame = timing.FrameParams.from_seconds(
        tau_s=cfg.tau_ms * 1e-3,
        t_s=cfg.t_ms * 1e-3,
        tau_s_guard_s=cfg.tau_s_us * 1e-6,
        a_ttis=cfg.a_ttis,
        t_n_s=None if cfg.t_n_us is None else cfg.t_n_us * 1e-6,
        p_override=cfg.p if cfg.p >= 1 else None,
    )
    p = timing.pilot_length(frame)

    common = cb.dft_codebook(cfg.n_elements, cfg.c_ce)
    cb.check_config_index_bits(cfg.b_conf, common.cardinality)
    ce_book = None
    if cfg.paradigm == timing.OCE:
        book = common
        ce_book = common
    elif cfg.paradigm == timing.BSW_FIXED:
        book = cb.subsample(common, cfg.bsw_stride, kind="beam-sweeping-fixed")
    else:
        book = cb.Codebook(theta=common.theta, kind="beam-sweeping-flexible")

    fields = control.BitFields(
        b_id=cfg.b_id,
        b_frame=cfg.b_frame,
        b_guard=cfg.b_guard,
        b_conf=cfg.b_conf,
        b_se=cfg.b_se,
        b_quant=cfg.b_quant,
    )
    budgets = control.build_budgets(
        paradigm="oce" if cfg.paradigm == timing.OCE else "bsw",
        fields=fields,
        n_elements=cfg.n_elements,
        codebook_cardinality=book.cardinality,
        t_ns=frame.t_ns,
        tau_s_ns=frame.tau_s_ns,
        a_ttis=frame.a_ttis,
        bandwidth_ue_hz=cfg.bandwidth_cc_ue_hz,
        bandwidth_ris_hz=cfg.bandwidth_cc_ris_hz,
    )
    lambda_r = math.inf if cfg.cc_kind == timing.OBCC else cfg.lambda_r
    outage = control.outage_probabilities(budgets, cfg.lambda_u, lambda_r)

    bs_channel = scenario.los_channel(
        geometry.bs_position, geometry.element_positions, geometry.wavelength
    )
    return ExperimentContext(
        cfg=cfg,
        geometry=geometry,
        bs_channel=bs_channel,
        theta=book.theta,
        ce_codebook=ce_book,
        radio=radio,
        frame=frame,
        p=p,
        budgets=budgets,
        outage_probs=outage,
        lambda_r_effective=lambda_r,
    )


def _sample_trial(ctx: ExperimentContext, trial_index: int, master_seed: int):
    """One trial's frame-length-independent outcome tuple."""
    cfg = ctx.cfg
    rng = trial_rng(master_seed, trial_index)
    channel = scenario.realize_channel(
        rng, ctx.geometry, cfg.lambda_u, ctx.lambda_r_effective, bs_channel=ctx.bs_channel
    )
    radio = ctx.radio

    if cfg.paradigm == timing.OCE:
        out = oce.run_oce(channel, ctx.ce_codebook, radio, ctx.p, rng, ae_mode=cfg.ae_mode)
        eta = out.spectral_efficiency
        ae = out.algorithmic_error
        c_star_1b = 0
        est, act = out.estimated_snr, out.actual_snr
    else:
        estimates = bsw.sweep_estimates(
            channel.z_d, ctx.theta, radio.rho_u, radio.sigma_b2, ctx.p, rng
        )
        gamma0 = cfg.gamma0
        if cfg.paradigm == timing.BSW_FIXED:
            sel = bsw.select_fixed(estimates, gamma0)
            c_star_1b = 0
        else:
            # estimates are independent across configurations, so applying the
            # first-exceed rule to the prefix matches the lazy on-the-fly sweep
            above = np.nonzero(estimates >= gamma0)[0]
            sel = int(above[0]) if above.size else None
            c_star_1b = (sel + 1) if sel is not None else 0
        eta = math.log2(1.0 + gamma0)
        if sel is None:
            ae, est, act = True, math.nan, math.nan
        else:
            est = float(estimates[sel])
            act = float(radio.snr_scale * np.abs(ctx.theta[:, sel] @ channel.z_d) ** 2)
            ae = act < gamma0

    control_ok = not bool((rng.random(4) < ctx.outage_probs).any())
    return eta, ae, control_ok, c_star_1b, est, act


def _thread_count() -> int:
    raw = os.environ.get("RISCTL_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = 1
    return max(1, n)


def paradigm_samples(
    cfg: ExperimentConfig, n_trials: int | None = None, master_seed: int | None = None
) -> TrialSamples:
    """Run all trials and collect frame-length-independent outcomes."""
    ctx = build_context(cfg)
    n = cfg.n_trials if n_trials is None else n_trials
    seed = cfg.master_seed if master_seed is None else master_seed
    if n < 1:
        raise ConfigurationError("n_trials must be >= 1")

    def chunk(indices):
        return [_sample_trial(ctx, i, seed) for i in indices]

    workers = _thread_count()
    if workers == 1:
        rows = chunk(range(n))
    else:
        splits = np.array_split(np.arange(n), workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(chunk, splits))
        rows = [row for part in parts for row in part]

    eta, ae, ok, c_star, est, act = (np.array(col) for col in zip(*rows))
    return TrialSamples(
        eta=eta.astype(float),
        algorithmic_error=ae.astype(bool),
        control_success=ok.astype(bool),
        c_star_1b=c_star.astype(int),
        estimated_snr=est.astype(float),
        actual_snr=act.astype(float),
    )


def goodput_for_tau(cfg: ExperimentConfig, samples: TrialSamples, tau_ms: float) -> np.ndarray:
    """Per-trial goodput (bit/s) at the given frame length."""
    frame = timing.FrameParams.from_seconds(
        tau_s=tau_ms * 1e-3,
        t_s=cfg.t_ms * 1e-3,
        tau_s_guard_s=cfg.tau_s_us * 1e-6,
        a_ttis=cfg.a_ttis,
        t_n_s=None if cfg.t_n_us is None else cfg.t_n_us * 1e-6,
        p_override=cfg.p if cfg.p >= 1 else None,
    )
    cardinality = cfg.c_ce if cfg.paradigm != timing.BSW_FIXED else -(-cfg.c_ce // cfg.bsw_stride)
    if cfg.paradigm == timing.BSW_FLEXIBLE:
        c1 = np.where(samples.c_star_1b > 0, samples.c_star_1b, cardinality)
        alg = (2 * c1 - 1) * frame.t_ns
        setup = timing.setup_duration(cfg.cc_kind, frame.t_ns)
        ack = timing.ack_duration(cfg.cc_kind, frame.t_ns, frame.tau_s_ns)
        fractions = np.maximum(0, frame.tau_ns - setup - ack - alg) / frame.tau_ns
    else:
        ft = timing.frame_timing(cfg.paradigm, cfg.cc_kind, frame, cardinality)
        fractions = np.full(samples.eta.size, ft.payload_fraction)

    good = (
        samples.control_success
        & ~samples.algorithmic_error
        & (fractions > 0)
    )
    return np.where(good, fractions * cfg.bandwidth_data_hz * samples.eta, 0.0)


def run_trial(cfg: ExperimentConfig, trial_index: int, master_seed: int | None = None) -> TrialResult:
    """Single fully assembled trial (used for spot checks and small runs)."""
    ctx = build_context(cfg)
    seed = cfg.master_seed if master_seed is None else master_seed
    eta, ae, ok, c_star_1b, est, act = _sample_trial(ctx, trial_index, seed)
    cardinality = ctx.theta.shape[1]
    ft = timing.frame_timing(
        cfg.paradigm,
        cfg.cc_kind,
        ctx.frame,
        cardinality,
        c_star=c_star_1b if c_star_1b > 0 else None,
    )
    good = ok and not ae and ft.tau_pay_ns > 0
    goodput = ft.payload_fraction * cfg.bandwidth_data_hz * eta if good else 0.0
    outcome = {
        "eta": eta,
        "algorithmic_error": ae,
        "estimated_snr": est,
        "actual_snr": act,
        "c_star_1b": c_star_1b,
    }
    return TrialResult(
        paradigm_outcome=outcome, timing=ft, control_success=ok, goodput_bps=goodput
    )


def run_experiment(
    cfg: ExperimentConfig, n_trials: int | None = None, master_seed: int | None = None
) -> ExperimentSummary:
    """Aggregate goodput, error and control statistics over all trials."""
    n = cfg.n_trials if n_trials is None else n_trials
    seed = cfg.master_seed if master_seed is None else master_seed
    samples = paradigm_samples(cfg, n_trials=n, master_seed=seed)
    goodput = goodput_for_tau(cfg, samples, cfg.tau_ms)
    finite_est = samples.estimated_snr[np.isfinite(samples.estimated_snr)]
    finite_act = samples.actual_snr[np.isfinite(samples.actual_snr)]
    return ExperimentSummary(
        mean_goodput_bps=float(goodput.mean()),
        empirical_p_ae=float(samples.algorithmic_error.mean()),
        empirical_p_cc=float(samples.control_success.mean()),
        goodput_cdf_samples=np.sort(goodput),
        snr_cdf_actual=np.sort(finite_act),
        snr_cdf_estimated=np.sort(finite_est),
        n_trials=n,
        master_seed=seed,
    )


def calibrate_gamma0(
    cfg: ExperimentConfig,
    gamma0_grid_db: list[float],
    n_trials: int | None = None,
    master_seed: int | None = None,
) -> tuple[float, list[tuple[float, float]]]:
    """Mean goodput per target-SNR grid point with common random numbers.

    The channel, sweep noise and control draws are shared across grid points;
    only the selection rule is re-evaluated. Ties resolve to the lower target.
    """
    if not gamma0_grid_db:
        raise ConfigurationError("gamma0 grid is empty")
    if cfg.paradigm == timing.OCE:
        raise ConfigurationError("target-SNR calibration applies to the sweep paradigms")

    ctx = build_context(cfg)
    n = cfg.n_trials if n_trials is None else n_trials
    seed = cfg.master_seed if master_seed is None else master_seed

    # per-trial raw material, drawn once
    estimates = np.empty((n, ctx.theta.shape[1]))
    actual = np.empty((n, ctx.theta.shape[1]))
    control_ok = np.empty(n, dtype=bool)
    for i in range(n):
        rng = trial_rng(seed, i)
        channel = scenario.realize_channel(
            rng, ctx.geometry, cfg.lambda_u, ctx.lambda_r_effective, bs_channel=ctx.bs_channel
        )
        estimates[i] = bsw.sweep_estimates(
            channel.z_d, ctx.theta, ctx.radio.rho_u, ctx.radio.sigma_b2, ctx.p, rng
        )
        actual[i] = ctx.radio.snr_scale * np.abs(ctx.theta.T @ channel.z_d) ** 2
        control_ok[i] = not bool((rng.random(4) < ctx.outage_probs).any())

    table: list[tuple[float, float]] = []
    for g_db in gamma0_grid_db:
        gamma0 = 10.0 ** (g_db / 10.0)
        eta = math.log2(1.0 + gamma0)
        mask = estimates >= gamma0
        any_hit = mask.any(axis=1)
        if cfg.paradigm == timing.BSW_FIXED:
            sel = np.argmax(np.where(mask, estimates, -np.inf), axis=1)
            fraction = timing.frame_timing(
                cfg.paradigm, cfg.cc_kind, ctx.frame, ctx.theta.shape[1]
            ).payload_fraction
            fractions = np.full(n, fraction)
        else:
            sel = np.argmax(mask, axis=1)  # first True; 0 when none (masked below)
            c1 = sel + 1
            t_ns, tau = ctx.frame.t_ns, ctx.frame.tau_ns
            setup = timing.setup_duration(cfg.cc_kind, t_ns)
            ack = timing.ack_duration(cfg.cc_kind, t_ns, ctx.frame.tau_s_ns)
            alg = (2 * c1 - 1) * t_ns
            fractions = np.maximum(0, tau - setup - ack - alg) / tau
        act_sel = actual[np.arange(n), sel]
        no_error = any_hit & (act_sel >= gamma0)
        goodput = np.where(
            control_ok & no_error & (fractions > 0),
            fractions * cfg.bandwidth_data_hz * eta,
            0.0,
        )
        table.append((g_db, float(goodput.mean())))

    best = max(table, key=lambda row: (row[1], -row[0]))[0]
    return best, table


def utility_closed_form(
    p_cc: float, p_ae: float, ft: timing.FrameTiming, bandwidth_data_hz: float, eta: float
) -> float:
    """Expected goodput p_cc (1 - p_ae) (1 - overhead/tau) B_d eta, floored at 0."""
    if not (0.0 <= p_cc <= 1.0 and 0.0 <= p_ae <= 1.0):
        raise ConfigurationError("probabilities must lie in [0, 1]")
    factor = 1.0 - ft.overhead_ns / ft.tau_ns
    return p_cc * (1.0 - p_ae) * max(0.0, factor) * bandwidth_data_hz * eta
