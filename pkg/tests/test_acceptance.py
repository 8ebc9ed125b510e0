"""End-to-end acceptance checks, one per criterion, each printing a verdict.

Run with `pytest -s tests/test_acceptance.py` to see the per-criterion lines.
"""

import math
import time

import numpy as np
import pytest

from risctl import bsw, cli, codebook as cb, config, control, engine, oce, timing


def _verdict(num: int, ok: bool, detail: str) -> None:
    print(f"criterion {num}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {num}: {detail}"


def _cfg(**kw):
    return config.with_overrides(config.ExperimentConfig(), **kw)


def _budgets(paradigm, cardinality, bandwidth=900e3):
    return control.build_budgets(
        paradigm, control.BitFields(), n_elements=100, codebook_cardinality=cardinality,
        t_ns=500_000, tau_s_ns=50_000, a_ttis=5,
        bandwidth_ue_hz=bandwidth, bandwidth_ris_hz=bandwidth,
    )


def test_criterion_1_reliability_threshold(tmp_path):
    out = tmp_path / "rel.csv"
    t0 = time.perf_counter()
    rc = cli.main(["reliability", "--out", str(out)])
    elapsed = time.perf_counter() - t0
    lam_db = float(out.read_text().splitlines()[2].split(",")[0])
    ok = rc == 0 and 10.3 <= lam_db <= 10.6 and elapsed < 1.0
    _verdict(1, ok, f"min lambda_u = {lam_db:.4f} dB (target [10.3, 10.6]), {elapsed:.2f} s")


def test_criterion_2_closed_form_vs_monte_carlo():
    t0 = time.perf_counter()
    budgets = _budgets("oce", 100)
    freq = control.simulate_control_success(
        budgets, 11.03, math.inf, 100_000, np.random.default_rng(42)
    )
    elapsed = time.perf_counter() - t0
    tol = 3 * math.sqrt(0.99 * 0.01 / 100_000)
    ok = abs(freq - 0.9900) <= tol and elapsed < 10.0
    _verdict(2, ok, f"empirical {freq:.5f} vs 0.9900 (tol {tol:.5f}), {elapsed:.2f} s")


def test_criterion_3_frontier_ordering():
    t0 = time.perf_counter()
    oce_b = _budgets("oce", 100)
    bsw_b = _budgets("bsw", 34)
    split = lambda b: ([x for x in b if x.destination == "ue"], [x for x in b if x.destination == "risc"])
    oce_ue, oce_ris = split(oce_b)
    bsw_ue, bsw_ris = split(bsw_b)
    grid = [10.0 ** (db / 10.0) for db in np.arange(10.6, 25.1, 0.5)]
    f_oce = control.reliability_frontier(0.99, oce_ue, oce_ris, grid)
    f_bsw = control.reliability_frontier(0.99, bsw_ue, bsw_ris, grid)
    pairs = [
        (a[1], b[1]) for a, b in zip(f_oce, f_bsw) if a[1] is not None and b[1] is not None
    ]
    elapsed = time.perf_counter() - t0
    ok = len(pairs) > 10 and all(a > b for a, b in pairs) and elapsed < 1.0
    _verdict(3, ok, f"OCE lambda_r > BSW lambda_r at all {len(pairs)} feasible points, {elapsed:.2f} s")


def test_criterion_4_codebook_and_estimator():
    rng = np.random.default_rng(4)
    book = cb.dft_codebook(100, 100)
    gram_dev = float(np.max(np.abs(np.conj(book.theta) @ book.theta.T - 100 * np.eye(100))))

    z = rng.standard_normal(100) + 1j * rng.standard_normal(100)
    z_hat = oce.ls_estimate(book.theta.T @ z, book.theta, 100)
    ls_rel = float(np.max(np.abs(z_hat - z)) / np.max(np.abs(z)))

    rho, sigma2, p = 3.0, 0.7, 2
    errs = np.empty((10_000, 100))
    for r in range(10_000):
        y = oce._pilot_observations(z, book.theta, rho, sigma2, p, rng)
        errs[r] = np.abs(oce.ls_estimate(y, book.theta, 100, check_gram=False) - z) ** 2
    var = float(errs.mean())
    var_target = sigma2 / (p * rho * 100)

    conj_ok = True
    for _ in range(100):
        zc = rng.standard_normal(64) + 1j * rng.standard_normal(64)
        best = np.abs(oce.optimal_config(zc) @ zc) ** 2
        if not np.isclose(best, np.sum(np.abs(zc)) ** 2, rtol=1e-12):
            conj_ok = False
        rand = np.abs(np.exp(1j * rng.uniform(0, 2 * np.pi, (1000, 64))) @ zc) ** 2
        if best < rand.max():
            conj_ok = False

    ok = gram_dev < 1e-9 and ls_rel < 1e-10 and abs(var / var_target - 1) < 0.05 and conj_ok
    _verdict(
        4,
        ok,
        f"gram dev {gram_dev:.1e}, LS rel {ls_rel:.1e}, "
        f"noise var ratio {var / var_target:.3f}, conjugate dominance {conj_ok}",
    )


def test_criterion_5_timing_identities():
    rng = np.random.default_rng(5)
    identity_ok = True
    for _ in range(50):
        t_ms = rng.uniform(0.1, 2.0)
        frame = timing.FrameParams.from_seconds(
            rng.uniform(20, 300) * 1e-3, t_ms * 1e-3, rng.uniform(1, 900 * t_ms) * 1e-6,
            int(rng.integers(1, 10)),
        )
        cardinality = int(rng.integers(10, 200))
        for paradigm in timing.PARADIGMS:
            for cc in timing.CC_KINDS:
                c_star = int(rng.integers(1, cardinality + 1))
                ft = timing.frame_timing(
                    paradigm, cc, frame, cardinality,
                    c_star=c_star if paradigm == timing.BSW_FLEXIBLE else None,
                )
                if ft.tau_pay_ns > 0 and ft.overhead_ns + ft.tau_pay_ns != ft.tau_ns:
                    identity_ok = False

    ft = timing.frame_timing(
        timing.OCE, timing.OBCC,
        timing.FrameParams.from_seconds(60e-3, 0.5e-3, 50e-6, 5), 100,
    )
    overhead_ok = ft.overhead_ns == 53_550_000

    g50 = engine.run_experiment(_cfg(tau_ms=50.0, n_trials=60)).mean_goodput_bps
    g60 = engine.run_experiment(_cfg(tau_ms=60.0, n_trials=60)).mean_goodput_bps
    edge_ok = g50 == 0.0 and g60 > 0.0

    ok = identity_ok and overhead_ok and edge_ok
    _verdict(
        5,
        ok,
        f"phase-sum identity {identity_ok}, overhead {ft.overhead_ns / 1e6:.2f} ms, "
        f"goodput(50ms)={g50:.0f}, goodput(60ms)={g60:.0f}",
    )


def test_criterion_6_chebyshev_bound():
    t0 = time.perf_counter()
    cfg = _cfg(paradigm="bsw-fixed", n_trials=100_000)
    s = engine.paradigm_samples(cfg)
    gamma0 = cfg.gamma0
    selected = np.isfinite(s.estimated_snr)
    margin = s.estimated_snr[selected] - gamma0
    over = s.actual_snr[selected] < gamma0
    edges = np.array([0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, np.inf])
    violations = []
    checked = 0
    for lo, hi in zip(edges[:-1], edges[1:]):
        in_bucket = (margin >= lo) & (margin < hi)
        n = int(in_bucket.sum())
        if n < 50:
            continue
        checked += 1
        freq = float(over[in_bucket].mean())
        bound = min(1.0, 1.0 / lo)  # p = 1; loosest bound within the bucket
        se = math.sqrt(max(freq * (1 - freq), 0.25 / n) / n)
        if freq > bound + 3 * se:
            violations.append((lo, hi, freq, bound))
    elapsed = time.perf_counter() - t0
    ok = checked >= 5 and not violations and elapsed < 30.0
    _verdict(6, ok, f"{checked} buckets checked, violations {violations}, {elapsed:.1f} s")


def test_criterion_7_paradigm_crossover():
    n = 20_000
    sam = {
        par: engine.paradigm_samples(_cfg(paradigm=par), n_trials=n, master_seed=1)
        for par in timing.PARADIGMS
    }

    def mean_at(par, tau_ms):
        return float(engine.goodput_for_tau(_cfg(paradigm=par), sam[par], tau_ms).mean())

    oce30, oce150 = mean_at("oce", 30.0), mean_at("oce", 150.0)
    fix30, fix150 = mean_at("bsw-fixed", 30.0), mean_at("bsw-fixed", 150.0)
    flex150 = mean_at("bsw-flexible", 150.0)

    crossover = None
    for tau in np.arange(40.0, 121.0, 1.0):
        best_bsw = max(mean_at("bsw-fixed", tau), mean_at("bsw-flexible", tau))
        if mean_at("oce", tau) > best_bsw:
            crossover = float(tau)
            break

    ok = (
        fix30 > 0.0
        and oce30 == 0.0
        and oce150 > fix150
        and oce150 > flex150
        and crossover is not None
        and 55.0 <= crossover <= 95.0
    )
    _verdict(
        7,
        ok,
        f"bsw-fixed@30={fix30:.0f}, oce@30={oce30:.0f}, "
        f"oce@150={oce150:.0f} vs bsw {fix150:.0f}/{flex150:.0f}, crossover {crossover} ms",
    )


def test_criterion_8_calibration_stability():
    grid = [float(g) for g in np.arange(4.0, 24.0, 1.0)]  # 20 points
    n = 10_000
    best30, _ = engine.calibrate_gamma0(_cfg(paradigm="bsw-fixed", tau_ms=30.0), grid, n_trials=n)
    best90, _ = engine.calibrate_gamma0(_cfg(paradigm="bsw-fixed", tau_ms=90.0), grid, n_trials=n)
    best_flex, _ = engine.calibrate_gamma0(_cfg(paradigm="bsw-flexible"), grid, n_trials=n)
    # absolute optima are informational only (channel model differs from the
    # reference scenario): report fixed vs 10.9 dB, flexible vs 12.4-13.8 dB
    print(
        f"criterion 8 (informational): fixed optimum {best30} dB (reference 10.9), "
        f"flexible optimum {best_flex} dB (reference 12.4-13.8)"
    )
    ok = abs(best30 - best90) <= 1.0
    _verdict(8, ok, f"fixed-frame optimum {best30} dB at 30 ms vs {best90} dB at 90 ms")


def test_criterion_9_determinism(tmp_path, monkeypatch):
    outputs = []
    for threads in ("1", "3"):
        for rep in range(2):
            monkeypatch.setenv("RISCTL_THREADS", threads)
            out = tmp_path / f"gs-{threads}-{rep}.csv"
            rc = cli.main([
                "goodput-sweep", "--trials", "300", "--seed", "7",
                "--tau-ms", "30:90:30", "--out", str(out),
            ])
            assert rc == 0
            outputs.append(out.read_bytes())
    cdf = []
    for threads in ("1", "4"):
        monkeypatch.setenv("RISCTL_THREADS", threads)
        out = tmp_path / f"cdf-{threads}.csv"
        assert cli.main(["snr-cdf", "--trials", "100", "--seed", "7", "--out", str(out)]) == 0
        cdf.append(out.read_bytes())
    ok = len(set(outputs)) == 1 and cdf[0] == cdf[1]
    _verdict(9, ok, "byte-identical CSVs across reruns and RISCTL_THREADS in {1,3,4}")
