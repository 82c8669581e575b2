"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` (lines are printed even with
output capture on) or directly as ``python3 tests/test_acceptance.py``.
"""
import io as _io
import os
import subprocess
import sys
import time
from contextlib import redirect_stdout

import numpy as np
import pytest

from spinmech import cli
from spinmech import io as sio
from spinmech.coop import EXAMPLE_ROWS, Scenario, cooperativity, project_scenario
from spinmech.dipole import Dipole, NvAxis, fit_dipole
from spinmech.echo import (Coupling, EchoCurve, fit_coupling, mc_contrast, rayleigh_averaged_contrast,
                           thermal_contrast)
from spinmech.mech import TimeSeries, fit_lorentzian, fit_ringdown, rms_from_psd
from spinmech.register import (DetuningProfile, SequenceConfig, nuclear_phase, sinusoidal_profile,
                               solve_pi_time, theta_scan)
from spinmech.spinmodel import FieldComponents, SpinParams, esr_frequencies, invert_field
from spinmech.synth import generate_synthetic

LAMBDA_HZ, DELTA_X, F_R, Z_P = 7.7, 1.86e-9, 1.4e6, 1.146e-14


@pytest.fixture
def verdict(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {n:2d}] {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail
    return emit


def _columns(text, cols):
    return sio.read_columns(text, cols)


def test_criterion_01_mc_vs_closed_form(verdict):
    c = Coupling.from_hz(LAMBDA_HZ, Z_P, F_R)
    taus = np.linspace(0.0, 2.0 / F_R, 50)
    start = time.perf_counter()
    worst, ok = 0.0, True
    for k, tau in enumerate(taus):
        mean, err = mc_contrast(c, DELTA_X, tau, 100_000, seed=k)
        diff = abs(mean - thermal_contrast(c, DELTA_X, tau))
        worst = max(worst, diff)
        ok &= diff < max(0.01, 3 * err)
    elapsed = time.perf_counter() - start
    verdict(1, ok and elapsed < 10.0,
            f"MC vs closed form: max |diff| {worst:.4f} over 50 tau points, {elapsed:.2f} s")


def test_criterion_02_rayleigh_bessel_identity(verdict):
    c = Coupling.from_hz(LAMBDA_HZ, Z_P, F_R)
    taus = np.linspace(0.0, 2.0 / F_R, 30)
    err = max(abs(rayleigh_averaged_contrast(c, DELTA_X, t) - thermal_contrast(c, DELTA_X, t)) for t in taus)
    verdict(2, err < 1e-8, f"Rayleigh-averaged J0 vs Gaussian form: max abs error {err:.2e}")


def test_criterion_03_cooperativity_table(verdict):
    got = [cooperativity(r) for r in EXAMPLE_ROWS]
    printed = [1.0e-7, 2.8e-10, 1.8e-10, 2.8e-10]
    tol = [0.10, 0.10, 0.30, 0.30]
    rel = [abs(g / p - 1) for g, p in zip(got, printed)]
    ok = all(r <= t for r, t in zip(rel, tol))
    verdict(3, ok, "C = " + ", ".join(f"{g:.3g} ({100 * r:.0f}%)" for g, r in zip(got, rel)))


def test_criterion_04_projection(verdict):
    p = project_scenario(Scenario(1e9, 1.4e6, 4.0, 1e-2, lambda_over_2pi=800.0))
    verdict(4, 67 <= p.cooperativity <= 83, f"projected C = {p.cooperativity:.1f}")


def test_criterion_05_lambda_fit_recovery(verdict):
    omega = 2 * np.pi * F_R
    hits = 0
    for seed in range(100):
        tau, y = _columns(generate_synthetic("echo", {"noise": 0.01}, seed), ["tau_s", "contrast"])
        fit = fit_coupling(EchoCurve(tau, y), DELTA_X, omega, Z_P)
        hits += abs(fit.lambda_over_2pi / LAMBDA_HZ - 1) <= 0.05
    verdict(5, hits >= 95, f"{hits}/100 seeds within 5% of 7.7 Hz")


def test_criterion_06_transport_phase(verdict):
    prof = sinusoidal_profile(9.8e6, 1.7e-3, 1024, 4.316e6 / 2.8e10)
    t_pi = solve_pi_time(prof)
    step = prof.t[1] - prof.t[0]
    total = abs(nuclear_phase(prof, prof.t_move))
    ok = abs(t_pi - 850e-6) <= step and total > 2 * np.pi
    verdict(6, ok, f"t_pi = {t_pi * 1e6:.2f} us (grid step {step * 1e6:.2f} us), "
                   f"uncanceled phase = {total / (2 * np.pi):.3f} x 2pi")


def test_criterion_07_coherence_preservation(verdict):
    moved = sinusoidal_profile(9.8e6, 1.7e-3, 1024, 4.316e6 / 2.8e10)
    still = DetuningProfile(moved.t, np.zeros_like(moved.t), moved.gamma_ratio)
    cfg = SequenceConfig()
    thetas = np.linspace(0, 2 * np.pi, 64, endpoint=False)
    a, b = theta_scan(cfg, moved, thetas), theta_scan(cfg, still, thetas)
    diff = np.max(np.abs(a - b))
    A = np.column_stack([np.cos(thetas), np.sin(thetas), np.ones_like(thetas)])
    resid = np.max(np.abs(A @ np.linalg.lstsq(A, a, rcond=None)[0] - a))
    verdict(7, diff < 1e-9 and resid < 1e-10,
            f"moved vs stationary max diff {diff:.1e}, sinusoid residual {resid:.1e}")


def test_criterion_08_inversion_roundtrips(verdict):
    sp = SpinParams()
    rng = np.random.default_rng(2024)
    worst = 0.0
    for bz, bx in zip(rng.uniform(0, 0.05, 1000), rng.uniform(0, 0.005, 1000)):
        fc = invert_field(sp, esr_frequencies(sp, FieldComponents(bz, bx)))
        worst = max(worst, abs(fc.bz - bz), abs(fc.bx - bx))
    nv = NvAxis([0, 0, 1])
    truth = Dipole([2e-15, -1e-15, 1e-14], [2e-7, -1e-7, -5e-7])
    d, _ = fit_dipole(sio.read_field_map(generate_synthetic("dipole-map")), nv,
                      init=Dipole.from_params(1.1 * truth.params))
    rel = np.max(np.abs(d.params / truth.params - 1))
    _, rep = fit_dipole(sio.read_field_map(generate_synthetic("dipole-map", {"noise_tesla": 1e-4}, 0)), nv)
    ok = worst < 1e-7 and rel < 1e-6 and rep.max_residual <= 3e-4
    verdict(8, ok, f"ESR roundtrip {worst:.1e} T; dipole noiseless rel {rel:.1e}; "
                   f"1 G noise max residual {rep.max_residual * 1e4:.2f} G")


def test_criterion_09_mechanical_fits(verdict):
    f, p = _columns(generate_synthetic("psd"), ["freq_hz", "psd_m2_per_hz"])
    lor = fit_lorentzian(TimeSeries(f, p))
    t, a = _columns(generate_synthetic("ringdown"), ["t_s", "amplitude_m"])
    rd = fit_ringdown(TimeSeries(t, a), 1.4e6)
    dx = rms_from_psd(TimeSeries(f, p), (f[0], f[-1]))
    errs = (abs(lor.f_r / 1.4e6 - 1), abs(lor.kappa_over_2pi / 1.5 - 1), abs(rd.q_factor / 8.25e5 - 1),
            abs(dx / DELTA_X - 1))
    ok = max(errs[:3]) < 0.01 and errs[3] < 0.005
    verdict(9, ok, "rel errors f_r {:.1e}, kappa {:.1e}, Q {:.1e}, dx {:.1e}".format(*errs))


def _cli(*argv):
    buf = _io.StringIO()
    with redirect_stdout(buf):
        code = cli.main(list(argv))
    assert code == 0
    return buf.getvalue()


def test_criterion_10_ramsey_fringes(verdict, tmp_path):
    prof = tmp_path / "profile.csv"
    prof.write_text(generate_synthetic("profile"))
    out = _cli("register", "ramsey", "--profile", str(prof), "--tau-max-s", "20e-6", "--n-tau", "256")
    tau, y = _columns(out, ["x", "contrast"])
    spectrum = np.abs(np.fft.rfft(y - y.mean()))
    freqs = np.fft.rfftfreq(tau.size, tau[1] - tau[0])
    peak = freqs[np.argmax(spectrum)]
    verdict(10, abs(peak - 0.9e6) <= freqs[1], f"FFT peak {peak / 1e6:.3f} MHz (bin {freqs[1] / 1e3:.1f} kHz)")


def _commands(d):
    f = {k: os.path.join(d, f"{k}.csv") for k in ("dipole-map", "esr-map", "psd", "ringdown", "echo", "profile")}
    dip = os.path.join(d, "dipole.json")
    return [
        ["esr", "forward", "--bz", "0.01", "--bx", "0.002"],
        ["esr", "invert", "--fminus", "2842716440.491407", "--fplus", "2898716334.996459"],
        ["map", "invert", "-i", f["esr-map"]],
        ["map", "interp", "-i", f["dipole-map"]],
        ["map", "fit-dipole", "-i", f["dipole-map"]],
        ["map", "gradient", "--dipole", dip, "-i", f["dipole-map"]],
        ["mech", "fit-psd", "-i", f["psd"]],
        ["mech", "fit-ringdown", "-i", f["ringdown"], "--fr", "1.4e6"],
        ["mech", "rms", "-i", f["psd"], "--lo", "1399600", "--hi", "1400400"],
        ["mech", "zpm", "--fr", "1.4e6"],
        ["echo", "analytic", "--t2", "1e-4"],
        ["echo", "mc", "--samples", "20000", "--n-tau", "10", "--seed", "7"],
        ["echo", "fit", "-i", f["echo"]],
        ["transport", "profile"],
        ["transport", "pi-time", "-i", f["profile"]],
        ["transport", "fringes", "-i", f["profile"]],
        ["register", "simulate", "--profile", f["profile"], "--n-theta", "16"],
        ["register", "ramsey", "--profile", f["profile"], "--n-tau", "64"],
        ["coop", "compute", "--lambda", "7.7", "--t2", "8.8e-4", "--nkappa", "5e5"],
        ["coop", "table"],
        ["coop", "project", "--lambda", "800", "--t2", "1e-2", "--q", "1e9", "--fr", "1.4e6", "--temp", "4"],
        ["synth", "--kind", "dipole-map", "--param", "noise_tesla=1e-4", "--seed", "3"],
    ]


def test_criterion_11_determinism(verdict, tmp_path):
    for kind, params in [("dipole-map", {}), ("esr-map", {}), ("psd", {"noise_rel": 0.05}),
                         ("ringdown", {"noise_rel": 0.01}), ("echo", {"noise": 0.01}), ("profile", {})]:
        (tmp_path / f"{kind}.csv").write_text(generate_synthetic(kind, params, 1))
    (tmp_path / "dipole.json").write_text('{"moment_am2": [0, 0, 1e-14], "position_m": [0, 0, -5e-7]}')
    env = dict(os.environ)
    env.pop("SPINMECH_THREADS", None)
    bad = []
    cmds = _commands(str(tmp_path))
    for argv in cmds:
        outs = []
        for threads in ("1", "1", "8", "8"):
            proc = subprocess.run([sys.executable, "-m", "spinmech.cli", *argv, "--threads", threads],
                                  capture_output=True, env=env, timeout=120)
            outs.append((proc.returncode, proc.stdout))
        if outs[0][0] != 0 or any(o != outs[0] for o in outs[1:]):
            bad.append(" ".join(argv[:2]))
    verdict(11, not bad, f"{len(cmds) - len(bad)}/{len(cmds)} commands byte-identical across repeats "
                         f"and --threads 1/8" + (f"; differing: {', '.join(bad)}" if bad else ""))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
