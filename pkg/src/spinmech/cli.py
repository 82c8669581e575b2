"""Command-line front end.

Options may also come from a JSON ``--config`` file keyed by option name
(``lambda_hz``, ``t2_s``, ...); flags given on the command line win.
Exit codes: 0 ok, 1 usage, 2 bad input, 3 numerical failure, 4 I/O failure.
"""
import argparse
import json
import sys
import warnings

import numpy as np

from . import coop, dipole, echo, mech, register, spinmodel, synth
from . import io as sio
from .constants import DEFAULT_M_EFF, GAMMA_E, GAMMA_N15, ZERO_FIELD_SPLITTING
from .errors import InputError, SpinMechError
from .parallel import default_threads

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_NUMERICAL, EXIT_IO = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _vec(text):
    try:
        v = [float(s) for s in str(text).split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if len(v) != 3:
        raise argparse.ArgumentTypeError("expected three components x,y,z")
    return v


def _flag(text):
    if isinstance(text, bool):
        return text
    return str(text).lower() in ("1", "true", "yes", "on")


class _Opts:
    """Per-command option table: defaults < config file < command line."""

    def __init__(self, parser):
        self.parser = parser
        self.table = []

    def add(self, *flags, dest, type=float, default=None, help="", required=False, choices=None):
        tail = " (required)" if required else ("" if default is None else f" (default: {default})")
        kwargs = dict(dest=dest, default=argparse.SUPPRESS, help=help + tail)
        if type is bool:
            kwargs["action"] = "store_true"
        else:
            kwargs["type"] = type
            if choices:
                kwargs["choices"] = choices
        self.parser.add_argument(*flags, **kwargs)
        self.table.append((dest, type, default, required))
        return self


def _common(p, opts):
    p.add_argument("--config", default=None, help="JSON file of option values")
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: $SPINMECH_THREADS or 1)")
    opts.add("--d-hz", dest="d_hz", default=ZERO_FIELD_SPLITTING, help="zero-field splitting, Hz")
    opts.add("--gamma-e-hz-per-t", dest="gamma_e_hz_per_t", default=GAMMA_E,
             help="electron gyromagnetic ratio, Hz/T")
    opts.add("--gamma-n-hz-per-t", dest="gamma_n_hz_per_t", default=GAMMA_N15,
             help="15N gyromagnetic ratio magnitude, Hz/T")


def _seeded(opts):
    opts.add("--seed", dest="seed", type=int, default=None,
             help="random seed; 0 with a notice when omitted")


def build_parser():
    top = _Parser(prog="spinmech", description="NV spin-mechanics analysis toolkit")
    groups = top.add_subparsers(dest="group", metavar="GROUP")
    groups.required = True
    registry = {}

    def leaf(group_sub, name, fn, help):
        p = group_sub.add_parser(name, help=help, description=help)
        o = _Opts(p)
        _common(p, o)
        p.set_defaults(_fn=fn, _opts=o)
        return o

    def group(name, help):
        g = groups.add_parser(name, help=help)
        sub = g.add_subparsers(dest="command", metavar="COMMAND")
        sub.required = True
        registry[name] = sub
        return sub

    g = group("esr", "ESR frequencies and field inversion")
    leaf(g, "forward", cmd_esr_forward, "ESR pair for a field") \
        .add("--bz-tesla", "--bz", dest="bz_tesla", required=True, help="axial field, T") \
        .add("--bx-tesla", "--bx", dest="bx_tesla", default=0.0, help="transverse field, T")
    leaf(g, "invert", cmd_esr_invert, "field components from an ESR pair") \
        .add("--fminus-hz", "--fminus", dest="fminus_hz", required=True, help="lower ESR line, Hz") \
        .add("--fplus-hz", "--fplus", dest="fplus_hz", required=True, help="upper ESR line, Hz")

    g = group("map", "scan-map processing")
    leaf(g, "invert", cmd_map_invert, "ESR map CSV to axial-field map CSV") \
        .add("--input", "-i", dest="input", type=str, required=True, help="ESR map CSV")
    leaf(g, "interp", cmd_map_interp, "fill invalid pixels from valid neighbours") \
        .add("--input", "-i", dest="input", type=str, required=True, help="axial map CSV")
    o = leaf(g, "fit-dipole", cmd_map_fit_dipole, "fit a point dipole to an axial map")
    o.add("--input", "-i", dest="input", type=str, required=True, help="axial map CSV")
    o.add("--nv-axis", dest="nv_axis", type=_vec, default="0,0,1", help="NV axis x,y,z")
    o.add("--scan-height-m", "--height", dest="scan_height_m", default=1e-6,
          help="NV height above the sample plane, m")
    o = leaf(g, "gradient", cmd_map_gradient, "axial-field gradient map of a dipole")
    o.add("--dipole", dest="dipole", type=str, required=True, help="dipole JSON")
    o.add("--input", "-i", dest="input", type=str, required=True, help="map CSV giving the grid")
    o.add("--nv-axis", dest="nv_axis", type=_vec, default="0,0,1", help="NV axis x,y,z")
    o.add("--motion-axis", dest="motion_axis", type=_vec, default="1,0,0", help="motion direction x,y,z")
    o.add("--scan-height-m", "--height", dest="scan_height_m", default=1e-6,
          help="NV height above the sample plane, m")

    g = group("mech", "mechanical-mode analysis")
    leaf(g, "fit-psd", cmd_mech_fit_psd, "Lorentzian fit of a displacement PSD") \
        .add("--input", "-i", dest="input", type=str, required=True, help="PSD CSV")
    leaf(g, "fit-ringdown", cmd_mech_fit_ringdown, "quality factor from an amplitude ringdown") \
        .add("--input", "-i", dest="input", type=str, required=True, help="ringdown CSV") \
        .add("--f-r-hz", "--fr", dest="f_r_hz", required=True, help="mode frequency, Hz")
    leaf(g, "rms", cmd_mech_rms, "RMS amplitude from a PSD band") \
        .add("--input", "-i", dest="input", type=str, required=True, help="PSD CSV") \
        .add("--band-lo-hz", "--lo", dest="band_lo_hz", required=True, help="band start, Hz") \
        .add("--band-hi-hz", "--hi", dest="band_hi_hz", required=True, help="band end, Hz")
    leaf(g, "zpm", cmd_mech_zpm, "zero-point motion and thermal occupation") \
        .add("--f-r-hz", "--fr", dest="f_r_hz", required=True, help="mode frequency, Hz") \
        .add("--m-eff-kg", "--meff", dest="m_eff_kg", default=DEFAULT_M_EFF, help="effective mass, kg") \
        .add("--temperature-k", "--temp", dest="temperature_k", default=300.0, help="temperature, K")

    g = group("echo", "Hahn-echo spin-mechanics signal")

    def echo_model(o):
        o.add("--lambda-hz", "--lambda", dest="lambda_hz", default=7.7, help="coupling lambda/2pi, Hz")
        o.add("--delta-x-m", "--dx", dest="delta_x_m", default=1.86e-9, help="thermal RMS amplitude, m")
        o.add("--f-r-hz", "--fr", dest="f_r_hz", default=1.4e6, help="mode frequency, Hz")
        o.add("--z-p-m", "--zp", dest="z_p_m", default=1.146e-14, help="zero-point motion, m")
        o.add("--tau-max-s", dest="tau_max_s", default=None,
              help="largest half-echo time, s (default: two mechanical periods)")
        o.add("--n-tau", dest="n_tau", type=int, default=50, help="number of tau points")
        return o

    o = echo_model(leaf(g, "analytic", cmd_echo_analytic, "closed-form thermal echo contrast"))
    o.add("--t2-s", "--t2", dest="t2_s", default=None, help="spin T2 for decoherence envelope, s")
    o.add("--stretch", dest="stretch", default=3.0, help="decoherence exponent p")
    o = echo_model(leaf(g, "mc", cmd_echo_mc, "Monte Carlo thermal echo contrast"))
    o.add("--samples", dest="samples", type=int, default=100_000, help="samples per tau point")
    _seeded(o)
    o = leaf(g, "fit", cmd_echo_fit, "fit lambda to a normalized echo curve")
    o.add("--input", "-i", dest="input", type=str, required=True, help="echo CSV")
    o.add("--delta-x-m", "--dx", dest="delta_x_m", default=1.86e-9, help="thermal RMS amplitude, m")
    o.add("--f-r-hz", "--fr", dest="f_r_hz", default=1.4e6, help="mode frequency, Hz")
    o.add("--z-p-m", "--zp", dest="z_p_m", default=1.146e-14, help="zero-point motion, m")
    o.add("--fit-alpha", dest="fit_alpha", type=bool, default=False, help="also fit overall contrast")

    g = group("transport", "nuclear transport phase")
    o = leaf(g, "profile", cmd_transport_profile, "sinusoidal away-and-back detuning profile CSV")
    o.add("--peak-hz", "--peak", dest="peak_hz", default=9.8e6, help="peak electron detuning, Hz")
    o.add("--t-move-s", "--tmove", dest="t_move_s", default=1.7e-3, help="movement duration, s")
    o.add("--n-points", dest="n_points", type=int, default=1024, help="grid points")
    o.add("--ramp", dest="ramp", default=0.0, help="linear ramp added, fraction of peak")
    leaf(g, "pi-time", cmd_transport_pi_time, "refocusing pi-pulse time") \
        .add("--input", "-i", dest="input", type=str, required=True, help="profile CSV")
    leaf(g, "fringes", cmd_transport_fringes, "contrast versus pi-pulse time") \
        .add("--input", "-i", dest="input", type=str, required=True, help="profile CSV") \
        .add("--n", dest="n", type=int, default=201, help="number of pi-pulse times")

    g = group("register", "two-qubit memory sequence")

    def seq(o):
        o.add("--profile", dest="profile", type=str, default=None,
              help="profile CSV (default: stationary)")
        o.add("--tau-s", "--tau", dest="tau_s", default=0.9e-6, help="accumulation interval, s")
        o.add("--theta-rad", "--theta", dest="theta_rad", default=0.0, help="readout axis angle, rad")
        o.add("--f-acc-hz", "--facc", dest="f_acc_hz", default=0.9e6, help="13C accumulation rate, Hz")
        o.add("--polarization", dest="polarization", default=0.78, help="nuclear polarization")
        o.add("--t-pi-s", dest="t_pi_s", default=None, help="pi-pulse time, s (default: solved)")
        o.add("--t-move-s", "--tmove", dest="t_move_s", default=1.7e-3,
              help="movement duration without a profile, s")
        o.add("--branches", dest="branches", type=str, default=None,
              help="13C branches as f_hz:prob,... (default: +-f_acc equal weight)")
        return o

    o = seq(leaf(g, "simulate", cmd_register_simulate, "readout contrast (theta scan with --n-theta)"))
    o.add("--n-theta", dest="n_theta", type=int, default=0, help="theta points over [0, 2pi)")
    o = seq(leaf(g, "ramsey", cmd_register_ramsey, "contrast versus accumulation interval"))
    o.add("--tau-max-s", dest="tau_max_s", default=20e-6, help="largest tau, s")
    o.add("--n-tau", dest="n_tau", type=int, default=256, help="number of tau points")

    g = group("coop", "cooperativity")
    leaf(g, "compute", cmd_coop_compute, "cooperativity from measured rates") \
        .add("--lambda-hz", "--lambda", dest="lambda_hz", required=True, help="coupling lambda/2pi, Hz") \
        .add("--t2-s", "--t2", dest="t2_s", required=True, help="spin coherence time, s") \
        .add("--nkappa-hz", "--nkappa", dest="nkappa_hz", required=True,
             help="thermal decoherence n_th kappa/2pi, Hz")
    leaf(g, "table", cmd_coop_table, "cooperativity table (default: built-in platform rows)") \
        .add("--input", "-i", dest="input", type=str, default=None, help="rows CSV") \
        .add("--format", dest="format", type=str, default="csv", choices=("csv", "json"),
             help="output format")
    o = leaf(g, "project", cmd_coop_project, "cooperativity for an improvement scenario")
    o.add("--lambda-hz", "--lambda", dest="lambda_hz", default=None, help="coupling lambda/2pi, Hz")
    o.add("--gradient-t-per-m", "--gradient", dest="gradient_t_per_m", default=None,
          help="field gradient, T/m")
    o.add("--z-p-m", "--zp", dest="z_p_m", default=None, help="zero-point motion, m")
    o.add("--m-eff-kg", "--meff", dest="m_eff_kg", default=None, help="effective mass, kg")
    o.add("--q-factor", "--q", dest="q_factor", required=True, help="mechanical quality factor")
    o.add("--f-r-hz", "--fr", dest="f_r_hz", required=True, help="mode frequency, Hz")
    o.add("--temperature-k", "--temp", dest="temperature_k", required=True, help="temperature, K")
    o.add("--t2-s", "--t2", dest="t2_s", required=True, help="spin coherence time, s")

    p = groups.add_parser("synth", help="synthetic fixture CSV",
                          description="synthetic fixture CSV with planted parameters")
    o = _Opts(p)
    _common(p, o)
    p.set_defaults(_fn=cmd_synth, _opts=o)
    o.add("--kind", dest="kind", type=str, required=True,
          help="one of " + ", ".join(synth.KINDS))
    o.add("--param", dest="param", type=str, default=None,
          help="overrides as key=value;key=value (JSON values)")
    _seeded(o)
    return top


# -- helpers ------------------------------------------------------------------------

def _num(v):
    return "0" if v == 0 else repr(float(v))


def _kv(**items):
    return ",".join(f"{k}={_num(v)}" for k, v in items.items()) + "\n"


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _spin(a):
    return spinmodel.SpinParams(a["d_hz"], a["gamma_e_hz_per_t"])


def _tau_grid(a):
    tmax = a["tau_max_s"] if a["tau_max_s"] is not None else 2.0 / a["f_r_hz"]
    n = a["n_tau"]
    if n < 2 or not tmax > 0:
        raise InputError("need n_tau >= 2 and tau_max_s > 0")
    return np.linspace(tmax / n, tmax, n)


def _notice_seed(a):
    if a["seed"] is None:
        print("notice: --seed not given; using seed 0", file=sys.stderr)
        a["seed"] = 0


def _gamma_ratio(a):
    return a["gamma_n_hz_per_t"] / a["gamma_e_hz_per_t"]


def _profile(a, path):
    t, d = sio.read_columns(_read(path), ["t_s", "delta_e_hz"])
    return register.DetuningProfile(t, d, _gamma_ratio(a))


# -- commands -----------------------------------------------------------------------

def cmd_esr_forward(a):
    e = spinmodel.esr_frequencies(_spin(a), spinmodel.FieldComponents(a["bz_tesla"], a["bx_tesla"]))
    return _kv(f_minus_hz=e.f_minus, f_plus_hz=e.f_plus)


def cmd_esr_invert(a):
    fc = spinmodel.invert_field(_spin(a), spinmodel.EsrPair(a["fminus_hz"], a["fplus_hz"]))
    return _kv(bz_tesla=fc.bz, bx_tesla=fc.bx)


def cmd_map_invert(a):
    fmap = sio.read_field_map(_read(a["input"]))
    out, report = spinmodel.map_to_axial_field(_spin(a), fmap, threads=a["threads"])
    if report.n_failed:
        print(f"warning: {report.n_failed} pixel(s) failed to invert and were marked invalid",
              file=sys.stderr)
    return sio.write_field_map(out)


def cmd_map_interp(a):
    return sio.write_field_map(spinmodel.interpolate_missing(sio.read_field_map(_read(a["input"]))))


def cmd_map_fit_dipole(a):
    fmap = sio.read_field_map(_read(a["input"]))
    d, rep = dipole.fit_dipole(fmap, dipole.NvAxis(a["nv_axis"]), scan_height=a["scan_height_m"])
    return sio.write_json({"dipole": d.to_json(), "report": rep.to_json()})


def cmd_map_gradient(a):
    d = dipole.Dipole.from_json(sio.read_json(_read(a["dipole"])))
    fmap = sio.read_field_map(_read(a["input"]))
    g, gmax = dipole.gradient_map(d, fmap, dipole.NvAxis(a["nv_axis"]), a["motion_axis"],
                                  a["scan_height_m"])
    print(f"max |gradient| = {gmax:.6g} T/m", file=sys.stderr)
    return sio.write_field_map(g)


def cmd_mech_fit_psd(a):
    f, p = sio.read_columns(_read(a["input"]), ["freq_hz", "psd_m2_per_hz"])
    return sio.write_json(mech.fit_lorentzian(mech.TimeSeries(f, p)).to_json())


def cmd_mech_fit_ringdown(a):
    t, amp = sio.read_columns(_read(a["input"]), ["t_s", "amplitude_m"])
    return sio.write_json(mech.fit_ringdown(mech.TimeSeries(t, amp), a["f_r_hz"]).to_json())


def cmd_mech_rms(a):
    f, p = sio.read_columns(_read(a["input"]), ["freq_hz", "psd_m2_per_hz"])
    return _kv(rms_m=mech.rms_from_psd(mech.TimeSeries(f, p), (a["band_lo_hz"], a["band_hi_hz"])))


def cmd_mech_zpm(a):
    r = mech.Resonator(a["f_r_hz"], 1.0, a["m_eff_kg"], a["temperature_k"])
    return sio.write_json({"z_p_m": r.z_p, "n_th": r.n_th})


def _coupling(a):
    return echo.Coupling.from_hz(a["lambda_hz"], a["z_p_m"], a["f_r_hz"])


def cmd_echo_analytic(a):
    c, tau = _coupling(a), _tau_grid(a)
    y = np.asarray(echo.thermal_contrast(c, a["delta_x_m"], tau))
    if a["t2_s"] is not None:
        y = y * np.exp(-echo.DecoherenceModel(a["t2_s"], a["stretch"]).chi(tau))
    return sio.write_csv(["tau_s", "contrast"], zip(map(float, tau), map(float, y)))


def cmd_echo_mc(a):
    _notice_seed(a)
    c, tau = _coupling(a), _tau_grid(a)
    mean, err = echo.mc_curve(c, a["delta_x_m"], tau, a["samples"], a["seed"], threads=a["threads"])
    return sio.write_csv(["tau_s", "contrast", "std_error"],
                         zip(map(float, tau), map(float, mean), map(float, err)))


def cmd_echo_fit(a):
    tau, y = sio.read_columns(_read(a["input"]), ["tau_s", "contrast"])
    fit = echo.fit_coupling(echo.EchoCurve(tau, y), a["delta_x_m"], 2.0 * np.pi * a["f_r_hz"],
                            a["z_p_m"], fit_alpha=a["fit_alpha"])
    return sio.write_json(fit.to_json())


def cmd_transport_profile(a):
    n, T = a["n_points"], a["t_move_s"]
    t = np.linspace(0.0, T, n)
    d = a["peak_hz"] * (0.5 * (1.0 - np.cos(2.0 * np.pi * t / T)) + a["ramp"] * t / T)
    register.DetuningProfile(t, d, _gamma_ratio(a))
    return sio.write_csv(["t_s", "delta_e_hz"], zip(map(float, t), map(float, d)))


def cmd_transport_pi_time(a):
    prof = _profile(a, a["input"])
    t_pi = register.solve_pi_time(prof)
    return sio.write_json({"t_pi_s": t_pi, "t_move_s": prof.t_move,
                           "uncanceled_phase_rad": float(register.nuclear_phase(prof, prof.t_move)),
                           "residual_phase_rad": float(register.nuclear_phase(prof, t_pi))})


def cmd_transport_fringes(a):
    prof = _profile(a, a["input"])
    grid = np.linspace(0.0, prof.t_move, a["n"])
    return sio.write_csv(["x", "contrast"],
                         zip(map(float, grid), map(float, register.fringe_scan(prof, grid))))


def _branches(text):
    if text is None:
        return None
    try:
        return [tuple(float(v) for v in item.split(":")) for item in text.split(",")]
    except ValueError:
        raise InputError(f"bad --branches value {text!r}; expected f_hz:prob,...") from None


def _sequence(a):
    if a["profile"] is not None:
        prof = _profile(a, a["profile"])
    else:
        prof = register.DetuningProfile(np.linspace(0.0, a["t_move_s"], 1024), np.zeros(1024),
                                        _gamma_ratio(a))
    cfg = register.SequenceConfig(tau=a["tau_s"], theta=a["theta_rad"], f_acc=a["f_acc_hz"],
                                  nuclear_polarization=a["polarization"], t_pi=a["t_pi_s"],
                                  t_move=prof.t_move)
    return cfg, prof, _branches(a["branches"])


def cmd_register_simulate(a):
    cfg, prof, br = _sequence(a)
    if a["n_theta"] > 0:
        th = np.linspace(0.0, 2.0 * np.pi, a["n_theta"], endpoint=False)
        y = register.theta_scan(cfg, prof, th, br)
        return sio.write_csv(["x", "contrast"], zip(map(float, th), map(float, y)))
    return _kv(contrast=register.simulate_memory_sequence(cfg, prof, br))


def cmd_register_ramsey(a):
    cfg, prof, br = _sequence(a)
    n = a["n_tau"]
    if n < 2:
        raise InputError("need n_tau >= 2")
    taus = np.linspace(0.0, a["tau_max_s"], n)
    y = register.ramsey_vs_tau(cfg, prof, taus, br)
    return sio.write_csv(["x", "contrast"], zip(map(float, taus), map(float, y)))


def cmd_coop_compute(a):
    c = coop.cooperativity(coop.CoopInputs(a["lambda_hz"], a["t2_s"], a["nkappa_hz"]))
    return f"{c:.3g}\n"


def cmd_coop_table(a):
    rows = coop.EXAMPLE_ROWS if a["input"] is None else sio.read_coop_rows(_read(a["input"]))
    out = coop.table(rows)
    if a["format"] == "json":
        return sio.write_json(out)
    header = list(coop.COLUMNS) + ["cooperativity"]
    return sio.write_csv(header, [[r[k] for k in header] for r in out])


def cmd_coop_project(a):
    s = coop.Scenario(q_factor=a["q_factor"], f_r=a["f_r_hz"], temperature=a["temperature_k"],
                      t2=a["t2_s"], gradient=a["gradient_t_per_m"], z_p=a["z_p_m"],
                      m_eff=a["m_eff_kg"], lambda_over_2pi=a["lambda_hz"])
    return sio.write_json(coop.project_scenario(s, a["gamma_e_hz_per_t"]).to_json())


def cmd_synth(a):
    _notice_seed(a)
    params = {}
    if a["param"]:
        for item in a["param"].split(";"):
            if not item.strip():
                continue
            key, sep, val = item.partition("=")
            if not sep:
                raise InputError(f"bad --param item {item!r}; expected key=value")
            try:
                params[key.strip()] = json.loads(val)
            except json.JSONDecodeError:
                raise InputError(f"bad --param value {val!r}") from None
    return synth.generate_synthetic(a["kind"], params, a["seed"])


# -- dispatch -----------------------------------------------------------------------

def _resolve(ns):
    config = {}
    if ns.config:
        config = sio.read_json(_read(ns.config))
        if not isinstance(config, dict):
            raise InputError("config file must hold a JSON object")
    a = {}
    given = vars(ns)
    for dest, typ, default, required in ns._opts.table:
        if dest in given:
            val = given[dest]
        elif dest in config:
            raw = config[dest]
            try:
                if typ is bool:
                    val = _flag(raw)
                elif typ is _vec:
                    val = _vec(",".join(map(str, raw)) if isinstance(raw, list) else raw)
                else:
                    val = typ(raw)
            except (TypeError, ValueError, argparse.ArgumentTypeError) as exc:
                raise InputError(f"config value for {dest}: {exc}") from None
        elif required:
            raise UsageError(f"missing required option for {dest} (flag or config)")
        else:
            val = typ(default) if typ is _vec and default is not None else default
        a[dest] = val
    threads = ns.threads if ns.threads is not None else config.get("threads")
    a["threads"] = default_threads() if threads is None else int(threads)
    if a["threads"] < 1:
        raise InputError("threads must be >= 1")
    return a


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def main(argv=None):
    try:
        ns = build_parser().parse_args(argv)
        a = _resolve(ns)
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            warnings.showwarning = lambda msg, *rest, **kw: print(f"warning: {msg}", file=sys.stderr)
            text = ns._fn(a)
        _emit(text, ns.out)
        return EXIT_OK
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SpinMechError as exc:
        kind = "input error" if exc.exit_code == EXIT_INPUT else (
            "usage error" if exc.exit_code == EXIT_USAGE else "numerical error")
        print(f"{kind}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
