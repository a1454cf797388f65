"""Configuration-driven experiment runner.

A run goes certify -> simulate -> measure -> dominate and leaves a
self-contained artifact directory::

    config.ini           canonical configuration (round-trips byte-identically)
    fields/              one spectral field file per sample
    curves.csv           generator curves on the fixed z-grid
    curves_rescaled.csv  generator curves on the shrinking window theta(t) z
    diagnostics.csv      t,energy,mass,radius_hat,max_tail_coeff
    envelope.csv         numeric Hopf envelope and closed-form bound
    report.txt           key = value report (certification, majorant, domination)
    summary.txt          PASS|FAIL lifespan=... rho_end=...
"""
from __future__ import annotations

import configparser
import logging
import math
from dataclasses import dataclass, field as dc_field, replace
from pathlib import Path

import numpy as np

from . import majorant as mj
from . import models as md
from .errors import BlowupDetected, ConfigError, GenfuncError
from .generator import (
    MajorantSeries,
    check_calculus,
    compose_series,
    curves_from_csv,
    fit_decay,
    gen_compose_majorant,
    gen_fourier,
    scaled_slack,
)
from .spectral import SpectralField, _extend, truncate

log = logging.getLogger(__name__)

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

MODEL_NAMES = ("burgers", "euler", "hydrostatic", "vdb", "kie", "advection")
PRESETS = ("sine", "taylor_green", "shear", "perturbed_maxwellian", "random",
           "zero")
SWEEP_AXES = ("N", "dt", "B")


# --------------------------------------------------------------------------
# configuration
# --------------------------------------------------------------------------

# (section, key, type); order fixes the canonical text layout
_LAYOUT = [
    ("experiment", "model", str),
    ("experiment", "seed", int),
    ("experiment", "output", str),
    ("discretization", "N", int),
    ("discretization", "dt", float),
    ("discretization", "T", float),
    ("discretization", "stop_at_lifespan", bool),
    ("discretization", "measure_every", int),
    ("generator", "rho", float),
    ("generator", "zpoints", int),
    ("generator", "B", int),
    ("generator", "m", float),
    ("transverse", "nodes", int),
    ("transverse", "vmin", float),
    ("transverse", "vmax", float),
    ("transverse", "vnodes", int),
    ("model", "augment", bool),
    ("model", "potential", str),
    ("initial", "preset", str),
    ("initial", "decay", float),
    ("initial", "amplitude", float),
    ("initial", "eps", float),
    ("majorant", "c0_scale", float),
    ("majorant", "certify_trials", int),
    ("majorant", "tol", float),
]


@dataclass(frozen=True)
class ExperimentConfig:
    model: str = "burgers"
    seed: int = 0
    output: str = "runs/experiment"
    N: int = 32
    dt: float = 1e-3
    T: float = 1.0
    stop_at_lifespan: bool = True
    measure_every: int = 10
    rho: float = 1.0
    zpoints: int = 65
    B: int = 10
    m: float = 4.0
    nodes: int = 33
    vmin: float = -8.0
    vmax: float = 8.0
    vnodes: int = 129
    augment: bool = False
    potential: str = "vp2"
    preset: str = "sine"
    decay: float = 0.5
    amplitude: float = 1.0
    eps: float = 0.01
    c0_scale: float = 1.0
    certify_trials: int = 20
    tol: float = 1e-9

    def validate(self) -> "ExperimentConfig":
        if self.model not in MODEL_NAMES:
            raise ConfigError(f"unknown model {self.model!r}")
        if self.preset not in PRESETS:
            raise ConfigError(f"unknown initial preset {self.preset!r}")
        if self.potential not in ("vp2", "vp3"):
            raise ConfigError(f"unknown potential {self.potential!r}")
        for name in ("N", "dt", "T", "measure_every", "rho", "zpoints", "m",
                     "nodes", "vnodes", "amplitude", "c0_scale", "tol"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        for name in ("seed", "B", "decay", "eps", "certify_trials"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be nonnegative")
        if not self.vmax > self.vmin:
            raise ConfigError("need vmax > vmin")
        if self.zpoints < 3:
            raise ConfigError("zpoints must be at least 3")
        if (self.model == "hydrostatic" and self.preset == "random"
                and self.decay < 0.3):
            # Sobolev-type data are illposed for this model
            raise ConfigError("hydrostatic random data need decay >= 0.3")
        return self

    # text form ------------------------------------------------------------

    def to_text(self) -> str:
        out = []
        section = None
        for sec, key, typ in _LAYOUT:
            if sec != section:
                if section is not None:
                    out.append("")
                out.append(f"[{sec}]")
                section = sec
            out.append(f"{key} = {_format_value(getattr(self, key), typ)}")
        return "\n".join(out) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ExperimentConfig":
        parser = configparser.ConfigParser(interpolation=None)
        parser.optionxform = str
        try:
            parser.read_string(text)
        except configparser.Error as exc:
            raise ConfigError(str(exc)) from exc
        known = {(s, k): t for s, k, t in _LAYOUT}
        values = {}
        for sec in parser.sections():
            for key, raw in parser.items(sec):
                if (sec, key) not in known:
                    raise ConfigError(f"unknown key [{sec}] {key}")
                values[key] = _parse_value(raw, known[sec, key], key)
        return cls(**values).validate()

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        return cls.from_text(text)

    def save(self, path) -> None:
        Path(path).write_text(self.to_text())

    def with_overrides(self, overrides) -> "ExperimentConfig":
        """Apply ``key=value`` or ``section.key=value`` strings."""
        known = {k: (s, t) for s, k, t in _LAYOUT}
        changes = {}
        for item in overrides or ():
            if "=" not in item:
                raise ConfigError(f"override {item!r} is not key=value")
            key, raw = (s.strip() for s in item.split("=", 1))
            if "." in key:
                sec, key = key.split(".", 1)
                if known.get(key, (None,))[0] != sec:
                    raise ConfigError(f"unknown key [{sec}] {key}")
            if key not in known:
                raise ConfigError(f"unknown key {key!r}")
            changes[key] = _parse_value(raw, known[key][1], key)
        return replace(self, **changes).validate()


def _format_value(value, typ) -> str:
    if typ is bool:
        return "true" if value else "false"
    if typ is float:
        return repr(float(value))
    return str(value)


def _parse_value(raw: str, typ, key: str):
    raw = raw.strip()
    try:
        if typ is bool:
            low = raw.lower()
            if low not in ("true", "false", "yes", "no", "1", "0"):
                raise ValueError(raw)
            return low in ("true", "yes", "1")
        return typ(raw)
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {raw!r}") from exc


def preset_config(name: str, **changes) -> ExperimentConfig:
    """Ready-made configurations for the standard experiments."""
    base = {
        "burgers": dict(model="burgers", preset="sine", N=32, dt=1e-3, T=1.0,
                        rho=1.0, output="runs/burgers"),
        "burgers_zero": dict(model="burgers", preset="zero", N=16, dt=1e-2,
                             T=0.5, rho=1.0, output="runs/burgers_zero"),
        "euler": dict(model="euler", preset="taylor_green", N=16, dt=1e-3,
                      T=1.0, stop_at_lifespan=False, measure_every=100,
                      rho=0.5, output="runs/euler"),
        "hydrostatic": dict(model="hydrostatic", preset="random", N=16,
                            dt=1e-4, T=1.0, augment=True, B=8, rho=0.3,
                            decay=0.5, amplitude=0.01, measure_every=20,
                            certify_trials=5, output="runs/hydrostatic"),
        "vdb": dict(model="vdb", preset="perturbed_maxwellian", N=8, dt=1e-3,
                    T=0.5, stop_at_lifespan=False, rho=0.5, measure_every=50,
                    certify_trials=0, output="runs/vdb"),
    }
    if name not in base:
        raise ConfigError(f"unknown preset config {name!r}")
    return replace(ExperimentConfig(**base[name]), **changes).validate()


# --------------------------------------------------------------------------
# model construction
# --------------------------------------------------------------------------

def build_model(cfg: ExperimentConfig) -> md.ModelSpec:
    if cfg.model == "burgers":
        return md.burgers_model()
    if cfg.model == "advection":
        return md.linear_advection_model()
    if cfg.model == "euler":
        return md.euler_model()
    if cfg.model == "hydrostatic":
        return md.hydrostatic_model(cfg.nodes, B=cfg.B, augment=cfg.augment)
    vgrid = md.velocity_grid(cfg.vmin, cfg.vmax, cfg.vnodes)
    potential = "vp3" if cfg.model == "kie" else cfg.potential
    return md.vdb_model(vgrid, m=cfg.m, B=cfg.B, augment=cfg.augment,
                        potential=potential)


def build_initial(cfg: ExperimentConfig, model: md.ModelSpec) -> SpectralField:
    return md.initial_data(cfg.preset, model, cfg.N, seed=cfg.seed,
                           decay=cfg.decay, amplitude=cfg.amplitude,
                           eps=cfg.eps)


def zgrid_of(cfg: ExperimentConfig) -> np.ndarray:
    return np.linspace(0.0, cfg.rho, cfg.zpoints)


# --------------------------------------------------------------------------
# run
# --------------------------------------------------------------------------

@dataclass
class RunResult:
    status: str
    exit_code: int
    directory: Path
    summary: str
    lifespan: float = math.nan
    record: md.SimulationRecord | None = None
    reports: dict = dc_field(default_factory=dict)


def _fmt(x) -> str:
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def _summary(status, lifespan, rho_end) -> str:
    return f"{status} lifespan={_fmt(lifespan)} rho_end={_fmt(rho_end)}"


def _section(name, items) -> str:
    lines = [f"[{name}]"] + [f"{k} = {v}" for k, v in items]
    return "\n".join(lines) + "\n"


def run(cfg: ExperimentConfig, output=None) -> RunResult:
    """Certify, simulate, measure and dominate; write the artifacts."""
    cfg = cfg.validate()
    outdir = Path(output if output is not None else cfg.output)
    model = build_model(cfg)
    u0 = build_initial(cfg, model)
    z = zgrid_of(cfg)

    # certify -------------------------------------------------------------
    cert_items = [("trials", cfg.certify_trials)]
    cert_ok = True
    if cfg.certify_trials > 0:
        try:
            cert = md.certify_condition(model, cfg.certify_trials,
                                        min(cfg.N, 16), z, seed=cfg.seed)
            cert_ok = cert.passed
            cert_items += [("max_ratio_declared", _fmt(cert.max_ratio_declared)),
                           ("max_ratio_condition", _fmt(cert.max_ratio_condition)),
                           ("violations", len(cert.violations))]
        except GenfuncError as exc:
            cert_ok = False
            cert_items.append(("error", f"{type(exc).__name__}: {exc}"))
    cert_items.append(("status", "PASS" if cert_ok else "FAIL"))

    # majorant -------------------------------------------------------------
    G0 = model.generator(u0, z)
    problem = mj.HopfProblem(model.C0 * cfg.c0_scale, model.F, cfg.rho,
                             mj.compute_M0(G0, cfg.rho))
    life = mj.lifespan(problem)
    T = min(cfg.T, life) if cfg.stop_at_lifespan else cfg.T
    maj_items = [("C0_model", _fmt(model.C0)), ("c0_scale", _fmt(cfg.c0_scale)),
                 ("C0", _fmt(problem.C0)), ("F", model.F.name),
                 ("rho", _fmt(cfg.rho)), ("M0", _fmt(problem.M0)),
                 ("lifespan", _fmt(life)),
                 ("theta_slope", _fmt(problem.theta_slope)),
                 ("T", _fmt(T))]

    # simulate -------------------------------------------------------------
    outdir.mkdir(parents=True, exist_ok=True)
    cfg.save(outdir / "config.ini")
    try:
        rec = md.simulate(model, u0, cfg.N, T, cfg.dt, z, cfg.measure_every)
    except BlowupDetected as exc:
        if exc.record is not None:
            exc.record.export(outdir)
        summary = _summary("FAIL", life, math.nan)
        (outdir / "report.txt").write_text(
            _section("run", [("status", "FAIL"), ("blowup", str(exc))])
            + _section("certification", cert_items)
            + _section("majorant", maj_items))
        (outdir / "summary.txt").write_text(summary + "\n")
        return RunResult("FAIL", EXIT_FAIL, outdir, summary, life, exc.record)
    rec.export(outdir)
    (outdir / "simulation.txt").unlink(missing_ok=True)

    # dominate -------------------------------------------------------------
    env = mj.integrate_hopf_envelope(problem, T, np.array(rec.times), z)
    rescaled = mj.rescaled_curves(env, rec.times, rec.states,
                                  lambda u, zz: model.generator(u, zz))
    reports = {
        "rescaled": mj.check_domination(env, rescaled, "rescaled", cfg.tol),
        "fixed": mj.check_domination(env, list(zip(rec.times, rec.curves)),
                                     "fixed", cfg.tol),
    }
    (outdir / "envelope.csv").write_text(env.to_csv())
    (outdir / "curves_rescaled.csv").write_text("".join(
        c.to_csv(t=t, header=(i == 0)) for i, (t, c) in enumerate(rescaled)))
    dom_ok = all(r.passed for r in reports.values())
    status = "PASS" if (dom_ok and cert_ok) else "FAIL"

    rho_end = _rho_end(rec)
    summary = _summary(status, life, rho_end)
    run_items = [("status", status), ("domination_status",
                                      "PASS" if dom_ok else "FAIL"),
                 ("model", model.name), ("variant", model.variant),
                 ("samples", len(rec.times)), ("final_time", _fmt(rec.times[-1])),
                 ("rho_end", _fmt(rho_end))]
    (outdir / "report.txt").write_text(
        _section("run", run_items) + "\n"
        + _section("certification", cert_items) + "\n"
        + _section("majorant", maj_items) + "\n"
        + reports["rescaled"].to_text() + "\n" + reports["fixed"].to_text())
    (outdir / "summary.txt").write_text(summary + "\n")
    log.info("%s", summary)
    return RunResult(status, EXIT_PASS if status == "PASS" else EXIT_FAIL,
                     outdir, summary, life, rec, reports)


def _rho_end(rec: md.SimulationRecord) -> float:
    """Fitted decay rate at the final sample (``inf`` for a zero state)."""
    r = rec.diagnostics["radius_hat"][-1]
    if math.isnan(r) and float(np.max(np.abs(rec.states[-1].coeffs))) == 0:
        return math.inf
    return r


# --------------------------------------------------------------------------
# check
# --------------------------------------------------------------------------

def read_report(path) -> dict:
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    parser.read_string(Path(path).read_text())
    return {s: dict(parser.items(s)) for s in parser.sections()}


@dataclass
class CheckResult:
    status: str
    stored_status: str
    reproduced: bool
    reports: dict

    @property
    def exit_code(self) -> int:
        return EXIT_PASS if (self.status == "PASS" and self.reproduced) else EXIT_FAIL


def check(artifacts) -> CheckResult:
    """Re-verify domination from the stored curves and envelope."""
    d = Path(artifacts)
    for name in ("config.ini", "report.txt", "envelope.csv", "curves.csv",
                 "curves_rescaled.csv"):
        if not (d / name).is_file():
            raise ConfigError(f"artifact {name} missing in {d}")
    cfg = ExperimentConfig.load(d / "config.ini")
    rep = read_report(d / "report.txt")
    maj = rep["majorant"]
    problem = mj.HopfProblem(float(maj["C0"]), build_model(cfg).F,
                             float(maj["rho"]), float(maj["M0"]))
    env = mj.MajorantEnvelope.from_csv((d / "envelope.csv").read_text(),
                                       float(maj["lifespan"]), problem)
    fixed = curves_from_csv((d / "curves.csv").read_text())
    resc_text = (d / "curves_rescaled.csv").read_text()
    rescaled = curves_from_csv(resc_text) if resc_text.strip() else []
    reports = {
        "rescaled": mj.check_domination(env, rescaled, "rescaled", cfg.tol),
        "fixed": mj.check_domination(env, fixed, "fixed", cfg.tol),
    }
    dom = "PASS" if all(r.passed for r in reports.values()) else "FAIL"
    cert = rep.get("certification", {}).get("status", "PASS")
    status = "PASS" if (dom == "PASS" and cert == "PASS") else "FAIL"
    stored = rep["run"]["status"]
    reproduced = (dom == rep["run"].get("domination_status", stored)
                  and status == stored)
    return CheckResult(status, stored, reproduced, reports)


# --------------------------------------------------------------------------
# sweep
# --------------------------------------------------------------------------

def tail_estimate(f: SpectralField, N: int) -> float:
    """``sum_{|a| > N} A exp(-r |a|)`` from the fitted decay ``(r, log A)``."""
    try:
        r, intercept = fit_decay(f)
    except GenfuncError:
        return math.nan
    if not r > 0:
        return math.inf
    A = math.exp(intercept)
    if f.dim == 1:
        q = math.exp(-r)
        return 2.0 * A * q ** (N + 1) / (1.0 - q)
    K = N + int(math.ceil(40.0 / r)) + 1
    k = np.arange(-K, K + 1)
    norms = np.sqrt(k[:, None] ** 2 + k[None, :] ** 2)
    return float(A * np.sum(np.exp(-r * norms[norms > N])))


def _field_distance(a: SpectralField, b: SpectralField,
                    within: float = math.inf) -> float:
    """l1 distance of the coefficients (modes ``|a| <= within`` only)."""
    n = max(a.trunc, b.trunc)
    diff = _extend(a, n).coeffs - _extend(b, n).coeffs
    mags = np.sqrt(np.sum(np.abs(diff) ** 2, axis=0))
    mags = np.where((_extend(a, n).mode_norm() <= within)[..., None], mags, 0.0)
    return float(np.max(np.sum(mags, axis=(0, 1))))


@dataclass
class SweepEntry:
    value: str
    config: ExperimentConfig
    status: str
    lifespan: float = math.nan
    final_time: float = math.nan
    final: SpectralField | None = None


SWEEP_HEADER = ("axis,value,status,lifespan,final_time,diff_to_next,"
                "diff_resolved,order,tail_estimate")


def _sweep_diff(axis, a: SweepEntry, b: SweepEntry, zgrid):
    if a.final is None or b.final is None:
        return math.nan, math.nan
    if axis == "B":
        ga = build_model(a.config).generator(a.final, zgrid).values
        gb = build_model(b.config).generator(b.final, zgrid).values
        d = float(np.max(np.abs(ga - gb)))
        return d, d
    within = min(a.final.trunc, b.final.trunc)
    return (_field_distance(a.final, b.final),
            _field_distance(a.final, b.final, within))


def sweep(cfg: ExperimentConfig, axis: str, values, output=None) -> str:
    """One run per value; CSV of diffs between consecutive values.

    ``diff_to_next`` is the l1 coefficient distance of the final states (max
    over transverse nodes) for ``N`` and ``dt``; ``diff_resolved`` restricts
    it to the modes both runs carry. For ``B`` both columns hold the max
    difference of the final generator curves. ``order`` is
    ``log(d_i / d_{i+1}) / log(v_i / v_{i+1})``. For ``N``,
    ``tail_estimate`` is the fitted tail mass beyond ``N`` of the next
    (finer) run. Failed entries are recorded and the sweep continues.
    """
    if axis not in SWEEP_AXES:
        raise ConfigError(f"axis must be one of {SWEEP_AXES}")
    values = [str(v) for v in values]
    if len(values) < 2:
        raise ConfigError("a sweep needs at least two values")
    base = Path(output if output is not None else cfg.output)
    entries = []
    for v in values:
        try:
            val = float(v) if axis == "dt" else int(float(v))
            sub = replace(cfg, **{axis: val}).validate()
        except (ValueError, ConfigError) as exc:
            raise ConfigError(f"bad {axis} value {v!r}: {exc}") from exc
        try:
            res = run(sub, base / f"{axis}_{v}")
            rec = res.record
            entries.append(SweepEntry(v, sub, res.status, res.lifespan,
                                      rec.times[-1] if rec else math.nan,
                                      rec.states[-1] if rec else None))
        except (GenfuncError, RuntimeError) as exc:
            log.warning("sweep entry %s=%s failed: %s", axis, v, exc)
            entries.append(SweepEntry(v, sub, f"ERROR:{type(exc).__name__}"))
    z = zgrid_of(cfg)
    diffs = [_sweep_diff(axis, a, b, z) for a, b in zip(entries, entries[1:])]
    diffs.append((math.nan, math.nan))
    lines = [SWEEP_HEADER]
    for i, e in enumerate(entries):
        order = math.nan
        if i + 1 < len(diffs):
            d0, d1 = diffs[i][0], diffs[i + 1][0]
            if d0 > 0 and d1 > 0:
                order = (math.log(d0 / d1)
                         / math.log(float(values[i]) / float(values[i + 1])))
        tail = math.nan
        if axis == "N" and i + 1 < len(entries) and entries[i + 1].final is not None:
            tail = tail_estimate(entries[i + 1].final, int(e.config.N))
        lines.append(",".join([axis, e.value, e.status, _fmt(e.lifespan),
                               _fmt(e.final_time), _fmt(diffs[i][0]),
                               _fmt(diffs[i][1]), _fmt(order), _fmt(tail)]))
    text = "\n".join(lines) + "\n"
    base.mkdir(parents=True, exist_ok=True)
    (base / f"sweep_{axis}.csv").write_text(text)
    return text


# --------------------------------------------------------------------------
# calculus property suite
# --------------------------------------------------------------------------

def random_trig_pair(rng: np.random.Generator, dim: int, N: int,
                     decay=(0.2, 1.5)):
    """Two random complex trig polynomials with exponentially decaying modes."""
    from .spectral import mode_norm
    out = []
    for _ in range(2):
        norms = mode_norm(dim, N)
        r = rng.uniform(*decay)
        c = (rng.normal(size=norms.shape) + 1j * rng.normal(size=norms.shape))
        c *= np.exp(-r * norms) * rng.uniform(0.1, 2.0)
        f = SpectralField(dim, N, c[None, ..., None], None)
        out.append(truncate(f, N))
    return out


@dataclass
class SuiteResult:
    trials: int
    seed: int
    failures: list = dc_field(default_factory=list)
    worst: dict = dc_field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_text(self) -> str:
        lines = [f"trials = {self.trials}", f"seed = {self.seed}"]
        for k, v in sorted(self.worst.items()):
            lines.append(f"{k} = {v:.3e}")
        lines.append(f"failures = {len(self.failures)}")
        lines.extend(f"  {msg}" for msg in self.failures[:20])
        lines.append("status = " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines) + "\n"


def calculus_suite(trials: int = 200, seed: int = 0, max_N: int = 16,
                   rho: float = 1.0, zpoints: int = 33) -> SuiteResult:
    """Sum, product, derivative and time-derivative rules plus composition.

    Trials alternate between one and two dimensions. Composition is checked
    for ``F(x) = x^2`` and ``F = exp`` against direct evaluation of
    ``F~(Gen[f])``.
    """
    rng = np.random.default_rng(seed)
    z = np.linspace(0.0, rho, zpoints)
    res = SuiteResult(trials, seed)
    worst = {"sum_slack": math.inf, "product_slack": math.inf,
             "derivative_residual": 0.0, "time_derivative_slack": math.inf,
             "compose_square_slack": math.inf, "compose_exp_slack": math.inf,
             "majorant_sum_error": 0.0}
    square = MajorantSeries.power(2)
    expo = MajorantSeries.exponential(40)
    for k in range(trials):
        dim = 1 + k % 2
        N = int(rng.integers(1, max_N + 1))
        f, g = random_trig_pair(rng, dim, N)
        rep = check_calculus(f, g, z)
        worst["sum_slack"] = min(worst["sum_slack"], float(rep.sum_slack.min()))
        worst["product_slack"] = min(worst["product_slack"],
                                     float(rep.product_slack.min()))
        worst["derivative_residual"] = max(worst["derivative_residual"],
                                           rep.derivative_residual)
        for msg in rep.failures:
            res.failures.append(f"trial {k}: {msg}")
        # d/dt Gen[f + t g] at t=0 is below Gen[g]; discrete form
        h = 10.0 ** rng.uniform(-6, 0)
        lhs = (gen_fourier(f + h * g, z).values - gen_fourier(f, z).values) / h
        s = scaled_slack(gen_fourier(g, z).values, lhs)
        worst["time_derivative_slack"] = min(worst["time_derivative_slack"],
                                             float(s.min()))
        if s.min() < rep.tol_slack:
            res.failures.append(f"trial {k}: time-derivative slack {s.min():.3e}")
        # composition, scaled so that Gen[f](rho) = 1
        fs = f * (1.0 / gen_fourier(f, [rho]).values[0])
        G = gen_fourier(fs, z).values
        cutoff = 2 * N
        sq = gen_fourier(compose_series(fs, square, cutoff), z).values
        s = scaled_slack(G ** 2, sq)
        worst["compose_square_slack"] = min(worst["compose_square_slack"],
                                            float(s.min()))
        if s.min() < rep.tol_slack:
            res.failures.append(f"trial {k}: x^2 composition slack {s.min():.3e}")
        if dim == 1 or k % 10 == 1:
            ex = gen_fourier(compose_series(fs, expo, cutoff), z).values
            direct = np.exp(G)
            s = scaled_slack(direct, ex)
            worst["compose_exp_slack"] = min(worst["compose_exp_slack"],
                                             float(s.min()))
            if s.min() < rep.tol_slack:
                res.failures.append(f"trial {k}: exp composition slack {s.min():.3e}")
            err = max(abs(gen_compose_majorant(expo, float(x)) - math.exp(x))
                      / math.exp(x) for x in G)
            worst["majorant_sum_error"] = max(worst["majorant_sum_error"], err)
            if err > 1e-12:
                res.failures.append(f"trial {k}: exp majorant sum error {err:.2e}")
    res.worst = worst
    return res
