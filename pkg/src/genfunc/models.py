"""PDE right-hand sides, Galerkin time stepping and instrumented runs.

Every ``*_rhs`` returns the exact (untruncated) right-hand side; the
Galerkin vector field applies ``P_N`` before and after:
``du/dt = P_N A(P_N u)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Callable

import numpy as np

from .chebyshev import (
    chebyshev_y,
    cheb_diff,
    clenshaw_curtis_weights,
    elliptic_constant,
    poisson_channel_solve,
    coeffs_to_values,
)
from .errors import BlowupDetected, GridNotDecayed, NotDivergenceFree, TooFewModes
from .generator import (
    MajorantSeries,
    fit_decay,
    generator,
    velocity_derivative,
)
from .spectral import (
    SpectralField,
    Transverse,
    component,
    convolve,
    derivative,
    hermitian_part,
    leray_project,
    max_mode_divergence,
    mode_norm,
    save_field,
    stack,
    truncate,
    zeros,
)

BLOWUP_LEVEL = 1e12
_trapezoid = getattr(np, "trapezoid", None) or np.trapz


@dataclass(frozen=True, eq=False)
class ModelSpec:
    """A right-hand side ``A`` with the constants of its generator estimate.

    ``bound(G, dG)`` is the model's own estimate of ``Gen[A(u)]`` in terms of
    ``G = Gen[u]`` and ``dG = d/dz Gen[u]``; ``condition_rhs`` is the generic
    form ``C0 F~(G) (1 + dG)``.
    """

    name: str
    rhs: Callable[[SpectralField], SpectralField]
    C0: float
    F: MajorantSeries
    layout: str
    variant: str
    bound: Callable
    dim: int = 1
    components: int = 1
    transverse: Transverse | None = None
    augment: bool = False
    real: bool = True
    gen_kwargs: dict = dc_field(default_factory=dict)
    extras: dict = dc_field(default_factory=dict)

    def condition_rhs(self, G, dG):
        return self.C0 * self.F(G) * (1.0 + dG)

    def generator(self, u: SpectralField, zgrid, dz_order: int = 0):
        return generator(u, zgrid, self.variant, dz_order=dz_order,
                         **self.gen_kwargs)


# --------------------------------------------------------------------------
# right-hand sides
# --------------------------------------------------------------------------

def burgers_rhs(u: SpectralField) -> SpectralField:
    """``-u u_x`` on the 1D torus."""
    return -convolve(u, derivative(u, 0))


def linear_advection_rhs(u: SpectralField) -> SpectralField:
    """``u_x``; exact solution ``u(t, x) = u0(x + t)``."""
    return derivative(u, 0)


def advection_term(u: SpectralField) -> SpectralField:
    """``(u . grad) u`` computed component by component."""
    parts = []
    for k in range(u.dim):
        uk = component(u, k)
        acc = None
        for j in range(u.dim):
            term = convolve(component(u, j), derivative(uk, j))
            acc = term if acc is None else acc + term
        parts.append(acc)
    return stack(parts)


def _advection_divergence_form(u: SpectralField) -> SpectralField:
    """``div(u (x) u)``, equal to ``(u . grad) u`` for divergence-free ``u``."""
    comps = [component(u, j) for j in range(u.dim)]
    prod = {}
    for j in range(u.dim):
        for k in range(j, u.dim):
            prod[j, k] = prod[k, j] = convolve(comps[j], comps[k])
    parts = []
    for k in range(u.dim):
        acc = None
        for j in range(u.dim):
            term = derivative(prod[j, k], j)
            acc = term if acc is None else acc + term
        parts.append(acc)
    return stack(parts)


def euler_rhs(u: SpectralField, div_tol: float = 1e-10) -> SpectralField:
    """``-P (u . grad) u`` for a divergence-free 2D velocity field."""
    scale = max(1.0, float(np.max(np.abs(u.coeffs))) * max(u.trunc, 1))
    div = max_mode_divergence(u)
    if div > div_tol * scale:
        raise NotDivergenceFree(f"max |alpha . u_alpha| = {div:.3e}")
    return -leray_project(_advection_divergence_form(u))


def _y_derivative(f: SpectralField) -> SpectralField:
    D = cheb_diff(f.nodes)
    return f.with_coeffs(f.coeffs @ D.T)


def hydrostatic_velocity(omega: SpectralField):
    """``(u1, u2) = (d_y phi, -d_x phi)`` with ``d_y^2 phi = omega``."""
    phi = poisson_channel_solve(omega)
    return _y_derivative(phi), -derivative(phi, 0)


def hydrostatic_rhs(omega: SpectralField) -> SpectralField:
    """``-(u1 d_x omega + u2 d_y omega)`` in a channel ``T x [-1, 1]``."""
    w = component(omega, 0)
    u1, u2 = hydrostatic_velocity(w)
    return -(convolve(u1, derivative(w, 0)) + convolve(u2, _y_derivative(w)))


def _augment_rhs(base, transverse_derivative):
    """Lift ``A`` to ``U = [f, d_x f, d_s f]`` via ``[A, d_x A, d_s A]``.

    ``s`` is the transverse variable (``y`` or ``v``) and
    ``transverse_derivative`` differentiates along it.

    Only component 0 drives the dynamics; the other two follow as exact
    derivatives of the same right-hand side.
    """
    def rhs(U: SpectralField) -> SpectralField:
        a = base(component(U, 0))
        return stack([a, derivative(a, 0), transverse_derivative(a)])
    return rhs


def _velocity_step(f: SpectralField) -> float:
    v = f.transverse.nodes
    return float(v[1] - v[0])


def _check_edges(f: SpectralField, tol: float = 1e-10):
    mags = f.magnitudes()
    peak = float(np.max(mags))
    edge = float(max(np.max(mags[..., 0]), np.max(mags[..., -1])))
    if peak > 0 and edge > tol * peak:
        raise GridNotDecayed(f"|f| at the velocity edges is {edge / peak:.2e} of peak")


def vp2_potential(f: SpectralField) -> SpectralField:
    """``phi = int f dv - 1`` (Vlasov-Dirac-Benney closure), x-modes only."""
    v = f.transverse.nodes
    if f.dim != 1:
        raise ValueError("vp2_potential is implemented for d = 1")
    phi = _trapezoid(f.coeffs[:1], v, axis=-1)[..., None]
    phi[0, f.trunc, 0, 0] -= 1.0
    return SpectralField(f.dim, f.trunc, phi, None)


def kie_potential(f: SpectralField) -> SpectralField:
    """Kinetic incompressible Euler closure ``-lap phi = div div int f v v dv``.

    In one dimension ``phi_a = -int f_a v^2 dv`` for ``a != 0`` and the mean
    of ``phi`` (not fixed by the equation) is set to zero.
    """
    if f.transverse_kind != "grid_v":
        raise ValueError("kie_potential needs a grid_v transverse axis")
    if f.dim != 1:
        raise ValueError("kie_potential is implemented for d = 1")
    _check_edges(component(f, 0))
    v = f.transverse.nodes
    phi = -_trapezoid(f.coeffs[:1] * v ** 2, v, axis=-1)[..., None]
    phi[0, f.trunc, 0, 0] = 0.0
    return SpectralField(f.dim, f.trunc, phi, None)


def vdb_rhs(f: SpectralField, potential: str = "vp2") -> SpectralField:
    """``-v f_x + phi_x f_v`` with ``phi`` from :func:`vp2_potential`
    (or :func:`kie_potential` when ``potential="vp3"``)."""
    f = component(f, 0)
    _check_edges(f)
    v = f.transverse.nodes
    phi = vp2_potential(f) if potential == "vp2" else kie_potential(f)
    force = convolve(derivative(phi, 0),
                     f.with_coeffs(velocity_derivative(f.coeffs, _velocity_step(f))))
    stream = derivative(f, 0)
    stream = stream.with_coeffs(-stream.coeffs * v)
    return stream + force


# --------------------------------------------------------------------------
# model catalogue
# --------------------------------------------------------------------------

def burgers_model() -> ModelSpec:
    return ModelSpec(
        name="burgers", rhs=burgers_rhs, C0=1.0,
        F=MajorantSeries.identity(), layout="scalar", variant="fourier",
        bound=lambda G, dG: G * dG, dim=1)


def linear_advection_model() -> ModelSpec:
    return ModelSpec(
        name="advection", rhs=linear_advection_rhs, C0=1.0,
        F=MajorantSeries.from_coeffs([1.0], name="one"), layout="scalar",
        variant="fourier", bound=lambda G, dG: dG, dim=1)


def euler_model() -> ModelSpec:
    # Euclidean per-mode norms make each P_alpha a contraction, so the
    # projection costs nothing in the generator estimate.
    return ModelSpec(
        name="euler", rhs=euler_rhs, C0=1.0, F=MajorantSeries.identity(),
        layout="vector2", variant="fourier", bound=lambda G, dG: G * dG,
        dim=2, components=2, extras={"leray_entry_bound": 1.0,
                                      "leray_row_sum_bound": 2.0})


def hydrostatic_model(nodes: int = 33, B: int = 10,
                      augment: bool = False) -> ModelSpec:
    c_ell = elliptic_constant(nodes)
    rhs = hydrostatic_rhs
    if augment:
        rhs = _augment_rhs(hydrostatic_rhs, _y_derivative)
    return ModelSpec(
        name="hydrostatic", rhs=rhs, C0=c_ell, F=MajorantSeries.identity(),
        layout="x-fourier*y-cheb", variant="mixed",
        bound=lambda G, dG: c_ell * (G + dG) * dG, dim=1,
        components=3 if augment else 1, transverse=chebyshev_y(nodes),
        augment=augment, gen_kwargs={"B": B},
        extras={"elliptic_constant": c_ell})


def velocity_grid(vmin: float = -8.0, vmax: float = 8.0,
                  nodes: int = 129) -> Transverse:
    return Transverse("grid_v", np.linspace(vmin, vmax, nodes))


def vdb_model(vgrid: Transverse | None = None, m: float = 4.0, B: int = 10,
              augment: bool = False, potential: str = "vp2") -> ModelSpec:
    """Vlasov-Dirac-Benney (``potential="vp2"``) or kinetic incompressible
    Euler (``"vp3"``) on ``T x [vmin, vmax]``."""
    if vgrid is None:
        vgrid = velocity_grid()
    if potential not in ("vp2", "vp3"):
        raise ValueError(f"unknown potential {potential!r}")
    v = vgrid.nodes
    moment = 0 if potential == "vp2" else 2
    c_pot = float(_trapezoid((1 + v ** 2) ** (-0.5 * m) * np.abs(v) ** moment, v))

    def base(f):
        return vdb_rhs(f, potential)

    def dv(a):
        return a.with_coeffs(velocity_derivative(a.coeffs, v[1] - v[0]))

    rhs = _augment_rhs(base, dv) if augment else base
    return ModelSpec(
        name="vdb" if potential == "vp2" else "kie", rhs=rhs, C0=c_pot,
        F=MajorantSeries.identity(), layout="x-fourier*v-grid",
        variant="kinetic", bound=lambda G, dG: c_pot * dG * dG, dim=1,
        components=3 if augment else 1, transverse=vgrid, augment=augment,
        gen_kwargs={"B": B, "m": m}, extras={"potential": potential})


MODELS = {
    "burgers": burgers_model,
    "euler": euler_model,
    "hydrostatic": hydrostatic_model,
    "vdb": vdb_model,
    "kie": lambda **kw: vdb_model(potential="vp3", **kw),
    "advection": linear_advection_model,
}


# --------------------------------------------------------------------------
# initial data
# --------------------------------------------------------------------------

def maxwellian(v):
    return np.exp(-0.5 * np.asarray(v) ** 2) / math.sqrt(2 * math.pi)


def _lift(model: ModelSpec, f: SpectralField) -> SpectralField:
    """Attach the derivative components of an augmented state."""
    if not model.augment:
        return f
    a = component(f, 0)
    if model.layout == "x-fourier*y-cheb":
        t = _y_derivative(a)
    else:
        t = a.with_coeffs(velocity_derivative(a.coeffs, _velocity_step(a)))
    return stack([a, derivative(a, 0), t])


def sine(N: int, amplitude: float = 1.0) -> SpectralField:
    from .spectral import make_field
    return make_field([((1,), -0.5j * amplitude), ((-1,), 0.5j * amplitude)],
                      dim=1, trunc=N)


def taylor_green(N: int, amplitude: float = 1.0) -> SpectralField:
    """``u = (cos x sin y, -sin x cos y)``."""
    from .spectral import make_field
    a = 0.25 * amplitude
    # cos x sin y = (e^{ix}+e^{-ix})(e^{iy}-e^{-iy}) / (4i)
    u1 = [((1, 1), -1j * a), ((-1, 1), -1j * a), ((1, -1), 1j * a),
          ((-1, -1), 1j * a)]
    # -sin x cos y = -(e^{ix}-e^{-ix})(e^{iy}+e^{-iy}) / (4i)
    u2 = [((1, 1), 1j * a), ((1, -1), 1j * a), ((-1, 1), -1j * a),
          ((-1, -1), -1j * a)]
    f1 = make_field(u1, 2, N)
    f2 = make_field(u2, 2, N)
    return stack([f1, f2])


def shear(N: int, transverse: Transverse, amplitude: float = 1.0) -> SpectralField:
    """x-independent vorticity ``omega = amplitude * cos(pi y / 2) (1 + y/2)``."""
    from .spectral import make_field
    y = transverse.nodes
    prof = amplitude * np.cos(0.5 * np.pi * y) * (1 + 0.5 * y)
    return make_field([((0,), prof)], 1, N, transverse=transverse)


def perturbed_maxwellian(N: int, vgrid: Transverse,
                         eps: float = 0.01) -> SpectralField:
    """``(1 + eps cos x) M(v)`` with the unit Maxwellian ``M``."""
    from .spectral import make_field
    g = maxwellian(vgrid.nodes)
    return make_field([((0,), g), ((1,), 0.5 * eps * g), ((-1,), 0.5 * eps * g)],
                      1, N, transverse=vgrid)


def random_analytic(model: ModelSpec, N: int, rng: np.random.Generator,
                    decay: float = 0.5, amplitude: float = 1.0) -> SpectralField:
    """Random real field with ``|f_a| = amplitude * exp(-decay |a|)``.

    Phases are drawn from ``rng``. Vector fields are Leray-projected,
    channel fields get random Chebyshev-smooth y-profiles, kinetic fields a
    Hermite-modulated Maxwellian in ``v`` around the unit background.
    """
    dim = model.dim
    tr = model.transverse
    comps = 1 if model.augment else model.components
    norms = mode_norm(dim, N)
    shape = (comps,) + norms.shape
    phases = np.exp(2j * np.pi * rng.random(shape))
    mags = amplitude * np.exp(-decay * norms)
    coeffs = (mags * phases)[..., None]
    if tr is not None and tr.kind == "chebyshev_y":
        n = tr.size
        k = np.arange(n)
        ch = rng.normal(size=shape + (n,)) * np.exp(-1.0 * k)
        prof = coeffs_to_values(ch)
        prof /= np.max(np.abs(prof), axis=-1, keepdims=True)
        coeffs = coeffs * prof
    elif tr is not None:
        v = tr.nodes
        herm = (1 + rng.normal(scale=0.3, size=shape + (1,)) * v
                + rng.normal(scale=0.3, size=shape + (1,)) * (v ** 2 - 1))
        coeffs = coeffs * herm * maxwellian(v)
        coeffs[:, N, ...] = maxwellian(v)
    f = SpectralField(dim, N, coeffs, tr)
    f = hermitian_part(truncate(f, N))
    if model.layout == "vector2":
        f = leray_project(f)
    return _lift(model, f)


def initial_data(name: str, model: ModelSpec, N: int, seed: int = 0,
                 decay: float = 0.5, amplitude: float = 1.0,
                 eps: float = 0.01) -> SpectralField:
    if name == "zero":
        f = zeros(model.dim, N, 1 if model.augment else model.components,
                  model.transverse)
        return _lift(model, f)
    if name == "sine":
        f = sine(N, amplitude)
    elif name == "taylor_green":
        f = taylor_green(N, amplitude)
    elif name == "shear":
        f = shear(N, model.transverse, amplitude)
    elif name == "perturbed_maxwellian":
        f = perturbed_maxwellian(N, model.transverse, eps)
    elif name == "random":
        return random_analytic(model, N, np.random.default_rng(seed), decay,
                               amplitude)
    else:
        raise ValueError(f"unknown initial-data preset {name!r}")
    return _lift(model, truncate(f, N))


# --------------------------------------------------------------------------
# Galerkin stepping
# --------------------------------------------------------------------------

def galerkin_rhs(u: SpectralField, model: ModelSpec, N: int) -> SpectralField:
    """``P_N A(P_N u)``."""
    return truncate(model.rhs(truncate(u, N)), N)


def galerkin_step(u: SpectralField, dt: float, model: ModelSpec,
                  N: int) -> SpectralField:
    """One classical RK4 step of the ``P_N``-regularised ODE."""
    if dt == 0:
        return u
    k1 = galerkin_rhs(u, model, N)
    k2 = galerkin_rhs(u + (0.5 * dt) * k1, model, N)
    k3 = galerkin_rhs(u + (0.5 * dt) * k2, model, N)
    k4 = galerkin_rhs(u + dt * k3, model, N)
    out = truncate(u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4), N)
    if model.real:
        out = hermitian_part(out)
    peak = float(np.max(np.abs(out.coeffs)))
    if not np.isfinite(peak) or peak > BLOWUP_LEVEL:
        raise BlowupDetected(f"coefficient magnitude {peak:.3e} after step")
    return out


def suggest_dt(u: SpectralField, N: int, factor: float = 0.5) -> float:
    """Transport CFL rule ``dt = factor / (N max|u|)`` (coefficient-sum bound)."""
    vmax = float(np.sum(np.max(u.magnitudes(), axis=-1)))
    return factor / (max(N, 1) * max(vmax, 1e-12))


# --------------------------------------------------------------------------
# diagnostics
# --------------------------------------------------------------------------

def energy(u: SpectralField) -> float:
    """``sum_a |u_a|^2`` (integrated over the transverse direction)."""
    sq = np.sum(np.abs(u.coeffs) ** 2, axis=(0, 1, 2))
    if u.transverse is None:
        return float(sq[0])
    if u.transverse.kind == "chebyshev_y":
        return float(sq @ clenshaw_curtis_weights(u.nodes))
    return float(_trapezoid(sq, u.transverse.nodes))


def mass(u: SpectralField) -> float:
    """Integral of component 0 over the torus (and the transverse direction)."""
    c0 = u.coeffs[0, u.trunc, u.trunc if u.dim == 2 else 0].real
    vol = (2 * math.pi) ** u.dim
    if u.transverse is None:
        return float(vol * c0[0])
    if u.transverse.kind == "chebyshev_y":
        return float(vol * c0 @ clenshaw_curtis_weights(u.nodes))
    return float(vol * _trapezoid(c0, u.transverse.nodes))


def max_tail_coeff(u: SpectralField, N: int) -> float:
    norms = u.mode_norm()
    shell = (norms > N - 1) & (norms <= N + 1e-12)
    mags = np.max(u.magnitudes(), axis=-1)
    return float(np.max(mags[shell])) if np.any(shell) else 0.0


def consistency_defect(U: SpectralField, model: ModelSpec) -> float:
    """Mismatch between the derivative slots of an augmented state and
    the derivatives of its first component (relative to the slot scale)."""
    if not model.augment:
        return 0.0
    lifted = _lift(model, component(U, 0))
    scale = max(1.0, float(np.max(np.abs(U.coeffs))))
    return float(np.max(np.abs(lifted.coeffs - U.coeffs)) / scale)


# --------------------------------------------------------------------------
# simulation
# --------------------------------------------------------------------------

@dataclass
class SimulationRecord:
    config: dict
    times: list = dc_field(default_factory=list)
    states: list = dc_field(default_factory=list)
    curves: list = dc_field(default_factory=list)
    diagnostics: dict = dc_field(default_factory=lambda: {
        "energy": [], "mass": [], "radius_hat": [], "max_tail_coeff": []})

    def append(self, t, state, curve, diag, keep_state=True):
        if self.times and t <= self.times[-1]:
            raise ValueError("sample times must increase")
        self.times.append(float(t))
        self.states.append(state if keep_state else None)
        self.curves.append(curve)
        for key, val in diag.items():
            self.diagnostics[key].append(float(val))

    def diagnostics_csv(self) -> str:
        lines = ["t,energy,mass,radius_hat,max_tail_coeff"]
        d = self.diagnostics
        for i, t in enumerate(self.times):
            lines.append(",".join(format(x, ".17g") for x in (
                t, d["energy"][i], d["mass"][i], d["radius_hat"][i],
                d["max_tail_coeff"][i])))
        return "\n".join(lines) + "\n"

    def curves_csv(self) -> str:
        parts = []
        for i, (t, c) in enumerate(zip(self.times, self.curves)):
            parts.append(c.to_csv(t=t, header=(i == 0)))
        return "".join(parts)

    def export(self, directory) -> Path:
        d = Path(directory)
        (d / "fields").mkdir(parents=True, exist_ok=True)
        for i, s in enumerate(self.states):
            if s is not None:
                save_field(s, d / "fields" / f"state_{i:05d}.txt")
        (d / "curves.csv").write_text(self.curves_csv())
        (d / "diagnostics.csv").write_text(self.diagnostics_csv())
        cfg = "\n".join(f"{k} = {v}" for k, v in sorted(self.config.items()))
        (d / "simulation.txt").write_text(cfg + "\n")
        return d


def _measure(u, model, zgrid, N):
    curve = model.generator(u, zgrid)
    try:
        rho_hat = fit_decay(u)[0]
    except TooFewModes:
        rho_hat = math.nan
    return curve, {"energy": energy(u), "mass": mass(u), "radius_hat": rho_hat,
                   "max_tail_coeff": max_tail_coeff(u, N)}


def simulate(model: ModelSpec, u0: SpectralField, N: int, T: float, dt: float,
             zgrid, measure_every: int = 1, keep_states: bool = True,
             consistency_tol: float = 1e-8) -> SimulationRecord:
    """Integrate ``du/dt = P_N A(P_N u)`` with RK4 and record diagnostics.

    Samples are taken at step 0, every ``measure_every`` steps and at ``T``
    (the last step is shortened if ``T`` is not a multiple of ``dt``).
    """
    if dt <= 0 or T < 0 or measure_every < 1:
        raise ValueError("need dt > 0, T >= 0, measure_every >= 1")
    zgrid = np.asarray(zgrid, dtype=float)
    rec = SimulationRecord({"model": model.name, "N": N, "T": T, "dt": dt,
                            "measure_every": measure_every,
                            "variant": model.variant})
    u = truncate(u0, N)
    if model.real:
        u = hermitian_part(u)
    curve, diag = _measure(u, model, zgrid, N)
    rec.append(0.0, u, curve, diag, keep_states)
    nsteps = int(math.ceil(T / dt - 1e-9)) if T > 0 else 0
    t = 0.0
    for n in range(1, nsteps + 1):
        h = min(dt, T - t)
        try:
            u = galerkin_step(u, h, model, N)
        except BlowupDetected as exc:
            raise BlowupDetected(f"{exc} at t={t + h:.6g}", rec) from exc
        t = T if n == nsteps else n * dt
        if n % measure_every == 0 or n == nsteps:
            curve, diag = _measure(u, model, zgrid, N)
            defect = consistency_defect(u, model)
            if defect > consistency_tol:
                raise RuntimeError(
                    f"augmented state lost consistency ({defect:.2e}) at t={t}")
            rec.append(t, u, curve, diag, keep_states)
    return rec


def discrete_time_derivative_slack(rec: SimulationRecord, model: ModelSpec,
                                   zgrid) -> float:
    """Worst ``Gen[(u1-u0)/h] - (Gen[u1]-Gen[u0])/h`` over consecutive samples,
    scaled by ``max(1, rhs)``; nonnegative when the discrete rule holds."""
    worst = math.inf
    for i in range(len(rec.times) - 1):
        h = rec.times[i + 1] - rec.times[i]
        a, b = rec.states[i], rec.states[i + 1]
        lhs = (model.generator(b, zgrid).values
               - model.generator(a, zgrid).values) / h
        rhs = model.generator((b - a) * (1.0 / h), zgrid).values
        slack = (rhs - lhs) / np.maximum(1.0, np.abs(rhs))
        worst = min(worst, float(np.min(slack)))
    return worst


# --------------------------------------------------------------------------
# certification of the generator estimate
# --------------------------------------------------------------------------

@dataclass
class CertificationReport:
    model: str
    trials: int
    max_ratio_declared: float
    max_ratio_condition: float
    C0: float
    violations: list = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def _ratio(lhs, rhs):
    lhs = np.asarray(lhs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    r = np.zeros_like(lhs)
    pos = rhs > 0
    r[pos] = lhs[pos] / rhs[pos]
    r[~pos & (lhs > 0)] = math.inf
    return float(np.max(r)) if r.size else 0.0


def certify_condition(model: ModelSpec, trials: int, N: int, zgrid,
                      seed: int = 0, decay_range=(0.3, 1.5),
                      amplitude_range=(0.1, 2.0), fields=None
                      ) -> CertificationReport:
    """Evaluate ``Gen[A(u)]`` against the declared bound on random fields.

    Each trial draws an analytic field with random decay rate and amplitude
    (or takes the next entry of ``fields``), evaluates both sides on
    ``zgrid`` using the exact finite-sum ``d/dz Gen[u]`` and records the
    largest ratio. A ratio above one is a violation.
    """
    rng = np.random.default_rng(seed)
    zgrid = np.asarray(zgrid, dtype=float)
    best_decl = 0.0
    best_cond = 0.0
    violations = []
    samples = list(fields) if fields is not None else [None] * trials
    for i, u in enumerate(samples):
        if u is None:
            r = rng.uniform(*decay_range)
            amp = rng.uniform(*amplitude_range)
            u = random_analytic(model, N, rng, r, amp)
        G = model.generator(u, zgrid).values
        dG = model.generator(u, zgrid, dz_order=1).values
        lhs = model.generator(model.rhs(u), zgrid).values
        rd = _ratio(lhs, model.bound(G, dG))
        rc = _ratio(lhs, model.condition_rhs(G, dG))
        best_decl = max(best_decl, rd)
        best_cond = max(best_cond, rc)
        if rd > 1.0 or rc > 1.0:
            violations.append((i, rd, rc))
    return CertificationReport(model.name, len(samples), best_decl, best_cond,
                               model.C0, violations)
