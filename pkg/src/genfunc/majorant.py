"""Hopf-type majorant envelopes for generator functions.

A Galerkin solution whose right-hand side satisfies

    Gen[A(u)] <= C0 F(Gen[u]) (1 + d/dz Gen[u])

has a generator ``G(t, z)`` that is a sub-solution of the transport
equation ``d_t G = C0 F~(G) (1 + d_z G)``. On the shrinking window
``z <= theta(t) rho`` with

    theta(t) = 1 - C0 F~(3 M0) t / rho,      M0 = Gen[u0](rho),

the rescaled function ``Phi(t, z) = G(t, theta(t) z)`` lives on the fixed
interval ``[0, rho]`` and obeys

    d_t Phi = C0 F~(Phi) + (C0 F~(Phi) + theta' z) / theta * d_z Phi,

whose characteristics leave ``[0, rho]`` at both ends as long as
``C0 F~(Phi) < C0 F~(3 M0)``. Integrating the equality version with an
upwind scheme gives a numeric envelope; the a-priori bound
``M0 + C0 t F~(2 M0)`` holds up to the lifespan.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import _kernels
from .errors import CFLViolation, DomainMismatch, GridMismatch
from .generator import GeneratorCurve, MajorantSeries

DEFAULT_CFL = 0.4
DOMINATION_TOL = 1e-9


@dataclass(frozen=True)
class HopfProblem:
    C0: float
    F: MajorantSeries
    rho: float
    M0: float

    def __post_init__(self):
        if not self.C0 > 0:
            raise ValueError("C0 must be positive")
        if not self.rho > 0:
            raise ValueError("rho must be positive")
        if not self.M0 >= 0:
            raise ValueError("M0 must be nonnegative")

    @property
    def theta_slope(self) -> float:
        return -self.C0 * float(self.F(3.0 * self.M0)) / self.rho


def compute_M0(curve: GeneratorCurve, rho: float) -> float:
    """``sup_{0<=z<=rho} Gen[u0](z)``, i.e. the value at ``z = rho``."""
    z = curve.zgrid
    if z.size == 0 or z[0] > 1e-14 or z[-1] < rho * (1 - 1e-12):
        raise DomainMismatch(f"curve on [{z[0]}, {z[-1]}] does not cover [0, {rho}]")
    if abs(z[-1] - rho) <= 1e-12 * max(1.0, rho):
        return float(curve.values[-1])
    return float(np.interp(rho, z, curve.values))


def theta(t, problem: HopfProblem):
    """Shrink factor of the analyticity window; may return values <= 0."""
    return 1.0 + problem.theta_slope * np.asarray(t, dtype=float)


def closed_form_bound(t, problem: HopfProblem):
    return problem.M0 + problem.C0 * np.asarray(t, dtype=float) * float(
        problem.F(2.0 * problem.M0))


def lifespan(problem: HopfProblem) -> float:
    """``min(M0 / (C0 F~(2M0)), rho / (C0 F~(3M0)))``; ``inf`` for zero data."""
    if problem.M0 == 0:
        return math.inf
    f2 = float(problem.F(2.0 * problem.M0))
    f3 = float(problem.F(3.0 * problem.M0))
    boot = problem.M0 / (problem.C0 * f2) if f2 > 0 else math.inf
    shrink = problem.rho / (problem.C0 * f3) if f3 > 0 else math.inf
    return min(boot, shrink)


@dataclass(frozen=True, eq=False)
class MajorantEnvelope:
    tgrid: np.ndarray
    zgrid: np.ndarray
    numeric: np.ndarray
    closed_form: np.ndarray
    theta: np.ndarray
    lifespan: float
    problem: HopfProblem | None = None
    steps: int = 0

    @property
    def rho_shrink(self) -> np.ndarray:
        """Un-rescaled window edge ``theta(t) rho``."""
        return self.theta * self.zgrid[-1]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("t,z,numeric,closed_form,theta\n")
        for k, t in enumerate(self.tgrid):
            for j, z in enumerate(self.zgrid):
                buf.write(",".join(format(float(x), ".17g") for x in (
                    t, z, self.numeric[k, j], self.closed_form[k, j],
                    self.theta[k])) + "\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, lifespan: float, problem=None):
        rows = np.array([[float(c) for c in ln.split(",")]
                         for ln in text.splitlines()[1:] if ln.strip()])
        t = np.unique(rows[:, 0])
        z = rows[rows[:, 0] == t[0], 1]
        nt, nz = t.size, z.size
        return cls(t, z, rows[:, 2].reshape(nt, nz),
                   rows[:, 3].reshape(nt, nz), rows[::nz, 4], lifespan,
                   problem)


def _uniform_zgrid(zgrid, rho):
    z = np.asarray(zgrid, dtype=float)
    if z.size < 3:
        raise DomainMismatch("need at least three z points")
    dz = z[1] - z[0]
    if (abs(z[0]) > 1e-14 or abs(z[-1] - rho) > 1e-12 * max(1.0, rho)
            or not np.allclose(np.diff(z), dz, rtol=1e-9, atol=0)):
        raise DomainMismatch("envelope zgrid must be uniform on [0, rho]")
    return z, dz


def integrate_hopf_envelope(problem: HopfProblem, T: float, tgrid, zgrid,
                            initial=None, dt: float | None = None,
                            cfl: float = DEFAULT_CFL, adaptive: bool = True,
                            max_steps: int = 10_000_000,
                            theta_floor: float = 1e-3) -> MajorantEnvelope:
    """Integrate the rescaled Hopf equation and record it at ``tgrid``.

    Parameters
    ----------
    initial : GeneratorCurve, array or None
        ``Phi(0, z)``. ``None`` uses the constant ``M0``, which dominates
        every initial generator on ``[0, rho]``.
    dt : float or None
        Largest time step. With ``adaptive=False`` every step uses ``dt``
        and :class:`CFLViolation` is raised if it exceeds ``dz / max|speed|``.
    cfl : float
        Safety factor of the adaptive step ``cfl * dz / max|speed|``.
    theta_floor : float
        Samples with ``theta(t) < theta_floor`` are not integrated (the
        transport speed grows like ``1 / theta``); their rows are NaN and
        domination checks skip them.
    """
    z, dz = _uniform_zgrid(zgrid, problem.rho)
    tg = np.atleast_1d(np.asarray(tgrid, dtype=float))
    if tg.size and (tg[0] < 0 or np.any(np.diff(tg) < 0) or tg[-1] > T + 1e-12):
        raise ValueError("tgrid must be ascending within [0, T]")
    if initial is None:
        phi = np.full(z.size, float(problem.M0))
    else:
        vals = initial.values if isinstance(initial, GeneratorCurve) else initial
        phi = np.array(vals, dtype=float)
        if phi.shape != z.shape:
            raise DomainMismatch("initial curve does not match zgrid")
    if not adaptive and dt is None:
        raise ValueError("fixed-step integration needs dt")
    dt_max = math.inf if dt is None else float(dt)
    coef = np.ascontiguousarray(problem.F.abs_coeffs, dtype=float)
    slope = problem.theta_slope
    numeric = np.full((tg.size, z.size), np.nan)
    t = 0.0
    total = 0
    for k, tk in enumerate(tg):
        if float(theta(tk, problem)) < theta_floor:
            break
        t, steps, worst = _kernels.hopf_advance(
            phi, z, dz, t, float(tk), float(problem.C0), coef, slope,
            float(cfl), dt_max, bool(adaptive), int(max_steps))
        total += steps
        if not adaptive and worst > 1.0:
            raise CFLViolation(
                f"dt={dt} gives Courant number {worst:.3f} > 1 before t={tk}")
        if t < tk - 1e-12 * max(1.0, tk):
            raise RuntimeError(f"step budget exhausted at t={t}")
        numeric[k] = phi
    th = theta(tg, problem)
    closed = np.repeat(closed_form_bound(tg, problem)[:, None], z.size, axis=1)
    return MajorantEnvelope(tg, z, numeric, closed, th, lifespan(problem),
                            problem, total)


# --------------------------------------------------------------------------
# domination checks
# --------------------------------------------------------------------------

@dataclass
class DominationReport:
    mode: str
    passed: bool
    max_excess: float
    location: tuple
    bound_name: str
    samples_checked: int
    tol: float = DOMINATION_TOL
    per_bound: dict = dc_field(default_factory=dict)

    def to_text(self) -> str:
        lines = [
            f"[domination.{self.mode}]",
            f"status = {'PASS' if self.passed else 'FAIL'}",
            f"max_excess = {self.max_excess:.17g}",
            f"argmax_t = {self.location[0]:.17g}",
            f"argmax_z = {self.location[1]:.17g}",
            f"argmax_bound = {self.bound_name}",
            f"samples_checked = {self.samples_checked}",
            f"tolerance = {self.tol:g} * (1 + bound)",
        ]
        for name, val in sorted(self.per_bound.items()):
            lines.append(f"max_excess_{name} = {val:.17g}")
        return "\n".join(lines) + "\n"


def rescaled_zgrid(envelope: MajorantEnvelope, k: int) -> np.ndarray:
    return envelope.theta[k] * envelope.zgrid


def _match_time(envelope, t):
    k = int(np.argmin(np.abs(envelope.tgrid - t)))
    if abs(envelope.tgrid[k] - t) > 1e-9 * max(1.0, abs(t)):
        raise GridMismatch(f"no envelope sample at t={t}")
    return k


def check_domination(envelope: MajorantEnvelope, measured,
                     mode: str = "rescaled",
                     tol: float = DOMINATION_TOL) -> DominationReport:
    """Compare measured generator curves against the envelope.

    ``measured`` is a sequence of ``(t, GeneratorCurve)``. Samples after the
    lifespan or with ``theta(t) <= 0`` are outside the certified domain and
    skipped.

    ``mode="rescaled"``: each curve must be sampled at ``theta(t) * z`` and
    is compared with the numeric envelope and with the closed-form bound.
    ``mode="fixed"``: curves are sampled on the envelope's own ``zgrid``
    (un-rescaled ``z``); every point is compared with the closed-form bound,
    and points inside the window ``z <= theta(t) rho`` also with the numeric
    envelope, interpolated at ``z / theta(t)``.
    """
    if mode not in ("rescaled", "fixed"):
        raise ValueError(f"unknown domination mode {mode!r}")
    worst = (-math.inf, (math.nan, math.nan), "")
    per_bound = {"numeric": -math.inf, "closed_form": -math.inf}
    checked = 0

    def update(excess_arr, bound_arr, zs, t, name):
        nonlocal worst
        raw = excess_arr
        scaled = raw - tol * (1.0 + np.abs(bound_arr))
        j = int(np.argmax(scaled))
        per_bound[name] = max(per_bound[name], float(np.max(raw)))
        if scaled[j] > worst[0]:
            worst = (float(scaled[j]), (float(t), float(zs[j])), name)

    for t, curve in measured:
        t = float(t)
        if t > envelope.lifespan * (1 + 1e-12):
            continue
        k = _match_time(envelope, t)
        th = envelope.theta[k]
        if th <= 0 or np.isnan(envelope.numeric[k, 0]):
            continue
        if mode == "rescaled":
            zs = rescaled_zgrid(envelope, k)
            if (curve.zgrid.shape != zs.shape
                    or not np.allclose(curve.zgrid, zs, rtol=1e-9, atol=1e-12)):
                raise GridMismatch(f"curve at t={t} is not on theta(t)*z")
            update(curve.values - envelope.numeric[k], envelope.numeric[k],
                   zs, t, "numeric")
            update(curve.values - envelope.closed_form[k],
                   envelope.closed_form[k], zs, t, "closed_form")
        else:
            zs = envelope.zgrid
            if (curve.zgrid.shape != zs.shape
                    or not np.allclose(curve.zgrid, zs, rtol=1e-9, atol=1e-12)):
                raise GridMismatch(f"curve at t={t} is not on the envelope zgrid")
            update(curve.values - envelope.closed_form[k],
                   envelope.closed_form[k], zs, t, "closed_form")
            inside = zs <= th * zs[-1] * (1 + 1e-12)
            if np.any(inside):
                env = np.interp(zs[inside] / th, zs, envelope.numeric[k])
                update(curve.values[inside] - env, env, zs[inside], t,
                       "numeric")
        checked += 1

    per_bound = {k: v for k, v in per_bound.items() if v > -math.inf}
    passed = checked > 0 and worst[0] <= 0.0
    max_excess = max(per_bound.values()) if per_bound else math.nan
    return DominationReport(mode, passed, max_excess, worst[1], worst[2],
                            checked, tol, per_bound)


def rescaled_curves(envelope: MajorantEnvelope, times, states, measure):
    """Measure each state on its own window ``theta(t) * z``.

    ``measure(state, zgrid)`` returns a :class:`GeneratorCurve`. States past
    the lifespan or with ``theta <= 0`` are dropped.
    """
    out = []
    for t, u in zip(times, states):
        if t > envelope.lifespan * (1 + 1e-12):
            continue
        k = _match_time(envelope, t)
        if envelope.theta[k] <= 0 or np.isnan(envelope.numeric[k, 0]):
            continue
        out.append((float(t), measure(u, rescaled_zgrid(envelope, k))))
    return out
