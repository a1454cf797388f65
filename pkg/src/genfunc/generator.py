"""Generator functions: exponentially weighted l1 majorants of a field.

Three variants share one data type, :class:`GeneratorCurve`:

``fourier``
    ``sum_a exp(z|a|) |f_a|`` for periodic fields.
``mixed``
    ``sum_a sum_{b<=B} exp(z|a|) max_y |d_y^b f_a| z^b / b!`` for channel
    fields with Chebyshev nodes in ``y``.
``kinetic``
    ``sum_a sum_{b<=B} exp(z|a|) max_v <v>^m |d_v^b f_a| z^b / b!`` for
    fields on a uniform velocity grid.

Vector fields use the Euclidean norm across components at each mode (and
node), which turns ``Gen[grad f] = d/dz Gen[f]`` into an identity in any
dimension.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .chebyshev import derivatives_up_to
from .errors import (
    DimensionMismatch,
    GridNotDecayed,
    NegativeZ,
    OutsideConvergence,
    TaylorCapTooLarge,
    TooFewModes,
    WeightTooSmall,
)
from .spectral import (
    SpectralField,
    convolve,
    gradient,
    make_field,
    truncate,
    zeros,
)

VARIANTS = ("fourier", "mixed", "kinetic")
DEFAULT_ZPOINTS = 65
DEFAULT_TAYLOR_CAP = 10
DEFAULT_DECAY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class GeneratorCurve:
    variant: str
    zgrid: np.ndarray
    values: np.ndarray
    meta: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown generator variant {self.variant!r}")
        z = np.asarray(self.zgrid, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if z.shape != v.shape:
            raise ValueError("zgrid and values must have the same shape")
        object.__setattr__(self, "zgrid", z)
        object.__setattr__(self, "values", v)

    def at(self, z: float) -> float:
        """Linear interpolation on the sampled grid."""
        return float(np.interp(z, self.zgrid, self.values))

    def to_csv(self, t: float | None = None, header: bool = True) -> str:
        """CSV rows ``z,value,variant,B,m`` (``t`` first when given)."""
        buf = io.StringIO()
        cols = ["z", "value", "variant", "B", "m"]
        if t is not None:
            cols.insert(0, "t")
        if header:
            buf.write(",".join(cols) + "\n")
        B = self.meta.get("B", "")
        m = self.meta.get("m", "")
        for z, v in zip(self.zgrid, self.values):
            row = [_fmt(z), _fmt(v), self.variant, str(B), _fmt_opt(m)]
            if t is not None:
                row.insert(0, _fmt(t))
            buf.write(",".join(row) + "\n")
        return buf.getvalue()


@dataclass(frozen=True)
class SpaceMembership:
    """Membership of a field in ``X_rho``: finiteness of ``Gen`` at ``rho``."""

    rho: float
    value: float
    finite: bool


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _fmt_opt(x) -> str:
    return "" if x == "" or x is None else _fmt(x)


def curves_from_csv(text: str) -> list[tuple[float | None, GeneratorCurve]]:
    """Parse CSV written by :meth:`GeneratorCurve.to_csv`.

    Returns ``(t, curve)`` pairs in file order; ``t`` is ``None`` when the
    file has no time column.
    """
    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = lines[0].split(",")
    has_t = head[0] == "t"
    groups: dict = {}
    order = []
    for ln in lines[1:]:
        cols = ln.split(",")
        t = float(cols[0]) if has_t else None
        if has_t:
            cols = cols[1:]
        key = t
        if key not in groups:
            groups[key] = {"z": [], "v": [], "variant": cols[2],
                           "B": cols[3], "m": cols[4]}
            order.append(key)
        groups[key]["z"].append(float(cols[0]))
        groups[key]["v"].append(float(cols[1]))
    out = []
    for key in order:
        g = groups[key]
        meta = {}
        if g["B"]:
            meta["B"] = int(g["B"])
        if g["m"]:
            meta["m"] = float(g["m"])
        out.append((key, GeneratorCurve(g["variant"], np.array(g["z"]),
                                        np.array(g["v"]), meta)))
    return out


# --------------------------------------------------------------------------
# evaluation
# --------------------------------------------------------------------------

def default_zgrid(rho: float, points: int = DEFAULT_ZPOINTS) -> np.ndarray:
    return np.linspace(0.0, rho, points)


def _check_zgrid(zgrid) -> np.ndarray:
    z = np.atleast_1d(np.asarray(zgrid, dtype=float))
    if np.any(z < 0):
        raise NegativeZ("generator functions are evaluated for z >= 0 only")
    if np.any(np.diff(z) < 0):
        raise ValueError("zgrid must be ascending")
    return z


def gen_fourier(f: SpectralField, zgrid, dz_order: int = 0) -> GeneratorCurve:
    """``sum_a exp(z|a|) |f_a|`` (or its z-derivative of order ``dz_order``).

    >>> from genfunc.spectral import make_field
    >>> cosx = make_field([(1, 0.5), (-1, 0.5)], dim=1, trunc=2)
    >>> float(gen_fourier(cosx, [1.0]).values[0])  # e
    2.718281828459045
    """
    if f.transverse is not None:
        raise DimensionMismatch("gen_fourier needs a field without transverse axis")
    z = _check_zgrid(zgrid)
    mags = f.magnitudes()[..., 0].ravel()
    norms = f.mode_norm().ravel()
    keep = mags > 0
    mags, norms = mags[keep], norms[keep]
    w = np.exp(np.outer(z, norms)) * norms ** dz_order
    return GeneratorCurve("fourier", z, w @ mags, {"dz_order": dz_order})


def _taylor_generator(amps, norms, z, dz_order):
    """Evaluate ``sum_a exp(z|a|) sum_b amps[b, a] z^b / b!``.

    ``dz_order`` 0 or 1; returns (values, magnitude of the last Taylor term).
    """
    B = amps.shape[0] - 1
    fact = np.array([math.factorial(b) for b in range(B + 1)], dtype=float)
    powers = z[:, None] ** np.arange(B + 1)[None, :] / fact[None, :]
    expo = np.exp(np.outer(z, norms))
    poly = powers @ amps
    if dz_order == 0:
        vals = np.sum(expo * poly, axis=1)
    elif dz_order == 1:
        dpoly = np.zeros_like(poly)
        if B >= 1:
            dpow = z[:, None] ** np.arange(B)[None, :] / fact[None, :B]
            dpoly = dpow @ amps[1:]
        vals = np.sum(expo * (norms[None, :] * poly + dpoly), axis=1)
    else:
        raise ValueError("dz_order must be 0 or 1")
    last = np.sum(expo * np.outer(powers[:, B], amps[B]), axis=1)
    return vals, float(np.max(last)) if last.size else 0.0


def max_stable_order(nodes: int) -> int:
    """Largest y-derivative order trusted on ``nodes`` Chebyshev points."""
    return min(nodes - 1, (12 * nodes) // 33)


def gen_mixed(omega: SpectralField, zgrid, B: int = DEFAULT_TAYLOR_CAP,
              dz_order: int = 0) -> GeneratorCurve:
    """Mixed Fourier-Taylor generator for channel fields.

    The sup over ``y`` is the maximum over the collocation nodes; the sum
    over derivative orders stops at ``B`` and the largest value of the last
    retained term is kept in ``meta["last_term"]``.
    """
    if omega.transverse_kind != "chebyshev_y":
        raise DimensionMismatch("gen_mixed needs a chebyshev_y transverse axis")
    if B < 0:
        raise ValueError("Taylor cap must be nonnegative")
    if B > max_stable_order(omega.nodes):
        raise TaylorCapTooLarge(
            f"B={B} exceeds the stable order {max_stable_order(omega.nodes)} "
            f"for {omega.nodes} Chebyshev nodes")
    z = _check_zgrid(zgrid)
    derivs = derivatives_up_to(omega.coeffs, B)
    amps = _sup_amplitudes(derivs)
    norms = omega.mode_norm().ravel()
    vals, last = _taylor_generator(amps, norms, z, dz_order)
    return GeneratorCurve("mixed", z, vals,
                          {"B": B, "last_term": last, "dz_order": dz_order})


def _sup_amplitudes(derivs, weight=None):
    """(B+1, modes) table of ``max_node |d^b f_a|`` (Euclidean over components)."""
    mag = np.sqrt(np.sum(np.abs(derivs) ** 2, axis=1))
    if weight is not None:
        mag = mag * weight
    amps = np.max(mag, axis=-1)
    return amps.reshape(amps.shape[0], -1)


def velocity_derivative(values, h: float) -> np.ndarray:
    """Fourth-order centred difference along the last axis.

    Values beyond the grid are taken as zero, matching decayed data.
    """
    v = np.asarray(values)
    pad = [(0, 0)] * (v.ndim - 1) + [(2, 2)]
    p = np.pad(v, pad)
    return (-p[..., 4:] + 8.0 * p[..., 3:-1] - 8.0 * p[..., 1:-3]
            + p[..., :-4]) / (12.0 * h)


def velocity_weight(v, m: float) -> np.ndarray:
    return (1.0 + np.asarray(v) ** 2) ** (0.5 * m)


def check_decay(f: SpectralField, m: float, tol: float = DEFAULT_DECAY_TOL):
    """Raise :class:`GridNotDecayed` unless ``<v>^m |f|`` is negligible at the edges."""
    w = velocity_weight(f.transverse.nodes, m)
    weighted = f.magnitudes() * w
    peak = float(np.max(weighted))
    edge = float(max(np.max(weighted[..., 0]), np.max(weighted[..., -1])))
    if peak > 0 and edge > tol * peak:
        raise GridNotDecayed(
            f"weighted edge value {edge:.3e} exceeds {tol:g} x peak {peak:.3e}")


def gen_kinetic(f: SpectralField, zgrid, m: float | None = None,
                B: int = DEFAULT_TAYLOR_CAP, dz_order: int = 0,
                decay_tol: float = DEFAULT_DECAY_TOL) -> GeneratorCurve:
    """Velocity-weighted generator for fields on a uniform ``v`` grid.

    ``m`` defaults to ``dim + 3`` and must exceed ``dim + 2``.
    """
    if f.transverse_kind != "grid_v":
        raise DimensionMismatch("gen_kinetic needs a grid_v transverse axis")
    if m is None:
        m = f.dim + 3
    if m <= f.dim + 2:
        raise WeightTooSmall(f"weight exponent m={m} must exceed d+2={f.dim + 2}")
    v = f.transverse.nodes
    h = v[1] - v[0]
    if not np.allclose(np.diff(v), h, rtol=1e-10, atol=0):
        raise ValueError("velocity grid must be uniform")
    check_decay(f, m, decay_tol)
    z = _check_zgrid(zgrid)
    layers = [np.asarray(f.coeffs)]
    for _ in range(B):
        layers.append(velocity_derivative(layers[-1], h))
    amps = _sup_amplitudes(np.stack(layers), velocity_weight(v, m))
    vals, last = _taylor_generator(amps, f.mode_norm().ravel(), z, dz_order)
    return GeneratorCurve("kinetic", z, vals,
                          {"B": B, "m": m, "last_term": last,
                           "dz_order": dz_order})


def generator(f: SpectralField, zgrid, variant: str | None = None,
              dz_order: int = 0, **kw) -> GeneratorCurve:
    """Dispatch on the transverse layout (or an explicit ``variant``)."""
    if variant is None:
        variant = {"none": "fourier", "chebyshev_y": "mixed",
                   "grid_v": "kinetic"}[f.transverse_kind]
    if variant == "fourier":
        return gen_fourier(f, zgrid, dz_order)
    if variant == "mixed":
        return gen_mixed(f, zgrid, dz_order=dz_order, **kw)
    if variant == "kinetic":
        return gen_kinetic(f, zgrid, dz_order=dz_order, **kw)
    raise ValueError(f"unknown generator variant {variant!r}")


def membership(f: SpectralField, rho: float, **kw) -> SpaceMembership:
    value = float(generator(f, [rho], **kw).values[0])
    return SpaceMembership(rho, value, bool(np.isfinite(value)))


# --------------------------------------------------------------------------
# majorant series and composition
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class MajorantSeries:
    """Absolute-value series ``sum |a_n| x^n`` of an analytic function."""

    abs_coeffs: np.ndarray
    radius_of_convergence: float = math.inf
    name: str = ""

    def __post_init__(self):
        a = np.abs(np.asarray(self.abs_coeffs, dtype=float))
        object.__setattr__(self, "abs_coeffs", a)

    @classmethod
    def from_coeffs(cls, coeffs, radius=math.inf, name=""):
        return cls(np.abs(np.asarray(coeffs, dtype=float)), radius, name)

    @classmethod
    def identity(cls):
        return cls(np.array([0.0, 1.0]), math.inf, "identity")

    @classmethod
    def power(cls, k: int):
        a = np.zeros(k + 1)
        a[k] = 1.0
        return cls(a, math.inf, f"power{k}")

    @classmethod
    def exponential(cls, terms: int = 120):
        a = np.array([1.0 / math.factorial(n) for n in range(terms)])
        return cls(a, math.inf, "exp")

    @classmethod
    def by_name(cls, name: str):
        if name == "identity":
            return cls.identity()
        if name == "exp":
            return cls.exponential()
        if name.startswith("power"):
            return cls.power(int(name[5:]))
        raise ValueError(f"unknown majorant series {name!r}")

    def __call__(self, x):
        """Evaluate ``F~`` (no convergence check; see gen_compose_majorant)."""
        return np.polynomial.polynomial.polyval(x, self.abs_coeffs)


def gen_compose_majorant(F: MajorantSeries, g_value: float) -> float:
    """``F~(g) = sum |a_n| g^n`` for ``0 <= g < radius``.

    Terms are added in increasing order and the sum stops once the stored
    coefficients are exhausted or the remaining tail (bounded by the next
    term while terms decrease) drops below ``1e-16`` of the partial sum.
    """
    if g_value < 0 or g_value >= F.radius_of_convergence:
        raise OutsideConvergence(
            f"{g_value} outside [0, {F.radius_of_convergence})")
    total = 0.0
    prev = math.inf
    power = 1.0
    nonzero = np.nonzero(F.abs_coeffs)[0]
    last = int(nonzero[-1]) if nonzero.size else -1
    for n, a in enumerate(F.abs_coeffs[:last + 1]):
        term = a * power
        total += term
        if 0 < term < 1e-16 * total and term < prev:
            break
        if term > 0:
            prev = term
        power *= g_value
    return total


def compose_series(f: SpectralField, F: MajorantSeries, cutoff: int,
                   signed_coeffs=None) -> SpectralField:
    """``sum_n a_n P_M(f^n)`` with every power projected to cutoff ``M``.

    ``signed_coeffs`` gives the actual Taylor coefficients ``a_n`` (defaults
    to the absolute ones). Projection only removes modes, so the generator of
    the result stays below ``F~(Gen[f])``.
    """
    coeffs = F.abs_coeffs if signed_coeffs is None else np.asarray(signed_coeffs)
    power = make_field([((0,) * f.dim, 1.0)], f.dim, cutoff)
    total = zeros(f.dim, cutoff)
    for n, a in enumerate(coeffs):
        if n > 0:
            power = truncate(convolve(power, f), cutoff)
        if a != 0:
            total = total + a * power
        if np.max(np.abs(power.coeffs)) == 0:
            break
    return total


# --------------------------------------------------------------------------
# calculus checks
# --------------------------------------------------------------------------

@dataclass
class CalculusReport:
    """Per-z slacks of the generator calculus.

    Slacks are ``(rhs - lhs) / max(1, rhs)``: nonnegative when the
    inequality holds, scaled so that rounding in large generator values does
    not register as a violation.
    """

    zgrid: np.ndarray
    sum_slack: np.ndarray
    product_slack: np.ndarray
    derivative_residual: float
    tol_slack: float = -1e-12
    tol_derivative: float = 1e-10
    failures: list = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def min_slack(self) -> float:
        return float(min(self.sum_slack.min(), self.product_slack.min()))


def scaled_slack(rhs, lhs):
    rhs = np.asarray(rhs, dtype=float)
    return (rhs - np.asarray(lhs, dtype=float)) / np.maximum(1.0, np.abs(rhs))


def derivative_residual(f: SpectralField, zgrid) -> float:
    """Relative mismatch of ``Gen[grad f]`` and ``d/dz Gen[f]``."""
    lhs = gen_fourier(gradient(f), zgrid).values
    rhs = gen_fourier(f, zgrid, dz_order=1).values
    scale = max(float(np.max(np.abs(rhs))), 1e-300)
    return float(np.max(np.abs(lhs - rhs)) / scale)


def check_calculus(f: SpectralField, g: SpectralField, zgrid) -> CalculusReport:
    """Evaluate the sum, product and derivative rules on ``zgrid``."""
    z = _check_zgrid(zgrid)
    gf = gen_fourier(f, z).values
    gg = gen_fourier(g, z).values
    sum_slack = scaled_slack(gf + gg, gen_fourier(f + g, z).values)
    prod_slack = scaled_slack(gf * gg, gen_fourier(convolve(f, g), z).values)
    resid = max(derivative_residual(f, z), derivative_residual(g, z))
    rep = CalculusReport(z, sum_slack, prod_slack, resid)
    if sum_slack.min() < rep.tol_slack:
        rep.failures.append(f"sum rule slack {sum_slack.min():.3e}")
    if prod_slack.min() < rep.tol_slack:
        rep.failures.append(f"product rule slack {prod_slack.min():.3e}")
    if resid > rep.tol_derivative:
        rep.failures.append(f"derivative identity residual {resid:.3e}")
    return rep


# --------------------------------------------------------------------------
# analyticity radius from coefficient decay
# --------------------------------------------------------------------------

def fit_decay(f: SpectralField, floor: float = 1e-14) -> tuple[float, float]:
    """Least-squares fit ``log|f_a| ~ c - rho |a|``; returns ``(rho, c)``.

    The mode magnitude is the max over transverse nodes of the Euclidean
    norm across components. Only modes above ``floor`` enter the fit.
    """
    mags = np.max(f.magnitudes(), axis=-1).ravel()
    norms = f.mode_norm().ravel()
    keep = mags > floor
    if np.count_nonzero(keep) < 4 or np.ptp(norms[keep]) == 0:
        raise TooFewModes(
            f"{np.count_nonzero(keep)} modes above floor {floor:g}; need 4")
    slope, icpt = np.polyfit(norms[keep], np.log(mags[keep]), 1)
    return float(-slope), float(icpt)


def radius_estimate(f: SpectralField, floor: float = 1e-14) -> float:
    return fit_decay(f, floor)[0]
