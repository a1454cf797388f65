"""Hot numeric kernels.

Each kernel exists twice: an explicit loop version compiled with numba, and
a vectorised numpy version. The public names (``conv_direct``,
``hopf_advance``) point at one or the other depending on
:data:`genfunc._backend.USE_NUMBA`; both variants stay importable so the
benchmark and the test-suite can compare them.
"""
import numpy as np

from ._backend import USE_NUMBA, njit

# --------------------------------------------------------------------------
# dense convolution of centred coefficient boxes
# --------------------------------------------------------------------------
#
# Arrays are (n1, n2, P) complex: two Fourier axes (n2 == 1 in 1D) and a
# trailing transverse axis multiplied pointwise. Index i of an axis of
# length 2N+1 holds mode i - N, so the full product of half-widths Na, Nb
# has half-width Na + Nb and entry (i + j) collects a[i] * b[j].


@njit
def _conv_direct_loops(a, b):
    n1a, n2a, P = a.shape
    n1b, n2b, _ = b.shape
    out = np.zeros((n1a + n1b - 1, n2a + n2b - 1, P), dtype=np.complex128)
    for i1 in range(n1a):
        for i2 in range(n2a):
            for p in range(P):
                av = a[i1, i2, p]
                if av == 0:
                    continue
                for j1 in range(n1b):
                    for j2 in range(n2b):
                        out[i1 + j1, i2 + j2, p] += av * b[j1, j2, p]
    return out


def _conv_direct_numpy(a, b):
    n1a, n2a, P = a.shape
    n1b, n2b, _ = b.shape
    out = np.zeros((n1a + n1b - 1, n2a + n2b - 1, P), dtype=np.complex128)
    nz = np.argwhere(np.any(a != 0, axis=2))
    for i1, i2 in nz:
        out[i1:i1 + n1b, i2:i2 + n2b] += a[i1, i2] * b
    return out


# --------------------------------------------------------------------------
# upwind integration of the rescaled Hopf transport equation
# --------------------------------------------------------------------------
#
#   d_t phi = C0 F(phi) + c(z, t) d_z phi,   c = (C0 F(phi) + s z) / theta(t)
#   theta(t) = 1 + s t  (s < 0)
#
# Characteristics travel with dz/dt = -c, so c > 0 takes information from
# the right (forward difference) and c < 0 from the left. Both ends use the
# only available one-sided difference; with outgoing characteristics that
# is the upwind one. Time stepping is Heun (SSP-RK2), a convex combination
# of two monotone Euler steps.


@njit
def _horner(x, coef):
    acc = 0.0
    for k in range(coef.size - 1, -1, -1):
        acc = acc * x + coef[k]
    return acc


@njit
def _hopf_rate_loops(phi, z, dz, theta, slope, c0, coef, out):
    n = phi.size
    smax = 0.0
    for j in range(n):
        f = c0 * _horner(phi[j], coef)
        c = (f + slope * z[j]) / theta
        if j == 0:
            d = (phi[1] - phi[0]) / dz
        elif j == n - 1:
            d = (phi[n - 1] - phi[n - 2]) / dz
        elif c > 0.0:
            d = (phi[j + 1] - phi[j]) / dz
        else:
            d = (phi[j] - phi[j - 1]) / dz
        out[j] = f + c * d
        if abs(c) > smax:
            smax = abs(c)
    return smax


@njit
def _max_speed_loops(phi, z, theta, slope, c0, coef):
    smax = 0.0
    for j in range(phi.size):
        c = abs((c0 * _horner(phi[j], coef) + slope * z[j]) / theta)
        if c > smax:
            smax = c
    return smax


@njit
def _hopf_advance_loops(phi, z, dz, t0, t1, c0, coef, slope, cfl, dt_max,
                        adaptive, max_steps):
    n = phi.size
    k1 = np.empty(n)
    k2 = np.empty(n)
    stage = np.empty(n)
    t = t0
    steps = 0
    worst = 0.0
    tol = 1e-14 * max(1.0, abs(t1))
    while t < t1 - tol:
        if steps >= max_steps:
            break
        theta = 1.0 + slope * t
        s = _max_speed_loops(phi, z, theta, slope, c0, coef)
        h = min(dt_max, t1 - t)
        if adaptive:
            for _ in range(8):
                th_end = 1.0 + slope * (t + h)
                s_end = s * theta / th_end if th_end > 0.0 else np.inf
                if h * s_end <= cfl * dz:
                    break
                h = cfl * dz / s_end
        th_end = 1.0 + slope * (t + h)
        ratio = h * s * theta / th_end / dz if th_end > 0.0 else np.inf
        if ratio > worst:
            worst = ratio
        _hopf_rate_loops(phi, z, dz, theta, slope, c0, coef, k1)
        for j in range(n):
            stage[j] = phi[j] + h * k1[j]
        _hopf_rate_loops(stage, z, dz, th_end, slope, c0, coef, k2)
        for j in range(n):
            phi[j] = 0.5 * (phi[j] + stage[j] + h * k2[j])
        t += h
        steps += 1
    return t, steps, worst


def _hopf_rate_numpy(phi, z, dz, theta, slope, c0, coef):
    f = c0 * np.polynomial.polynomial.polyval(phi, coef)
    c = (f + slope * z) / theta
    diff = np.diff(phi) / dz
    fwd = np.append(diff, diff[-1])
    bwd = np.insert(diff, 0, diff[0])
    d = np.where(c > 0.0, fwd, bwd)
    d[0] = fwd[0]
    d[-1] = bwd[-1]
    return f + c * d


def _hopf_advance_numpy(phi, z, dz, t0, t1, c0, coef, slope, cfl, dt_max,
                        adaptive, max_steps):
    t = t0
    steps = 0
    worst = 0.0
    tol = 1e-14 * max(1.0, abs(t1))
    while t < t1 - tol and steps < max_steps:
        theta = 1.0 + slope * t
        s = np.max(np.abs((c0 * np.polynomial.polynomial.polyval(phi, coef)
                           + slope * z) / theta))
        h = min(dt_max, t1 - t)
        if adaptive:
            for _ in range(8):
                th_end = 1.0 + slope * (t + h)
                s_end = s * theta / th_end if th_end > 0.0 else np.inf
                if h * s_end <= cfl * dz:
                    break
                h = cfl * dz / s_end
        th_end = 1.0 + slope * (t + h)
        ratio = h * s * theta / th_end / dz if th_end > 0.0 else np.inf
        worst = max(worst, ratio)
        k1 = _hopf_rate_numpy(phi, z, dz, theta, slope, c0, coef)
        stage = phi + h * k1
        k2 = _hopf_rate_numpy(stage, z, dz, th_end, slope, c0, coef)
        phi[:] = 0.5 * (phi + stage + h * k2)
        t += h
        steps += 1
    return t, steps, worst


if USE_NUMBA:
    conv_direct = _conv_direct_loops
    hopf_advance = _hopf_advance_loops
else:
    conv_direct = _conv_direct_numpy
    hopf_advance = _hopf_advance_numpy
