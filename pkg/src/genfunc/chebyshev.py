"""Chebyshev-Gauss-Lobatto collocation on [-1, 1].

Nodes are ordered ``y_j = cos(pi j / (n-1))``, i.e. from +1 down to -1.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np
from numpy.polynomial import chebyshev as C

from .errors import SingularSystem
from .spectral import SpectralField, Transverse

DEFAULT_NODES = 33


def cheb_nodes(n: int) -> np.ndarray:
    if n < 2:
        raise ValueError("need at least two Chebyshev nodes")
    return np.cos(np.pi * np.arange(n) / (n - 1))


def chebyshev_y(n: int = DEFAULT_NODES) -> Transverse:
    return Transverse("chebyshev_y", cheb_nodes(n))


@lru_cache(maxsize=16)
def _diff_matrix(n: int) -> np.ndarray:
    x = cheb_nodes(n)
    c = np.ones(n)
    c[0] = c[-1] = 2.0
    c *= (-1.0) ** np.arange(n)
    dx = x[:, None] - x[None, :]
    D = np.outer(c, 1.0 / c) / (dx + np.eye(n))
    D -= np.diag(D.sum(axis=1))
    D.setflags(write=False)
    return D


def cheb_diff(n: int) -> np.ndarray:
    """First-derivative collocation matrix on :func:`cheb_nodes`."""
    return _diff_matrix(n)


@lru_cache(maxsize=16)
def _vander(n: int):
    V = C.chebvander(cheb_nodes(n), n - 1)
    return V, np.linalg.inv(V)


def values_to_coeffs(values, axis: int = -1) -> np.ndarray:
    """Chebyshev coefficients of the interpolant through nodal values."""
    v = np.moveaxis(np.asarray(values), axis, -1)
    _, Vinv = _vander(v.shape[-1])
    return np.moveaxis(v @ Vinv.T, -1, axis)


def coeffs_to_values(coeffs, axis: int = -1) -> np.ndarray:
    c = np.moveaxis(np.asarray(coeffs), axis, -1)
    V, _ = _vander(c.shape[-1])
    return np.moveaxis(c @ V.T, -1, axis)


def derivatives_up_to(values, order: int, rel_filter: float = 1e-15):
    """Nodal values of ``d^b/dy^b`` for ``b = 0..order`` (new leading axis).

    Differentiation runs on the Chebyshev coefficients. Coefficients below
    ``rel_filter`` times the largest one are dropped first, so rounding
    noise in the top modes is not amplified by repeated differentiation.
    """
    c = values_to_coeffs(values)
    scale = np.max(np.abs(c), axis=-1, keepdims=True)
    c = np.where(np.abs(c) > rel_filter * scale, c, 0.0)
    n = c.shape[-1]
    out = [coeffs_to_values(c)]
    for _ in range(order):
        c = C.chebder(c, axis=-1)
        c = np.concatenate([c, np.zeros(c.shape[:-1] + (n - c.shape[-1],))],
                           axis=-1)
        out.append(coeffs_to_values(c))
    return np.stack(out)


def clenshaw_curtis_weights(n: int) -> np.ndarray:
    """Quadrature weights on :func:`cheb_nodes` (exact to degree n-1)."""
    V, Vinv = _vander(n)
    k = np.arange(n)
    moments = np.where(k % 2 == 0, 2.0 / (1.0 - k.astype(float) ** 2 + (k == 1)),
                       0.0)
    return moments @ Vinv


@lru_cache(maxsize=16)
def _poisson_operator(n: int) -> np.ndarray:
    """Dense solution operator ``omega -> phi`` with phi(+-1) = 0."""
    D = _diff_matrix(n)
    D2 = D @ D
    inner = D2[1:-1, 1:-1]
    S = np.zeros((n, n))
    try:
        S[1:-1, 1:-1] = np.linalg.inv(inner)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem("Dirichlet second-derivative matrix") from exc
    if not np.all(np.isfinite(S)):
        raise SingularSystem("Dirichlet second-derivative matrix")
    S.setflags(write=False)
    return S


def poisson_operator(n: int) -> np.ndarray:
    return _poisson_operator(n)


def poisson_channel_solve(omega):
    """Solve ``phi'' = omega`` on [-1, 1] with ``phi(+-1) = 0``.

    ``omega`` is either an array whose last axis holds values on the
    Chebyshev nodes (every leading index is an independent solve) or a
    :class:`SpectralField` with a ``chebyshev_y`` transverse axis, solved
    per x-mode and component. The boundary values of ``omega`` are ignored;
    the collocation equations are imposed at interior nodes only.
    """
    if isinstance(omega, SpectralField):
        if omega.transverse_kind != "chebyshev_y":
            raise ValueError("poisson_channel_solve needs chebyshev_y nodes")
        return omega.with_coeffs(poisson_channel_solve(omega.coeffs))
    w = np.asarray(omega)
    n = w.shape[-1]
    if n < 8:
        raise ValueError("channel solve needs at least 8 Chebyshev nodes")
    return w @ _poisson_operator(n).T


def elliptic_constant(n: int) -> float:
    """Discrete analogue of the channel elliptic estimate.

    Max-norm of ``omega -> (phi, phi', phi'')`` summed over the three
    outputs, evaluated on the collocation operator.
    """
    S = _poisson_operator(n)
    D = _diff_matrix(n)
    inf = lambda A: float(np.max(np.sum(np.abs(A), axis=1)))
    return inf(S) + inf(D @ S) + 1.0
