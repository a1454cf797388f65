"""Truncated Fourier fields on the torus and exact spectral algebra.

A :class:`SpectralField` stores every coefficient in the box
``|alpha|_inf <= N`` as a dense array of shape
``(components, 2N+1, 2N+1 | 1, P)``: vector components, the two Fourier
axes (the second has length one in 1D) and a transverse axis holding nodal
values in ``y`` (Chebyshev) or ``v`` (uniform grid). Index ``i`` on a
Fourier axis is mode ``i - N``.

Mode magnitudes use the Euclidean norm ``|alpha|_2`` everywhere: in the
truncation ball, in the generator weight ``exp(z|alpha|)`` and in the Leray
projector.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field as dc_field, replace
from pathlib import Path

import numpy as np

from . import _kernels
from .errors import (
    AxisOutOfRange,
    DimensionMismatch,
    GridTooCoarse,
    IndexOutOfTruncation,
)

TRANSVERSE_KINDS = ("none", "chebyshev_y", "grid_v")


@dataclass(frozen=True, eq=False)
class Transverse:
    """Nodal discretisation of a non-periodic direction."""

    kind: str
    nodes: np.ndarray

    def __post_init__(self):
        if self.kind not in TRANSVERSE_KINDS[1:]:
            raise ValueError(f"unknown transverse kind {self.kind!r}")
        nodes = np.asarray(self.nodes, dtype=float)
        if not np.all(np.isfinite(nodes)):
            raise ValueError("transverse nodes must be finite")
        object.__setattr__(self, "nodes", nodes)

    @property
    def size(self) -> int:
        return self.nodes.size

    def same_as(self, other: "Transverse | None") -> bool:
        return (other is not None and other.kind == self.kind
                and other.size == self.size
                and np.array_equal(other.nodes, self.nodes))


@dataclass(frozen=True, eq=False)
class SpectralField:
    """Immutable truncated Fourier representation.

    Use :func:`make_field`, :func:`zeros` or :func:`from_array` rather than
    calling the constructor with a hand-built array.
    """

    dim: int
    trunc: int
    coeffs: np.ndarray
    transverse: Transverse | None = dc_field(default=None)

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise DimensionMismatch(f"dim must be 1 or 2, got {self.dim}")
        c = np.asarray(self.coeffs, dtype=np.complex128)
        n = 2 * self.trunc + 1
        expect = (n, n if self.dim == 2 else 1)
        if c.ndim != 4 or c.shape[1:3] != expect:
            raise DimensionMismatch(
                f"coefficient array {c.shape} does not match dim={self.dim}, "
                f"trunc={self.trunc}")
        p = 1 if self.transverse is None else self.transverse.size
        if c.shape[3] != p:
            raise DimensionMismatch(
                f"transverse axis has {c.shape[3]} entries, expected {p}")
        if not np.all(np.isfinite(c)):
            raise ValueError("field values must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    # -- shape helpers -----------------------------------------------------
    @property
    def components(self) -> int:
        return self.coeffs.shape[0]

    @property
    def nodes(self) -> int:
        return self.coeffs.shape[3]

    @property
    def transverse_kind(self) -> str:
        return "none" if self.transverse is None else self.transverse.kind

    def mode_indices(self) -> tuple[np.ndarray, ...]:
        """Integer mode numbers along each Fourier axis, broadcastable."""
        return mode_indices(self.dim, self.trunc)

    def mode_norm(self) -> np.ndarray:
        """Euclidean ``|alpha|`` on the stored box, shape (n1, n2)."""
        return mode_norm(self.dim, self.trunc)

    def coeff(self, alpha, component: int = 0):
        """Coefficient at ``alpha`` (complex, or node array if transverse)."""
        idx = _box_index(alpha, self.dim, self.trunc)
        val = self.coeffs[(component,) + idx]
        return val if self.transverse is not None else complex(val[0])

    def magnitudes(self) -> np.ndarray:
        """Per-mode, per-node Euclidean norm across components, (n1, n2, P)."""
        if self.components == 1:
            return np.abs(self.coeffs[0])
        return np.sqrt(np.sum(np.abs(self.coeffs) ** 2, axis=0))

    def with_coeffs(self, coeffs) -> "SpectralField":
        return replace(self, coeffs=coeffs)

    # -- arithmetic ---------------------------------------------------------
    def _aligned(self, other):
        if not isinstance(other, SpectralField):
            raise TypeError("expected a SpectralField")
        if other.dim != self.dim:
            raise DimensionMismatch("fields have different dim")
        if not _transverse_compatible(self.transverse, other.transverse):
            raise DimensionMismatch("fields have different transverse layouts")
        n = max(self.trunc, other.trunc)
        return _extend(self, n).coeffs, _extend(other, n).coeffs, n

    def __add__(self, other):
        a, b, n = self._aligned(other)
        tr = self.transverse or other.transverse
        return SpectralField(self.dim, n, a + b, tr)

    def __sub__(self, other):
        a, b, n = self._aligned(other)
        tr = self.transverse or other.transverse
        return SpectralField(self.dim, n, a - b, tr)

    def __neg__(self):
        return self.with_coeffs(-self.coeffs)

    def __mul__(self, scalar):
        if isinstance(scalar, SpectralField):
            return NotImplemented
        return self.with_coeffs(self.coeffs * scalar)

    __rmul__ = __mul__

    def __repr__(self):
        return (f"SpectralField(dim={self.dim}, trunc={self.trunc}, "
                f"components={self.components}, "
                f"transverse={self.transverse_kind}:{self.nodes})")


# --------------------------------------------------------------------------
# index helpers
# --------------------------------------------------------------------------

def mode_indices(dim: int, trunc: int):
    k = np.arange(-trunc, trunc + 1)
    if dim == 1:
        return (k[:, None],)
    return (k[:, None], k[None, :])


def mode_norm(dim: int, trunc: int) -> np.ndarray:
    ks = mode_indices(dim, trunc)
    sq = sum(k.astype(float) ** 2 for k in ks)
    return np.sqrt(np.broadcast_to(sq, _mode_shape(dim, trunc)))


def _mode_shape(dim, trunc):
    n = 2 * trunc + 1
    return (n, n) if dim == 2 else (n, 1)


def _normalise_alpha(alpha, dim):
    if np.isscalar(alpha):
        alpha = (int(alpha),)
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != dim:
        raise DimensionMismatch(
            f"multi-index {alpha} has length {len(alpha)}, expected {dim}")
    return alpha


def _box_index(alpha, dim, trunc):
    alpha = _normalise_alpha(alpha, dim)
    if max(abs(a) for a in alpha) > trunc:
        raise IndexOutOfTruncation(f"|{alpha}|_inf exceeds cutoff {trunc}")
    if dim == 1:
        return (alpha[0] + trunc, 0)
    return (alpha[0] + trunc, alpha[1] + trunc)


def _transverse_compatible(a, b):
    if a is None or b is None:
        return True
    return a.same_as(b)


def _extend(f: SpectralField, trunc: int) -> SpectralField:
    """Re-store ``f`` in a box of half-width ``trunc`` (pad or crop)."""
    if trunc == f.trunc:
        return f
    out = np.zeros((f.components,) + _mode_shape(f.dim, trunc) + (f.nodes,),
                   dtype=np.complex128)
    m = min(trunc, f.trunc)
    so, sf = trunc - m, f.trunc - m
    w = 2 * m + 1
    if f.dim == 1:
        out[:, so:so + w] = f.coeffs[:, sf:sf + w]
    else:
        out[:, so:so + w, so:so + w] = f.coeffs[:, sf:sf + w, sf:sf + w]
    return SpectralField(f.dim, trunc, out, f.transverse)


# --------------------------------------------------------------------------
# construction
# --------------------------------------------------------------------------

def zeros(dim: int, trunc: int, components: int = 1,
          transverse: Transverse | None = None) -> SpectralField:
    p = 1 if transverse is None else transverse.size
    c = np.zeros((components,) + _mode_shape(dim, trunc) + (p,),
                 dtype=np.complex128)
    return SpectralField(dim, trunc, c, transverse)


def make_field(entries, dim: int, trunc: int, components: int = 1,
               transverse: Transverse | None = None) -> SpectralField:
    """Build a field from ``(alpha, value)`` pairs.

    ``value`` broadcasts to ``(components, P)``: a scalar sets every
    component and node, an array of length ``P`` sets node values, an array
    of shape ``(components, P)`` sets everything. Repeated indices add up.

    >>> f = make_field([((1,), 0.5), ((-1,), 0.5)], dim=1, trunc=4)  # cos x
    >>> f.coeff(1)
    (0.5+0j)
    """
    if dim not in (1, 2):
        raise DimensionMismatch(f"dim must be 1 or 2, got {dim}")
    out = zeros(dim, trunc, components, transverse)
    c = np.array(out.coeffs)
    p = c.shape[3]
    for alpha, value in entries:
        idx = _box_index(alpha, dim, trunc)
        c[(slice(None),) + idx] += np.broadcast_to(
            np.asarray(value, dtype=np.complex128), (components, p))
    return SpectralField(dim, trunc, c, transverse)


def from_array(coeffs, dim: int, transverse: Transverse | None = None):
    """Wrap a dense centred array.

    Accepts ``(2N+1,)`` / ``(2N+1, 2N+1)`` scalar boxes, a leading component
    axis, and a trailing node axis when ``transverse`` is given.
    """
    c = np.asarray(coeffs, dtype=np.complex128)
    base = dim + (0 if transverse is None else 1)
    if c.ndim == base:
        c = c[None]
    if transverse is None:
        c = c[..., None]
    if dim == 1:
        c = c[:, :, None, :]
    trunc = (c.shape[1] - 1) // 2
    return SpectralField(dim, trunc, c, transverse)


def hermitian_part(f: SpectralField) -> SpectralField:
    """Project onto real-valued fields: ``(c_a + conj(c_{-a})) / 2``."""
    flipped = np.conj(f.coeffs[:, ::-1, ::-1] if f.dim == 2
                      else f.coeffs[:, ::-1])
    return f.with_coeffs(0.5 * (f.coeffs + flipped))


def hermitian_defect(f: SpectralField) -> float:
    """Relative violation of ``c_{-a} = conj(c_a)``."""
    flipped = np.conj(f.coeffs[:, ::-1, ::-1] if f.dim == 2
                      else f.coeffs[:, ::-1])
    scale = np.max(np.abs(f.coeffs)) if f.coeffs.size else 0.0
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(f.coeffs - flipped)) / scale)


# --------------------------------------------------------------------------
# spectral algebra
# --------------------------------------------------------------------------

def truncate(f: SpectralField, N: int) -> SpectralField:
    """Galerkin projection onto the modes ``|alpha|_2 <= N``.

    The result is stored with cutoff ``N``; applying it twice is a no-op.
    """
    if N < 0:
        raise ValueError("cutoff must be nonnegative")
    g = _extend(f, N)
    mask = mode_norm(f.dim, N) <= N + 1e-12
    return g.with_coeffs(g.coeffs * mask[None, :, :, None])


def convolve(f: SpectralField, g: SpectralField,
             method: str = "direct") -> SpectralField:
    """Coefficients of the pointwise product ``f g``.

    The result is exact (no aliasing, no truncation) with cutoff
    ``f.trunc + g.trunc``. Components pair up one-to-one, or a scalar factor
    broadcasts against a vector one. Transverse nodes multiply pointwise.
    ``method="fft"`` computes the same coefficients through a zero-padded
    transform; ``"direct"`` is the reference sum.
    """
    if f.dim != g.dim:
        raise DimensionMismatch("convolution of fields with different dim")
    if not _transverse_compatible(f.transverse, g.transverse):
        raise DimensionMismatch("transverse layouts differ")
    if f.components != g.components and 1 not in (f.components, g.components):
        raise DimensionMismatch(
            f"cannot pair {f.components} with {g.components} components")
    ncomp = max(f.components, g.components)
    p = max(f.nodes, g.nodes)
    trunc = f.trunc + g.trunc
    out = np.zeros((ncomp,) + _mode_shape(f.dim, trunc) + (p,),
                   dtype=np.complex128)
    for k in range(ncomp):
        a = f.coeffs[k if f.components > 1 else 0]
        b = g.coeffs[k if g.components > 1 else 0]
        if a.shape[2] != p:
            a = np.broadcast_to(a, a.shape[:2] + (p,))
        if b.shape[2] != p:
            b = np.broadcast_to(b, b.shape[:2] + (p,))
        if method == "direct":
            out[k] = _kernels.conv_direct(np.ascontiguousarray(a),
                                          np.ascontiguousarray(b))
        elif method == "fft":
            out[k] = _conv_fft(a, b, f.dim)
        else:
            raise ValueError(f"unknown convolution method {method!r}")
    return SpectralField(f.dim, trunc, out, f.transverse or g.transverse)


def _conv_fft(a, b, dim):
    na, nb = (a.shape[0] - 1) // 2, (b.shape[0] - 1) // 2
    n = na + nb
    m = 2 * n + 1
    axes = (0, 1) if dim == 2 else (0,)

    def to_grid(c, h):
        g = np.zeros((m, m if dim == 2 else 1, c.shape[2]), dtype=complex)
        k = np.arange(-h, h + 1) % m
        if dim == 2:
            g[np.ix_(k, k)] = c
        else:
            g[k] = c
        return np.fft.ifftn(g, axes=axes) * (m ** dim)

    prod = to_grid(a, na) * to_grid(b, nb)
    spec = np.fft.fftn(prod, axes=axes) / (m ** dim)
    k = np.arange(-n, n + 1) % m
    return spec[np.ix_(k, k)] if dim == 2 else spec[k]


def derivative(f: SpectralField, axis: int) -> SpectralField:
    """Spectral ``d/dx_axis``: multiply mode ``alpha`` by ``i alpha_axis``."""
    if not 0 <= axis < f.dim:
        raise AxisOutOfRange(f"axis {axis} not in [0, {f.dim})")
    k = f.mode_indices()[axis]
    return f.with_coeffs(f.coeffs * (1j * k)[None, :, :, None])


def gradient(f: SpectralField) -> SpectralField:
    """Stack ``d_x1 f, ..., d_xd f`` as components of a scalar field."""
    if f.components != 1:
        raise DimensionMismatch("gradient expects a scalar field")
    parts = [derivative(f, ax).coeffs[0] for ax in range(f.dim)]
    return f.with_coeffs(np.stack(parts))


def divergence(u: SpectralField) -> SpectralField:
    if u.components != u.dim:
        raise DimensionMismatch("divergence needs components == dim")
    k = u.mode_indices()
    total = sum(1j * k[j][..., None] * u.coeffs[j] for j in range(u.dim))
    return u.with_coeffs(total[None])


def component(u: SpectralField, j: int) -> SpectralField:
    return u.with_coeffs(u.coeffs[j:j + 1])


def stack(fields) -> SpectralField:
    fields = list(fields)
    n = max(f.trunc for f in fields)
    fields = [_extend(f, n) for f in fields]
    return fields[0].with_coeffs(np.concatenate([f.coeffs for f in fields]))


def leray_project(u: SpectralField) -> SpectralField:
    """Mode-wise orthogonal projection onto divergence-free fields.

    ``(P_alpha)_jk = delta_jk - alpha_j alpha_k / |alpha|^2``; the mean mode
    is passed through unchanged.
    """
    if u.dim != 2 or u.components != 2:
        raise DimensionMismatch("Leray projection needs a 2D vector field")
    k1, k2 = (np.broadcast_to(k, _mode_shape(2, u.trunc)).astype(float)
              for k in u.mode_indices())
    sq = k1 ** 2 + k2 ** 2
    inv = np.divide(1.0, sq, out=np.zeros_like(sq), where=sq > 0)
    u1, u2 = u.coeffs[0], u.coeffs[1]
    dot = (k1[..., None] * u1 + k2[..., None] * u2) * inv[..., None]
    out = np.stack([u1 - k1[..., None] * dot, u2 - k2[..., None] * dot])
    return u.with_coeffs(out)


def max_mode_divergence(u: SpectralField) -> float:
    """``max_alpha |alpha . u_alpha|``."""
    k = u.mode_indices()
    d = sum(k[j][..., None] * u.coeffs[j] for j in range(u.dim))
    return float(np.max(np.abs(d)))


# --------------------------------------------------------------------------
# physical space
# --------------------------------------------------------------------------

def uniform_grid(M: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(M) / M


def evaluate_physical(f: SpectralField, grid):
    """Evaluate ``sum_alpha f_alpha exp(i alpha . x)``.

    ``grid`` is either an int ``M`` (uniform ``M`` points per axis, which
    must satisfy ``M >= 2N + 1``) or a sequence of ``dim`` coordinate
    arrays (tensor-product points, no resolution requirement).

    Returns an array of shape ``(components, M1[, M2], P)`` with the
    component axis dropped for scalars and the node axis dropped when the
    field has no transverse direction.
    """
    if np.isscalar(grid):
        M = int(grid)
        if M < 2 * f.trunc + 1:
            raise GridTooCoarse(f"{M} points cannot resolve cutoff {f.trunc}")
        axes = [uniform_grid(M)] * f.dim
    else:
        axes = [np.atleast_1d(np.asarray(g, dtype=float)) for g in grid]
        if len(axes) != f.dim:
            raise DimensionMismatch("need one coordinate array per axis")
    k = np.arange(-f.trunc, f.trunc + 1)
    e1 = np.exp(1j * np.outer(axes[0], k))
    if f.dim == 1:
        vals = np.einsum("xa,cap->cxp", e1, f.coeffs[:, :, 0, :])
    else:
        e2 = np.exp(1j * np.outer(axes[1], k))
        vals = np.einsum("xa,yb,cabp->cxyp", e1, e2, f.coeffs)
    return _squeeze_physical(f, vals)


def _squeeze_physical(f, vals):
    if f.transverse is None:
        vals = vals[..., 0]
    if f.components == 1:
        vals = vals[0]
    return vals


def forward_transform(samples, trunc: int, dim: int,
                      transverse: Transverse | None = None) -> SpectralField:
    """Fourier coefficients from uniform samples (inverse of sampling).

    ``samples`` has shape ``([components,] M[, M][, P])`` on the grid of
    :func:`uniform_grid`; exact for trigonometric polynomials of cutoff
    ``trunc`` when ``M >= 2 trunc + 1``.
    """
    s = np.asarray(samples, dtype=np.complex128)
    base = dim + (0 if transverse is None else 1)
    if s.ndim == base:
        s = s[None]
    if transverse is None:
        s = s[..., None]
    M = s.shape[1]
    if M < 2 * trunc + 1:
        raise GridTooCoarse(f"{M} samples cannot resolve cutoff {trunc}")
    axes = (1, 2) if dim == 2 else (1,)
    spec = np.fft.fftn(s, axes=axes) / (M ** dim)
    k = np.arange(-trunc, trunc + 1) % M
    if dim == 2:
        c = spec[:, k][:, :, k]
    else:
        c = spec[:, k][:, :, None, :]
    return SpectralField(dim, trunc, c, transverse)


# --------------------------------------------------------------------------
# text serialisation
# --------------------------------------------------------------------------
#
# header:  dim N components transverse_kind transverse_nodes [vmin vmax]
# body:    alpha_1 .. alpha_d [component] [node] re im
# The component column appears only for vector fields and the node column
# only for transverse fields. Floats use 17 significant digits.

def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def field_to_text(f: SpectralField) -> str:
    buf = io.StringIO()
    head = [str(f.dim), str(f.trunc), str(f.components), f.transverse_kind,
            str(0 if f.transverse is None else f.nodes)]
    if f.transverse is not None and f.transverse.kind == "grid_v":
        head += [_fmt(f.transverse.nodes[0]), _fmt(f.transverse.nodes[-1])]
    buf.write(" ".join(head) + "\n")
    ks = range(-f.trunc, f.trunc + 1)
    alphas = ([(a,) for a in ks] if f.dim == 1
              else [(a, b) for a in ks for b in ks])
    for c in range(f.components):
        for alpha in alphas:
            idx = _box_index(alpha, f.dim, f.trunc)
            for p in range(f.nodes):
                v = f.coeffs[(c,) + idx + (p,)]
                cols = [str(a) for a in alpha]
                if f.components > 1:
                    cols.append(str(c))
                if f.transverse is not None:
                    cols.append(str(p))
                cols += [_fmt(v.real), _fmt(v.imag)]
                buf.write(" ".join(cols) + "\n")
    return buf.getvalue()


def field_from_text(text: str) -> SpectralField:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = lines[0].split()
    dim, trunc, ncomp = int(head[0]), int(head[1]), int(head[2])
    kind, nnodes = head[3], int(head[4])
    transverse = None
    if kind == "chebyshev_y":
        from .chebyshev import cheb_nodes
        transverse = Transverse("chebyshev_y", cheb_nodes(nnodes))
    elif kind == "grid_v":
        transverse = Transverse(
            "grid_v", np.linspace(float(head[5]), float(head[6]), nnodes))
    elif kind != "none":
        raise ValueError(f"unknown transverse kind {kind!r}")
    out = np.array(zeros(dim, trunc, ncomp, transverse).coeffs)
    for ln in lines[1:]:
        cols = ln.split()
        alpha = tuple(int(a) for a in cols[:dim])
        pos = dim
        c = 0
        p = 0
        if ncomp > 1:
            c = int(cols[pos])
            pos += 1
        if transverse is not None:
            p = int(cols[pos])
            pos += 1
        idx = _box_index(alpha, dim, trunc)
        out[(c,) + idx + (p,)] = complex(float(cols[pos]), float(cols[pos + 1]))
    return SpectralField(dim, trunc, out, transverse)


def save_field(f: SpectralField, path) -> None:
    Path(path).write_text(field_to_text(f))


def load_field(path) -> SpectralField:
    return field_from_text(Path(path).read_text())
