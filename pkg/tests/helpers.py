"""Shared random-field builders for the test suite."""
import numpy as np

from genfunc.spectral import SpectralField, mode_norm, truncate


def random_poly(rng, dim=1, N=6, decay=0.4, components=1, transverse=None,
                real=False):
    norms = mode_norm(dim, N)
    p = 1 if transverse is None else transverse.size
    shape = (components,) + norms.shape + (p,)
    c = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    c *= np.exp(-decay * norms)[None, ..., None]
    f = truncate(SpectralField(dim, N, c, transverse), N)
    if real:
        from genfunc.spectral import hermitian_part
        f = hermitian_part(f)
    return f


def direct_gen(f, z):
    """Independent double loop over stored modes."""
    out = np.zeros(len(z))
    norms = f.mode_norm()
    mags = f.magnitudes()[..., 0]
    for idx in np.ndindex(norms.shape):
        for k, zk in enumerate(z):
            out[k] += np.exp(zk * norms[idx]) * mags[idx]
    return out
