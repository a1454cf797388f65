"""Generator functions for analytic solutions of evolution equations.

``Gen[f](z) = sum_a exp(z|a|) |f_a|`` turns the analytic a-priori estimates
of a PDE into a scalar transport inequality. The package computes generator
curves of spectral fields, integrates the dominating Hopf-type envelope and
checks Galerkin simulations against it.
"""
from ._backend import BACKEND
from .errors import GenfuncError
from .generator import GeneratorCurve, MajorantSeries
from .majorant import HopfProblem, check_domination, integrate_hopf_envelope
from .spectral import SpectralField, make_field

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "GenfuncError",
    "GeneratorCurve",
    "HopfProblem",
    "MajorantSeries",
    "SpectralField",
    "check_domination",
    "integrate_hopf_envelope",
    "make_field",
]
