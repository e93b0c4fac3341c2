"""Model parameters and the normalized S-matrix weights."""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import PoleError

RATIONAL = "rational"
TRIGONOMETRIC = "trigonometric"
VARIANTS = (RATIONAL, TRIGONOMETRIC)

# Runtime singularity threshold.  Samplers keep a much wider margin (SAMPLER_GUARD).
POLE_EPS = 1e-13
SAMPLER_GUARD = 1e-3


def phi(variant: str, t):
    if variant == RATIONAL:
        return t
    if variant == TRIGONOMETRIC:
        return np.sinh(t) if isinstance(t, np.ndarray) else cmath.sinh(t)
    raise ValueError(f"unknown variant {variant!r}")


@dataclass(frozen=True)
class ModelParams:
    """Chain variant, anisotropy eta and inhomogeneities xi_1..xi_N."""

    variant: str
    eta: complex
    xi: tuple

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}")
        object.__setattr__(self, "eta", complex(self.eta))
        object.__setattr__(self, "xi", tuple(complex(x) for x in self.xi))
        if len(self.xi) < 1:
            raise ValueError("need at least one site")
        if abs(phi(self.variant, self.eta)) < POLE_EPS:
            raise ValueError("phi(eta) must be nonzero")

    @property
    def n_sites(self) -> int:
        return len(self.xi)

    @property
    def xi_distinct(self) -> bool:
        xs = self.xi
        return all(abs(xs[i] - xs[j]) > 0 for i in range(len(xs)) for j in range(i))

    def with_xi(self, xi) -> "ModelParams":
        return ModelParams(self.variant, self.eta, tuple(xi))

    @classmethod
    def homogeneous(cls, n: int, eta=1.0, variant=RATIONAL, xi0=0.0) -> "ModelParams":
        return cls(variant, eta, (xi0,) * n)


def weight(params: ModelParams, kind: str, t: complex) -> complex:
    """Normalized weight b~(t) = phi(eta)/phi(t+eta) or c~(t) = phi(t)/phi(t+eta)."""
    den = phi(params.variant, t + params.eta)
    if abs(den) < POLE_EPS:
        raise PoleError(f"phi(t+eta) = {den} at t = {t}")
    if kind == "b":
        return phi(params.variant, params.eta) / den
    if kind == "c":
        return phi(params.variant, t) / den
    raise ValueError(f"kind must be 'b' or 'c', got {kind!r}")


def b_weight(params: ModelParams, t: complex) -> complex:
    return weight(params, "b", t)


def c_weight(params: ModelParams, t: complex) -> complex:
    return weight(params, "c", t)


def c_inverse(params: ModelParams, t: complex) -> complex:
    """1 / c~(t) = phi(t+eta) / phi(t)."""
    num = phi(params.variant, t)
    if abs(num) < POLE_EPS:
        raise PoleError(f"c~(t) vanishes at t = {t}")
    return phi(params.variant, t + params.eta) / num
