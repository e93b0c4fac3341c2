"""Seeded random parameters that keep clear of the poles of b~ and c~."""

from __future__ import annotations

import numpy as np

from .params import RATIONAL, SAMPLER_GUARD, ModelParams, phi

RADIUS = 2.0


def _ok(variant, eta, x, others, guard):
    for y in others:
        d = x - y
        if abs(d) < guard:
            return False
        if abs(phi(variant, d + eta)) < guard or abs(phi(variant, -d + eta)) < guard:
            return False
    return True


def sample_disk(rng: np.random.Generator, count: int, radius: float = RADIUS, avoid=(),
                variant: str = RATIONAL, eta: complex = 1.0, guard: float = SAMPLER_GUARD,
                max_tries: int = 10000) -> tuple:
    """
    ``count`` points uniform in the disk |z| < radius.

    Every point is separated by at least ``guard`` from the others and from
    ``avoid``, and |phi(z - w + eta)|, |phi(w - z + eta)| >= guard for all pairs.
    """
    out = []
    for _ in range(max_tries):
        if len(out) == count:
            break
        r = radius * np.sqrt(rng.uniform())
        z = complex(r * np.exp(2j * np.pi * rng.uniform()))
        if _ok(variant, eta, z, list(out) + list(avoid), guard):
            out.append(z)
    if len(out) != count:
        raise RuntimeError("could not place separated points; shrink the guard")
    return tuple(out)


def random_params(rng: np.random.Generator, n: int, variant: str = RATIONAL, eta: complex = 1.0,
                  radius: float = RADIUS) -> ModelParams:
    """Model with n random, pairwise separated inhomogeneities."""
    return ModelParams(variant, eta, sample_disk(rng, n, radius, variant=variant, eta=eta))


def random_state(rng: np.random.Generator, n: int) -> np.ndarray:
    dim = 1 << n
    return rng.normal(size=dim) + 1j * rng.normal(size=dim)
