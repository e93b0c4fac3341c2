"""
Ground truth by direct operator application, and a Newton solver for the
Bethe equations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import tensor_core as tc
from .errors import CapError, ConvergenceError, DimensionError, PoleError
from .lattice_model import B, C, bae_f, transfer_apply, transfer_eigenvalue, vacuum_eigenvalue
from .params import SAMPLER_GUARD, ModelParams, phi

BRUTE_FORCE_CAP = 14
RESIDUAL_TOL = 1e-10
COLLISION_TOL = 1e-6


@dataclass(frozen=True)
class BetheRoots:
    """Solution of the Bethe equations together with its residual."""

    roots: tuple
    residual: float
    params: ModelParams

    @property
    def M(self) -> int:
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def __len__(self):
        return len(self.roots)

    def __getitem__(self, i):
        return self.roots[i]


@dataclass
class ScalarProductSpec:
    """
    Inputs of <0|C(l_1)...C(l_M) B(t_1)...B(t_M)|0>.

    ``a_function`` replaces the vacuum eigenvalue in the closed forms; ``None``
    means the model's own a(t).  ``t_weights`` optionally overrides the values
    a(t_i) used for the t-parameters (e.g. the f(t_i) of a Bethe root set).
    """

    lambdas: tuple
    ts: tuple
    params: Optional[ModelParams] = None
    a_function: Optional[Callable[[complex], complex]] = None
    t_weights: Optional[tuple] = field(default=None)

    def __post_init__(self):
        self.lambdas = tuple(complex(x) for x in self.lambdas)
        self.ts = tuple(complex(x) for x in self.ts)
        if len(self.lambdas) != len(self.ts):
            raise DimensionError("lambda and t sets must have equal size")
        if self.t_weights is not None:
            self.t_weights = tuple(complex(x) for x in self.t_weights)
            if len(self.t_weights) != len(self.ts):
                raise DimensionError("one weight per t parameter")

    @property
    def M(self) -> int:
        return len(self.ts)

    def a(self, x: complex) -> complex:
        if self.a_function is not None:
            return self.a_function(x)
        if self.params is None:
            raise ValueError("no a-function and no model to take a(t) from")
        return vacuum_eigenvalue(self.params, x)

    def a_of_t(self, i: int) -> complex:
        if self.t_weights is not None:
            return self.t_weights[i]
        return self.a(self.ts[i])


def _cap(params: ModelParams, cap: int) -> None:
    if params.n_sites > cap:
        raise CapError(f"brute force limited to N <= {cap} (got {params.n_sites})")


def apply_b_string(params: ModelParams, ts, state: np.ndarray) -> np.ndarray:
    """B(t_1) B(t_2) ... B(t_M) state; B(t_M) acts first."""
    out = state
    for t in reversed(list(ts)):
        out = B(params, t, out)
    return out


def apply_c_string(params: ModelParams, lambdas, state: np.ndarray) -> np.ndarray:
    """C(l_1) ... C(l_M) state; C(l_M) acts first."""
    out = state
    for lam in reversed(list(lambdas)):
        out = C(params, lam, out)
    return out


def bethe_state(params: ModelParams, roots) -> np.ndarray:
    return apply_b_string(params, getattr(roots, "roots", roots), tc.vacuum(params.n_sites))


def brute_force_scalar_product(spec: ScalarProductSpec, params: ModelParams | None = None,
                               cap: int = BRUTE_FORCE_CAP) -> complex:
    """<0| C(l_1)...C(l_M) B(t_1)...B(t_M) |0> by explicit operator application."""
    params = params or spec.params
    if params is None:
        raise ValueError("brute force needs model parameters")
    _cap(params, cap)
    v = apply_b_string(params, spec.ts, tc.vacuum(params.n_sites))
    v = apply_c_string(params, spec.lambdas, v)
    return complex(v[0])


def string_pairing(params: ModelParams, lambdas, ts, cap: int = BRUTE_FORCE_CAP) -> complex:
    """Like the brute-force scalar product but string lengths may differ."""
    _cap(params, cap)
    v = apply_b_string(params, ts, tc.vacuum(params.n_sites))
    v = apply_c_string(params, lambdas, v)
    return complex(v[0])


def bae_defects(params: ModelParams, roots) -> np.ndarray:
    """G_i = a(t_i) - prod_{alpha != i} c~(t_alpha - t_i) / c~(t_i - t_alpha)."""
    roots = list(roots)
    return np.array([vacuum_eigenvalue(params, roots[i]) - bae_f(params, roots, i)
                     for i in range(len(roots))], dtype=complex)


def cleared_defects(params: ModelParams, roots) -> np.ndarray:
    """
    Bethe equations with all denominators multiplied out:

        prod_a phi(xi_a - t_i) prod_{a != i} phi(t_a - t_i + eta)
          - prod_a phi(xi_a - t_i + eta) prod_{a != i} phi(t_a - t_i - eta).

    Unlike the product form this has no poles, so Newton steps cannot jump across one.
    """
    var, eta = params.variant, params.eta
    xi = np.asarray(params.xi)
    r = np.asarray(roots, dtype=complex)
    out = np.empty(len(r), dtype=complex)
    for i, ti in enumerate(r):
        others = np.delete(r, i)
        out[i] = (np.prod(phi(var, xi - ti)) * np.prod(phi(var, others - ti + eta))
                  - np.prod(phi(var, xi - ti + eta)) * np.prod(phi(var, others - ti - eta)))
    return out


def _numeric_jacobian(fun, params, roots, h=1e-7):
    m = len(roots)
    jac = np.empty((m, m), dtype=complex)
    for j in range(m):
        up = roots.copy()
        dn = roots.copy()
        up[j] += h
        dn[j] -= h
        jac[:, j] = (fun(params, up) - fun(params, dn)) / (2 * h)
    return jac


def _guard_roots(params, roots, collision, max_abs):
    m = len(roots)
    if np.max(np.abs(roots)) > max_abs:
        raise ConvergenceError("a root escaped towards infinity")
    for i in range(m):
        for j in range(i):
            d = roots[i] - roots[j]
            if abs(d) < collision:
                raise ConvergenceError(f"roots {i} and {j} collide")
            for s in (d, -d):
                if abs(phi(params.variant, s + params.eta)) < SAMPLER_GUARD:
                    raise PoleError("root pair sits on a pole of c~")
    for r in roots:
        for x in params.xi:
            if abs(phi(params.variant, x - r + params.eta)) < SAMPLER_GUARD:
                raise PoleError("root sits on a pole of a(t)")


def default_seeds(params: ModelParams, M: int, rng: np.random.Generator, jitter: float = 0.3) -> np.ndarray:
    """xi-centroid + eta (k - (M+1)/2) + complex Gaussian jitter."""
    centre = np.mean(params.xi)
    k = np.arange(1, M + 1)
    base = centre + params.eta * (k - (M + 1) / 2)
    return base + jitter * (rng.normal(size=M) + 1j * rng.normal(size=M))


def newton_bae(params: ModelParams, seeds, max_iter: int = 100, tol: float = RESIDUAL_TOL,
               collision: float = COLLISION_TOL, h: float = 1e-7) -> BetheRoots:
    """
    One Newton run from ``seeds``.

    Steps are taken on the cleared form (central-difference Jacobian, step h);
    acceptance is decided on the product-form residual max |G_i|.
    """
    roots = np.array(seeds, dtype=complex)
    M = len(roots)
    if M == 0:
        return BetheRoots((), 0.0, params)
    scale = 1.0 + max(abs(x) for x in params.xi) + abs(params.eta)
    try:
        for _ in range(max_iter):
            g = cleared_defects(params, roots)
            jac = _numeric_jacobian(cleared_defects, params, roots, h)
            step = np.linalg.solve(jac, -g)
            if not np.all(np.isfinite(step)):
                raise ConvergenceError("non-finite Newton step")
            roots = roots + step
            if np.max(np.abs(step)) < 1e-15 * scale * (1 + np.max(np.abs(roots))):
                break
        res = float(np.max(np.abs(bae_defects(params, roots))))
    except (np.linalg.LinAlgError, PoleError) as err:
        raise ConvergenceError(str(err)) from err
    if not res < tol:
        raise ConvergenceError(f"residual {res:.3e} above {tol:.1e}")
    _guard_roots(params, roots, collision, 1e3 * scale)
    return BetheRoots(tuple(complex(r) for r in roots), res, params)


def solve_bae(params: ModelParams, M: int, seeds=None, max_iter: int = 100, tol: float = RESIDUAL_TOL,
              seed: int = 0, n_starts: int = 200, min_norm: float | None = 1e-8) -> BetheRoots:
    """
    Solve the Bethe equations for M roots.

    Explicit ``seeds`` are tried first, then up to ``n_starts`` restarts from
    :func:`default_seeds` with growing jitter, all drawn from ``seed``.  Root sets
    whose Bethe vector has norm below ``min_norm`` (relative to ||B-string||
    bounds, i.e. numerically zero) are rejected; pass ``min_norm=None`` to accept
    them.
    """
    if not 0 <= M <= params.n_sites:
        raise ValueError(f"need 0 <= M <= N, got M={M}")
    if M == 0:
        return BetheRoots((), 0.0, params)
    rng = np.random.default_rng(seed)
    attempts = []
    if seeds is not None:
        if len(seeds) != M:
            raise DimensionError("one seed per root")
        attempts.append(np.asarray(seeds, dtype=complex))
    last = None
    for k in range(n_starts + len(attempts)):
        if k < len(attempts):
            start = attempts[k]
        else:
            start = default_seeds(params, M, rng, jitter=0.3 + 0.02 * k)
        try:
            roots = newton_bae(params, start, max_iter=max_iter, tol=tol)
        except (ConvergenceError, PoleError) as err:
            last = err
            continue
        if min_norm is not None and params.n_sites <= BRUTE_FORCE_CAP:
            if np.linalg.norm(bethe_state(params, roots)) < min_norm:
                last = ConvergenceError("Bethe vector vanishes")
                continue
        return roots
    raise ConvergenceError(f"no Bethe root set found after {n_starts} starts: {last}")


def check_eigenstate(params: ModelParams, roots, t_probe: complex) -> float:
    """||(A+D)(t) psi - Lambda(t) psi|| / ||psi||, psi the Bethe vector."""
    psi = bethe_state(params, roots)
    nrm = np.linalg.norm(psi)
    if nrm == 0.0:
        raise ConvergenceError("Bethe vector has zero norm")
    lam = transfer_eigenvalue(params, t_probe, roots)
    return float(np.linalg.norm(transfer_apply(params, t_probe, psi) - lam * psi) / nrm)
