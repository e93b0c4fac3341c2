"""
Monodromy matrix entries A, B, C, D acting on the quantum space.

T_0(t) = S_10(xi_1, t) S_20(xi_2, t) ... S_N0(xi_N, t), and the entries are read
off as <beta|T_0|alpha> with (alpha, beta) in {up, down}:

    A = <up|T|up>,  B = <down|T|up>,  C = <up|T|down>,  D = <down|T|down>.

B raises the particle number by one, C lowers it.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError
from .params import (  # noqa: F401  (re-exported)
    RATIONAL,
    TRIGONOMETRIC,
    ModelParams,
    b_weight,
    c_inverse,
    c_weight,
    phi,
    weight,
)
from .tensor_core import DTYPE, n_sites_of

UP, DOWN = 1, 0

# (input aux state alpha, output aux state beta)
ENTRIES = {
    "A": (UP, UP),
    "B": (UP, DOWN),
    "C": (DOWN, UP),
    "D": (DOWN, DOWN),
}


def _site_view(v: np.ndarray, k: int) -> np.ndarray:
    # shape (2^(N-k), 2, 2^(k-1)); middle axis is site k
    n = n_sites_of(v)
    return v.reshape(1 << (n - k), 2, 1 << (k - 1))


def thread_aux(params: ModelParams, t: complex, up: np.ndarray, dn: np.ndarray, sites):
    """
    Apply S_k0(xi_k, t) for k in ``sites`` (in that order) to the pair of
    quantum-space components (aux up, aux down).  Returns the new pair.
    """
    for k in sites:
        x = params.xi[k - 1] - t
        b, c = b_weight(params, x), c_weight(params, x)
        u = _site_view(up, k)
        d = _site_view(dn, k)
        new_up = u.copy()
        new_dn = d.copy()
        # |0_k, up_0> -> c|0_k, up_0> + b|1_k, down_0>, and the mirror process
        new_up[:, 0, :] = c * u[:, 0, :] + b * d[:, 1, :]
        new_dn[:, 1, :] = c * d[:, 1, :] + b * u[:, 0, :]
        up, dn = new_up.reshape(-1), new_dn.reshape(-1)
    return up, dn


def monodromy_apply(params: ModelParams, entry: str, state: np.ndarray, t: complex,
                    transpose: bool = False) -> np.ndarray:
    """
    Apply one monodromy entry A(t), B(t), C(t) or D(t) to ``state``.

    The auxiliary spin is threaded through S_N0 first and S_10 last, one sweep
    over the sites.  With ``transpose=True`` the quantum-space transpose of the
    entry is applied instead (used to build dual C-string rows).
    """
    n = params.n_sites
    if state.shape != (1 << n,):
        raise DimensionError(f"state length {state.shape[0]} != 2^{n}")
    alpha, beta = ENTRIES[entry]
    if transpose:
        # (X^T)_q = <alpha|T^T|beta>, and T^T reverses the order of the S factors.
        alpha, beta = beta, alpha
        order = range(1, n + 1)
    else:
        order = range(n, 0, -1)
    comp = {UP: np.zeros(1 << n, dtype=DTYPE), DOWN: np.zeros(1 << n, dtype=DTYPE)}
    comp[alpha] = np.array(state, dtype=DTYPE)
    comp[UP], comp[DOWN] = thread_aux(params, t, comp[UP], comp[DOWN], order)
    return comp[beta]


def A(params, t, state):
    return monodromy_apply(params, "A", state, t)


def B(params, t, state):
    return monodromy_apply(params, "B", state, t)


def C(params, t, state):
    return monodromy_apply(params, "C", state, t)


def D(params, t, state):
    return monodromy_apply(params, "D", state, t)


def transfer_apply(params, t, state):
    """Z(t) = A(t) + D(t)."""
    return A(params, t, state) + D(params, t, state)


def vacuum_eigenvalue(params: ModelParams, t: complex) -> complex:
    """a(t) = prod_alpha c~(xi_alpha - t)."""
    # same order and arithmetic as the auxiliary sweep, so A(t)|0> reproduces it bit for bit
    out = np.ones(1, dtype=DTYPE)
    for x in reversed(params.xi):
        out = c_weight(params, x - t) * out
    return complex(out[0])


def bae_f(params: ModelParams, roots, i: int) -> complex:
    """f(t_i) = prod_{alpha != i} c~(t_alpha - t_i) / c~(t_i - t_alpha)."""
    ti = roots[i]
    out = 1.0 + 0.0j
    for a, ta in enumerate(roots):
        if a != i:
            out *= c_weight(params, ta - ti) * c_inverse(params, ti - ta)
    return out


def transfer_eigenvalue(params: ModelParams, t: complex, roots) -> complex:
    """Lambda(t) = a(t) prod c~^{-1}(t_a - t) + prod c~^{-1}(t - t_a)."""
    roots = getattr(roots, "roots", roots)
    first = vacuum_eigenvalue(params, t)
    second = 1.0 + 0.0j
    for ta in roots:
        first *= c_inverse(params, ta - t)
        second *= c_inverse(params, t - ta)
    return first + second
