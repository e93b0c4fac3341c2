"""
The diagonalizing (factorizing) operator O and the F-basis operators.

O = F_1 F_2 ... F_N with F_i = (1 - n_i) + T_i n_i and
T_n = S_{n+1,n} S_{n+2,n} ... S_{N,n}, every S evaluated at the inhomogeneities.
Its columns are the A(t)-eigenstates B(xi_n1)...B(xi_nM)|0>.  The inverse is
never obtained by numerical inversion: O^{-1} = f^{-1} O~, where O~ has the dual
rows <0|C(xi_m1)...C(xi_mM) and f = O~ O is diagonal.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from . import tensor_core as tc
from .errors import PoleError
from .lattice_model import B, monodromy_apply, thread_aux
from .params import ModelParams, b_weight, c_inverse, c_weight


def _require_distinct(params: ModelParams) -> None:
    if not params.xi_distinct:
        raise PoleError("operation needs pairwise distinct inhomogeneities")


def apply_t_chain(params: ModelParams, n: int, state: np.ndarray) -> np.ndarray:
    """T_n = S_{n+1,n} ... S_{N,n} at (xi_m, xi_n); S_{N,n} acts first."""
    N = params.n_sites
    if not 1 <= n <= N:
        raise tc.SiteError(f"site {n} outside 1..{N}")
    out = state
    for m in range(N, n, -1):
        out = tc.apply_two_site_S(out, m, n, params.xi[m - 1], params.xi[n - 1], params)
    return out


def build_t_chain(params: ModelParams, n: int):
    """T_n as a callable StateVector -> StateVector."""
    if not 1 <= n <= params.n_sites:
        raise tc.SiteError(f"site {n} outside 1..{params.n_sites}")
    return lambda v: apply_t_chain(params, n, v)


def phi_state_t_chain(params: ModelParams, occupied) -> np.ndarray:
    """T_n1 T_n2 ... T_nM |n1..nM>, sites sorted increasingly."""
    occ = sorted(occupied)
    v = tc.basis_state(params.n_sites, tc.occupation_to_bits(occ))
    for n in reversed(occ):
        v = apply_t_chain(params, n, v)
    return v


def phi_state_b_string(params: ModelParams, occupied) -> np.ndarray:
    """B(xi_n1) ... B(xi_nM)|0>."""
    v = tc.vacuum(params.n_sites)
    for n in reversed(sorted(occupied)):
        v = B(params, params.xi[n - 1], v)
    return v


def apply_O(params: ModelParams, state: np.ndarray) -> np.ndarray:
    """O = F_1 ... F_N, applied factor by factor (F_N first)."""
    out = np.array(state, dtype=tc.DTYPE)
    for i in range(params.n_sites, 0, -1):
        occ = tc.apply_number(out, i, occupied=True)
        out = out - occ + apply_t_chain(params, i, occ)
    return out


@lru_cache(maxsize=32)
def _o_tilde_rows(params: ModelParams) -> np.ndarray:
    # row m = <0|C(xi_m1)...C(xi_mM), built as C(xi_mM)^T ... C(xi_m1)^T |0>
    N = params.n_sites
    dim = 1 << N
    rows = np.zeros((dim, dim), dtype=tc.DTYPE)
    for m in range(dim):
        v = tc.vacuum(N)
        for k in tc.bits_to_occupation(m):
            v = monodromy_apply(params, "C", v, params.xi[k - 1], transpose=True)
        rows[m] = v
    rows.setflags(write=False)
    return rows


def o_tilde_matrix(params: ModelParams) -> np.ndarray:
    if params.n_sites > 10:
        raise tc.DimensionError("O~ rows are stored densely; N <= 10")
    return _o_tilde_rows(params)


@lru_cache(maxsize=32)
def _f_table(params: ModelParams) -> np.ndarray:
    N = params.n_sites
    out = np.empty(1 << N, dtype=tc.DTYPE)
    for bits in range(1 << N):
        out[bits] = diagonal_f(params, bits)
    out.setflags(write=False)
    return out


def diagonal_f(params: ModelParams, occupation) -> complex:
    """
    f(n_1..n_M) = prod_k prod_{alpha unoccupied} c~(xi_alpha - xi_{n_k}).

    ``occupation`` is a bitmask or a collection of occupied sites.
    """
    _require_distinct(params)
    occ = tc.bits_to_occupation(occupation) if isinstance(occupation, (int, np.integer)) \
        else tuple(sorted(occupation))
    empty = [a for a in range(1, params.n_sites + 1) if a not in occ]
    out = 1.0 + 0.0j
    for n in occ:
        for a in empty:
            out *= c_weight(params, params.xi[a - 1] - params.xi[n - 1])
    return out


def f_table(params: ModelParams) -> np.ndarray:
    """Diagonal f over all 2^N occupation patterns, indexed by bitmask."""
    _require_distinct(params)
    return _f_table(params)


def apply_factorizing(params: ModelParams, state: np.ndarray, which: str = "O") -> np.ndarray:
    """Apply O, O~ ("O_tilde") or O^{-1} = f^{-1} O~ ("O_inverse")."""
    tc._check(state, params.n_sites)
    if which == "O":
        return apply_O(params, state)
    if which == "O_tilde":
        return o_tilde_matrix(params) @ state
    if which == "O_inverse":
        f = f_table(params)
        if np.min(np.abs(f)) < 1e-300:
            raise PoleError("singular diagonal f")
        return (o_tilde_matrix(params) @ state) / f
    raise ValueError(f"unknown operator {which!r}")


def _bf_amplitudes(params: ModelParams, t: complex, kind: str) -> list[np.ndarray]:
    """Per-site amplitude tables of B^F / C^F, indexed by the input basis state."""
    N = params.n_sites
    occ = tc.site_occupations(N)
    xi = params.xi
    tables = []
    for x in range(1, N + 1):
        amp = np.full(1 << N, b_weight(params, xi[x - 1] - t), dtype=tc.DTYPE)
        for a in range(1, N + 1):
            if a == x:
                continue
            if kind == "B":
                empty_w = c_weight(params, xi[a - 1] - t) * c_inverse(params, xi[a - 1] - xi[x - 1])
                full_w = 1.0
            else:
                empty_w = c_weight(params, xi[a - 1] - t)
                full_w = c_inverse(params, xi[x - 1] - xi[a - 1])
            amp *= np.where(occ[:, a - 1], full_w, empty_w)
        tables.append(amp)
    return tables


def f_basis_operator(params: ModelParams, kind: str, t: complex):
    """
    Quasilocal B^F(t) (kind "B") or C^F(t) (kind "C") as a callable.

    Each term flips one spin x with an amplitude fixed by the occupations of the
    other sites in the input state.
    """
    if kind not in ("B", "C"):
        raise ValueError("kind must be 'B' or 'C'")
    tables = _bf_amplitudes(params, t, kind)
    direction = "raise" if kind == "B" else "lower"

    def op(v: np.ndarray) -> np.ndarray:
        out = np.zeros_like(v, dtype=tc.DTYPE)
        for x, amp in enumerate(tables, start=1):
            out += tc.apply_spin_flip(amp * v, x, direction)
        return out

    return op


def transposed_params(params: ModelParams, i: int) -> ModelParams:
    xi = list(params.xi)
    xi[i - 1], xi[i] = xi[i], xi[i - 1]
    return params.with_xi(xi)


def apply_O_transposed(params: ModelParams, i: int, state: np.ndarray) -> np.ndarray:
    """O^{(i,i+1)}: O built with sites i, i+1 (and their xi) exchanged."""
    swapped = transposed_params(params, i)
    v = tc.apply_permutation(state, i, i + 1)
    v = apply_O(swapped, v)
    return tc.apply_permutation(v, i, i + 1)


def check_factorization(params: ModelParams, i: int, n_states: int = 4, seed: int = 0) -> float:
    """max ||O v - S_{i+1,i} O^{(i,i+1)} v|| / ||v|| over random v."""
    N = params.n_sites
    if not 1 <= i < N:
        raise tc.SiteError(f"transposition ({i},{i + 1}) outside 1..{N}")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_states):
        v = rng.normal(size=1 << N) + 1j * rng.normal(size=1 << N)
        lhs = apply_O(params, v)
        rhs = apply_O_transposed(params, i, v)
        rhs = tc.apply_two_site_S(rhs, i + 1, i, params.xi[i], params.xi[i - 1], params)
        worst = max(worst, np.linalg.norm(lhs - rhs) / np.linalg.norm(v))
    return worst


def creation_part(params: ModelParams, n: int, state: np.ndarray) -> np.ndarray:
    """
    <0| S_10 ... S_{n-1,0} P_n0 |1> on the quantum space, with S_k0 at (xi_k, xi_n).

    On states empty at sites 1..n it creates a particle at n with amplitude one.
    """
    N = params.n_sites
    if not 1 <= n <= N:
        raise tc.SiteError(f"site {n} outside 1..{N}")
    v = np.array(state, dtype=tc.DTYPE)
    # aux starts up; P_n0 exchanges aux and site n
    up = tc.apply_number(v, n, occupied=True)
    dn = tc.apply_spin_flip(v, n, "raise")
    up, dn = thread_aux(params, params.xi[n - 1], up, dn, range(n - 1, 0, -1))
    return dn


def b_at_inhomogeneity(params: ModelParams, n: int, state: np.ndarray) -> np.ndarray:
    """B(xi_n) written as T_n times the creation part."""
    return apply_t_chain(params, n, creation_part(params, n, state))
