"""
Dense complex state vectors over the 2^N spin-1/2 basis.

Basis encoding: site k (1-based) is stored in bit k-1 of the basis index, and a
set bit means spin up (a "particle").  The pseudovacuum is index 0.

All operators here are applied matrix-free.  A state of N sites is reshaped into
an N-dimensional (2, 2, ..., 2) array; with C ordering the axis holding site k
is ``N - k``.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError, SiteError
from .params import b_weight, c_weight

DTYPE = np.complex128
DENSE_CAP = 8


def n_sites_of(state: np.ndarray) -> int:
    size = state.shape[0]
    n = size.bit_length() - 1
    if size < 1 or (1 << n) != size:
        raise DimensionError(f"state length {size} is not a power of two")
    return n


def _check(state: np.ndarray, n: int | None = None) -> int:
    if state.ndim != 1:
        raise DimensionError("states are one-dimensional arrays")
    m = n_sites_of(state)
    if n is not None and m != n:
        raise DimensionError(f"state has {m} sites, expected {n}")
    return m


def _check_site(k: int, n: int) -> None:
    if not 1 <= k <= n:
        raise SiteError(f"site {k} outside 1..{n}")


def _axis(k: int, n: int) -> int:
    return n - k


def zeros(n: int) -> np.ndarray:
    return np.zeros(1 << n, dtype=DTYPE)


def basis_state(n: int, bits: int) -> np.ndarray:
    v = zeros(n)
    v[bits] = 1.0
    return v


def vacuum(n: int) -> np.ndarray:
    return basis_state(n, 0)


def occupation_to_bits(sites) -> int:
    """Bitmask for a collection of occupied (1-based) sites."""
    bits = 0
    for k in sites:
        bits |= 1 << (k - 1)
    return bits


def bits_to_occupation(bits: int) -> tuple[int, ...]:
    """Sorted 1-based occupied sites of a bitmask."""
    out = []
    k = 1
    while bits:
        if bits & 1:
            out.append(k)
        bits >>= 1
        k += 1
    return tuple(out)


def popcounts(n: int) -> np.ndarray:
    idx = np.arange(1 << n)
    counts = np.zeros(1 << n, dtype=np.int64)
    for b in range(n):
        counts += (idx >> b) & 1
    return counts


def sector(n: int, m: int) -> np.ndarray:
    """Basis indices with exactly m particles, in increasing order."""
    return np.flatnonzero(popcounts(n) == m)


def inner_product(bra: np.ndarray, ket: np.ndarray) -> complex:
    """Bilinear pairing sum_k bra_k ket_k.  No complex conjugation."""
    if bra.shape != ket.shape:
        raise DimensionError(f"shape mismatch {bra.shape} vs {ket.shape}")
    return complex(np.dot(bra, ket))


def apply_mixer(state: np.ndarray, i: int, j: int, b: complex, c: complex) -> np.ndarray:
    """
    Apply the particle-conserving 4x4 block

        |00> -> |00>,  |11> -> |11>,
        |10> -> c|10> + b|01>,  |01> -> c|01> + b|10>

    on sites (i, j).  The block is symmetric in i and j.
    """
    n = _check(state)
    _check_site(i, n)
    _check_site(j, n)
    if i == j:
        raise SiteError("two-site operator needs distinct sites")
    psi = state.reshape((2,) * n).copy()
    ai, aj = _axis(i, n), _axis(j, n)
    s10 = [slice(None)] * n
    s01 = [slice(None)] * n
    s10[ai], s10[aj] = 1, 0
    s01[ai], s01[aj] = 0, 1
    s10, s01 = tuple(s10), tuple(s01)
    x10 = psi[s10].copy()
    x01 = psi[s01].copy()
    psi[s10] = c * x10 + b * x01
    psi[s01] = c * x01 + b * x10
    return psi.reshape(-1)


def apply_permutation(state: np.ndarray, i: int, j: int) -> np.ndarray:
    """Exchange the spins of sites i and j."""
    if i == j:
        return state.copy()
    return apply_mixer(state, i, j, 1.0, 0.0)


def permute_sites(state: np.ndarray, perm) -> np.ndarray:
    """
    Relabel sites: the spin found on site k is moved to site perm[k-1].

    ``perm`` is a sequence of 1-based targets of length N.
    """
    n = _check(state)
    if sorted(perm) != list(range(1, n + 1)):
        raise SiteError(f"{perm} is not a permutation of 1..{n}")
    psi = state.reshape((2,) * n)
    # new axis for site perm[k-1] gets the old axis of site k
    src = [0] * n
    for k, target in enumerate(perm, start=1):
        src[_axis(target, n)] = _axis(k, n)
    return np.transpose(psi, src).reshape(-1).copy()


def apply_spin_flip(state: np.ndarray, x: int, direction: str) -> np.ndarray:
    """Apply sigma^+ ("raise") or sigma^- ("lower") on site x."""
    n = _check(state)
    _check_site(x, n)
    psi = state.reshape((2,) * n)
    out = np.zeros_like(psi)
    ax = _axis(x, n)
    lo = [slice(None)] * n
    hi = [slice(None)] * n
    lo[ax], hi[ax] = 0, 1
    lo, hi = tuple(lo), tuple(hi)
    if direction == "raise":
        out[hi] = psi[lo]
    elif direction == "lower":
        out[lo] = psi[hi]
    else:
        raise ValueError(f"direction must be 'raise' or 'lower', got {direction!r}")
    return out.reshape(-1)


def apply_number(state: np.ndarray, x: int, occupied: bool = True) -> np.ndarray:
    """Project on site x being occupied (n_x) or empty (1 - n_x)."""
    n = _check(state)
    _check_site(x, n)
    psi = state.reshape((2,) * n).copy()
    sl = [slice(None)] * n
    sl[_axis(x, n)] = 0 if occupied else 1
    psi[tuple(sl)] = 0.0
    return psi.reshape(-1)


def site_occupations(n: int) -> np.ndarray:
    """(2^N, N) boolean table; column k-1 tells whether site k is up."""
    idx = np.arange(1 << n)[:, None]
    return ((idx >> np.arange(n)[None, :]) & 1).astype(bool)


def to_matrix(op, n: int, cap: int = DENSE_CAP) -> np.ndarray:
    """Materialize a linear map on N sites column by column (N <= cap only)."""
    if n > cap:
        raise DimensionError(f"dense materialization limited to N <= {cap}")
    dim = 1 << n
    mat = np.empty((dim, dim), dtype=DTYPE)
    for col in range(dim):
        mat[:, col] = op(basis_state(n, col))
    return mat


def apply_two_site_S(state: np.ndarray, i: int, j: int, t1: complex, t2: complex, params) -> np.ndarray:
    """
    S_ij(t1, t2) with normalization a = 1: the block (b~(t), c~(t)), t = t1 - t2.

    At t1 = t2 this is the permutation of sites i and j.
    """
    _check(state, params.n_sites)
    t = t1 - t2
    return apply_mixer(state, i, j, b_weight(params, t), c_weight(params, t))
