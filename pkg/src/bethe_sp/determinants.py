"""
Closed forms for the rational (XXX) scalar product

    S_M({l}, {t}) = <0| C(l_1)...C(l_M) B(t_1)...B(t_M) |0>

as a sum over subsets, in the Bethe-root rewriting with sign factors, as a
single determinant (Slavnov), in the diagonal limit (Gaudin norm), together
with the residue recursion at l_1 -> t_1 and the first-column reduction used
in the direct proof of the determinant form.

Every function takes plain sequences of complex numbers; the vacuum
eigenvalue is passed as a callable so that it can be replaced by an arbitrary
function.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Optional, Sequence

import numpy as np

from .bethe_oracle import BetheRoots, ScalarProductSpec
from .errors import CapError, DimensionError, PoleError
from .params import POLE_EPS, RATIONAL, ModelParams

SUBSET_CAP = 6


@dataclass(frozen=True)
class DeterminantResult:
    value: complex
    condition_hint: float
    matrix_dim: int

    def __complex__(self):
        return complex(self.value)


@dataclass(frozen=True)
class SubsetPartition:
    """
    One term of the subset sums.

    ``chosen`` holds 0-based positions in the combined list (l_1..l_M, t_1..t_M)
    that carry the mu parameters; the rest are nu.  For the Bethe-form rewriting
    the same data is also split as t = t_k (in nu) + t_alpha (in mu) and
    l = l_n (in nu) + l_beta (in mu), each list in increasing index order.
    """

    chosen: tuple
    mu: tuple
    nu: tuple
    k: tuple
    alpha: tuple
    n: tuple
    beta: tuple
    sign_k: int
    sign_n: int

    @property
    def m(self) -> int:
        return len(self.k)


def _prod(values) -> complex:
    out = 1.0 + 0.0j
    for v in values:
        out *= v
    return out


def _guard(x: complex, what: str) -> complex:
    if abs(x) < POLE_EPS:
        raise PoleError(f"vanishing denominator in {what}")
    return x


def shuffle_sign(first: Sequence[int], second: Sequence[int]) -> int:
    """Sign of the permutation (first..., second...) of the sorted union."""
    seq = list(first) + list(second)
    inversions = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return -1 if inversions % 2 else 1


def vandermonde_t(ts) -> complex:
    """prod_{i<j} (t_i - t_j)."""
    return _prod(ts[i] - ts[j] for i in range(len(ts)) for j in range(i + 1, len(ts)))


def vandermonde_l(lams) -> complex:
    """prod_{j<i} (l_i - l_j)."""
    return _prod(lams[i] - lams[j] for i in range(len(lams)) for j in range(i))


def determinant(mat: np.ndarray) -> DeterminantResult:
    """Determinant by LU with partial pivoting (LAPACK getrf through numpy)."""
    mat = np.asarray(mat, dtype=complex)
    m = mat.shape[0]
    if m == 0:
        return DeterminantResult(1.0 + 0.0j, 1.0, 0)
    if not np.all(np.isfinite(mat)):
        raise PoleError("non-finite matrix entry")
    value = complex(np.linalg.det(mat))
    big = float(np.max(np.abs(mat))) ** m
    hint = big * m / abs(value) if value != 0 else float("inf")
    return DeterminantResult(value, hint, m)


def _check_rational(params: Optional[ModelParams]) -> None:
    if params is not None and params.variant != RATIONAL:
        raise ValueError("closed forms are implemented for the rational chain only")


# ---------------------------------------------------------------------------
# domain-wall-type determinant


def phi_m(xi_set, t_set, eta: complex) -> complex:
    """
    Phi_M(xi, t) = prod_{i,j}(t_i - xi_j) / (prod_{i<j}(t_i - t_j) prod_{j<i}(xi_i - xi_j))
                   * det[eta / ((t_i - xi_j)(t_i - xi_j + eta))].

    The prefactor prod_j (t_i - xi_j) is folded into row i before the
    determinant is taken, so coincidences t_i = xi_j are harmless.
    """
    xi = [complex(x) for x in xi_set]
    t = [complex(x) for x in t_set]
    M = len(t)
    if len(xi) != M:
        raise DimensionError("Phi_M needs sets of equal size")
    if M == 0:
        return 1.0 + 0.0j
    K = np.empty((M, M), dtype=complex)
    for i in range(M):
        for j in range(M):
            den = _guard(t[i] - xi[j] + eta, "Phi_M")
            K[i, j] = eta * _prod(t[i] - xi[k] for k in range(M) if k != j) / den
    den = _guard(vandermonde_t(t) * vandermonde_l(xi), "Phi_M Vandermonde")
    return determinant(K).value / den


def det_block(rows, cols, eta: complex) -> complex:
    """det_{ij} eta / ((r_i - c_j)(r_i - c_j + eta)); empty blocks give 1."""
    rows = list(rows)
    cols = list(cols)
    if len(rows) != len(cols):
        raise DimensionError("square blocks only")
    m = len(rows)
    if m == 0:
        return 1.0 + 0.0j
    mat = np.empty((m, m), dtype=complex)
    for i, r in enumerate(rows):
        for j, c in enumerate(cols):
            mat[i, j] = eta / (_guard(r - c, "det block") * _guard(r - c + eta, "det block"))
    return determinant(mat).value


def c_tilde(x: complex, eta: complex) -> complex:
    return x / _guard(x + eta, "c~")


def c_tilde_inv(x: complex, eta: complex) -> complex:
    return (x + eta) / _guard(x, "1/c~")


def bethe_f(ts, i: int, eta: complex) -> complex:
    """f(t_i) = prod_{a != i} (t_a - t_i - eta) / (t_a - t_i + eta)."""
    return _prod((ts[a] - ts[i] - eta) / _guard(ts[a] - ts[i] + eta, "f(t)")
                 for a in range(len(ts)) if a != i)


# ---------------------------------------------------------------------------
# subset sums


def subset_partitions(M: int):
    """All C(2M, M) partitions of the combined list (l_1..l_M, t_1..t_M)."""
    for chosen in combinations(range(2 * M), M):
        cs = set(chosen)
        k = tuple(i for i in range(M) if (M + i) not in cs)
        alpha = tuple(i for i in range(M) if (M + i) in cs)
        n = tuple(i for i in range(M) if i not in cs)
        beta = tuple(i for i in range(M) if i in cs)
        yield chosen, k, alpha, n, beta


def _partitions(lambdas, ts):
    M = len(ts)
    both = list(lambdas) + list(ts)
    for chosen, k, alpha, n, beta in subset_partitions(M):
        mu = tuple(both[c] for c in chosen)
        nu = tuple(both[c] for c in range(2 * M) if c not in chosen)
        # shift to 1-based labels only matters for the parity, which is label-free
        yield SubsetPartition(chosen, mu, nu, k, alpha, n, beta,
                              shuffle_sign(k, alpha), shuffle_sign(n, beta))


def _pairwise_sum(terms: list) -> complex:
    # fixed-shape tree reduction keeps the summation order reproducible
    while len(terms) > 1:
        nxt = [terms[i] + terms[i + 1] for i in range(0, len(terms) - 1, 2)]
        if len(terms) % 2:
            nxt.append(terms[-1])
        terms = nxt
    return terms[0] if terms else 0.0 + 0.0j


def final_term(part: SubsetPartition, lambdas, ts, eta, a_nu: Sequence[complex]) -> complex:
    """prod a(nu) Phi_M(t, mu) Phi_M(l, mu) prod_{i,j} 1/c~(mu_i - nu_j)."""
    out = _prod(a_nu) * phi_m(ts, part.mu, eta) * phi_m(lambdas, part.mu, eta)
    for x in part.mu:
        for y in part.nu:
            out *= c_tilde_inv(x - y, eta)
    return out


def _nu_weights(part: SubsetPartition, spec: ScalarProductSpec) -> list:
    M = spec.M
    out = []
    for c in range(2 * M):
        if c in part.chosen:
            continue
        out.append(spec.a(spec.lambdas[c]) if c < M else spec.a_of_t(c - M))
    return out


def scalar_product_terms(spec: ScalarProductSpec, eta: complex) -> list:
    """(partition, term) pairs of the subset sum, in partition order."""
    _check_rational(spec.params)
    lambdas, ts = spec.lambdas, spec.ts
    return [(part, final_term(part, lambdas, ts, eta, _nu_weights(part, spec)))
            for part in _partitions(lambdas, ts)]


def scalar_product_sum(spec: ScalarProductSpec, eta: complex, max_m: int = SUBSET_CAP) -> complex:
    """
    S_M as the sum over all C(2M, M) choices of mu among (l, t) of

        prod_j a(nu_j) Phi_M(t, mu) Phi_M(l, mu) prod_{i,j} 1/c~(mu_i - nu_j).

    a(nu) comes from ``spec``: its a-function (or the model's vacuum eigenvalue)
    for lambda's, and ``spec.t_weights`` when given for the t's.
    """
    if spec.M > max_m:
        raise CapError(f"subset sum limited to M <= {max_m}")
    if spec.M == 0:
        return 1.0 + 0.0j
    return complex(_pairwise_sum([term for _, term in scalar_product_terms(spec, eta)]))


def bethe_form_term(part: SubsetPartition, lambdas, ts, eta, a_function) -> complex:
    """One signed term of the Bethe-form rewriting, without the global Vandermonde factor."""
    M = len(ts)
    tk = [ts[i] for i in part.k]
    ta = [ts[i] for i in part.alpha]
    ln = [lambdas[i] for i in part.n]
    lb = [lambdas[i] for i in part.beta]
    m = len(tk)
    out = complex(part.sign_k * part.sign_n * (-1) ** (M * m))
    out *= _prod(a_function(x) for x in ln)
    out *= _prod(t - x + eta for x in ln for t in ts)
    out *= _prod(t - x - eta for x in lb for t in ts)
    out *= det_block(lb, tk, eta) * det_block(ta, ln, eta)
    for x in tk:
        for y in ta:
            out *= x - y + eta
        for z in ln:
            out /= _guard(x - z + eta, "Bethe form")
    for x in lb:
        for z in ln:
            out *= x - z + eta
        for y in ta:
            out /= _guard(x - y + eta, "Bethe form")
    return out


def _root_values(roots) -> tuple:
    return tuple(complex(r) for r in getattr(roots, "roots", roots))


def _model_a(roots, a_function):
    if a_function is not None:
        return a_function
    params = getattr(roots, "params", None)
    if params is None:
        raise ValueError("pass a_function or a BetheRoots carrying model parameters")
    _check_rational(params)
    from .lattice_model import vacuum_eigenvalue

    return lambda x: vacuum_eigenvalue(params, x)


def scalar_product_bethe_sum(lambdas, roots, eta: complex, a_function=None,
                             max_m: int = SUBSET_CAP) -> complex:
    """
    S_M when the t's solve the Bethe equations (a(t_i) replaced by f(t_i)):

        1/(prod_{i<j}(t_i - t_j) prod_{j<i}(l_i - l_j))
        * sum_{k,n} (-1)^{P_k} (-1)^{P_n} (-1)^{Mm} prod a(l_n)
          prod(t - l_n + eta) prod(t - l_beta - eta) det(l_beta; t_k) det(t_alpha; l_n)
          prod (t_k - t_alpha + eta)/(t_k - l_n + eta) prod (l_beta - l_n + eta)/(l_beta - t_alpha + eta)

    with (-1)^{P_k} the sign of the shuffle (k_1..k_m, alpha_1..alpha_p) and
    (-1)^{P_n} that of (n_1..n_p, beta_1..beta_m).
    """
    lambdas = tuple(complex(x) for x in lambdas)
    ts = _root_values(roots)
    M = len(ts)
    if len(lambdas) != M:
        raise DimensionError("lambda and root sets must have equal size")
    if M > max_m:
        raise CapError(f"subset sum limited to M <= {max_m}")
    if M == 0:
        return 1.0 + 0.0j
    a = _model_a(roots, a_function)
    terms = [bethe_form_term(part, lambdas, ts, eta, a) for part in _partitions(lambdas, ts)]
    den = _guard(vandermonde_t(ts) * vandermonde_l(lambdas), "Vandermonde")
    return complex(_pairwise_sum(terms)) / den


def dropped_products_sum(lambdas, ts, eta: complex, a_function) -> complex:
    """
    The Bethe-form sum with its last two products removed.

    This is the expansion of the Slavnov determinant over columns taken from
    either of its two matrices.
    """
    lambdas = tuple(complex(x) for x in lambdas)
    ts = tuple(complex(x) for x in ts)
    M = len(ts)
    terms = []
    for part in _partitions(lambdas, ts):
        tk = [ts[i] for i in part.k]
        ta = [ts[i] for i in part.alpha]
        ln = [lambdas[i] for i in part.n]
        lb = [lambdas[i] for i in part.beta]
        term = complex(part.sign_k * part.sign_n * (-1) ** (M * part.m))
        term *= _prod(a_function(x) for x in ln)
        term *= _prod(t - x + eta for x in ln for t in ts)
        term *= _prod(t - x - eta for x in lb for t in ts)
        term *= det_block(lb, tk, eta) * det_block(ta, ln, eta)
        terms.append(term)
    den = _guard(vandermonde_t(ts) * vandermonde_l(lambdas), "Vandermonde")
    return complex(_pairwise_sum(terms)) / den


# ---------------------------------------------------------------------------
# determinant forms


def slavnov_matrix(lambdas, ts, eta: complex, a_function) -> np.ndarray:
    """
    M_ij = eta/(t_i - l_j) (a(l_j) prod_{a != i}(t_a - l_j + eta) - prod_{a != i}(t_a - l_j - eta)).
    """
    M = len(ts)
    mat = np.empty((M, M), dtype=complex)
    for j, lam in enumerate(lambdas):
        aj = a_function(lam)
        for i, ti in enumerate(ts):
            plus = _prod(ts[a] - lam + eta for a in range(M) if a != i)
            minus = _prod(ts[a] - lam - eta for a in range(M) if a != i)
            mat[i, j] = eta / _guard(ti - lam, "Slavnov entry") * (aj * plus - minus)
    return mat


def slavnov_determinant(lambdas, roots, eta: complex, a_function=None) -> DeterminantResult:
    """
    S_M = det M / (prod_{i<j}(t_i - t_j) prod_{j<i}(l_i - l_j)) for a Bethe root set t.

    ``a_function`` defaults to the vacuum eigenvalue of the model carried by ``roots``.
    The condition hint is the Hadamard bound of det M divided by |det M|.
    """
    lambdas = tuple(complex(x) for x in lambdas)
    ts = _root_values(roots)
    M = len(ts)
    if len(lambdas) != M:
        raise DimensionError("lambda and root sets must have equal size")
    if M == 0:
        return DeterminantResult(1.0 + 0.0j, 1.0, 0)
    a = _model_a(roots, a_function)
    mat = slavnov_matrix(lambdas, ts, eta, a)
    det = determinant(mat)
    den = _guard(vandermonde_t(ts) * vandermonde_l(lambdas), "Vandermonde")
    hadamard = float(np.prod(np.linalg.norm(mat, axis=0)))
    hint = hadamard / abs(det.value) if det.value != 0 else float("inf")
    return DeterminantResult(det.value / den, hint, M)


def slavnov_scale(lambdas, roots, eta: complex, a_function=None) -> float:
    """Hadamard bound prod_j ||M_{:,j}|| / |Vandermonde|: the natural size of S_M."""
    lambdas = tuple(complex(x) for x in lambdas)
    ts = _root_values(roots)
    if not ts:
        return 1.0
    mat = slavnov_matrix(lambdas, ts, eta, _model_a(roots, a_function))
    den = abs(vandermonde_t(ts) * vandermonde_l(lambdas))
    return float(np.prod(np.linalg.norm(mat, axis=0))) / den


def gaudin_matrix(roots, eta: complex) -> np.ndarray:
    """
    The l -> t limit of the Slavnov matrix at a Bethe root set.

    With P_j = prod_{a != j}(t_a - t_j - eta):

        off-diagonal  M_ij = 2 eta^2 P_j / ((t_i - t_j)^2 - eta^2)
        diagonal      M_jj = -eta P_j [ sum_a (1/(xi_a - t_j + eta) - 1/(xi_a - t_j))
                                       + sum_{a != j} (1/(t_a - t_j - eta) - 1/(t_a - t_j + eta)) ]

    The diagonal is -eta times the derivative of the bracket of M_jj at l_j = t_j,
    using a'/a = sum_a (1/(xi_a - l + eta) - 1/(xi_a - l)).
    """
    params = roots.params
    _check_rational(params)
    ts = _root_values(roots)
    xi = params.xi
    M = len(ts)
    mat = np.empty((M, M), dtype=complex)
    for j in range(M):
        tj = ts[j]
        pj = _prod(ts[a] - tj - eta for a in range(M) if a != j)
        for i in range(M):
            if i != j:
                d = ts[i] - tj
                mat[i, j] = 2 * eta ** 2 * pj / _guard(d * d - eta * eta, "Gaudin entry")
        log_a = sum(1 / _guard(x - tj + eta, "a'/a") - 1 / _guard(x - tj, "a'/a") for x in xi)
        log_f = sum(1 / _guard(ts[a] - tj - eta, "Gaudin") - 1 / _guard(ts[a] - tj + eta, "Gaudin")
                    for a in range(M) if a != j)
        mat[j, j] = -eta * pj * (log_a + log_f)
    return mat


def gaudin_norm(roots: BetheRoots, eta: complex | None = None) -> complex:
    """<0|C(t_1)...C(t_M) B(t_1)...B(t_M)|0> for a Bethe root set, in closed form."""
    ts = _root_values(roots)
    if not ts:
        return 1.0 + 0.0j
    eta = roots.params.eta if eta is None else eta
    for i in range(len(ts)):
        for j in range(i):
            if abs(ts[i] - ts[j]) < 1e-6:
                raise PoleError("near-degenerate roots")
    mat = gaudin_matrix(roots, eta)
    den = _guard(vandermonde_t(ts) * vandermonde_l(ts), "Vandermonde")
    return determinant(mat).value / den


def gaudin_jacobian(roots: BetheRoots, eta: complex | None = None, h: float = 1e-6) -> np.ndarray:
    """
    Central-difference Jacobian d/dt_i of log(a(t_j)/f(t_j)).

    Only a diagnostic: the Gaudin matrix divided column-wise by -eta P_j has the
    same diagonal as this Jacobian.
    """
    params = roots.params
    eta = params.eta if eta is None else eta
    ts = np.array(_root_values(roots))
    from .lattice_model import vacuum_eigenvalue

    def g(vals):
        return np.array([np.log(vacuum_eigenvalue(params, vals[j]) / bethe_f(vals, j, eta))
                         for j in range(len(vals))])

    M = len(ts)
    jac = np.empty((M, M), dtype=complex)
    for i in range(M):
        up, dn = ts.copy(), ts.copy()
        up[i] += h
        dn[i] -= h
        jac[i] = (g(up) - g(dn)) / (2 * h)
    return jac


# ---------------------------------------------------------------------------
# residue recursion


def residue_recursion_rhs(spec: ScalarProductSpec, roots, eta: complex, delta_max: float = 1e-4,
                          check_distance: bool = True) -> complex:
    """
    Pole part of S_M at l_1 -> t_1:

        eta (a(l_1) - f(t_1))/(t_1 - l_1) prod_{a != 1} 1/c~(t_a - t_1) 1/c~(l_a - t_1)
        * S_{M-1}({l}', {t}', a')

    with a'(v) = a(v) c~(v - t_1)/c~(t_1 - v) and f recomputed without t_1.
    S_{M-1} is evaluated by :func:`scalar_product_sum`.  ``roots`` supplies the
    t's (they enter through f only, so any distinct set is accepted); a(l) comes
    from ``spec``.
    """
    ts = _root_values(roots)
    lambdas = spec.lambdas
    M = len(ts)
    if M == 0 or len(lambdas) != M:
        raise DimensionError("need M >= 1 and equal sizes")
    t1, l1 = ts[0], lambdas[0]
    if check_distance and abs(l1 - t1) > delta_max:
        raise ValueError(f"|l_1 - t_1| = {abs(l1 - t1):.2e} exceeds {delta_max:.1e}")
    f1 = bethe_f(ts, 0, eta)
    out = eta * (spec.a(l1) - f1) / _guard(t1 - l1, "recursion")
    for a in range(1, M):
        out *= c_tilde_inv(ts[a] - t1, eta) * c_tilde_inv(lambdas[a] - t1, eta)
    if M == 1:
        return out
    ts_rest = ts[1:]
    lam_rest = lambdas[1:]

    def a_prime(v):
        return spec.a(v) * c_tilde(v - t1, eta) * c_tilde_inv(t1 - v, eta)

    sub = ScalarProductSpec(lam_rest, ts_rest, a_function=a_prime,
                            t_weights=tuple(bethe_f(ts_rest, i, eta) for i in range(M - 1)))
    return out * scalar_product_sum(sub, eta)


def pole_coefficient(fun: Callable[[float], complex], deltas=(1e-3, 1e-4, 1e-5)) -> complex:
    """
    Coefficient R of R/delta in fun(delta) = R/delta + c0 + c1 delta + ...

    Fits delta*fun(delta) = R + c0 delta + c1 delta^2 through the given deltas
    (Richardson-style elimination of the regular part).
    """
    d = np.asarray(deltas, dtype=float)
    y = np.array([di * fun(di) for di in d], dtype=complex)
    vander = np.vander(d, len(d), increasing=True)
    return complex(np.linalg.solve(vander, y)[0])


# ---------------------------------------------------------------------------
# first-column reduction


def cauchy_like(i: int, j: int, lambdas, ts, eta) -> complex:
    """M_ij = 1/((t_i - l_j)(t_i - l_j + eta))."""
    d = ts[i] - lambdas[j]
    return 1.0 / (_guard(d, "column reduction") * _guard(d + eta, "column reduction"))


def column_coefficients(lambdas, ts, eta) -> list:
    """
    C_x = - prod_{b != 1,x} (l_1 - l_b)/(l_x - l_b) prod_a (l_x - t_a - eta)/(l_1 - t_a - eta)

    for x = 2..M (0-based positions 1..M-1); position 0 holds 0.
    """
    M = len(lambdas)
    out = [0.0 + 0.0j]
    for x in range(1, M):
        cx = -1.0 + 0.0j
        for b in range(1, M):
            if b != x:
                cx *= (lambdas[0] - lambdas[b]) / _guard(lambdas[x] - lambdas[b], "C_x")
        for ta in ts:
            cx *= (lambdas[x] - ta - eta) / _guard(lambdas[0] - ta - eta, "C_x")
        out.append(cx)
    return out


def column_reduction_direct(i: int, lambdas, ts, eta) -> complex:
    """M_i1 + sum_{x != 1} C_x M_ix, summed term by term (0-based row i)."""
    lambdas = [complex(x) for x in lambdas]
    ts = [complex(x) for x in ts]
    coeffs = column_coefficients(lambdas, ts, eta)
    out = cauchy_like(i, 0, lambdas, ts, eta)
    for x in range(1, len(lambdas)):
        out += coeffs[x] * cauchy_like(i, x, lambdas, ts, eta)
    return out


def column_reduction_entry(i: int, lambdas, ts, eta) -> complex:
    """
    Closed form of the reduced first column (0-based row i):

        1/((t_i - l_1)(t_i - l_1 + eta)) prod_{b != 1} (l_1 - l_b)/(t_i - l_b)
        * prod_{a != i} (t_a - t_i + eta)/(t_a - l_1 + eta)
    """
    lambdas = [complex(x) for x in lambdas]
    ts = [complex(x) for x in ts]
    M = len(ts)
    if len(lambdas) != M:
        raise DimensionError("sets of equal size expected")
    out = cauchy_like(i, 0, lambdas, ts, eta)
    for b in range(1, M):
        out *= (lambdas[0] - lambdas[b]) / _guard(ts[i] - lambdas[b], "column reduction")
    for a in range(M):
        if a != i:
            out *= (ts[a] - ts[i] + eta) / _guard(ts[a] - lambdas[0] + eta, "column reduction")
    return out


def reduced_matrix(lambdas, ts, eta, closed_form: bool = True) -> np.ndarray:
    """The Cauchy-like matrix with its first column replaced by the reduced one."""
    M = len(ts)
    mat = np.array([[cauchy_like(i, j, lambdas, ts, eta) for j in range(M)] for i in range(M)])
    col = column_reduction_entry if closed_form else column_reduction_direct
    mat[:, 0] = [col(i, lambdas, ts, eta) for i in range(M)]
    return mat


def contour_residues(i: int, lambdas, ts, eta) -> list:
    """
    Residues of F(z) = g(z) / ((z - l_1)(z - t_i) prod_{b != 1}(z - l_b)),
    g(z) = prod_{a != i} (t_a - z + eta)/(t_a - l_1 + eta), at all its poles.

    F decays like 1/z^2, so the residues sum to zero.
    """
    lambdas = [complex(x) for x in lambdas]
    ts = [complex(x) for x in ts]
    M = len(ts)

    def g(z):
        return _prod((ts[a] - z + eta) / (ts[a] - lambdas[0] + eta) for a in range(M) if a != i)

    poles = list(lambdas) + [ts[i]]
    out = []
    for p_idx, p in enumerate(poles):
        den = _prod(p - q for q_idx, q in enumerate(poles) if q_idx != p_idx)
        out.append(g(p) / _guard(den, "residue"))
    return out
