"""
Individual verification checks.

Each check draws its inputs from the generator it is handed and returns a
dict with a scalar ``defect`` and the computed values behind it.  Defects are
relative (normalized by the size of the quantities compared) unless noted.
"""

from __future__ import annotations

import numpy as np

from . import tensor_core as tc
from .errors import ConvergenceError
from .bethe_oracle import (
    ScalarProductSpec,
    apply_b_string,
    brute_force_scalar_product,
    check_eigenstate,
    solve_bae,
)
from .determinants import (
    bethe_f,
    column_reduction_direct,
    column_reduction_entry,
    contour_residues,
    cauchy_like,
    gaudin_norm,
    phi_m,
    pole_coefficient,
    reduced_matrix,
    residue_recursion_rhs,
    scalar_product_bethe_sum,
    scalar_product_sum,
    slavnov_determinant,
    slavnov_scale,
)
from .factorizing import (
    apply_factorizing,
    check_factorization,
    f_basis_operator,
    f_table,
    o_tilde_matrix,
    phi_state_b_string,
)
from .lattice_model import A, B, C, ENTRIES, monodromy_apply
from .params import RATIONAL, ModelParams, b_weight, c_inverse, c_weight
from .sampling import random_params, random_state, sample_disk


def _rel(diff, ref) -> float:
    ref = float(np.max(np.abs(ref))) if np.size(ref) else 0.0
    return float(np.max(np.abs(diff))) / (ref if ref > 0 else 1.0)


def relerr(x: complex, ref: complex) -> float:
    return abs(x - ref) / abs(ref) if ref != 0 else abs(x)


def _model(rng, n, variant, eta, xi=None) -> ModelParams:
    if xi is None:
        return random_params(rng, n, variant, eta)
    if len(xi) != n:
        raise ValueError(f"{len(xi)} inhomogeneities given for {n} sites")
    return ModelParams(variant, eta, tuple(xi))


# ---------------------------------------------------------------------------
# S-matrix level


def yang_baxter(rng, variant=RATIONAL, eta=1.0, **_):
    """Yang-Baxter on three sites and unitarity on two, random parameters and state."""
    params = ModelParams(variant, eta, (0.0, 0.0, 0.0))
    t1, t2, t3 = sample_disk(rng, 3, variant=variant, eta=eta)
    v = random_state(rng, 3)
    S = tc.apply_two_site_S
    lhs = S(S(S(v, 2, 3, t2, t3, params), 1, 3, t1, t3, params), 1, 2, t1, t2, params)
    rhs = S(S(S(v, 1, 2, t1, t2, params), 1, 3, t1, t3, params), 2, 3, t2, t3, params)
    yb = _rel(lhs - rhs, lhs)
    w = random_state(rng, 2)
    p2 = ModelParams(variant, eta, (0.0, 0.0))
    back = S(S(w, 2, 1, t2, t1, p2), 1, 2, t1, t2, p2)
    unit = _rel(back - w, w)
    return {"defect": max(yb, unit), "yang_baxter": yb, "unitarity": unit}


def rtt(rng, n=4, variant=RATIONAL, eta=1.0, xi=None, **_):
    """
    R T_0(t) T_0'(q) = T_0'(q) T_0(t) R with R = S_{0'0}(q, t), checked on all
    sixteen auxiliary matrix elements.
    """
    params = _model(rng, n, variant, eta, xi)
    t, q = sample_disk(rng, 2, avoid=params.xi, variant=variant, eta=eta)
    v = random_state(rng, n)
    b, c = b_weight(params, q - t), c_weight(params, q - t)
    R = np.zeros((4, 4), dtype=complex)  # index 2*s0 + s0'
    R[0, 0] = R[3, 3] = 1.0
    R[2, 2] = R[1, 1] = c
    R[1, 2] = R[2, 1] = b
    label = {(a, b_): name for name, (a, b_) in ENTRIES.items()}

    def T(out, inp, x, w):
        return monodromy_apply(params, label[(inp, out)], w, x)

    pairs = [(0, 0), (0, 1), (1, 0), (1, 1)]
    worst = 0.0
    for bb in pairs:
        for aa in pairs:
            lhs = sum(R[2 * bb[0] + bb[1], 2 * g[0] + g[1]] * T(g[0], aa[0], t, T(g[1], aa[1], q, v))
                      for g in pairs)
            rhs = sum(R[2 * g[0] + g[1], 2 * aa[0] + aa[1]] * T(bb[1], g[1], q, T(bb[0], g[0], t, v))
                      for g in pairs)
            worst = max(worst, _rel(lhs - rhs, np.concatenate([lhs, v])))
    return {"defect": worst}


def commutation(rng, n=4, variant=RATIONAL, eta=1.0, xi=None, **_):
    """A(t)B(q) exchange relation, [B, B] = [C, C] = 0, and C(xi_n)B(xi_n)|0>."""
    params = _model(rng, n, variant, eta, xi)
    t, q = sample_disk(rng, 2, avoid=params.xi, variant=variant, eta=eta)
    v = random_state(rng, n)
    lhs = A(params, t, B(params, q, v))
    rhs = (c_inverse(params, q - t) * B(params, q, A(params, t, v))
           - b_weight(params, q - t) * c_inverse(params, q - t) * B(params, t, A(params, q, v)))
    ab = _rel(lhs - rhs, lhs)
    bb = _rel(B(params, t, B(params, q, v)) - B(params, q, B(params, t, v)), B(params, t, B(params, q, v)))
    cc = _rel(C(params, t, C(params, q, v)) - C(params, q, C(params, t, v)), C(params, t, C(params, q, v)))
    vac = tc.vacuum(n)
    cb = 0.0
    for k in range(1, n + 1):
        x = params.xi[k - 1]
        expect = np.prod([c_weight(params, params.xi[a] - x) for a in range(n) if a != k - 1])
        got = C(params, x, B(params, x, vac))
        cb = max(cb, _rel(got - expect * vac, expect * vac))
    return {"defect": max(ab, bb, cc, cb), "ab": ab, "bb": bb, "cc": cc, "cb_vacuum": cb}


# ---------------------------------------------------------------------------
# factorizing operator


def factorizing(rng, n=4, variant=RATIONAL, eta=1.0, xi=None, **_):
    """
    Matrix elements of O against B-strings, O~ O = f, O^{-1} A(t) O diagonal
    and the transposition property; dense for N <= 8.
    """
    params = _model(rng, n, variant, eta, xi)
    dim = 1 << n
    O = tc.to_matrix(lambda w: apply_factorizing(params, w, "O"), n)
    Ob = np.column_stack([phi_state_b_string(params, tc.bits_to_occupation(b)) for b in range(dim)])
    me = _rel(O - Ob, Ob)
    F = o_tilde_matrix(params) @ O
    f = f_table(params)
    fd = _rel(F - np.diag(f), f)
    t = sample_disk(rng, 1, avoid=params.xi, variant=variant, eta=eta)[0]
    Oinv = tc.to_matrix(lambda w: apply_factorizing(params, w, "O_inverse"), n)
    AF = Oinv @ tc.to_matrix(lambda w: A(params, t, w), n) @ O
    occ = tc.site_occupations(n)
    expect = np.array([np.prod([c_weight(params, params.xi[a] - t) for a in range(n) if not occ[b, a]])
                       for b in range(dim)])
    ad = _rel(AF - np.diag(expect), expect)
    fact = max(check_factorization(params, i, n_states=2, seed=int(rng.integers(1 << 31)))
               for i in range(1, n))
    return {"defect": max(me / 1e-11, fd / 1e-11, ad / 1e-10, fact / 1e-11),
            "matrix_elements": me, "f_diagonal": fd, "a_diagonal": ad, "transposition": fact}


def f_basis(rng, n=5, variant=RATIONAL, eta=1.0, n_states=4, xi=None, **_):
    """O^{-1} X(t) O = X^F(t) for X = B, C, and prod B^F(xi_n)|0> = |{n}>."""
    params = _model(rng, n, variant, eta, xi)
    t = sample_disk(rng, 1, avoid=params.xi, variant=variant, eta=eta)[0]
    worst = {"B": 0.0, "C": 0.0}
    for _ in range(n_states):
        v = random_state(rng, n)
        Ov = apply_factorizing(params, v, "O")
        for kind, op in (("B", B), ("C", C)):
            lhs = apply_factorizing(params, op(params, t, Ov), "O_inverse")
            rhs = f_basis_operator(params, kind, t)(v)
            worst[kind] = max(worst[kind], _rel(lhs - rhs, rhs))
    basis = 0.0
    for bits in range(1 << n):
        w = tc.vacuum(n)
        for k in reversed(tc.bits_to_occupation(bits)):
            w = f_basis_operator(params, "B", params.xi[k - 1])(w)
        basis = max(basis, float(np.max(np.abs(w - tc.basis_state(n, bits)))))
    return {"defect": max(worst["B"] / 1e-10, worst["C"] / 1e-10, basis / 1e-11),
            "b_conjugation": worst["B"], "c_conjugation": worst["C"], "basis_creation": basis}


# ---------------------------------------------------------------------------
# closed forms


def phi_m_check(rng, m=2, eta=1.0, **_):
    """Phi_M against the saturated matrix element on an M-site chain."""
    xi = sample_disk(rng, m, eta=eta)
    mu = sample_disk(rng, m, avoid=xi, eta=eta)
    params = ModelParams(RATIONAL, eta, xi)
    oracle = complex(apply_b_string(params, mu, tc.vacuum(m))[-1])
    # the direct B-string convention corresponds to eta -> -eta in Phi_M(xi, mu)
    value = phi_m(xi, mu, -eta)
    return {"defect": relerr(value, oracle), "phi_m": value, "oracle": oracle}


def scalar_sum_check(rng, n=4, m=2, eta=1.0, xi=None, **_):
    params = _model(rng, n, RATIONAL, eta, xi)
    lam = sample_disk(rng, m, avoid=params.xi, eta=eta)
    ts = sample_disk(rng, m, avoid=params.xi + lam, eta=eta)
    spec = ScalarProductSpec(lam, ts, params)
    bf = brute_force_scalar_product(spec)
    value = scalar_product_sum(spec, eta)
    return {"defect": relerr(value, bf), "subset_sum": value, "brute_force": bf}


def _bethe_model(rng, n, m, eta, xi=None):
    for _ in range(1 if xi is not None else 20):
        params = _model(rng, n, RATIONAL, eta, xi)
        try:
            return params, solve_bae(params, m, seed=int(rng.integers(1 << 31)))
        except ConvergenceError:
            continue
    raise ConvergenceError(f"no Bethe roots for N={n}, M={m}")


def slavnov_check(rng, n=4, m=2, eta=1.0, roots=None, params=None, xi=None, **_):
    """
    Slavnov determinant and the Bethe-form sum against brute force at Bethe roots.

    Both defects are relative, except when the Bethe vector itself vanishes
    (more magnons than half the chain); then they are measured against the
    Hadamard scale of the determinant.
    """
    if roots is None:
        params, roots = _bethe_model(rng, n, m, eta, xi)
    lam = sample_disk(rng, m, avoid=params.xi + roots.roots, eta=eta)
    bf = brute_force_scalar_product(ScalarProductSpec(lam, roots.roots, params))
    sl = slavnov_determinant(lam, roots, eta).value
    dd = scalar_product_bethe_sum(lam, roots, eta)
    scale = slavnov_scale(lam, roots, eta)
    psi_norm = float(np.linalg.norm(apply_b_string(params, roots.roots, tc.vacuum(params.n_sites))))
    null = psi_norm < 1e-8
    ref = scale if null else abs(bf)
    d_sl = abs(sl - bf) / ref
    d_dd = max(abs(dd - bf), abs(dd - sl)) / ref
    eig = max(check_eigenstate(params, roots, z) for z in sample_disk(rng, 3, avoid=params.xi + roots.roots))\
        if not null else 0.0
    return {"defect": max(d_sl / 1e-7, d_dd / 1e-8), "slavnov": d_sl, "bethe_sum": d_dd,
            "residual": roots.residual, "eigen_defect": eig, "null_vector": null,
            "values": {"brute_force": bf, "slavnov": sl, "bethe_sum": dd}}


def gaudin_check(rng, n=4, m=2, eta=1.0, xi=None, **_):
    params, roots = _bethe_model(rng, n, m, eta, xi)
    norm = gaudin_norm(roots, eta)
    bf = brute_force_scalar_product(ScalarProductSpec(roots.roots, roots.roots, params))
    delta = rng.normal(size=m) + 1j * rng.normal(size=m)
    delta /= np.linalg.norm(delta)
    near = tuple(np.array(roots.roots) + 1e-5 * delta)
    sl = slavnov_determinant(near, roots, eta).value
    d_bf, d_lim = relerr(norm, bf), relerr(norm, sl)
    return {"defect": max(d_bf / 1e-7, d_lim / 1e-3), "vs_brute_force": d_bf, "vs_limit": d_lim,
            "values": {"gaudin": norm, "brute_force": bf, "slavnov_near": sl}}


def orthogonality_check(rng, n=6, m=2, eta=1.0, xi=None, **_):
    """Two different Bethe root sets: the scalar product vanishes."""
    params, r1 = _bethe_model(rng, n, m, eta, xi)
    r2 = None
    for _ in range(50):
        cand = solve_bae(params, m, seed=int(rng.integers(1 << 31)))
        gap = min(abs(x - y) for x in cand.roots for y in r1.roots)
        if gap > 1e-3:
            r2 = cand
            break
    if r2 is None:
        raise ConvergenceError("only one Bethe root set found")
    scale = slavnov_scale(r2.roots, r1, eta)
    bf = brute_force_scalar_product(ScalarProductSpec(r2.roots, r1.roots, params))
    sl = slavnov_determinant(r2.roots, r1, eta).value
    return {"defect": max(abs(bf), abs(sl)) / scale, "brute_force": bf, "slavnov": sl, "scale": scale}


def sample_a_function(x):
    return (x * x + 2) / (x * x + 3)


def residue_check(rng, m=2, eta=1.0, a_function=sample_a_function, **_):
    """1/delta coefficients of the Slavnov form and the recursion at l_1 = t_1 + delta."""
    poles = (1j * np.sqrt(2), -1j * np.sqrt(2), 1j * np.sqrt(3), -1j * np.sqrt(3))
    ts = sample_disk(rng, m, avoid=poles, eta=eta)
    lam = list(sample_disk(rng, m, avoid=poles + ts, eta=eta))

    def shifted(d):
        return [ts[0] + d] + lam[1:]

    def sl(d):
        return slavnov_determinant(shifted(d), ts, eta, a_function).value

    def rec(d):
        spec = ScalarProductSpec(shifted(d), ts, a_function=a_function)
        return residue_recursion_rhs(spec, ts, eta, delta_max=1e-2)

    r_sl, r_rec = pole_coefficient(sl), pole_coefficient(rec)
    return {"defect": relerr(r_rec, r_sl), "slavnov_residue": r_sl, "recursion_residue": r_rec}


def column_reduction_check(rng, m=3, eta=1.0, **_):
    lam = sample_disk(rng, m, eta=eta)
    ts = sample_disk(rng, m, avoid=lam, eta=eta)
    closed = np.array([column_reduction_entry(i, lam, ts, eta) for i in range(m)])
    direct = np.array([column_reduction_direct(i, lam, ts, eta) for i in range(m)])
    col = _rel(closed - direct, direct)
    orig = np.array([[cauchy_like(i, j, lam, ts, eta) for j in range(m)] for i in range(m)])
    d0 = np.linalg.det(orig)
    inv = relerr(np.linalg.det(reduced_matrix(lam, ts, eta)), d0)
    res = max(abs(sum(r)) / max(abs(x) for x in r)
              for r in (contour_residues(i, lam, ts, eta) for i in range(m)))
    return {"defect": max(col / 1e-11, inv / 1e-10, res / 1e-11), "column": col, "determinant": inv,
            "residue_sum": res}


def arbitrary_a_check(rng, n=6, m=2, eta=1.0, a_function=sample_a_function, xi=None, **_):
    """Subset sum with an arbitrary a(l) and f(t_i) at Bethe roots versus the determinant."""
    params, roots = _bethe_model(rng, n, m, eta, xi)
    poles = (1j * np.sqrt(2), -1j * np.sqrt(2), 1j * np.sqrt(3), -1j * np.sqrt(3))
    lam = sample_disk(rng, m, avoid=roots.roots + poles, eta=eta)
    weights = tuple(bethe_f(roots.roots, i, eta) for i in range(m))
    spec = ScalarProductSpec(lam, roots.roots, a_function=a_function, t_weights=weights)
    s = scalar_product_sum(spec, eta)
    d = slavnov_determinant(lam, roots, eta, a_function).value
    return {"defect": relerr(s, d), "subset_sum": s, "slavnov": d}
