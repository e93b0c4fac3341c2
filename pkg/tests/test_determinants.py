import numpy as np
import pytest

from bethe_sp import suite
from bethe_sp import tensor_core as tc
from bethe_sp.bethe_oracle import (
    ScalarProductSpec, apply_b_string, brute_force_scalar_product, solve_bae,
)
from bethe_sp.determinants import (
    _nu_weights, _partitions, bethe_f, bethe_form_term, column_reduction_direct,
    column_reduction_entry, contour_residues, determinant, dropped_products_sum, final_term,
    gaudin_norm,
    phi_m, pole_coefficient, residue_recursion_rhs, scalar_product_bethe_sum, scalar_product_sum,
    shuffle_sign, slavnov_determinant, subset_partitions, vandermonde_l, vandermonde_t,
)
from bethe_sp.errors import CapError
from bethe_sp.lattice_model import vacuum_eigenvalue
from bethe_sp.params import ModelParams
from bethe_sp.sampling import sample_disk

from conftest import make_params

ETA = 1.0


def relerr(x, ref):
    return abs(x - ref) / abs(ref)


@pytest.fixture
def bethe(rng):
    p = make_params(rng, 6)
    return p, solve_bae(p, 2, seed=11)


def test_determinant_basics():
    assert determinant(np.zeros((0, 0))).value == 1
    m = np.array([[2, 1j], [3, 4]])
    res = determinant(m)
    assert abs(res.value - (8 - 3j)) < 1e-14
    assert res.matrix_dim == 2 and res.condition_hint >= 1


def test_shuffle_sign():
    assert shuffle_sign((0, 2), (1,)) == -1
    assert shuffle_sign((0, 1), (2,)) == 1
    assert shuffle_sign((), (0, 1, 2)) == 1
    assert shuffle_sign((2,), (0, 1)) == 1


def test_partition_count():
    assert sum(1 for _ in subset_partitions(3)) == 20


def test_phi_single():
    assert abs(phi_m((0.0,), (1.0,), 1.0) - 0.5) < 1e-15


def test_phi_symmetric_in_t(rng):
    xi = sample_disk(rng, 3)
    t = sample_disk(rng, 3, avoid=xi)
    ref = phi_m(xi, t, ETA)
    assert relerr(phi_m(xi, (t[2], t[0], t[1]), ETA), ref) < 1e-11
    assert relerr(phi_m(xi, (t[1], t[0], t[2]), ETA), ref) < 1e-11


def test_phi_regular_at_coincidence(rng):
    xi = sample_disk(rng, 2)
    t = (xi[0], sample_disk(rng, 1, avoid=xi)[0])
    assert np.isfinite(phi_m(xi, t, ETA))
    near = (xi[0] + 1e-9, t[1])
    assert abs(phi_m(xi, t, ETA) - phi_m(xi, near, ETA)) < 1e-7


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_phi_matches_saturated_string(rng, m):
    for _ in range(5):
        xi = sample_disk(rng, m)
        mu = sample_disk(rng, m, avoid=xi)
        p = ModelParams("rational", ETA, xi)
        oracle = apply_b_string(p, mu, tc.vacuum(m))[-1]
        assert relerr(phi_m(xi, mu, -ETA), oracle) < 1e-9


def test_empty_scalar_product():
    assert scalar_product_sum(ScalarProductSpec((), (), ModelParams.homogeneous(2)), ETA) == 1


@pytest.mark.parametrize("m", [1, 2, 3])
def test_subset_sum_matches_brute_force(rng, m):
    p = make_params(rng, 6)
    lam = sample_disk(rng, m, avoid=p.xi)
    ts = sample_disk(rng, m, avoid=p.xi + lam)
    spec = ScalarProductSpec(lam, ts, p)
    assert relerr(scalar_product_sum(spec, ETA), brute_force_scalar_product(spec)) < 1e-9


def test_subset_cap(rng):
    p = make_params(rng, 2)
    spec = ScalarProductSpec((0.1, 0.2), (0.3, 0.4), p)
    with pytest.raises(CapError):
        scalar_product_sum(spec, ETA, max_m=1)


def test_bethe_forms_agree(rng, bethe):
    p, roots = bethe
    lam = sample_disk(rng, 2, avoid=p.xi + roots.roots)
    ref = scalar_product_sum(ScalarProductSpec(lam, roots.roots, p), ETA)
    assert relerr(scalar_product_bethe_sum(lam, roots, ETA), ref) < 1e-9
    assert relerr(slavnov_determinant(lam, roots, ETA).value, ref) < 1e-9


def test_dropped_products_is_slavnov(rng, bethe):
    p, roots = bethe
    lam = sample_disk(rng, 2, avoid=p.xi + roots.roots)
    a = lambda x: vacuum_eigenvalue(p, x)  # noqa: E731
    assert relerr(dropped_products_sum(lam, roots.roots, ETA, a),
                  slavnov_determinant(lam, roots, ETA).value) < 1e-10


def test_signed_terms_match_subset_terms(rng):
    p = make_params(rng, 6)
    roots = solve_bae(p, 3, seed=1)
    ts = roots.roots
    lam = sample_disk(rng, 3, avoid=p.xi + ts)
    weights = tuple(bethe_f(ts, i, ETA) for i in range(3))
    spec = ScalarProductSpec(lam, ts, p, t_weights=weights)
    a = lambda x: vacuum_eigenvalue(p, x)  # noqa: E731
    den = vandermonde_t(ts) * vandermonde_l(lam)
    for part in _partitions(lam, ts):
        ref = final_term(part, lam, ts, ETA, _nu_weights(part, spec))
        got = bethe_form_term(part, lam, ts, ETA, a) / den
        assert abs(got - ref) <= 1e-10 * max(abs(ref), 1e-300)


def test_top_a_coefficient(rng, bethe):
    # both forms are polynomials of degree M in a uniform rescaling of a(l)
    p, roots = bethe
    lam = sample_disk(rng, 2, avoid=p.xi + roots.roots)
    scales = np.array([0.5, 1.0, 2.0])
    cols = []
    for fn in (scalar_product_bethe_sum, lambda l, r, e, a: slavnov_determinant(l, r, e, a).value):
        vals = [fn(lam, roots, ETA, lambda x, s=s: s * vacuum_eigenvalue(p, x)) for s in scales]
        cols.append(np.polyfit(scales, vals, 2))
    assert relerr(cols[0][0], cols[1][0]) < 1e-9


def test_slavnov_homogeneous_pair(rng):
    p = ModelParams.homogeneous(2)
    roots = solve_bae(p, 1)
    for lam in sample_disk(rng, 10, avoid=(0.0, 0.5)):
        ref = brute_force_scalar_product(ScalarProductSpec((lam,), roots.roots, p))
        assert relerr(slavnov_determinant((lam,), roots, ETA).value, ref) < 1e-7


@pytest.mark.parametrize("n,m", [(4, 1), (4, 2), (6, 2)])
def test_slavnov_matches_brute_force(rng, n, m):
    out = suite.slavnov_check(rng, n=n, m=m)
    assert out["slavnov"] < 1e-7 and out["bethe_sum"] < 1e-8


def test_gaudin(rng):
    p = make_params(rng, 4)
    roots = solve_bae(p, 2, seed=4)
    bf = brute_force_scalar_product(ScalarProductSpec(roots.roots, roots.roots, p))
    assert relerr(gaudin_norm(roots, ETA), bf) < 1e-7
    assert gaudin_norm(solve_bae(p, 0)) == 1


def test_gaudin_is_first_order_limit(rng):
    p = make_params(rng, 4)
    roots = solve_bae(p, 2, seed=4)
    norm = gaudin_norm(roots)
    delta = np.array([0.6 + 0.2j, -0.3 + 0.7j])
    errs = [relerr(slavnov_determinant(tuple(np.array(roots.roots) + e * delta), roots, ETA).value, norm)
            for e in (1e-4, 1e-5)]
    # error is linear in the offset
    assert 5 < errs[0] / errs[1] < 20


def test_orthogonality(rng):
    assert suite.orthogonality_check(rng, n=6, m=2)["defect"] < 1e-8


def test_residue_single_magnon():
    ts = (0.3 + 0.4j,)
    lam = (ts[0] + 1e-5,)
    a = lambda x: (x * x + 2) / (x * x + 3)  # noqa: E731
    spec = ScalarProductSpec(lam, ts, a_function=a)
    expect = ETA * (a(lam[0]) - 1) / (ts[0] - lam[0])
    assert abs(residue_recursion_rhs(spec, ts, ETA) - expect) < 1e-12 * abs(expect)


@pytest.mark.parametrize("m", [2, 3])
def test_residue_coefficients(rng, m):
    assert suite.residue_check(rng, m=m)["defect"] < 1e-6


def test_pole_subtraction_is_bounded(rng):
    m = 2
    a = suite.sample_a_function
    ts = sample_disk(rng, m)
    lam = list(sample_disk(rng, m, avoid=ts))

    def diff(d):
        ll = [ts[0] + d] + lam[1:]
        s = slavnov_determinant(ll, ts, ETA, a).value
        r = residue_recursion_rhs(ScalarProductSpec(ll, ts, a_function=a), ts, ETA, delta_max=1e-2)
        return s, r

    values = [diff(d) for d in (1e-3, 1e-4, 1e-5)]
    gaps = [abs(s - r) for s, r in values]
    sizes = [abs(s) for s, _ in values]
    assert sizes[2] > 50 * sizes[0]
    assert max(gaps) < 10 * min(gaps) + 1e-8


def test_pole_coefficient_fit():
    f = lambda d: 3.0 / d + 2.0 - 5.0 * d  # noqa: E731
    assert abs(pole_coefficient(f) - 3.0) < 1e-9


def test_no_pole_at_equal_lambdas(rng):
    p = make_params(rng, 4)
    lam2 = sample_disk(rng, 1, avoid=p.xi)[0]
    ts = sample_disk(rng, 2, avoid=p.xi + (lam2,))
    d = 1e-4

    def s(x):
        return scalar_product_sum(ScalarProductSpec((x, lam2), ts, p), ETA)

    second = s(lam2 + 3 * d) - 2 * s(lam2 + 2 * d) + s(lam2 + d)
    assert abs(second) < 1e-5 * abs(s(lam2 + d))


def test_large_lambda_decay(rng):
    p = make_params(rng, 4)
    ts = sample_disk(rng, 2, avoid=p.xi)
    l2 = sample_disk(rng, 1, avoid=p.xi + ts)[0]
    ray = np.exp(0.7j)
    vals = [abs(scalar_product_sum(ScalarProductSpec((r * ray, l2), ts, p), ETA)) for r in (1e3, 1e4)]
    slope = np.log10(vals[1] / vals[0])
    assert abs(slope + 1) < 0.05


@pytest.mark.parametrize("m", [3, 4, 5])
def test_column_reduction(rng, m):
    for _ in range(10):
        lam = sample_disk(rng, m)
        ts = sample_disk(rng, m, avoid=lam)
        for i in range(m):
            direct = column_reduction_direct(i, lam, ts, ETA)
            assert abs(column_reduction_entry(i, lam, ts, ETA) - direct) <= 1e-11 * abs(direct)
            res = contour_residues(i, lam, ts, ETA)
            assert abs(sum(res)) < 1e-11 * max(abs(x) for x in res)


def test_column_reduction_check(rng):
    assert suite.column_reduction_check(rng, m=4)["defect"] < 1


def test_arbitrary_a(rng):
    out = suite.arbitrary_a_check(rng, n=6, m=2)
    assert out["defect"] < 1e-9
