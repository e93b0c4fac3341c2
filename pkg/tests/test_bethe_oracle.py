import numpy as np
import pytest

from bethe_sp import tensor_core as tc
from bethe_sp.bethe_oracle import (
    BetheRoots, ScalarProductSpec, apply_b_string, bae_defects, bethe_state,
    brute_force_scalar_product, check_eigenstate, solve_bae, string_pairing,
)
from bethe_sp.errors import CapError, ConvergenceError, DimensionError
from bethe_sp.factorizing import diagonal_f
from bethe_sp.params import ModelParams, b_weight
from bethe_sp.sampling import random_state, sample_disk

from conftest import make_params, rel


def test_empty_string(rng):
    p = make_params(rng, 3)
    v = random_state(rng, 3)
    assert np.array_equal(apply_b_string(p, (), v), v)
    assert brute_force_scalar_product(ScalarProductSpec((), (), p)) == 1


def test_b_string_order_independent(rng):
    p = make_params(rng, 5)
    ts = sample_disk(rng, 3, avoid=p.xi)
    v = tc.vacuum(5)
    assert rel(apply_b_string(p, ts, v), apply_b_string(p, ts[::-1], v)) < 1e-11


def test_single_site_scalar_product():
    p = ModelParams("rational", 1.0, (0.2 - 0.1j,))
    lam, t = 0.7 + 0.3j, -0.5j
    ref = b_weight(p, p.xi[0] - lam) * b_weight(p, p.xi[0] - t)
    got = brute_force_scalar_product(ScalarProductSpec((lam,), (t,), p))
    assert abs(got - ref) < 1e-15


def test_inhomogeneity_sets_give_f(rng):
    p = make_params(rng, 5)
    for occ in [(1,), (2, 4), (1, 3, 5)]:
        x = tuple(p.xi[k - 1] for k in occ)
        got = brute_force_scalar_product(ScalarProductSpec(x, x, p))
        assert abs(got - diagonal_f(p, occ)) < 1e-11 * max(1, abs(got))


def test_symmetry_in_each_set(rng):
    p = make_params(rng, 6)
    lam = sample_disk(rng, 3, avoid=p.xi)
    ts = sample_disk(rng, 3, avoid=p.xi + lam)
    ref = brute_force_scalar_product(ScalarProductSpec(lam, ts, p))
    for perm in [(1, 0, 2), (2, 1, 0)]:
        pl = tuple(lam[i] for i in perm)
        pt = tuple(ts[i] for i in perm)
        assert abs(brute_force_scalar_product(ScalarProductSpec(pl, ts, p)) - ref) < 1e-11 * abs(ref)
        assert abs(brute_force_scalar_product(ScalarProductSpec(lam, pt, p)) - ref) < 1e-11 * abs(ref)


def test_sector_selection_is_exact(rng):
    p = make_params(rng, 5)
    lam = sample_disk(rng, 2, avoid=p.xi)
    ts = sample_disk(rng, 3, avoid=p.xi + lam)
    assert string_pairing(p, lam, ts) == 0
    assert string_pairing(p, ts, lam) == 0


def test_spec_validation(rng):
    with pytest.raises(DimensionError):
        ScalarProductSpec((0.1,), (0.2, 0.3))
    with pytest.raises(CapError):
        brute_force_scalar_product(ScalarProductSpec((0.1,), (0.2,), ModelParams.homogeneous(4)), cap=3)


def test_homogeneous_two_site_root():
    p = ModelParams.homogeneous(2)
    roots = solve_bae(p, 1)
    assert abs(roots[0] - 0.5) < 1e-12
    assert check_eigenstate(p, roots, 0.3 + 0.2j) < 1e-8


def test_no_roots():
    p = ModelParams.homogeneous(3)
    roots = solve_bae(p, 0)
    assert roots.M == 0 and roots.residual == 0
    assert check_eigenstate(p, roots, 0.7 - 0.1j) == 0


@pytest.mark.parametrize("n,m", [(4, 1), (4, 2), (6, 2), (6, 3)])
def test_solved_roots_are_eigenstates(rng, n, m):
    p = make_params(rng, n)
    roots = solve_bae(p, m, seed=n + m)
    assert roots.residual < 1e-10
    assert np.max(np.abs(bae_defects(p, roots))) < 1e-10
    for t in sample_disk(rng, 5, avoid=p.xi + roots.roots):
        assert check_eigenstate(p, roots, t) < 1e-8


def test_perturbed_roots_detected(rng):
    p = make_params(rng, 4)
    roots = solve_bae(p, 2, seed=3)
    shifted = (roots[0] + 0.1,) + roots.roots[1:]
    probes = sample_disk(rng, 5, avoid=p.xi + roots.roots + shifted)
    assert max(check_eigenstate(p, shifted, t) for t in probes) > 1e-3


def test_roots_are_distinct(rng):
    p = make_params(rng, 6)
    roots = solve_bae(p, 3, seed=0)
    gaps = [abs(a - b) for i, a in enumerate(roots) for b in roots.roots[i + 1:]]
    assert min(gaps) > 1e-6


def test_too_many_magnons():
    with pytest.raises(ValueError):
        solve_bae(ModelParams.homogeneous(2), 3)


def test_null_vectors_rejected():
    # N=2, M=2 on a homogeneous chain has no nonvanishing Bethe vector
    with pytest.raises(ConvergenceError):
        solve_bae(ModelParams.homogeneous(2), 2, n_starts=10)


def test_bethe_state_matches_roots_type(rng):
    p = make_params(rng, 3)
    roots = solve_bae(p, 1, seed=5)
    assert isinstance(roots, BetheRoots)
    assert np.array_equal(bethe_state(p, roots), bethe_state(p, roots.roots))
