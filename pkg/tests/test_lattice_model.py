import numpy as np
import pytest

from bethe_sp import suite
from bethe_sp import tensor_core as tc
from bethe_sp.bethe_oracle import bethe_state, solve_bae
from bethe_sp.errors import PoleError
from bethe_sp.lattice_model import (
    A, B, C, D, monodromy_apply, transfer_apply, transfer_eigenvalue, vacuum_eigenvalue,
)
from bethe_sp.params import RATIONAL, TRIGONOMETRIC, ModelParams, b_weight, c_inverse, c_weight, weight
from bethe_sp.sampling import sample_disk

from conftest import make_params, rel


def test_weights_at_zero(variant_eta):
    variant, eta = variant_eta
    p = ModelParams(variant, eta, (0.0,))
    assert weight(p, "b", 0) == 1
    assert weight(p, "c", 0) == 0


def test_rational_weights():
    p = ModelParams(RATIONAL, 1.0, (0.0,))
    assert b_weight(p, 1.0) == 0.5 and c_weight(p, 1.0) == 0.5


def test_rational_weights_sum_to_one(rng):
    p = ModelParams(RATIONAL, 0.7 - 0.2j, (0.0,))
    for t in sample_disk(rng, 20, eta=p.eta):
        assert abs(b_weight(p, t) + c_weight(p, t) - 1) < 1e-14


def test_weight_pole_rejected():
    p = ModelParams(RATIONAL, 1.0, (0.0,))
    with pytest.raises(PoleError):
        b_weight(p, -1.0)
    with pytest.raises(PoleError):
        c_inverse(p, 0.0)


def test_pseudovacuum_actions(rng, variant_eta):
    variant, eta = variant_eta
    p = make_params(rng, 4, variant, eta)
    vac = tc.vacuum(4)
    t = sample_disk(rng, 1, avoid=p.xi, variant=variant, eta=eta)[0]
    a = np.prod([c_weight(p, x - t) for x in p.xi])
    assert rel(A(p, t, vac), a * vac) < 1e-14
    assert rel(D(p, t, vac), vac) < 1e-14
    assert not np.any(np.abs(C(p, t, vac)) > 1e-15)
    assert abs(vacuum_eigenvalue(p, t) - a) <= 1e-12 * abs(a)
    for x in p.xi:
        assert np.max(np.abs(A(p, x, vac))) < 1e-15
        assert vacuum_eigenvalue(p, x) == 0


def test_single_site_B():
    p = ModelParams(RATIONAL, 1.0, (0.3 + 0.2j,))
    t = -0.4 + 0.1j
    out = B(p, t, tc.vacuum(1))
    assert np.allclose(out, [0, b_weight(p, p.xi[0] - t)], atol=1e-15)


def test_vacuum_eigenvalue_homogeneous():
    p = ModelParams.homogeneous(2)
    assert abs(vacuum_eigenvalue(p, 0.5) - 1) < 1e-15


@pytest.mark.parametrize("entry", "ABCD")
def test_transposed_entries(rng, entry):
    p = make_params(rng, 3)
    t = 0.2 - 0.3j
    X = tc.to_matrix(lambda v: monodromy_apply(p, entry, v, t), 3)
    Xt = tc.to_matrix(lambda v: monodromy_apply(p, entry, v, t, transpose=True), 3)
    assert rel(Xt, X.T) < 1e-14


def test_empty_transfer_eigenvalue(rng):
    p = make_params(rng, 3)
    t = 0.1 + 0.9j
    assert transfer_eigenvalue(p, t, ()) == vacuum_eigenvalue(p, t) + 1


def test_bethe_vector_is_transfer_eigenstate(rng):
    p = make_params(rng, 4)
    roots = solve_bae(p, 2, seed=1)
    psi = bethe_state(p, roots)
    for t in sample_disk(rng, 5, avoid=p.xi + roots.roots):
        lam = transfer_eigenvalue(p, t, roots)
        err = np.linalg.norm(transfer_apply(p, t, psi) - lam * psi) / np.linalg.norm(psi)
        assert err < 1e-8


def test_transfer_eigenvalue_regular_at_roots(rng):
    p = make_params(rng, 4)
    roots = solve_bae(p, 2, seed=2)
    for r in roots:
        eps = 1e-6
        jump = transfer_eigenvalue(p, r + eps, roots) - transfer_eigenvalue(p, r - eps, roots)
        assert abs(jump) < 1e-4 * max(1.0, abs(transfer_eigenvalue(p, r + eps, roots)))


@pytest.mark.parametrize("variant,eta", [(RATIONAL, 1.0), (TRIGONOMETRIC, 0.5j)])
def test_rtt_and_commutation(rng, variant, eta):
    for _ in range(3):
        assert suite.rtt(rng, n=5, variant=variant, eta=eta)["defect"] < 1e-11
        out = suite.commutation(rng, n=5, variant=variant, eta=eta)
        assert out["defect"] < 1e-11, out
