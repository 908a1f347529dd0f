import json

import numpy as np
import pytest

import tdsplit


def test_heat_builder_structure():
    m = tdsplit.build_heat([3], alpha=1.0)
    A = m.A.toarray()
    assert np.array_equal(A, 9.0 * np.array([[-1, 1, 0], [1, -2, 1], [0, 1, -1]]))
    f = tdsplit.validate_model(m)
    assert f["symmetric_residual"] == 0.0
    assert f["symmetry"] == "symmetric"
    unit = tdsplit.build_heat([3], alpha=1.0, scaling="unit")
    assert np.array_equal(unit.C.toarray(), np.eye(3))


def test_wave_builder_is_skew():
    m = tdsplit.build_wave([4, 4], rho=0.0)
    A = m.A.toarray()
    assert np.array_equal(A, -A.T)
    assert m.state_dim == 16 + 12 + 12


def test_partition():
    p = tdsplit.make_partition(1.0, 5, 2)
    assert p.steps == [3, 2]
    with pytest.raises(ValueError):
        tdsplit.make_partition(1.0, 3, 4)


def test_scalar_direct_solve_matches_least_squares():
    one = np.ones((1, 1))
    from scipy import sparse

    m = tdsplit.make_model(sparse.csc_matrix((1, 1)), sparse.csc_matrix(one), sparse.csc_matrix(one),
                           1.0, np.ones(1))
    d = tdsplit.direct_solve(m, 1.0, 2)
    # x1 = 1 + u0/2, x2 = x1 + u1/2, cost 0.5 (x1^2 + x2^2 + u0^2 + u1^2)
    tau = 0.5
    F = np.array([[tau, 0], [tau, tau], [1, 0], [0, 1]]) * np.sqrt(tau)
    f = np.array([1, 1, 0, 0]) * np.sqrt(tau)
    u = np.linalg.lstsq(F, -f, rcond=None)[0]
    assert np.allclose(d["u"][0], u, atol=1e-12)


def test_pr_solve_converges_on_wave():
    m = tdsplit.build_wave([6, 6], rho=0.0, setting=1, alpha=0.1)
    r = tdsplit.pr_solve(m, T=5.0, L=21, K=5, mu=10.0)
    assert r["converged"]
    assert r["block_factorizations"] == 3
    assert r["history"]["err_control"][-1] < 1e-6
    assert np.allclose(r["u"], r["baseline"]["u"], atol=1e-5)


def test_checks():
    m = tdsplit.build_heat([8], alpha=0.125)
    assert tdsplit.dissipation_check(m, 1.0, 8, 4, samples=10)["passed"]
    assert tdsplit.skew_check(1.0, 8, 4, m.state_dim)["residual"] == 0.0


def test_run_config(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({
        "model": {"type": "heat", "cells": [8]},
        "ocp": {"alpha": 0.125, "x0": "zeros"},
        "discretization": {"L": 8, "K": 2},
    }))
    code, log = tdsplit.run_config(cfg, tmp_path / "out")
    assert code == 0
    assert (tmp_path / "out" / "history.csv").exists()
