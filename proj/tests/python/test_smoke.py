import math
from pathlib import Path

import numpy as np
import pytest

import adcons

CONFIGS = Path(__file__).resolve().parents[2] / "configs"

A = np.array([[-0.5, 0.1], [0.0, -20.0]])
B = np.array([[0.0], [1.0]])
C = np.array([[0.0, 0.0], [0.0, 6.5]])


def test_solve_sare_matches_known_root():
    sol = adcons.solve_sare(A, B, C)
    assert sol["residual"] <= 1e-8
    assert np.allclose(sol["P"], [[0.99998131, 0.00432322], [0.00432322, 2.63048651]], atol=1e-7)
    assert np.allclose(sol["Gamma"], sol["K"].T @ sol["K"])


def test_printed_matrix_is_not_a_root():
    P = np.array([[1.0, 0.0047], [0.0047, 0.9046]])
    assert adcons.sare_residual(A, B, C, P) == pytest.approx(2.218, rel=1e-3)


def test_unstabilizable_raises():
    with pytest.raises(adcons.AdconsError):
        adcons.solve_sare(np.eye(1), np.zeros((1, 1)), np.zeros((1, 1)))


def test_graph_helpers():
    chain = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0]], dtype=float)
    L = adcons.build_laplacian(chain)
    assert np.allclose(L.sum(axis=1), 0.0)
    assert adcons.has_spanning_tree(chain)
    d = adcons.decompose(chain)
    assert d["leaders"] == [0]
    assert d["followers"] == [1, 2]
    assert np.allclose(d["s"], [2.0, 1.0])
    split = np.zeros((3, 3))
    assert not adcons.has_spanning_tree(split)


def test_load_config_and_small_run(tmp_path):
    cfg = adcons.load_config(CONFIGS / "directed_mu_one.json")
    assert cfg["graph"]["N"] == 6
    res = adcons.run(str(CONFIGS / "directed_mu_one.json"), threads=2)
    assert res["exit_code"] == 0
    assert res["paths"] == 100
    assert res["theta_ms"][-1] <= 1e-3 * res["theta_ms"][0]
    assert math.isfinite(res["time_to_threshold"])
