import numpy as np
import pytest

from ckylab import (MetricLieAlgebra, ToleranceConfig, ad_matrix,
                    algebra_from_dict, algebra_to_dict, bracket,
                    build_structure, center, derived_algebra, is_unimodular,
                    jacobi_residual)


def heisenberg3() -> MetricLieAlgebra:
    c = build_structure(3, {(0, 1): {2: 1.0}})
    return MetricLieAlgebra(c, np.eye(3), basis_labels=("x", "y", "z"))


def test_build_structure_antisymmetry():
    c = build_structure(3, {(0, 1): {2: 2.0}})
    assert c[0, 1, 2] == 2.0
    assert c[1, 0, 2] == -2.0
    assert np.all(c[2] == 0.0)


def test_constructor_rejects_bad_input():
    c = build_structure(3, {(0, 1): {2: 1.0}})
    c_bad = c.copy()
    c_bad[1, 0, 2] = 1.0  # breaks antisymmetry
    with pytest.raises(ValueError):
        MetricLieAlgebra(c_bad, np.eye(3))
    with pytest.raises(ValueError):
        MetricLieAlgebra(c, np.diag([1.0, 1.0, -1.0]))  # not positive definite
    G_asym = np.eye(3)
    G_asym[0, 1] = 0.3
    with pytest.raises(ValueError):
        MetricLieAlgebra(c, G_asym)
    with pytest.raises(ValueError):
        MetricLieAlgebra(c, np.eye(4))  # shape mismatch


def test_bracket_and_ad():
    alg = heisenberg3()
    x, y = np.eye(3)[0], np.eye(3)[1]
    np.testing.assert_allclose(bracket(alg, x, y), [0.0, 0.0, 1.0])
    np.testing.assert_allclose(ad_matrix(alg, x) @ y, bracket(alg, x, y))


def test_jacobi_residual_flags_non_lie_tables():
    alg = heisenberg3()
    assert jacobi_residual(alg) == 0.0
    # [e0,e1]=e1, [e0,e2]=e2, [e1,e2]=e0 fails Jacobi on (e0,e1,e2)
    c = build_structure(3, {(0, 1): {1: 1.0}, (0, 2): {2: 1.0}, (1, 2): {0: 1.0}})
    bad = MetricLieAlgebra(c, np.eye(3))
    assert jacobi_residual(bad) > 0.5


def test_center_and_derived():
    alg = heisenberg3()
    z = center(alg)
    d = derived_algebra(alg)
    assert z.dimension == 1
    assert d.dimension == 1
    assert z.contains(np.array([0.0, 0.0, 1.0]))
    assert not z.contains(np.array([1.0, 0.0, 0.0]))
    assert d.contains(np.array([0.0, 0.0, 2.0]))


def test_unimodular_flag():
    assert is_unimodular(heisenberg3())
    # aff(R): [e0,e1] = e1 has tr ad(e0) = 1
    c = build_structure(2, {(0, 1): {1: 1.0}})
    assert not is_unimodular(MetricLieAlgebra(c, np.eye(2)))


def test_metric_helpers():
    G = np.array([[2.0, 0.5], [0.5, 1.0]])
    alg = MetricLieAlgebra(build_structure(2, {}), G)
    u, v = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    assert alg.inner(u, v) == pytest.approx(0.5)
    assert alg.norm(u) == pytest.approx(np.sqrt(2.0))
    np.testing.assert_allclose(alg.frame.T @ G @ alg.frame, np.eye(2), atol=1e-14)
    np.testing.assert_allclose(alg.gram_inv @ G, np.eye(2), atol=1e-14)


def test_label_lookup():
    alg = heisenberg3()
    assert alg.label_index("y") == 1
    np.testing.assert_allclose(alg.basis_vector(2), [0.0, 0.0, 1.0])
    with pytest.raises(KeyError):
        alg.label_index("w")


def test_dict_round_trip():
    alg = heisenberg3()
    data = algebra_to_dict(alg)
    back = algebra_from_dict(data)
    np.testing.assert_allclose(back.structure, alg.structure)
    np.testing.assert_allclose(back.gram, alg.gram)
    assert back.basis_labels == alg.basis_labels


def test_dict_fills_antisymmetric_side():
    data = {
        "dim": 3,
        "brackets": [{"i": 0, "j": 1, "coeffs": {"2": 1.0}}],
        "metric": np.eye(3).tolist(),
    }
    alg = algebra_from_dict(data)
    assert alg.structure[1, 0, 2] == -1.0


def test_dict_rejects_inconsistent_duplicates():
    data = {
        "dim": 2,
        "brackets": [
            {"i": 0, "j": 1, "coeffs": {"1": 1.0}},
            {"i": 1, "j": 0, "coeffs": {"1": 1.0}},  # should be -1.0
        ],
        "metric": np.eye(2).tolist(),
    }
    with pytest.raises(ValueError):
        algebra_from_dict(data)


def test_tolerance_config(monkeypatch):
    base = ToleranceConfig()
    assert base.residual == 1e-9
    tweaked = base.replace(residual=1e-6)
    assert tweaked.residual == 1e-6
    assert base.residual == 1e-9  # frozen

    monkeypatch.setenv("CKYLAB_TOL", "1e-7")
    assert ToleranceConfig.from_env().residual == 1e-7
    monkeypatch.setenv("CKYLAB_TOL", "not-a-float")
    with pytest.raises(ValueError):
        ToleranceConfig.from_env()
    monkeypatch.delenv("CKYLAB_TOL")
    assert ToleranceConfig.from_env().residual == 1e-9
