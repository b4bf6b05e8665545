import numpy as np
import pytest

from ckylab import (build_family, cky_residual, extract_associated_vector,
                    levi_civita, solve_form_space, structural_identity_report,
                    symmetrized_residual, zero_form)
from ckylab.cky import (KINDS, assemble_cky_system, assemble_system,
                        normalize_kind)
from ckylab.forms import endo_of_form, form_from_terms, skew_matrix_of_form
from ckylab.numerics import max_principal_angle_sin, nullspace


def test_kind_normalization():
    assert normalize_kind("star_ky") == "star-ky"
    assert normalize_kind("STAR-KY") == "star-ky"
    assert normalize_kind("*ky") == "star-ky"
    assert normalize_kind("ky") == "ky"
    with pytest.raises(ValueError):
        normalize_kind("killing")


def test_assemble_system_degree_bounds():
    alg = build_family("grs", {"r": 1, "s": 1}).algebra
    with pytest.raises(ValueError):
        assemble_system(alg, 0, "cky")
    with pytest.raises(ValueError):
        assemble_system(alg, 5, "cky")
    A = assemble_system(alg, 2, "cky")
    assert A.shape[1] == 10


def test_symmetrized_formulation_restricted_to_two_forms():
    alg = build_family("grs", {"r": 1, "s": 1}).algebra
    with pytest.raises(ValueError):
        assemble_cky_system(alg, 3, formulation="symmetrized")
    with pytest.raises(ValueError):
        assemble_cky_system(alg, 2, formulation="nonsense")


def test_formulation_equivalence_on_reference_instance():
    alg = build_family("g7_delta", {"t": 1, "c": 1, "delta": 1}).algebra
    A = assemble_cky_system(alg, 2, formulation="general")
    B = assemble_cky_system(alg, 2, formulation="symmetrized")
    na, _, _ = nullspace(A, 1e-10)
    nb, _, _ = nullspace(B, 1e-10)
    assert na.shape[1] == nb.shape[1] == 1
    assert max_principal_angle_sin(na, nb) < 1e-8


def test_solution_space_kinds_nested():
    alg = build_family("g3", {"t": 1, "a1": 1, "a2": 2}).algebra
    spaces = {k: solve_form_space(alg, 2, k) for k in KINDS}
    assert spaces["cky"].dimension == 1
    assert spaces["ky"].dimension == 0
    assert spaces["star-ky"].dimension == 1
    assert spaces["parallel"].dimension == 0
    # solutions satisfy their defining equations
    for kind, sp in spaces.items():
        for form in sp.forms():
            assert cky_residual(alg, form, kind) < 1e-9


def test_solution_space_contains_and_match():
    inst = build_family("h5", {"a1": 1, "a2": 2})
    sp = solve_form_space(inst.algebra, 2, "cky")
    assert sp.dimension == 1
    assert sp.contains(inst.reference_form)
    assert sp.match_residual(inst.reference_form) < 1e-12
    off = form_from_terms(5, 2, {(0, 2): 1.0})
    assert not sp.contains(off)


def test_cky_residual_scaling_invariance():
    inst = build_family("grs", {"r": 1, "s": 2})
    w = inst.reference_form
    r1 = cky_residual(inst.algebra, w, "cky")
    r2 = cky_residual(inst.algebra, 1000.0 * w, "cky")
    assert r1 < 1e-12
    assert r2 == pytest.approx(r1, abs=1e-12)  # relative residual
    absolute = cky_residual(inst.algebra, w, "cky", relative=False)
    assert absolute < 1e-12


def test_symmetrized_residual_agrees_on_solutions():
    inst = build_family("L59", {"r": 2})
    T = endo_of_form(inst.algebra, inst.reference_form)
    assert symmetrized_residual(inst.algebra, T) < 1e-12
    bad = form_from_terms(5, 2, {(0, 1): 1.0, (3, 4): 1.0})
    T_bad = endo_of_form(inst.algebra, bad)
    assert symmetrized_residual(inst.algebra, T_bad) > 1e-3


def test_classification_on_strict_instance():
    inst = build_family("grs", {"r": 1, "s": 2})
    cls = extract_associated_vector(inst.algebra, inst.reference_form)
    assert cls.is_strict
    assert not cls.closed
    assert not cls.coclosed
    assert not cls.parallel
    assert not cls.xi_in_center
    assert cls.xi_perp_center
    assert cls.t_xi_max < 1e-12
    assert cls.rank_xi_perp == 4
    assert cls.derived_pairing > 1e-6
    # T annihilates xi
    T = cls.endo
    assert np.max(np.abs(T @ cls.xi)) < 1e-12 * max(1.0, np.max(np.abs(T)))


def test_classification_on_closed_instance():
    inst = build_family("g2", {"t": 1, "a1": 1, "a2": 2})
    cls = extract_associated_vector(inst.algebra, inst.reference_form)
    assert cls.is_strict
    assert cls.closed
    assert cls.xi_in_center


def test_classification_of_zero_form_is_non_strict():
    alg = build_family("abelian", {}).algebra
    cls = extract_associated_vector(alg, zero_form(5, 2))
    assert not cls.is_strict
    assert cls.parallel
    assert cls.xi_norm == 0.0


def test_classification_rejects_non_solutions():
    alg = build_family("grs", {"r": 1, "s": 1}).algebra
    junk = form_from_terms(5, 2, {(0, 1): 1.0, (2, 4): 3.0})
    with pytest.raises(ValueError):
        extract_associated_vector(alg, junk)


def test_identity_report_on_reference_tensor():
    inst = build_family("grs", {"r": 1, "s": 1})
    rep = structural_identity_report(inst.algebra, inst.reference_form)
    assert rep.strict
    assert rep.dim_center == 2
    assert rep.max_residual < 1e-12
    assert rep.passed(1e-9)
    assert all(rep.flags.values())
    expected_keys = {"center_pairing", "center_orthogonal", "center_diagonal",
                     "mixed_sym", "mixed_skew", "xi_perp_first",
                     "xi_perp_second", "xi_t_xi", "ky_on_complement"}
    assert expected_keys <= set(rep.residuals)


def test_identity_report_accepts_endo_and_explicit_xi():
    inst = build_family("L59", {"r": 1})
    alg = inst.algebra
    cls = extract_associated_vector(alg, inst.reference_form)
    T = cls.endo / cls.xi_norm
    xi = cls.xi / cls.xi_norm
    rep = structural_identity_report(alg, T, xi=xi)
    assert rep.flags["xi_unit"]
    assert rep.max_residual < 1e-12


def test_identity_report_detects_perturbation():
    inst = build_family("grs", {"r": 1, "s": 2})
    T = skew_matrix_of_form(inst.reference_form)
    T[0, 3] += 1e-3
    T[3, 0] -= 1e-3
    rep = structural_identity_report(inst.algebra, T)
    assert rep.max_residual > 1e-4


def test_identity_report_requires_center():
    alg = build_family("g3", {"t": 1, "a1": 1, "a2": 2}).algebra  # 1-dim center
    with pytest.raises(ValueError):
        structural_identity_report(alg, build_family(
            "g3", {"t": 1, "a1": 1, "a2": 2}).reference_form)


def test_solver_canonical_basis_is_deterministic():
    alg = build_family("abelian", {}).algebra
    a = solve_form_space(alg, 2, "cky").basis
    b = solve_form_space(alg, 2, "cky").basis
    np.testing.assert_array_equal(a, b)
    assert a.shape == (10, 10)
