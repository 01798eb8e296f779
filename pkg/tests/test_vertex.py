import pytest

from mosva.factory import build_heisenberg, matrix_units_mosva
from mosva.graded import GradedSpace, Vec
from mosva.vertex import (ALGEBRA, LEFT, ModuleInstance, VertexMap, mode_apply,
                          validate_instance, vertex_series)


def test_mode_apply_role_mismatch():
    alg, fock = build_heisenberg(level=1, cutoff=3)
    other = GradedSpace({0: ["x"]}, 0)
    stray = Vec(other, {"x": 1})
    with pytest.raises(ValueError, match="space"):
        mode_apply(alg.Y, stray, -1, alg.basis_vec("vac"))
    with pytest.raises(ValueError, match="space"):
        mode_apply(alg.Y, alg.basis_vec("vac"), -1, stray)


def test_mode_apply_bilinear():
    alg, _ = build_heisenberg(level=1, cutoff=4)
    a = alg.basis_vec("a1")
    two_a = a.scale(2)
    lhs, _ = mode_apply(alg.Y, two_a, 1, a.scale(3))
    rhs, _ = mode_apply(alg.Y, a, 1, a)
    assert lhs == rhs.scale(6)
    zero, exact = mode_apply(alg.Y, Vec(alg.space), 5, a)
    assert exact and zero.is_zero()


def test_mode_apply_absence_above_cutoff():
    alg, _ = build_heisenberg(level=1, cutoff=3)
    a3 = alg.basis_vec("a3")
    # output weight 3 + 3 + 1 - 1 = 6 > 3: absent
    _, exact = mode_apply(alg.Y, a3, -1, a3)
    assert not exact
    # matrix space is complete: anything above cutoff is exactly zero
    m = matrix_units_mosva(2)
    out, exact = mode_apply(m.Y, m.basis_vec("E12"), -5, m.basis_vec("E21"))
    assert exact and out.is_zero()


def test_vertex_series_matches_creation_exponential():
    alg, _ = build_heisenberg(level=1, cutoff=3)
    a = alg.basis_vec("a1")
    coeffs, (lo, hi), exact = vertex_series(alg.Y, a, alg.basis_vec("vac"))
    assert exact
    assert coeffs[0] == a
    assert coeffs[1] == alg.basis_vec("a2")
    assert coeffs[2] == alg.basis_vec("a3")
    assert hi == 2  # weight-3 output is the top certified coefficient
    assert all(e >= 0 for e in coeffs)


def test_vertex_series_identity_on_module():
    _, fock = build_heisenberg(level=1, cutoff=3)
    vac = fock.algebra.vacuum
    for lbl in fock.space.labels():
        w = fock.basis_vec(lbl)
        coeffs, _, exact = vertex_series(fock.YL, vac, w)
        assert exact and coeffs == {0: w}


def test_vertex_series_empty_inputs():
    alg, _ = build_heisenberg(level=1, cutoff=3)
    coeffs, window, exact = vertex_series(alg.Y, Vec(alg.space), alg.basis_vec("a1"))
    assert coeffs == {} and exact


def test_validate_passes_on_shipped_instances():
    alg, fock = build_heisenberg(level=1, cutoff=4)
    assert validate_instance(alg).passed
    assert validate_instance(fock).passed
    assert validate_instance(matrix_units_mosva(2)).passed


def test_validate_flags_inhomogeneous_entry():
    alg, _ = build_heisenberg(level=1, cutoff=3)
    # hand-build a map with one wrong-weight output
    entries = dict(alg.Y.entries)
    entries[("a1", 0, "a1")] = alg.basis_vec("a3")  # weight 3, expected 1
    bad = VertexMap(ALGEBRA, alg.space, alg.space, alg.space, entries)
    from mosva.vertex import AlgebraInstance
    inst = AlgebraInstance(alg.space, bad, alg.vacuum, alg.D, alg.L1)
    rep = validate_instance(inst)
    assert not rep.passed
    [failure] = [r for r in rep.records if r.verdict == "fail"]
    assert failure.inputs == "(a1, 0, a1)" and "weight 3 != 1" in failure.witness


def test_module_side_requirements():
    alg, fock = build_heisenberg(level=1, cutoff=3)
    with pytest.raises(ValueError, match="left"):
        ModuleInstance(LEFT, alg.space, alg, YL=None, D=alg.D)
    with pytest.raises(ValueError, match="right"):
        ModuleInstance("right", alg.space, alg, YL=fock.YL, D=alg.D)
