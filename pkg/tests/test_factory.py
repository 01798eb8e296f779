from fractions import Fraction

import pytest

from mosva.factory import (build_heisenberg, build_matrix_mosva, label_partition,
                           matrix_units_mosva, partition_label, partitions_up_to,
                           self_module, with_scaled_entry)
from mosva.graded import Vec
from mosva.vertex import mode_apply, validate_instance, vertex_series

from oracle_oscillator import Oracle, deriv


def classic_partition_count(n):
    # Euler's recurrence with generalized pentagonal numbers
    p = [1] + [0] * n
    for m in range(1, n + 1):
        total, k = 0, 1
        while True:
            g1 = k * (3 * k - 1) // 2
            g2 = k * (3 * k + 1) // 2
            if g1 > m and g2 > m:
                break
            sign = -1 if k % 2 == 0 else 1
            if g1 <= m:
                total += sign * p[m - g1]
            if g2 <= m:
                total += sign * p[m - g2]
            k += 1
        p[m] = total
    return p


def test_partition_dims_match_counting_oracle():
    alg, _ = build_heisenberg(level=1, cutoff=5)
    expect = classic_partition_count(5)
    for w in range(6):
        assert alg.space.dim(w) == expect[w]
    assert expect[:6] == [1, 1, 2, 3, 5, 7]


def test_partition_labels_roundtrip():
    for p in partitions_up_to(6):
        assert label_partition(partition_label(p)) == p


def test_matrix_units_table():
    alg = matrix_units_mosva(2)
    e12 = alg.basis_vec("E12")
    e21 = alg.basis_vec("E21")
    out, exact = mode_apply(alg.Y, e12, -1, e21)
    assert exact and out == alg.basis_vec("E11")
    for n in (-3, -2, 0, 1, 2):
        out, exact = mode_apply(alg.Y, e12, n, e21)
        assert exact and out.is_zero()
    assert validate_instance(alg).passed


def test_matrix_rejects_nonassociative():
    # e1*e0 = 0 while e0*e1 = e1, so (e1 e0) e1 = 0 but e1 (e0 e1) = e1
    table = [[[1, 0], [0, 1]], [[0, 0], [0, 1]]]
    with pytest.raises(ValueError, match="associative"):
        build_matrix_mosva(table, 0)


def test_matrix_rejects_bad_unit():
    # commutative idempotent pair with no two-sided unit at e1
    table = [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]
    with pytest.raises(ValueError, match="unit"):
        build_matrix_mosva(table, 1)
    inst = build_matrix_mosva(table, {"e0": 1, "e1": 1})
    assert inst.vacuum == Vec(inst.space, {"e0": 1, "e1": 1})


def test_one_dimensional_field_algebra():
    alg = build_matrix_mosva([[[1]]], 0)
    assert validate_instance(alg).passed
    v = alg.basis_vec("e0")
    out, _ = mode_apply(alg.Y, v, -1, v)
    assert out == v


def test_heisenberg_basic_modes():
    alg, _ = build_heisenberg(level=1, cutoff=4)
    a = alg.basis_vec("a1")
    out, exact = mode_apply(alg.Y, a, 1, a)
    assert exact and out == alg.basis_vec("vac")
    out, _ = mode_apply(alg.Y, a, -1, a)
    assert out == alg.basis_vec("a1.a1")
    out, _ = mode_apply(alg.Y, a, 0, a)
    assert out.is_zero()


def test_heisenberg_level_scales_commutator():
    alg, _ = build_heisenberg(level=Fraction(3, 2), cutoff=3)
    a = alg.basis_vec("a1")
    out, _ = mode_apply(alg.Y, a, 1, a)
    assert out == alg.basis_vec("vac").scale(Fraction(3, 2))


def test_heisenberg_identity_modes():
    alg, _ = build_heisenberg(level=1, cutoff=4)
    vac = alg.basis_vec("vac")
    for lbl in alg.space.labels():
        v = alg.basis_vec(lbl)
        for n in alg.Y.mode_range("vac", lbl):
            out, exact = mode_apply(alg.Y, vac, n, v)
            assert exact
            assert out == (v if n == -1 else Vec(alg.space))


def test_heisenberg_creation_series_is_translation_exponential():
    alg, _ = build_heisenberg(level=1, cutoff=4)
    oracle = Oracle(1)
    vac = alg.basis_vec("vac")
    for lbl in alg.space.labels():
        u = alg.basis_vec(lbl)
        coeffs, (lo, hi), exact = vertex_series(alg.Y, u, vac)
        assert exact and lo <= 0
        # against the oracle's derivative exponential: coeff of x^k = D^k u / k!
        state = {label_partition(lbl): Fraction(1)}
        fact = Fraction(1)
        for k in range(0, hi + 1):
            expect = Vec(alg.space, {partition_label(p): c * fact
                                     for p, c in state.items()})
            got = coeffs.get(k, Vec(alg.space))
            assert got == expect, (lbl, k)
            state = deriv(state)
            fact /= (k + 1)
        for e in coeffs:
            assert e >= 0


def test_heisenberg_structure_constants_match_oracle():
    """Every stored entry at cutoff 5 equals the independent recursion, and
    every nonzero oracle mode within the window is stored."""
    cutoff = 5
    alg, _ = build_heisenberg(level=1, cutoff=cutoff)
    oracle = Oracle(1)
    parts = partitions_up_to(cutoff)
    for mu in parts:
        for nu in parts:
            lm, ln = partition_label(mu), partition_label(nu)
            for n in alg.Y.mode_range(lm, ln):
                want = oracle.mode(mu, n, nu)
                got, exact = mode_apply(alg.Y, alg.basis_vec(lm), n, alg.basis_vec(ln))
                assert exact
                assert got == Vec(alg.space, {partition_label(p): c
                                              for p, c in want.items()}), (mu, n, nu)


def test_heisenberg_oracle_at_level_two():
    cutoff = 4
    alg, _ = build_heisenberg(level=2, cutoff=cutoff)
    oracle = Oracle(2)
    parts = partitions_up_to(cutoff)
    for mu in parts[:8]:
        for nu in parts[:8]:
            lm, ln = partition_label(mu), partition_label(nu)
            for n in alg.Y.mode_range(lm, ln):
                want = oracle.mode(mu, n, nu)
                got, _ = mode_apply(alg.Y, alg.basis_vec(lm), n, alg.basis_vec(ln))
                assert got == Vec(alg.space, {partition_label(p): c
                                              for p, c in want.items()})


def test_heisenberg_guards():
    with pytest.raises(ValueError):
        build_heisenberg(level=0, cutoff=4)
    with pytest.raises(ValueError):
        build_heisenberg(level=1, cutoff=1)


def test_self_module_sides():
    alg, fock = build_heisenberg(level=1, cutoff=3)
    assert fock.side == "left"
    right = self_module(alg, "right")
    a = alg.basis_vec("a1")
    # right action keyed (w, n, u): Y(w, x)u
    out, _ = mode_apply(right.YR, a, 1, a)
    assert out == alg.basis_vec("vac")
    bi = self_module(alg, "bi")
    assert bi.YL is not None and bi.YR is not None
    assert validate_instance(bi).passed


def test_fault_injection_scales_one_entry():
    alg, _ = build_heisenberg(level=1, cutoff=3)
    key = ("a1", 1, "a1")
    bad = with_scaled_entry(alg, key, 2)
    out, _ = mode_apply(bad.Y, bad.basis_vec("a1"), 1, bad.basis_vec("a1"))
    assert out == bad.basis_vec("vac").scale(2)
    # everything else untouched
    out, _ = mode_apply(bad.Y, bad.basis_vec("a1"), -1, bad.basis_vec("a1"))
    assert out == bad.basis_vec("a1.a1")
    with pytest.raises(KeyError):
        with_scaled_entry(alg, ("vac", 5, "vac"), 2)
