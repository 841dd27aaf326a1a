"""Series identity machinery, exact coefficient checks, deterministic sampling."""

from fractions import Fraction

import pytest
from mpmath import mp, mpf

from superint import (
    BigComplex,
    Partition,
    Precision,
    TruncationCapExceeded,
    character_expansion_check,
    f_coefficient,
    g_coefficient,
    j0_truncated,
    jm_truncated,
    lr_relation_check,
    partial_coefficient_check,
    theorem_c_checks,
    verify_conjecture,
)
from superint.conjecture import (
    factorial_ratio_identity_holds,
    j0_series_coefficient,
    sample_disk,
    splitmix64,
    tail_bound,
    unit_double,
)

from oracles import j0_box_sum, jm_box_sum

P = Partition
PREC = Precision()


# -- sampling ------------------------------------------------------------------


def test_splitmix64_reference_stream():
    # the canonical splitmix64 outputs for seed 0, stream positions 1..3
    assert splitmix64(0, 1) == 0xE220A8397B1DCDAF
    assert splitmix64(0, 2) == 0x6E789E6AA1B965F4
    assert splitmix64(0, 3) == 0x06C45D188009454F


def test_unit_double_range_and_determinism():
    vals = [unit_double(42, k) for k in range(100)]
    assert all(0 <= v < 1 for v in vals)
    assert vals == [unit_double(42, k) for k in range(100)]


def test_sample_disk_radius_and_determinism():
    for s in range(5):
        for c in range(3):
            z = sample_disk(123, s, c, 2, 256)
            assert abs(z) <= 2
            z2 = sample_disk(123, s, c, 2, 256)
            assert z.re == z2.re and z.im == z2.im


# -- truncated series ------------------------------------------------------------


def _as_mpf(fr: Fraction):
    return mpf(fr.numerator) / mpf(fr.denominator)


def test_j0_single_variable_is_bessel_kernel():
    from superint import bessel_ratio

    z = BigComplex(Fraction(1, 3))
    a = j0_truncated([z], 40, PREC)
    b = bessel_ratio(0, z, PREC)
    with mp.workprec(400):
        assert abs(a.to_mpc() - b.to_mpc()) < mpf(2) ** -200


def test_j0_low_order_coefficients():
    assert j0_series_coefficient([1, 0]) == 1
    assert j0_series_coefficient([0, 1]) == -1
    assert j0_series_coefficient([0, 0]) == 0


def test_j0_matches_box_sum_oracle():
    cases = [
        ([Fraction(1, 2), Fraction(1, 3)], 2, 12),
        ([Fraction(1, 2), Fraction(-1, 3), Fraction(2, 5)], 3, 8),
    ]
    with mp.workprec(PREC.work_bits):
        for z, n, k in cases:
            got = j0_truncated([BigComplex(v) for v in z], k, PREC)
            want = _as_mpf(j0_box_sum(z, k))
            assert abs(got.to_mpc() - want) < mpf(2) ** -200


def test_j0_frozen_two_variable_value():
    # the K=40 box sum at z = (1/2, 1/3), computed by the independent
    # double loop oracle at test time and compared to 2^-200
    z = [Fraction(1, 2), Fraction(1, 3)]
    got = j0_truncated([BigComplex(v) for v in z], 40, PREC)
    want = j0_box_sum(z, 40)
    with mp.workprec(PREC.work_bits):
        assert abs(got.to_mpc() - _as_mpf(want)) < mpf(2) ** -200


def test_jm_matches_box_sum_oracle():
    z2 = [Fraction(1, 2), Fraction(-1, 3)]
    z3 = [Fraction(1, 2), Fraction(-1, 3), Fraction(2, 5)]
    with mp.workprec(PREC.work_bits):
        for z, k in ((z2, 10), (z3, 6)):
            for m in range(1, len(z) + 1):
                got = jm_truncated([BigComplex(v) for v in z], m, k, PREC)
                want = _as_mpf(jm_box_sum(z, m, k))
                assert abs(got.to_mpc() - want) < mpf(2) ** -180, (len(z), m)


def test_jm_equals_j0_for_full_block():
    z = [BigComplex(Fraction(1, 2)), BigComplex(Fraction(1, 5))]
    a = jm_truncated(z, 2, 20, PREC)
    b = j0_truncated(z, 20, PREC)
    assert a.re == b.re and a.im == b.im


def test_j0_antisymmetry():
    z = [BigComplex(Fraction(1, 2)), BigComplex(Fraction(-2, 7)), BigComplex(Fraction(1, 9))]
    swapped = [z[1], z[0], z[2]]
    a = j0_truncated(z, 24, PREC)
    b = j0_truncated(swapped, 24, PREC)
    with mp.workprec(400):
        assert abs(a.to_mpc() + b.to_mpc()) < mpf(2) ** -180


def test_jm_independent_of_m_within_tail():
    z = [sample_disk(7, 0, c, 2, PREC.bits) for c in range(4)]
    vals = [jm_truncated(z, m, 64, PREC) for m in range(1, 5)]
    bound = 2 * tail_bound(4, 2, 64, PREC)
    with mp.workprec(PREC.work_bits):
        for a in vals:
            for b in vals:
                assert abs(a.to_mpc() - b.to_mpc()) <= bound + mpf(2) ** -(PREC.bits - 48)


def test_truncation_cap_guard():
    tiny = Precision(bits=256, truncation_cap=8)
    with pytest.raises(TruncationCapExceeded):
        j0_truncated([BigComplex(1)], 64, tiny)
    with pytest.raises(TruncationCapExceeded):
        jm_truncated([BigComplex(1), BigComplex(2)], 1, 64, tiny)


def test_verify_conjecture_report():
    rep = verify_conjecture(3, 1, sample_count=4, radius=2, seed=42, prec=PREC, K=64)
    assert rep.passed
    assert len(rep.samples) == 4
    doc = rep.to_json()
    assert doc["N"] == 3 and doc["m"] == 1 and doc["pass"]
    with mp.workprec(PREC.work_bits):
        assert mpf(rep.max_rel_diff) < mpf(10) ** -40


def test_verify_conjecture_reports_are_bit_identical():
    a = verify_conjecture(4, 2, sample_count=3, radius=2, seed=9, prec=PREC, K=48)
    b = verify_conjecture(4, 2, sample_count=3, radius=2, seed=9, prec=PREC, K=48)
    import json

    assert json.dumps(a.to_json(), sort_keys=True) == json.dumps(b.to_json(), sort_keys=True)


def test_verify_conjecture_validation():
    with pytest.raises(ValueError):
        verify_conjecture(4, 5)
    with pytest.raises(ValueError):
        verify_conjecture(4, 1, radius=5)
    with pytest.raises(ValueError):
        verify_conjecture(12, 1)


def test_proved_small_cases_pass():
    for n, m in ((2, 1), (3, 1), (3, 2)):
        rep = verify_conjecture(n, m, sample_count=5, radius=2, seed=42, prec=PREC, K=64)
        assert rep.passed


# -- exact coefficient machinery ---------------------------------------------------


def test_f_coefficient_examples():
    assert f_coefficient(P(), 1) == 1
    assert f_coefficient(P((1,)), 1) == 1
    # N = 3 empty diagram: Delta(2,1,0)/(2!1!0!)^2 = 2/4
    assert f_coefficient(P(), 3) == Fraction(1, 2)
    assert f_coefficient(P((1, 1, 1, 1)), 3) == 0


def test_g_coefficient_examples():
    assert g_coefficient(P(), P(), 1, 1) == 1
    # matches the series coefficient machinery on the smallest split
    assert g_coefficient(P((1,)), P(), 1, 1) == Fraction(1, 1 * 1 * 2)


def test_lr_relation_examples():
    ok, res = lr_relation_check(P(), P(), 1, 1)
    assert ok and res == 0
    ok, res = lr_relation_check(P((1,)), P(), 1, 1)
    assert ok and res == 0
    ok, res = lr_relation_check(P((2, 1)), P((2, 2)), 2, 2)
    assert ok and res == 0


def test_lr_relation_sweep_2_2():
    from superint.partitions import partitions_of

    for total in range(9):
        for psize in range(total + 1):
            for p in partitions_of(psize, max_rows=2):
                for q in partitions_of(total - psize, max_rows=2):
                    ok, res = lr_relation_check(p, q, 2, 2)
                    assert ok and res == 0, (p, q)


def test_partial_coefficient_examples():
    assert partial_coefficient_check(0, 0, 1, 2)
    for n_vars in (3, 4):
        for m in range(1, n_vars):
            km0, kn0 = m - 1, n_vars - m - 1
            assert partial_coefficient_check(km0 + 4, kn0 + 4, m, n_vars)
    with pytest.raises(ValueError):
        partial_coefficient_check(0, 0, 2, 3)


def test_character_expansion_examples():
    assert character_expansion_check(1, 1, 2, [Fraction(2, 3)], [Fraction(-1, 5)])
    assert character_expansion_check(
        2, 2, 6, [Fraction(2, 3), Fraction(1, 7)], [Fraction(-1, 5), Fraction(3, 4)]
    )


def test_theorem_checks():
    assert theorem_c_checks(5)
    assert theorem_c_checks(6, seed=11)
    with pytest.raises(ValueError):
        theorem_c_checks(7)


def test_factorial_ratio_identity_spot():
    # det [[1, 0], [1/2, 1]] = 1 for the two-row staircase pattern
    assert factorial_ratio_identity_holds(P((1,)), 2)
    assert factorial_ratio_identity_holds(P((3, 1)), 4)


def test_tail_bound_dominates_actual_tails():
    z = [Fraction(1, 2), Fraction(-1, 3)]
    with mp.workprec(PREC.work_bits):
        full = j0_box_sum(z, 18)
        trunc = j0_box_sum(z, 6)
        actual = abs(_as_mpf(full - trunc))
        bound = tail_bound(2, Fraction(1, 2), 6, PREC)
        assert actual <= bound


def test_hook_coupling_form_equals_norm_form():
    # the expansion written through k-indices, factorial squares and the
    # block-coupling product must reproduce the norm-and-supercharacter form
    # diagram by diagram, and hence the closed form within truncation tails
    from math import factorial as fact

    from superint import ls_closed_form, SuperEigenvalues
    from superint.conjecture import ls_character_sum
    from superint.partitions import (
        bosonic_k_indices,
        fermionic_k_indices,
        super_diagrams,
    )
    from superint.schur import schur_bialternant
    from superint.precision import vandermonde
    from superint.integrals import c_constant

    beta = Fraction(1, 2)
    cases = [
        (1, 1, [Fraction(3, 7)], [Fraction(-2, 9)]),
        (2, 1, [Fraction(3, 7), Fraction(1, 4)], [Fraction(-2, 9)]),
        (2, 2, [Fraction(3, 7), Fraction(1, 4)], [Fraction(-2, 9), Fraction(5, 8)]),
    ]
    for m, n, bos, ferm in cases:
        cross = Fraction(1)
        for a in bos:
            for b in ferm:
                cross *= a - b
        hook_form = Fraction(0)
        for sd in super_diagrams(m, n, 14):
            ka = bosonic_k_indices(sd.p, m).values
            kb = fermionic_k_indices(sd.q, m, n).values
            coeff = Fraction(vandermonde(list(ka)) * vandermonde(list(kb)))
            for k in ka + kb:
                coeff /= Fraction(fact(k)) ** 2
            for ki in ka:
                for kj in kb:
                    coeff /= ki + kj + 1
            term = (
                coeff
                * beta ** (2 * sd.boxes)
                * cross
                * schur_bialternant(sd.p, bos)
                * schur_bialternant(sd.q, ferm)
            )
            hook_form += term
        hook_form *= c_constant(m) * c_constant(n)
        norm_form, shells = ls_character_sum(bos, ferm, beta, 14)
        assert hook_form == norm_form
        closed = ls_closed_form(
            SuperEigenvalues(tuple(bos), tuple(ferm), BigComplex(beta)), PREC
        ).value
        with mp.workprec(PREC.work_bits):
            partial = mpf(norm_form.numerator) / mpf(norm_form.denominator)
            tail = sum(
                abs(mpf(shells[b].numerator) / mpf(shells[b].denominator))
                for b in (13, 14)
                if b in shells and shells[b] != 0
            )
            assert abs(closed.to_mpc() - partial) <= 100 * tail + mpf(2) ** -(PREC.bits - 48)
