"""Characters: Schur functions, super-Schur tableaux sums, coefficient counts."""

import random
from fractions import Fraction

import pytest
from mpmath import mp, mpf

from superint import (
    BigComplex,
    DegenerateArguments,
    Partition,
    Precision,
    SuperDiagram,
    assemble,
    is_covariant,
    lr_coefficient,
    partitions_of,
    schur_bialternant,
    schur_tableaux,
    super_diagrams,
    super_schur_tableaux,
    supercharacter_amu,
)

from oracles import poly_mul, schur_polynomial

P = Partition
PREC = Precision()


def test_schur_tableaux_examples():
    z1, z2 = Fraction(3), Fraction(5)
    assert schur_tableaux(P((1,)), [z1]) == z1
    assert schur_tableaux(P((2,)), [z1, z2]) == z1 * z1 + z1 * z2 + z2 * z2
    assert schur_tableaux(P((1, 1)), [z1]) == 0
    assert schur_tableaux(P(), [z1, z2]) == 1


def test_schur_bialternant_examples():
    z = [Fraction(2), Fraction(7)]
    assert schur_bialternant(P(), z) == 1
    assert schur_bialternant(P((1,)), z) == z[0] + z[1]
    assert schur_bialternant(P((2, 1)), z) == z[0] * z[1] * (z[0] + z[1])


def test_schur_bialternant_exact_matches_tableaux():
    rng = random.Random(11)
    for m in (2, 3, 4):
        for boxes in range(7):
            for p in partitions_of(boxes, max_rows=m):
                z = []
                while len(z) < m:
                    f = Fraction(rng.randint(-9, 9), rng.randint(1, 7))
                    if f not in z:
                        z.append(f)
                assert schur_bialternant(p, z) == schur_tableaux(p, z)


def test_schur_bialternant_numeric_matches_tableaux():
    rng = random.Random(5)
    for m in (2, 3, 4):
        for boxes in (2, 4, 6):
            for p in partitions_of(boxes, max_rows=m):
                z = [BigComplex(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(m)]
                a = schur_bialternant(p, z, PREC)
                b = schur_tableaux(p, z)
                with mp.workprec(300):
                    scale = max(abs(b.to_mpc()), mpf(1))
                    assert abs(a.to_mpc() - b.to_mpc()) <= scale * mpf(2) ** -(PREC.bits - 40)


def test_schur_bialternant_degenerate_arguments():
    with pytest.raises(DegenerateArguments):
        schur_bialternant(P((1,)), [Fraction(1), Fraction(1)])
    near = [BigComplex(1), BigComplex(1) + BigComplex(Fraction(1, 2**200))]
    with pytest.raises(DegenerateArguments):
        schur_bialternant(P((2,)), near, PREC)


def test_super_schur_examples():
    a1, a2 = Fraction(3), Fraction(5)
    assert super_schur_tableaux(P((1,)), [a1], [a2]) == a1 - a2
    assert super_schur_tableaux(P((2,)), [a1], [a2]) == a1 * a1 - a1 * a2
    assert super_schur_tableaux(P((1, 1)), [a1], [a2]) == a2 * a2 - a1 * a2
    assert super_schur_tableaux(P(), [a1], [a2]) == 1


def test_super_schur_vanishes_outside_hook():
    a = [Fraction(2)]
    b = [Fraction(7)]
    # (1|1) hook requires t_2 <= 1
    assert super_schur_tableaux(P((2, 2)), a, b) == 0
    assert super_schur_tableaux(P((3, 3, 1)), a, b) == 0


def test_supercharacter_examples():
    a1, a2 = Fraction(3), Fraction(5)
    assert supercharacter_amu(SuperDiagram(1, 1, P(), P()), [a1], [a2]) == a1 - a2
    assert supercharacter_amu(SuperDiagram(1, 1, P((1,)), P()), [a1], [a2]) == (a1 - a2) * a1
    assert supercharacter_amu(SuperDiagram(1, 1, P(), P((1,))), [a1], [a2]) == -(a1 - a2) * a2


def test_supercharacter_matches_tableaux_sweep():
    rng = random.Random(23)
    for m in (1, 2):
        for n in (1, 2):
            for trial in range(5):
                bos = [Fraction(rng.randint(-8, 8), rng.randint(1, 6)) for _ in range(m)]
                ferm = [Fraction(rng.randint(-8, 8), rng.randint(1, 6)) for _ in range(n)]
                for sd in super_diagrams(m, n, 6):
                    t = assemble(sd)
                    assert supercharacter_amu(sd, bos, ferm) == super_schur_tableaux(t, bos, ferm)


def test_supercharacter_with_coinciding_arguments_falls_back():
    sd = SuperDiagram(2, 1, P((2,)), P())
    bos = [Fraction(1, 2), Fraction(1, 2)]
    ferm = [Fraction(1, 3)]
    assert supercharacter_amu(sd, bos, ferm) == super_schur_tableaux(assemble(sd), bos, ferm)


def test_covariant_tableaux_nonzero_iff_hook():
    bos = [Fraction(2), Fraction(3)]
    ferm = [Fraction(5)]
    for boxes in range(1, 7):
        for t in partitions_of(boxes):
            val = super_schur_tableaux(t, bos, ferm)
            if not is_covariant(t, 2, 1):
                assert val == 0


@pytest.mark.parametrize(
    "r,mu,nu,value",
    [
        ((2,), (1,), (1,), 1),
        ((1, 1), (1,), (1,), 1),
        ((2, 1), (2,), (1,), 1),
        ((2, 1), (1,), (1, 1), 1),
        ((2, 2), (2,), (1,), 0),
        ((3, 1), (1,), (2, 1), 1),
        ((2, 1, 1), (1,), (2, 1), 1),
    ],
)
def test_lr_coefficient_examples(r, mu, nu, value):
    assert lr_coefficient(P(r), P(mu), P(nu)) == value


def test_lr_coefficient_size_and_containment_guards():
    assert lr_coefficient(P((3,)), P((1,)), P((1,))) == 0
    assert lr_coefficient(P((1, 1, 1)), P((2,)), P((1,))) == 0


def test_lr_reproduces_schur_products():
    # S_mu * S_nu = sum_r c^r_(mu,nu) S_r as exact polynomials in 4 variables
    nvars = 4
    for mu_boxes in range(0, 5):
        for nu_boxes in range(0, 5):
            if mu_boxes + nu_boxes > 8 or mu_boxes + nu_boxes == 0:
                continue
            for mu in partitions_of(mu_boxes, max_rows=nvars):
                for nu in partitions_of(nu_boxes, max_rows=nvars):
                    product = poly_mul(
                        schur_polynomial(mu.rows, nvars), schur_polynomial(nu.rows, nvars)
                    )
                    combo = {}
                    for r in partitions_of(mu_boxes + nu_boxes, max_rows=nvars):
                        c = lr_coefficient(r, mu, nu)
                        if not c:
                            continue
                        for expo, coeff in schur_polynomial(r.rows, nvars).items():
                            combo[expo] = combo.get(expo, 0) + c * coeff
                    combo = {k: v for k, v in combo.items() if v}
                    assert combo == product, (mu, nu)
