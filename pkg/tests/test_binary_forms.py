import random
from fractions import Fraction

import pytest

from syzygy.binary_forms import (
    IDENTITY,
    NEG_IDENTITY,
    QuadForm,
    QuarticForm,
    S_GEN,
    T_GEN,
    UnimodularMatrix,
    discriminant,
    evaluate,
    form_eval,
    form_substitute,
    hessian,
    invariant_I,
    invariant_J,
    is_squarefree,
    jacobian_covariant,
    resultant,
    sl2_act,
    verify_syzygy,
)

F_BIQUAD = QuarticForm((1, 0, 6, 0, 1))  # x^4 + 6x^2y^2 + y^4
F_FERMAT = QuarticForm((1, 0, 0, 0, 4))  # x^4 + 4y^4
F_PAPER44 = QuarticForm((2, 0, 5, 0, 3))  # 2x^4 + 5x^2y^2 + 3y^4


def random_matrix(rng, depth=6):
    M = IDENTITY
    for _ in range(rng.randrange(1, depth + 1)):
        M = M * rng.choice([S_GEN, T_GEN, T_GEN.inverse()])
    return M


def random_quartic(rng, bound=50):
    while True:
        coeffs = tuple(rng.randrange(-bound, bound + 1) for _ in range(5))
        if any(coeffs):
            return QuarticForm(coeffs)


def test_invariant_I_examples():
    assert invariant_I(F_BIQUAD) == 4
    assert invariant_I(F_PAPER44) == Fraction(97, 12)
    assert invariant_I(QuarticForm((0, 0, 0, 0, 1))) == 0


def test_invariant_J_examples():
    assert invariant_J(F_BIQUAD) == 0
    assert invariant_J(QuarticForm((1, 0, 0, 0, 1))) == 0
    # direct evaluation of the closed J formula; the associated surface
    # coefficient is B = -J/4 (see test_duke_map_sign_convention in
    # test_point_enum.py for the resolution of the printed sign)
    assert invariant_J(F_PAPER44) == Fraction(955, 216)


def test_discriminant_examples():
    assert discriminant(F_FERMAT) == 64
    assert discriminant(F_BIQUAD) == 64
    assert discriminant(QuarticForm((1, 0, 0, 0, 0))) == 0


def test_hessian_examples():
    assert hessian(F_FERMAT).coeffs == (0, 0, 4, 0, 0)
    assert hessian(F_BIQUAD).coeffs == (1, 0, -2, 0, 1)
    assert hessian(QuarticForm((1, 0, 0, 0, 0))).is_zero


def test_jacobian_covariant_examples():
    # oracle: differentiate and expand the 2x2 determinant by hand
    assert jacobian_covariant(F_FERMAT).coeffs == (0, -4, 0, 0, 0, 16, 0)
    assert jacobian_covariant(F_BIQUAD).coeffs == (0, 8, 0, 0, 0, -8, 0)
    assert not any(jacobian_covariant(QuarticForm((1, 0, 0, 0, 0))).coeffs)


def test_syzygy_both_sides_known():
    # both sides equal 16x^10y^2 - 128x^6y^6 + 256x^2y^10 for x^4+4y^4
    from syzygy.binary_forms import form_mul

    T = jacobian_covariant(F_FERMAT)
    lhs = form_mul(T.coeffs, T.coeffs)
    expect = [0] * 13
    expect[2] = 16
    expect[6] = -128
    expect[10] = 256
    assert [Fraction(c) for c in lhs] == [Fraction(c) for c in expect]
    assert verify_syzygy(F_FERMAT)
    assert verify_syzygy(F_BIQUAD)


def test_syzygy_broken_by_perturbation():
    # perturbing H breaks the identity by construction
    F = F_FERMAT
    from syzygy.binary_forms import form_mul

    I, J = invariant_I(F), invariant_J(F)
    H = QuarticForm((0, 0, 4, 0, 1))  # perturbed hessian
    T = jacobian_covariant(F)
    lhs = form_mul(T.coeffs, T.coeffs)
    H2 = form_mul(H.coeffs, H.coeffs)
    H3 = form_mul(H2, H.coeffs)
    F2 = form_mul(F.coeffs, F.coeffs)
    F3 = form_mul(F2, F.coeffs)
    HFF = form_mul(H.coeffs, F2)
    rhs = [-4 * h3 + I * hff - J * f3 for h3, hff, f3 in zip(H3, HFF, F3)]
    assert [Fraction(c) for c in lhs] != [Fraction(c) for c in rhs]


def test_syzygy_random_1000():
    rng = random.Random(1729)
    for _ in range(1000):
        assert verify_syzygy(random_quartic(rng))


def test_sl2_act_examples():
    assert sl2_act(IDENTITY, F_FERMAT) == F_FERMAT
    assert sl2_act(S_GEN, F_FERMAT).coeffs == (4, 0, 0, 0, 1)
    assert sl2_act(T_GEN, QuarticForm((1, 0, 0, 0, 0))).coeffs == (1, 4, 6, 4, 1)


def test_sl2_invariance_random():
    rng = random.Random(42)
    for _ in range(500):
        F = random_quartic(rng)
        M = random_matrix(rng)
        G = sl2_act(M, F)
        assert invariant_I(G) == invariant_I(F)
        assert invariant_J(G) == invariant_J(F)


def test_covariance_of_hessian_and_jacobian():
    rng = random.Random(5)
    for _ in range(100):
        F = random_quartic(rng, bound=20)
        M = random_matrix(rng)
        HF = hessian(F)
        left = hessian(sl2_act(M, F)).coeffs
        right = tuple(form_substitute(HF.coeffs, *M.entries()))
        assert tuple(Fraction(c) for c in left) == tuple(Fraction(c) for c in right)
        TF = jacobian_covariant(F)
        tleft = jacobian_covariant(sl2_act(M, F)).coeffs
        tright = tuple(form_substitute(TF.coeffs, *M.entries()))
        assert tuple(Fraction(c) for c in tleft) == tuple(Fraction(c) for c in tright)


def test_evaluate_and_homogeneity():
    assert evaluate(F_FERMAT, 1, 1) == 5
    rng = random.Random(11)
    for _ in range(100):
        F = random_quartic(rng, bound=15)
        m1, m2, lam = rng.randrange(-9, 10), rng.randrange(-9, 10), rng.randrange(-4, 5)
        assert evaluate(F, lam * m1, lam * m2) == lam**4 * evaluate(F, m1, m2)


def test_resultant_examples():
    assert resultant(QuadForm(1, 0, 1), QuadForm(1, 0, -1)) == 4
    # shared factor -> 0
    assert resultant((1, 0, -1), (1, 1, 0)) == 0  # (x-y)(x+y) vs x(x+y)


def test_resultant_hessian_nonzero_for_squarefree():
    # Lemma-style spot check: squarefree F shares no factor with H_F
    from syzygy.binary_forms import form_int_scaled

    for F in (F_FERMAT, F_BIQUAD, F_PAPER44, QuarticForm((1, 0, -6, 0, 1))):
        assert is_squarefree(F)
        scaled, _den = form_int_scaled(hessian(F).coeffs)
        assert resultant(F, scaled) != 0


def test_is_squarefree():
    assert not is_squarefree(QuarticForm((1, 0, 0, 0, 0)))  # x^4
    assert not is_squarefree(QuarticForm((0, 0, 1, 0, 0)))  # x^2 y^2
    assert not is_squarefree(QuarticForm((0, 0, 0, 0, 1)))  # y^4
    assert not is_squarefree(QuarticForm((1, 2, 1, 0, 0)))  # x^2 (x+y)^2
    assert is_squarefree(F_FERMAT)
    assert is_squarefree(QuarticForm((0, 1, 0, -1, 0)))  # xy(x-y)(x+y)


def test_squarefree_iff_disc_nonzero_random():
    rng = random.Random(31337)
    for _ in range(400):
        F = random_quartic(rng, bound=8)
        assert is_squarefree(F) == (discriminant(F) != 0)


def test_unimodular_matrix():
    with pytest.raises(ValueError):
        UnimodularMatrix(1, 0, 0, -1)
    M = S_GEN * T_GEN
    assert M.inverse() * M == IDENTITY
    assert NEG_IDENTITY * NEG_IDENTITY == IDENTITY


def test_text_roundtrip():
    assert QuarticForm.from_text("1,0,6,0,1") == F_BIQUAD
    assert F_PAPER44.to_text() == "2,0,5,0,3"
    assert QuadForm.from_text("1,0,5").to_text() == "1,0,5"
    assert "x^4" in F_BIQUAD.pretty() and "y^4" in F_BIQUAD.pretty()
    assert QuarticForm((1, 0, -6, 0, 1)).pretty() == "x^4 - 6*x^2*y^2 + y^4"


def test_mordell_coefficients():
    a, b, c, d, e = F_PAPER44.mordell
    assert (a, b, c, d, e) == (2, 0, Fraction(5, 6), 0, 3)


def test_form_eval_matches_naive():
    rng = random.Random(8)
    for _ in range(50):
        coeffs = [rng.randrange(-5, 6) for _ in range(7)]
        x, y = rng.randrange(-6, 7), rng.randrange(-6, 7)
        naive = sum(c * x ** (6 - i) * y**i for i, c in enumerate(coeffs))
        assert form_eval(coeffs, x, y) == naive
