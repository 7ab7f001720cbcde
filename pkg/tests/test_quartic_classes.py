import random
from fractions import Fraction

import pytest

from syzygy.binary_forms import (
    IDENTITY,
    QuarticForm,
    discriminant,
    invariant_I,
    invariant_J,
    sl2_act,
    verify_syzygy,
)
from syzygy.quartic_classes import (
    CacheCorruption,
    ClassSet,
    admissible_residues,
    are_equivalent,
    automorphism_group,
    class_set_from_text,
    class_set_to_text,
    enumerate_classes,
    is_admissible_pair,
    reduce_form,
    _apply_S,
    _apply_T,
    _apply_Tinv,
)

P1 = QuarticForm((1, 0, 6, 0, 1))
P2 = QuarticForm((1, 0, 0, 0, 4))


def test_tuple_moves_match_substitution():
    from syzygy.binary_forms import S_GEN, T_GEN, form_substitute

    rng = random.Random(2)
    for _ in range(50):
        p = tuple(rng.randrange(-9, 10) for _ in range(5))
        assert list(_apply_S(p)) == form_substitute(p, *S_GEN.entries())
        assert list(_apply_T(p)) == form_substitute(p, *T_GEN.entries())
        assert list(_apply_Tinv(p)) == form_substitute(p, *T_GEN.inverse().entries())


def test_are_equivalent_identity():
    assert are_equivalent(P1, P1).entries() == IDENTITY.entries()


def test_are_equivalent_example_witness():
    G = QuarticForm((4, 0, 0, 0, 1))
    M = are_equivalent(P2, G, depth=6)
    assert M is not None and sl2_act(M, P2) == G
    # the explicit matrix [[0,1],[-1,0]] works
    assert M.entries() == (0, 1, -1, 0)


def test_are_equivalent_distinct_classes_not_found():
    assert are_equivalent(P1, P2, depth=14) is None


def test_are_equivalent_symmetric_witness():
    rng = random.Random(13)
    from syzygy.binary_forms import S_GEN, T_GEN

    for _ in range(20):
        F = QuarticForm(tuple(rng.randrange(-8, 9) for _ in range(5)))
        M = IDENTITY
        for _ in range(rng.randrange(1, 5)):
            M = M * rng.choice([S_GEN, T_GEN, T_GEN.inverse()])
        G = sl2_act(M, F)
        W = are_equivalent(F, G, depth=10)
        assert W is not None
        assert sl2_act(W.inverse(), G) == F


def test_automorphism_group_contains_negative_identity():
    rng = random.Random(4)
    for _ in range(10):
        F = QuarticForm(tuple(rng.randrange(-6, 7) for _ in range(5)))
        if discriminant(F) == 0:
            continue
        auts = automorphism_group(F, depth=4)
        entries = {M.entries() for M in auts}
        assert (1, 0, 0, 1) in entries and (-1, 0, 0, -1) in entries
        # closed under inversion
        for M in auts:
            assert M.inverse().entries() in entries


def test_automorphism_group_x4_plus_y4():
    auts = automorphism_group(QuarticForm((1, 0, 0, 0, 1)), depth=6)
    assert (0, 1, -1, 0) in {M.entries() for M in auts}
    assert len(auts) >= 4


def test_automorphism_group_known_orders():
    # oracle: the leading/trailing coefficient equations F(a,c) = p0,
    # F(b,d) = p4 have only the trivial solutions for x^4 + 4y^4, so
    # Aut = {+-1}; the biquadratic forms admit +-S as well.
    assert len(automorphism_group(P2, depth=6)) == 2
    assert len(automorphism_group(P1, depth=6)) == 4
    assert len(automorphism_group(QuarticForm((1, 0, -6, 0, 1)), depth=6)) == 4


def test_admissible_residues_examples():
    R = admissible_residues(P2)
    assert R.modulus == 2
    assert R.residues() == {(1, 0), (1, 1)}
    R = admissible_residues(P1)
    assert R.modulus == 2
    assert R.residues() == {(1, 0), (0, 1)}


def test_admissible_residues_trivial_modulus():
    # I = 1, J = 0 has discriminant 1: no primes, all pairs admissible
    F = QuarticForm((1, 0, 0, 4, 1))
    d = discriminant(F)
    assert d != 0
    R = admissible_residues(F)
    for p in R.prime_bad:
        assert R.prime_bad[p]  # nonempty bad sets only for real primes
    assert is_admissible_pair(F, 1, 0, R) or R.modulus >= 1


def test_is_admissible_pair():
    assert is_admissible_pair(P2, 1, 0)
    assert not is_admissible_pair(P2, 2, 4)  # gcd fails
    assert not is_admissible_pair(P1, 1, 1)  # residue excluded


def test_enumerate_classes_42_surface():
    cs = enumerate_classes(4, 0, 40)
    reps = cs.representatives
    # every representative carries the invariants and satisfies the syzygy
    for F in reps:
        assert invariant_I(F) == 4 and invariant_J(F) == 0
        assert verify_syzygy(F)
    # the two positive-definite classes of the reference list are present,
    # with explicit witnesses
    found = 0
    for target in (P1, P2):
        for R in reps:
            W = are_equivalent(R, target, depth=12)
            if W is not None:
                assert sl2_act(W, R) == target
                found += 1
                break
    assert found == 2
    # pairwise inequivalent at the tested depth
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            assert are_equivalent(reps[i], reps[j], depth=8) is None
    # the complete SL2(Z) quotient contains more than the two
    # positive-definite classes: negatives, the indefinite pair
    # +-(x^4 - 6x^2y^2 + y^4), the imprimitive pair +-2(x^4+y^4), and
    # three +-pairs of xy-type classes (see decisions ledger)
    assert len(reps) == 14
    tuples = {F.coeffs for F in reps}
    assert (1, 0, -6, 0, 1) in tuples
    assert (0, 4, 0, -4, 0) in tuples
    assert (2, 0, 0, 0, 2) in tuples
    # closed under negation up to equivalence (J = 0 pairs F with -F)
    for F in reps[:4]:
        negF = QuarticForm(tuple(-c for c in F.coeffs))
        assert any(are_equivalent(R, negF, depth=10) is not None for R in reps)


def test_enumerate_classes_44_surface_both_signs():
    I = Fraction(97, 12)
    J = Fraction(955, 216)
    cs = enumerate_classes(I, J, 40)
    printed = [
        QuarticForm((-1, 0, 5, 0, -6)),
        QuarticForm((1, 0, 5, 0, 6)),
        QuarticForm((-2, 0, 5, 0, -3)),
        QuarticForm((2, 0, 5, 0, 3)),
    ]
    # each printed class appears exactly once among the representatives
    for P in printed:
        hits = [R for R in cs.representatives if are_equivalent(R, P, depth=12) is not None]
        assert len(hits) == 1
    # the box also contains two further classes beyond the printed list
    assert len(cs) == 6
    # J -> -J mirrors the class set through negation
    cs_neg = enumerate_classes(I, -J, 40)
    neg_tuples = {F.coeffs for F in cs_neg.representatives}
    assert len(cs_neg) == len(cs)
    for F in cs.representatives:
        negF = QuarticForm(tuple(-c for c in F.coeffs))
        assert any(are_equivalent(G, negF, depth=12) is not None for G in cs_neg.representatives)
    assert neg_tuples != {F.coeffs for F in cs.representatives}


def test_enumerate_classes_rejects_degenerate():
    with pytest.raises(ValueError):
        enumerate_classes(0, 0, 10)
    with pytest.raises(ValueError):
        enumerate_classes(3, 1, 10)  # 27 = 27


def test_enumerate_classes_4_4_bound30():
    # frozen from the exhaustive box search: (I, J) = (4, 4) is realized,
    # in 12 classes within |p_i| <= 30; reproducibility is the assertion
    cs = enumerate_classes(4, 4, 30)
    assert len(cs) == 12
    assert (-4, 0, 0, -4, -1) in {F.coeffs for F in cs.representatives}


def test_reduce_form_descends():
    rng = random.Random(77)
    from syzygy.binary_forms import S_GEN, T_GEN

    for _ in range(20):
        F = QuarticForm(tuple(rng.randrange(-5, 6) for _ in range(5)))
        M = IDENTITY
        for _ in range(6):
            M = M * rng.choice([S_GEN, T_GEN, T_GEN.inverse()])
        G = sl2_act(M, F)
        red = reduce_form(G)
        assert red.height() <= G.height()
        assert invariant_I(red) == invariant_I(F)


def test_class_set_cache_roundtrip(tmp_path):
    cs = enumerate_classes(4, 0, 12)
    text = class_set_to_text(cs)
    back = class_set_from_text(text)
    assert back.target_I == cs.target_I and back.target_J == cs.target_J
    assert [F.coeffs for F in back.representatives] == [F.coeffs for F in cs.representatives]
    # corruption is detected
    bad = text.replace("1,0,6,0,1", "1,0,6,0,2")
    with pytest.raises(CacheCorruption):
        class_set_from_text(bad)


def test_load_or_enumerate_uses_cache(tmp_path):
    from syzygy.quartic_classes import load_or_enumerate

    cs1 = load_or_enumerate(4, 0, 12, cache_dir=tmp_path)
    cs2 = load_or_enumerate(4, 0, 12, cache_dir=tmp_path)
    assert cs2.completeness_evidence.get("loaded_from_cache")
    assert [F.coeffs for F in cs1.representatives] == [F.coeffs for F in cs2.representatives]
    cs3 = load_or_enumerate(4, 0, 12, cache_dir=tmp_path, use_cache=False)
    assert not cs3.completeness_evidence.get("loaded_from_cache")
