import random
from fractions import Fraction

import pytest

from syzygy.binary_forms import (
    QuadForm,
    QuarticForm,
    form_eval,
    hessian,
    invariant_I,
    invariant_J,
    jacobian_covariant,
)
from syzygy.point_enum import (
    IntegralPoint,
    SurfaceSpec,
    count_points_bruteforce,
    count_points_syzygy,
    count_record,
    duke_map,
    points_to_csv,
    region_box,
    v_count,
    v_count_direct,
)
from syzygy.quartic_classes import enumerate_classes

F_FERMAT = QuarticForm((1, 0, 0, 0, 4))
F_BIQUAD = QuarticForm((1, 0, 6, 0, 1))

S_GAUSS = SurfaceSpec(Fraction(-1), Fraction(0), QuadForm(1, 0, 1))
S_Q5 = SurfaceSpec(Fraction(-1), Fraction(0), QuadForm(1, 0, 5))


@pytest.fixture(scope="module")
def classes40():
    return enumerate_classes(4, 0, 40)


def test_surface_spec_validation():
    with pytest.raises(ValueError):
        SurfaceSpec(Fraction(3), Fraction(2), QuadForm(1, 0, 1))  # 4*27 = 27*4
    with pytest.raises(ValueError):
        SurfaceSpec(Fraction(-1), Fraction(0), QuadForm(1, 0, -1))
    assert S_GAUSS.target_invariants == (4, 0)


def test_duke_map_example():
    # hand check: H(1,1) = 4, T(1,1) = 12, F(1,1) = 5 and
    # 36 = -64 + 4*25 on y^2 = x^3 - x n^2
    assert duke_map(F_FERMAT, 1, 1) == (-4, 6, 5)
    assert 6 * 6 == (-4) ** 3 - (-4) * 25


def test_duke_map_degenerate_pair():
    # H(1,0) = T(1,0) = 0; the image is on the curve but y = 0
    assert duke_map(F_FERMAT, 1, 0) == (0, 0, 1)


def test_duke_map_rejections():
    with pytest.raises(ValueError):
        duke_map(F_BIQUAD, 1, 1)  # inadmissible residue
    with pytest.raises(ValueError):
        duke_map(F_FERMAT, 2, 4)  # gcd
    with pytest.raises(ValueError):
        duke_map(QuarticForm((1, 0, -6, 0, 1)), 2, 1)  # F(m) = -7 < 0... admissible?
    # x^4 - 6x^2y^2 + y^4 at (2,1): residue (0,1)？ F(2,1) = -7 is negative


def test_duke_map_nonintegral_image():
    # 2x^3y - 8xy^3 has non-integral Hessian on its admissible pairs
    F = QuarticForm((0, 2, 0, -8, 0))
    with pytest.raises(ValueError):
        duke_map(F, 1, 0)


def test_duke_map_sign_convention_44():
    # Open-question resolution: the printed class representatives have
    # J = +955/216 under the closed formula, and the syzygy puts their
    # images on y^2 = x^3 + A x n^2 + B n^3 with A = -I/4, B = -J/4,
    # i.e. B = -955/864.  The surface with B = +955/864 therefore
    # belongs to J = -955/216, whose classes are the negated forms.
    F = QuarticForm((2, 0, 5, 0, 3))
    I, J = invariant_I(F), invariant_J(F)
    assert (I, J) == (Fraction(97, 12), Fraction(955, 216))
    A, B = -I / 4, -J / 4
    assert B == Fraction(-955, 864)
    H, T = hessian(F), jacobian_covariant(F)
    for m1, m2 in [(1, 1), (2, 1), (1, 3), (3, 2)]:
        n = Fraction(F.evaluate(m1, m2))
        x = -Fraction(H.evaluate(m1, m2))
        y = Fraction(T.evaluate(m1, m2)) / 2
        assert y**2 == x**3 + A * x * n * n + B * n**3
    Fneg = QuarticForm(tuple(-c for c in F.coeffs))
    assert invariant_J(Fneg) == Fraction(-955, 216)
    assert -invariant_J(Fneg) / 4 == Fraction(955, 864)


def test_region_box_contains_all_hits(classes40):
    # scanning double the box finds nothing new
    for F in classes40.representatives[:6]:
        T = 12
        box = region_box(F, T * T)
        H = hessian(F)
        for m1 in range(-2 * box, 2 * box + 1):
            for m2 in range(-2 * box, 2 * box + 1):
                if max(abs(m1), abs(m2)) <= box:
                    continue
                fv = abs(form_eval(F.coeffs, m1, m2))
                hv = abs(form_eval(H.coeffs, m1, m2))
                assert not (fv <= T * T and hv <= T * T)


def test_oracle_equality_small(classes40):
    for S in (S_GAUSS, S_Q5):
        for T in (2, 3, 5, 10):
            nb, pb = count_points_bruteforce(S, T)
            ns, ps, _ = count_points_syzygy(S, T, classes40)
            assert nb == ns
            assert [p.key() for p in pb] == [p.key() for p in ps]


def test_oracle_equality_t20_frozen(classes40):
    # frozen oracle values (computed by the brute-force scan)
    nb, _ = count_points_bruteforce(S_GAUSS, 20)
    assert nb == 208
    nb5, _ = count_points_bruteforce(S_Q5, 20)
    assert nb5 == 52
    ns, _, _ = count_points_syzygy(S_GAUSS, 20, classes40)
    ns5, _, _ = count_points_syzygy(S_Q5, 20, classes40)
    assert (ns, ns5) == (208, 52)


def test_counts_t0():
    assert count_points_bruteforce(S_GAUSS, 0)[0] == 0
    assert count_points_syzygy(S_GAUSS, 0)[0] == 0


def test_monotone_in_T(classes40):
    last = -1
    for T in (2, 3, 5, 10, 20):
        n, _, _ = count_points_syzygy(S_GAUSS, T, classes40)
        assert n >= last
        last = n


def test_every_point_on_curve(classes40):
    _, points, _ = count_points_syzygy(S_Q5, 10, classes40)
    for p in points:
        assert S_Q5.on_curve(p.x, p.y, p.n)
        assert p.n == S_Q5.Q.evaluate(p.u, p.v)
        assert p.y != 0
        from math import gcd

        assert gcd(p.x, p.n) == 1


def test_no_duplicate_points(classes40):
    _, points, _ = count_points_syzygy(S_GAUSS, 20, classes40)
    keys = [(p.x, p.y, p.u, p.v) for p in points]
    assert len(keys) == len(set(keys))


def test_v_count_example(classes40):
    # fiber n = 5 of y^2 = x^3 - 25 x: the points (-4, +-6) and nothing else
    # (oracle: direct x-scan)
    assert v_count_direct(S_GAUSS, 5, 3) == 2
    assert v_count(S_GAUSS, classes40, 5, 3) == 2
    assert v_count(S_GAUSS, classes40, 7, 3) == v_count_direct(S_GAUSS, 7, 3) == 0
    assert v_count(S_GAUSS, classes40, 5, 0) == 0


def test_v_count_matches_direct_scan(classes40):
    for S in (S_GAUSS, S_Q5):
        for n in (1, 2, 5, 24, 41, 50):
            for T in (3, 8, 30):
                assert v_count(S, classes40, n, T) == v_count_direct(S, n, T), (S.Q, n, T)


def test_indefinite_class_fiber_is_needed(classes40):
    # the fiber n = 41 contains (841, +-24360) which only the indefinite
    # class x^4 - 6x^2y^2 + y^4 reaches (at m = (5, 2)); at T = 40 the
    # count must include it
    assert v_count_direct(S_GAUSS, 41, 40) == 4  # (-9, +-120), (841, +-24360)
    assert v_count(S_GAUSS, classes40, 41, 40) == 4
    H = hessian(QuarticForm((1, 0, -6, 0, 1)))
    assert -H.evaluate(5, 2) == 841


def test_xy_class_fiber_is_needed(classes40):
    # n = 24 carries (25, +-35) which only the class 4xy(x^2 - y^2) reaches
    assert v_count_direct(S_GAUSS, 24, 5) == 2
    assert v_count(S_GAUSS, classes40, 24, 5) == 2
    assert duke_map(QuarticForm((0, 4, 0, -4, 0)), 2, 1) == (25, 35, 24)


def test_threads_match_serial():
    nb1, pb1 = count_points_bruteforce(S_GAUSS, 12, threads=1)
    nb2, pb2 = count_points_bruteforce(S_GAUSS, 12, threads=2)
    assert nb1 == nb2
    assert [p.key() for p in pb1] == [p.key() for p in pb2]


def test_csv_and_record(classes40):
    n, points, _ = count_points_syzygy(S_GAUSS, 5, classes40)
    text = points_to_csv(points)
    assert text.splitlines()[0] == "x,y,u,v,n,class_index,m1,m2"
    assert len(text.splitlines()) == n + 1
    rec = count_record(S_GAUSS, 5, n, "syzygy")
    assert rec == {"A": "-1", "B": "0", "Q": "1,0,1", "T": 5, "N": n, "method": "syzygy"}
    # brute-force rows carry empty provenance
    _, bpoints = count_points_bruteforce(S_GAUSS, 5)
    btext = points_to_csv(bpoints)
    assert btext.splitlines()[1].endswith(",,,")


def test_points_sorted_canonically(classes40):
    _, points, _ = count_points_syzygy(S_GAUSS, 10, classes40)
    keys = [p.key() for p in points]
    assert keys == sorted(keys)
