import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ffincidence.algebra import fe_add, fe_mul, fe_pow, fe_sub, field_make, ring_make
from ffincidence.errors import InvalidInput
from ffincidence.geometry import (
    DiagonalForm,
    SphereSet,
    all_points,
    all_spheres,
    count_incidences,
    count_incidences_naive,
    count_incidences_ring,
    distance_histogram,
    evaluate_form,
    on_sphere,
    pinned_distance_set,
    pinned_distance_sizes,
    points_from_csv,
    points_to_csv,
    spheres_from_csv,
    spheres_to_csv,
    zero_distance_pairs,
)


def scalar_form(Q, v):
    """Q(v) by scalar polynomial arithmetic, bypassing the tables."""
    total = 0
    for a, c, x in zip(Q.coeffs, Q.exps, v):
        if x:
            total = fe_add(Q.ctx, total, fe_mul(Q.ctx, a, fe_pow(Q.ctx, int(x), c)))
    return total


FORMS = [
    DiagonalForm.sum_of_squares(field_make(3), 1),
    DiagonalForm.sum_of_squares(field_make(3), 2),
    DiagonalForm.sum_of_squares(field_make(5), 1),
    DiagonalForm.sum_of_squares(field_make(5), 2),
    DiagonalForm(field_make(5), (1, 2), (2, 3)),
    DiagonalForm(field_make(3, 2), (1, 4), (2, 4)),
]


def test_evaluate_form_examples():
    F3, F5 = field_make(3), field_make(5)
    assert evaluate_form(DiagonalForm.sum_of_squares(F3, 1), [2]) == 1
    assert evaluate_form(DiagonalForm(F5, (1, 2), (2, 3)), [1, 1]) == 3
    for Q in FORMS:
        assert evaluate_form(Q, [0] * Q.d) == 0
    with pytest.raises(InvalidInput):
        evaluate_form(FORMS[0], [1, 2])


def test_form_validation():
    F5 = field_make(5)
    with pytest.raises(InvalidInput):
        DiagonalForm(F5, (0,), (2,))
    with pytest.raises(InvalidInput):
        DiagonalForm(F5, (1,), (5,))  # gcd(5, 5) != 1
    with pytest.raises(InvalidInput):
        DiagonalForm(F5, (1,), (1,))
    with pytest.raises(InvalidInput):
        DiagonalForm(F5, (1,), (17,))
    assert DiagonalForm(F5, (1,), (17,), max_exp=20).exps == (17,)
    with pytest.raises(InvalidInput):
        DiagonalForm(F5, (1, 1), (2,))


@pytest.mark.parametrize("Q", FORMS, ids=str)
def test_vectorised_form_matches_scalar(Q):
    pts = all_points(Q.q, Q.d)
    assert Q.evaluate(pts).tolist() == [scalar_form(Q, v) for v in pts]


def test_on_sphere_examples():
    Q = DiagonalForm.sum_of_squares(field_make(3), 1)
    assert on_sphere(Q, ((1,), 0), (1,))
    assert not on_sphere(Q, ((1,), 2), (1,))
    assert on_sphere(Q, ((0,), 1), (2,))


@pytest.mark.parametrize("Q", FORMS[:5], ids=str)
def test_on_sphere_matches_enumerated_sphere(Q):
    ctx = Q.ctx
    pts = [tuple(p) for p in all_points(Q.q, Q.d)]
    for center in pts:
        for r in range(Q.q):
            members = {
                x for x in pts
                if scalar_form(Q, [fe_sub(ctx, a, b) for a, b in zip(x, center)]) == r
            }
            got = {x for x in pts if on_sphere(Q, (center, r), x)}
            assert got == members


def test_count_incidences_examples():
    Q = DiagonalForm.sum_of_squares(field_make(3), 1)
    assert count_incidences(all_points(3, 1), all_spheres(3, 1), Q) == 9
    assert count_incidences(all_points(3, 1), [], Q) == 0
    assert count_incidences([(1,)], [((1,), 0)], Q) == 1


@pytest.mark.parametrize("q", [3, 5])
@pytest.mark.parametrize("d", [1, 2])
def test_full_sets_have_q_2d_incidences(q, d):
    Q = DiagonalForm.sum_of_squares(field_make(q), d)
    assert count_incidences(all_points(q, d), all_spheres(q, d), Q) == q ** (2 * d)


@pytest.mark.parametrize("Q", FORMS, ids=str)
def test_center_grouping_matches_naive_loop(Q):
    rng = np.random.default_rng(11)
    q, d = Q.q, Q.d
    for _ in range(100):
        np_ = int(rng.integers(0, min(q**d, 12) + 1))
        ns = int(rng.integers(0, min(q ** (d + 1), 15) + 1))
        P = all_points(q, d)[rng.choice(q**d, np_, replace=False)]
        idx = rng.choice(q ** (d + 1), ns, replace=False)
        full = all_spheres(q, d)
        S = SphereSet(full.centers[idx], full.radii[idx])
        assert count_incidences(P, S, Q) == count_incidences_naive(P, S, Q)


def ring_incidence_oracle(P, S, q):
    return sum(
        sum((x - b) ** 2 for x, b in zip(p, c)) % q == r % q for p in P for c, r in S
    )


def test_count_incidences_ring_examples():
    R9 = ring_make(9)
    assert count_incidences_ring([(0,)], [((0,), 0)], R9, 1) == 1
    P, S = all_points(9, 1), all_spheres(9, 1)
    expected = ring_incidence_oracle(P.tolist(), list(S), 9)
    assert expected == 81
    assert count_incidences_ring(P, S, R9, 1) == expected
    assert count_incidences_ring([(1,)], [((0,), 1)], ring_make(15), 1) == 1


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([9, 15, 5]), st.integers(1, 2), st.integers(0, 2**32 - 1))
def test_ring_incidences_match_oracle(q, d, seed):
    rng = np.random.default_rng(seed)
    P = all_points(q, d)[rng.choice(q**d, min(q**d, 10), replace=False)]
    idx = rng.choice(q ** (d + 1), 12, replace=False)
    full = all_spheres(q, d)
    S = SphereSet(full.centers[idx], full.radii[idx])
    assert count_incidences_ring(P, S, ring_make(q), d) == ring_incidence_oracle(
        P.tolist(), list(S), q
    )


def test_distance_histogram_examples():
    Q = DiagonalForm.sum_of_squares(field_make(3), 1)
    assert distance_histogram(all_points(3, 1), Q, True) == {0: 3, 1: 6}
    assert distance_histogram([(1,)], Q, False) == {}
    assert distance_histogram([(0,), (1,)], Q, True) == {0: 2, 1: 2}


@pytest.mark.parametrize("Q", FORMS, ids=str)
def test_distance_histogram_totals(Q):
    rng = np.random.default_rng(5)
    E = all_points(Q.q, Q.d)[rng.choice(Q.q ** Q.d, min(7, Q.q ** Q.d), replace=False)]
    n = len(E)
    assert sum(distance_histogram(E, Q, True).values()) == n * n
    assert sum(distance_histogram(E, Q, False).values()) == n * n - n


def test_pinned_distance_set_examples():
    Q = DiagonalForm.sum_of_squares(field_make(3), 1)
    assert pinned_distance_set([(2,)], (2,), Q) == {0}
    assert pinned_distance_set(all_points(3, 1), (0,), Q) == {0, 1}
    assert pinned_distance_set([], (0,), Q) == frozenset()


def test_pinned_sizes_match_sets():
    Q = DiagonalForm(field_make(5), (1, 2), (2, 3))
    E = all_points(5, 2)[::3]
    sizes = pinned_distance_sizes(E, Q)
    assert sizes.tolist() == [len(pinned_distance_set(E, p, Q)) for p in E]


def test_zero_distance_pairs_examples():
    Q1 = DiagonalForm.sum_of_squares(field_make(7), 1)
    assert zero_distance_pairs(all_points(7, 1), Q1) == 0
    Q2 = DiagonalForm.sum_of_squares(field_make(5), 2)
    assert zero_distance_pairs([(0, 0), (1, 2)], Q2) == 2
    assert zero_distance_pairs([(0, 0)], Q2) == 0


def test_zero_distance_pairs_brute_force():
    Q = DiagonalForm.sum_of_squares(field_make(5), 2)
    E = [tuple(p) for p in all_points(5, 2)]
    expected = sum(
        1 for x, y in itertools.permutations(E, 2)
        if scalar_form(Q, [fe_sub(Q.ctx, a, b) for a, b in zip(x, y)]) == 0
    )
    assert zero_distance_pairs(E, Q) == expected


def test_csv_roundtrip_extension_field():
    F9 = field_make(3, 2)
    P = all_points(9, 2)[[0, 5, 17, 80]]
    text = points_to_csv(P, F9, 2)
    assert text.splitlines()[0] == "x1,x2"
    assert text.splitlines()[2] == "00,21"  # code 5 = 2 + 1*3
    assert np.array_equal(points_from_csv(text, F9, 2), P)
    S = all_spheres(9, 1)
    assert np.array_equal(spheres_from_csv(spheres_to_csv(S, F9, 1), F9, 1).radii, S.radii)


def test_csv_rejects_bad_rows():
    F5 = field_make(5)
    with pytest.raises(InvalidInput):
        points_from_csv("x1,x2\n1,7\n", F5, 2)
    with pytest.raises(InvalidInput):
        points_from_csv("1,2\n1,2\n", F5, 2)
    with pytest.raises(InvalidInput):
        spheres_from_csv("1,2\n", F5, 2)
