import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eur_lab.bounds import (
    BoundReport,
    ProbVector,
    bound_report,
    coles_piani,
    direct_sum,
    is_majorized,
    largest_two_moduli,
    maassen_uffink,
    measurement_distribution,
    multi_measurement_bound,
    shannon_entropy,
    sorted_desc,
    strong_direct_sum_bound,
    tensor_majorization_bound,
    tensor_product,
)
from eur_lab.sampling import sample_haar_unitary, sample_pure_state
from eur_lab.search import NormProfile, multi_measurement_profile, r_profile, s_profile

from oracles import fourier_matrix

weights_strategy = st.lists(
    st.floats(min_value=0.0, max_value=10.0, allow_nan=False), min_size=1, max_size=12
).filter(lambda w: sum(w) > 1e-6)


def normalized(w):
    arr = np.asarray(w, dtype=float)
    return arr / arr.sum()


def test_probvector_validation():
    ProbVector(np.array([0.5, 0.5]))
    ProbVector(np.array([0.25] * 8), 2.0)
    with pytest.raises(ValueError):
        ProbVector(np.array([0.6, 0.6]))
    with pytest.raises(ValueError):
        ProbVector(np.array([-0.1, 1.1]))
    with pytest.raises(ValueError):
        ProbVector(np.array([]))


def test_entropy_known_values():
    assert shannon_entropy(np.array([1.0])) == 0.0
    assert shannon_entropy(np.array([1.0, 0.0])) == 0.0
    assert shannon_entropy(np.full(4, 0.25)) == pytest.approx(math.log(4), abs=1e-14)
    assert shannon_entropy(ProbVector(np.array([0.5, 0.5]))) == pytest.approx(
        math.log(2), abs=1e-14
    )


@given(weights_strategy)
@settings(deadline=None, max_examples=150)
def test_entropy_bounds_property(w):
    p = normalized(w)
    h = shannon_entropy(p)
    assert -1e-12 <= h <= math.log(p.size) + 1e-12


@given(weights_strategy, weights_strategy)
@settings(deadline=None, max_examples=100)
def test_entropy_additive_under_tensor(w1, w2):
    p, q = normalized(w1), normalized(w2)
    prod = tensor_product(ProbVector(p), ProbVector(q))
    assert prod.mass == pytest.approx(1.0, abs=1e-9)
    assert shannon_entropy(prod) == pytest.approx(
        shannon_entropy(p) + shannon_entropy(q), abs=1e-9
    )


@given(weights_strategy, st.floats(min_value=0.0, max_value=1.0))
@settings(deadline=None, max_examples=150)
def test_entropy_schur_concave(w, t):
    # Mixing toward uniform is majorized by the original and cannot lower H.
    p = normalized(w)
    mixed = (1.0 - t) * p + t * np.full(p.size, 1.0 / p.size)
    assert is_majorized(mixed, p)
    assert shannon_entropy(mixed) >= shannon_entropy(p) - 1e-9


def test_majorization_basics():
    assert is_majorized([0.5, 0.5], [1.0, 0.0])
    assert not is_majorized([1.0, 0.0], [0.5, 0.5])
    # Padding handles unequal lengths.
    assert is_majorized([0.25] * 4, [0.5, 0.5])
    with pytest.raises(ValueError):
        is_majorized([0.5, 0.5], [0.7, 0.7])


def test_sorted_desc():
    assert np.array_equal(sorted_desc([0.1, 0.7, 0.2]), [0.7, 0.2, 0.1])


def test_direct_sum_masses_add():
    d = direct_sum([ProbVector(np.array([1.0])), ProbVector(np.array([0.3, 0.7]))])
    assert d.mass == pytest.approx(2.0)
    assert d.weights.size == 3


def test_measurement_distribution(stream, haar_4):
    psi = sample_pure_state(stream.child(60), 4)
    p = measurement_distribution(np.eye(4, dtype=complex), psi)
    assert np.allclose(p.weights, np.abs(psi) ** 2, atol=1e-14)
    q = measurement_distribution(haar_4, psi)
    assert q.weights.sum() == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        measurement_distribution(haar_4, psi * 2.0)


def test_largest_two_moduli():
    m = np.array([[0.9, 0.1], [0.2, 0.3]])
    c, c2 = largest_two_moduli(m)
    assert (c, c2) == (0.9, 0.3)


def test_maassen_uffink_fourier():
    for n in (2, 3, 4, 8):
        assert maassen_uffink(fourier_matrix(n)) == pytest.approx(
            math.log(n), abs=1e-12
        )


def test_coles_piani_rotation_product_oracle():
    # Product of two plane rotations built from the 3-4-5 and 7-24-25 triples.
    # Its nine entry moduli are {0.8, 0.576, 0.168, 0.6, 0.768, 0.224, 0, 0.28,
    # 0.96}: the maximum 0.96 appears once and the runner-up is 0.8, so the
    # correction term is live and the value is worked out by hand below.
    ca, sa, cb, sb = 0.8, 0.6, 0.96, 0.28
    rxy = np.array([[ca, -sa, 0.0], [sa, ca, 0.0], [0.0, 0.0, 1.0]])
    ryz = np.array([[1.0, 0.0, 0.0], [0.0, cb, -sb], [0.0, sb, cb]])
    u = rxy @ ryz
    expected = -2.0 * math.log(0.96) + (0.5 - 0.48) * math.log(0.96**2 / 0.8**2)
    assert coles_piani(u) == pytest.approx(expected, abs=1e-13)


def test_coles_piani_collapses_to_maassen_uffink_in_dim_2(stream):
    # Any 2-by-2 unitary has |u00| = |u11| and |u01| = |u10|, so the top two
    # entry moduli tie and the correction vanishes.
    u = sample_haar_unitary(stream.child(62), 2)
    assert coles_piani(u) == pytest.approx(maassen_uffink(u), abs=1e-13)


def test_coles_piani_dominates_maassen_uffink(stream):
    for i, n in enumerate((2, 3, 5, 8)):
        u = sample_haar_unitary(stream.child(61, i), n)
        assert coles_piani(u) >= maassen_uffink(u) - 1e-12


def test_strong_and_tensor_bounds_fourier_2():
    sp = s_profile(fourier_matrix(2))
    assert strong_direct_sum_bound(sp) == pytest.approx(
        0.6047219371592851, abs=1e-12
    )
    assert tensor_majorization_bound(r_profile(sp)) == pytest.approx(
        0.584692367784131, abs=1e-12
    )


def test_profile_kind_checks(haar_4):
    sp = s_profile(haar_4)
    with pytest.raises(ValueError):
        tensor_majorization_bound(sp)
    with pytest.raises(ValueError):
        strong_direct_sum_bound(r_profile(sp))
    with pytest.raises(ValueError):
        multi_measurement_bound(sp)


def test_decreasing_profile_rejected():
    bad = NormProfile("R", np.array([0.9, 0.5, 1.0]), np.ones(3, bool), 3)
    with pytest.raises(ValueError):
        tensor_majorization_bound(bad)


def test_multi_bound_identity_fourier():
    prof = multi_measurement_profile([np.eye(2, dtype=complex), fourier_matrix(2)])
    assert multi_measurement_bound(prof) == pytest.approx(
        0.6047219371592851, abs=1e-12
    )


def test_bound_report_assembles(stream):
    u = sample_haar_unitary(stream.child(62), 4)
    sp = s_profile(u)
    rep = bound_report(u, sp, min_upper=1.5)
    assert isinstance(rep, BoundReport)
    assert rep.b_mu == pytest.approx(maassen_uffink(u), abs=1e-14)
    assert rep.b_cp == pytest.approx(coles_piani(u), abs=1e-14)
    assert rep.strong == pytest.approx(strong_direct_sum_bound(sp), abs=1e-14)
    assert rep.h_q == pytest.approx(
        tensor_majorization_bound(r_profile(sp)), abs=1e-14
    )
    assert rep.min_upper == 1.5
    assert set(rep.bounds()) == {"b_mu", "b_cp", "h_q", "strong"}
    c, c2 = largest_two_moduli(u)
    assert (rep.c, rep.c2) == (c, c2)
