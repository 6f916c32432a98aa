import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cascade_infer import (
    ParameterError,
    ValidationError,
    from_pmf,
    geometric,
    parse_noise_spec,
    s_table,
    sample,
)


def geometric_sk_closed_form(q: float, k: int) -> float:
    """Closed form for P(n_j - n_i >= k) under untruncated geometric noise,
    used as the independent oracle for the double-summation table."""
    return (1 - q) ** max(0, k) * (1 - (1 - q) ** (1 - min(0, k)) / (2 - q))


def test_from_pmf_point_mass():
    m = from_pmf({0: 1.0})
    assert m.pmf(0) == 1.0 and m.support_width == 0


def test_from_pmf_uniform01():
    m = from_pmf({0: 0.5, 1: 0.5})
    assert m.pmf(0) == m.pmf(1) == 0.5


def test_from_pmf_tolerance_renormalizes():
    m = from_pmf({0: 0.5, 1: 0.25, 2: 0.25 + 1e-10})
    assert abs(m.probs.sum() - 1.0) < 1e-15


def test_from_pmf_rejects():
    with pytest.raises(ValidationError):
        from_pmf({0: 0.5, 1: 0.4})
    with pytest.raises(ParameterError):
        from_pmf({-1: 1.0})
    with pytest.raises(ParameterError):
        from_pmf({})


def test_geometric_head_probabilities():
    m = geometric(0.5)
    assert abs(m.pmf(0) - 0.5) < 1e-11
    assert abs(m.pmf(1) - 0.25) < 1e-11


def test_geometric_truncation_width():
    # (1-q)^K <= 1e-12 at q=0.9 forces K <= 13
    m = geometric(0.9, tail_eps=1e-12)
    assert m.support_width <= 13
    assert m.tail_mass_bound <= 1e-12


def test_geometric_param_errors():
    for q in (0.0, 1.0, -0.2, 1.5):
        with pytest.raises(ParameterError):
            geometric(q)


def test_sk_point_mass():
    sk = s_table(from_pmf({3: 1.0}), k_max=4)
    for k in range(-4, 1):
        assert sk.s(k) == 1.0
    for k in range(1, 5):
        assert sk.s(k) == 0.0


def test_sk_geometric_against_closed_form():
    m = geometric(0.5)
    sk = s_table(m)
    assert abs(sk.s0 - 2 / 3) <= 10 * m.tail_mass_bound
    assert abs(sk.s2 - 1 / 6) <= 10 * m.tail_mass_bound
    worst = max(
        abs(sk.s(k) - geometric_sk_closed_form(0.5, k))
        for k in range(sk.k_min, sk.k_max + 1)
    )
    assert worst <= 10 * m.tail_mass_bound


def test_sk_uniform01():
    # four equally weighted (n_i, n_j) pairs have differences -1, 0, 0, 1
    sk = s_table(from_pmf({0: 0.5, 1: 0.5}))
    assert sk.s0 == 0.75
    assert sk.s(1) == 0.25
    assert sk.s2 == 0.0


@pytest.mark.parametrize(
    "model",
    [geometric(0.5), geometric(0.9), from_pmf({0: 0.5, 1: 0.5}), from_pmf({0: 0.2, 2: 0.5, 5: 0.3})],
    ids=["geo05", "geo09", "unif01", "sparse"],
)
def test_sk_monotone_and_symmetric(model):
    sk = s_table(model, k_max=8)
    vals = [sk.s(k) for k in range(sk.k_min, sk.k_max + 1)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))
    assert abs(sk.s0 + sk.s(1) - 1.0) <= 2 * max(model.tail_mass_bound, 1e-15)


def test_sk_requires_k_max_two():
    with pytest.raises(ParameterError):
        s_table(geometric(0.5), k_max=1)


def test_sample_point_mass(rng):
    m = from_pmf({3: 1.0})
    assert all(sample(m, rng) == 3 for _ in range(50))


def test_sample_geometric_mean(rng):
    m = geometric(0.5)
    draws = sample(m, rng, size=1_000_000)
    assert draws.min() >= 0
    # mean (1-q)/q = 1, sd of the mean = sqrt((1-q)/q^2 / n)
    assert abs(draws.mean() - 1.0) <= 3 * math.sqrt(2 / 1_000_000)


def test_sample_matches_table(rng):
    # empirical pairwise-difference survival vs the exact table
    m = from_pmf({0: 0.3, 1: 0.5, 4: 0.2})
    sk = s_table(m, k_max=6)
    n = 1_000_000
    diff = sample(m, rng, size=n) - sample(m, rng, size=n)
    for k in range(-5, 6):
        emp = np.count_nonzero(diff >= k) / n
        sigma = math.sqrt(sk.s(k) * (1 - sk.s(k)) / n)
        assert abs(emp - sk.s(k)) <= 3 * sigma + 1e-12


@settings(max_examples=60, deadline=None)
@given(
    st.dictionaries(
        st.integers(min_value=0, max_value=10),
        st.floats(min_value=0.01, max_value=1.0),
        min_size=1,
        max_size=6,
    )
)
def test_sk_invariants_random_pmfs(raw):
    total = sum(raw.values())
    model = from_pmf({k: v / total for k, v in raw.items()})
    sk = s_table(model, k_max=12)
    vals = [sk.s(k) for k in range(sk.k_min, sk.k_max + 1)]
    assert all(a >= b - 1e-12 for a, b in zip(vals, vals[1:]))
    assert abs(sk.s0 + sk.s(1) - 1.0) <= 1e-9
    width = model.support_width
    assert sk.s(-min(12, width)) == 1.0
    if width < 12:
        assert sk.s(width + 1) == 0.0


def test_parse_noise_spec_round_trip():
    m = parse_noise_spec("geometric:q=0.5")
    assert m.spec == "geometric:q=0.5"
    m2 = parse_noise_spec("pmf:0=0.5,1=0.5")
    assert m2.pmf(1) == 0.5
    with pytest.raises(ParameterError):
        parse_noise_spec("normal:mu=0")
