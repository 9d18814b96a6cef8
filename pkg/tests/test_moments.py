"""Generating-function terms (alpha/beta, signed splits) and the two-moment
subset counts, against pinned values and literal subset enumeration."""

from math import factorial

import pytest

from fqcount.counting import (
    alpha_beta,
    closed_form_terms,
    moment_subset_count,
    moment_subset_count_elementary,
    moment_subset_count_m1,
    s_plus_minus,
    s_plus_minus_type_sums,
)
from fqcount.ff import make_field

from helpers import ref_first_distinct, ref_two_moment_subsets


def test_alpha_beta_pinned_values():
    f9 = make_field(3, 2)
    assert alpha_beta(f9, 0) == (1, 1)
    assert alpha_beta(f9, 2) == (3, 6)
    assert alpha_beta(f9, 3) == (3, 6)


def test_alpha_beta_preconditions():
    f3 = make_field(3, 1)
    with pytest.raises(ValueError):
        alpha_beta(f3, 2)  # odd extension degree
    with pytest.raises(ValueError):
        alpha_beta(make_field(3, 2), -1)


def test_s_plus_minus_pinned_values():
    f9 = make_field(3, 2)
    assert s_plus_minus(f9, 1) == (0, -3)
    assert s_plus_minus(f9, 3) == (9, -27)


@pytest.mark.parametrize("p,e,max_n", [(3, 2, 10), (5, 2, 8)])
def test_s_plus_minus_routes_agree(p, e, max_n):
    """The call itself asserts closed form == type sum; also compare the
    exposed direct route explicitly."""
    f = make_field(p, e)
    for n in range(1, max_n + 1):
        closed = s_plus_minus(f, n)
        assert closed == s_plus_minus_type_sums(f, n)


def test_closed_form_terms_invariants():
    f9 = make_field(3, 2)
    for n in range(1, 9):
        terms = closed_form_terms(f9, n)
        a_n, b_n = terms.alpha_n, terms.beta_n
        assert terms.s_plus == factorial(n) * ((-1) ** n * a_n + b_n) // 2
        assert terms.s_minus == factorial(n) * ((-1) ** n * a_n - b_n) // 2
        a_prev, b_prev = alpha_beta(f9, n - 1)
        assert terms.d_terms == (a_prev + (-1) ** (n - 1) * b_prev, a_n - (-1) ** n * b_n)
        assert terms.p_terms == (a_prev - (-1) ** (n - 1) * b_prev, a_n + (-1) ** n * b_n)
        # the two signed combinations at the same argument sum to 2*alpha
        assert terms.d_terms[1] + terms.p_terms[1] == 2 * a_n


def test_moment_subset_pinned_values():
    f9 = make_field(3, 2)
    assert [moment_subset_count(f9, n).value for n in (1, 2, 3, 4)] == [1, 0, 0, 2]
    assert moment_subset_count(f9, 9).value == 1  # the whole field qualifies
    assert moment_subset_count_elementary is moment_subset_count


@pytest.mark.parametrize("n", range(1, 10))
def test_moment_subset_against_reference_q9(n):
    f9 = make_field(3, 2)
    assert moment_subset_count(f9, n).value == ref_two_moment_subsets(f9, n)


@pytest.mark.parametrize("n", range(1, 7))
def test_moment_subset_against_reference_q25(n):
    f25 = make_field(5, 2)
    assert moment_subset_count(f25, n).value == ref_two_moment_subsets(f25, n)


def test_moment_subset_preconditions():
    with pytest.raises(ValueError):
        moment_subset_count(make_field(3, 1), 2)  # odd degree
    with pytest.raises(ValueError):
        moment_subset_count(make_field(2, 2), 2)  # even characteristic
    f9 = make_field(3, 2)
    with pytest.raises(ValueError):
        moment_subset_count(f9, 0)
    with pytest.raises(ValueError):
        moment_subset_count(f9, 10)


def test_m1_pinned_values():
    f9 = make_field(3, 2)
    assert moment_subset_count_m1(f9, 2).value == 1  # only S = {0}
    assert moment_subset_count_m1(f9, 3).value == 0
    assert moment_subset_count_m1(f9, 4).value == 8
    with pytest.raises(ValueError):
        moment_subset_count_m1(f9, 1)
    with pytest.raises(ValueError):
        moment_subset_count_m1(f9, 11)  # past q + 1


@pytest.mark.parametrize("n", range(2, 11))
def test_m1_against_reference_q9(n):
    f9 = make_field(3, 2)
    assert moment_subset_count_m1(f9, n).value == ref_first_distinct(f9, n)


@pytest.mark.parametrize("n", range(2, 7))
def test_m1_against_reference_q25(n):
    f25 = make_field(5, 2)
    assert moment_subset_count_m1(f25, n).value == ref_first_distinct(f25, n)
