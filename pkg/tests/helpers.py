"""Small pure-python reference enumerations shared across test modules.

Deliberately naive and independent of the package's vectorized oracle module:
these define ground truth by the most literal route available.
"""

import itertools


def ref_nk_distribution(field, u_high, n, ell):
    """Root-count tally over all tails, one polynomial evaluation at a time."""
    q = field.q
    tally = [0] * (q + 1)
    high_degrees = list(range(n - 1, ell, -1))
    for tail in itertools.product(range(q), repeat=ell + 1):
        roots = 0
        for xi in range(q):
            x = field.element(xi)
            acc = field.pow_(x, n)
            for coeff, d in zip(u_high, high_degrees):
                acc = field.add(acc, field.mul(coeff, field.pow_(x, d)))
            for ci, d in zip(tail, range(ell, -1, -1)):
                acc = field.add(acc, field.mul(field.element(ci), field.pow_(x, d)))
            if acc.is_zero():
                roots += 1
        tally[roots] += 1
    return tally


def ref_subset_sum_counts(field, n):
    """M(n, b) for every b by direct subset enumeration."""
    q = field.q
    counts = [0] * q
    for subset in itertools.combinations(range(q), n):
        total = field.zero
        for i in subset:
            total = field.add(total, field.element(i))
        counts[total.index] += 1
    return counts


def ref_two_moment_subsets(field, n):
    """Subsets of size n with vanishing first and second power sums."""
    q = field.q
    count = 0
    for subset in itertools.combinations(range(q), n):
        s1 = field.zero
        s2 = field.zero
        for i in subset:
            x = field.element(i)
            s1 = field.add(s1, x)
            s2 = field.add(s2, field.mul(x, x))
        if s1.is_zero() and s2.is_zero():
            count += 1
    return count


def ref_first_distinct(field, n):
    """(n-1)-subsets whose forced completion zeroes the second power sum."""
    q = field.q
    count = 0
    for subset in itertools.combinations(range(q), n - 1):
        s1 = field.zero
        s2 = field.zero
        for i in subset:
            x = field.element(i)
            s1 = field.add(s1, x)
            s2 = field.add(s2, field.mul(x, x))
        last = field.neg(s1)
        if field.add(s2, field.mul(last, last)).is_zero():
            count += 1
    return count


def ref_quadlin(field, a, a0, bvec, b0):
    """Solution count over F_q^n by literal tuple enumeration."""
    q = field.q
    n = len(a)
    count = 0
    for tup in itertools.product(range(q), repeat=n):
        quad = field.zero
        lin = field.zero
        for ai, bi, xi in zip(a, bvec, tup):
            x = field.element(xi)
            quad = field.add(quad, field.mul(ai, field.mul(x, x)))
            lin = field.add(lin, field.mul(bi, x))
        if quad == a0 and lin == b0:
            count += 1
    return count
