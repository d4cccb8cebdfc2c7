from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
from hypothesis import given, settings, strategies as st

from reciplab.modlinalg import (nullspace_mod, rank_mod, rational_left_kernel, rational_rank, solve_congruences,
                                span_coefficients)


def _matrices(max_rows=4, max_cols=4, lo=-6, hi=6):
    return st.integers(1, max_rows).flatmap(lambda r: st.integers(1, max_cols).flatmap(
        lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r)))


@settings(max_examples=300, deadline=None)
@given(_matrices(), st.sampled_from([2, 3, 5, 7]))
def test_span_membership_brute_force(rows, ell):
    dim = len(rows[0])
    span = set()
    for coeffs in itertools.product(range(ell), repeat=len(rows)):
        span.add(tuple(sum(c * r[j] for c, r in zip(coeffs, rows)) % ell for j in range(dim)))
    assert rank_mod(rows, ell) == round(np.log(len(span)) / np.log(ell))
    for v in itertools.product(range(ell), repeat=dim):
        c = span_coefficients(rows, list(v), ell)
        assert (c is not None) == (v in span)
        if c is not None:
            assert tuple(sum(ci * r[j] for ci, r in zip(c, rows)) % ell for j in range(dim)) == v


@settings(max_examples=300, deadline=None)
@given(_matrices(), st.sampled_from([2, 3, 5, 7, 11]))
def test_nullspace(A, ell):
    B = nullspace_mod(A, ell)
    n = len(A[0])
    assert B.shape == (n - rank_mod(A, ell), n)
    assert not (np.array(A, dtype=np.int64) @ B.T % ell).any()
    assert rank_mod(B, ell) == len(B) if len(B) else True


@settings(max_examples=200, deadline=None)
@given(_matrices())
def test_rational_left_kernel(rows):
    K = rational_left_kernel(rows)
    assert len(K) == len(rows) - rational_rank(rows)
    for c in K:
        assert all(isinstance(x, int) for x in c)
        assert all(sum(ci * r[j] for ci, r in zip(c, rows)) == 0 for j in range(len(rows[0])))


def test_rational_rank_exact():
    assert rational_rank([[1, 2], [2, 4]]) == 1
    assert rational_rank([[Fraction(1, 3), 1], [1, 3]]) == 1
    assert rational_rank([[1, 0], [0, 1], [1, 1]]) == 2


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 3).flatmap(lambda r: st.integers(1, 3).flatmap(
    lambda c: st.tuples(st.lists(st.lists(st.integers(-12, 12), min_size=c, max_size=c), min_size=r, max_size=r),
                        st.lists(st.integers(-12, 12), min_size=r, max_size=r)))),
       st.sampled_from([1, 2, 4, 6, 8, 12]))
def test_solve_congruences_brute_force(Ab, W):
    A, b = Ab
    n = len(A[0])
    brute = sorted(x for x in itertools.product(range(W), repeat=n)
                   if all((sum(a * xi for a, xi in zip(row, x)) - y) % W == 0 for row, y in zip(A, b)))
    sols, complete = solve_congruences(A, b, W)
    assert complete
    assert sols == brute


def test_solve_congruences_limit():
    sols, complete = solve_congruences([[0, 0]], [0], 8, limit=5)
    assert len(sols) == 5 and not complete
