import math
from fractions import Fraction
from itertools import permutations, product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from surfacelab.graphs import LabeledGraph, path_graph
from surfacelab.sn_calculus import (
    SetPartition, cassidy_projector, integrate_entries, iota, obey_indicator, partition_operator,
    subperm, symbolic_projector_b1, theta, theta_numeric, theta_numeric_bruteforce, theta_symbolic,
)
from surfacelab.symmetric import conjugate, dim, partitions_of, plus_n
from surfacelab.words import parse_word


def brute_integral(pairs, n):
    total = 0
    for s in permutations(range(n)):
        total += all(s[i] == j for i, j in pairs)
    return Fraction(total, math.factorial(n))


def test_integrate_examples():
    assert integrate_entries([(0, 1)], 5) == Fraction(1, 5)
    assert integrate_entries([(0, 0), (0, 1)], 5) == 0
    assert integrate_entries([(0, 1), (2, 3)], 5) == Fraction(1, 20)
    assert integrate_entries([(0, 1), (2, 3)]).at(7) == Fraction(1, 42)


@settings(max_examples=60)
@given(st.integers(1, 5).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=4))))
def test_integrate_matches_brute_force(case):
    n, pairs = case
    assert integrate_entries(pairs, n) == brute_integral(pairs, n)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_integrate_total_probability(k):
    n = 5
    rows = list(range(k))
    total = sum(integrate_entries(list(zip(rows, cols)), n) for cols in product(range(n), repeat=k))
    assert total == 1


def test_set_partition_type():
    p = SetPartition.from_blocks(4, [(0, 2), (1,), (3,)])
    assert len(p) == 3 and p.blocks == ((0, 2), (1,), (3,))
    assert p <= SetPartition.from_blocks(4, [(0, 2, 3), (1,)])
    with pytest.raises(ValueError):
        SetPartition.from_blocks(3, [(0, 1), (1, 2)])


def test_subperm_examples():
    assert len(subperm(1)) == 2
    assert subperm(0) == (SetPartition(0, ()),)
    for b in (1, 2, 3):
        sp = set(subperm(b))
        for s in permutations(range(b)):
            assert iota(s) in sp
        for p in sp:
            assert any(p <= iota(s) for s in permutations(range(b)))


def test_subperm_counts():
    # partial matchings between two b-sets: sum_k C(b,k)^2 k!
    for b in range(5):
        assert len(subperm(b)) == sum(math.comb(b, k) ** 2 * math.factorial(k) for k in range(b + 1))


def test_partition_operator_entries():
    pi = SetPartition.from_blocks(2, [(0, 1)])
    M = partition_operator(pi, 4).toarray()
    assert (M == np.eye(4)).all()
    pi = SetPartition.from_blocks(2, [(0,), (1,)])
    assert (partition_operator(pi, 4).toarray() == 1 - np.eye(4)).all()


def test_projector_b1_is_centering():
    for n in (2, 3, 6):
        p = cassidy_projector((1,), n)
        dense = np.array(p.as_fractions(), dtype=object)
        assert (dense == np.eye(n, dtype=object) - Fraction(1, n)).all()
    sym = symbolic_projector_b1()
    assert sym["I"].at(9) == 1 and sym["J"].at(9) == Fraction(-1, 9)


def test_projector_b0():
    p = cassidy_projector((), 5)
    assert p.numer.shape == (1, 1) and p.trace() == 1


def test_projector_trace_example():
    assert cassidy_projector((2,), 5).trace() == 5


@pytest.mark.parametrize("lam,n", [(lam, n) for b in (1, 2) for lam in partitions_of(b) for n in range(2 * b, 7)])
def test_projector_properties(lam, n):
    p = cassidy_projector(lam, n)
    assert p.is_idempotent()
    assert p.is_symmetric()
    assert p.trace() == dim(lam) * dim(plus_n(lam, n))
    rng = np.random.default_rng(0)
    for _ in range(20):
        assert p.commutes_with(rng.permutation(n))


def test_projector_precondition():
    with pytest.raises(ValueError):
        cassidy_projector((2, 1), 5)


def test_obey_examples():
    empty = LabeledGraph(0, ())
    assert obey_indicator(empty, np.zeros((4, 3), dtype=int) + np.arange(3))
    loop = LabeledGraph(1, ((0, 0, 1),))
    ident = np.tile(np.arange(3), (4, 1))
    assert obey_indicator(loop, ident)
    moved = ident.copy()
    moved[0] = [1, 0, 2]
    assert not obey_indicator(loop, moved)
    path = LabeledGraph(3, ((0, 1, 1), (1, 2, 2)))
    g = ident.copy()
    g[0] = [1, 0, 2]
    g[1] = [0, 2, 1]
    assert obey_indicator(path, g)


def test_theta_trivial_loop():
    loop = LabeledGraph(1, ((0, 0, 1),))
    for n in (2, 3, 4, 5):
        assert theta_numeric((n,), loop, n) == 1
    assert theta((), loop, 6) == 1


@pytest.mark.parametrize("n", [2, 3])
def test_theta_numeric_vs_bruteforce(n):
    loop = LabeledGraph(1, ((0, 0, 1),))
    two = LabeledGraph(2, ((0, 1, 1), (1, 0, 2)))
    for Y in (loop, two):
        for mu in partitions_of(n):
            assert theta_numeric(mu, Y, n) == theta_numeric_bruteforce(mu, Y, n)


def test_theta_symbolic_numeric_agree():
    graphs = [LabeledGraph(1, ((0, 0, 1),)), path_graph(parse_word("a1 b1")),
              LabeledGraph(2, ((0, 1, 1), (1, 0, 1)))]
    for Y in graphs:
        for b in (0, 1):
            for lam in partitions_of(b):
                sym = theta_symbolic(lam, Y)
                for n in range(max(2 * b, Y.v, 1), 8):
                    if sum(lam) and n - b < lam[0]:
                        continue
                    num = theta_numeric(plus_n(lam, n), Y, n)
                    assert sym.at(n) == num
                    # the closed form has poles below max e_f + 2b
                    if n >= max(Y.e_f()) + 2 * b:
                        assert sym.ratfn().at(n) == num


def test_theta_dual_invariance():
    Y = path_graph(parse_word("a1 b1"))
    for n in (3, 4, 5):
        for mu in partitions_of(n):
            dual = tuple(conjugate(mu))
            assert dim(mu) * theta_numeric(mu, Y, n) == dim(dual) * theta_numeric(dual, Y, n)
