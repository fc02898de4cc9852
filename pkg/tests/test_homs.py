import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from surfacelab.algebra import AlgebraElement
from surfacelab.homs import (
    CapExceeded, HomTuple, SchreierGraph, _commutator_buckets, brute_force_count, enumerate_homs,
    exact_fix_mean_generator, fix_stats, fix_values, fixed_points, frobenius_count, hom_array,
    make_rng, perm_matrix, pi_norm, pi_norm_dense, restricted_trace_exact, sample_hom, sample_homs,
)
from surfacelab.words import parse_word


def test_enumeration_small():
    assert len(list(enumerate_homs(1))) == 1
    assert len(list(enumerate_homs(2))) == 16
    assert len(list(enumerate_homs(3))) == frobenius_count(3) == 486


def test_frobenius_examples():
    assert frobenius_count(1) == 1
    assert frobenius_count(2) == 16
    assert frobenius_count(3) == 486


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_enumeration_matches_frobenius_and_brute_force(n):
    homs = hom_array(n)
    assert len(homs) == frobenius_count(n) == brute_force_count(n)
    assert len({h.tobytes() for h in homs}) == len(homs)
    assert all(HomTuple(n, h).satisfies_relator() for h in homs[:: max(1, len(homs) // 500)])


def test_enumeration_cap():
    with pytest.raises(CapExceeded):
        next(enumerate_homs(6))


def test_sample_n1():
    phi = sample_hom(1, seed=0)
    assert phi.gens.shape == (4, 1)


def test_seed_required():
    with pytest.raises(ValueError):
        make_rng(None)


def test_sampler_uniform_n2():
    draws = sample_homs(2, 10_000, seed=11)
    counts = Counter(d.tobytes() for d in draws)
    assert len(counts) == 16
    p = 1 / 16
    sd = math.sqrt(10_000 * p * (1 - p))
    assert all(abs(c - 10_000 * p) <= 3 * sd for c in counts.values())


def _enumerated_fix_mean(n, word_letter=0):
    # sum over pairs of pairs bucketed by commutator, without materialising tuples
    P, buckets = _commutator_buckets(n)
    num = den = 0
    for sigma, pairs in buckets.items():
        other = buckets.get(tuple(np.argsort(sigma)), ())
        if not other:
            continue
        fa = sum(int((P[a] == np.arange(n)).sum()) for a, _ in pairs)
        num += fa * len(other)
        den += len(pairs) * len(other)
    return Fraction(num, den)


@pytest.mark.slow
def test_sampler_fix_mean_n5():
    exact = _enumerated_fix_mean(5)
    assert exact == exact_fix_mean_generator(5)
    st_ = fix_stats(parse_word("a1"), 5, draws=100_000, seed=3)
    assert abs(st_.mean - float(exact)) <= 3 * st_.stderr


def test_samplers_agree_n6():
    a1 = parse_word("a1")
    x = fix_values(a1, sample_homs(6, 10_000, seed=5, method="class-weighted"))
    y = fix_values(a1, sample_homs(6, 10_000, seed=6, method="rejection"))
    vals = sorted(set(x.tolist()) | set(y.tolist()))
    table = [[int((x == v).sum()) for v in vals], [int((y == v).sum()) for v in vals]]
    table = [[a, b] for a, b in zip(*table) if a + b >= 5]
    assert stats.chi2_contingency(np.array(table).T).pvalue > 0.01


def test_fix_stats_examples():
    for n in (2, 3, 4):
        assert fix_stats(parse_word(""), n).mean == n
    assert fix_stats(parse_word("a1"), 2).mean == 1
    assert fix_stats(parse_word("a1 a1"), 2).mean == 2


@pytest.mark.parametrize("n", [2, 3, 4])
def test_exact_fix_mean_generator(n):
    assert fix_stats(parse_word("a1"), n).mean == exact_fix_mean_generator(n)


@settings(max_examples=15)
@given(st.sampled_from(["a1", "a1 b1", "a1 a1", "a1 b1 A1 a2"]), st.sampled_from(["b1", "a2 B1", "b2 b2 a1"]))
def test_fix_mean_conjugation_invariant(text, conj):
    g, s = parse_word(text), parse_word(conj)
    for n in (3, 4):
        assert fix_stats(g, n).mean == fix_stats(s * g * s.inverse(), n).mean


@pytest.mark.parametrize("text", ["", "a1", "a1 b1", "a1 a1 B2"])
def test_trace_on_complement_is_fix_minus_one(text):
    g = parse_word(text)
    for n in (2, 3):
        homs = hom_array(n)
        tr = sum((restricted_trace_exact(g, HomTuple(n, h)) for h in homs), Fraction(0)) / len(homs)
        assert tr == fix_stats(g, n).mean - 1


def test_schreier_graph_is_regular():
    phi = sample_hom(7, seed=2)
    S = SchreierGraph.of(phi)
    for f, succ in S.edges.items():
        assert sorted(succ.tolist()) == list(range(7))
    assert S.out_edge(1, 0) == int(phi.gens[0][0])


def test_pi_norm_examples():
    phi = sample_hom(6, seed=1)
    assert math.isclose(pi_norm(AlgebraElement.identity(), phi), 1.0, rel_tol=1e-9)
    for n in (3, 5, 8):
        cyc = np.roll(np.arange(n), -1)
        gens = np.stack([cyc, np.arange(n), np.arange(n), np.arange(n)])
        phi = HomTuple(n, gens)
        assert phi.satisfies_relator()
        x = AlgebraElement({"a1": 1, "A1": 1})
        expect = max(abs(2 * math.cos(2 * math.pi * k / n)) for k in range(1, n))
        assert math.isclose(pi_norm(x, phi), expect, rel_tol=1e-8)
        # circulant eigenvalues against a dense diagonalisation
        M = perm_matrix(cyc) + perm_matrix(cyc).T
        ev = np.linalg.eigvalsh(M)
        assert math.isclose(2 * math.cos(2 * math.pi / n), sorted(ev)[-2], rel_tol=1e-9)


@pytest.mark.parametrize("seed", range(5))
def test_pi_norm_generator_sum(seed):
    x = AlgebraElement.generator_sum()
    phi = sample_hom(8, seed=seed)
    v = pi_norm(x, phi)
    assert v <= 8 + 1e-9
    assert math.isclose(v, pi_norm_dense(x, phi), rel_tol=1e-7)
    from scipy.sparse.csgraph import connected_components
    adj = sum(perm_matrix(phi.gens[i]) for i in range(4))
    if connected_components(adj + adj.T, directed=False)[0] == 1:
        assert v < 8


@settings(max_examples=10)
@given(st.integers(0, 10_000))
def test_power_iteration_matches_dense(seed):
    phi = sample_hom(6, seed=seed)
    x = AlgebraElement({"a1": 1, "A1": 1, "b1 a2": 2, "A2 B1": 2})
    assert math.isclose(pi_norm(x, phi), pi_norm_dense(x, phi), rel_tol=1e-7, abs_tol=1e-9)


@settings(max_examples=10)
@given(st.integers(2, 25), st.integers(0, 10_000))
def test_samples_satisfy_relator(n, seed):
    phi = sample_hom(n, seed=seed)
    assert phi.satisfies_relator()


def test_sampling_is_seed_deterministic():
    assert np.array_equal(sample_homs(9, 20, seed=4), sample_homs(9, 20, seed=4))
