import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from surfacelab.algebra import AlgebraElement
from surfacelab.expansion import (
    ChebyshevExpansion, fix_mean_estimate, fourier_bound_check, hook_dim_poly, laurent_coefficients,
    markov_brothers_check, master_certificate, numerator_degree, phi_gamma, phi_gamma_at, q_polynomial,
    rational_derivative_check, verify_assumption1,
)
from surfacelab.homs import CapExceeded, fix_stats
from surfacelab.ratfn import RationalFn, series_divide
from surfacelab.symmetric import eval_poly, witten_zeta
from surfacelab.words import omega, parse_word


def test_hook_dim_poly_examples():
    assert hook_dim_poly((1,)) == [-1, 1]
    assert hook_dim_poly(()) == [1]
    assert eval_poly(hook_dim_poly((2,)), 5) == 5
    assert hook_dim_poly((2,)) == [0, Fraction(-3, 2), Fraction(1, 2)]


def test_phi_id_normalisation():
    # (2 / zeta) Phi_id / n -> 1
    vals = [float(2 * phi_gamma_at("", n) / witten_zeta(2, n)) / n for n in (10, 20, 40)]
    assert all(abs(v - 1) < 0.05 for v in vals)
    assert abs(vals[-1] - 1) < abs(vals[0] - 1)


def test_phi_a1_against_enumeration():
    for n in (3, 4):
        est = fix_mean_estimate("a1", n, 1)
        exact = fix_stats(parse_word("a1"), n).mean
        assert abs(float(est - exact)) < 0.5


def test_phi_rational_form_matches_pointwise():
    r = phi_gamma("a1 b1")
    for n in (12, 15, 30):
        assert r.at(n) == phi_gamma_at("a1 b1", n)


def test_numerator_degree_bound():
    for g in ("", "a1", "a1 a1", "a1 b1"):
        assert numerator_degree(phi_gamma(g), 1) <= 81 * 1 + 1


def test_phi_caps():
    with pytest.raises(CapExceeded):
        phi_gamma("a1 b1 a2 b2 a1")
    with pytest.raises(CapExceeded):
        phi_gamma("a1", B=2)


def test_laurent_examples():
    lc = laurent_coefficients("")
    assert lc.a[-1] == 1 and lc.a[0] == 0
    lc = laurent_coefficients("a1")
    assert lc.a[-1] == 0 and lc.a[0] == 1
    assert laurent_coefficients("a1 a1").a[0] == 2


@pytest.mark.parametrize("text", ["", "a1", "a1 a1", "a1 b1", "a1 a1 a1", "a1 b1 A1 B1", "a1 a1 a1 a1",
                                  "b1 a1 a1 B1", "a1 b1 a1 b1"])
def test_laurent_identities(text):
    g = parse_word(text)
    lc = laurent_coefficients(g, 1)
    is_id = 1 if omega(g) == 0 else 0
    assert lc.u(0) == is_id
    assert lc.a[-1] == is_id
    assert lc.a[0] == omega(g)
    assert lc.u(1) == lc.a[0] - 1


def test_assumption1_identity_is_exact():
    rep = verify_assumption1("", q=1, exact_ns=(2, 3, 4))
    assert all(r[4] == 0 for r in rep.rows)


def test_assumption1_a1_rows():
    rep = verify_assumption1("a1", q=1, exact_ns=(2, 3, 4))
    assert [r[0] for r in rep.rows] == [2, 3, 4]
    assert all(r[3] == 1 for r in rep.rows)


def test_markov_examples():
    assert markov_brothers_check([0, 1], 1, 1).holds
    # Chebyshev T_5 mapped onto the lattice interval
    t5 = np.polynomial.chebyshev.cheb2poly([0, 0, 0, 0, 0, 1])
    scaled = [c * (50.0 ** j) for j, c in enumerate(t5)]
    for k in (1, 2, 3):
        assert markov_brothers_check(scaled, 5, k).holds


@settings(max_examples=100)
@given(st.integers(1, 10).flatmap(lambda q: st.tuples(
    st.just(q), st.lists(st.fractions(-5, 5, max_denominator=7), min_size=1, max_size=q + 1),
    st.integers(1, q))))
def test_markov_random(case):
    q, P, k = case
    assert markov_brothers_check(P, q, k, lattice=2000).holds


def test_rational_examples():
    r = rational_derivative_check([Fraction(1, 2)], [1], 1, 2.0)
    assert r.hypothesis and r.holds and r.C_prime == 1.0
    # Phi_a1 / Phi_id from the truncated expansion, common factors cancelled
    a, i = phi_gamma("a1").normalized(), phi_gamma("").normalized()
    assert a.den == i.den
    P = [Fraction(0)] * (a.shift - i.shift) + a.num
    res = rational_derivative_check(P, i.num, 1, 2.0)
    assert res.hypothesis and res.holds
    # Q with a root in the sampled range: hypothesis flagged, no claim
    bad = rational_derivative_check([1], [1, -4], 1, 2.0)
    assert not bad.hypothesis and bad.holds is None


def test_fourier_examples():
    assert fourier_bound_check([0.0] * 6, 2).holds
    assert fourier_bound_check([0.0] * 6, 2).lhs == 0
    for q in (1, 5, 12):
        for m in (1, 2, 3):
            a = [0.0] * q + [1.0]
            res = fourier_bound_check(a, m)
            assert math.isclose(res.lhs, q ** (m - 1))
            assert res.holds


@settings(max_examples=100)
@given(st.integers(1, 32).flatmap(lambda q: st.lists(st.floats(-1, 1), min_size=q + 1, max_size=q + 1)),
       st.integers(1, 4))
def test_fourier_random(a, m):
    assert fourier_bound_check(a, m).holds


@settings(max_examples=30)
@given(st.integers(0, 32).flatmap(lambda d: st.lists(st.floats(-2, 2), min_size=d + 1, max_size=d + 1)),
       st.floats(0.5, 3))
def test_chebyshev_round_trip(h, K):
    ch = ChebyshevExpansion.from_polynomial(h, K)
    scale = max(1.0, sum(abs(c) * K ** j for j, c in enumerate(h)))
    assert ch.reconstruction_error(h, 64) <= 1e-10 * scale


def test_master_certificate_linear():
    x = AlgebraElement({"a1": 1, "A1": 1})
    for n in (2, 3, 4):
        cert = master_certificate(x, [0, 1], n)
        exact = 2 * (fix_stats(parse_word("a1"), n).mean - 1) / n
        assert math.isclose(cert.mean, float(exact), abs_tol=1e-12)
        assert cert.exact


def test_master_certificate_square():
    x = AlgebraElement({"a1": 1, "A1": 1})
    cert = master_certificate(x, [0, 0, 1], 4)
    # h(x) = a1^2 + 2 + A1^2, and u_0 of it is the identity coefficient
    assert Fraction(cert.u[0]) == 2
    assert Fraction(cert.u[1]) == 2 * (omega(parse_word("a1 a1")) - 1) + 2 * (0 - 1)


def test_master_certificate_constant():
    # the trace on the complement of the constants sees n - 1 dimensions
    x = AlgebraElement({"a1": 1, "A1": 1})
    for n in (3, 4, 7):
        cert = master_certificate(x, [3], n, samples=200)
        assert math.isclose(cert.mean, 3 * (1 - 1 / n), rel_tol=1e-12)
        assert math.isclose(cert.f_h, 3 * (1 - 1 / n), rel_tol=1e-12)


ratfns = st.builds(
    lambda s, num, den: RationalFn(s, num, den),
    st.integers(-2, 3),
    st.lists(st.fractions(-4, 4, max_denominator=5), min_size=1, max_size=4),
    st.dictionaries(st.integers(1, 5), st.integers(0, 2), max_size=2),
)


@given(ratfns, ratfns, st.integers(6, 40))
def test_ratfn_arithmetic_pointwise(r, s, n):
    assert (r + s).at(n) == r.at(n) + s.at(n)
    assert (r * s).at(n) == r.at(n) * s.at(n)


@given(ratfns)
def test_ratfn_normalize_and_json(r):
    assert r.normalized().at(17) == r.at(17)
    assert RationalFn.from_json(r.to_json()).at(23) == r.at(23)


@given(ratfns)
def test_ratfn_series_converges(r):
    # the series truncated at t^12 approximates the value at large n
    n = 10 ** 4
    ser = r.series(12)
    approx = sum(c * Fraction(1, n) ** k for k, c in ser.items())
    assert abs(approx - r.at(n)) <= Fraction(1, 10 ** 30) * (1 + abs(r.at(n)))


@given(st.lists(st.fractions(-3, 3, max_denominator=4), min_size=1, max_size=5),
       st.lists(st.fractions(-3, 3, max_denominator=4), min_size=1, max_size=5))
def test_series_divide_inverts_product(a, b):
    if b[0] == 0:
        b[0] = Fraction(1)
    A = dict(enumerate(a))
    B = dict(enumerate(b))
    Q = series_divide(A, B, 6)
    prod = {k: sum(Q.get(i, 0) * B.get(k - i, 0) for i in range(k + 1)) for k in range(7)}
    assert all(prod[k] == A.get(k, 0) for k in range(7))


def test_falling_constructors():
    assert RationalFn.falling(3).at(7) == 7 * 6 * 5
    assert RationalFn.inv_falling(2).at(5) == Fraction(1, 20)
    assert RationalFn.from_n_poly([1, 2, 3]).at(4) == 1 + 8 + 48
