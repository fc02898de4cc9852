import math
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from surfacelab.algebra import (
    I, QC, AlgebraElement, l2_norm, moments, multiply, norm_lower_bound, star, tau, u1,
    u1_power_by_walks,
)
from surfacelab.words import relator


def X(d):
    return AlgebraElement(d)


def test_multiply_examples():
    assert X({"a1": 1}) * X({"A1": 1}) == AlgebraElement.identity()
    s = X({"a1": 1, "A1": 1})
    assert s * s == X({"a1 a1": 1, "": 2, "A1 A1": 1})
    x = X({"a1 b1": 3, "B2": Fraction(1, 2)})
    assert X({relator(2): 1}) * x == x


def test_star_examples():
    assert star(X({"a1": 1})) == X({"A1": 1})
    assert star(X({"": 2})) == X({"": 2})
    assert star(X({"a1 b1": I})) == X({"B1 A1": QC(Fraction(0), Fraction(-1))})


def test_tau_examples():
    assert tau(AlgebraElement.identity()) == 1
    assert tau(X({"a1": 1})) == 0
    s = X({"a1": 1, "A1": 1})
    assert tau(s * s) == 2


def test_l2_examples():
    assert math.isclose(l2_norm(X({"a1": 1, "b1": 1})), math.sqrt(2))
    assert l2_norm(AlgebraElement.identity()) == 1
    assert l2_norm(X({"a1": 3})) == 3


def test_norm_lower_bound_on_cyclic_subgroup():
    s = X({"a1": 1, "A1": 1})
    # tau(s^{2p}) = C(2p, p) on the copy of Z generated by a1
    assert moments(s, 4) == [math.comb(2 * p, p) for p in range(5)]
    assert math.isclose(norm_lower_bound(s, 4), 70 ** (1 / 8))
    assert norm_lower_bound(AlgebraElement.identity(), 3) == 1
    assert norm_lower_bound(s, 4) < norm_lower_bound(s, 8) < 2


def test_u1_examples():
    assert u1(X({"a1": 1})) == 0
    assert u1(AlgebraElement.identity()) == -1
    assert u1(X({"a1 a1": 1, "A1 A1": 1})) == 2


def test_json_round_trip():
    x = X({"a1 b1": Fraction(2, 3), "B2": I, "": -1})
    assert AlgebraElement.from_json(x.to_json()) == x


small = st.dictionaries(
    st.sampled_from(["", "a1", "A1", "b1", "a1 b1", "B2", "a2 a2", "b1 A1"]),
    st.fractions(min_value=-3, max_value=3, max_denominator=4).filter(bool),
    min_size=1, max_size=3,
).map(X)


@given(small)
def test_star_involution(x):
    assert star(star(x)) == x


@given(small)
def test_tau_of_star_product_is_l2_squared(x):
    t = tau(star(x) * x)
    assert t >= 0
    assert t == sum((c * c for c in x.terms.values()), Fraction(0))


@given(small, small)
def test_trace_property(x, y):
    assert tau(multiply(x, y)) == tau(multiply(y, x))


@given(small, st.integers(1, 4))
def test_lower_bound_below_l1(x, P):
    h = x + star(x)
    assert norm_lower_bound(h, P) <= h.l1_norm() + 1e-12


@given(small)
def test_moments_nondecreasing_roots(x):
    h = x + star(x)
    ms = moments(h, 4)
    roots = [float(m) ** (1 / (2 * p)) for p, m in enumerate(ms) if p]
    assert all(m >= 0 for m in ms)
    assert all(a <= b + 1e-12 for a, b in zip(roots, roots[1:]))


@given(small, st.integers(1, 4))
def test_u1_two_routes(x, p):
    assert u1(x ** p) == u1_power_by_walks(x, p)


@settings(max_examples=15)
@given(small, st.integers(1, 6))
def test_u1_growth_below_l1(x, p):
    h = x + star(x)
    if not h.terms:
        return
    assert abs(float(u1(h ** p))) ** (1 / p) <= h.l1_norm() + 1e-12
