"""Exact rational functions in t = 1/n.

Every function that appears in the expansion has a denominator made of
factors n - i, i.e. t^-1 (1 - i t).  So a value is stored as

    t^shift * num(t) / prod_i (1 - i t)^{den[i]}

with num a list of Fractions (ascending powers) and den a multiset of
positive integers.  Conversion to and from n happens at the boundary.
"""
from __future__ import annotations

from fractions import Fraction


def _trim(p: list) -> list:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_mul(p: list, q: list) -> list:
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def poly_add(p: list, q: list) -> list:
    out = [Fraction(0)] * max(len(p), len(q))
    for i, a in enumerate(p):
        out[i] += a
    for i, b in enumerate(q):
        out[i] += b
    return _trim(out)


def poly_eval(p: list, x) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _one_minus(i: int) -> list:
    return [Fraction(1), Fraction(-i)]


def _divide_one_minus(p: list, i: int) -> list | None:
    """p / (1 - i t) if exact, else None."""
    # 1 - i t = -i (t - 1/i): synthetic division by (t - r)
    r = Fraction(1, i)
    if poly_eval(p, r) != 0:
        return None
    hi = list(reversed(p))
    out = []
    acc = Fraction(0)
    for c in hi[:-1]:
        acc = acc * r + c
        out.append(acc)
    q = list(reversed(out))
    return [c / -i for c in q]


class RationalFn:
    __slots__ = ("shift", "num", "den")

    def __init__(self, shift: int = 0, num=None, den=None):
        self.shift = shift
        self.num = _trim([Fraction(c) for c in (num if num is not None else [1])])
        self.den = {i: m for i, m in (den or {}).items() if m}
        if any(i <= 0 for i in self.den):
            raise ValueError("denominator factors must be 1 - i t with i >= 1")

    # constructors

    @classmethod
    def const(cls, c) -> "RationalFn":
        return cls(0, [Fraction(c)])

    @classmethod
    def n(cls) -> "RationalFn":
        return cls(-1, [1])

    @classmethod
    def n_minus(cls, i: int) -> "RationalFn":
        return cls(-1, _one_minus(i))

    @classmethod
    def falling(cls, k: int, start: int = 0) -> "RationalFn":
        """(n - start)(n - start - 1)...(n - start - k + 1)."""
        num = [Fraction(1)]
        for i in range(start, start + k):
            num = poly_mul(num, _one_minus(i))
        return cls(-k, num)

    @classmethod
    def inv_falling(cls, k: int) -> "RationalFn":
        """1 / (n)_k."""
        return cls(k, [1], {i: 1 for i in range(1, k)})

    @classmethod
    def from_n_poly(cls, coeffs) -> "RationalFn":
        """sum_k coeffs[k] n^k."""
        coeffs = _trim([Fraction(c) for c in coeffs])
        if not coeffs:
            return cls(0, [])
        d = len(coeffs) - 1
        return cls(-d, list(reversed(coeffs)))

    # arithmetic

    def is_zero(self) -> bool:
        return not self.num

    def __neg__(self):
        return RationalFn(self.shift, [-c for c in self.num], self.den)

    def __mul__(self, other):
        if not isinstance(other, RationalFn):
            return RationalFn(self.shift, [c * Fraction(other) for c in self.num], self.den)
        den = dict(self.den)
        for i, m in other.den.items():
            den[i] = den.get(i, 0) + m
        return RationalFn(self.shift + other.shift, poly_mul(self.num, other.num), den)

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, RationalFn):
            other = RationalFn.const(other)
        if other.is_zero():
            return self.copy()
        if self.is_zero():
            return other.copy()
        s = min(self.shift, other.shift)
        den = {i: max(self.den.get(i, 0), other.den.get(i, 0)) for i in set(self.den) | set(other.den)}

        def lift(x: RationalFn) -> list:
            p = [Fraction(0)] * (x.shift - s) + list(x.num)
            for i, m in den.items():
                for _ in range(m - x.den.get(i, 0)):
                    p = poly_mul(p, _one_minus(i))
            return p

        return RationalFn(s, poly_add(lift(self), lift(other)), den).normalized()

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other if isinstance(other, RationalFn) else RationalFn.const(-Fraction(other)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalFn):
            other = RationalFn.const(other)
        return (self - other).is_zero()

    __hash__ = None

    def copy(self) -> "RationalFn":
        return RationalFn(self.shift, list(self.num), dict(self.den))

    def normalized(self) -> "RationalFn":
        """Move factors of t into the shift and cancel common (1 - i t)."""
        num = list(self.num)
        if not num:
            return RationalFn(0, [])
        shift = self.shift
        while num and num[0] == 0:
            num.pop(0)
            shift += 1
        den = dict(self.den)
        for i in sorted(den):
            while den[i] > 0:
                q = _divide_one_minus(num, i)
                if q is None:
                    break
                num = q
                den[i] -= 1
        return RationalFn(shift, num, den)

    # evaluation

    def at(self, n) -> Fraction:
        """Exact value at a positive integer (or Fraction) n."""
        n = Fraction(n)
        if n == 0:
            raise ZeroDivisionError("t = 1/n undefined at n = 0")
        t = 1 / n
        d = Fraction(1)
        for i, m in self.den.items():
            f = 1 - i * t
            if f == 0:
                raise ZeroDivisionError(f"pole at n = {n}")
            d *= f ** m
        return (t ** self.shift) * poly_eval(self.num, t) / d

    def series(self, upto: int) -> dict[int, Fraction]:
        """Laurent coefficients of t^k for shift <= k <= upto."""
        m = upto - self.shift
        if m < 0:
            return {}
        p = list(self.num[: m + 1]) + [Fraction(0)] * max(0, m + 1 - len(self.num))
        for i, mult in self.den.items():
            geo = [Fraction(i) ** j for j in range(m + 1)]
            for _ in range(mult):
                p = poly_mul(p, geo)[: m + 1]
        return {self.shift + k: p[k] for k in range(m + 1)}

    def numerator_in_n(self) -> tuple[list, dict]:
        """(polynomial in n, multiset of roots i of the denominator in n)."""
        r = self.normalized()
        dd = sum(r.den.values())
        deg = len(r.num) - 1
        # t^s num(t)/prod(1 - i t) = n^{-s-deg+dd} * rev(num)(n) / prod (n - i)
        extra = -r.shift - deg + dd
        p = list(reversed(r.num))
        if extra >= 0:
            p = [Fraction(0)] * extra + p
            return p, dict(r.den)
        den = dict(r.den)
        den[0] = -extra
        return p, den

    def to_json(self) -> dict:
        return {"shift": self.shift,
                "num": [[c.numerator, c.denominator] for c in self.num],
                "den": {str(i): m for i, m in sorted(self.den.items())}}

    @classmethod
    def from_json(cls, d: dict) -> "RationalFn":
        return cls(d["shift"], [Fraction(a, b) for a, b in d["num"]],
                   {int(i): m for i, m in d["den"].items()})

    def __repr__(self) -> str:
        return f"RationalFn(t^{self.shift} * {[str(c) for c in self.num]} / {self.den})"


def series_divide(a: dict[int, Fraction], b: dict[int, Fraction], upto: int) -> dict[int, Fraction]:
    """Laurent series a/b up to t^upto; b must have a nonzero leading term."""
    vb = min(k for k, c in b.items() if c != 0)
    va = min((k for k, c in a.items() if c != 0), default=None)
    if va is None:
        return {}
    m = upto - (va - vb)
    bs = [b.get(vb + j, Fraction(0)) for j in range(m + 1)]
    as_ = [a.get(va + j, Fraction(0)) for j in range(m + 1)]
    q = []
    for j in range(m + 1):
        acc = as_[j] - sum((q[i] * bs[j - i] for i in range(j)), Fraction(0))
        q.append(acc / bs[0])
    return {va - vb + j: q[j] for j in range(m + 1)}
