"""Finitely supported elements of the complex group algebra of the surface group.

Coefficients are exact: Fractions, or ``QC`` pairs of Fractions when an
imaginary part is present.  Keys are GroupElements, so two sums that agree
in the group algebra compare equal.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct

from .words import GroupElement, Word, is_proper_power, is_trivial, omega, parse_word, shared_ball


@dataclass(frozen=True)
class QC:
    """Exact complex rational re + i*im."""
    re: Fraction
    im: Fraction = Fraction(0)

    @staticmethod
    def lift(x) -> "QC":
        if isinstance(x, QC):
            return x
        if isinstance(x, complex):
            return QC(Fraction(x.real), Fraction(x.imag))
        return QC(Fraction(x))

    def __add__(self, o):
        o = QC.lift(o)
        return QC(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return QC(-self.re, -self.im)

    def __sub__(self, o):
        return self + (-QC.lift(o))

    def __mul__(self, o):
        o = QC.lift(o)
        return QC(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self):
        return QC(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __eq__(self, o):
        if isinstance(o, (int, Fraction)):
            return self.im == 0 and self.re == o
        if isinstance(o, QC):
            return self.re == o.re and self.im == o.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)


I = QC(Fraction(0), Fraction(1))


def _norm_coeff(c):
    if isinstance(c, QC):
        return c.re if c.im == 0 else c
    if isinstance(c, complex):
        return _norm_coeff(QC.lift(c))
    return Fraction(c)


def _conj(c):
    return c.conjugate() if isinstance(c, QC) else c


def _abs2(c) -> Fraction:
    return c.abs2() if isinstance(c, QC) else c * c


class SupportCapExceeded(RuntimeError):
    pass


def _mul_elements(g: GroupElement, h: GroupElement) -> GroupElement:
    """Product through the shared Cayley ball when both factors are canonical."""
    if g.geodesic and h.geodesic:
        ball = shared_ball(g.genus)
        u = g.canonical.letters
        for s in h.canonical.letters:
            u = ball.step(u, s)
            if u is None:
                break
        else:
            return GroupElement(Word(g.genus, u), len(u))
    return GroupElement.of(g.canonical * h.canonical)


class AlgebraElement:
    def __init__(self, terms=None, genus: int = 2):
        self.genus = genus
        self.terms: dict[GroupElement, object] = {}
        for g, c in (terms or {}).items():
            if isinstance(g, str):
                g = parse_word(g, genus)
            if isinstance(g, Word):
                g = GroupElement.of(g)
            c = _norm_coeff(c)
            if c:
                prev = self.terms.get(g)
                total = _norm_coeff(c if prev is None else prev + c)
                if total:
                    self.terms[g] = total
                else:
                    self.terms.pop(g, None)

    @classmethod
    def from_words(cls, pairs, genus: int = 2) -> "AlgebraElement":
        x = cls({}, genus)
        for w, c in pairs:
            x = x + cls({w: c}, genus)
        return x

    @classmethod
    def identity(cls, genus: int = 2) -> "AlgebraElement":
        return cls({Word(genus, ()): 1}, genus)

    @classmethod
    def generator_sum(cls, genus: int = 2) -> "AlgebraElement":
        """Sum of all generators and their inverses."""
        terms = {}
        for idx in range(1, 2 * genus + 1):
            terms[Word(genus, (idx,))] = 1
            terms[Word(genus, (-idx,))] = 1
        return cls(terms, genus)

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        out = AlgebraElement({}, self.genus)
        out.terms = dict(self.terms)
        for g, c in other.terms.items():
            total = _norm_coeff(out.terms.get(g, 0) + c) if g in out.terms else c
            if total:
                out.terms[g] = total
            else:
                out.terms.pop(g, None)
        return out

    def scale(self, c) -> "AlgebraElement":
        c = _norm_coeff(c)
        out = AlgebraElement({}, self.genus)
        if c:
            out.terms = {g: _norm_coeff(v * c) for g, v in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + other.scale(-1)

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        return multiply(self, other)

    def __pow__(self, p: int) -> "AlgebraElement":
        out = AlgebraElement.identity(self.genus)
        for _ in range(p):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, AlgebraElement) and self.terms == other.terms

    def support_size(self) -> int:
        return len(self.terms)

    def length(self) -> int:
        """|x|: longest word length in the support."""
        return max((g.length for g in self.terms), default=0)

    def l1_norm(self) -> float:
        return math.fsum(math.sqrt(float(_abs2(c))) for c in self.terms.values())

    def is_self_adjoint(self) -> bool:
        return star(self) == self

    def to_json(self) -> list:
        rows = []
        for g, c in sorted(self.terms.items(), key=lambda kv: kv[0].canonical.sort_key()):
            if isinstance(c, QC):
                rows.append([str(g.canonical), c.re.numerator, c.re.denominator,
                             c.im.numerator, c.im.denominator])
            else:
                rows.append([str(g.canonical), c.numerator, c.denominator])
        return rows

    @classmethod
    def from_json(cls, rows, genus: int = 2) -> "AlgebraElement":
        terms = {}
        for row in rows:
            w = parse_word(row[0], genus)
            c = Fraction(row[1], row[2])
            if len(row) == 5:
                c = QC(c, Fraction(row[3], row[4]))
            terms[w] = c
        return cls(terms, genus)

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*[{g}]" for g, c in self.terms.items()) or "0"
        return f"AlgebraElement({body})"


def multiply(x: AlgebraElement, y: AlgebraElement, cap: int = 200_000) -> AlgebraElement:
    if x.genus != y.genus:
        raise ValueError("genus mismatch")
    acc: dict[GroupElement, object] = {}
    for g, c in x.terms.items():
        for h, d in y.terms.items():
            k = _mul_elements(g, h)
            acc[k] = acc.get(k, 0) + c * d
            if len(acc) > cap:
                raise SupportCapExceeded(f"support exceeds {cap}")
    out = AlgebraElement({}, x.genus)
    out.terms = {k: _norm_coeff(v) for k, v in acc.items() if v}
    return out


def star(x: AlgebraElement) -> AlgebraElement:
    out = AlgebraElement({}, x.genus)
    out.terms = {g.inverse(): _conj(c) for g, c in x.terms.items()}
    return out


def tau(x: AlgebraElement):
    """Identity coefficient (the canonical trace)."""
    for g, c in x.terms.items():
        if g.length == 0 or (not g.geodesic and g.is_identity()):
            return c
    return Fraction(0)


def l2_norm(x: AlgebraElement) -> float:
    return math.sqrt(float(sum((_abs2(c) for c in x.terms.values()), Fraction(0))))


def moments(x: AlgebraElement, P: int) -> list[Fraction]:
    """tau(x^{2p}) for p = 0..P, via tau(x^{2p}) = sum |coeff of x^p|^2 (x self-adjoint)."""
    out = [Fraction(1)]
    power = AlgebraElement.identity(x.genus)
    for _ in range(P):
        power = power * x
        out.append(sum((_abs2(c) for c in power.terms.values()), Fraction(0)))
    return out


def norm_lower_bound(x: AlgebraElement, P: int) -> float:
    """max over p <= P of tau(x^{2p})^{1/2p}; a lower bound for the reduced norm."""
    if not x.is_self_adjoint():
        raise ValueError("x must be self-adjoint")
    ms = moments(x, P)
    return max((float(m) ** (1.0 / (2 * p)) for p, m in enumerate(ms) if p > 0), default=0.0)


def u1(x: AlgebraElement):
    """sum of alpha_gamma * (omega(gamma) - 1)."""
    total = Fraction(0)
    for g, c in x.terms.items():
        total = total + c * (omega(g.canonical) - 1)
    return _norm_coeff(total)


def u1_power_by_walks(x: AlgebraElement, p: int):
    """u1(x^p) from the walk expansion: enumerate every product
    gamma_1...gamma_p of support elements, weight by the coefficients, and
    split according to whether the product is trivial or a k-th power."""
    support = list(x.terms.items())
    trivial_mass = Fraction(0)
    power_mass = Fraction(0)
    for combo in iproduct(support, repeat=p):
        w = Word(x.genus, ())
        weight = Fraction(1)
        for g, c in combo:
            w = w * g.canonical
            weight = weight * c
        if is_trivial(w):
            trivial_mass += weight
            continue
        hit = is_proper_power(w)
        if hit is not None:
            k = hit[1]
            power_mass += weight * (sum(1 for d in range(1, k + 1) if k % d == 0) - 1)
    return _norm_coeff(power_mass - trivial_mass)
