"""Partitions, irreducible characters of S_n and the Witten zeta function."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import sparse

PARTITION_CAP = 40


class CapExceeded(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        if any(p <= 0 for p in self.parts) or any(
                a < b for a, b in zip(self.parts, self.parts[1:])):
            raise ValueError(f"not a partition: {self.parts}")

    @property
    def size(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def conjugate(self) -> "Partition":
        return Partition(conjugate(self.parts))

    @property
    def b(self) -> int:
        """Boxes outside the first row."""
        return self.size - (self.parts[0] if self.parts else 0)

    @property
    def b_dual(self) -> int:
        """Boxes outside the first column."""
        return self.size - len(self.parts)

    def dim(self) -> int:
        return dim(self.parts)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"


def conjugate(parts) -> tuple[int, ...]:
    parts = tuple(parts)
    if not parts:
        return ()
    return tuple(sum(1 for p in parts if p > i) for i in range(parts[0]))


@lru_cache(maxsize=None)
def _partitions(n: int, largest: int) -> tuple[tuple[int, ...], ...]:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def partitions_of(n: int, cap: int = PARTITION_CAP) -> list[tuple[int, ...]]:
    """All partitions of n as tuples, in reverse lexicographic order."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > cap:
        raise CapExceeded(f"n={n} exceeds partition cap {cap}")
    return list(_partitions(n, n))


def partition_count(n: int) -> int:
    """p(n) by Euler's pentagonal recurrence (independent of the generator)."""
    p = [1] + [0] * n
    for m in range(1, n + 1):
        total, k = 0, 1
        while True:
            g1 = k * (3 * k - 1) // 2
            g2 = k * (3 * k + 1) // 2
            if g1 > m:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[m - g1]
            if g2 <= m:
                total += sign * p[m - g2]
            k += 1
        p[m] = total
    return p[n]


def hooks(parts) -> list[int]:
    parts = tuple(parts)
    conj = conjugate(parts)
    return [parts[i] - j + conj[j] - i - 1
            for i in range(len(parts)) for j in range(parts[i])]


@lru_cache(maxsize=None)
def dim(parts) -> int:
    """Hook-length formula."""
    parts = tuple(parts)
    n = sum(parts)
    prod = 1
    for h in hooks(parts):
        prod *= h
    return math.factorial(n) // prod


def plus_n(parts, n: int) -> tuple[int, ...]:
    """lambda^+(n): lambda placed under a first row so the total is n."""
    parts = tuple(parts)
    b = sum(parts)
    first = n - b
    if parts and first < parts[0]:
        raise ValueError(f"n={n} too small for {parts}^+")
    return (first,) + parts if first > 0 else parts


# --- Murnaghan-Nakayama ---

def _beta(parts, length):
    return [parts[i] + (length - 1 - i) if i < len(parts) else (length - 1 - i)
            for i in range(length)]


def _remove_rim_hooks(parts: tuple[int, ...], k: int):
    """Yield (sign, smaller partition) over all k-rim hooks of parts."""
    L = len(parts)
    beta = _beta(parts, L)
    bset = set(beta)
    for x in beta:
        y = x - k
        if y < 0 or y in bset:
            continue
        between = sum(1 for z in beta if y < z < x)
        nb = sorted([z for z in beta if z != x] + [y], reverse=True)
        new = tuple(v - (L - 1 - i) for i, v in enumerate(nb))
        new = tuple(v for v in new if v > 0)
        yield (-1) ** between, new


@lru_cache(maxsize=None)
def mn_character(parts, mu) -> int:
    """chi_lambda at the class of cycle type mu (Murnaghan-Nakayama)."""
    parts, mu = tuple(parts), tuple(sorted(mu, reverse=True))
    if sum(parts) != sum(mu):
        raise ValueError("size mismatch")
    if not mu:
        return 1
    k, rest = mu[0], mu[1:]
    return sum(s * mn_character(nu, rest) for s, nu in _remove_rim_hooks(parts, k))


def cycle_type(perm) -> tuple[int, ...]:
    n = len(perm)
    seen = [False] * n
    out = []
    for i in range(n):
        if not seen[i]:
            c, j = 0, i
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                c += 1
            out.append(c)
    return tuple(sorted(out, reverse=True))


def centralizer_order(mu) -> int:
    out = 1
    counts: dict[int, int] = {}
    for m in mu:
        counts[m] = counts.get(m, 0) + 1
    for k, m in counts.items():
        out *= k ** m * math.factorial(m)
    return out


def class_size(mu) -> int:
    return math.factorial(sum(mu)) // centralizer_order(mu)


def sign_of(mu) -> int:
    return (-1) ** sum(m - 1 for m in mu)


class CharacterTable:
    """Full character table of S_n as an int64 array chi[lambda, mu].

    Columns are built by adding rim hooks part by part, so every column
    prefix is shared; rows and columns are both indexed by partitions_of(n).
    """

    def __init__(self, n: int):
        self.n = n
        self.parts = partitions_of(n)
        self.index = {p: i for i, p in enumerate(self.parts)}
        self.dims = np.array([dim(p) for p in self.parts], dtype=np.int64)
        self.centralizers = [centralizer_order(m) for m in self.parts]
        self.class_sizes = [math.factorial(n) // z for z in self.centralizers]
        self.chi = self._build()

    def _build(self) -> np.ndarray:
        n = self.n
        idx = {m: {p: i for i, p in enumerate(partitions_of(m))} for m in range(n + 1)}
        adders: dict[tuple[int, int], sparse.csr_matrix] = {}

        def adder(m: int, k: int):
            # map from class functions on partitions of m-k to partitions of m
            if (m, k) not in adders:
                rows, cols, vals = [], [], []
                for p, i in idx[m].items():
                    for s, q in _remove_rim_hooks(p, k):
                        rows.append(i)
                        cols.append(idx[m - k][q])
                        vals.append(s)
                adders[(m, k)] = sparse.csr_matrix(
                    (np.array(vals, dtype=np.int64), (rows, cols)),
                    shape=(len(idx[m]), len(idx[m - k])))
            return adders[(m, k)]

        memo: dict[tuple[int, ...], np.ndarray] = {(): np.ones(1, dtype=np.int64)}

        def column(asc: tuple[int, ...]) -> np.ndarray:
            if asc not in memo:
                prev = column(asc[:-1])
                m = sum(asc)
                memo[asc] = adder(m, asc[-1]) @ prev
            return memo[asc]

        table = np.zeros((len(self.parts), len(self.parts)), dtype=np.int64)
        for j, mu in enumerate(self.parts):
            table[:, j] = column(tuple(sorted(mu)))
        return table

    def value(self, lam, mu) -> int:
        return int(self.chi[self.index[tuple(lam)], self.index[tuple(sorted(mu, reverse=True))]])


@lru_cache(maxsize=8)
def character_table(n: int) -> CharacterTable:
    return CharacterTable(n)


# --- Witten zeta ---

def witten_zeta(s, n: int, cap: int = PARTITION_CAP):
    """sum over irreducibles of d^-s: exact Fraction for integer s, float otherwise."""
    if n < 1:
        raise ValueError("n must be positive")
    ds = [dim(p) for p in partitions_of(n, cap)]
    if isinstance(s, int) or (isinstance(s, Fraction) and s.denominator == 1):
        s = int(s)
        return sum((Fraction(1, d ** s) if s >= 0 else Fraction(d ** (-s)) for d in ds), Fraction(0))
    return math.fsum(float(d) ** (-float(s)) for d in ds)


def zeta_tail(s, n: int, b: int) -> dict:
    """Sum of d^-s over lambda with b_lambda >= b and b_lambda^dual >= b,
    with the smallest kappa making tail <= (kappa b^{2s} / (n-b^2)^s)^b."""
    if b < 1 or 3 * b * b > n:
        raise ValueError("need b >= 1 and b^2 <= n/3")
    tail = Fraction(0) if isinstance(s, int) else 0.0
    for p in partitions_of(n):
        lam = Partition(p)
        if lam.b >= b and lam.b_dual >= b:
            d = dim(p)
            tail += Fraction(1, d ** s) if isinstance(s, int) else float(d) ** (-s)
    t = float(tail)
    kappa = (t ** (1.0 / b)) * (n - b * b) ** s / b ** (2 * s) if t > 0 else 0.0
    return {"s": s, "n": n, "b": b, "tail": tail, "kappa": kappa}


# --- skew shapes ---

@lru_cache(maxsize=None)
def skew_tableaux_count(lam, mu=()) -> int:
    """Standard fillings of lam/mu, by removing outer corners recursively."""
    lam = tuple(x for x in lam if x > 0)
    mu = tuple(x for x in mu if x > 0)
    if len(mu) > len(lam) or any(m > l for m, l in zip(mu, lam)):
        raise ValueError("mu not contained in lam")
    if sum(lam) == sum(mu):
        return 1
    total = 0
    for i in range(len(lam)):
        below = lam[i + 1] if i + 1 < len(lam) else 0
        mu_i = mu[i] if i < len(mu) else 0
        if lam[i] > below and lam[i] > mu_i:
            new = list(lam)
            new[i] -= 1
            total += skew_tableaux_count(tuple(new), mu)
    return total


def skew_tableaux_aitken(lam, mu=()) -> int:
    """Aitken's determinant k! det[1/(lam_i - mu_j - i + j)!]; an independent count."""
    from sympy import Matrix, Rational, factorial
    lam = list(lam)
    L = len(lam)
    mu = list(mu) + [0] * (L - len(mu))
    k = sum(lam) - sum(mu)
    if L == 0:
        return 1
    M = Matrix(L, L, lambda i, j: (Rational(1, factorial(lam[i] - mu[j] - i + j))
                                   if lam[i] - mu[j] - i + j >= 0 else 0))
    return int(factorial(k) * M.det())


def hook_dim_poly(parts) -> list[Fraction]:
    """d_{lambda^+(n)} as a polynomial in n (ascending coefficients), valid
    once lambda^+(n) is a partition.

    Hooks below the first row are those of lambda; the first row contributes
    (n-b-lambda_1)! times one linear factor n - c_j per column j < lambda_1.
    """
    parts = tuple(parts)
    b = sum(parts)
    l1 = parts[0] if parts else 0
    conj = conjugate(parts)
    poly = [Fraction(1)]
    for i in range(b + l1):
        poly = _poly_times_linear(poly, i)
    for j in range(l1):
        poly = _poly_div_linear(poly, b + j - conj[j])
    h = 1
    for x in hooks(parts):
        h *= x
    return [c / h for c in poly]


def _poly_times_linear(p, c):
    """p(n) * (n - c)."""
    out = [Fraction(0)] * (len(p) + 1)
    for k, a in enumerate(p):
        out[k + 1] += a
        out[k] -= c * a
    return out


def _poly_div_linear(p, c):
    """p(n) / (n - c), which must be exact."""
    hi = list(reversed(p))
    out, acc = [], Fraction(0)
    for a in hi:
        acc = acc * c + a
        out.append(acc)
    if out.pop() != 0:
        raise ArithmeticError(f"n - {c} does not divide")
    return list(reversed(out))


def eval_poly(p, n) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * n + c
    return acc
