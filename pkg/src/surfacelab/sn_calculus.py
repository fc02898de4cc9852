"""Integration over S_n, partition operators, Cassidy's projectors and Theta.

Theta_mu(Y) for a folded graph Y and mu |- n is

    prod_f (n)_{e_f(Y)} * integral over (g_f) of 1{g_f obey Y} chi_mu(relator(g)).

The numeric route integrates over tuples that obey Y.  The symbolic route
writes chi_{lambda^+(n)} through the Cassidy projector and sums over
index patterns, giving an exact rational function of n.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations, product

import numpy as np
from scipy import sparse

from ._kernels import commutator_type_keys
from .graphs import LabeledGraph
from .homs import commutator, relator_image, then
from .ratfn import RationalFn
from .symmetric import character_table, dim, hook_dim_poly, mn_character, plus_n
from .words import relator

SUBPERM_CAP = 4
NUMERIC_THETA_CAP = 8
TENSOR_CAP = 6 ** 3


class CapExceeded(ValueError):
    pass


def falling(n: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= n - i
    return out


def _rgs(values) -> tuple[int, ...]:
    """Restricted growth string: the set partition induced by equal values."""
    seen: dict = {}
    return tuple(seen.setdefault(x, len(seen)) for x in values)


@dataclass(frozen=True)
class SetPartition:
    m: int
    labels: tuple[int, ...]  # restricted growth string

    @classmethod
    def from_values(cls, values) -> "SetPartition":
        values = tuple(values)
        return cls(len(values), _rgs(values))

    @classmethod
    def from_blocks(cls, m: int, blocks) -> "SetPartition":
        lab = [None] * m
        for k, blk in enumerate(blocks):
            for x in blk:
                if lab[x] is not None:
                    raise ValueError("blocks overlap")
                lab[x] = k
        if any(x is None for x in lab):
            raise ValueError("blocks do not cover")
        return cls.from_values(lab)

    @property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        out: dict[int, list[int]] = {}
        for i, k in enumerate(self.labels):
            out.setdefault(k, []).append(i)
        return tuple(tuple(v) for _, v in sorted(out.items()))

    def __len__(self) -> int:
        return len(set(self.labels))

    def __le__(self, other: "SetPartition") -> bool:  # type: ignore[override]
        """Refinement: every block of self lies inside a block of other."""
        return all(len({other.labels[i] for i in blk}) == 1 for blk in self.blocks)

    def __str__(self) -> str:
        return "|".join(",".join(str(i + 1) for i in blk) for blk in self.blocks) or "{}"


# --- the elementary integration formula ---

def integrate_entries(pairs, n=None):
    """Integral over uniform g in S_n of prod g_{i_l j_l}.

    Indices may be any hashable labels; n=None returns a RationalFn.
    """
    pairs = list(pairs)
    ip = _rgs(i for i, _ in pairs)
    jp = _rgs(j for _, j in pairs)
    if ip != jp:
        return Fraction(0) if n is not None else RationalFn(0, [])
    k = len(set(ip))
    if n is None:
        return RationalFn.inv_falling(k)
    if k > n:
        return Fraction(0)
    return Fraction(1, falling(n, k))


# --- SubPerm and partition operators ---

def iota(sigma) -> SetPartition:
    """A permutation of [b] as a matching of the top row [b] with the bottom row."""
    b = len(sigma)
    lab = list(range(b)) + [sigma.index(j) for j in range(b)]
    return SetPartition.from_values(lab)


@lru_cache(maxsize=None)
def subperm(b: int, cap: int = SUBPERM_CAP) -> tuple[SetPartition, ...]:
    """Set partitions of [2b] with at most one element from each row per block."""
    if b > cap:
        raise CapExceeded(f"b={b} exceeds SubPerm cap {cap}")
    out = set()
    # a partial matching top i -> bottom j, as an injective partial map
    for k in range(b + 1):
        for tops in combinations(range(b), k):
            for bots in permutations(range(b), k):
                lab = list(range(b)) + [None] * b
                nxt = b
                match = dict(zip(bots, tops))
                for j in range(b):
                    if j in match:
                        lab[b + j] = match[j]
                    else:
                        lab[b + j] = nxt
                        nxt += 1
                out.add(SetPartition.from_values(lab))
    return tuple(sorted(out, key=lambda p: (len(p), p.labels)))


@lru_cache(maxsize=None)
def chi_extension_sum(pi: SetPartition, lam: tuple[int, ...]) -> int:
    """Sum of chi_lambda(tau) over tau in S_b with pi <= iota(tau)."""
    b = sum(lam)
    total = 0
    for tau in permutations(range(b)):
        if pi <= iota(tau):
            total += mn_character(lam, _cycle_type(tau))
    return total


def _cycle_type(p) -> tuple[int, ...]:
    n = len(p)
    seen = [False] * n
    out = []
    for i in range(n):
        if not seen[i]:
            c, j = 0, i
            while not seen[j]:
                seen[j] = True
                j = p[j]
                c += 1
            out.append(c)
    return tuple(sorted(out, reverse=True))


def _index_tuples(n: int, b: int) -> np.ndarray:
    if n ** b > TENSOR_CAP:
        raise CapExceeded(f"tensor dimension {n}^{b} exceeds {TENSOR_CAP}")
    return np.array(list(product(range(n), repeat=b)), dtype=np.int64).reshape(-1, b)


@lru_cache(maxsize=None)
def pattern_index(b: int, n: int) -> np.ndarray:
    """Matrix over (R, I) giving the position in subperm(b) of the partition
    that (I, R) induces, or -1 when it is not a sub-permutation."""
    idx = _index_tuples(n, b)
    sp = {p.labels: k for k, p in enumerate(subperm(b))}
    N = len(idx)
    out = np.full((N, N), -1, dtype=np.int64)
    for r in range(N):
        for i in range(N):
            out[r, i] = sp.get(_rgs(tuple(idx[i]) + tuple(idx[r])), -1)
    return out


def partition_operator(pi: SetPartition, n: int) -> sparse.csr_matrix:
    """P_pi on (C^n)^{tensor b}: entry [R, I] is 1 iff (I, R) induces exactly pi."""
    b = pi.m // 2
    idx = _index_tuples(n, b)
    rows, cols = [], []
    for r in range(len(idx)):
        for i in range(len(idx)):
            if _rgs(tuple(idx[i]) + tuple(idx[r])) == pi.labels:
                rows.append(r)
                cols.append(i)
    N = len(idx)
    return sparse.csr_matrix((np.ones(len(rows), dtype=np.int64), (rows, cols)), shape=(N, N))


# --- Cassidy projector ---

def cassidy_coefficient(pi: SetPartition, lam, n=None):
    """Coefficient of P_pi in p_lambda; exact Fraction at concrete n, else RationalFn."""
    lam = tuple(lam)
    b = sum(lam)
    sign = (-1) ** (b + len(pi))
    s = chi_extension_sum(pi, lam)
    if n is None:
        return RationalFn.from_n_poly(hook_dim_poly(lam)) * RationalFn.inv_falling(len(pi)) * (sign * s)
    return Fraction(sign * s * dim(plus_n(lam, n)), falling(n, len(pi)))


@dataclass
class CassidyProjector:
    lam: tuple[int, ...]
    n: int
    numer: np.ndarray  # integer matrix; the projector is numer / denom
    denom: int

    @property
    def b(self) -> int:
        return sum(self.lam)

    def entry(self, r: int, i: int) -> Fraction:
        return Fraction(int(self.numer[r, i]), self.denom)

    def is_idempotent(self) -> bool:
        A = self.numer.astype(object)
        return bool(((A.dot(A)) == A * self.denom).all())

    def is_symmetric(self) -> bool:
        return bool((self.numer == self.numer.T).all())

    def trace(self) -> Fraction:
        return Fraction(int(np.trace(self.numer.astype(object))), self.denom)

    def commutes_with(self, sigma) -> bool:
        """rho_b(sigma) p = p rho_b(sigma), where rho_b(sigma) e_I = e_{sigma(I)}."""
        if self.b == 0:
            return True
        sigma = np.asarray(sigma)
        idx = _index_tuples(self.n, self.b)
        n = self.n
        weights = n ** np.arange(self.b - 1, -1, -1)
        perm = (sigma[idx] * weights).sum(axis=1) if self.b else np.zeros(1, dtype=np.int64)
        # (rho p rho^-1)[s(R), s(I)] = p[R, I]
        moved = np.empty_like(self.numer)
        moved[np.ix_(perm, perm)] = self.numer
        return bool((moved == self.numer).all())

    def as_fractions(self) -> list[list[Fraction]]:
        return [[self.entry(r, i) for i in range(self.numer.shape[1])] for r in range(self.numer.shape[0])]


def cassidy_projector(lam, n: int) -> CassidyProjector:
    lam = tuple(lam)
    b = sum(lam)
    if n < 2 * b:
        raise ValueError(f"need n >= 2b, got n={n}, b={b}")
    sp = subperm(b)
    coeffs = [cassidy_coefficient(pi, lam, n) for pi in sp]
    denom = math.lcm(*[c.denominator for c in coeffs]) if coeffs else 1
    ints = np.array([int(c * denom) for c in coeffs] + [0], dtype=np.int64)
    if b == 0:
        return CassidyProjector(lam, n, np.array([[ints[0]]], dtype=np.int64), denom)
    pat = pattern_index(b, n)
    return CassidyProjector(lam, n, ints[pat], denom)


def symbolic_projector_b1():
    """The b=1 projector as coefficients of I and J (all ones), as RationalFns.

    P_{12} (one block) is I; P_{1|2} is J - I.
    """
    one, two = subperm(1)[0], subperm(1)[1]
    by_blocks = {len(one): one, len(two): two}
    c_same = cassidy_coefficient(by_blocks[1], (1,))
    c_apart = cassidy_coefficient(by_blocks[2], (1,))
    return {"I": c_same - c_apart, "J": c_apart}


# --- obeying tuples and the numeric Theta ---

def obey_indicator(Y: LabeledGraph, gens) -> bool:
    """Vertex i of Y is the point i; every f-edge i -> j needs g_f(i) = j."""
    gens = np.asarray(gens)
    return all(int(gens[f - 1][s]) == t for s, t, f in Y.edges)


def obeying_perms(Y: LabeledGraph, label: int, n: int) -> np.ndarray:
    """All permutations g of [n] with g(i) = j for every label-edge i -> j of Y."""
    fixed = {s: t for s, t, f in Y.edges if f == label}
    dom = [i for i in range(n) if i not in fixed]
    cod = [j for j in range(n) if j not in set(fixed.values())]
    rows = []
    for img in permutations(cod):
        p = [0] * n
        for s, t in fixed.items():
            p[s] = t
        for s, t in zip(dom, img):
            p[s] = t
        rows.append(p)
    return np.array(rows, dtype=np.int64).reshape(-1, n)


def _key_to_type(key: int, n: int) -> tuple[int, ...]:
    parts = []
    for k in range(1, n + 1):
        key, m = divmod(key, n + 1) if k < n else (0, key)
        parts.extend([k] * m)
    return tuple(sorted(parts, reverse=True))


def _commutator_counts(A: np.ndarray, B: np.ndarray, n: int) -> Counter:
    counts: Counter = Counter()
    chunk = max(1, 2_000_000 // max(1, len(B)))
    for s in range(0, len(A), chunk):
        keys = commutator_type_keys(A[s:s + chunk], B)
        u, c = np.unique(keys, return_counts=True)
        for k, m in zip(u.tolist(), c.tolist()):
            counts[_key_to_type(k, n)] += m
    return counts


@lru_cache(maxsize=256)
def obey_class_distribution(Y: LabeledGraph, n: int) -> tuple[int, dict]:
    """(free factors F, {cycle type: mass}) where mass is the integral of
    1{obey Y} 1{product of constrained commutators has that type}."""
    if n > NUMERIC_THETA_CAP:
        raise CapExceeded(f"n={n} exceeds numeric Theta cap {NUMERIC_THETA_CAP}")
    g = Y.genus
    if Y.v > n or not Y.is_folded():
        return g, {}
    labels = Y.labels()
    constrained = [k for k in range(g) if (2 * k + 1) in labels or (2 * k + 2) in labels]
    free = g - len(constrained)
    fact = math.factorial(n)
    if not constrained:
        return free, {tuple([1] * n): Fraction(1)}
    if len(constrained) == 1:
        k = constrained[0]
        A = obeying_perms(Y, 2 * k + 1, n)
        B = obeying_perms(Y, 2 * k + 2, n)
        counts = _commutator_counts(A, B, n)
        return free, {mu: Fraction(c, fact ** 2) for mu, c in counts.items()}
    if n > 6:
        raise CapExceeded("two or more constrained commutator factors need n <= 6")
    # full distribution of the ordered product of constrained commutators
    dist = {tuple(range(n)): Fraction(1)}
    for k in constrained:
        A = obeying_perms(Y, 2 * k + 1, n)
        B = obeying_perms(Y, 2 * k + 2, n)
        ia = np.repeat(np.arange(len(A)), len(B))
        ib = np.tile(np.arange(len(B)), len(A))
        comm = commutator(A[ia], B[ib])
        u, c = np.unique(comm, axis=0, return_counts=True)
        step = {tuple(x): Fraction(int(m), fact ** 2) for x, m in zip(u.tolist(), c.tolist())}
        new: dict = {}
        for x, px in dist.items():
            xa = np.array(x)
            for y, py in step.items():
                z = tuple(then(xa, np.array(y)).tolist())
                new[z] = new.get(z, Fraction(0)) + px * py
        dist = new
    out: dict = {}
    for z, p in dist.items():
        mu = _cycle_type(z)
        out[mu] = out.get(mu, Fraction(0)) + p
    return free, out


def theta_numeric(mu, Y: LabeledGraph, n: int) -> Fraction:
    """Theta_mu(Y) for mu |- n by integrating over tuples obeying Y.

    Unconstrained commutator factors are integrated out with
    int chi(x [c, d]) = chi(x) / d^2.
    """
    mu = tuple(mu)
    if sum(mu) != n:
        raise ValueError("mu must be a partition of n")
    free, dist = obey_class_distribution(Y, n)
    if not dist:
        return Fraction(0)
    d = dim(mu)
    T = character_table(n)
    row = T.index[mu]
    s = sum((p * int(T.chi[row, T.index[c]]) for c, p in dist.items()), Fraction(0))
    pref = 1
    for e in Y.e_f():
        pref *= falling(n, e)
    return pref * s / Fraction(d) ** (2 * free)


def theta_numeric_bruteforce(mu, Y: LabeledGraph, n: int) -> Fraction:
    """Oracle for tiny n: scan every tuple of permutations that obeys Y."""
    mu = tuple(mu)
    g = Y.genus
    lists = [obeying_perms(Y, f, n) for f in range(1, 2 * g + 1)]
    if any(len(L) == 0 for L in lists):
        return Fraction(0)
    total = 0
    count = 0
    for tup in product(*[range(len(L)) for L in lists]):
        gens = np.stack([lists[f][tup[f]] for f in range(2 * g)])
        total += mn_character(mu, _cycle_type(relator_image(gens).tolist()))
        count += 1
    fact = math.factorial(n)
    integral = Fraction(total, fact ** (2 * g))
    pref = 1
    for e in Y.e_f():
        pref *= falling(n, e)
    return pref * integral


# --- the symbolic Theta ---

@lru_cache(maxsize=None)
def pattern_counts(Y: LabeledGraph, b: int) -> dict:
    """Folded index patterns for the trace expansion of Theta, grouped.

    The b coordinates of the tensor trace each walk the relator once, from
    I_s to R_s.  Points are merged into blocks (values); every block keeps
    at most one outgoing and one incoming edge per label, so the integral
    is nonzero.  Y's vertices are distinct pre-placed blocks.  Returns
    {(pi labels, free blocks, e_f tuple): count}, pi being the partition of
    (I_1..I_b, R_1..R_b).
    """
    g = Y.genus
    word = relator(g).letters
    L = len(word)
    nl = 2 * g
    out_: list[list[int]] = [[-1] * nl for _ in range(Y.v)]
    in_: list[list[int]] = [[-1] * nl for _ in range(Y.v)]
    ecount = [0] * nl
    for s, t, f in Y.edges:
        out_[s][f - 1] = t
        in_[t][f - 1] = s
        ecount[f - 1] += 1
    I_blocks: list[int] = []
    R_blocks: list[int] = []
    counts: Counter = Counter()

    def record():
        pi = _rgs(I_blocks + R_blocks)
        counts[(pi, len(out_) - Y.v, tuple(ecount))] += 1

    def add_edge(src, dst, f):
        out_[src][f] = dst
        in_[dst][f] = src
        ecount[f] += 1

    def remove_edge(src, dst, f):
        out_[src][f] = -1
        in_[dst][f] = -1
        ecount[f] -= 1

    def new_block():
        out_.append([-1] * nl)
        in_.append([-1] * nl)
        return len(out_) - 1

    def drop_block():
        out_.pop()
        in_.pop()

    def start(s):
        if s == b:
            record()
            return
        for B in range(len(out_) + 1):
            if B in I_blocks:
                continue
            created = B == len(out_)
            if created:
                new_block()
            I_blocks.append(B)
            walk(s, 0, B)
            I_blocks.pop()
            if created:
                drop_block()

    def walk(s, k, B):
        if k == L:
            if B in R_blocks:
                return
            R_blocks.append(B)
            start(s + 1)
            R_blocks.pop()
            return
        x = word[k]
        f = abs(x) - 1
        fwd, back = (out_, in_) if x > 0 else (in_, out_)
        nxt = fwd[B][f]
        if nxt != -1:
            walk(s, k + 1, nxt)
            return
        for C in range(len(out_) + 1):
            created = C == len(out_)
            if created:
                new_block()
            elif back[C][f] != -1:
                continue
            if x > 0:
                add_edge(B, C, f)
            else:
                add_edge(C, B, f)
            walk(s, k + 1, C)
            if x > 0:
                remove_edge(B, C, f)
            else:
                remove_edge(C, B, f)
            if created:
                drop_block()

    start(0)
    return dict(counts)


@dataclass
class ThetaSymbolic:
    """Theta_{lambda^+(n)}(Y) as an exact function of n.

    terms: list of (pi, free, e_f, count); value at n is
      prod_f (n)_{e_f(Y)} / d_lambda * sum c_pi(n) count (n - v)_{free} / prod_f (n)_{e_f}.
    """
    lam: tuple[int, ...]
    Y: LabeledGraph
    terms: list

    def at(self, n: int) -> Fraction:
        """Exact value at a concrete n >= 2b, evaluated term by term (a term
        with more blocks than n counts zero)."""
        lam, Y = self.lam, self.Y
        b = sum(lam)
        if n < 2 * b:
            raise ValueError("need n >= 2b")
        total = Fraction(0)
        sp = {p.labels: p for p in subperm(b)}
        coef_cache: dict = {}
        for pi, free, ef, cnt in self.terms:
            if Y.v + free > n:
                continue
            if pi not in coef_cache:
                coef_cache[pi] = cassidy_coefficient(sp[pi], lam, n)
            den = 1
            for e in ef:
                den *= falling(n, e)
            total += coef_cache[pi] * cnt * Fraction(falling(n - Y.v, free), den)
        pref = 1
        for e in Y.e_f():
            pref *= falling(n, e)
        return pref * total / dim(lam)

    def inner_ratfn(self) -> RationalFn:
        """sum over terms of c_pi count (n-v)_free / prod (n)_{e_f} (no prefactor)."""
        b = sum(self.lam)
        sp = {p.labels: p for p in subperm(b)}
        grouped: dict = {}
        for pi, free, ef, cnt in self.terms:
            grouped.setdefault((pi, free, ef), 0)
            grouped[(pi, free, ef)] += cnt
        by_pi: dict = {}
        for (pi, free, ef), cnt in grouped.items():
            r = RationalFn.falling(free, self.Y.v) * cnt
            for e in ef:
                r = r * RationalFn.inv_falling(e)
            by_pi[pi] = by_pi.get(pi, RationalFn(0, [])) + r
        total = RationalFn(0, [])
        for pi, r in by_pi.items():
            total = total + cassidy_coefficient(sp[pi], self.lam) * r
        return total

    def ratfn(self) -> RationalFn:
        pref = RationalFn.const(Fraction(1, dim(self.lam)))
        for e in self.Y.e_f():
            pref = pref * RationalFn.falling(e)
        return pref * self.inner_ratfn()


def theta_symbolic(lam, Y: LabeledGraph) -> ThetaSymbolic:
    lam = tuple(lam)
    b = sum(lam)
    pc = pattern_counts(Y, b)
    terms = [(pi, free, ef, cnt) for (pi, free, ef), cnt in sorted(pc.items())]
    return ThetaSymbolic(lam, Y, terms)


def theta(lam_or_mu, Y: LabeledGraph, n=None, plus: bool = True):
    """Dispatch: with plus=True, lam_or_mu is lambda and the value is for
    lambda^+(n) (symbolic when n is None); otherwise mu |- n, numeric."""
    if plus:
        th = theta_symbolic(lam_or_mu, Y)
        return th.ratfn() if n is None else th.at(n)
    return theta_numeric(lam_or_mu, Y, n)
