"""Homomorphisms from the genus-2 surface group to S_n.

Permutations are integer arrays p with p[i] the image of i.  A word is
evaluated left to right: the letter x_1 acts first, so the image of a
word is the walk i -> x_1(i) -> x_2(x_1(i)) -> ...  This is the Schreier
graph convention, where reading a word from vertex i follows edges.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations

import numpy as np

from ._kernels import class_route, pair_route
from .symmetric import character_table, cycle_type, partitions_of, witten_zeta
from .words import Word

ENUM_CAP = 5
REJECTION_CAP = 8
CLASS_WEIGHTED_CAP = 25
RNG_NAME = "numpy.random.Philox"
# centralizer size above which the class route is cheaper than the pair route
PAIR_ROUTE_MAX_CENTRALIZER = 10_000


class CapExceeded(ValueError):
    pass


def make_rng(seed: int) -> np.random.Generator:
    if seed is None:
        raise ValueError("an explicit seed is required")
    return np.random.Generator(np.random.Philox(seed))


# --- permutation helpers (numpy, batched over leading axes) ---

def inverse(p: np.ndarray) -> np.ndarray:
    return np.argsort(p, axis=-1)


def then(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """The permutation 'p then q' (p acts first)."""
    return np.take_along_axis(q, p, axis=-1)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """[a, b] = a b a^-1 b^-1 read left to right."""
    return then(then(then(a, b), inverse(a)), inverse(b))


def evaluate(word: Word, gens: np.ndarray) -> np.ndarray:
    """Image of a word; gens has shape (..., 2g, n)."""
    n = gens.shape[-1]
    out = np.broadcast_to(np.arange(n), gens.shape[:-2] + (n,)).copy()
    invs = {}
    for x in word.letters:
        i = abs(x) - 1
        if x > 0:
            g = gens[..., i, :]
        else:
            if i not in invs:
                invs[i] = inverse(gens[..., i, :])
            g = invs[i]
        out = then(out, g)
    return out


def relator_image(gens: np.ndarray) -> np.ndarray:
    g = gens.shape[-2] // 2
    out = None
    for i in range(g):
        c = commutator(gens[..., 2 * i, :], gens[..., 2 * i + 1, :])
        out = c if out is None else then(out, c)
    return out


def fixed_points(p: np.ndarray) -> np.ndarray:
    return (p == np.arange(p.shape[-1])).sum(axis=-1)


def point_cycle_lengths(p: np.ndarray) -> np.ndarray:
    """For each point, the length of its cycle (batched)."""
    n = p.shape[-1]
    ident = np.arange(n)
    lengths = np.zeros(p.shape, dtype=np.int64)
    cur = p.copy()
    for step in range(1, n + 1):
        hit = (cur == ident) & (lengths == 0)
        lengths[hit] = step
        cur = np.take_along_axis(p, cur, axis=-1)
    return lengths


def cycle_histograms(p: np.ndarray) -> np.ndarray:
    """Row r, column k: number of points of p[r] lying on k-cycles."""
    p2 = p.reshape(-1, p.shape[-1])
    n = p2.shape[-1]
    L = point_cycle_lengths(p2)
    rows = np.repeat(np.arange(p2.shape[0]), n)
    hist = np.zeros((p2.shape[0], n + 1), dtype=np.int64)
    np.add.at(hist, (rows, L.ravel()), 1)
    return hist


def type_histogram(mu, n: int) -> np.ndarray:
    h = np.zeros(n + 1, dtype=np.int64)
    for k in mu:
        h[k] += k
    return h


def representative(mu) -> np.ndarray:
    """A fixed permutation of cycle type mu: consecutive cycles."""
    n = sum(mu)
    p = np.arange(n)
    start = 0
    for k in mu:
        block = np.arange(start, start + k)
        p[block] = np.roll(block, -1)
        start += k
    return p


def cycles_of(p: np.ndarray) -> list[list[int]]:
    n = len(p)
    seen = np.zeros(n, dtype=bool)
    out = []
    for i in range(n):
        if not seen[i]:
            cyc, j = [], i
            while not seen[j]:
                seen[j] = True
                cyc.append(j)
                j = int(p[j])
            out.append(cyc)
    return out


def random_conjugator(src: np.ndarray, dst: np.ndarray, rng) -> np.ndarray:
    """Uniform h with h src h^-1 = dst (left-to-right products).

    Such h satisfy h(dst^k(i)) = src^k(h(i)): it carries dst-cycles onto
    src-cycles of the same length.  Matching equal-length cycles in a
    uniform order with a uniform rotation gives the uniform element of the
    conjugator coset.
    """
    by_len_src: dict[int, list[list[int]]] = {}
    for c in cycles_of(src):
        by_len_src.setdefault(len(c), []).append(c)
    by_len_dst: dict[int, list[list[int]]] = {}
    for c in cycles_of(dst):
        by_len_dst.setdefault(len(c), []).append(c)
    h = np.empty(len(src), dtype=np.int64)
    for k, dcycles in by_len_dst.items():
        scycles = by_len_src.get(k, [])
        if len(scycles) != len(dcycles):
            raise ValueError("permutations are not conjugate")
        order = rng.permutation(len(scycles))
        for dc, si in zip(dcycles, order):
            sc = scycles[si]
            shift = int(rng.integers(k))
            for t in range(k):
                h[dc[t]] = sc[(t + shift) % k]
    return h


def conjugate_by(h: np.ndarray, x: np.ndarray) -> np.ndarray:
    """h x h^-1 (left-to-right products)."""
    return then(then(h, x), inverse(h))


# --- data types ---

@dataclass(frozen=True, eq=False)
class HomTuple:
    n: int
    gens: np.ndarray  # shape (2g, n)
    seed: int | None = None
    method: str = "enumerate"

    @property
    def genus(self) -> int:
        return self.gens.shape[0] // 2

    def image(self, word: Word) -> np.ndarray:
        return evaluate(word, self.gens)

    def satisfies_relator(self) -> bool:
        return bool((relator_image(self.gens) == np.arange(self.n)).all())

    def fix(self, word: Word) -> int:
        return int(fixed_points(self.image(word)))

    def key(self) -> tuple:
        return tuple(map(tuple, self.gens.tolist()))


@dataclass
class SchreierGraph:
    n: int
    edges: dict[int, np.ndarray] = field(default_factory=dict)  # label index -> successor array

    @classmethod
    def of(cls, phi: HomTuple) -> "SchreierGraph":
        return cls(phi.n, {i + 1: phi.gens[i].copy() for i in range(phi.gens.shape[0])})

    def out_edge(self, label: int, v: int) -> int:
        return int(self.edges[label][v])


# --- counting and enumeration ---

def frobenius_count(n: int, g: int = 2) -> int:
    """|Hom(Gamma_g, S_n)| = (n!)^{2g-1} zeta(2g-2; S_n)."""
    val = Fraction(math.factorial(n)) ** (2 * g - 1) * witten_zeta(2 * g - 2, n)
    assert val.denominator == 1
    return int(val)


def _all_perms(n: int) -> np.ndarray:
    return np.array(list(permutations(range(n))), dtype=np.int64).reshape(-1, n)


def brute_force_count(n: int) -> int:
    """Count (a,b,c,d) in S_n^4 with trivial relator by scanning every tuple."""
    if n > 4:
        raise CapExceeded("brute force count limited to n <= 4")
    P = _all_perms(n)
    m = len(P)
    ident = np.arange(n)
    total = 0
    ab = commutator(P[:, None, :].repeat(m, 1), P[None, :, :].repeat(m, 0)).reshape(-1, n)
    for i in range(len(ab)):
        prod = then(np.broadcast_to(ab[i], ab.shape), ab)
        total += int((prod == ident).all(axis=1).sum())
    return total


@lru_cache(maxsize=4)
def _commutator_buckets(n: int):
    P = _all_perms(n)
    m = len(P)
    A = np.repeat(np.arange(m), m)
    B = np.tile(np.arange(m), m)
    comm = commutator(P[A], P[B])
    buckets: dict[tuple, list[tuple[int, int]]] = {}
    for i in range(len(A)):
        buckets.setdefault(tuple(comm[i]), []).append((A[i], B[i]))
    return P, buckets


def enumerate_homs(n: int, g: int = 2, cap: int = ENUM_CAP):
    """Every (a1,b1,a2,b2) with [a1,b1][a2,b2] = 1, each once.

    Pairs are bucketed by their commutator sigma; the tuples are then
    exactly the pairs of pairs with commutators sigma and sigma^-1.
    """
    if g != 2:
        raise NotImplementedError("enumeration implemented for genus 2")
    if n > cap:
        raise CapExceeded(f"n={n} exceeds enumeration cap {cap}")
    P, buckets = _commutator_buckets(n)
    for sigma, pairs in buckets.items():
        inv = tuple(np.argsort(sigma))
        for (a, b) in pairs:
            for (c, d) in buckets.get(inv, ()):
                yield HomTuple(n, np.stack([P[a], P[b], P[c], P[d]]))


@lru_cache(maxsize=4)
def hom_array(n: int) -> np.ndarray:
    """All homomorphisms for n <= ENUM_CAP stacked as (count, 4, n)."""
    if n > ENUM_CAP:
        raise CapExceeded(f"n={n} exceeds enumeration cap {ENUM_CAP}")
    P, buckets = _commutator_buckets(n)
    chunks = []
    for sigma, pairs in buckets.items():
        inv = tuple(np.argsort(sigma))
        other = buckets.get(inv)
        if not other:
            continue
        left = np.array(pairs)
        right = np.array(other)
        li = np.repeat(np.arange(len(left)), len(right))
        ri = np.tile(np.arange(len(right)), len(left))
        block = np.stack([P[left[li, 0]], P[left[li, 1]], P[right[ri, 0]], P[right[ri, 1]]], axis=1)
        chunks.append(block)
    return np.concatenate(chunks, axis=0)


# --- sampling ---

def sample_rejection(n: int, count: int, rng, batch: int = 200_000) -> np.ndarray:
    if n > REJECTION_CAP:
        raise CapExceeded(f"n={n} exceeds rejection cap {REJECTION_CAP}")
    out = []
    got = 0
    ident = np.arange(n)
    while got < count:
        props = rng.random((batch, 4, n)).argsort(axis=-1)
        ok = (relator_image(props) == ident).all(axis=-1)
        acc = props[ok]
        out.append(acc)
        got += len(acc)
    return np.concatenate(out, axis=0)[:count]


def _draw_index(cdf: np.ndarray, rng) -> int:
    u = rng.random() * cdf[-1]
    return min(int(np.searchsorted(cdf, u, side="right")), len(cdf) - 1)


class ClassWeightedSampler:
    """Exact uniform sampler for Hom(Gamma_2, S_n) built on character sums.

    sigma = [a1,b1] has class law proportional to |c| N(c)^2 with
    N(c) = n! sum_lambda chi_lambda(c)/d_lambda.  Given sigma, a uniform
    solution of [c, d] = tau is drawn by one of two exact routes, whichever
    has the smaller expected cost:

    * pair route: uniform pairs until the commutator is conjugate to tau,
      then a uniform conjugator moves it onto tau (cost ~ |Cent(tau)| n!/N(tau));
    * class route: the class C of c^-1 is drawn with weight
      |C| sum_lambda chi_lambda(C)^2 chi_lambda(tau)/d_lambda, then c^-1 is
      uniform in C subject to c^-1 tau in C, and d is a uniform conjugator
      (cost ~ p(n) n!/N(tau)).
    """

    def __init__(self, n: int):
        if n > CLASS_WEIGHTED_CAP:
            raise CapExceeded(f"n={n} exceeds class-weighted cap {CLASS_WEIGHTED_CAP}")
        self.n = n
        T = character_table(n)
        self.table = T
        self.parts = T.parts
        self.fact = math.factorial(n)
        self.q = [self.fact // int(d) for d in T.dims]  # n!/d_lambda, exact
        chi = T.chi
        self.N = [sum(int(chi[l, c]) * self.q[l] for l in range(len(self.parts)))
                  for c in range(len(self.parts))]
        weights = [T.class_sizes[c] * self.N[c] ** 2 for c in range(len(self.parts))]
        total = sum(weights)
        assert total == frobenius_count(n)  # sum over sigma of N(sigma) N(sigma^-1)
        self.class_probs = np.array([w / total for w in weights], dtype=float)
        self.hists = [type_histogram(mu, n) for mu in self.parts]
        self.reps = [representative(mu) for mu in self.parts]
        self._chi_sq = chi.astype(float) ** 2
        self._class_route: dict[int, tuple] = {}
        self._exact: dict[tuple[int, int], Fraction] = {}
        self._class_cdf = np.cumsum(self.class_probs)
        self.proposals = 0
        self.accepted = 0

    def class_index(self, p: np.ndarray) -> int:
        return self.table.index[cycle_type(p)]

    def _uniform_in_class(self, c: int, rng, size=None) -> np.ndarray:
        rep = self.reps[c]
        shape = (self.n,) if size is None else (size, self.n)
        h = rng.random(shape).argsort(axis=-1)
        return conjugate_by(h, np.broadcast_to(rep, shape))

    def _pair_route(self, tau: np.ndarray, t: int, rng) -> tuple[np.ndarray, np.ndarray]:
        target = self.hists[t]
        expected = self.table.centralizers[t] * self.fact / self.N[t]
        size = int(min(2 * (self.n - 1) * max(16, 2 * expected), 4_000_000))
        c = np.empty(self.n, np.int64)
        d = np.empty(self.n, np.int64)
        while True:
            U = rng.random(size)
            used, tries = pair_route(U, self.n, target, c, d)
            self.proposals += tries
            if used >= 0:
                self.accepted += 1
                comm = commutator(c, d)
                h = random_conjugator(comm, tau, rng)
                return conjugate_by(h, c), conjugate_by(h, d)

    def _class_weights(self, t: int):
        if t not in self._class_route:
            T = self.table
            v = np.array([float(T.chi[l, t]) * float(self.q[l]) for l in range(len(self.parts))])
            est = self._chi_sq.T @ v
            bound = self._chi_sq.T @ np.abs(v)
            sizes = np.array([float(s) for s in T.class_sizes])
            slack = 4.0 * len(self.parts) * np.finfo(float).eps * bound
            env = sizes * (np.maximum(est, 0.0) + slack) / float(self.fact)
            env_probs = env / env.sum()
            self._class_route[t] = (env, env_probs)
        return self._class_route[t]

    def _exact_class_weight(self, C: int, t: int) -> Fraction:
        key = (C, t)
        if key in self._exact:
            return self._exact[key]
        chi = self.table.chi
        s = sum(int(chi[l, C]) ** 2 * int(chi[l, t]) * self.q[l] for l in range(len(self.parts)))
        self._exact[key] = Fraction(self.table.class_sizes[C] * s, self.fact)
        return self._exact[key]

    def _class_route_sample(self, tau: np.ndarray, t: int, rng):
        env, probs = self._class_weights(t)
        cdf = np.cumsum(probs)
        while True:
            C = _draw_index(cdf, rng)
            w = self._exact_class_weight(C, t)
            if w <= 0 or rng.random() * env[C] >= float(w):
                continue
            target = self.hists[C]
            x = np.empty(self.n, np.int64)
            y = np.empty(self.n, np.int64)
            while True:
                U = rng.random(4096 * self.n)
                used, tries = class_route(U, self.reps[C], tau, target, x, y)
                self.proposals += tries
                if used >= 0:
                    self.accepted += 1
                    d = random_conjugator(x, y, rng)
                    return inverse(x), d

    def fiber(self, tau: np.ndarray, rng) -> tuple[np.ndarray, np.ndarray]:
        """Uniform (c, d) with [c, d] = tau."""
        t = self.class_index(tau)
        if self.table.centralizers[t] <= PAIR_ROUTE_MAX_CENTRALIZER:
            return self._pair_route(tau, t, rng)
        return self._class_route_sample(tau, t, rng)

    def sample(self, rng) -> np.ndarray:
        c = _draw_index(self._class_cdf, rng)
        sigma = self._uniform_in_class(c, rng)
        a, b = self.fiber(sigma, rng)
        c2, d2 = self.fiber(inverse(sigma), rng)
        return np.stack([a, b, c2, d2])


@lru_cache(maxsize=32)
def class_weighted_sampler(n: int) -> ClassWeightedSampler:
    return ClassWeightedSampler(n)


def sample_homs(n: int, count: int, seed: int, method: str = "class-weighted") -> np.ndarray:
    """count uniform homomorphisms as an array of shape (count, 4, n)."""
    rng = make_rng(seed)
    if n == 1:
        return np.zeros((count, 4, 1), dtype=np.int64)
    if method == "rejection":
        return sample_rejection(n, count, rng)
    if method == "class-weighted":
        s = class_weighted_sampler(n)
        return np.stack([s.sample(rng) for _ in range(count)])
    raise ValueError(f"unknown method {method!r}")


def sample_hom(n: int, seed: int, method: str = "class-weighted") -> HomTuple:
    return HomTuple(n, sample_homs(n, 1, seed, method)[0], seed, method)


# --- statistics ---

@dataclass
class FixStats:
    word: str
    n: int
    draws: int
    mean: object
    var: object
    exact: bool

    @property
    def stderr(self) -> float:
        return math.sqrt(float(self.var) / self.draws) if not self.exact else 0.0


def fix_values(word: Word, homs: np.ndarray) -> np.ndarray:
    return fixed_points(evaluate(word, homs))


def fix_stats(word: Word, n: int, draws: int | None = None, seed: int | None = None,
              method: str = "class-weighted") -> FixStats:
    """Exact statistics by enumeration when draws is None, else Monte Carlo."""
    if draws is None:
        vals = fix_values(word, hom_array(n))
        m = len(vals)
        s1 = int(vals.sum())
        s2 = int((vals.astype(np.int64) ** 2).sum())
        mean = Fraction(s1, m)
        var = Fraction(s2, m) - mean * mean
        return FixStats(str(word), n, m, mean, var, True)
    vals = fix_values(word, sample_homs(n, draws, seed, method)).astype(float)
    return FixStats(str(word), n, draws, float(vals.mean()), float(vals.var(ddof=1)), False)


def exact_fix_mean_generator(n: int) -> Fraction:
    """E[fix(a1)] from characters: a1 = a has weight n!^2 sum chi(a)^2/d^2."""
    T = character_table(n)
    num = Fraction(0)
    den = Fraction(0)
    for j, mu in enumerate(T.parts):
        w = sum(Fraction(int(T.chi[l, j]) ** 2, int(T.dims[l]) ** 2) for l in range(len(T.parts)))
        w *= T.class_sizes[j]
        num += w * mu.count(1)
        den += w
    return num / den


# --- operator norms ---

def perm_matrix(p: np.ndarray) -> np.ndarray:
    n = len(p)
    M = np.zeros((n, n))
    M[np.arange(n), p] = 1.0
    return M


def algebra_matrix(x, phi: HomTuple) -> np.ndarray:
    """Sum of alpha_gamma times the permutation matrix of phi(gamma)."""
    n = phi.n
    M = np.zeros((n, n), dtype=complex)
    for g, c in x.terms.items():
        coeff = complex(float(c.re), float(c.im)) if hasattr(c, "im") else float(c)
        M += coeff * perm_matrix(phi.image(g.canonical))
    if np.allclose(M.imag, 0):
        return M.real
    return M


class NonConvergence(RuntimeError):
    pass


def pi_norm(x, phi: HomTuple, tol: float = 1e-10, max_iter: int = 20000, seed: int = 0) -> float:
    """Operator norm of the image of x on the complement of the constants,
    by power iteration on A^* A restricted to that complement."""
    n = phi.n
    if n == 1:
        return 0.0
    A = algebra_matrix(x, phi)
    Pr = np.eye(n) - np.ones((n, n)) / n
    B = Pr @ A @ Pr
    H = B.conj().T @ B
    rng = make_rng(seed)
    v = Pr @ rng.standard_normal(n)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(max_iter):
        w = Pr @ (H @ v)
        nw = np.linalg.norm(w)
        if nw == 0:
            return 0.0
        w = w / nw
        new = float(np.real(np.vdot(w, H @ w)))
        if abs(new - lam) <= tol * max(1.0, abs(new)) and np.linalg.norm(w - v) < 1e-6:
            return math.sqrt(max(new, 0.0))
        lam, v = new, w
    raise NonConvergence("power iteration did not converge")


def pi_norm_dense(x, phi: HomTuple) -> float:
    """Oracle: spectral norm by dense SVD."""
    n = phi.n
    A = algebra_matrix(x, phi)
    Pr = np.eye(n) - np.ones((n, n)) / n
    return float(np.linalg.norm(Pr @ A @ Pr, 2))


def restricted_trace_exact(word: Word, phi: HomTuple) -> Fraction:
    """Trace of the permutation matrix of phi(word) on the complement of
    the constants, computed exactly as tr(P) - sum(P)/n."""
    P = perm_matrix(phi.image(word))
    return Fraction(int(round(np.trace(P)))) - Fraction(int(round(P.sum())), phi.n)
