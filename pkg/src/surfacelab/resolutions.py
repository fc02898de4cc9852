"""Cycle graphs, their folded quotients, and expected embedding counts.

For a cyclically reduced word gamma, every morphism from the cycle C_gamma
into a Schreier graph factors through exactly one folded quotient of
C_gamma.  Summing expected injective embedding counts over the quotients
therefore recovers E[fix_gamma].
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

import numpy as np

from .graphs import LabeledGraph, point_graph
from .homs import ENUM_CAP, CapExceeded, HomTuple, fix_values, hom_array
from .sn_calculus import falling, obey_class_distribution
from .symmetric import character_table, witten_zeta
from .words import BallLimitError, Word, cyclic_reduce, free_reduce, letter_name, shared_ball

QUOTIENT_CAP = 8
CHARACTER_CAP = 8
BRUTEFORCE_CAP = 4


def build_cycle(word: Word) -> LabeledGraph:
    """The |w|-vertex directed labeled cycle spelling w; the empty word gives a point."""
    if len(word) == 0:
        return point_graph(word.genus)
    if not word.is_cyclically_reduced():
        raise ValueError(f"{word} is not cyclically reduced")
    L = len(word)
    edges = []
    for i, x in enumerate(word.letters):
        j = (i + 1) % L
        edges.append((i, j, x) if x > 0 else (j, i, -x))
    return LabeledGraph(L, tuple(edges), word.genus)


def _set_partitions(m: int):
    """All restricted growth strings of length m."""
    if m == 0:
        yield ()
        return
    lab = [0] * m

    def rec(i, top):
        if i == m:
            yield tuple(lab)
            return
        for k in range(top + 2):
            lab[i] = k
            yield from rec(i + 1, max(top, k))

    lab[0] = 0
    yield from rec(1, 0)


def quotient_graph(C: LabeledGraph, labels) -> LabeledGraph:
    """Merge vertices with equal labels; parallel edges with the same label collapse."""
    edges = sorted({(labels[s], labels[t], f) for s, t, f in C.edges})
    return LabeledGraph(max(labels) + 1 if labels else 0, tuple(edges), C.genus)


@dataclass
class Quotient:
    partition: tuple[int, ...]
    graph: LabeledGraph
    flag: str  # pass / fail / inconclusive from kernel_loop_check


def enumerate_quotients(C: LabeledGraph, cap: int = QUOTIENT_CAP, check: bool = True) -> list[Quotient]:
    """Every vertex partition of C whose quotient is folded."""
    if C.v > cap:
        raise CapExceeded(f"{C.v} vertices exceeds quotient cap {cap}")
    out = []
    for labels in _set_partitions(C.v):
        W = quotient_graph(C, labels)
        if W.is_folded():
            flag = kernel_loop_check(W).status if check else "unchecked"
            out.append(Quotient(labels, W, flag))
    return out


@dataclass
class KernelCheck:
    status: str
    radius: int
    witness: Word | None = None
    start: int | None = None
    end: int | None = None


def kernel_loop_check(W: LabeledGraph, length_bound: int | None = None) -> KernelCheck:
    """Look for a path between distinct vertices whose word is trivial in the group.

    Walks the product of W with the Cayley ball: a state is (vertex, group
    element of the word read so far).  Reaching (v, 1) from (u, 1) with v != u
    is a witness.  Every path of length <= L stays within radius L/2 of the
    identity when its word is trivial, so a search of radius ceil(L/2) is
    exhaustive for length L.  Labels that miss a generator span a free
    subgroup (one-relator Freiheitssatz), which settles those graphs at once.
    """
    g = W.genus
    if length_bound is None:
        length_bound = 2 * max(W.e, 1) * 4 * g
    if W.v <= 1 or len(W.labels()) < 2 * g:
        return KernelCheck("pass", 0)
    ball = shared_ball(g)
    need = -(-length_bound // 2)
    radius = min(need, ball.max_radius)
    try:
        ball.extend_to(radius)
    except BallLimitError:
        radius = ball.radius
    moves = W.out_map()
    ident = ()
    for u in range(W.v):
        seen = {(u, ident): None}
        queue = deque([(u, ident)])
        while queue:
            v, el = queue.popleft()
            for (vv, x), w in moves.items():
                if vv != v:
                    continue
                nel = ball.step(el, x)
                if nel is None or len(nel) > radius:
                    continue
                state = (w, nel)
                if state in seen:
                    continue
                seen[state] = (v, el, x)
                if nel == ident and w != u:
                    word = []
                    cur = state
                    while seen[cur] is not None:
                        pv, pel, px = seen[cur]
                        word.append(px)
                        cur = (pv, pel)
                    return KernelCheck("fail", radius, free_reduce(Word(g, tuple(reversed(word)))), u, w)
                queue.append(state)
    return KernelCheck("pass" if radius >= need and need * 2 >= 4 * g else "inconclusive", radius)


# --- embeddings ---

def emb_count(W: LabeledGraph, phi: HomTuple) -> int:
    """Label-preserving injective morphisms W -> Schreier graph of phi, by backtracking."""
    n = phi.n
    if W.v > n:
        return 0
    gens = phi.gens
    moves = W.out_map()
    adj: dict[int, list[tuple[int, int]]] = {}
    for (v, x), w in moves.items():
        adj.setdefault(v, []).append((x, w))
    order = _bfs_order(W)
    assign = [-1] * W.v
    used = [False] * n
    inv = {f: np.argsort(gens[f - 1]) for f in range(1, gens.shape[0] + 1)}

    def image(p, x):
        return int(gens[x - 1][p]) if x > 0 else int(inv[-x][p])

    def consistent(v):
        for x, w in adj.get(v, ()):
            if assign[w] != -1 and image(assign[v], x) != assign[w]:
                return False
        return True

    def rec(k):
        if k == len(order):
            return 1
        v = order[k]
        total = 0
        for p in range(n):
            if used[p]:
                continue
            assign[v] = p
            used[p] = True
            if consistent(v):
                total += rec(k + 1)
            used[p] = False
            assign[v] = -1
        return total

    return rec(0)


def _bfs_order(W: LabeledGraph) -> list[int]:
    nbrs: dict[int, set[int]] = {i: set() for i in range(W.v)}
    for s, t, _ in W.edges:
        nbrs[s].add(t)
        nbrs[t].add(s)
    order, seen = [], set()
    for r in range(W.v):
        if r in seen:
            continue
        q = deque([r])
        seen.add(r)
        while q:
            x = q.popleft()
            order.append(x)
            for y in sorted(nbrs[x]):
                if y not in seen:
                    seen.add(y)
                    q.append(y)
    return order


def emb_counts_many(W: LabeledGraph, homs: np.ndarray) -> np.ndarray:
    """emb_count for every row of a (count, 2g, n) array, by scanning injective labelings."""
    N, _, n = homs.shape
    out = np.zeros(N, dtype=np.int64)
    if W.v > n:
        return out
    for lab in permutations(range(n), W.v):
        ok = np.ones(N, dtype=bool)
        for s, t, f in W.edges:
            ok &= homs[:, f - 1, lab[s]] == lab[t]
        out += ok
    return out


# --- expectations ---

def expected_emb(W: LabeledGraph, n: int, mode: str = "character") -> Fraction:
    """E over uniform Hom(Gamma, S_n) of emb_count(W, phi), exactly."""
    if mode == "bruteforce":
        if n > BRUTEFORCE_CAP:
            raise CapExceeded(f"bruteforce mode limited to n <= {BRUTEFORCE_CAP}")
        if W.genus != 2:
            raise NotImplementedError("enumeration implemented for genus 2")
        H = hom_array(n)
        return Fraction(int(emb_counts_many(W, H).sum()), len(H))
    if mode != "character":
        raise ValueError(f"unknown mode {mode}")
    if n > CHARACTER_CAP:
        raise CapExceeded(f"character mode limited to n <= {CHARACTER_CAP}")
    return _expected_emb_character(W, n)


def _expected_emb_character(W: LabeledGraph, n: int) -> Fraction:
    """(1/zeta) (n)_v / prod (n)_{e_f} sum_mu d_mu Theta_mu(W), with zeta = zeta(2g-2; S_n).

    Theta is assembled from the obeying-tuple class distribution, so all
    irreducibles share one enumeration.
    """
    g = W.genus
    if W.v > n:
        return Fraction(0)
    free, dist = obey_class_distribution(W, n)
    if not dist:
        return Fraction(0)
    T = character_table(n)
    total = Fraction(0)
    for row, mu in enumerate(T.parts):
        d = int(T.dims[row])
        s = sum((p * int(T.chi[row, T.index[c]]) for c, p in dist.items()), Fraction(0))
        total += d * s / Fraction(d) ** (2 * free)
    # Theta carries prod (n)_{e_f}, which cancels against the prefactor
    return Fraction(falling(n, W.v)) * total / witten_zeta(2 * g - 2, n)


@dataclass
class ExpansionReport:
    word: str
    n: int
    lhs: Fraction
    rhs: Fraction
    terms: list
    equal: bool


def _core(word: Word) -> Word:
    core, _ = cyclic_reduce(free_reduce(word))
    return core


def exact_fix_mean(word: Word, n: int) -> Fraction:
    H = hom_array(n)
    return Fraction(int(fix_values(word, H).sum()), len(H))


def verify_expansion(word: Word, n: int, mode: str = "character") -> ExpansionReport:
    """E[fix_gamma] (by enumeration) against the sum of E^emb over quotients."""
    if n > ENUM_CAP:
        raise CapExceeded(f"n={n} exceeds enumeration cap {ENUM_CAP}")
    lhs = exact_fix_mean(word, n)
    core = _core(word)
    qs = enumerate_quotients(build_cycle(core))
    terms = []
    rhs = Fraction(0)
    for q in qs:
        e = expected_emb(q.graph, n, mode)
        terms.append((q.partition, q.graph.v, q.graph.e_f(), q.flag, e))
        rhs += e
    return ExpansionReport(str(word), n, lhs, rhs, terms, lhs == rhs)


def pointwise_check(word: Word, n: int) -> tuple[int, int]:
    """Count of enumerated phi where fix(phi(gamma)) != sum_r emb_count(W_r, phi), and total."""
    H = hom_array(n)
    core = _core(word)
    total = np.zeros(len(H), dtype=np.int64)
    for q in enumerate_quotients(build_cycle(core), check=False):
        total += emb_counts_many(q.graph, H)
    fx = fix_values(word, H)
    return int((fx != total).sum()), len(H)


def resolution_rows(word: Word, n: int, mode: str = "character") -> list[dict]:
    """CSV-ready rows: gamma, r-index, v, e_f vector, flag, E^emb."""
    rep = verify_expansion(word, n, mode)
    rows = []
    for k, (part, v, ef, flag, e) in enumerate(rep.terms):
        rows.append({"gamma": rep.word, "r": k, "v": v,
                     "e_f": " ".join(map(str, ef)), "flag": flag,
                     "numerator": e.numerator, "denominator": e.denominator})
    return rows


def describe(W: LabeledGraph) -> str:
    return "; ".join(f"{s}-{letter_name(f)}->{t}" for s, t, f in W.edges) or f"{W.v} point(s)"


def factorial_bound_holds(word: Word) -> bool:
    core = _core(word)
    return len(enumerate_quotients(build_cycle(core), check=False)) <= math.factorial(max(len(core), 1))
