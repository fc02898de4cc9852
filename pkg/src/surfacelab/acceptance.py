"""The twelve acceptance suites, shared by the test module and `verify all`.

Each suite returns a SuiteResult with a pass flag and the measured numbers
behind it.  Tolerances are arguments so callers pin them explicitly.
"""
from __future__ import annotations

import math
import random
import statistics
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .algebra import AlgebraElement, norm_lower_bound
from .expansion import (fourier_bound_check, laurent_coefficients, markov_brothers_check,
                        rational_derivative_check, rational_derivatives, verify_assumption1)
from .homs import brute_force_count, frobenius_count, make_rng, pi_norm, sample_hom
from .hyperbolic import (decompose_power, perpendicular_table, geodesic_edge_path, geometric_trivial_table,
                         power_instance, reduced_words, relator_defect)
from .resolutions import build_cycle, pointwise_check, verify_expansion
from .sn_calculus import cassidy_projector, symbolic_projector_b1, theta_numeric, theta_symbolic
from .symmetric import conjugate, dim, partitions_of, plus_n, witten_zeta, zeta_tail
from .words import Word, is_trivial, omega, parse_word, shared_ball

EXPANSION_CORPUS = ("a1", "a1 a1", "a1 b1", "a1 b1 A1", "a1 a1 a1")
LAURENT_CORPUS = EXPANSION_CORPUS + ("a1 b1 a1 b1", "a1 a1 a1 a1")


@dataclass
class SuiteResult:
    number: int
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        return f"criterion {self.number:2d} [{'PASS' if self.passed else 'FAIL'}] {self.name}"


def _timed(number: int, name: str, fn) -> SuiteResult:
    t = time.time()
    passed, detail = fn()
    return SuiteResult(number, name, bool(passed), detail, round(time.time() - t, 2))


def _w(text: str) -> Word:
    return parse_word(text, 2)


# 1
def frobenius_suite(ns=(1, 2, 3, 4), limit_s: float = 300.0) -> SuiteResult:
    def run():
        t = time.time()
        rows = {n: (brute_force_count(n), frobenius_count(n)) for n in ns}
        el = time.time() - t
        ok = all(a == b for a, b in rows.values()) and rows.get(2, (16, 16))[0] == 16 and el < limit_s
        return ok, {"counts": {n: a for n, (a, _) in rows.items()}, "seconds": round(el, 2)}
    return _timed(1, "Frobenius count", run)


# 2
def resolution_suite(words=EXPANSION_CORPUS, ns=(2, 3, 4)) -> SuiteResult:
    def run():
        bad, point_bad, checked = [], 0, 0
        for w in words:
            for n in ns:
                rep = verify_expansion(_w(w), n)
                if not rep.equal:
                    bad.append((w, n, str(rep.lhs), str(rep.rhs)))
                nb, tot = pointwise_check(_w(w), n)
                point_bad += nb
                checked += tot
        return not bad and point_bad == 0, {"mismatches": bad, "pointwise_failures": point_bad,
                                            "pointwise_checked": checked}
    return _timed(2, "resolution expansion", run)


# 3
def cassidy_suite(ns=(4, 5, 6), max_b: int = 2, sigmas: int = 20, seed: int = 0) -> SuiteResult:
    def run():
        rng = make_rng(seed)
        fails = []
        for b in range(max_b + 1):
            for lam in partitions_of(b):
                for n in ns:
                    p = cassidy_projector(lam, n)
                    want = dim(lam) * dim(plus_n(lam, n))
                    checks = {"idempotent": p.is_idempotent(), "symmetric": p.is_symmetric(),
                              "trace": p.trace() == want,
                              "commutes": all(p.commutes_with(rng.permutation(n)) for _ in range(sigmas))}
                    if not all(checks.values()):
                        fails.append((lam, n, checks))
        sym = symbolic_projector_b1()
        from .ratfn import RationalFn
        b1 = sym["I"] == RationalFn.const(1) and sym["J"] == RationalFn(1, [-1])
        return not fails and b1, {"failures": fails, "b1_is_I_minus_J_over_n": b1}
    return _timed(3, "Cassidy projector", run)


# 4
def theta_suite(words=("a1", "a1 a1", "a1 b1"), ns=(3, 4), max_b: int = 1) -> SuiteResult:
    def run():
        bad, dual_bad = [], []
        for w in words:
            Y = build_cycle(_w(w))
            for b in range(max_b + 1):
                for lam in partitions_of(b):
                    th = theta_symbolic(lam, Y)
                    for n in ns:
                        mu = plus_n(lam, n)
                        num = theta_numeric(mu, Y, n)
                        if num != th.at(n):
                            bad.append((w, lam, n, str(num), str(th.at(n))))
                        dual = conjugate(mu)
                        if dim(mu) * num != dim(dual) * theta_numeric(dual, Y, n):
                            dual_bad.append((w, lam, n))
        return not bad and not dual_bad, {"mismatches": bad, "dual_mismatches": dual_bad}
    return _timed(4, "Theta numeric vs symbolic", run)


# 5
def laurent_suite(words=LAURENT_CORPUS, include_identity: bool = True) -> SuiteResult:
    def run():
        rows, ok = [], True
        ws = (["1"] if include_identity else []) + list(words)
        for w in ws:
            word = Word(2, ()) if w == "1" else _w(w)
            lc = laurent_coefficients(word, q=1)
            am1, a0 = lc.a[-1], lc.a[0]
            want = (Fraction(int(is_trivial(word))), Fraction(omega(word)))
            good = (am1, a0) == want
            ok &= good
            rows.append({"gamma": w, "a_-1": str(am1), "a_0": str(a0), "omega": omega(word), "ok": good})
        return ok, {"rows": rows}
    return _timed(5, "Laurent coefficients a_-1, a_0", run)


# 6
def assumption1_suite(words=EXPANSION_CORPUS, exact_ns=(2, 3, 4), mc_word: str = "a1 a1",
                      mc_ns=(6, 10, 15, 20, 25), draws: int = 100_000, seed: int = 0,
                      factor: float = 3.0) -> SuiteResult:
    def run():
        exact = {}
        decreasing = True
        for w in words:
            rep = verify_assumption1(_w(w), q=1, exact_ns=exact_ns)
            res = [abs(r[4]) for r in rep.rows]
            dec = all(res[i + 1] < res[i] for i in range(len(res) - 1))
            decreasing &= dec
            exact[w] = {"residuals": [str(r) for r in res], "decreasing": dec}
        mc = verify_assumption1(_w(mc_word), q=1, exact_ns=(), sampled_ns=mc_ns, draws=draws,
                                seed=seed, factor=factor)
        rows = [{"n": n, "mean": m, "se": se, "partial": float(p), "residual": float(r)}
                for n, m, se, p, r in mc.rows]
        return decreasing and bool(mc.within_factor), {"exact": exact, "exact_decreasing": decreasing,
                                                      "mc_rows": rows, "C": mc.C,
                                                      "mc_within_factor": mc.within_factor}
    return _timed(6, "expansion accuracy", run)


# 7
def zeta_suite(n_lo: int = 4, n_hi: int = 30, upper: float = 2.3, s: int = 2, max_b: int = 3,
               n_tail: int = 40) -> SuiteResult:
    def run():
        z = {n: witten_zeta(s, n) for n in range(n_lo, n_hi + 1)}
        in_range = all(2 < v <= upper for v in z.values())
        scaled = {n: float(n * n * (v - 2)) for n, v in z.items()}
        mid = (n_lo + n_hi) // 2
        bounded = max(v for n, v in scaled.items() if n > mid) <= max(v for n, v in scaled.items() if n <= mid)
        kappas = {}
        tail_ok = True
        for b in range(1, max_b + 1):
            ks = []
            for n in range(3 * b * b, n_tail + 1):
                t = zeta_tail(s, n, b)
                ks.append(t["kappa"])
                tail_ok &= math.isfinite(t["kappa"])
            kappas[b] = max(ks)
        return in_range and bounded and tail_ok, {
            "zeta_range": [float(min(z.values())), float(max(z.values()))],
            "out_of_range": {n: str(v) for n, v in z.items() if not 2 < v <= upper},
            "n2_excess": {n: round(v, 6) for n, v in scaled.items()},
            "n2_excess_bounded": bounded, "kappa_max": kappas}
    return _timed(7, "Witten zeta behaviour", run)


# 8
def word_problem_suite(max_len: int = 6) -> SuiteResult:
    def run():
        trivial, ball = geometric_trivial_table(2, max_len)
        total = dis = triv = 0
        examples = []
        for w in reduced_words(2, max_len):
            total += 1
            a = trivial(w)
            b = is_trivial(Word(2, w))
            triv += a
            if a != b:
                dis += 1
                if len(examples) < 5:
                    examples.append(str(Word(2, w)))
        return dis == 0, {"words": total, "trivial": triv, "disagreements": dis, "examples": examples,
                          "oracle_ball_size": ball.size()}
    return _timed(8, "word problem oracle equivalence", run)


# 9
def geometry_suite(radius: int = 4, tol: float = 1e-9) -> SuiteResult:
    def run():
        defect = relator_defect(2)
        els = shared_ball(2).elements(radius)
        bad = []
        perturbed = 0
        for e in els[1:]:
            p = geodesic_edge_path(e.canonical)
            perturbed += p.perturbed > 0
            if len(p) != e.length:
                bad.append((str(e.canonical), len(p), e.length))
        grid = [0.0, 0.25, 0.5, 1.0, 2.0, 3.0]
        table = perpendicular_table(grid, grid)
        err = max(r["error"] for r in table)
        mono = all(
            perpendicular_table([d1], [d2])[0]["measured"] <= perpendicular_table([d1b], [d2b])[0]["measured"] + tol
            for d1, d1b in zip(grid, grid[1:]) for d2, d2b in zip(grid, grid[1:]))
        ok = defect < tol and not bad and err < tol and mono
        return ok, {"relator_defect": defect, "ball_elements": len(els), "length_mismatches": bad[:5],
                    "perturbed_arcs": perturbed, "perpendicular_max_error": err, "perpendicular_monotone": mono}
    return _timed(9, "hyperbolic geometry", run)


# 10
def power_suite(count: int = 200, seed: int = 0, max_pd: int = 60) -> SuiteResult:
    def run():
        rng = random.Random(seed)
        verified = enlarged = 0
        c3, maxu = [], []
        fails = []
        for i in range(count):
            letters, k, root = power_instance(rng, 2, max_pd)
            try:
                d = decompose_power(letters, k, root)
            except Exception as e:  # reported, counted as failure
                fails.append((i, repr(e)))
                continue
            verified += d.verified
            enlarged += d.enlarged
            c3.append(d.c3)
            maxu.append(d.max_u)
        ok = verified == count and not fails and all(math.isfinite(c) for c in c3)
        return ok, {"instances": count, "verified": verified, "enlarged": enlarged, "failures": fails[:5],
                    "c3_max": max(c3) if c3 else None, "c3_mean": statistics.fmean(c3) if c3 else None,
                    "max_u": max(maxu) if maxu else None}
    return _timed(10, "power decomposition", run)


# 11
def _median_se(vals, rng, boots: int = 2000) -> float:
    """Bootstrap standard error of the sample median."""
    a = np.asarray(vals)
    idx = rng.integers(0, len(a), size=(boots, len(a)))
    return float(np.median(a[idx], axis=1).std(ddof=1))


def norms_suite(ns=(10, 15, 20, 25), samples: int = 50, seed: int = 0, cap: float = 7.5,
                lower_slack: float = 0.2, P: int = 5, sigmas: float = 3.0) -> SuiteResult:
    """Medians must sit in [lower bound - slack, cap]; a rise between
    consecutive n counts as noise when below `sigmas` bootstrap standard errors."""
    def run():
        x = AlgebraElement.generator_sum(2)
        lb = norm_lower_bound(x, P)
        rng = make_rng(seed)
        med, se = {}, {}
        for n in ns:
            vals = [pi_norm(x, sample_hom(n, seed + 10_000 * n + i)) for i in range(samples)]
            med[n] = statistics.median(vals)
            se[n] = _median_se(vals, rng)
        ms = [med[n] for n in ns]
        in_band = all(lb - lower_slack <= m <= cap for m in ms)
        rises = []
        for a, b in zip(ns, ns[1:]):
            allowed = sigmas * math.hypot(se[a], se[b])
            if med[b] > med[a] + allowed:
                rises.append({"from": a, "to": b, "rise": med[b] - med[a], "allowed": allowed})
        return in_band and not rises, {"medians": med, "median_se": se, "lower_bound": lb, "cap": cap,
                                       "in_band": in_band, "significant_rises": rises}
    return _timed(11, "strong convergence trend", run)


# 12
def _random_poly(rng, deg: int, scale: float = 1.0):
    return [Fraction(rng.randint(-20, 20), 10) * Fraction(scale).limit_denominator() for _ in range(deg + 1)]


def rational_proof_bound(P, Q, q: int, C: float, grid: int = 200) -> bool:
    """|Phi^(k)| <= 2^k (2C)^{2k+2} (2Cq)^{4Ck} k! on [0, (2Cq)^{-2C-1}] for 1 <= k <= Cq."""
    kmax = max(1, int(math.floor(C * q)))
    end = (2 * C * q) ** (-2 * C - 1)
    Pn = np.array([float(c) for c in P])
    Qn = np.array([float(c) for c in Q])
    for t0 in np.linspace(0.0, end, grid):
        d = np.abs(rational_derivatives(Pn, Qn, t0, kmax))
        for k in range(1, kmax + 1):
            if d[k] > 2 ** k * (2 * C) ** (2 * k + 2) * (2 * C * q) ** (4 * C * k) * math.factorial(k):
                return False
    return True


def markov_instances(count: int = 100, seed: int = 0) -> dict:
    rng = random.Random(seed)
    holds, worst = 0, 0.0
    for _ in range(count):
        q = rng.randint(1, 10)
        P = _random_poly(rng, rng.randint(0, q))
        k = rng.randint(1, q)
        r = markov_brothers_check(P, q, k, lattice=5000)
        holds += r.holds
        if r.rhs > 0:
            worst = max(worst, r.lhs / r.rhs)
    return {"instances": count, "holds": holds, "max_lhs_over_rhs": worst}


def rational_instances(count: int = 100, seed: int = 0, C: float = 2.0) -> dict:
    """Random P, Q of degree <= q meeting the hypotheses (others are redrawn)."""
    rng = random.Random(seed)
    holds, drawn, cps = 0, 0, []
    while len(cps) < count and drawn < 50 * count:
        drawn += 1
        q = rng.randint(1, 2)
        P = _random_poly(rng, rng.randint(0, q))
        Q = [Fraction(1)] + _random_poly(rng, q)[1:]
        r = rational_derivative_check(P, Q, q, C, samples=200, grid=100)
        if not r.hypothesis:
            continue
        good = bool(r.holds) and rational_proof_bound(P, Q, q, C, grid=100)
        holds += good
        cps.append(r.C_prime if r.C_prime is not None else math.inf)
    return {"instances": len(cps), "holds": holds, "drawn": drawn,
            "C_prime_max": max(cps) if cps else None}


def fourier_instances(count: int = 100, seed: int = 0) -> dict:
    rng = random.Random(seed)
    holds, worst = 0, 0.0
    for _ in range(count):
        q = rng.randint(1, 32)
        a = [rng.uniform(-1, 1) for _ in range(q + 1)]
        r = fourier_bound_check(a, rng.randint(1, 4))
        holds += r.holds
        worst = max(worst, r.lhs / r.rhs if r.rhs else 0.0)
    return {"instances": count, "holds": holds, "max_lhs_over_rhs": worst}


def analytics_suite(count: int = 100, seed: int = 0) -> SuiteResult:
    def run():
        res = {"markov": markov_instances(count, seed), "rational": rational_instances(count, seed + 1),
               "fourier": fourier_instances(count, seed + 2)}
        ok = all(r["holds"] == count and r["instances"] == count for r in res.values())
        return ok, res
    return _timed(12, "analytic lemmas", run)


SUITES = {1: frobenius_suite, 2: resolution_suite, 3: cassidy_suite, 4: theta_suite, 5: laurent_suite,
          6: assumption1_suite, 7: zeta_suite, 8: word_problem_suite, 9: geometry_suite,
          10: power_suite, 11: norms_suite, 12: analytics_suite}


def run_all(which=None) -> list[SuiteResult]:
    return [SUITES[i]() for i in (which or sorted(SUITES))]
