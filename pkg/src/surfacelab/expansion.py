"""The 1/n expansion of E[fix_gamma] and the polynomial-method analytics.

Phi_gamma is assembled exactly from the resolution of gamma and symbolic
Theta values, truncated to |lambda| <= B.  Dividing by Phi_id removes the
zeta(2; S_n) normalisation, and the power series of the quotient in t = 1/n
gives the Laurent coefficients a_{-1}, a_0, ...
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from numpy.polynomial import chebyshev as npcheb
from numpy.polynomial import polynomial as nppoly

from .algebra import QC, AlgebraElement
from .homs import ENUM_CAP, CapExceeded, fix_values, hom_array, sample_homs
from .ratfn import RationalFn, poly_eval, poly_mul, series_divide
from .resolutions import _core, build_cycle, enumerate_quotients
from .sn_calculus import falling, theta_symbolic
from .symmetric import dim, hook_dim_poly, partitions_of, plus_n, witten_zeta
from .words import Word, parse_word

__all__ = ["hook_dim_poly", "phi_gamma", "phi_gamma_at", "laurent_coefficients"]

PHI_WORD_CAP = 4
PHI_TRUNC_CAP = 1  # b = 2 pattern enumeration is out of reach, see notes


def default_truncation(q: int) -> int:
    return min(4 * q, PHI_TRUNC_CAP)


def _check_caps(core: Word, B: int):
    if len(core) > PHI_WORD_CAP:
        raise CapExceeded(f"|gamma| = {len(core)} exceeds {PHI_WORD_CAP}")
    if B > PHI_TRUNC_CAP:
        raise CapExceeded(f"truncation B = {B} exceeds {PHI_TRUNC_CAP}")


def _as_word(gamma, genus: int = 2) -> Word:
    return gamma if isinstance(gamma, Word) else parse_word(gamma, genus)


# --- Phi_gamma ---

@lru_cache(maxsize=None)
def _phi_cached(core: Word, B: int) -> RationalFn:
    total = RationalFn(0, [])
    for q in enumerate_quotients(build_cycle(core), check=False):
        W = q.graph
        for b in range(B + 1):
            for lam in partitions_of(b):
                lam = tuple(lam)
                inner = theta_symbolic(lam, W).inner_ratfn()
                # (n)_v / prod (n)_{e_f} * d_{lam+} * Theta; the e_f falling
                # factors cancel against Theta's own prefactor
                d_plus = RationalFn.from_n_poly(hook_dim_poly(lam))
                total = total + RationalFn.falling(W.v) * d_plus * inner * Fraction(1, dim(lam))
    return total


def phi_gamma(gamma, B: int = PHI_TRUNC_CAP) -> RationalFn:
    """Phi_gamma(n) as an exact rational function of t = 1/n."""
    core = _core(_as_word(gamma))
    _check_caps(core, B)
    return _phi_cached(core, B).copy()


def phi_gamma_at(gamma, n: int, B: int = PHI_TRUNC_CAP) -> Fraction:
    """Phi_gamma at one n, term by term (usable where the rational form has poles)."""
    core = _core(_as_word(gamma))
    _check_caps(core, B)
    if n < 2 * B:
        raise ValueError("need n >= 2B")
    total = Fraction(0)
    for q in enumerate_quotients(build_cycle(core), check=False):
        W = q.graph
        if W.v > n:
            continue
        den = 1
        for e in W.e_f():
            den *= falling(n, e)
        pref = Fraction(falling(n, W.v), den)
        for b in range(B + 1):
            for lam in partitions_of(b):
                lam = tuple(lam)
                total += pref * dim(plus_n(lam, n)) * theta_symbolic(lam, W).at(n)
    return total


def fix_mean_estimate(gamma, n: int, B: int = PHI_TRUNC_CAP) -> Fraction:
    """(2 / zeta(n)) Phi_gamma(n): the truncated estimate of E[fix_gamma]."""
    return 2 * phi_gamma_at(gamma, n, B) / witten_zeta(2, n)


def g_poly(q: int) -> list[Fraction]:
    """prod_{k < 9q} (1 - k t)^9, ascending coefficients in t."""
    p = [Fraction(1)]
    for k in range(9 * q):
        for _ in range(9):
            p = poly_mul(p, [Fraction(1), Fraction(-k)])
    return p


def q_polynomial(phi: RationalFn, q: int) -> list[Fraction]:
    """Q(t) = t * g_q(t) * Phi(t); a polynomial when Phi's denominator divides g_q."""
    r = phi.normalized()
    if r.is_zero():
        return []
    for i, m in r.den.items():
        if i >= 9 * q or m > 9:
            raise ValueError(f"denominator factor (1 - {i}t)^{m} does not divide g_q")
    if r.shift + 1 < 0:
        raise ValueError("Phi grows faster than n")
    cof = [Fraction(1)]
    for k in range(9 * q):
        for _ in range(9 - (r.den.get(k, 0) if k > 0 else 0)):
            cof = poly_mul(cof, [Fraction(1), Fraction(-k)])
    return [Fraction(0)] * (r.shift + 1) + poly_mul(r.num, cof)


def numerator_degree(phi: RationalFn, q: int) -> int:
    """deg p when Phi = p(n) / (n)_{9q}^9."""
    num, den = phi.numerator_in_n()
    for i, m in den.items():
        if i >= 9 * q or m > 9:
            raise ValueError("denominator does not divide (n)_{9q}^9")
    return len(num) - 1 + 81 * q - sum(den.values())


@dataclass
class LaurentCoefficients:
    gamma: str
    q: int
    B: int
    a: dict[int, Fraction]  # i -> a_i for i = -1 .. q-1
    q_id0: Fraction = Fraction(0)

    def u(self, k: int) -> Fraction:
        if k == 0:
            return self.a[-1]
        if k == 1:
            return self.a[0] - 1
        return self.a[k - 1]

    def partial_sum(self, n, order: int | None = None) -> Fraction:
        """a_{-1} n + a_0 + ... + a_{order-1} n^{-(order-1)}."""
        top = self.q if order is None else order
        return sum((self.a[i] * Fraction(n) ** (-i) for i in range(-1, top)), Fraction(0))

    def csv_rows(self) -> list[dict]:
        return [{"gamma": self.gamma, "i": i, "numerator": c.numerator, "denominator": c.denominator}
                for i, c in sorted(self.a.items())]


@lru_cache(maxsize=None)
def _laurent_cached(core: Word, q: int, B: int) -> tuple:
    qq = max(q, len(core), 1)
    Q = q_polynomial(_phi_cached(core, B), qq)
    Qid = q_polynomial(_phi_cached(Word(core.genus, ()), B), qq)
    if not Qid or Qid[0] == 0:
        raise ZeroDivisionError("Q_id vanishes at t = 0")
    qs = {k: c for k, c in enumerate(Q) if k <= q}
    qis = {k: c for k, c in enumerate(Qid) if k <= q}
    s = series_divide(qs, qis, q) if qs else {}
    a = {i: s.get(i + 1, Fraction(0)) for i in range(-1, q)}
    return a, Qid[0]


def laurent_coefficients(gamma, q: int = 2, B: int | None = None) -> LaurentCoefficients:
    """a_{-1}, ..., a_{q-1} from the series of Q / Q_id to order t^q."""
    w = _as_word(gamma)
    core = _core(w)
    if B is None:
        B = default_truncation(max(q, 1))
    _check_caps(core, B)
    a, q0 = _laurent_cached(core, q, B)
    return LaurentCoefficients(str(w) or "1", q, B, dict(a), q0)


# --- Assumption 1 ---

@dataclass
class Assumption1Report:
    gamma: str
    q: int
    rows: list = field(default_factory=list)  # (n, mean, stderr or 0, partial sum, residual)
    exponent: float | None = None
    C: float | None = None
    within_factor: bool | None = None


def _fit_exponent(ns, rs) -> float | None:
    pts = [(math.log(n), math.log(abs(r))) for n, r in zip(ns, rs) if r != 0]
    if len(pts) < 2:
        return None
    x, y = np.array(pts).T
    return float(np.polyfit(x, y, 1)[0])


def verify_assumption1(gamma, q: int = 1, exact_ns=(2, 3, 4), sampled_ns=(), draws: int = 100_000,
                       seed: int = 0, B: int | None = None, factor: float = 3.0,
                       chunk: int = 20_000) -> Assumption1Report:
    """Residuals of E[fix_gamma] against a_{-1} n + ... + a_{q-1} n^{-(q-1)}.

    Exact means by enumeration at exact_ns; Monte Carlo means (with standard
    errors) at sampled_ns, where a C/n curve is fitted to the residuals and
    checked within the given factor, each point widened by 3 sigma.
    """
    w = _as_word(gamma)
    lc = laurent_coefficients(w, max(q, 1), B)
    rep = Assumption1Report(str(w) or "1", q)
    for n in exact_ns:
        if n > ENUM_CAP:
            raise CapExceeded(f"exact mean needs n <= {ENUM_CAP}")
        vals = fix_values(w, hom_array(n))
        mean = Fraction(int(vals.sum()), len(vals))
        ps = lc.partial_sum(n, q)
        rep.rows.append((n, mean, 0.0, ps, mean - ps))
    mc = []
    for k, n in enumerate(sampled_ns):
        s1 = s2 = 0.0
        done = 0
        while done < draws:
            m = min(chunk, draws - done)
            vals = fix_values(w, sample_homs(n, m, seed + 1000 * k + done)).astype(float)
            s1 += vals.sum()
            s2 += (vals * vals).sum()
            done += m
        mean = s1 / draws
        se = math.sqrt(max(s2 / draws - mean * mean, 0.0) / (draws - 1))
        ps = float(lc.partial_sum(n, q))
        rep.rows.append((n, mean, se, ps, mean - ps))
        mc.append((n, mean - ps, se))
    rep.exponent = _fit_exponent([r[0] for r in rep.rows], [float(r[4]) for r in rep.rows])
    if mc:
        ns = np.array([m[0] for m in mc], float)
        rs = np.array([m[1] for m in mc])
        ses = np.array([m[2] for m in mc])
        # least squares for r ~ C / n, weighted by 1/se
        wts = 1.0 / np.maximum(ses, 1e-12)
        x = wts / ns
        C = float(np.dot(x, wts * rs) / np.dot(x, x))
        rep.C = C
        lo = np.minimum(C / factor, C * factor) / ns
        hi = np.maximum(C / factor, C * factor) / ns
        rep.within_factor = bool(np.all((rs + 3 * ses >= lo) & (rs - 3 * ses <= hi)))
    return rep


# --- analytics lemmas ---

def _double_factorial(k: int) -> int:
    return math.prod(range(k, 0, -2)) if k > 0 else 1


def _sup_abs_poly(coeffs, a: float, b: float, grid: int = 4001) -> float:
    """sup of |p| on [a, b]: dense grid plus endpoints and real critical points."""
    p = nppoly.Polynomial(coeffs)
    xs = list(np.linspace(a, b, grid))
    if p.degree() >= 2:
        for r in p.deriv().roots():
            if abs(r.imag) < 1e-12 and a <= r.real <= b:
                xs.append(r.real)
    return float(np.max(np.abs(p(np.array(xs)))))


@dataclass
class CheckResult:
    holds: bool
    lhs: float
    rhs: float

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs


def markov_brothers_check(P, q: int, k: int, lattice: int = 20_000) -> CheckResult:
    """sup_{[0, 1/2q^2]} |P^(k)| <= 2^{2k+1} q^{4k} / (2k-1)!! * sup_{n >= q^2} |P(1/n)|.

    P is given by ascending coefficients (Fractions or floats) of degree
    <= q.  The right side uses the lattice n = q^2 .. q^2 + lattice plus the
    limit t = 0, so it never exceeds the true supremum.
    """
    coeffs = [Fraction(c) for c in P]
    if len(coeffs) - 1 > q:
        raise ValueError("deg P > q")
    dk = nppoly.polyder([float(c) for c in coeffs], k) if len(coeffs) > k else [0.0]
    lhs = _sup_abs_poly(dk, 0.0, 1.0 / (2 * q * q))
    ns = np.arange(q * q, q * q + lattice + 1, dtype=float)
    vals = nppoly.polyval(1.0 / ns, [float(c) for c in coeffs])
    sup = max(float(np.max(np.abs(vals))), abs(float(coeffs[0])) if coeffs else 0.0)
    # exact values on the first lattice points guard against float loss
    for n in range(q * q, q * q + 50):
        sup = max(sup, abs(float(poly_eval(coeffs, Fraction(1, n)))))
    rhs = 2 ** (2 * k + 1) * float(q) ** (4 * k) / _double_factorial(2 * k - 1) * sup
    return CheckResult(lhs <= rhs * (1 + 1e-12), lhs, rhs)


def _taylor(coeffs: np.ndarray, t0: float, order: int) -> np.ndarray:
    """Taylor coefficients p^(j)(t0)/j! for j <= order."""
    out = np.zeros(order + 1)
    c = np.array(coeffs, float)
    for j in range(order + 1):
        if len(c) == 0:
            break
        out[j] = nppoly.polyval(t0, c) / math.factorial(j)
        c = nppoly.polyder(c) if len(c) > 1 else np.array([])
    return out


def rational_derivatives(P, Q, t0: float, order: int) -> np.ndarray:
    """Phi^(k)(t0) for k <= order, Phi = P / Q, via series division."""
    p = _taylor(P, t0, order)
    qq = _taylor(Q, t0, order)
    s = np.zeros(order + 1)
    for j in range(order + 1):
        s[j] = (p[j] - np.dot(s[:j], qq[j:0:-1])) / qq[0]
    return s * np.array([math.factorial(j) for j in range(order + 1)])


@dataclass
class RationalCheck:
    hypothesis: bool
    holds: bool | None
    C_prime: float | None
    note: str = ""


def rational_derivative_check(P, Q, q: int, C: float, samples: int = 400, grid: int = 200,
                              c_max: float = 1000.0) -> RationalCheck:
    """Smallest C' with sup_{[0,(C'q)^-C']} |Phi^(k)| <= (C'q)^{C'k} for 1 <= k <= Cq.

    The hypotheses |P(1/n)| <= C and 1/C <= Q(1/n) <= C are tested exactly
    on n = ceil((Cq)^C) .. + samples; when they fail no claim is made.
    """
    Pf = [Fraction(c) for c in P]
    Qf = [Fraction(c) for c in Q]
    n0 = math.ceil((C * q) ** C)
    for n in range(n0, n0 + samples):
        t = Fraction(1, n)
        pv, qv = poly_eval(Pf, t), poly_eval(Qf, t)
        if abs(pv) > C or not (1 / Fraction(C) <= qv <= C):
            return RationalCheck(False, None, None, f"hypothesis fails at n={n}")
    kmax = max(1, int(math.floor(C * q)))
    Pn = np.array([float(c) for c in Pf]) if Pf else np.zeros(1)
    Qn = np.array([float(c) for c in Qf])

    def ok(cp: float) -> bool:
        end = (cp * q) ** (-cp)
        worst = np.zeros(kmax + 1)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            for t0 in np.linspace(0.0, end, grid):
                d = np.abs(rational_derivatives(Pn, Qn, t0, kmax))
                worst = np.maximum(worst, np.where(np.isfinite(d), d, np.inf))
        bound = np.array([(cp * q) ** (cp * k) for k in range(kmax + 1)])
        return bool(np.all(worst[1:] <= bound[1:]))

    lo, hi = 1.0, 2.0
    if ok(lo):
        return RationalCheck(True, True, lo)
    while not ok(hi):
        lo, hi = hi, hi * 2
        if hi > c_max:
            return RationalCheck(True, False, None, f"no C' <= {c_max}")
    for _ in range(30):
        mid = (lo + hi) / 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return RationalCheck(True, True, hi)


def fourier_bound_check(a, m: int, grid: int = 2048) -> CheckResult:
    """sum_{k>=1} k^{m-1} |a_k| <= 4 max |f^(m)| with f = sum a_k cos(k theta)."""
    a = np.asarray(a, float)
    k = np.arange(len(a))
    lhs = float(np.sum(k[1:] ** (m - 1.0) * np.abs(a[1:])))
    th = np.linspace(0, 2 * np.pi, grid, endpoint=False)
    fm = (a * k ** float(m)) @ np.cos(np.outer(k, th) + m * np.pi / 2)
    rhs = 4 * float(np.max(np.abs(fm)))
    return CheckResult(lhs <= rhs * (1 + 1e-12) + 1e-300, lhs, rhs)


@dataclass
class ChebyshevExpansion:
    """h(t) = sum_k a_k T_k(t / K)."""
    K: float
    coeffs: np.ndarray

    @classmethod
    def from_polynomial(cls, h, K: float) -> "ChebyshevExpansion":
        scaled = [float(c) * K ** j for j, c in enumerate(h)]
        return cls(float(K), npcheb.poly2cheb(scaled))

    def __call__(self, t):
        return npcheb.chebval(np.asarray(t, float) / self.K, self.coeffs)

    def nodes(self, count: int = 64) -> np.ndarray:
        return self.K * np.cos((2 * np.arange(count) + 1) * np.pi / (2 * count))

    def reconstruction_error(self, h, count: int = 64) -> float:
        x = self.nodes(count)
        return float(np.max(np.abs(self(x) - nppoly.polyval(x, [float(c) for c in h]))))

    def weighted_l1(self, power: float) -> float:
        k = np.arange(len(self.coeffs))
        return float(np.sum(k[1:] ** power * np.abs(self.coeffs[1:])))


# --- master inequality certificate ---

def poly_of_element(x: AlgebraElement, h) -> AlgebraElement:
    """h(x) = sum_j h_j x^j in the group algebra."""
    out = AlgebraElement({}, x.genus)
    power = AlgebraElement.identity(x.genus)
    for j, c in enumerate(h):
        if j:
            power = power * x
        if c:
            out = out + power.scale(c)
    return out


def _real(c) -> Fraction:
    if isinstance(c, QC):
        return c.re
    return Fraction(c)


@dataclass
class MasterCertificate:
    x: str
    h: list
    n: int
    samples: int
    q: int
    length: int
    u: list  # u_k(h(x)) for k = 0 .. q|x|+1
    mean: float
    stderr: float
    f_h: float
    first_order: float
    resid_f_h: float
    resid_first_order: float
    K: float
    h_sup: float
    exact: bool


def master_certificate(x: AlgebraElement, h, n: int, samples: int = 20_000, seed: int = 0,
                       B: int | None = None) -> MasterCertificate:
    """Compare E[n^-1 tr h(pi_n(x))] with f_h(1/n) and with u_0 + u_1/n.

    tr pi_n(gamma) = fix(gamma) - 1 makes the statistic linear in the
    support of h(x).  When n <= the enumeration cap the mean is exact.
    K is replaced by the l1 norm of x, an upper bound for its reduced norm.
    """
    if not x.is_self_adjoint():
        raise ValueError("x must be self-adjoint")
    h = [Fraction(c) for c in h]
    q = max(len(h) - 1, 0)
    hx = poly_of_element(x, h)
    length = x.length()
    order = q * length + 1
    u = [Fraction(0)] * (order + 1)
    for g, c in hx.terms.items():
        lc = laurent_coefficients(g.canonical, order, B)
        for k in range(order + 1):
            u[k] += _real(c) * lc.u(k)
    exact = n <= ENUM_CAP
    homs = hom_array(n) if exact else sample_homs(n, samples, seed)
    stat = np.zeros(len(homs))
    for g, c in hx.terms.items():
        stat += float(_real(c)) * (fix_values(g.canonical, homs) - 1.0)
    stat /= n
    mean = float(stat.mean())
    se = 0.0 if exact else float(stat.std(ddof=1) / math.sqrt(len(stat)))
    t = 1.0 / n
    f_h = float(sum(float(uk) * t ** k for k, uk in enumerate(u)))
    first = float(u[0]) + float(u[1]) * t
    K = x.l1_norm()
    h_sup = _sup_abs_poly([float(c) for c in h] or [0.0], -K, K)
    return MasterCertificate(str(x), [str(c) for c in h], n, len(homs), q, length,
                             [str(v) for v in u], mean, se, f_h, first,
                             mean - f_h, mean - first, K, h_sup, exact)
