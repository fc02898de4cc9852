"""The surface group acting on the Poincare disk.

The base tile is the regular 4g-gon centred at 0 with interior angles
2 pi / 4g; its centre is o.  The outgoing Cayley edges at o run clockwise
a1, B1, A1, b1, a2, ...  Each generator is the side pairing that carries
o to the neighbouring centre and matches the edge labels there.

Long words put tile centres far beyond double precision in a global
frame, so paths are traced tile by tile with both arc endpoints recomputed
in the current tile's frame (Klein model, where geodesics are chords).
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .words import (Word, are_equal, dehn_reduce, free_reduce, generators, is_proper_power,
                    is_trivial, parse_word, relator, shared_ball)

TOL = 1e-9
EPS = 1e-7


class DegenerateArc(RuntimeError):
    pass


class DecompositionError(RuntimeError):
    pass


# --- Mobius maps ---

@dataclass(frozen=True)
class MobiusMap:
    """z -> (a z + b) / (c z + d), normalised to determinant 1."""
    m: np.ndarray

    @classmethod
    def of(cls, m) -> "MobiusMap":
        m = np.asarray(m, dtype=complex)
        return cls(m / np.sqrt(np.linalg.det(m)))

    @classmethod
    def identity(cls) -> "MobiusMap":
        return cls(np.eye(2, dtype=complex))

    @classmethod
    def rotation(cls, phi: float) -> "MobiusMap":
        return cls(np.array([[np.exp(0.5j * phi), 0], [0, np.exp(-0.5j * phi)]]))

    @classmethod
    def translation(cls, theta: float, dist: float) -> "MobiusMap":
        """Hyperbolic translation by dist along the diameter at angle theta."""
        c, s = math.cosh(dist / 2), math.sinh(dist / 2)
        t = cls(np.array([[c, s], [s, c]], dtype=complex))
        return cls.rotation(theta) @ t @ cls.rotation(-theta)

    def __matmul__(self, other: "MobiusMap") -> "MobiusMap":
        return MobiusMap(self.m @ other.m)

    def __call__(self, z):
        (a, b), (c, d) = self.m
        return (a * z + b) / (c * z + d)

    def inverse(self) -> "MobiusMap":
        (a, b), (c, d) = self.m
        return MobiusMap(np.array([[d, -b], [-c, a]]))

    def det(self) -> complex:
        return complex(np.linalg.det(self.m))

    def trace(self) -> complex:
        return complex(self.m[0, 0] + self.m[1, 1])

    def distance_to_identity(self) -> float:
        """Operator-norm distance to +-I (maps are defined up to sign)."""
        e = np.eye(2)
        return float(min(np.linalg.norm(self.m - e, 2), np.linalg.norm(self.m + e, 2)))

    def preserves_disk(self, samples: int = 64, tol: float = 1e-12) -> bool:
        th = np.linspace(0, 2 * np.pi, samples, endpoint=False)
        on = np.abs(np.abs(self(np.exp(1j * th))) - 1) < tol * 1e3
        inside = np.abs(self(0.5 * np.exp(1j * th))) < 1
        return bool(np.all(on) and np.all(inside) and abs(abs(self.det()) - 1) < tol)

    def su11(self) -> tuple[complex, complex]:
        """(alpha, beta) with the map in the form [[alpha, beta], [conj beta, conj alpha]]."""
        return complex(self.m[0, 0]), complex(self.m[0, 1])


# --- polygon data ---

def side_distance(g: int) -> float:
    """Distance from the tile centre to a side midpoint."""
    return math.acosh(1 / math.tan(math.pi / (4 * g)))


def circumradius(g: int) -> float:
    return math.acosh(1 / math.tan(math.pi / (4 * g)) ** 2)


def edge_order(g: int) -> list[int]:
    """Outgoing edge labels at o in clockwise order."""
    out = []
    for i in range(1, g + 1):
        a, b = 2 * i - 1, 2 * i
        out += [a, -b, -a, b]
    return out


def edge_angle(g: int) -> dict[int, float]:
    step = 2 * math.pi / (4 * g)
    return {x: -k * step for k, x in enumerate(edge_order(g))}


@lru_cache(maxsize=None)
def fuchsian_generators(g: int = 2) -> dict[int, MobiusMap]:
    """Side pairings for every letter (positive and negative)."""
    if g < 2:
        raise ValueError("genus must be at least 2")
    ang = edge_angle(g)
    two_r = 2 * side_distance(g)
    out = {}
    for x in ang:
        out[x] = MobiusMap.translation(ang[x], two_r) @ MobiusMap.rotation(ang[x] + math.pi - ang[-x])
    return out


def word_map(w: Word) -> MobiusMap:
    gens = fuchsian_generators(w.genus)
    m = np.eye(2, dtype=complex)
    for x in w.letters:
        m = m @ gens[x].m
    return MobiusMap(m)


def orbit_point(w: Word) -> complex:
    """w.o in the disk."""
    return complex(word_map(w)(0))


# --- distances ---

def disk_distance(z, w) -> float:
    num = abs(z - w)
    den = abs(1 - np.conj(w) * z)
    return 2 * math.atanh(min(num / den, 1 - 1e-17))


def to_klein(z: complex) -> complex:
    return 2 * z / (1 + abs(z) ** 2)


def from_klein(k: complex) -> complex:
    r2 = abs(k) ** 2
    return k / (1 + math.sqrt(max(1 - r2, 0.0)))


def _to_origin(a: complex):
    """Isometry sending a to 0 and its inverse, as functions."""
    ac = np.conj(a)
    return (lambda z: (z - a) / (1 - ac * z)), (lambda z: (z + a) / (1 + ac * z))


def segment_points(a: complex, b: complex, count: int) -> np.ndarray:
    """count points evenly spaced along the geodesic arc [a, b]."""
    fwd, back = _to_origin(a)
    bb = fwd(b)
    D = 2 * math.atanh(min(abs(bb), 1 - 1e-17))
    s = np.linspace(0, 1, count)
    pts = np.exp(1j * np.angle(bb)) * np.tanh(s * D / 2) if abs(bb) > 0 else np.zeros(count, complex)
    return back(pts)


# --- axes ---

@dataclass
class Axis:
    repelling: complex
    attracting: complex
    length: float  # translation length
    distance_from_o: float


def axis(m: MobiusMap) -> Axis:
    alpha, beta = m.su11()
    re = alpha.real
    if abs(re) <= 1 + 1e-12:
        raise ValueError("not hyperbolic: |trace| <= 2")
    s = math.sqrt(re * re - 1)
    bc = np.conj(beta)
    if abs(beta) < 1e-300:
        raise ValueError("hyperbolic map fixing 0 cannot preserve the disk")
    plus = (1j * alpha.imag + s) / bc
    minus = (1j * alpha.imag - s) / bc
    attracting, repelling = (plus, minus) if re > 0 else (minus, plus)
    attracting /= abs(attracting)
    repelling /= abs(repelling)
    rho = math.acosh(max(abs(beta) / s, 1.0))
    return Axis(complex(repelling), complex(attracting), 2 * math.acosh(abs(re)), rho)


def translation_length(w: Word) -> float:
    return axis(word_map(w)).length


def foot_on_axis(ax: Axis) -> complex:
    """Closest point of the axis to o."""
    p, q = ax.repelling, ax.attracting
    phi = abs(np.angle(q / p)) / 2  # half the angle subtended at o
    mid = (p + q)
    if abs(mid) < 1e-15:
        return 0j
    t = math.tan((math.pi / 2 - phi) / 2)
    return complex(mid / abs(mid) * t)


# --- Pi-paths ---

@dataclass
class PiPath:
    o: complex
    x: complex
    gx: complex
    go: complex
    axis: Axis
    degenerate: bool

    def arcs(self) -> list[tuple[complex, complex]]:
        if self.degenerate:
            return [(self.o, self.go)]
        return [(self.o, self.x), (self.x, self.gx), (self.gx, self.go)]

    def right_angle_defects(self) -> tuple[float, float]:
        """Pythagorean defects cosh d(o,y) - cosh d(o,x) cosh d(x,y) with y = gx (and
        the mirror at gx); zero iff the arcs meet the axis perpendicularly."""
        d1 = math.cosh(disk_distance(self.o, self.gx)) - \
            math.cosh(disk_distance(self.o, self.x)) * math.cosh(disk_distance(self.x, self.gx))
        d2 = math.cosh(disk_distance(self.go, self.x)) - \
            math.cosh(disk_distance(self.go, self.gx)) * math.cosh(disk_distance(self.x, self.gx))
        return d1, d2


def pi_path(gamma: Word) -> PiPath:
    if is_trivial(gamma):
        raise ValueError("the identity has no axis")
    m = word_map(gamma)
    ax = axis(m)
    x = foot_on_axis(ax)
    gx = complex(m(x))
    go = complex(m(0))
    return PiPath(0j, x, gx, go, ax, abs(x) < 1e-12)


@dataclass
class PiCloseReport:
    gamma: str
    c1: float
    pi_to_arc: float
    arc_to_pi: float
    d_x_z1: float
    d_gx_z2: float
    ordered: bool
    z1: complex
    z2: complex


def _min_dists(P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """For each point of P, distance to the nearest point of Q."""
    num = np.abs(P[:, None] - Q[None, :])
    den = np.abs(1 - np.conj(Q)[None, :] * P[:, None])
    return 2 * np.arctanh(np.minimum(num / den, 1 - 1e-17)).min(axis=1)


def verify_pi_close(gamma: Word, samples: int = 200) -> PiCloseReport:
    pp = pi_path(gamma)
    arc = segment_points(pp.o, pp.go, samples)
    pi = np.concatenate([segment_points(a, b, samples) for a, b in pp.arcs()])
    pi_to_arc = float(_min_dists(pi, arc).max())
    arc_to_pi = float(_min_dists(arc, pi).max())
    dx = _min_dists(arc, np.array([pp.x]))
    dgx = _min_dists(arc, np.array([pp.gx]))
    i1, i2 = int(np.argmin(dx)), int(np.argmin(dgx))
    d1, d2 = float(dx[i1]), float(dgx[i2])
    return PiCloseReport(str(gamma), max(pi_to_arc, arc_to_pi, d1, d2), pi_to_arc, arc_to_pi,
                         d1, d2, i2 >= i1, complex(arc[i1]), complex(arc[i2]))


# --- distance between perpendiculars ---

def perpendicular_distance(d1: float, d2: float) -> float:
    """Distance from z to L1, built in the disk: L the real diameter, L1 the
    perpendicular at 0, z at distance d2 up the perpendicular at distance d1."""
    z = MobiusMap.translation(0.0, d1)(1j * math.tanh(d2 / 2))
    # distance to the imaginary diameter
    return math.asinh(2 * abs(z.real) / (1 - abs(z) ** 2))


def perpendicular_table(d1s, d2s) -> list[dict]:
    rows = []
    for d1 in d1s:
        for d2 in d2s:
            meas = perpendicular_distance(d1, d2)
            formula = math.asinh(math.sinh(d1) * math.cosh(d2))
            rows.append({"d1": d1, "d2": d2, "measured": meas, "formula": formula,
                         "error": abs(meas - formula)})
    return rows


# --- tiles and geodesic edge paths ---

@dataclass
class GeodesicEdgePath:
    gamma: str
    tiles: list[Word]  # h_1 = 1, ..., h_k = gamma
    word: Word
    perturbed: int = 0

    def __len__(self) -> int:
        return len(self.word)


def _sides(g: int):
    ang = edge_angle(g)
    rk = math.tanh(side_distance(g))
    return [(x, complex(math.cos(t), math.sin(t))) for x, t in ang.items()], rk


def _dot(u: complex, v: complex) -> float:
    return u.real * v.real + u.imag * v.imag


def _exit_side(A: complex, B: complex, g: int):
    """Exit side of the base tile along the chord A -> B (Klein model).

    Returns (letter, s_out, degenerate) where s parametrises A + s (B - A).
    """
    sides, rk = _sides(g)
    d = B - A
    L = abs(d)
    s_in, s_out = -math.inf, math.inf
    cands = []
    for x, u in sides:
        den = _dot(d, u)
        num = rk - _dot(A, u)
        if abs(den) < 1e-300:
            continue
        s = num / den
        if den > 0:
            cands.append((s, x))
            s_out = min(s_out, s)
        else:
            s_in = max(s_in, s)
    cands.sort()
    tol = TOL / max(L, 1e-300)
    degenerate = (s_out - s_in < tol) or (len(cands) > 1 and cands[1][0] - cands[0][0] < tol)
    return cands[0][1], cands[0][0], degenerate


def geodesic_edge_path(gamma: Word, retries: int = 3, max_steps: int | None = None) -> GeodesicEdgePath:
    """Tiles crossed by the geodesic arc from o to gamma.o.

    When the arc meets a tiling vertex (or only touches a tile) it is pushed
    EPS to the left of its direction of travel, up to `retries` times with
    tenfold larger pushes.
    """
    g = gamma.genus
    target = dehn_reduce(gamma)
    if not len(target):
        raise ValueError("the identity has no edge path")
    steps = max_steps or 4 * len(target) + 8
    inv_path = Word(g, ())  # h^-1
    tiles = [Word(g, ())]
    letters = []
    perturbed = 0
    for _ in range(steps):
        rest = dehn_reduce(inv_path * target)
        if not len(rest):
            return GeodesicEdgePath(str(gamma), tiles, Word(g, tuple(letters)), perturbed)
        A = to_klein(orbit_point(inv_path))
        B = to_klein(orbit_point(rest))
        left = 1j * (B - A) / abs(B - A)
        for attempt in range(retries + 1):
            shift = 0.0 if attempt == 0 else EPS * 10 ** (attempt - 1)
            x, s_out, deg = _exit_side(A + shift * left, B + shift * left, g)
            if not deg:
                break
            perturbed += 1
        else:
            raise DegenerateArc(f"unresolved degeneracy on the arc to {gamma}")
        if s_out >= 1 + 1e-12:
            raise DegenerateArc(f"arc ended inside a tile other than {gamma}")
        letters.append(x)
        inv_path = free_reduce(Word(g, (-x,)) * inv_path)
        tiles.append(free_reduce(Word(g, tuple(letters))))
    raise DegenerateArc(f"edge path to {gamma} did not terminate in {steps} steps")


# --- locating points in tiles ---

@lru_cache(maxsize=None)
def _center_table(g: int, radius: int = 4):
    els = shared_ball(g).elements(radius)
    words = [e.canonical for e in els]
    pts = np.array([orbit_point(w) for w in words])
    return words, pts


def nearest_center(z: complex, g: int) -> Word:
    """The tile containing z, for z near o (within the radius-4 ball)."""
    words, pts = _center_table(g)
    num = np.abs(pts - z)
    den = np.abs(1 - np.conj(pts) * z)
    return words[int(np.argmin(num / den))]


def _conjugate(h: Word, w: Word) -> Word:
    return dehn_reduce(h.inverse() * w * h)


def axis_foot_tile(root: Word, max_steps: int = 200) -> Word:
    """An element b whose tile contains the foot of the perpendicular from o
    to the axis of root.  Greedy descent on the distance to the axis, then a
    local point location in the final frame."""
    g = root.genus
    h = Word(g, ())
    rho = axis(word_map(_conjugate(h, root))).distance_from_o
    for _ in range(max_steps):
        best = None
        for x in generators(g):
            hx = free_reduce(h * Word(g, (x,)))
            r = axis(word_map(_conjugate(hx, root))).distance_from_o
            if r < rho - 1e-9 and (best is None or r < best[1]):
                best = (hx, r)
        if best is None:
            break
        h, rho = best
    local = axis(word_map(_conjugate(h, root)))
    c = nearest_center(foot_on_axis(local), g)
    return dehn_reduce(h * c)


# --- power decompositions ---

@dataclass
class PowerDecomposition:
    k: int
    b: Word
    h: Word
    t: tuple[int, int, int, int]
    u: tuple[Word, Word, Word, Word]
    d: int
    p: int
    radius: int
    enlarged: bool
    verified: bool

    @property
    def max_u(self) -> int:
        return max(len(x) for x in self.u)

    @property
    def c3(self) -> float:
        return self.max_u / (self.d + math.log(self.p))

    def factors(self, letters: list[Word]) -> list[Word]:
        g = self.b.genus
        t1, t2, t3, t4 = self.t
        seg = lambda i, j: _concat(letters[i - 1:j - 1], g)
        u1, u2, u3, u4 = self.u
        return [seg(1, t1) * u1, u1.inverse() * seg(t1, t2) * u2, u2.inverse() * seg(t2, t3) * u3,
                u3.inverse() * seg(t3, t4) * u4, u4.inverse() * seg(t4, self.p + 1)]


def _concat(letters, g: int) -> Word:
    out = Word(g, ())
    for w in letters:
        out = out * w
    return out


def _short_word(w: Word) -> Word:
    """A short representative: the ball geodesic when available, else Dehn-reduced."""
    red = dehn_reduce(w)
    ball = shared_ball(w.genus)
    if len(red) <= ball.max_radius:
        ball.extend_to(max(ball.radius, min(len(red), 4)))
        hit = ball.find(red)
        if hit is not None:
            return Word(w.genus, hit)
    return red


def decompose_power(letters: list[Word], k: int | None = None, root: Word | None = None,
                    radius: int | None = None) -> PowerDecomposition:
    """Cut a word in S-letters representing a k-th power into b, h, h, h^{k-2}, b^-1.

    b is the tile of the foot of o on the root's axis and h = b^-1 root b.
    Cut points t_1 <= ... <= t_4 minimise the longest correction word u_i,
    each u_i joining the end of a prefix to one of b.o, bh.o, bh^2.o, bh^k.o.
    """
    if not letters:
        raise ValueError("empty word")
    g = letters[0].genus
    gamma = _concat(letters, g)
    if root is None or k is None:
        hit = is_proper_power(gamma)
        if hit is None:
            raise DecompositionError("no root found")
        root, k = hit[0].canonical, hit[1]
    if k < 2 or not are_equal(root ** k, gamma):
        raise ValueError("root^k does not represent the word")
    p = len(letters)
    d = max(len(w) for w in letters)
    b = axis_foot_tile(root)
    h = dehn_reduce(b.inverse() * root * b)
    targets = [b, dehn_reduce(b * h), dehn_reduce(b * h * h), dehn_reduce(b * h ** k)]
    prefixes = [Word(g, ())]
    for w in letters:
        prefixes.append(prefixes[-1] * w)
    cost = [[_short_word(pre.inverse() * tg) for tg in targets] for pre in prefixes]
    R0 = radius if radius is not None else 2 * (d + math.ceil(math.log2(p + 1))) + 4
    enlarged = False
    choice = _best_cuts(cost, R0)
    if choice is None:
        enlarged = True
        R0 *= 2
        choice = _best_cuts(cost, R0)
        if choice is None:
            raise DecompositionError(f"no cut points within correction radius {R0}")
    pos = choice
    t = tuple(i + 1 for i in pos)
    u = tuple(cost[i][j] for j, i in enumerate(pos))
    dec = PowerDecomposition(k, b, h, t, u, d, p, R0, enlarged, False)
    dec.verified = verify_decomposition(dec, letters)
    return dec


def _best_cuts(cost, R: int):
    """Monotone positions i_0 <= i_1 <= i_2 <= i_3 minimising the longest u."""
    P = len(cost)
    INF = (math.inf, math.inf)
    # best[j][i]: (max len, total len) using position i for target j
    best = [[INF] * P for _ in range(4)]
    back = [[-1] * P for _ in range(4)]
    for i in range(P):
        L = len(cost[i][0])
        if L <= R:
            best[0][i] = (L, L)
    for j in range(1, 4):
        run, arg = INF, -1
        for i in range(P):
            if best[j - 1][i] < run:
                run, arg = best[j - 1][i], i
            L = len(cost[i][j])
            if L <= R and run != INF:
                best[j][i] = (max(run[0], L), run[1] + L)
                back[j][i] = arg
    end = min(range(P), key=lambda i: best[3][i])
    if best[3][end] == INF:
        return None
    pos = [end]
    for j in range(3, 0, -1):
        pos.append(back[j][pos[-1]])
    return list(reversed(pos))


def verify_decomposition(dec: PowerDecomposition, letters: list[Word]) -> bool:
    """The five factors equal b, h, h, h^{k-2}, b^-1 under the word problem."""
    g = dec.b.genus
    f = dec.factors(letters)
    want = [dec.b, dec.h, dec.h, dec.h ** (dec.k - 2), dec.b.inverse()]
    return all(are_equal(a, w) for a, w in zip(f, want))


def power_instance(rng: random.Random, g: int = 2, max_pd: int = 60):
    """A random word in S-letters that is a k-th power by construction.

    Returns (letters, k, root).  S is a random symmetric set of short
    elements; the word is y x^k y^-1 with a few cancelling pairs inserted.
    """
    gens = generators(g)
    while True:
        d = rng.randint(1, 3)
        S = set()
        while len(S) < 3:
            L = rng.randint(1, d)
            w = [rng.choice(gens)]
            while len(w) < L:
                x = rng.choice(gens)
                if x != -w[-1]:
                    w.append(x)
            S.add(tuple(w))
        S = [Word(g, s) for s in S]
        S = S + [s.inverse() for s in S]
        d = max(len(s) for s in S)
        k = rng.choice([2, 2, 3, 4])
        m = rng.randint(1, 3)
        ly = rng.randint(0, 3)
        pad = rng.randint(0, 2)
        p = 2 * ly + k * m + 2 * pad
        if p * d > max_pd:
            continue
        x = [rng.choice(S) for _ in range(m)]
        xw = _concat(x, g)
        if is_trivial(xw):
            continue
        y = [rng.choice(S) for _ in range(ly)]
        letters = y + x * k + [s.inverse() for s in reversed(y)]
        for _ in range(pad):
            s = rng.choice(S)
            i = rng.randint(0, len(letters))
            letters[i:i] = [s, s.inverse()]
        root = _concat(y, g) * xw * _concat(y, g).inverse()
        return letters, k, root


# --- a geometric word-problem oracle ---

class GeometricBall:
    """Ball of the Cayley graph built by breadth-first search on tile centres.

    Two words name the same element iff they move o to the same point; distinct
    centres are at least twice the side distance apart, so a 1e-7 match is
    unambiguous at the radii used here.
    """

    def __init__(self, g: int = 2, radius: int = 3):
        self.g = g
        self.radius = radius
        self.points: list[complex] = [0j]
        self.words: list[Word] = [Word(g, ())]
        self._grid: dict[tuple[int, int], list[int]] = {}
        self._add_grid(0j, 0)
        gens = fuchsian_generators(g)
        frontier = [0]
        mats = {0: np.eye(2, dtype=complex)}
        for _ in range(radius):
            nxt = []
            for i in frontier:
                for x in generators(g):
                    m = mats[i] @ gens[x].m
                    z = complex((m[0, 1]) / (m[1, 1]))
                    if self.index(z) is None:
                        j = len(self.points)
                        self.points.append(z)
                        self.words.append(Word(g, self.words[i].letters + (x,)))
                        self._add_grid(z, j)
                        mats[j] = m
                        nxt.append(j)
            frontier = nxt

    def _cell(self, z: complex) -> tuple[int, int]:
        return (math.floor(z.real * 1e6), math.floor(z.imag * 1e6))

    def _add_grid(self, z: complex, i: int) -> None:
        self._grid.setdefault(self._cell(z), []).append(i)

    def index(self, z: complex):
        cx, cy = self._cell(z)
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for i in self._grid.get((cx + dx, cy + dy), ()):
                    if abs(self.points[i] - z) < 1e-7:
                        return i
        return None

    def size(self) -> int:
        return len(self.points)

    def element_index(self, w: Word) -> int:
        if len(w) > self.radius:
            raise ValueError("word longer than the ball radius")
        i = self.index(orbit_point(w))
        if i is None:
            raise RuntimeError(f"{w} not found in the ball")
        return i


def geometric_trivial_table(g: int = 2, max_len: int = 6):
    """For every freely reduced word of length <= max_len, triviality decided
    by comparing the ball indices of its two halves."""
    R = (max_len + 1) // 2
    ball = GeometricBall(g, R)
    index: dict[tuple[int, ...], int] = {(): 0}
    words_by_len = [[()]]
    gens = generators(g)
    for L in range(1, R + 1):
        layer = []
        for u in words_by_len[-1]:
            for x in gens:
                if u and u[-1] == -x:
                    continue
                w = u + (x,)
                layer.append(w)
                index[w] = ball.element_index(Word(g, w))
        words_by_len.append(layer)

    def trivial(w: tuple[int, ...]) -> bool:
        half = (len(w) + 1) // 2
        u, v = w[:half], w[half:]
        vinv = tuple(-x for x in reversed(v))
        return index[u] == index[vinv]

    return trivial, ball


def reduced_words(g: int, max_len: int):
    """All freely reduced words of length <= max_len, as letter tuples."""
    gens = generators(g)
    layer = [()]
    yield ()
    for _ in range(max_len):
        nxt = []
        for u in layer:
            for x in gens:
                if u and u[-1] == -x:
                    continue
                w = u + (x,)
                nxt.append(w)
                yield w
        layer = nxt


def relator_defect(g: int = 2) -> float:
    return word_map(relator(g)).distance_to_identity()


def boundary_reading(g: int = 2) -> Word:
    """Labels read counterclockwise around a vertex of the base tile (dual 4g-gon boundary)."""
    return relator(g)


def tile_dump(words: list[Word]) -> list[dict]:
    """JSON-ready centres and vertices of the tiles of the given elements."""
    out = []
    g = words[0].genus if words else 2
    R = circumradius(g)
    ang = edge_angle(g)
    step = math.pi / (4 * g)
    verts0 = [math.tanh(R / 2) * np.exp(1j * (t + step)) for t in ang.values()]
    for w in words:
        m = word_map(w)
        c = complex(m(0))
        vs = [complex(m(v)) for v in verts0]
        out.append({"element": str(w) or "1", "center": [c.real, c.imag],
                    "vertices": [[v.real, v.imag] for v in vs]})
    return out


def parse(text: str, g: int = 2) -> Word:
    return parse_word(text, g)
