"""Words in the standard generators of the genus-g surface group.

Letters are nonzero integers: a_i is 2i-1, b_i is 2i, and a negative value
is the inverse letter.  Text syntax is whitespace separated tokens such as
``a1 B1 a2 b2`` where an uppercase letter denotes the inverse.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass
from functools import lru_cache

_TOKEN = re.compile(r"^([aAbB])(\d+)$")


def letter_name(x: int) -> str:
    idx = abs(x)
    base = "a" if idx % 2 == 1 else "b"
    if x < 0:
        base = base.upper()
    return f"{base}{(idx + 1) // 2}"


def letter_order(x: int) -> tuple[int, int]:
    # ShortLex letter order: a1 < A1 < b1 < B1 < a2 < ...
    return (abs(x), 0 if x > 0 else 1)


@dataclass(frozen=True)
class Word:
    genus: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        if self.genus < 2:
            raise ValueError("genus must be at least 2")
        top = 2 * self.genus
        for x in self.letters:
            if x == 0 or abs(x) > top:
                raise ValueError(f"letter {x} out of range for genus {self.genus}")

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        if self.genus != other.genus:
            raise ValueError("genus mismatch")
        return Word(self.genus, self.letters + other.letters)

    def __pow__(self, k: int) -> "Word":
        if k < 0:
            return self.inverse() ** (-k)
        return Word(self.genus, self.letters * k)

    def inverse(self) -> "Word":
        return Word(self.genus, tuple(-x for x in reversed(self.letters)))

    def is_reduced(self) -> bool:
        return all(a != -b for a, b in zip(self.letters, self.letters[1:]))

    def is_cyclically_reduced(self) -> bool:
        if not self.is_reduced():
            return False
        return len(self.letters) < 2 or self.letters[0] != -self.letters[-1]

    def sort_key(self):
        return (len(self.letters), tuple(letter_order(x) for x in self.letters))

    def __str__(self) -> str:
        return " ".join(letter_name(x) for x in self.letters)

    def __repr__(self) -> str:
        return f"Word({self.genus}, '{self}')"


def parse_word(text: str, genus: int = 2) -> Word:
    """Parse ``a1 B1 a2`` style text; ``1``, ``e`` or blank mean the empty word."""
    text = text.strip()
    if text in ("", "1", "e", "id"):
        return Word(genus, ())
    out = []
    for tok in text.replace("*", " ").split():
        m = _TOKEN.match(tok)
        if not m:
            raise ValueError(f"bad token {tok!r}")
        ch, i = m.group(1), int(m.group(2))
        if not 1 <= i <= genus:
            raise ValueError(f"generator index {i} out of range for genus {genus}")
        idx = 2 * i - 1 if ch.lower() == "a" else 2 * i
        out.append(idx if ch.islower() else -idx)
    return Word(genus, tuple(out))


def generators(genus: int) -> list[int]:
    """All 4g letters in ShortLex order."""
    out = []
    for idx in range(1, 2 * genus + 1):
        out.extend([idx, -idx])
    return out


def relator(genus: int) -> Word:
    letters = []
    for i in range(1, genus + 1):
        a, b = 2 * i - 1, 2 * i
        letters.extend([a, b, -a, -b])
    return Word(genus, tuple(letters))


def _free_reduce_seq(seq) -> list[int]:
    out: list[int] = []
    for x in seq:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return out


def free_reduce(w: Word) -> Word:
    return Word(w.genus, tuple(_free_reduce_seq(w.letters)))


def cyclic_reduce(w: Word) -> tuple[Word, Word]:
    """Return (core, conjugator) with w = conjugator * core * conjugator^-1 freely."""
    seq = _free_reduce_seq(w.letters)
    i, j = 0, len(seq) - 1
    while i < j and seq[i] == -seq[j]:
        i += 1
        j -= 1
    return Word(w.genus, tuple(seq[i:j + 1])), Word(w.genus, tuple(seq[:i]))


@lru_cache(maxsize=None)
def _piece_table(genus: int) -> dict[int, dict[tuple[int, ...], tuple[int, ...]]]:
    """For each length L > 2g, map every length-L piece of a cyclic
    rotation of r or r^-1 to the (inverse of the) complementary piece."""
    r = relator(genus).letters
    m = len(r)
    table: dict[int, dict[tuple[int, ...], tuple[int, ...]]] = {}
    for cyc in (r, tuple(-x for x in reversed(r))):
        for s in range(m):
            rot = cyc[s:] + cyc[:s]
            for L in range(2 * genus + 1, m + 1):
                piece = rot[:L]
                comp = rot[L:]
                repl = tuple(-x for x in reversed(comp))
                table.setdefault(L, {})[piece] = repl
    return table


def _dehn_seq(seq: list[int], genus: int) -> list[int]:
    table = _piece_table(genus)
    lengths = sorted(table, reverse=True)
    seq = _free_reduce_seq(seq)
    while True:
        hit = None
        for L in lengths:
            if L > len(seq):
                continue
            pieces = table[L]
            for p in range(len(seq) - L + 1):
                repl = pieces.get(tuple(seq[p:p + L]))
                if repl is not None:
                    hit = (p, L, repl)
                    break
            if hit:
                break
        if hit is None:
            return seq
        p, L, repl = hit
        seq = _free_reduce_seq(seq[:p] + list(repl) + seq[p + L:])


def dehn_reduce(w: Word) -> Word:
    """Dehn's algorithm; the result is empty iff w is trivial in the group."""
    return Word(w.genus, tuple(_dehn_seq(list(w.letters), w.genus)))


def is_trivial(w: Word) -> bool:
    return not _dehn_seq(list(w.letters), w.genus)


def are_equal(u: Word, v: Word) -> bool:
    if u.genus != v.genus:
        raise ValueError("genus mismatch")
    return not _dehn_seq(list(u.letters) + [-x for x in reversed(v.letters)], u.genus)


# --- exact invariants used to bucket elements before comparing them ---

@lru_cache(maxsize=None)
def _fingerprint_reps(genus: int, size: int = 13, count: int = 3, seed: int = 7):
    """A few homomorphisms to S_size built so the relator maps to the identity.

    Pairs (a_i, b_i), (a_{i+1}, b_{i+1}) are sent to (x, y) and (c y c^-1, c x c^-1)
    with c a power of [y, x]; a leftover pair goes to a commuting pair.
    """
    rng = random.Random(seed)

    def mul(p, q):  # apply p then q
        return tuple(q[i] for i in p)

    def inv(p):
        out = [0] * len(p)
        for i, j in enumerate(p):
            out[j] = i
        return tuple(out)

    def rand_perm():
        p = list(range(size))
        rng.shuffle(p)
        return tuple(p)

    reps = []
    for _ in range(count):
        images: dict[int, tuple[int, ...]] = {}
        i = 1
        while i <= genus:
            if i + 1 <= genus:
                x, y = rand_perm(), rand_perm()
                comm = mul(mul(mul(y, x), inv(y)), inv(x))
                c = tuple(range(size))
                for _ in range(rng.randrange(1, 5)):
                    c = mul(c, comm)
                ci = inv(c)
                images[2 * i - 1], images[2 * i] = x, y
                images[2 * i + 1] = mul(mul(ci, y), c)
                images[2 * i + 2] = mul(mul(ci, x), c)
                i += 2
            else:
                z = rand_perm()
                images[2 * i - 1], images[2 * i] = z, mul(z, z)
                i += 1
        for k in list(images):
            images[-k] = inv(images[k])
        reps.append(images)
    return reps


def invariant_key(w: Word) -> tuple:
    """Exact conjugation-free invariant of the element: abelianisation plus
    images in a few fixed finite permutation representations.  Equal
    elements have equal keys; distinct elements usually differ."""
    g = w.genus
    ab = [0] * (2 * g)
    for x in w.letters:
        ab[abs(x) - 1] += 1 if x > 0 else -1
    parts: list = [len(w.letters) % 2, tuple(ab)]
    for rep in _fingerprint_reps(g):
        p = tuple(range(len(rep[1])))
        for x in w.letters:
            img = rep[x]
            p = tuple(img[i] for i in p)
        parts.append(p)
    return tuple(parts)


# --- Cayley ball and canonical forms ---

class BallLimitError(RuntimeError):
    pass


class CayleyBall:
    """Breadth-first ball around the identity with ShortLex canonical words.

    Layer L lists the canonical (ShortLex-least geodesic) word of every
    element at distance L.  Prefixes of ShortLex-least geodesics are again
    ShortLex-least, so scanning layer L-1 in ShortLex order and appending
    letters in letter order meets every element first through its
    canonical word.
    """

    def __init__(self, genus: int = 2, max_radius: int = 6, cap: int = 250_000):
        self.genus = genus
        self.max_radius = max_radius
        self.cap = cap
        self.layers: list[list[tuple[int, ...]]] = [[()]]
        self._buckets: dict[tuple, list[tuple[int, ...]]] = {invariant_key(Word(genus)): [()]}
        self._length: dict[tuple[int, ...], int] = {(): 0}
        self._steps: dict[tuple, tuple[int, ...]] = {}

    @property
    def radius(self) -> int:
        return len(self.layers) - 1

    def size(self) -> int:
        return sum(len(layer) for layer in self.layers)

    def extend_to(self, radius: int) -> None:
        if radius > self.max_radius:
            raise BallLimitError(f"radius {radius} exceeds configured maximum {self.max_radius}")
        gens = generators(self.genus)
        while self.radius < radius:
            L = self.radius
            new: list[tuple[int, ...]] = []
            for u in self.layers[L]:
                for s in gens:
                    if u and u[-1] == -s:
                        continue
                    cand = u + (s,)
                    # a Dehn shortening means the element already sits in an inner layer
                    if len(_dehn_seq(list(cand), self.genus)) < L + 1:
                        continue
                    if self._lookup(cand, (L - 1, L + 1)) is not None:
                        continue
                    new.append(cand)
                    self._insert(cand, L + 1)
                    if self.size() > self.cap:
                        raise BallLimitError(f"ball size exceeds cap {self.cap}")
            self.layers.append(new)

    def _insert(self, letters: tuple[int, ...], length: int) -> None:
        key = invariant_key(Word(self.genus, letters))
        self._buckets.setdefault(key, []).append(letters)
        self._length[letters] = length

    def _lookup(self, letters, lengths=None):
        w = Word(self.genus, tuple(letters))
        for cand in self._buckets.get(invariant_key(w), ()):
            if lengths is not None and self._length[cand] not in lengths:
                continue
            if are_equal(w, Word(self.genus, cand)):
                return cand
        return None

    def find(self, w: Word):
        """Canonical letters of w if it lies in the ball built so far."""
        return self._lookup(w.letters)

    def step(self, u: tuple[int, ...], s: int):
        """Canonical letters of u*s for canonical u, or None outside the ball."""
        key = (u, s)
        hit = self._steps.get(key)
        if hit is None:
            if u and u[-1] == -s:
                hit = u[:-1]
            else:
                if len(u) + 1 > self.radius:
                    if len(u) + 1 > self.max_radius:
                        return None
                    self.extend_to(len(u) + 1)
                hit = self._lookup(u + (s,))
                if hit is None:
                    return None
            self._steps[key] = hit
        return hit

    def elements(self, radius: int | None = None) -> list["GroupElement"]:
        r = self.radius if radius is None else radius
        self.extend_to(r)
        return [GroupElement(Word(self.genus, u), L)
                for L, layer in enumerate(self.layers[:r + 1]) for u in layer]

    def layer_sizes(self) -> list[int]:
        return [len(layer) for layer in self.layers]


_BALLS: dict[int, CayleyBall] = {}


def shared_ball(genus: int) -> CayleyBall:
    if genus not in _BALLS:
        _BALLS[genus] = CayleyBall(genus)
    return _BALLS[genus]


def cayley_ball(radius: int, genus: int = 2) -> list["GroupElement"]:
    return shared_ball(genus).elements(radius)


@dataclass(frozen=True, eq=False)
class GroupElement:
    """An element of the surface group.

    ``canonical`` is the ShortLex-least geodesic when the element lies
    within the shared Cayley ball, otherwise a Dehn-reduced representative
    (``geodesic`` is then False).  Equality is decided by the word problem.
    """
    canonical: Word
    length: int
    geodesic: bool = True

    @classmethod
    def of(cls, w: Word) -> "GroupElement":
        red = dehn_reduce(w)
        ball = shared_ball(w.genus)
        if len(red) <= ball.max_radius:
            ball.extend_to(max(ball.radius, len(red)))
            hit = ball.find(red)
            if hit is not None:
                return cls(Word(w.genus, hit), len(hit))
        return cls(red, len(red), False)

    @property
    def genus(self) -> int:
        return self.canonical.genus

    def __hash__(self) -> int:
        return hash(invariant_key(self.canonical))

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupElement):
            return NotImplemented
        if self.geodesic and other.geodesic:
            return self.canonical == other.canonical
        return are_equal(self.canonical, other.canonical)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement.of(self.canonical * other.canonical)

    def inverse(self) -> "GroupElement":
        return GroupElement.of(self.canonical.inverse())

    def is_identity(self) -> bool:
        return is_trivial(self.canonical)

    def __str__(self) -> str:
        return str(self.canonical) or "1"


# --- proper powers ---

def _perm_images(w: Word) -> list[tuple[int, ...]]:
    out = []
    for rep in _fingerprint_reps(w.genus):
        p = tuple(range(len(rep[1])))
        for x in w.letters:
            img = rep[x]
            p = tuple(img[i] for i in p)
        out.append(p)
    return out


def _perm_power(p: tuple[int, ...], k: int) -> tuple[int, ...]:
    out = tuple(range(len(p)))
    base = p
    while k:
        if k & 1:
            out = tuple(base[i] for i in out)
        base = tuple(base[i] for i in base)
        k >>= 1
    return out


@lru_cache(maxsize=16)
def _root_table(genus: int, radius: int):
    ball = shared_ball(genus)
    if radius > ball.max_radius:
        raise BallLimitError(f"root search radius {radius} exceeds ball maximum")
    rows: dict[tuple[int, ...], list] = {}
    for e in ball.elements(radius):
        w = e.canonical
        if not len(w):
            continue
        ab = [0] * (2 * genus)
        for x in w.letters:
            ab[abs(x) - 1] += 1 if x > 0 else -1
        rows.setdefault(tuple(ab), []).append((w, _perm_images(w)))
    return rows


def _power_root_search(w: Word, radius: int):
    """Largest k >= 2 with a root of length <= radius; exact invariants of
    the power (abelianisation, permutation images) prefilter candidates and
    the word problem confirms."""
    genus = w.genus
    ab_w = [0] * (2 * genus)
    for x in w.letters:
        ab_w[abs(x) - 1] += 1 if x > 0 else -1
    img_w = _perm_images(w)
    table = _root_table(genus, radius)
    kmax = max(len(w), 2)
    for k in range(kmax, 1, -1):
        if any(b % k for b in ab_w):
            continue
        for root, imgs in table.get(tuple(b // k for b in ab_w), ()):
            if any(_perm_power(p, k) != q for p, q in zip(imgs, img_w)):
                continue
            if are_equal(root ** k, w):
                return root, k
    return None


def is_proper_power(w: Word, search_radius: int | None = None):
    """Return (root, k) with k >= 2 maximal, or None when no root of length
    <= search_radius (default |w|) exists.  Roots of a conjugate are
    conjugates of roots, so the search runs on a cyclically reduced core."""
    if is_trivial(w):
        raise ValueError("identity has no root")
    red = dehn_reduce(w)
    core, conj = cyclic_reduce(red)
    core = dehn_reduce(core)
    r = len(w) if search_radius is None else search_radius
    r = min(r, shared_ball(w.genus).max_radius)
    hit = _power_root_search(core, r)
    if hit is None:
        return None
    root, k = hit
    return GroupElement.of(conj * root * conj.inverse()), k


def power_search_report(w: Word) -> dict:
    """Compare the default search radius |w| against the doubled radius."""
    base = is_proper_power(w)
    wide = is_proper_power(w, 2 * len(w))
    k0 = base[1] if base else 1
    k1 = wide[1] if wide else 1
    return {"word": str(w), "k_default": k0, "k_extended": k1, "changed": k0 != k1,
            "extended_radius": min(2 * len(w), shared_ball(w.genus).max_radius)}


def _num_divisors(k: int) -> int:
    return sum(1 for d in range(1, k + 1) if k % d == 0)


def omega(w: Word) -> int:
    """0 for the identity, otherwise the number of divisors of the maximal k
    with w a k-th power."""
    if is_trivial(w):
        return 0
    hit = is_proper_power(w)
    return 1 if hit is None else _num_divisors(hit[1])
