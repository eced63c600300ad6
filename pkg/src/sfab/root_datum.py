"""Irreducible root systems (reduced A-G and non-reduced BC_n) and their Weyl groups.

Coweights are integer vectors in the basis of fundamental coweights, so that
the pairing with a root reduces to a dot product with its simple-root
coordinates.  Roots are generated in simple-root coordinates by closing the
simple roots under simple reflections (integer Cartan arithmetic); ambient
Bourbaki coordinates are kept alongside for reference.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

WEYL_CAP = 100_000

Coweight = tuple[int, ...]


class RootSystemError(ValueError):
    pass


def _e(dim: int, *pairs) -> tuple[Fraction, ...]:
    v = [Fraction(0)] * dim
    for idx, c in pairs:
        v[idx] += Fraction(c)
    return tuple(v)


def _simple_roots(tag: str, n: int) -> list[tuple[Fraction, ...]]:
    """Simple roots in ambient coordinates (Bourbaki plates)."""
    if tag == "A":
        if n < 1:
            raise RootSystemError("type A needs rank >= 1")
        return [_e(n + 1, (i, 1), (i + 1, -1)) for i in range(n)]
    if tag in ("B", "C", "BC"):
        lo = 1 if tag == "BC" else 2
        if n < lo:
            hint = " (C1 is A1; use type A)" if tag == "C" and n == 1 else ""
            hint = " (B1 is A1; use type A)" if tag == "B" and n == 1 else hint
            raise RootSystemError(f"type {tag} needs rank >= {lo}{hint}")
        roots = [_e(n, (i, 1), (i + 1, -1)) for i in range(n - 1)]
        last = {"B": 1, "BC": 1, "C": 2}[tag]
        roots.append(_e(n, (n - 1, last)))
        return roots
    if tag == "D":
        if n < 4:
            raise RootSystemError("type D needs rank >= 4 (D3 is A3)")
        roots = [_e(n, (i, 1), (i + 1, -1)) for i in range(n - 1)]
        roots.append(_e(n, (n - 2, 1), (n - 1, 1)))
        return roots
    if tag == "G2":
        return [_e(3, (0, 1), (1, -1)), _e(3, (0, -2), (1, 1), (2, 1))]
    if tag == "F4":
        h = Fraction(1, 2)
        return [
            _e(4, (1, 1), (2, -1)),
            _e(4, (2, 1), (3, -1)),
            _e(4, (3, 1)),
            _e(4, (0, h), (1, -h), (2, -h), (3, -h)),
        ]
    if tag in ("E6", "E7", "E8"):
        h = Fraction(1, 2)
        e8 = [
            _e(8, (0, h), (7, h), *[(k, -h) for k in range(1, 7)]),
            _e(8, (0, 1), (1, 1)),
            _e(8, (1, 1), (0, -1)),
        ] + [_e(8, (k, 1), (k - 1, -1)) for k in range(2, 7)]
        return e8[: int(tag[1])]
    raise RootSystemError(f"unsupported root system type {tag!r}")


def _parse_tag(type_tag: str, rank: int | None) -> tuple[str, int]:
    t = type_tag.strip().upper()
    if t in ("E6", "E7", "E8", "F4", "G2"):
        r = int(t[1])
        if rank is not None and rank != r:
            raise RootSystemError(f"type {t} has rank {r}, got {rank}")
        return t, r
    if t in ("E", "F", "G"):
        if rank is None:
            raise RootSystemError(f"type {t} needs a rank")
        return _parse_tag(f"{t}{rank}", rank)
    if t not in ("A", "B", "C", "D", "BC"):
        raise RootSystemError(f"unsupported root system type {type_tag!r}")
    if rank is None or rank < 1:
        raise RootSystemError(f"type {t} needs rank >= 1")
    return t, int(rank)


def _dot(u, v) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


@dataclass(frozen=True)
class WeylElement:
    matrix: tuple[tuple[int, ...], ...]   # acts on coweight coordinates (column vectors)
    word: tuple[int, ...]                 # reduced word, generators numbered 1..n
    length: int

    def act(self, mu) -> Coweight:
        return tuple(sum(r[j] * mu[j] for j in range(len(mu))) for r in self.matrix)

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(self.matrix, dtype=np.int64)


@dataclass
class RootSystem:
    type_tag: str
    rank: int
    simple_roots: list                      # ambient, exact rationals
    cartan: np.ndarray                      # cartan[i, j] = <alpha_i, alpha_j^vee>
    roots: list[Coweight] = field(default_factory=list)   # all roots, simple-root coords
    _cache: dict = field(default_factory=dict, repr=False)

    # ---- basic data -------------------------------------------------
    @property
    def name(self) -> str:
        return self.type_tag if self.type_tag[0] in "EFG" else f"{self.type_tag}{self.rank}"

    @property
    def reduced(self) -> bool:
        return self.type_tag != "BC"

    @cached_property
    def gram(self) -> list[list[Fraction]]:
        s = self.simple_roots
        return [[_dot(a, b) for b in s] for a in s]

    def norm2(self, k) -> Fraction:
        g = self.gram
        n = self.rank
        return sum((k[i] * k[j] * g[i][j] for i in range(n) for j in range(n)), Fraction(0))

    def ambient(self, k) -> tuple[Fraction, ...]:
        dim = len(self.simple_roots[0])
        return tuple(sum((k[i] * self.simple_roots[i][d] for i in range(self.rank)), Fraction(0))
                     for d in range(dim))

    @cached_property
    def positive_roots(self) -> list[Coweight]:
        pos = [r for r in self.roots if all(c >= 0 for c in r)]
        return sorted(pos, key=lambda r: (sum(r), r))

    @cached_property
    def root_set(self) -> frozenset:
        return frozenset(self.roots)

    def coroot(self, k) -> Coweight:
        """alpha^vee in coweight coordinates: <alpha^vee, alpha_j> = 2(alpha, alpha_j)/(alpha, alpha)."""
        key = ("coroot", tuple(k))
        if key not in self._cache:
            g = self.gram
            n = self.rank
            nn = self.norm2(k)
            out = []
            for j in range(n):
                v = 2 * sum((k[i] * g[i][j] for i in range(n)), Fraction(0)) / nn
                if v.denominator != 1:
                    raise RootSystemError("non-integral coroot pairing")
                out.append(int(v))
            self._cache[key] = tuple(out)
        return self._cache[key]

    @cached_property
    def coroot_index(self) -> dict:
        """coroot coords -> root (simple coords); injective also for BC_n."""
        table = {}
        for r in self.roots:
            c = self.coroot(r)
            if c in table:
                raise RootSystemError("coroot map not injective")
            table[c] = r
        return table

    @cached_property
    def simple_coroots(self) -> list[Coweight]:
        n = self.rank
        return [self.coroot(tuple(int(i == j) for j in range(n))) for i in range(n)]

    @cached_property
    def coroot_base(self) -> list[Coweight]:
        """Base of the coroot system; for BC_n the last one is (2 alpha_n)^vee = e_n."""
        base = list(self.simple_coroots)
        if self.type_tag == "BC":
            base[-1] = self.coroot(tuple(2 * int(j == self.rank - 1) for j in range(self.rank)))
        return base

    @cached_property
    def highest_root(self) -> Coweight:
        return max(self.positive_roots, key=lambda r: (sum(r), r))

    @property
    def marks(self) -> Coweight:
        return self.highest_root

    def in_R1(self, k) -> bool:
        return tuple(2 * c for c in k) not in self.root_set

    def in_R2(self, k) -> bool:
        if any(c % 2 for c in k):
            return True
        return tuple(c // 2 for c in k) not in self.root_set

    def in_R3(self, k) -> bool:
        return self.in_R1(k) and self.in_R2(k)

    def half(self, k):
        """alpha/2 if it is a root, else None."""
        if any(c % 2 for c in k):
            return None
        h = tuple(c // 2 for c in k)
        return h if h in self.root_set else None

    @staticmethod
    def pair(mu, k) -> int:
        return sum(a * b for a, b in zip(mu, k))

    # ---- coroot lattice ---------------------------------------------
    @cached_property
    def coroot_matrix_inverse(self) -> list[list[Fraction]]:
        """Rows give the coordinates of a coweight in the simple-coroot basis."""
        n = self.rank
        # column i of K is the i-th base coroot
        K = [[Fraction(self.coroot_base[i][r]) for i in range(n)] for r in range(n)]
        aug = [K[r] + [Fraction(int(r == c)) for c in range(n)] for r in range(n)]
        for col in range(n):
            piv = next(r for r in range(col, n) if aug[r][col] != 0)
            aug[col], aug[piv] = aug[piv], aug[col]
            p = aug[col][col]
            aug[col] = [x / p for x in aug[col]]
            for r in range(n):
                if r != col and aug[r][col] != 0:
                    f = aug[r][col]
                    aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
        return [row[n:] for row in aug]

    def coroot_coords(self, mu) -> tuple[Fraction, ...]:
        inv = self.coroot_matrix_inverse
        return tuple(sum((inv[i][j] * mu[j] for j in range(self.rank)), Fraction(0))
                     for i in range(self.rank))

    def in_coroot_lattice(self, mu) -> bool:
        return all(c.denominator == 1 for c in self.coroot_coords(mu))

    def in_Q_plus(self, mu) -> bool:
        return all(c.denominator == 1 and c >= 0 for c in self.coroot_coords(mu))

    def preceq(self, mu, lam) -> bool:
        """mu <= lam in the dominance order (lam - mu in Q+)."""
        return self.in_Q_plus(tuple(a - b for a, b in zip(lam, mu)))

    @cached_property
    def two_rho(self) -> Coweight:
        """Coefficients of 2 rho (sum of positive roots) in simple-root coordinates."""
        n = self.rank
        tot = [0] * n
        for r in self.positive_roots:
            if self.reduced or self.in_R1(r):
                for i in range(n):
                    tot[i] += r[i]
        return tuple(tot)

    def rho_height(self, mu) -> int:
        """<mu, 2 rho>: strictly increasing along the dominance order."""
        return self.pair(mu, self.two_rho)

    # ---- Weyl group ---------------------------------------------------
    def reflect(self, i: int, mu) -> Coweight:
        """s_i (1-based i) on coweight coords."""
        c = mu[i - 1]
        v = self.simple_coroots[i - 1]
        return tuple(m - c * a for m, a in zip(mu, v))

    def dominant(self, mu) -> Coweight:
        mu = tuple(mu)
        while True:
            for i, c in enumerate(mu):
                if c < 0:
                    mu = self.reflect(i + 1, mu)
                    break
            else:
                return mu

    def weyl_group(self) -> list[WeylElement]:
        if "W" not in self._cache:
            self._cache["W"] = self._enumerate(tuple(range(1, self.rank + 1)))
        return self._cache["W"]

    def parabolic(self, gens) -> list[WeylElement]:
        gens = tuple(sorted(gens))
        key = ("WJ", gens)
        if key not in self._cache:
            self._cache[key] = self._enumerate(gens)
        return self._cache[key]

    def _enumerate(self, gens) -> list[WeylElement]:
        n = self.rank
        ident = np.eye(n, dtype=np.int64)
        gen_mats = {}
        for i in gens:
            v = np.array(self.simple_coroots[i - 1], dtype=np.int64)
            m = ident.copy()
            m[:, i - 1] -= v
            gen_mats[i] = m
        seen = {ident.tobytes(): 0}
        mats = [ident]
        words: list[tuple[int, ...]] = [()]
        queue = deque([0])
        while queue:
            idx = queue.popleft()
            for i in gens:
                # right multiplication: w s_i has word (w..., i)
                m = mats[idx] @ gen_mats[i]
                key = m.tobytes()
                if key in seen:
                    continue
                if len(mats) >= WEYL_CAP:
                    raise RootSystemError(
                        f"Weyl group of {self.name} exceeds the enumeration cap of {WEYL_CAP} elements")
                seen[key] = len(mats)
                mats.append(m)
                words.append(words[idx] + (i,))
                queue.append(len(mats) - 1)
        return [WeylElement(tuple(tuple(int(x) for x in row) for row in m), w, len(w))
                for m, w in zip(mats, words)]

    def root_image(self, w: WeylElement, k) -> Coweight:
        """w(alpha) in simple-root coordinates, via the coroot image."""
        return self.coroot_index[w.act(self.coroot(k))]

    def inversions(self, w: WeylElement) -> int:
        # count a reduced subsystem only, so BC_n is not double counted
        return sum(1 for r in self.positive_roots
                   if self.in_R1(r) and any(c < 0 for c in self.root_image(w, r)))

    @cached_property
    def longest(self) -> WeylElement:
        return max(self.weyl_group(), key=lambda w: w.length)

    def orbit(self, mu) -> set:
        """W0-orbit of mu, generated by simple reflections."""
        mu = tuple(mu)
        seen = {mu}
        stack = [mu]
        while stack:
            m = stack.pop()
            for i in range(1, self.rank + 1):
                r = self.reflect(i, m)
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
        return seen

    def stabilizer_gens(self, lam) -> tuple[int, ...]:
        return tuple(i + 1 for i, c in enumerate(lam) if c == 0)

    def orbit_size(self, mu) -> int:
        d = self.dominant(mu)
        return len(self.weyl_group()) // len(self.parabolic(self.stabilizer_gens(d)))

    def lambda_star(self, lam) -> Coweight:
        lam = tuple(lam)
        if any(c < 0 for c in lam):
            raise RootSystemError(f"lambda_star needs a dominant coweight, got {lam}")
        return tuple(-c for c in self.longest.act(lam))


CLASSICAL_POSITIVE = {
    "A": lambda n: n * (n + 1) // 2,
    "B": lambda n: n * n,
    "C": lambda n: n * n,
    "D": lambda n: n * (n - 1),
    "BC": lambda n: n * (n + 1),
    "G2": lambda n: 6,
    "F4": lambda n: 24,
    "E6": lambda n: 36,
    "E7": lambda n: 63,
    "E8": lambda n: 120,
}


def build_root_system(type_tag: str, rank: int | None = None) -> RootSystem:
    tag, n = _parse_tag(type_tag, rank)
    key = (tag, n)
    if key in _REGISTRY:
        return _REGISTRY[key]
    simple = _simple_roots(tag, n)
    g = [[_dot(a, b) for b in simple] for a in simple]
    cartan = np.array([[int(2 * g[i][j] / g[j][j]) for j in range(n)] for i in range(n)],
                      dtype=np.int64)
    # closure under simple reflections, in simple-root coordinates
    start = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    if tag == "BC":
        start.append(tuple(2 * int(j == n - 1) for j in range(n)))
    seen = set(start)
    stack = list(start)
    while stack:
        k = stack.pop()
        for i in range(n):
            p = int(sum(k[j] * cartan[j, i] for j in range(n)))
            if p:
                r = tuple(k[j] - p * int(j == i) for j in range(n))
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
    rs = RootSystem(tag, n, simple, cartan, sorted(seen))
    npos = len(rs.positive_roots)
    if npos != CLASSICAL_POSITIVE[tag](n) or len(rs.roots) != 2 * npos:
        raise RootSystemError(f"root closure for {rs.name} gave {npos} positive roots")
    _REGISTRY[key] = rs
    return rs


_REGISTRY: dict = {}


def height(mu) -> int:
    return sum(mu)


def dominant_of_height(n: int, h: int):
    """All dominant coweights with coordinate sum exactly h."""
    if n == 1:
        yield (h,)
        return
    for first in range(h, -1, -1):
        for rest in dominant_of_height(n - 1, h - first):
            yield (first,) + rest


def dominant_up_to(n: int, hmax: int):
    for h in range(hmax + 1):
        yield from dominant_of_height(n, h)
