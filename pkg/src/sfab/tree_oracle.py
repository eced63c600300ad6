"""Explicit rank-one buildings: homogeneous and semi-homogeneous trees.

Vertices are numbered breadth first from a type-0 root.  Every vertex at a
given level has the same number of children, so parent and child ranges are
plain integer arithmetic on per-level offsets and nothing is materialised.
With q0 == q1 the tree is read as an A1 building (all vertices good,
lambda-distance = graph distance); otherwise as BC1 (good vertices are the
type-0 ones, lambda-distance = graph distance / 2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

MAX_DEPTH = 14


class TruncationError(ValueError):
    pass


@dataclass
class TreeBuilding:
    q0: int
    q1: int
    depth: int

    def __post_init__(self):
        if self.q0 < 1 or self.q1 < 1:
            raise ValueError("tree parameters must be >= 1")
        if not 0 <= self.depth <= MAX_DEPTH:
            raise ValueError(f"depth {self.depth} outside 0..{MAX_DEPTH}")
        sizes = [1]
        for L in range(self.depth):
            sizes.append(sizes[-1] * self.children_per(L))
        self.sizes = np.array(sizes, dtype=np.int64)
        self.offsets = np.concatenate([[0], np.cumsum(self.sizes)]).astype(np.int64)
        self.n_vertices = int(self.offsets[-1])

    # ---- structure ----
    @property
    def reduced(self) -> bool:
        return self.q0 == self.q1

    @property
    def step(self) -> int:
        """Graph distance per unit of lambda-distance."""
        return 1 if self.reduced else 2

    def children_per(self, level: int) -> int:
        if level == 0:
            return self.q1 + 1
        return self.q1 if level % 2 == 0 else self.q0

    def _cpl(self, levels: np.ndarray) -> np.ndarray:
        out = np.where(levels % 2 == 0, self.q1, self.q0)
        out = np.where(levels == 0, self.q1 + 1, out)
        return np.where(levels >= self.depth, 0, out).astype(np.int64)

    def level(self, v):
        return np.searchsorted(self.offsets, v, side="right") - 1

    def vertex_type(self, v):
        return self.level(v) % 2

    def parent(self, v):
        v = np.asarray(v, dtype=np.int64)
        L = self.level(v)
        if np.any(L == 0):
            raise ValueError("the root has no parent")
        return self.offsets[L - 1] + (v - self.offsets[L]) // self._cpl(L - 1)

    def children(self, v: int) -> np.ndarray:
        L = int(self.level(v))
        c = int(self._cpl(np.array([L]))[0])
        first = int(self.offsets[L + 1] + (v - self.offsets[L]) * c) if c else 0
        return np.arange(first, first + c, dtype=np.int64)

    def degree(self, v: int) -> int:
        return len(self.children(v)) + (1 if v else 0)

    def is_good(self, v) -> bool:
        return self.reduced or int(self.level(v)) % 2 == 0

    def ancestors(self, v: int) -> list:
        path = [int(v)]
        while path[-1] != 0:
            path.append(int(self.parent(path[-1])))
        return path[::-1]

    def distance(self, x: int, y: int) -> int:
        ax, ay = self.ancestors(x), self.ancestors(y)
        k = 0
        while k < min(len(ax), len(ay)) and ax[k] == ay[k]:
            k += 1
        return (len(ax) - k) + (len(ay) - k)

    def geodesic(self, x: int, y: int) -> list:
        ax, ay = self.ancestors(x), self.ancestors(y)
        k = 0
        while k < min(len(ax), len(ay)) and ax[k] == ay[k]:
            k += 1
        return ax[k - 1:][::-1] + ay[k:]

    def first_leaf_below(self, v: int) -> int:
        while int(self.level(v)) < self.depth:
            v = int(self.children(v)[0])
        return v

    # ---- spheres ----
    def sphere_graph(self, x: int, r: int) -> np.ndarray:
        """Vertices at graph distance exactly r from x (non-backtracking expansion)."""
        if int(self.level(x)) + r > self.depth:
            raise TruncationError(f"sphere of radius {r} around a level-{int(self.level(x))} "
                                  f"vertex leaves the depth-{self.depth} truncation")
        cur = np.array([x], dtype=np.int64)
        prev = np.array([-1], dtype=np.int64)
        for _ in range(r):
            L = self.level(cur)
            up = L > 0
            par = np.full(len(cur), -1, dtype=np.int64)
            if up.any():
                par[up] = self.parent(cur[up])
            mp = up & (par != prev)
            cnt = self._cpl(L)
            first = self.offsets[np.minimum(L + 1, self.depth)] + (cur - self.offsets[L]) * cnt
            tot = int(cnt.sum())
            grp = np.repeat(np.arange(len(cur)), cnt)
            within = np.arange(tot) - np.repeat(np.cumsum(cnt) - cnt, cnt)
            kids = first[grp] + within
            mk = kids != prev[grp]
            cur, prev = (np.concatenate([par[mp], kids[mk]]),
                         np.concatenate([cur[mp], cur[grp][mk]]))
        return np.sort(cur)

    def sphere(self, x: int, k: int) -> np.ndarray:
        """V_k(x): good vertices at lambda-distance k."""
        return self.sphere_graph(x, self.step * k)

    # ---- ends and horocycles ----
    def _span(self) -> np.ndarray:
        """span[a, b] = number of level-b descendants of a level-a vertex (a <= b)."""
        if not hasattr(self, "_span_tab"):
            D = self.depth
            tab = np.ones((D + 1, D + 1), dtype=np.int64)
            for a in range(D + 1):
                for b in range(a + 1, D + 1):
                    tab[a, b] = tab[a, b - 1] * self.children_per(b - 1)
            self._span_tab = tab
        return self._span_tab

    def ancestor_at(self, v, L):
        v = np.asarray(v, dtype=np.int64)
        lv = self.level(v)
        L = np.broadcast_to(np.asarray(L, dtype=np.int64), v.shape)
        return self.offsets[L] + (v - self.offsets[lv]) // self._span()[L, lv]

    def lca_depth(self, u, v):
        u, v = np.broadcast_arrays(np.asarray(u, dtype=np.int64), np.asarray(v, dtype=np.int64))
        top = np.minimum(self.level(u), self.level(v))
        out = np.full(u.shape, -1, dtype=np.int64)
        for L in range(int(top.max()) + 1 if u.size else 0):
            ok = (L <= top)
            Lc = np.minimum(L, top)
            same = ok & (self.ancestor_at(u, Lc) == self.ancestor_at(v, Lc))
            out = np.where(same, L, out)
        return out

    def distances(self, u, v):
        return self.level(u) + self.level(v) - 2 * self.lca_depth(u, v)

    def first_leaves(self, v):
        """Leftmost depth-D descendant of each v."""
        v = np.asarray(v, dtype=np.int64)
        lv = self.level(v)
        return self.offsets[self.depth] + (v - self.offsets[lv]) * self._span()[lv, self.depth]

    def confluence_depths(self, vs, leaf) -> np.ndarray:
        """Depth of the last common vertex of root->v and root->leaf."""
        return self.lca_depth(vs, leaf)

    def horocycle(self, x, y, leaf):
        """h(x, y; omega) in lambda units, omega the end through `leaf` (all broadcast)."""
        scalar = np.ndim(x) == 0 and np.ndim(y) == 0 and np.ndim(leaf) == 0
        jx = self.lca_depth(x, leaf)
        jy = self.lca_depth(y, leaf)
        if np.any(jx >= self.depth) or np.any(jy >= self.depth):
            raise TruncationError("horocycle not resolved before the truncation depth")
        g = (self.level(x) - 2 * jx) - (self.level(y) - 2 * jy)
        if np.any(g % self.step):
            raise ValueError("horocycle between non-good vertices")
        h = g // self.step
        return int(h) if scalar else h


def build_tree(q0: int, q1: int, depth: int) -> TreeBuilding:
    return TreeBuilding(int(q0), int(q1), int(depth))


def sphere_count(t: TreeBuilding, k: int, x: int = 0) -> int:
    return len(t.sphere(x, k))


def sphere_formula(t: TreeBuilding, k: int) -> int:
    if k == 0:
        return 1
    if t.reduced:
        return (t.q0 + 1) * t.q0 ** (k - 1)
    return (t.q1 + 1) * t.q0 ** k * t.q1 ** (k - 1)


def horocycle_census(t: TreeBuilding, k: int, x: int = 0, leaf: int | None = None) -> dict:
    leaf = t.first_leaf_below(x) if leaf is None else leaf
    hs = t.horocycle(x, t.sphere(x, k), leaf)
    vals, cnts = np.unique(hs, return_counts=True)
    return {int(v): int(c) for v, c in zip(vals, cnts)}


def structure_count(t: TreeBuilding, lam: int, mu: int, nu: int) -> Fraction:
    """(N_nu / (N_lam N_mu)) |V_lam(x) cap V_mu(y)| with y in V_nu(x), x the root."""
    x = 0
    y = int(t.sphere(x, nu)[0]) if nu else x
    Vl = t.sphere(x, lam)
    Vm = t.sphere(y, mu)
    inter = len(np.intersect1d(Vl, Vm, assume_unique=True))
    Nn, Nl, Nm = (len(t.sphere(x, k)) for k in (nu, lam, mu))
    return Fraction(Nn * inter, Nl * Nm)


def cylinder_masses(t: TreeBuilding, k: int) -> dict:
    """Leaf-counting mass of each cylinder Omega_root(y), y in V_k(root)."""
    leaves_total = int(t.sizes[-1])
    out = {}
    for y in t.sphere(0, k):
        lv = int(t.level(y))
        below = int(np.prod([t.children_per(L) for L in range(lv, t.depth)], dtype=object)) \
            if lv < t.depth else 1
        out[int(y)] = Fraction(below, leaves_total)
    return out


def tau_product(t: TreeBuilding, h: int) -> Fraction:
    """prod_alpha tau_alpha^{<h, alpha>} for rank one: q^h (A1) or (q0 q1)^h (BC1)."""
    base = Fraction(t.q0) if t.reduced else Fraction(t.q0 * t.q1)
    return base ** h


def _leaves_away_many(t: TreeBuilding, zs: np.ndarray, x: int):
    """(z index, leaf) pairs: one leaf below each child of z not on the root path of x."""
    zs = np.asarray(zs, dtype=np.int64)
    lz = t.level(zs)
    cnt = t._cpl(lz)
    grp = np.repeat(np.arange(len(zs)), cnt)
    within = np.arange(int(cnt.sum())) - np.repeat(np.cumsum(cnt) - cnt, cnt)
    first = t.offsets[np.minimum(lz + 1, t.depth)] + (zs - t.offsets[lz]) * cnt
    kids = first[grp] + within
    on_path = t.ancestor_at(np.full(len(kids), x), np.minimum(t.level(kids), t.level(x))) == kids
    on_path &= t.level(kids) <= t.level(x)
    keep = ~on_path
    return grp[keep], t.first_leaves(kids[keep])


def radon_nikodym_check(t: TreeBuilding, x: int, ys, zr: int) -> dict:
    """nu_y/nu_x on cylinders Omega_x(z) = Omega_y(z), z in V_zr(x) off the geodesic [x, y].

    Cylinder masses are 1/|V_d(.)| with |V_d| counted by explicit expansion
    around the root; every end through z (one leaf per branch) is tested.
    """
    Z = t.sphere(x, zr)
    Z = Z[t.level(Z) < t.depth]
    grp, leaves = _leaves_away_many(t, Z, x)
    counts: dict = {}

    def count(d):
        if d not in counts:
            counts[d] = Fraction(len(t.sphere(0, d)))
        return counts[d]

    checked, bad = 0, []
    for y in np.atleast_1d(np.asarray(ys, dtype=np.int64)):
        y = int(y)
        geo = np.array(t.geodesic(x, y), dtype=np.int64)
        off = ~np.isin(Z, geo)
        sel = off[grp]
        if not sel.any():
            continue
        zi = grp[sel]
        dyz = t.distances(np.full(len(zi), y), Z[zi]) // t.step
        h = t.horocycle(np.full(len(zi), x), np.full(len(zi), y), leaves[sel])
        for dy, hv in set(zip(dyz.tolist(), h.tolist())):
            ratio = count(zr) / count(dy)
            if ratio != tau_product(t, hv):
                bad.append({"x": x, "y": y, "d_yz": dy, "h": hv})
        checked += int(sel.sum())
    return {"checked": checked, "bad": bad, "ok": not bad and checked > 0}


def boundary_integral_hom(t: TreeBuilding, k: int, u: complex, x: int = 0) -> complex:
    """(1/N_k) sum_{z in V_k(x)} (u r)^{h(x, z; omega)}."""
    leaf = t.first_leaf_below(x)
    hs = t.horocycle(x, t.sphere(x, k), leaf)
    r = math.sqrt(float(tau_product(t, 1)))
    return complex(np.mean((u * r) ** hs.astype(np.float64)))


# ---------------------------------------------------------------------------
# operator norms
# ---------------------------------------------------------------------------

def radial_transitions(t: TreeBuilding, k: int, R: int, representative: str = "first") -> np.ndarray:
    """T[L, L']: members of V_k(v_L) at good level L' <= R, for a representative v_L per level."""
    T = np.zeros((R + 1, R + 1), dtype=np.int64)
    for L in range(R + 1):
        lev = L * t.step
        v = int(t.offsets[lev]) if representative == "first" else int(t.offsets[lev + 1] - 1)
        lv = t.level(t.sphere(v, k)) // t.step
        lv = lv[lv <= R]
        T[L] = np.bincount(lv, minlength=R + 1)[: R + 1]
    return T


def _radial_norm(t: TreeBuilding, k: int, R: int, iters: int) -> float:
    T = radial_transitions(t, k, R).astype(np.float64)
    Nk = sphere_formula(t, k)
    s = np.array([t.sizes[L * t.step] for L in range(R + 1)], dtype=np.float64)
    B = (np.sqrt(s)[:, None] * T / np.sqrt(s)[None, :]) / Nk
    B = 0.5 * (B + B.T)
    f = np.ones(R + 1)
    rq = 0.0
    for _ in range(iters):
        g = B @ (B @ f)
        rq = float(f @ g) / float(f @ f)
        f = g / np.linalg.norm(g)
    return math.sqrt(rq)


def power_iteration_report(t: TreeBuilding, k: int, iters: int = 2000) -> dict:
    """Norm of A_k compressed to balls around the root, plus an extrapolation in the radius.

    The compressed norm converges like 1/R^2; three radii from the same tree
    are fitted in h = 1/(R+2)^2 and evaluated at h = 0.
    """
    if k == 0:
        return {"raw": 1.0, "extrapolated": 1.0, "radii": [], "estimates": []}
    Rmax = (t.depth - t.step * k) // t.step
    radii = [Rmax - 4, Rmax - 2, Rmax]
    if radii[0] < 1:
        raise TruncationError("tree too shallow for the norm estimate")
    est = [_radial_norm(t, k, R, iters) for R in radii]
    h = np.array([1.0 / (R + 2) ** 2 for R in radii])
    coef = np.polyfit(h, np.array(est), 2)
    return {"raw": est[-1], "extrapolated": float(coef[-1]), "radii": radii, "estimates": est}


def power_iteration_norm(t: TreeBuilding, k: int, iters: int = 2000) -> float:
    """Estimate of ||A_k||: the radius-extrapolated Rayleigh quotient."""
    return power_iteration_report(t, k, iters)["extrapolated"]


def operator_matrix(t: TreeBuilding, k: int, R: int) -> tuple[np.ndarray, np.ndarray]:
    """Dense A_k compressed to good vertices of lambda-level <= R (small trees only)."""
    last = int(t.offsets[R * t.step + 1])
    verts = np.array([v for v in range(last) if t.is_good(v)], dtype=np.int64)
    pos = {int(v): i for i, v in enumerate(verts)}
    A = np.zeros((len(verts), len(verts)))
    Nk = sphere_formula(t, k)
    for v in verts:
        for w in t.sphere(int(v), k):
            j = pos.get(int(w))
            if j is not None:
                A[pos[int(v)], j] += 1.0 / Nk
    return A, verts


# ---------------------------------------------------------------------------
# further invariants
# ---------------------------------------------------------------------------

def good_vertices(t: TreeBuilding, max_level: int) -> np.ndarray:
    vs = np.arange(int(t.offsets[max_level + 1]), dtype=np.int64)
    return vs if t.reduced else vs[t.level(vs) % 2 == 0]


def cocycle_check(t: TreeBuilding, triples, leaf: int) -> bool:
    for x, y, z in triples:
        if t.horocycle(x, y, leaf) != t.horocycle(x, z, leaf) + t.horocycle(z, y, leaf):
            return False
    return True


def sector_check(t: TreeBuilding, x: int, y: int, lam: int, mu: int) -> dict:
    """Every end through z in V_lam(x) cap V_mu(y) gives h(x, y; omega) = lam - mu."""
    common = np.intersect1d(t.sphere(x, lam), t.sphere(y, mu), assume_unique=True)
    grp, leaves = _leaves_away_many(t, common, x)
    h = t.horocycle(np.full(len(leaves), x), np.full(len(leaves), y), leaves)
    ok = len(leaves) > 0 and bool(np.all(h == lam - mu))
    return {"intersections": len(common), "checked": int(len(leaves)), "ok": ok}


def geodesic_hull_count(t: TreeBuilding, x: int, y: int) -> int:
    """Good vertices on the geodesic from x to y (the convex hull in a tree)."""
    return sum(1 for v in t.geodesic(x, y) if t.is_good(v))
