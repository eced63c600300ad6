"""Building parameters q_i, the root parameters tau_alpha, and derived monomials.

One z-variable is attached to every conjugacy class of affine simple
reflections, with q_i = z_{class(i)}^2.  All tau_alpha, q_w, q_{t_lambda} and
r^mu are then Laurent monomials in the z's with integer exponents.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
import math

from .qlaurent import QLaurent, parse_rational
from .root_datum import RootSystem, WeylElement, build_root_system


class ParameterError(ValueError):
    pass


def _coxeter_m(product: int) -> int:
    # a_ij * a_ji -> m_ij ; 4 only occurs for the affine A1 / BC1 diagrams (m = infinity)
    return {0: 2, 1: 3, 2: 4, 3: 6, 4: 0}[product]


def affine_classes(rs: RootSystem) -> list[tuple[int, ...]]:
    """Partition of the affine nodes {0..n} into classes forced to carry equal q."""
    n = rs.rank
    cart = rs.cartan
    top = rs.highest_root
    top_co = rs.coroot(top)
    parent = list(range(n + 1))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for i in range(n):
        for j in range(i + 1, n):
            if _coxeter_m(int(cart[i, j] * cart[j, i])) % 2 == 1:
                union(i + 1, j + 1)
    for j in range(n):
        a0j = -sum(top[k] * int(cart[k, j]) for k in range(n))   # <alpha_0, alpha_j^vee>
        aj0 = -top_co[j]                                          # <alpha_j, alpha_0^vee>
        if _coxeter_m(a0j * aj0) % 2 == 1:
            union(0, j + 1)
    if rs.reduced:
        # reduced types: q depends on root length only, node 0 carries the length of the top root
        top_len = rs.norm2(top)
        for j in range(n):
            e = tuple(int(i == j) for i in range(n))
            if rs.norm2(e) == top_len:
                union(0, j + 1)
    groups: dict = {}
    for i in range(n + 1):
        groups.setdefault(find(i), []).append(i)
    return sorted(tuple(g) for g in groups.values())


@dataclass
class ParamSystem:
    rs: RootSystem
    q: dict                       # node -> Fraction
    classes: list
    warnings: list = field(default_factory=list)

    # ---- variables ----
    @cached_property
    def class_of(self) -> dict:
        return {i: k for k, g in enumerate(self.classes) for i in g}

    @property
    def nz(self) -> int:
        return len(self.classes)

    @cached_property
    def names(self) -> list[str]:
        return [f"z{g[0]}" for g in self.classes]

    @cached_property
    def class_q(self) -> list[Fraction]:
        return [self.q[g[0]] for g in self.classes]

    @cached_property
    def zvals(self) -> list[float]:
        return [math.sqrt(float(v)) for v in self.class_q]

    def q_mono(self, i: int) -> QLaurent:
        e = [0] * self.nz
        e[self.class_of[i]] = 2
        return QLaurent.monomial(e)

    def one(self) -> QLaurent:
        return QLaurent.const(self.nz, 1)

    # ---- mode ----
    @property
    def n(self) -> int:
        return self.rs.rank

    @property
    def exceptional(self) -> bool:
        return self.rs.type_tag == "BC" and self.q[self.n] < self.q[0]

    @property
    def mode(self) -> str:
        return "exceptional" if self.exceptional else "standard"

    @property
    def a_b(self) -> tuple[float, float]:
        """a = sqrt(q_n q_0), b = sqrt(q_n / q_0) (BC_n only)."""
        qn, q0 = float(self.q[self.n]), float(self.q[0])
        return math.sqrt(qn * q0), math.sqrt(qn / q0)

    # ---- tau ----
    def _simple_length_node(self, k) -> int:
        """Simple node whose root has the same length as k (reduced part)."""
        nn = self.rs.norm2(k)
        for j in range(self.n):
            e = tuple(int(i == j) for i in range(self.n))
            if self.rs.norm2(e) == nn:
                return j + 1
        raise ParameterError(f"no simple root of the length of {k}")

    def tau(self, k) -> QLaurent:
        """tau_alpha as a z-monomial; 1 for non-roots."""
        k = tuple(k)
        cache = self.__dict__.setdefault("_tau", {})
        if k in cache:
            return cache[k]
        rs = self.rs
        if k not in rs.root_set:
            out = self.one()
        else:
            pos = k if all(c >= 0 for c in k) else tuple(-c for c in k)
            if rs.in_R3(pos):
                out = self.q_mono(self._simple_length_node(pos))
            elif not rs.in_R2(pos):          # R1 \ R3: the 2e_i
                out = self.q_mono(0)
            else:                             # R2 \ R3: the e_i
                out = self.q_mono(self._simple_length_node(pos)) * self.q_mono(0).inverse_monomial()
        cache[k] = out
        return out

    def tau_value(self, k) -> float:
        return self.tau(k).evaluate(self.zvals)

    def tau_half_exps(self, k):
        """Exponent vector of tau_alpha^{1/2}."""
        e, c = self.tau(k).monomial_data()
        return tuple(x // 2 for x in e)

    # ---- monomials attached to group elements ----
    def q_w(self, w: WeylElement) -> QLaurent:
        e = [0] * self.nz
        for i in w.word:
            e[self.class_of[i]] += 2
        return QLaurent.monomial(e)

    def q_word(self, word) -> QLaurent:
        e = [0] * self.nz
        for i in word:
            e[self.class_of[i]] += 2
        return QLaurent.monomial(e)

    def poincare(self, elements, inverted: bool = False) -> QLaurent:
        acc: dict = {}
        for w in elements:
            e = [0] * self.nz
            for i in w.word:
                e[self.class_of[i]] += -2 if inverted else 2
            t = tuple(e)
            acc[t] = acc.get(t, 0) + 1
        return QLaurent(self.nz, acc)

    @cached_property
    def W0_inv(self) -> QLaurent:
        return self.poincare(self.rs.weyl_group(), inverted=True)

    @cached_property
    def W0(self) -> QLaurent:
        return self.poincare(self.rs.weyl_group(), inverted=False)

    def W0lam(self, lam, inverted: bool = True) -> QLaurent:
        J = self.rs.stabilizer_gens(lam)
        key = ("W0lam", J, inverted)
        cache = self.__dict__.setdefault("_poin", {})
        if key not in cache:
            cache[key] = self.poincare(self.rs.parabolic(J), inverted=inverted)
        return cache[key]

    def q_translation(self, lam) -> QLaurent:
        """q_{t_lambda} = prod_{alpha > 0} tau_alpha^{<lambda, alpha>}."""
        lam = tuple(lam)
        if any(c < 0 for c in lam):
            raise ParameterError(f"q_translation needs a dominant coweight, got {lam}")
        return self.tau_power(lam, 2)

    def tau_power(self, mu, doubled: int) -> QLaurent:
        """prod_{alpha>0} tau_alpha^{doubled * <mu, alpha> / 2}."""
        e = [0] * self.nz
        for r in self.rs.positive_roots:
            p = RootSystem.pair(mu, r)
            if p:
                te, _ = self.tau(r).monomial_data()
                for i, x in enumerate(te):
                    e[i] += x * p * doubled
        if any(x % 2 for x in e):
            raise ParameterError("odd exponent in tau power")
        return QLaurent.monomial([x // 2 for x in e])

    def r_power(self, mu) -> QLaurent:
        """r^mu = prod_{alpha>0} tau_alpha^{<mu, alpha>/2}."""
        return self.tau_power(mu, 1)

    def r_power_fundamental(self, mu) -> QLaurent:
        """r^mu = prod_i q_{t_{lambda_i}}^{<mu, alpha_i>/2}; second route for r."""
        e = [0] * self.nz
        for i, c in enumerate(mu):
            if c:
                fund = tuple(int(j == i) for j in range(self.n))
                te, _ = self.q_translation(fund).monomial_data()
                for k, x in enumerate(te):
                    e[k] += x * c
        if any(x % 2 for x in e):
            raise ParameterError("odd exponent in r")
        return QLaurent.monomial([x // 2 for x in e])

    def longest_element_identity(self) -> dict:
        w0 = self.rs.longest
        lhs = self.q_w(w0)
        rhs = self.one()
        for r in self.rs.positive_roots:
            rhs = rhs * self.tau(r)
        ok = lhs == rhs
        if not ok:
            raise AssertionError("longest-element identity q_w0 = prod tau failed")
        return {"q_w0": lhs.to_text(self.names), "tau_product": rhs.to_text(self.names), "ok": ok}

    # ---- numbers ----
    def evaluate(self, p) -> float:
        return p.evaluate(self.zvals)

    def evaluate_exact(self, p) -> Fraction:
        return p.evaluate_exact(self.class_q)

    def describe(self) -> dict:
        rs = self.rs
        tau = {}
        for r in rs.positive_roots:
            tau[",".join(map(str, r))] = self.tau(r).to_text(self.names)
        return {
            "type": rs.type_tag,
            "rank": rs.rank,
            "q": {str(i): _fmt(self.q[i]) for i in sorted(self.q)},
            "classes": [list(g) for g in self.classes],
            "variables": self.names,
            "mode": self.mode,
            "tau": tau,
            "warnings": list(self.warnings),
        }


def _fmt(c: Fraction) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def parse_q(text, rank: int) -> dict:
    """'0=4,1=2' or '4' (all nodes) or a mapping -> {node: Fraction}."""
    if isinstance(text, dict):
        items = text.items()
    else:
        text = str(text).strip()
        if "=" not in text:
            v = parse_rational(text)
            return {i: v for i in range(rank + 1)}
        items = (p.split("=", 1) for p in text.split(",") if p.strip())
    out = {}
    for k, v in items:
        i = int(str(k).strip())
        if not 0 <= i <= rank:
            raise ParameterError(f"parameter index {i} outside 0..{rank}")
        out[i] = parse_rational(v)
    return out


def validate_params(rs: RootSystem, raw_q) -> ParamSystem:
    n = rs.rank
    q = parse_q(raw_q, n) if not isinstance(raw_q, dict) or any(
        not isinstance(v, Fraction) for v in raw_q.values()) else dict(raw_q)
    classes = affine_classes(rs)
    # fill unspecified nodes from their class
    for g in classes:
        given = [q[i] for i in g if i in q]
        if not given:
            raise ParameterError(f"no parameter given for nodes {list(g)}")
        for i in g:
            q.setdefault(i, given[0])
    for i, v in q.items():
        if v < 1:
            raise ParameterError(f"q_{i} = {v} must be a rational >= 1")
    if rs.type_tag == "BC" and q[0] == q[n]:
        target = "A1" if n == 1 else f"C{n}"
        raise ParameterError(
            f"BC{n} with q0 = q{n} is a reduced building; use type {target}")
    for g in classes:
        vals = {q[i] for i in g}
        if len(vals) > 1:
            msg = f"parameters of conjugate nodes {list(g)} must be equal, got " + \
                ", ".join(f"q{i}={_fmt(q[i])}" for i in g)
            if rs.type_tag == "A" and n == 1:
                msg += "; q0 != q1 requires type BC1"
            elif rs.type_tag == "C" and 0 in g and n in g:
                msg += f"; q0 != q{n} requires type BC{n}"
            raise ParameterError(msg)
    ps = ParamSystem(rs, q, classes)
    if rs.type_tag == "BC" and n >= 2 and q[1] > 1 and q[1] ** 2 < q[0]:
        ps.warnings.append(
            f"Higman bound violated: q1^2 = {_fmt(q[1] ** 2)} < q0 = {_fmt(q[0])}; "
            "no building has these parameters")
    return ps


def make_params(type_tag: str, rank, q) -> ParamSystem:
    return validate_params(build_root_system(type_tag, rank), q)


def q_w(w: WeylElement, ps: ParamSystem) -> QLaurent:
    return ps.q_w(w)


def poincare(subgroup, ps: ParamSystem, inverted: bool) -> QLaurent:
    return ps.poincare(subgroup, inverted)


def q_translation(lam, ps: ParamSystem) -> QLaurent:
    return ps.q_translation(lam)


def r_hom(ps: ParamSystem) -> list[QLaurent]:
    """r^{lambda_i} for each fundamental coweight, after checking both routes agree."""
    out = []
    for i in range(ps.n):
        fund = tuple(int(j == i) for j in range(ps.n))
        a, b = ps.r_power(fund), ps.r_power_fundamental(fund)
        if a != b:
            raise AssertionError(f"r-homomorphism routes disagree at {fund}")
        out.append(a)
    return out
