"""Macdonald spherical functions: exact expansion, direct evaluation, c-function.

The Weyl-group sum  sum_w w( x^lam prod_a num_a / den_a )  is put over the
common denominator  D = prod den_b * prod_{c_b != 1} den'_b,  where
den_b = 1 - c_b x^{-b^vee} and den'_b = 1 - c_b^{-1} x^{-b^vee}; the summed
numerator is then divided by the binomial factors of D one at a time, each
division asserting a zero remainder.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .parameters import ParamSystem
from .qlaurent import QLaurent, QRatio, TorusPoly, UPoint


class SingularPoint(ArithmeticError):
    pass


@dataclass(frozen=True)
class CFactor:
    root: tuple
    coroot: tuple
    a: QLaurent       # numerator coefficient  tau_a^{-1} tau_{a/2}^{-1/2}
    c: QLaurent       # denominator coefficient tau_{a/2}^{-1/2}


class CFunction:
    """c(u) = prod_{a>0} (1 - a_a u^{-a^vee}) / (1 - c_a u^{-a^vee})."""

    def __init__(self, ps: ParamSystem):
        self.ps = ps
        rs = ps.rs
        fs = []
        for r in rs.positive_roots:
            tau = ps.tau(r)
            half = rs.half(r)
            th = ps.tau(half) if half is not None else ps.one()
            e, _ = th.monomial_data()
            c = QLaurent.monomial([-(x // 2) for x in e])
            a = tau.inverse_monomial() * c
            if a.is_one() and c.is_one():
                continue   # tau_a = tau_{2a} = 1: the factor is 1
            fs.append(CFactor(r, rs.coroot(r), a, c))
        self.factors = fs
        z = ps.zvals
        self._num = [(f.coroot, f.a.evaluate(z), f.c.evaluate(z)) for f in fs]

    def __call__(self, u: UPoint, tol: float = 0.0) -> complex:
        out = 1 + 0j
        for cor, a, c in self._num:
            x = u.power(tuple(-v for v in cor))
            den = 1 - c * x
            if abs(den) <= tol:
                raise SingularPoint(f"c-function denominator vanishes at coroot {cor}")
            out *= (1 - a * x) / den
        return out

    def numeric_factors(self):
        """[(coroot, a, c)] floats, for vectorised grid evaluation."""
        return list(self._num)


def c_function(rs, ps: ParamSystem) -> CFunction:
    return CFunction(ps)


def bc_c_explicit(t, ps: ParamSystem) -> complex:
    """Closed two-block form of c(u) for BC_n in t_i = u^{e_i}."""
    n = ps.n
    a, b = ps.a_b
    q1 = float(ps.q[1]) if n >= 2 else 1.0
    out = 1 + 0j
    for ti in t:
        out *= (1 - 1 / (a * ti)) * (1 + 1 / (b * ti)) / (1 - ti ** -2)
    for j in range(n):
        for k in range(j + 1, n):
            tj, tk = t[j], t[k]
            out *= ((1 - tk / (q1 * tj)) * (1 - 1 / (q1 * tj * tk))
                    / ((1 - tk / tj) * (1 - 1 / (tj * tk))))
    return out


def bc_t_to_u(t) -> UPoint:
    """u_i = u^{lambda_i} = t_1 ... t_i for the BC_n base used here."""
    vals, acc = [], 1 + 0j
    for ti in t:
        acc *= ti
        vals.append(acc)
    return UPoint(vals)


# ---------------------------------------------------------------------------
# exact expansion
# ---------------------------------------------------------------------------

class SphericalExpansion:
    """P'_lam = sum over dominant mu of coeffs[mu] * m_mu  (unit leading coefficient)."""

    def __init__(self, ps: ParamSystem, lam, coeffs: dict):
        self.ps = ps
        self.lam = tuple(lam)
        self.coeffs = coeffs
        self.normalization = "P_prime"

    def coeff(self, mu) -> QLaurent:
        """P' coefficient of x^mu for any mu (via its dominant representative)."""
        d = self.ps.rs.dominant(mu)
        return self.coeffs.get(d, QLaurent(self.ps.nz))

    @property
    def scale(self) -> QRatio:
        """P_lam = scale * P'_lam."""
        return p_scale(self.ps, self.lam)

    def P_coeff(self, mu) -> QRatio:
        return self.scale * self.coeff(mu)

    def full(self) -> TorusPoly:
        rs = self.ps.rs
        out = {}
        for mu, c in self.coeffs.items():
            for nu in rs.orbit(mu):
                out[nu] = c
        return TorusPoly(rs.rank, self.ps.nz, out)

    def support(self) -> list:
        rs = self.ps.rs
        return sorted(nu for mu in self.coeffs for nu in rs.orbit(mu))

    def numeric_terms(self, normalized: bool = True):
        """(exps int64[K,n], coeffs float64[K]) of P_lam (or P'_lam)."""
        z = self.ps.zvals
        s = self.scale.evaluate(z) if normalized else 1.0
        keys = self.support()
        vals = {mu: c.evaluate(z) * s for mu, c in self.coeffs.items()}
        rs = self.ps.rs
        exps = np.array(keys, dtype=np.int64).reshape(len(keys), rs.rank)
        cs = np.array([vals[rs.dominant(k)] for k in keys], dtype=np.float64)
        return exps, cs

    def eval(self, u: UPoint, normalized: bool = True) -> complex:
        z = self.ps.zvals
        tot = 0j
        rs = self.ps.rs
        for mu, c in self.coeffs.items():
            cv = c.evaluate(z)
            tot += cv * sum(u.power(nu) for nu in sorted(rs.orbit(mu)))
        return tot * (self.scale.evaluate(z) if normalized else 1.0)

    def to_rows(self) -> list:
        names = self.ps.names
        return [{"mu": list(mu), "value": self.coeffs[mu].to_text(names)}
                for mu in sorted(self.coeffs, key=lambda m: (-sum(m), tuple(-x for x in m)))]


_EXPANSIONS: dict = {}


def _key(ps: ParamSystem, lam):
    return (ps.rs.name, tuple(ps.classes), tuple(lam))


def p_scale(ps: ParamSystem, lam) -> QRatio:
    """q_{t_lam}^{-1/2} W_{0lam}(q^{-1}) / W_0(q^{-1})."""
    qt = ps.q_translation(lam)
    e, _ = qt.monomial_data()
    half_inv = QLaurent.monomial([-(x // 2) for x in e])
    return QRatio(half_inv * ps.W0lam(lam, inverted=True), ps.W0_inv)


def _binom(c: QLaurent, d, nz: int) -> TorusPoly:
    return TorusPoly.binomial(c, d, nz)


def macdonald_expand(lam, rs=None, ps: ParamSystem | None = None, check: bool = True
                     ) -> SphericalExpansion:
    if ps is None:
        raise ValueError("macdonald_expand needs a parameter system")
    lam = tuple(int(x) for x in lam)
    rs = ps.rs
    if any(c < 0 for c in lam):
        raise ValueError(f"macdonald_expand needs a dominant coweight, got {lam}")
    key = _key(ps, lam)
    if key in _EXPANSIONS:
        exp = _EXPANSIONS[key]
        return SphericalExpansion(ps, lam, exp.coeffs)
    n, nz = rs.rank, ps.nz
    one = QLaurent.const(nz, 1)
    zero_x = (0,) * n
    if not any(lam):
        exp = SphericalExpansion(ps, lam, {zero_x: one})
        _EXPANSIONS[key] = exp
        return exp

    cf = CFunction(ps)
    num_prod = TorusPoly.const(n, nz, 1)
    den_factors = []
    for f in cf.factors:
        neg = tuple(-v for v in f.coroot)
        num_prod = num_prod * _binom(f.a, neg, nz)
        den_factors.append((f.c, neg))
        if not f.c.is_one():
            den_factors.append((f.c.inverse_monomial(), neg))

    coroot_pos = {f.coroot: f for f in cf.factors}
    total: dict = {}
    for w in rs.weyl_group():
        term = num_prod.weyl_act(w).shift(w.act(lam))
        mono_x = [0] * n
        mono_c = one
        for f in cf.factors:
            img = w.act(f.coroot)
            if img in coroot_pos:
                if not f.c.is_one():
                    term = term * _binom(f.c.inverse_monomial(), tuple(-v for v in img), nz)
            else:
                beta = tuple(-v for v in img)
                mono_c = mono_c * (-f.c)
                for i in range(n):
                    mono_x[i] += beta[i]
                if not f.c.is_one():
                    term = term * _binom(f.c, img, nz)
        inv_c = QRatio(one, mono_c).as_laurent() if not mono_c.is_monomial() else mono_c.inverse_monomial()
        shift = tuple(-v for v in mono_x)
        for k, v in term.terms.items():
            kk = tuple(a + b for a, b in zip(k, shift))
            vv = v * inv_c
            if kk in total:
                s = total[kk] + vv
                if s.is_zero():
                    del total[kk]
                else:
                    total[kk] = s
            else:
                total[kk] = vv
    poly = TorusPoly(n, nz, total)
    for c, d in den_factors:
        poly = poly.divide_binomial(c, d)
    wl = ps.W0lam(lam, inverted=True)
    coeffs = {}
    for mu, v in poly.terms.items():
        if all(x >= 0 for x in mu):
            coeffs[mu] = v.divide_exact(wl)
    exp = SphericalExpansion(ps, lam, coeffs)
    if check:
        _check_expansion(exp, poly, wl)
    _EXPANSIONS[key] = exp
    return exp


def _check_expansion(exp: SphericalExpansion, poly: TorusPoly, wl: QLaurent) -> None:
    rs = exp.ps.rs
    lam = exp.lam
    if not exp.coeffs.get(lam, QLaurent(exp.ps.nz)).is_one():
        raise AssertionError(f"triangularity: leading coefficient of P'_{lam} is not 1")
    for mu in poly.terms:
        d = rs.dominant(mu)
        if poly.terms[mu] != poly.terms.get(d):
            raise AssertionError(f"W0-invariance fails for P'_{lam} at {mu}")
    for mu in exp.coeffs:
        if not rs.preceq(mu, lam):
            raise AssertionError(f"support of P'_{lam} contains {mu}, not below lambda")


def macdonald_eval(lam, u: UPoint, ps: ParamSystem, tol: float = 1e-7) -> complex:
    """Direct Weyl-sum evaluation; falls back to the exact expansion near singular points."""
    lam = tuple(lam)
    if not any(lam):
        return 1 + 0j
    rs = ps.rs
    cf = CFunction(ps)
    z = ps.zvals
    qt = ps.q_translation(lam).evaluate(z)
    w0inv = ps.W0_inv.evaluate(z)
    tot = 0j
    try:
        for w in rs.weyl_group():
            val = u.power(w.act(lam))
            for cor, a, c in cf.numeric_factors():
                x = u.power(tuple(-v for v in w.act(cor)))
                den = 1 - c * x
                if abs(den) <= tol:
                    raise SingularPoint("singular")
                val *= (1 - a * x) / den
            tot += val
    except SingularPoint:
        return macdonald_expand(lam, ps=ps).eval(u)
    return tot / (math.sqrt(qt) * w0inv)


def macdonald_hom(lam, u: UPoint, ps: ParamSystem) -> complex:
    return macdonald_eval(lam, u, ps)


def norm_at_one(lam, ps: ParamSystem) -> tuple[float, QRatio]:
    """P_lam(1): sum of coefficients times orbit sizes."""
    exp = macdonald_expand(lam, ps=ps)
    rs = ps.rs
    tot = QLaurent(ps.nz)
    for mu, c in exp.coeffs.items():
        tot = tot + c * rs.orbit_size(mu)
    val = exp.scale * tot
    return val.evaluate(ps.zvals), val


def clear_cache() -> None:
    _EXPANSIONS.clear()
