"""Vertex counts, saturated sets, structure constants and the boundary-integral side.

Structure constants come from expanding P'_lam * P'_mu in the basis {P'_nu}:
the product is symmetric, so its dominant coefficients determine it, and
triangularity of the basis lets the top element be stripped repeatedly.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct

from .parameters import ParamSystem
from .qlaurent import QLaurent, QRatio
from .root_datum import RootSystem
from .spherical import macdonald_expand


# ---------------------------------------------------------------------------
# N_lambda
# ---------------------------------------------------------------------------

def n_lambda(lam, ps: ParamSystem) -> QLaurent:
    """W0(q^-1) / W0lam(q^-1) * q_{t_lam}."""
    lam = tuple(lam)
    cache = ps.__dict__.setdefault("_nlam", {})
    if lam not in cache:
        ratio = ps.W0_inv.divide_exact(ps.W0lam(lam, inverted=True))
        cache[lam] = ratio * ps.q_translation(lam)
    return cache[lam]


def q_w_lambda(lam, ps: ParamSystem) -> QLaurent:
    """q_{w_lam} = q_{t_lam} q_{w0}^{-1} q_{w_{0lam}} (longest element of the stabiliser)."""
    rs = ps.rs
    stab = rs.parabolic(rs.stabilizer_gens(lam))
    w0lam = max(stab, key=lambda w: w.length)
    return ps.q_translation(lam) * ps.q_w(rs.longest).inverse_monomial() * ps.q_w(w0lam)


def n_lambda_first(lam, ps: ParamSystem) -> QLaurent:
    """W0(q) / W0lam(q) * q_{w_lam}: the second route to N_lam."""
    lam = tuple(lam)
    ratio = ps.W0.divide_exact(ps.W0lam(lam, inverted=False))
    return ratio * q_w_lambda(lam, ps)


def n_lambda_checked(lam, ps: ParamSystem) -> QLaurent:
    a, b = n_lambda(lam, ps), n_lambda_first(lam, ps)
    if a != b:
        raise AssertionError(f"N_lambda formulas disagree at lambda={tuple(lam)}")
    return a


# ---------------------------------------------------------------------------
# saturated sets
# ---------------------------------------------------------------------------

def positive_coroots(rs: RootSystem) -> list:
    return sorted({rs.coroot(r) for r in rs.positive_roots})


def dominant_below(lam, rs: RootSystem) -> list:
    """Dominant mu with lam - mu in Q+, by downward search through dominant coweights."""
    lam = tuple(lam)
    key = ("dom_below", lam)
    if key in rs._cache:
        return rs._cache[key]
    pcs = positive_coroots(rs)
    seen = {lam}
    stack = [lam]
    while stack:
        m = stack.pop()
        for c in pcs:
            nm = tuple(a - b for a, b in zip(m, c))
            if nm not in seen and all(x >= 0 for x in nm):
                seen.add(nm)
                stack.append(nm)
    out = sorted(seen, key=lambda m: (-rs.rho_height(m), m))
    rs._cache[key] = out
    return out


def dominant_below_boxscan(lam, rs: RootSystem) -> list:
    """Oracle: scan coroot-base coefficients 0 <= k_i <= coord_i(lam)."""
    lam = tuple(lam)
    bound = rs.coroot_coords(lam)
    base = rs.coroot_base
    n = rs.rank
    out = []
    for ks in iproduct(*[range(int(b) + 1) for b in bound]):
        mu = tuple(lam[j] - sum(ks[i] * base[i][j] for i in range(n)) for j in range(n))
        if all(x >= 0 for x in mu):
            out.append(mu)
    return sorted(out, key=lambda m: (-rs.rho_height(m), m))


def dominant_between(lo, hi, rs: RootSystem) -> list:
    """Dominant eta with lo <= eta <= hi in the dominance order."""
    return [m for m in dominant_below(hi, rs) if rs.preceq(lo, m)]


@dataclass
class SaturatedSet:
    lam: tuple
    dominant_part: list
    rs: RootSystem

    def full(self) -> list:
        out = set()
        for mu in self.dominant_part:
            out |= self.rs.orbit(mu)
        return sorted(out)

    def root_string_closed(self) -> bool:
        members = set(self.full())
        for mu in members:
            for r in self.rs.roots:
                p = RootSystem.pair(mu, r)
                cor = self.rs.coroot(r)
                for i in range(0, p + 1) if p >= 0 else range(p, 1):
                    if tuple(a - i * b for a, b in zip(mu, cor)) not in members:
                        return False
        return True


def saturated_set(lam, rs: RootSystem) -> SaturatedSet:
    lam = tuple(lam)
    if any(c < 0 for c in lam):
        raise ValueError(f"saturated_set needs a dominant coweight, got {lam}")
    return SaturatedSet(lam, dominant_below(lam, rs), rs)


# ---------------------------------------------------------------------------
# structure constants
# ---------------------------------------------------------------------------

def _product_coeff(ps: ParamSystem, lam, kap, xi) -> QLaurent:
    """Coefficient of x^xi in P'_lam * P'_kap."""
    el = macdonald_expand(lam, ps=ps)
    ek = macdonald_expand(kap, ps=ps)
    rs = ps.rs
    tot = QLaurent(ps.nz)
    for a in el.support():
        b = tuple(x - y for x, y in zip(xi, a))
        cb = ek.coeffs.get(rs.dominant(b))
        if cb is None:
            continue
        tot = tot + el.coeffs[rs.dominant(a)] * cb
    return tot


def e_values(lam, kap, ps: ParamSystem, lowest=None, order: str = "lex") -> dict:
    """e_{lam,kap;eta} for all dominant eta above `lowest` (all of them if None)."""
    rs = ps.rs
    lam, kap = tuple(lam), tuple(kap)
    top = tuple(a + b for a, b in zip(lam, kap))
    cands = dominant_below(top, rs) if lowest is None else dominant_between(lowest, top, rs)
    sign = 1 if order == "lex" else -1
    cands = sorted(cands, key=lambda m: (-rs.rho_height(m), tuple(-sign * x for x in m)))
    out: dict = {}
    for eta in cands:
        val = _product_coeff(ps, lam, kap, eta)
        for prev, ev in out.items():
            c = macdonald_expand(prev, ps=ps).coeffs.get(eta)
            if c is not None:
                val = val - ev * c
        if not val.is_zero():
            out[eta] = val
    return out


def _sqrt_mono(m: QLaurent) -> QLaurent:
    e, c = m.monomial_data()
    if c != 1 or any(x % 2 for x in e):
        raise ValueError("monomial has no monomial square root")
    return QLaurent.monomial([x // 2 for x in e])


def a_from_e(lam, kap, nu, e: QLaurent, ps: ParamSystem) -> QRatio:
    """a = q_{t_lam}^{1/2} q_{t_kap}^{1/2} q_{t_nu}^{-1/2} N_nu/(N_lam N_kap) e."""
    mono = (_sqrt_mono(ps.q_translation(lam)) * _sqrt_mono(ps.q_translation(kap))
            * _sqrt_mono(ps.q_translation(nu)).inverse_monomial())
    return QRatio(mono * n_lambda(nu, ps) * e, n_lambda(lam, ps) * n_lambda(kap, ps))


def structure_constant(lam, kap, nu, ps: ParamSystem, order: str = "lex") -> QRatio:
    nu = tuple(nu)
    ev = e_values(lam, kap, ps, lowest=nu, order=order)
    e = ev.get(nu, QLaurent(ps.nz))
    return a_from_e(lam, kap, nu, e, ps)


def structure_constants(lam, mu, ps: ParamSystem, order: str = "lex") -> dict:
    """Full row nu -> a_{lam,mu;nu} (exact QRatio)."""
    ev = e_values(lam, mu, ps, order=order)
    return {nu: a_from_e(lam, mu, nu, e, ps) for nu, e in ev.items()}


def check_structure_row(lam, mu, ps: ParamSystem, row: dict) -> list:
    """Invariant failures for one row; empty list when all hold."""
    rs = ps.rs
    bad = []
    z = ps.zvals
    tot = sum((v for v in row.values()), QRatio(QLaurent.const(ps.nz, 0)))
    if not tot == 1:
        bad.append(f"row ({lam},{mu}) does not sum to 1")
    for nu, v in row.items():
        if v.evaluate(z) < -1e-12:
            bad.append(f"a_{{{lam},{mu};{nu}}} negative")
        if not rs.preceq(nu, tuple(a + b for a, b in zip(lam, mu))):
            bad.append(f"support {nu} not below lambda+mu")
    top = tuple(a + b for a, b in zip(lam, mu))
    lhs = row.get(top)
    if lhs is None or not (lhs * n_lambda(lam, ps) * n_lambda(mu, ps) == n_lambda(top, ps)):
        bad.append(f"top-term identity fails at ({lam},{mu})")
    return bad


# ---------------------------------------------------------------------------
# boundary integral side
# ---------------------------------------------------------------------------

def choose_nu_far(lam, rs: RootSystem) -> tuple:
    """Minimal N with N*rho^vee - mu strongly dominant for all mu in Pi_lam."""
    pts = saturated_set(lam, rs).full()
    N = max(1, max(max(mu) for mu in pts) + 1)
    return (N,) * rs.rank


def _phi_coeffs(lam, ps: ParamSystem, nu) -> dict:
    rs = ps.rs
    out = {}
    for mu in saturated_set(lam, rs).full():
        kap = tuple(a - b for a, b in zip(nu, mu))
        a = structure_constant(lam, kap, nu, ps)
        out[mu] = ps.r_power(mu).inverse_monomial() * a
    return out


def phi_lambda(lam, ps: ParamSystem, nu=None) -> dict:
    """mu -> r^{-mu} a_{lam, nu-mu; nu} over Pi_lam."""
    nu = choose_nu_far(lam, ps.rs) if nu is None else tuple(nu)
    return _phi_coeffs(tuple(lam), ps, nu)


def phi_check(lam, ps: ParamSystem) -> dict:
    """Compare phi_lam with P_lam coefficientwise, and phi at nu vs nu + rho^vee."""
    lam = tuple(lam)
    rs = ps.rs
    nu = choose_nu_far(lam, rs)
    nu2 = tuple(x + 1 for x in nu)
    phi1 = _phi_coeffs(lam, ps, nu)
    phi2 = _phi_coeffs(lam, ps, nu2)
    exp = macdonald_expand(lam, ps=ps)
    scale = exp.scale
    mism, indep = [], []
    for mu in sorted(phi1):
        if not phi1[mu] == scale * exp.coeff(mu):
            mism.append(list(mu))
        if not phi1[mu] == phi2[mu]:
            indep.append(list(mu))
    support_ok = set(phi1) >= set(exp.support())
    return {"lambda": list(lam), "nu": list(nu), "terms": len(phi1),
            "mismatch": mism, "nu_dependence": indep, "support_ok": support_ok,
            "ok": not mism and not indep and support_ok}


@dataclass
class HorocycleDistribution:
    lam: tuple
    counts: dict            # mu -> QLaurent
    values: dict            # mu -> Fraction at the given q
    total: Fraction

    def ok(self, n_lam: Fraction) -> bool:
        return (all(v.denominator == 1 and v >= 0 for v in self.values.values())
                and self.total == n_lam)


def horocycle_distribution(lam, ps: ParamSystem, nu=None) -> HorocycleDistribution:
    """n_lam(mu) = N_lam r^{-2mu} a_{lam, nu-mu; nu}."""
    lam = tuple(lam)
    rs = ps.rs
    nu = choose_nu_far(lam, rs) if nu is None else tuple(nu)
    counts, values = {}, {}
    nl = n_lambda(lam, ps)
    for mu in saturated_set(lam, rs).full():
        kap = tuple(a - b for a, b in zip(nu, mu))
        a = structure_constant(lam, kap, nu, ps)
        r2 = ps.r_power(mu).inverse_monomial() ** 2
        val = (a * (nl * r2)).as_laurent()
        counts[mu] = val
        values[mu] = ps.evaluate_exact(val)
    total = sum(values.values(), Fraction(0))
    return HorocycleDistribution(lam, counts, values, total)


def convex_hull_count(lam) -> int:
    out = 1
    for c in lam:
        out *= c + 1
    return out


def convex_hull_interval(lam, rs: RootSystem) -> int:
    """|{mu in P+ : lam - mu in P+}|."""
    return sum(1 for mu in iproduct(*[range(c + 1) for c in lam]))


def convex_hull_geometric(lam, rs: RootSystem) -> int:
    """Lattice points in every half-space bounded by a root wall that holds 0 and lam."""
    lam = tuple(lam)
    pos = rs.positive_roots
    lim = [(min(0, RootSystem.pair(lam, r)), max(0, RootSystem.pair(lam, r))) for r in pos]
    span = max(lam) * 2 + 2 if lam else 2
    cnt = 0
    for mu in iproduct(range(-span, span + 1), repeat=rs.rank):
        if all(lo <= RootSystem.pair(mu, r) <= hi for r, (lo, hi) in zip(pos, lim)):
            cnt += 1
    return cnt
