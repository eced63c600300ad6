"""Plancherel measure on the torus, quadrature, orthogonality and triple products.

Grids live in coordinates t with u^mu = prod_j t_j^{f_j(mu)}.  For BC_n the
t_i are u^{e_i} (so f_j = sum_{i >= j} mu_i); for every other type t_i = u_i.
The density is evaluated in product form, 1/phi_0 = prod (1-cx)(1-c/x) /
((1-ax)(1-a/x)), which never divides by a vanishing c-function denominator.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .hecke import n_lambda, structure_constants
from .parameters import ParamSystem
from .qlaurent import UPoint
from .spherical import CFunction, macdonald_expand, norm_at_one


class QuadratureError(RuntimeError):
    pass


def t_exponents(ps: ParamSystem, mu) -> tuple:
    if ps.rs.type_tag == "BC":
        n = len(mu)
        return tuple(sum(mu[i] for i in range(j, n)) for j in range(n))
    return tuple(mu)


def torus_nodes(N: int) -> np.ndarray:
    j = np.arange(N, dtype=np.float64)
    return np.exp(2j * np.pi * (j + 0.5) / N)


def _monomial_grid(f, axes) -> np.ndarray:
    out = np.ones(1, dtype=np.complex128)
    for a, e in zip(axes, f):
        out = np.multiply.outer(out, np.asarray(a, dtype=np.complex128) ** e).reshape(-1)
    return out


@dataclass
class QuadratureGrid:
    N: int
    n: int

    @property
    def nodes(self) -> np.ndarray:
        return torus_nodes(self.N)

    @property
    def weight(self) -> float:
        return 1.0 / self.N ** self.n


def _special_coroot(ps: ParamSystem):
    """Coroot of the root e_1 in BC_n (= 2 e_1 = 2 lambda_1)."""
    n = ps.n
    return (2,) + (0,) * (n - 1)


def inverse_phi0(ps: ParamSystem, axes, delete_special: bool = False) -> np.ndarray:
    """1/(c(u)c(u^-1)) on a tensor grid in t-coordinates.

    With delete_special the factor (1 + t_1/b) is removed from c(u^{-1}), which is
    the explicit form of phi_1.
    """
    cf = CFunction(ps)
    out = np.ones(int(np.prod([len(a) for a in axes])), dtype=np.complex128)
    special = _special_coroot(ps) if delete_special else None
    t1 = complex(axes[0][0]) if delete_special else None
    b = ps.a_b[1] if delete_special else None
    for cor, a, c in cf.numeric_factors():
        x = _monomial_grid(t_exponents(ps, tuple(-v for v in cor)), axes)   # u^{-cor}
        xi = 1.0 / x
        num = (1 - c * x) * (1 - c * xi)
        if special is not None and cor == special:
            # c(u^-1) numerator (1 - a t1^2) = (1 - t1/b)(1 + t1/b); drop the second factor
            den = (1 - a * x) * (1 - t1 / b)
        else:
            den = (1 - a * x) * (1 - a * xi)
        out *= num / den
    return out


def density_at(u: UPoint, ps: ParamSystem) -> float:
    """Standard-component density W0(q^-1)/|W0| |c(u)|^-2 at a torus point."""
    cf = CFunction(ps)
    val = 1.0 + 0j
    for cor, a, c in cf.numeric_factors():
        x = u.power(tuple(-v for v in cor))
        val *= ((1 - c * x) * (1 - c / x)) / ((1 - a * x) * (1 - a / x))
    w0inv = ps.W0_inv.evaluate(ps.zvals)
    return float((val * w0inv / len(ps.rs.weyl_group())).real)


def phi1_explicit(ps: ParamSystem, t_rest) -> complex:
    """phi_1 at t_1 = -b by factor deletion."""
    b = ps.a_b[1]
    axes = [np.array([-b])] + [np.array([t]) for t in t_rest]
    return complex(1.0 / inverse_phi0(ps, axes, delete_special=True)[0])


def phi1_limit(ps: ParamSystem, t_rest, delta: float = 1e-6) -> complex:
    """Numeric limit phi_0/(1 + t_1/b) as t_1 -> -b."""
    b = ps.a_b[1]
    t1 = -b * (1 + delta)
    axes = [np.array([t1])] + [np.array([t]) for t in t_rest]
    phi0 = 1.0 / inverse_phi0(ps, axes)[0]
    return complex(phi0 / (1 + t1 / b))


def weyl_prime_order(n: int) -> int:
    return 2 ** (n - 1) * math.factorial(n - 1)


@dataclass
class Plancherel:
    ps: ParamSystem
    N: int = 513
    include_boundary: bool = True
    _vals: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        ps = self.ps
        n = ps.n
        nodes = torus_nodes(self.N)
        self.axes = [nodes] * n
        w0inv = ps.W0_inv.evaluate(ps.zvals)
        dens = inverse_phi0(ps, self.axes) * (w0inv / len(ps.rs.weyl_group()))
        if np.abs(dens.imag).max() > 1e-9 * max(1.0, np.abs(dens.real).max()):
            raise QuadratureError("Plancherel density is not real on the torus")
        self.w_main = dens.real / self.N ** n
        self.boundary = ps.exceptional and self.include_boundary
        if self.boundary:
            b = ps.a_b[1]
            self.axes_b = [np.array([-b], dtype=np.complex128)] + [nodes] * (n - 1)
            inv_phi1 = inverse_phi0(ps, self.axes_b, delete_special=True)
            self.w_b = inv_phi1 * (w0inv / weyl_prime_order(n)) / self.N ** (n - 1)
        else:
            self.axes_b = None
            self.w_b = None

    @property
    def total_mass(self) -> complex:
        m = complex(self.w_main.sum())
        if self.boundary:
            m += complex(self.w_b.sum())
        return m

    def values(self, lam):
        lam = tuple(lam)
        if lam not in self._vals:
            exp = macdonald_expand(lam, ps=self.ps)
            exps, cs = exp.numeric_terms(normalized=True)
            texps = np.array([t_exponents(self.ps, tuple(e)) for e in exps], dtype=np.int64)
            vm = _kernels.grid_eval(texps, cs, self.axes)
            vb = _kernels.grid_eval(texps, cs, self.axes_b) if self.boundary else None
            self._vals[lam] = (vm, vb)
        return self._vals[lam]

    def gram(self, lams) -> np.ndarray:
        """G[i, j] = integral of P_i conj(P_j) d pi_0."""
        Vm = np.stack([self.values(l)[0] for l in lams])
        G = _kernels.weighted_gram(Vm, self.w_main)
        if self.boundary:
            Vb = np.stack([self.values(l)[1] for l in lams])
            G = G + (Vb * self.w_b) @ Vb.conj().T
        return G

    def pairing(self, lam, mu) -> complex:
        return complex(self.gram([lam, mu])[0, 1]) if tuple(lam) != tuple(mu) else \
            complex(self.gram([lam])[0, 0])

    def triple(self, lam, mu, nu) -> complex:
        """integral of P_lam P_mu conj(P_nu) d pi_0."""
        a, b, c = (self.values(x) for x in (lam, mu, nu))
        val = np.sum(a[0] * b[0] * np.conj(c[0]) * self.w_main)
        if self.boundary:
            val += np.sum(a[1] * b[1] * np.conj(c[1]) * self.w_b)
        return complex(val)


def integrate_pairing(lam, mu, ps: ParamSystem, grid: int = 513, include_boundary=True) -> complex:
    return Plancherel(ps, grid, include_boundary).pairing(lam, mu)


def integrate_triple(lam, mu, nu, ps: ParamSystem, grid: int = 513) -> complex:
    return Plancherel(ps, grid).triple(lam, mu, nu)


def orthogonality_residual(ps: ParamSystem, lams, grid: int = 513,
                           include_boundary: bool = True) -> tuple[float, np.ndarray]:
    """max |G - diag(1/N_lam)| and the residual matrix."""
    pl = Plancherel(ps, grid, include_boundary)
    G = pl.gram(lams)
    target = np.diag([1.0 / n_lambda(l, ps).evaluate(ps.zvals) for l in lams])
    R = np.abs(G - target)
    return float(R.max()), R


def convergence_study(ps: ParamSystem, lams, grids=(65, 129, 257, 513), floor: float = 1e-13):
    """Residuals per grid and whether they shrink by half per doubling until the floor."""
    res = [orthogonality_residual(ps, lams, g)[0] for g in grids]
    ok = all(b <= max(0.5 * a, floor) for a, b in zip(res, res[1:]))
    return res, ok


def triple_vs_algebraic(ps: ParamSystem, lams, grid: int = 513) -> float:
    """max |N_nu * triple integral - a_{lam,mu;nu}| over lam, mu, nu in lams."""
    pl = Plancherel(ps, grid)
    z = ps.zvals
    worst = 0.0
    lamset = [tuple(l) for l in lams]
    for lam in lamset:
        for mu in lamset:
            row = structure_constants(lam, mu, ps)
            for nu in lamset:
                alg = row[nu].evaluate(z) if nu in row else 0.0
                num = n_lambda(nu, ps).evaluate(z) * pl.triple(lam, mu, nu)
                worst = max(worst, abs(num - alg))
    return worst


def spectrum_description(ps: ParamSystem, lams=(), samples: int = 10_000, seed: int = 0) -> dict:
    n = ps.n
    comps = [{"component": f"T^{n}/W0", "points": "torus"}]
    if ps.exceptional:
        b = ps.a_b[1]
        comps.append({"component": f"{{-b}} x T^{n - 1}/W0'", "b": b,
                      "weyl_prime_order": weyl_prime_order(n)})
    rng = np.random.default_rng(seed)
    checks = []
    for lam in lams:
        p1, _ = norm_at_one(lam, ps)
        exp = macdonald_expand(lam, ps=ps)
        exps, cs = exp.numeric_terms()
        theta = rng.uniform(0, 2 * np.pi, size=(samples, n))
        near = rng.normal(0, 1e-3, size=(64, n))
        pts = np.exp(1j * np.vstack([theta, near]))
        vals = np.abs(np.exp(1j * (np.angle(pts) @ exps.T.astype(np.float64))) @ cs)
        checks.append({"lambda": list(lam), "P_at_one": p1,
                       "sampled_sup": float(vals[:samples].max()),
                       "near_one_sup": float(vals[samples:].max()),
                       "bounded": bool(vals.max() <= p1 + 1e-12),
                       "approaches": bool(abs(vals[samples:].max() - p1) < 1e-3)})
    return {"mode": ps.mode, "components": comps, "norm_checks": checks}
