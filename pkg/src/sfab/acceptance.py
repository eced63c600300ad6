"""Acceptance suite: ten identity/oracle checks, shared by `sfab selftest` and the tests.

Each check returns a Result with a pass flag and a JSON-able detail block.
The "full" suite runs the complete sweeps; "quick" runs reduced sweeps with
the same tolerances.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import hecke, plancherel, spherical, tree_oracle
from .parameters import affine_classes, make_params
from .qlaurent import QLaurent, QRatio
from .root_datum import build_root_system, dominant_up_to

ORTHO_TOL = 1e-8
NEG_CONTROL = 1e-3
TRIPLE_TOL = 1e-8
NORM_REL = 0.01
SUP_SLACK = 1e-12
NEAR_ONE = 1e-3
DUAL_COUNT_BUDGET = 60.0


@dataclass
class Result:
    key: int
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] criterion {self.key:2d}: {self.name} ({self.seconds:.1f}s)"


def class_params(tag: str, n: int, base: int = 2) -> str:
    """Distinct integer q per conjugacy class of affine nodes: base, base+1, ..."""
    rs = build_root_system(tag, n)
    q = {}
    for k, g in enumerate(affine_classes(rs)):
        for i in g:
            q[i] = base + k
    return ",".join(f"{i}={q[i]}" for i in sorted(q))


def _lams(n: int, hmax: int, hmin: int = 0) -> list:
    return [l for l in dominant_up_to(n, hmax) if sum(l) >= hmin]


# ---------------------------------------------------------------------------

DUAL_TYPES = [("A", 1), ("A", 2), ("A", 3), ("C", 2), ("C", 3), ("B", 3), ("G", 2),
              ("BC", 1), ("BC", 2)]


def c1_dual_count(suite: str) -> dict:
    hmax = 6 if suite == "full" else 4
    t0 = time.perf_counter()
    bad, n_checked = [], 0
    for tag, n in DUAL_TYPES:
        ps = make_params(tag, n, class_params(tag, n))
        for lam in _lams(n, hmax):
            n_checked += 1
            if hecke.n_lambda_first(lam, ps) != hecke.n_lambda(lam, ps):
                bad.append(f"{tag}{n} {lam}")
    dt = time.perf_counter() - t0
    return {"passed": not bad and dt < DUAL_COUNT_BUDGET, "checked": n_checked,
            "mismatches": bad, "runtime_s": round(dt, 3), "budget_s": DUAL_COUNT_BUDGET}


TREES = [(2, 2), (3, 3), (4, 2), (2, 4)]


def _tree_params(q0, q1):
    return make_params("A", 1, q0) if q0 == q1 else make_params("BC", 1, f"0={q0},1={q1}")


def c2_tree_counts(suite: str) -> dict:
    depth, kmax = (14, 6) if suite == "full" else (10, 4)
    rows, ok = [], True
    for q0, q1 in TREES:
        t = tree_oracle.build_tree(q0, q1, depth)
        ps = _tree_params(q0, q1)
        for k in range(kmax + 1):
            bfs = tree_oracle.sphere_count(t, k)
            alg = ps.evaluate_exact(hecke.n_lambda((k,), ps))
            closed = tree_oracle.sphere_formula(t, k)
            good = bfs == alg == closed
            ok &= good
            if not good:
                rows.append({"tree": [q0, q1], "k": k, "bfs": bfs, "N": str(alg)})
    return {"passed": ok, "depth": depth, "kmax": kmax, "mismatches": rows}


def _phi_sweep(suite: str):
    if suite == "full":
        return [("A", 1, "2", _lams(1, 4)), ("A", 2, "2", _lams(2, 3)),
                ("C", 2, "0=2,1=3,2=2", _lams(2, 3)), ("BC", 1, "0=4,1=2", _lams(1, 3))]
    return [("A", 1, "2", _lams(1, 3)), ("A", 2, "2", _lams(2, 2)),
            ("C", 2, "0=2,1=3,2=2", _lams(2, 2)), ("BC", 1, "0=4,1=2", _lams(1, 2))]


def c3_main_identity(suite: str) -> dict:
    fails, n = [], 0
    for tag, r, q, lams in _phi_sweep(suite):
        ps = make_params(tag, r, q)
        for lam in lams:
            n += 1
            rep = hecke.phi_check(lam, ps)
            if not rep["ok"]:
                fails.append(f"boundary integral vs spherical function mismatch at {tag}{r} lambda={lam}")
    return {"passed": not fails, "checked": n, "failures": fails}


def c4_horocycle_integrality(suite: str) -> dict:
    fails, n = [], 0
    for tag, r, q, lams in _phi_sweep(suite):
        ps = make_params(tag, r, q)
        for lam in lams:
            n += 1
            dist = hecke.horocycle_distribution(lam, ps)
            if not dist.ok(ps.evaluate_exact(hecke.n_lambda(lam, ps))):
                fails.append(f"horocycle counts not integral at {tag}{r} lambda={lam}")
    # census on explicit trees
    tree_cases = [((2, 2), 10, 4), ((4, 2), 10, 3)] if suite == "full" else [((2, 2), 8, 3), ((4, 2), 8, 2)]
    census = 0
    for (q0, q1), depth, kmax in tree_cases:
        t = tree_oracle.build_tree(q0, q1, depth)
        ps = _tree_params(q0, q1)
        for x in (0, int(t.offsets[t.step])):
            for k in range(kmax + 1):
                got = tree_oracle.horocycle_census(t, k, x=x)
                want = {mu[0]: int(v) for mu, v in hecke.horocycle_distribution((k,), ps).values.items()
                        if v}
                census += 1
                if got != want:
                    fails.append(f"tree census differs from horocycle counts: tree {q0},{q1} k={k} x={x}")
    return {"passed": not fails, "checked": n, "tree_census": census, "failures": fails}


def _ortho_cases(suite: str):
    qs = (2, 3, 4) if suite == "full" else (2,)
    out = []
    for q in qs:
        out += [("A", 1, str(q)), ("A", 2, str(q)), ("C", 2, str(q)), ("G", 2, str(q))]
    out += [("BC", 1, "0=2,1=4"), ("BC", 2, "0=2,1=3,2=5")]
    return out


def c5_orthogonality(suite: str) -> dict:
    grid = 513
    hmax = 3
    rows, ok = [], True
    for tag, n, q in _ortho_cases(suite):
        ps = make_params(tag, n, q)
        res, _ = plancherel.orthogonality_residual(ps, _lams(n, hmax), grid)
        good = res < ORTHO_TOL
        ok &= good
        rows.append({"system": f"{tag}{n}", "q": q, "max_residual": res, "ok": good})
    for tag, n, q in [("BC", 1, "0=4,1=2"), ("BC", 2, "0=4,1=2,2=2")]:
        ps = make_params(tag, n, q)
        lams = _lams(n, hmax)
        with_b, _ = plancherel.orthogonality_residual(ps, lams, grid, include_boundary=True)
        without, _ = plancherel.orthogonality_residual(ps, lams, grid, include_boundary=False)
        good = with_b < ORTHO_TOL and without >= NEG_CONTROL
        ok &= good
        rows.append({"system": f"{tag}{n}", "q": q, "max_residual": with_b,
                     "without_boundary_term": without, "ok": good})
    return {"passed": ok, "grid": grid, "tolerance": ORTHO_TOL, "rows": rows}


def c6_triple_products(suite: str) -> dict:
    cases = [("A", 1, "2"), ("A", 2, "2"), ("C", 2, "0=2,1=3,2=2"), ("G", 2, class_params("G", 2)),
             ("BC", 1, "0=4,1=2"), ("BC", 2, "0=4,1=2,2=2"), ("BC", 2, "0=2,1=3,2=5")]
    if suite != "full":
        cases = cases[:2] + cases[4:5]
    rows, ok = [], True
    for tag, n, q in cases:
        ps = make_params(tag, n, q)
        err = plancherel.triple_vs_algebraic(ps, _lams(n, 2), grid=513)
        ok &= err < TRIPLE_TOL
        rows.append({"system": f"{tag}{n}", "q": q, "max_error": err})
    return {"passed": ok, "tolerance": TRIPLE_TOL, "rows": rows}


def c7_norms(suite: str) -> dict:
    ok = True
    exact, iters = [], []
    for q in (2, 3, 4):
        ps = make_params("A", 1, q)
        _, val = spherical.norm_at_one((1,), ps)
        z = QLaurent.monomial([1])
        target = QRatio(z * 2, z * z + 1)
        good = val == target
        ok &= good
        exact.append({"q": q, "P_at_one": val.to_text(ps.names), "ok": good})
        t = tree_oracle.build_tree(q, q, 12)
        rep = tree_oracle.power_iteration_report(t, 1)
        want = 2 * math.sqrt(q) / (q + 1)
        rel = abs(rep["extrapolated"] - want) / want
        ok &= rel < NORM_REL
        iters.append({"q": q, "target": want, "estimate": rep["extrapolated"],
                      "raw_largest_ball": rep["raw"], "radii": rep["radii"],
                      "rel_error": rel, "raw_rel_error": abs(rep["raw"] - want) / want})
    samples = []
    for tag, q in [("A", "2"), ("C", "0=2,1=3,2=2")]:
        ps = make_params(tag, 2, q)
        rep = plancherel.spectrum_description(ps, _lams(2, 2, 1), samples=10_000, seed=0)
        for c in rep["norm_checks"]:
            good = c["bounded"] and c["approaches"]
            ok &= good
            samples.append({"system": f"{tag}2", **c})
    return {"passed": ok, "exact": exact, "power_iteration": iters, "sampled": samples}


def c8_radon_nikodym(suite: str) -> dict:
    if suite == "full":
        trees, depth, yr, zr = TREES, 14, 3, 4
    else:
        trees, depth, yr, zr = [(2, 2), (4, 2)], 10, 2, 3
    rows, ok = [], True
    for q0, q1 in trees:
        t = tree_oracle.build_tree(q0, q1, depth)
        for x in (0, int(t.offsets[t.step]) + 1):
            ys = np.concatenate([t.sphere(x, k) for k in range(yr + 1)])
            rep = tree_oracle.radon_nikodym_check(t, x, ys, zr)
            ok &= rep["ok"]
            rows.append({"tree": [q0, q1], "x": x, "pairs": len(ys), "ends_checked": rep["checked"],
                         "mismatches": rep["bad"][:5]})
    return {"passed": ok, "rows": rows}


HULL_TYPES = [("A", 1), ("A", 2), ("A", 3), ("B", 2), ("B", 3), ("C", 2), ("C", 3), ("G", 2),
              ("BC", 1), ("BC", 2), ("BC", 3)]


def c9_convex_hull(suite: str) -> dict:
    hmax = 5 if suite == "full" else 3
    fails, n = [], 0
    for tag, r in HULL_TYPES:
        rs = build_root_system(tag, r)
        for lam in _lams(r, hmax):
            n += 1
            a = hecke.convex_hull_count(lam)
            b = hecke.convex_hull_interval(lam, rs)
            c = hecke.convex_hull_geometric(lam, rs)
            if not a == b == c:
                fails.append(f"convex hull counts differ at {tag}{r} lambda={lam}: {a},{b},{c}")
    for q0, q1 in TREES:
        t = tree_oracle.build_tree(q0, q1, 10)
        for k in range(1, 6):
            for y in t.sphere(0, k)[:3]:
                if tree_oracle.geodesic_hull_count(t, 0, int(y)) != k + 1:
                    fails.append(f"geodesic hull count wrong on tree {q0},{q1} k={k}")
    top = 0
    for tag, r, q in [("A", 1, "2"), ("A", 2, "3"), ("C", 2, "0=2,1=3,2=2"), ("BC", 1, "0=4,1=2"),
                      ("BC", 2, "0=4,1=2,2=2")]:
        ps = make_params(tag, r, q)
        lams = _lams(r, 2)
        for lam in lams:
            for mu in lams:
                nu = tuple(a + b for a, b in zip(lam, mu))
                a = hecke.structure_constant(lam, mu, nu, ps)
                top += 1
                if not a * (hecke.n_lambda(lam, ps) * hecke.n_lambda(mu, ps)) == hecke.n_lambda(nu, ps):
                    fails.append(f"top structure constant identity fails at {tag}{r} {lam},{mu}")
    return {"passed": not fails, "checked": n, "top_term_checked": top, "failures": fails}


PARAM_TYPES = ([("A", n) for n in range(1, 5)] + [("B", n) for n in range(2, 5)]
               + [("C", n) for n in range(2, 5)] + [("D", 4), ("F", 4), ("G", 2)]
               + [("BC", n) for n in range(1, 5)])


def c10_parameter_identities(suite: str) -> dict:
    fails, n = [], 0
    for tag, r in PARAM_TYPES:
        for base in (2, 3):
            ps = make_params(tag, r, class_params(tag, r, base))
            n += 1
            try:
                ps.longest_element_identity()
            except AssertionError:
                fails.append(f"longest-element identity fails for {tag}{r}")
            w0 = ps.rs.longest
            if not ps.W0 == ps.q_w(w0) * ps.W0_inv:
                fails.append(f"Poincare duality W0(q) = q_w0 W0(1/q) fails for {tag}{r}")
    higman = 0
    for r in (2, 3):
        for q0 in range(2, 11):
            for q1 in (2, 3):
                for qn in (2, 5):
                    if qn == q0:
                        continue
                    ps = make_params("BC", r, {0: Fraction(q0), **{i: Fraction(q1) for i in range(1, r)},
                                               r: Fraction(qn)})
                    fired = any("Higman" in w for w in ps.warnings)
                    higman += 1
                    if fired != (q1 * q1 < q0):
                        fails.append(f"Higman warning wrong for BC{r} q0={q0} q1={q1}")
    return {"passed": not fails, "systems": n, "higman_cases": higman, "failures": fails}


CRITERIA = [
    (1, "dual N_lambda formulas agree", c1_dual_count),
    (2, "tree sphere counts", c2_tree_counts),
    (3, "boundary integral equals spherical function", c3_main_identity),
    (4, "horocycle counts integral", c4_horocycle_integrality),
    (5, "orthogonality under the Plancherel measure", c5_orthogonality),
    (6, "triple products vs structure constants", c6_triple_products),
    (7, "operator norms", c7_norms),
    (8, "Radon-Nikodym cocycle on trees", c8_radon_nikodym),
    (9, "convex hull counts", c9_convex_hull),
    (10, "parameter identities", c10_parameter_identities),
]


def run_criterion(key: int, suite: str = "full") -> Result:
    for k, name, fn in CRITERIA:
        if k == key:
            t0 = time.perf_counter()
            try:
                detail = fn(suite)
            except Exception as exc:   # a crash is a failure, reported with its message
                detail = {"passed": False, "error": f"{type(exc).__name__}: {exc}"}
            passed = bool(detail.pop("passed"))
            return Result(k, name, passed, detail, time.perf_counter() - t0)
    raise KeyError(key)


def run_suite(suite: str = "quick", only=None, echo=None) -> list[Result]:
    out = []
    for k, _, _ in CRITERIA:
        if only and k not in only:
            continue
        r = run_criterion(k, suite)
        if echo:
            echo(r.line())
        out.append(r)
    return out
