"""sfab command line: parse a run config (flags or JSON), dispatch, emit a report.

Exit codes: 0 success, 1 an enabled identity check failed, 2 bad config/input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import acceptance, hecke, plancherel, spherical, tree_oracle
from .parameters import ParameterError, make_params, parse_q
from .qlaurent import UPoint, fmt_rational, parse_rational
from .root_datum import RootSystemError, dominant_up_to

COMMANDS = ("info", "nlambda", "spherical", "structure", "phi-check", "plancherel", "norm",
            "tree", "selftest")


class ConfigError(ValueError):
    pass


class CheckFailed(Exception):
    def __init__(self, failures, report):
        super().__init__("; ".join(failures))
        self.failures = failures
        self.report = report


# ---------------------------------------------------------------------------
# run config
# ---------------------------------------------------------------------------

# task key -> kind; every value is serialised as a string (lists of strings)
TASK_KEYS = {
    "command": "str", "lambda": "vec", "mu": "vec", "nu": "vec", "u": "qvec",
    "max_height": "int", "grid": "int", "tolerance": "rat", "mode": "str", "order": "str",
    "samples": "int", "seed": "int", "depth": "int", "q0": "int", "q1": "int",
    "verify": "str", "suite": "str", "only": "vec", "detail": "bool",
}
SYSTEM_KEYS = {"type", "rank", "q"}
OUTPUT_KEYS = {"path", "format", "pretty"}


@dataclass
class RunConfig:
    system: dict = field(default_factory=dict)    # type, rank, q {node: Fraction}
    task: dict = field(default_factory=dict)
    output: dict = field(default_factory=lambda: {"path": None, "format": "json", "pretty": False})

    @property
    def command(self) -> str:
        return self.task["command"]

    def params(self):
        s = self.system
        if not s.get("type"):
            raise ConfigError("this command needs a root system (--type/--rank)")
        return make_params(s["type"], s.get("rank"), s["q"])

    def to_dict(self) -> dict:
        sysd = {}
        if self.system:
            sysd = {"type": self.system["type"], "rank": str(self.system["rank"]),
                    "q": {str(k): fmt_rational(v) for k, v in sorted(self.system["q"].items())}}
        task = {}
        for k, v in self.task.items():
            if v is None:
                continue
            kind = TASK_KEYS[k]
            if kind in ("vec", "qvec"):
                task[k] = [fmt_rational(Fraction(x)) for x in v]
            elif kind == "rat":
                task[k] = fmt_rational(Fraction(v))
            elif kind == "bool":
                task[k] = "true" if v else "false"
            else:
                task[k] = str(v)
        out = {"path": self.output.get("path"), "format": self.output.get("format", "json"),
               "pretty": "true" if self.output.get("pretty") else "false"}
        d = {"task": task, "output": out}
        if sysd:
            d["system"] = sysd
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        if not isinstance(d, dict):
            raise ConfigError("config must be a JSON object")
        extra = set(d) - {"system", "task", "output"}
        if extra:
            raise ConfigError(f"unknown config blocks: {sorted(extra)}")
        system = {}
        if d.get("system"):
            s = d["system"]
            bad = set(s) - SYSTEM_KEYS
            if bad:
                raise ConfigError(f"unknown system keys: {sorted(bad)}")
            try:
                rank = int(s["rank"]) if s.get("rank") is not None else None
                system = {"type": str(s["type"]), "rank": rank,
                          "q": {int(k): parse_rational(v) for k, v in dict(s.get("q", {})).items()}}
            except (KeyError, ValueError, TypeError) as exc:
                raise ConfigError(f"bad system block: {exc}") from None
        task = {}
        for k, v in dict(d.get("task", {})).items():
            if k not in TASK_KEYS:
                raise ConfigError(f"unknown task key: {k}")
            task[k] = _parse_task_value(k, v)
        if task.get("command") not in COMMANDS:
            raise ConfigError(f"task.command must be one of {', '.join(COMMANDS)}")
        out = {"path": None, "format": "json", "pretty": False}
        for k, v in dict(d.get("output", {})).items():
            if k not in OUTPUT_KEYS:
                raise ConfigError(f"unknown output key: {k}")
            out[k] = _as_bool(v) if k == "pretty" else v
        if out["format"] not in ("json", "csv"):
            raise ConfigError("output.format must be json or csv")
        return cls(system, task, out)


def _as_bool(v) -> bool:
    if isinstance(v, bool):
        return v
    if str(v).lower() in ("true", "1", "yes"):
        return True
    if str(v).lower() in ("false", "0", "no", "none", ""):
        return False
    raise ConfigError(f"not a boolean: {v!r}")


def _parse_task_value(k, v):
    kind = TASK_KEYS[k]
    try:
        if kind == "vec":
            items = v if isinstance(v, list) else str(v).split(",")
            return [int(Fraction(str(x).strip())) for x in items if str(x).strip()]
        if kind == "qvec":
            items = v if isinstance(v, list) else str(v).split(",")
            return [parse_rational(str(x).strip()) for x in items if str(x).strip()]
        if kind == "int":
            return int(Fraction(str(v)))
        if kind == "rat":
            return Fraction(str(v))
        if kind == "bool":
            return _as_bool(v)
        return str(v)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad value for task.{k}: {v!r} ({exc})") from None


# ---------------------------------------------------------------------------
# report emission
# ---------------------------------------------------------------------------

def _jsonable(x):
    if isinstance(x, Fraction):
        return fmt_rational(x)
    if isinstance(x, tuple):
        return [_jsonable(v) for v in x]
    if isinstance(x, list):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if hasattr(x, "item") and not isinstance(x, (str, bytes)):
        return x.item()
    return x


def emit_report(results, fmt: str = "json", path=None, pretty: bool = False) -> str:
    """Serialise with sorted keys; CSV takes a list of flat rows (or a single dict)."""
    data = _jsonable(results)
    if fmt == "json":
        text = json.dumps(data, sort_keys=True, indent=2 if pretty else None) + "\n"
    elif fmt == "csv":
        rows = data if isinstance(data, list) else [data]
        buf = io.StringIO()
        if rows:
            keys = sorted({k for r in rows for k in r})
            w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
            w.writeheader()
            for r in rows:
                w.writerow({k: (json.dumps(v, sort_keys=True) if isinstance(v, (list, dict)) else v)
                            for k, v in r.items()})
        text = buf.getvalue()
    else:
        raise ConfigError(f"unknown format {fmt}")
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _lam(cfg, key="lambda", required=True):
    v = cfg.task.get(key)
    if v is None:
        if required:
            raise ConfigError(f"--{key} is required")
        return None
    return tuple(v)


def _check_rank(ps, lam, what="lambda"):
    if lam is not None and len(lam) != ps.n:
        raise ConfigError(f"{what} has {len(lam)} entries, rank is {ps.n}")
    if lam is not None and any(c < 0 for c in lam):
        raise ConfigError(f"{what} must be dominant (nonnegative coordinates)")


def cmd_info(cfg):
    ps = cfg.params()
    rs = ps.rs
    d = ps.describe()
    d.update({"positive_roots": len(rs.positive_roots), "weyl_order": len(rs.weyl_group()),
              "coroot_base": [list(c) for c in rs.coroot_base]})
    return d


def cmd_nlambda(cfg):
    ps = cfg.params()
    lam = _lam(cfg)
    _check_rank(ps, lam)
    a = hecke.n_lambda(lam, ps)
    b = hecke.n_lambda_first(lam, ps)
    if a != b:
        raise CheckFailed([f"dual N_lambda formulas disagree at lambda={lam}"], {"lambda": list(lam)})
    rep = {"N": fmt_rational(ps.evaluate_exact(a))}
    if cfg.task.get("detail"):
        rep.update({"lambda": list(lam), "N_laurent": a.to_text(ps.names),
                    "N_numeric": ps.evaluate(a), "dual_formulas_agree": True})
    return rep


def cmd_spherical(cfg):
    ps = cfg.params()
    lam = _lam(cfg)
    _check_rank(ps, lam)
    exp = spherical.macdonald_expand(lam, ps=ps)
    rep = {"lambda": list(lam), "basis": "monomial", "normalization": "P_prime",
           "coeffs": exp.to_rows(), "scale": exp.scale.to_text(ps.names)}
    val, _ = spherical.norm_at_one(lam, ps)
    rep["P_at_one"] = val
    u = cfg.task.get("u")
    if u:
        _check_rank(ps, tuple(1 for _ in u), "u")
        pt = UPoint([float(x) for x in u])
        ev = spherical.macdonald_eval(lam, pt, ps)
        rep["eval"] = {"u": [fmt_rational(x) for x in u], "value": ev.real,
                       "expansion_value": exp.eval(pt).real}
    return rep


def _struct_row(lam, mu, nu, a, ps):
    try:
        exact = fmt_rational(a.evaluate_exact(ps.class_q))
    except (ArithmeticError, ValueError):
        exact = a.to_text(ps.names)
    return {"lambda": list(lam), "mu": list(mu), "nu": list(nu), "a": exact,
            "a_numeric": a.evaluate(ps.zvals), "a_laurent": a.to_text(ps.names)}


def cmd_structure(cfg):
    ps = cfg.params()
    lam, mu = _lam(cfg), _lam(cfg, "mu")
    _check_rank(ps, lam)
    _check_rank(ps, mu, "mu")
    order = cfg.task.get("order") or "lex"
    nu = _lam(cfg, "nu", required=False)
    if nu is not None:
        _check_rank(ps, nu, "nu")
        return [_struct_row(lam, mu, nu, hecke.structure_constant(lam, mu, nu, ps, order), ps)]
    row = hecke.structure_constants(lam, mu, ps, order)
    bad = hecke.check_structure_row(lam, mu, ps, row)
    rows = [_struct_row(lam, mu, n, row[n], ps) for n in sorted(row)]
    if bad:
        raise CheckFailed(bad, rows)
    return rows


def _sweep(cfg, ps):
    lam = _lam(cfg, required=False)
    if lam is not None:
        _check_rank(ps, lam)
        return [lam]
    h = cfg.task.get("max_height")
    if h is None:
        raise ConfigError("give --lambda or --max-height")
    return list(dominant_up_to(ps.n, h))


def cmd_phi_check(cfg):
    ps = cfg.params()
    reps, fails = [], []
    for lam in _sweep(cfg, ps):
        r = hecke.phi_check(lam, ps)
        d = hecke.horocycle_distribution(lam, ps)
        n_lam = ps.evaluate_exact(hecke.n_lambda(lam, ps))
        r["horocycle_counts"] = [{"mu": list(m), "count": fmt_rational(v)}
                                 for m, v in sorted(d.values.items())]
        r["horocycle_integral"] = d.ok(n_lam)
        reps.append(r)
        if r["mismatch"] or not r["support_ok"]:
            fails.append(f"boundary integral vs spherical function mismatch at lambda={lam}")
        if r["nu_dependence"]:
            fails.append(f"boundary integral depends on the far coweight at lambda={lam}")
        if not r["horocycle_integral"]:
            fails.append(f"horocycle counts not nonnegative integers summing to N at lambda={lam}")
    if fails:
        raise CheckFailed(fails, reps)
    return reps


def cmd_plancherel(cfg):
    ps = cfg.params()
    mode = cfg.task.get("mode") or "auto"
    if mode not in ("auto", "standard", "exceptional"):
        raise ConfigError("--mode must be auto, standard or exceptional")
    if mode == "exceptional" and not ps.exceptional:
        raise ConfigError("exceptional mode needs BC_n parameters with q_n < q_0")
    include = ps.exceptional and mode != "standard"
    lams = _sweep(cfg, ps)
    grid = cfg.task.get("grid") or 513
    tol = float(cfg.task.get("tolerance") or Fraction(1, 10 ** 8))
    worst, R = plancherel.orthogonality_residual(ps, lams, grid, include_boundary=include)
    rep = {"mode": ps.mode, "boundary_term": include, "grid": grid, "tolerance": tol,
           "lambdas": [list(l) for l in lams], "residual": R.tolist(), "max_residual": worst}
    if worst >= tol:
        raise CheckFailed([f"orthogonality residual {worst:.3e} exceeds {tol:g}"], rep)
    return rep


def cmd_norm(cfg):
    ps = cfg.params()
    lams = [l for l in _sweep(cfg, ps) if any(l)] if cfg.task.get("lambda") is None else _sweep(cfg, ps)
    rep = plancherel.spectrum_description(ps, lams, samples=cfg.task.get("samples") or 10_000,
                                         seed=cfg.task.get("seed") or 0)
    fails = [f"sampled sup exceeds the norm bound at lambda={tuple(c['lambda'])}"
             for c in rep["norm_checks"] if not c["bounded"]]
    depth = cfg.task.get("depth")
    if depth and ps.n == 1 and ps.rs.type_tag in ("A", "BC"):
        q0, q1 = int(ps.q[0]), int(ps.q[1])
        t = tree_oracle.build_tree(q0, q1, depth)
        rep["power_iteration"] = []
        for lam in lams:
            pi = tree_oracle.power_iteration_report(t, lam[0])
            pi["lambda"] = list(lam)
            pi["P_at_one"] = spherical.norm_at_one(lam, ps)[0]
            rep["power_iteration"].append(pi)
    if fails:
        raise CheckFailed(fails, rep)
    return rep


def cmd_tree(cfg):
    q0, q1 = cfg.task.get("q0"), cfg.task.get("q1")
    if q0 is None or q1 is None:
        raise ConfigError("tree needs --q0 and --q1")
    depth = cfg.task.get("depth") or 8
    verify = cfg.task.get("verify") or "all"
    kinds = ("counts", "horocycle", "rn", "integral", "norm")
    if verify != "all" and verify not in kinds:
        raise ConfigError(f"--verify must be one of {', '.join(kinds)}, all")
    todo = kinds if verify == "all" else (verify,)
    try:
        t = tree_oracle.build_tree(q0, q1, depth)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    ps = make_params("A", 1, q0) if q0 == q1 else make_params("BC", 1, {0: Fraction(q0), 1: Fraction(q1)})
    kmax = depth // t.step
    rep = {"tree": {"q0": q0, "q1": q1, "depth": depth, "vertices": t.n_vertices,
                    "good": "all" if t.reduced else "type 0"}}
    fails = []
    if "counts" in todo:
        rows = []
        for k in range(kmax + 1):
            bfs = tree_oracle.sphere_count(t, k)
            alg = ps.evaluate_exact(hecke.n_lambda((k,), ps))
            rows.append({"k": k, "bfs": bfs, "N": fmt_rational(alg), "ok": bfs == alg})
            if bfs != alg:
                fails.append(f"sphere count differs from N_lambda at k={k}")
        rep["counts"] = rows
    if "horocycle" in todo:
        rows = []
        for k in range(min(kmax - 1, 4) + 1):
            got = tree_oracle.horocycle_census(t, k)
            want = {m[0]: int(v) for m, v in hecke.horocycle_distribution((k,), ps).values.items() if v}
            rows.append({"k": k, "census": {str(h): c for h, c in sorted(got.items())},
                         "ok": got == want})
            if got != want:
                fails.append(f"tree horocycle census differs from horocycle counts at k={k}")
        rep["horocycle"] = rows
    if "rn" in todo:
        zr = max(1, min(3, kmax // 2))
        ys = [int(y) for k in range(zr) for y in t.sphere(0, k)]
        r = tree_oracle.radon_nikodym_check(t, 0, ys, zr)
        rep["rn"] = {"ends_checked": r["checked"], "mismatches": r["bad"][:10], "ok": r["ok"]}
        if not r["ok"]:
            fails.append("Radon-Nikodym ratio differs from the tau product")
    if "integral" in todo:
        rows = []
        for k in range(min(kmax - 1, 3) + 1):
            for u in (0.7 + 0.3j, 1.0, 2.0):
                a = tree_oracle.boundary_integral_hom(t, k, u)
                b = spherical.macdonald_eval((k,), UPoint([u]), ps)
                ok = abs(a - b) < 1e-10
                rows.append({"k": k, "u": u, "tree": a, "spherical": b, "ok": ok})
                if not ok:
                    fails.append(f"tree boundary integral differs from spherical function at k={k}")
        rep["integral"] = rows
    if "norm" in todo:
        if depth - t.step < 5 * t.step:
            rep["norm"] = {"skipped": "tree too shallow"}
        else:
            pi = tree_oracle.power_iteration_report(t, 1)
            pi["P_at_one"] = spherical.norm_at_one((1,), ps)[0]
            rep["norm"] = pi
    if fails:
        raise CheckFailed(fails, rep)
    return rep


def cmd_selftest(cfg):
    suite = cfg.task.get("suite") or "quick"
    if suite not in ("quick", "full"):
        raise ConfigError("--suite must be quick or full")
    only = cfg.task.get("only")
    res = acceptance.run_suite(suite, only=set(only) if only else None,
                               echo=lambda s: print(s, file=sys.stderr))
    rep = [{"criterion": r.key, "name": r.name, "passed": r.passed, "seconds": round(r.seconds, 3),
            "detail": r.detail} for r in res]
    bad = [f"criterion {r.key} ({r.name}) failed" for r in res if not r.passed]
    if bad:
        raise CheckFailed(bad, rep)
    return rep


HANDLERS = {"info": cmd_info, "nlambda": cmd_nlambda, "spherical": cmd_spherical,
            "structure": cmd_structure, "phi-check": cmd_phi_check, "plancherel": cmd_plancherel,
            "norm": cmd_norm, "tree": cmd_tree, "selftest": cmd_selftest}


# ---------------------------------------------------------------------------
# argv
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sfab", description="Spherical functions and counts on affine buildings.")
    sub = p.add_subparsers(dest="command")

    def common(sp, system=True):
        sp.add_argument("--config", help="JSON run config (flags override its task keys)")
        if system:
            sp.add_argument("--type", dest="type_tag")
            sp.add_argument("--rank", type=int)
            sp.add_argument("--q", help="'0=4,1=2' or a single value for all nodes")
        sp.add_argument("--output", help="write the report here")
        sp.add_argument("--format", choices=("json", "csv"))
        sp.add_argument("--pretty", action="store_true")
        sp.add_argument("--dump-config", action="store_true", help="print the parsed config and exit")

    for name in COMMANDS:
        sp = sub.add_parser(name)
        common(sp, system=name not in ("tree", "selftest"))
        if name in ("nlambda", "spherical", "structure", "phi-check", "norm", "plancherel"):
            sp.add_argument("--lambda", dest="lambda_")
        if name == "nlambda":
            sp.add_argument("--detail", action="store_true")
        if name == "spherical":
            sp.add_argument("--u", help="evaluate at real u (comma list)")
        if name == "structure":
            sp.add_argument("--mu")
            sp.add_argument("--nu")
            sp.add_argument("--order", choices=("lex", "revlex"))
        if name in ("phi-check", "plancherel", "norm"):
            sp.add_argument("--max-height", type=int)
        if name == "plancherel":
            sp.add_argument("--grid", type=int)
            sp.add_argument("--tol")
            sp.add_argument("--mode", choices=("auto", "standard", "exceptional"))
        if name == "norm":
            sp.add_argument("--samples", type=int)
            sp.add_argument("--seed", type=int)
            sp.add_argument("--depth", type=int)
        if name == "tree":
            sp.add_argument("--q0", type=int)
            sp.add_argument("--q1", type=int)
            sp.add_argument("--depth", type=int)
            sp.add_argument("--verify")
        if name == "selftest":
            sp.add_argument("--suite")
            sp.add_argument("--only", help="comma list of criterion numbers")
    return p


def config_from_args(ns) -> RunConfig:
    if ns.config:
        try:
            with open(ns.config, encoding="utf-8") as fh:
                cfg = RunConfig.from_dict(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        if cfg.command != ns.command:
            raise ConfigError(f"config is for '{cfg.command}', not '{ns.command}'")
    else:
        cfg = RunConfig(task={"command": ns.command})
    if getattr(ns, "type_tag", None):
        if ns.rank is None and not any(c.isdigit() for c in ns.type_tag):
            raise ConfigError("--rank is required")
        rank = ns.rank
        tag = ns.type_tag
        if rank is None:
            tag, rank = tag.rstrip("0123456789"), int(tag[len(tag.rstrip("0123456789")):])
        try:
            q = parse_q(ns.q if ns.q is not None else "2", rank)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        cfg.system = {"type": tag, "rank": rank, "q": q}
    flag_map = {"lambda_": "lambda", "mu": "mu", "nu": "nu", "u": "u", "max_height": "max_height",
                "grid": "grid", "tol": "tolerance", "mode": "mode", "order": "order",
                "samples": "samples", "seed": "seed", "depth": "depth", "q0": "q0", "q1": "q1",
                "verify": "verify", "suite": "suite", "only": "only", "detail": "detail"}
    for attr, key in flag_map.items():
        v = getattr(ns, attr, None)
        if v is None or v is False:
            continue
        cfg.task[key] = _parse_task_value(key, v)
    if ns.output:
        cfg.output["path"] = ns.output
    if ns.format:
        cfg.output["format"] = ns.format
    if ns.pretty:
        cfg.output["pretty"] = True
    return cfg


def run(argv=None) -> int:
    out, err = sys.stdout, sys.stderr
    try:
        ns = build_parser().parse_args(argv)
        if not ns.command:
            raise ConfigError(f"a subcommand is required: {', '.join(COMMANDS)}")
        cfg = config_from_args(ns)
        if ns.dump_config:
            out.write(json.dumps(cfg.to_dict(), sort_keys=True, indent=2) + "\n")
            return 0
        result = HANDLERS[cfg.command](cfg)
    except (ConfigError, ParameterError, RootSystemError, tree_oracle.TruncationError) as exc:
        err.write(json.dumps({"error": str(exc), "exit": 2}, sort_keys=True) + "\n")
        return 2
    except CheckFailed as exc:
        text = emit_report({"failures": exc.failures, "report": exc.report}, "json",
                           cfg.output.get("path"), cfg.output.get("pretty"))
        out.write(text)
        err.write(json.dumps({"failures": exc.failures, "exit": 1}, sort_keys=True) + "\n")
        return 1
    text = emit_report(result, cfg.output.get("format", "json"), cfg.output.get("path"),
                       cfg.output.get("pretty"))
    if not cfg.output.get("path"):
        out.write(text)
    return 0


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
