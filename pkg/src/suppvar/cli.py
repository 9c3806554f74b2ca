"""Command line front end: YAML jobs in, deterministic reports out."""

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, field as dc_field
from fractions import Fraction

import numpy as np
import sympy
import yaml

from . import __version__
from . import exactlinalg as el
from .algebra import Quiver, build_algebra, is_connected
from .bimod import tensor_chain
from .cohom import (BudgetExceeded, bar_oracle, ext_algebra, graded_centre, hh_complex,
                    hh_truncation)
from .fixtures import DEFAULT_CHAR, fixture
from .growth import (complexity, line_implies_periodic_check, period_divisor_check,
                     periodic_ext_structure, periodicity)
from .repmod import (Module, ModuleError, direct_sum, dual, gorenstein_bounds,
                     is_projective, is_selfinjective, min_proj_resolution, projective,
                     radical, regular_module, simple, syzygy_module, top_semisimple)
from .variety import (FgViolation, HSpec, WitnessError, default_hspec, eta_square_annihilation_check,
                      even_to_degree, fg_diagnostic, pencil_family, periodic_witness,
                      realize_variety, split_equivalence_check, variety_report)

COMMANDS = ["analyze-algebra", "resolve", "hh", "ext-algebra", "complexity", "variety", "realize",
            "periodic", "witness", "pencil", "fg-check", "verify"]
DEFAULT_CAPS = {"resolution": 8, "cohomology": 4, "ideal": 8}

EXIT_OK, EXIT_VALIDATION, EXIT_FALSIFIED, EXIT_BUDGET = 0, 1, 2, 3


class JobError(ValueError):
    """Invalid job, with the position of the offending entry."""

    def __init__(self, where, msg):
        super().__init__(f"{where}: {msg}")
        self.where = where


# -- job specification -----------------------------------------------------------


@dataclass
class JobSpec:
    command: str
    algebra: dict
    field: str = None
    modules: dict = dc_field(default_factory=dict)
    hspec: dict = None
    caps: dict = dc_field(default_factory=lambda: dict(DEFAULT_CAPS))
    seed: int = 0
    args: dict = dc_field(default_factory=dict)

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise JobError("job", "expected a mapping")
        unknown = set(d) - {"command", "algebra", "field", "modules", "hspec", "caps", "seed", "args"}
        if unknown:
            raise JobError("job", f"unknown keys {sorted(unknown)}")
        if "command" not in d:
            raise JobError("command", "missing")
        if "algebra" not in d:
            raise JobError("algebra", "missing")
        caps = dict(DEFAULT_CAPS)
        caps.update(d.get("caps") or {})
        job = cls(command=d["command"], algebra=d["algebra"], field=d.get("field"),
                  modules=dict(d.get("modules") or {}), hspec=d.get("hspec"), caps=caps,
                  seed=d.get("seed", 0), args=dict(d.get("args") or {}))
        return job.normalized()

    def normalized(self):
        if self.command not in COMMANDS:
            raise JobError("command", f"unknown command {self.command!r}")
        if isinstance(self.algebra, str):
            self.algebra = {"fixture": self.algebra}
        if not isinstance(self.algebra, dict) or not ({"fixture", "quiver"} & set(self.algebra)):
            raise JobError("algebra", "give a fixture name or a quiver with relations")
        if self.field is None:
            if "fixture" in self.algebra:
                base = str(self.algebra["fixture"]).upper().split("(")[0]
                self.field = f"GF({DEFAULT_CHAR.get(base, 2)})"
            else:
                raise JobError("field", "required for quiver algebras")
        try:
            self.field = el.parse_field(self.field).tag
        except ValueError as exc:
            raise JobError("field", str(exc)) from None
        for k in list(self.caps):
            if k not in DEFAULT_CAPS:
                raise JobError(f"caps.{k}", "unknown cap")
            v = self.caps[k]
            if not isinstance(v, int) or v < 1:
                raise JobError(f"caps.{k}", "caps must be integers >= 1")
        if not isinstance(self.seed, int):
            raise JobError("seed", "must be an integer")
        return self

    def to_dict(self):
        return asdict(self)


# -- building objects ------------------------------------------------------------


def build_job_algebra(job):
    spec = job.algebra
    f = el.parse_field(job.field)
    if "fixture" in spec:
        try:
            return fixture(str(spec["fixture"]), f)
        except (KeyError, ValueError) as exc:
            raise JobError("algebra.fixture", str(exc)) from None
    q = spec["quiver"]
    try:
        quiver = Quiver(q["vertices"], [tuple(x) for x in q["arrows"]])
        return build_algebra(quiver, spec.get("relations", []), f,
                             length_cap=int(spec.get("length_cap", 8)), name=spec.get("name", "custom"))
    except (KeyError, TypeError) as exc:
        raise JobError("algebra.quiver", f"malformed quiver ({exc})") from None
    except ValueError as exc:
        raise JobError("algebra", str(exc)) from None


def _vertex(a, v, where):
    """Strings name vertices; integers index them."""
    names = [str(x) for x in a.vertices]
    if isinstance(v, str) and v in names:
        return names.index(v)
    try:
        i = int(v)
    except (TypeError, ValueError):
        raise JobError(where, f"unknown vertex {v!r}") from None
    if 0 <= i < a.num_vertices:
        return i
    raise JobError(where, f"unknown vertex {v!r}")


def _classes(a, refs, cap, where):
    cx = hh_complex(a, cap)
    out = []
    for i, ref in enumerate(refs):
        try:
            d, k = int(ref[0]), int(ref[1])
        except (TypeError, ValueError, IndexError):
            raise JobError(f"{where}[{i}]", "classes are given as [degree, index]") from None
        if d > cap or not 0 <= k < cx.dim(d):
            raise JobError(f"{where}[{i}]", f"no class {k} in degree {d}")
        out.append(cx.klass(d, k))
    return out


class Workspace:
    """Resolved algebra, modules and H for one job."""

    def __init__(self, job):
        self.job = job
        self.algebra = build_job_algebra(job)
        self.caps = job.caps
        self._modules = {}
        self._h = None

    def module(self, ref, where="args.module"):
        a = self.algebra
        if isinstance(ref, str) and ref in self.job.modules:
            if ref not in self._modules:
                self._modules[ref] = self._build(self.job.modules[ref], f"modules.{ref}")
            return self._modules[ref]
        return self._build(ref, where)

    def _build(self, spec, where):
        a = self.algebra
        if isinstance(spec, str):
            parts = spec.split()
            if parts[0] in ("simple", "projective") and len(parts) == 2:
                spec = {parts[0]: parts[1]}
            elif parts == ["top"] or parts == ["regular"]:
                spec = {parts[0]: True}
            elif spec == "k":
                spec = {"simple": 0}
            else:
                raise JobError(where, f"cannot read module {spec!r}")
        if not isinstance(spec, dict) or not spec:
            raise JobError(where, "module specs are mappings")
        if "simple" in spec:
            return simple(a, _vertex(a, spec["simple"], where))
        if "projective" in spec:
            return projective(a, _vertex(a, spec["projective"], where))
        if "top" in spec:
            return top_semisimple(a)
        if "regular" in spec:
            return regular_module(a)
        if "radical" in spec:
            return radical(self.module(spec["radical"], where))
        if "syzygy" in spec:
            return syzygy_module(self.module(spec.get("of", "k"), where), int(spec["syzygy"]))
        if "dual" in spec:
            return dual(self.module(spec["dual"], where))
        if "sum" in spec:
            return direct_sum(*[self.module(x, f"{where}.sum") for x in spec["sum"]])
        if "tensor_chain" in spec:
            etas = _classes(a, spec["tensor_chain"], self.caps["cohomology"], f"{where}.tensor_chain")
            return tensor_chain(etas, self.module(spec.get("of", "k"), where)).module
        if "matrices" in spec:
            lit = spec["matrices"]
            try:
                return Module.from_blocks(a, lit["dims"], lit.get("arrows", {}), check=True)
            except (KeyError, ValueError, ModuleError) as exc:
                raise JobError(f"{where}.matrices", str(exc)) from None
        raise JobError(where, f"unknown module constructor {sorted(spec)}")

    @property
    def h(self):
        if self._h is None:
            spec = self.job.hspec or {}
            cap = self.caps["cohomology"]
            if "classes" in spec:
                self._h = HSpec(self.algebra, _classes(self.algebra, spec["classes"], cap, "hspec.classes"),
                                cap=cap)
            elif "even_to_degree" in spec:
                self._h = even_to_degree(self.algebra, int(spec["even_to_degree"]), cap)
            else:
                self._h = default_hspec(self.algebra, cap, int(spec.get("max_degree", 2)))
        return self._h

    def h_summary(self):
        h = self.h
        return {"generators": [{"name": n, "degree": g.degree,
                                "coords": [h.field.to_json(x) for x in g.coords()]}
                               for n, g in zip(h.names, h.generators)]}


def parse_poly(h, text, where):
    """Polynomial in the generator names, e.g. 'x1^2 + x2'."""
    syms = sympy.symbols(h.names)
    try:
        expr = sympy.sympify(str(text).replace("^", "**"), locals=dict(zip(h.names, syms)))
        stray = expr.free_symbols - set(syms)
        if stray:
            raise JobError(where, f"unknown generators {sorted(map(str, stray))}")
        poly = sympy.Poly(expr, *syms)
    except (sympy.SympifyError, sympy.PolynomialError, TypeError) as exc:
        raise JobError(where, f"cannot parse polynomial ({exc})") from None
    f = h.field
    out = {}
    for exp, c in poly.terms():
        c = Fraction(int(c.p), int(c.q))
        v = f(c)
        if v != 0:
            out[tuple(exp)] = v
    if not out or not h.ring.is_homogeneous(out):
        raise JobError(where, "need a nonzero homogeneous polynomial")
    return out


def _etas(ws, refs, where):
    out = []
    for i, ref in enumerate(refs or []):
        if isinstance(ref, str):
            out.append(parse_poly(ws.h, ref, f"{where}[{i}]"))
        else:
            out.append(_classes(ws.algebra, [ref], ws.caps["cohomology"], f"{where}[{i}]")[0])
    return out


# -- commands ------------------------------------------------------------------


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if x is None or isinstance(x, (str, float)):
        return x
    return str(x)


def cmd_analyze(ws, flags):
    a = ws.algebra
    cap = ws.caps["resolution"]
    left, right = gorenstein_bounds(a, cap)
    return {"name": a.name, "field": a.field.tag, "dim": a.dim, "vertices": a.num_vertices,
            "arrows": [x.label for x in a.arrows], "basis": a.labels, "connected": is_connected(a),
            "selfinjective": is_selfinjective(a), "centre_dim": a.centre().shape[1],
            "injective_dimensions": [str(left), str(right)],
            "note": "computed over the prime field; split simples (End = k) assumed, not checked"}


def cmd_resolve(ws, flags):
    m = ws.module(ws.job.args.get("module", "k"))
    cap = ws.caps["resolution"]
    res = min_proj_resolution(m, cap)
    return {"module_dim": m.dim, "betti": res.betti[:cap + 1],
            "betti_by_vertex": [res.betti_by_vertex(n) for n in range(cap + 1)]}


def cmd_hh(ws, flags):
    a = ws.algebra
    cap = ws.caps["cohomology"]
    products = bool(ws.job.args.get("products", True))
    g = hh_truncation(a, cap, products=products)
    out = {"dims": g.dims[:cap + 1]}
    if products:
        out["graded_commutative"] = g.check_graded_commutative()
        out["associative"] = g.check_associative()
        if not out["graded_commutative"]:
            flags.append("FALSIFICATION: cup product not graded-commutative")
    if ws.job.args.get("oracle"):
        top = min(cap, int(ws.job.args.get("oracle_cap", 3)))
        try:
            oracle = [bar_oracle(a, n=n) for n in range(top + 1)]
        except BudgetExceeded:
            flags.append("INCONCLUSIVE: bar complex oracle over budget")
        else:
            out["bar_oracle"] = oracle
            if oracle != g.dims[:top + 1]:
                flags.append("FALSIFICATION: resolution and bar complex disagree")
    return out


def cmd_ext_algebra(ws, flags):
    cap = ws.caps["cohomology"]
    g = ext_algebra(ws.algebra, cap)
    return {"dims": g.dims[:cap + 1], "graded_centre_dims": graded_centre(g)[:cap + 1]}


def cmd_complexity(ws, flags):
    m = ws.module(ws.job.args.get("module", "k"))
    cv = complexity(m, ws.caps["resolution"])
    if cv.kind == "inconclusive":
        flags.append("INCONCLUSIVE: no certified growth class within the cap")
    return cv.to_dict()


def cmd_variety(ws, flags):
    m = ws.module(ws.job.args.get("module", "k"))
    rep = variety_report(ws.h, m, ws.caps["ideal"], name=str(ws.job.args.get("module", "k")))
    if rep.consistent is False:
        flags.append("FALSIFICATION: complexity outside the Krull bounds")
    return {"h": ws.h_summary(), "report": rep.to_dict()}


def cmd_realize(ws, flags):
    etas = _etas(ws, ws.job.args.get("etas", []), "args.etas")
    if not etas:
        m = top_semisimple(ws.algebra)
        rep = variety_report(ws.h, m, ws.caps["ideal"], name="top")
        return {"h": ws.h_summary(), "module_dim": m.dim, "report": rep.to_dict()}
    try:
        r = realize_variety(ws.h, etas, ws.caps["ideal"])
    except ValueError as exc:
        raise JobError("args.etas", str(exc)) from None
    if not r.inclusion:
        flags.append("FALSIFICATION: annihilator misses a realizing class")
    if not r.matches:
        flags.append("INCONCLUSIVE: Krull bounds differ from the target ideal")
    return {"h": ws.h_summary(), "module_dim": r.module.dim, "report": r.report.to_dict(),
            "inclusion": r.inclusion, "expected_krull_dim": list(r.expected), "matches": r.matches}


def cmd_periodic(ws, flags):
    m = ws.module(ws.job.args.get("module", "k"))
    cap = ws.caps["resolution"]
    per = periodicity(m, cap, ws.job.seed)
    out = {"period": per.period, "seed": ws.job.seed, "line_check": line_implies_periodic_check(m, cap, ws.job.seed)}
    if out["line_check"]["falsification"]:
        flags.append("FALSIFICATION: complexity one with a non-periodic summand")
    if per.period is None:
        flags.append("INCONCLUSIVE: no period within the cap")
        return out
    div = period_divisor_check(m, ws.h, cap, ws.job.seed)
    out["divisor_check"] = div
    if not div["holds"]:
        flags.append("FALSIFICATION: period divides no generator degree")
    out["ext_structure"] = periodic_ext_structure(per.reduced, cap, ws.job.seed)
    return out


def cmd_witness(ws, flags):
    m = ws.module(ws.job.args.get("module", "k"))
    try:
        w = periodic_witness(ws.h, m, ws.caps["ideal"], ws.job.seed)
    except ValueError as exc:
        raise JobError("args.module", str(exc)) from None
    out = w.to_dict()
    if w.ext1_dim < 1 or not (w.complexity.finite and w.complexity.value <= 1):
        flags.append("FALSIFICATION: witness fails")
    return out


def cmd_pencil(ws, flags):
    args = ws.job.args
    rest = _etas(ws, args.get("rest", []), "args.rest")
    alphas = [tuple(x) for x in args.get("alphas", [[1, 0], [0, 1], [1, 1]])]
    x1, x2 = int(args.get("x1", 0)), int(args.get("x2", 1))
    if max(x1, x2) >= len(ws.h.generators):
        raise JobError("args.x1", "generator index out of range")
    out = pencil_family(ws.h, x1, x2, rest, alphas, ws.caps["ideal"])
    if len(set(alphas)) == len(alphas) and not out["distinct_annihilators"]:
        flags.append("FALSIFICATION: pencil members share an annihilator")
    return out


def cmd_fg(ws, flags):
    out = fg_diagnostic(ws.h, ws.caps["resolution"])
    flags.append(f"{out['verdict']}: finite generation diagnostic")
    return out


def _verify_modules(a):
    k = simple(a, 0)
    return {"k": k, "radical": radical(regular_module(a)), "k+omega": direct_sum(k, syzygy_module(k))}


def cmd_verify(ws, flags):
    """Cross-checks over all classes of degree <= 2 and a few modules."""
    a = ws.algebra
    cap = ws.caps["cohomology"]
    ecap = ws.caps["resolution"]
    cx = hh_complex(a, max(cap, 2))
    mods = _verify_modules(a)
    out = {}
    cases = split_bad = square_bad = 0
    for d in (1, 2):
        for c in cx.basis(d) + [cx.zero(d)]:
            for name, m in mods.items():
                cases += 1
                rep = split_equivalence_check([c], m, ecap, ws.job.seed)
                if rep["falsification"]:
                    split_bad += 1
                if not eta_square_annihilation_check(c, m, ecap):
                    square_bad += 1
    out["split_equivalence"] = {"cases": cases, "disagreements": split_bad}
    out["eta_square"] = {"cases": cases, "failures": square_bad}
    for name, bad in (("split equivalence", split_bad), ("eta square annihilation", square_bad)):
        flags.append(("FALSIFICATION" if bad else "PASS-to-cap") + f": {name}")
    reports = []
    bad = 0
    for v in range(a.num_vertices):
        rep = variety_report(ws.h, simple(a, v), ws.caps["ideal"], name=f"simple {a.vertices[v]}")
        reports.append(rep.to_dict())
        if rep.consistent is False:
            bad += 1
    out["complexity_vs_dimension"] = reports
    flags.append(("FALSIFICATION" if bad else "PASS-to-cap") + ": complexity within Krull bounds")
    return out


HANDLERS = {"analyze-algebra": cmd_analyze, "resolve": cmd_resolve, "hh": cmd_hh,
            "ext-algebra": cmd_ext_algebra, "complexity": cmd_complexity, "variety": cmd_variety,
            "realize": cmd_realize, "periodic": cmd_periodic, "witness": cmd_witness,
            "pencil": cmd_pencil, "fg-check": cmd_fg, "verify": cmd_verify}


def versions():
    return {"suppvar": __version__, "numpy": np.__version__, "sympy": sympy.__version__}


def run(job):
    """Run a job; returns (report dict, exit code)."""
    flags = []
    report = {"job": job.to_dict(), "versions": versions(), "results": {}, "flags": flags}
    try:
        ws = Workspace(job)
        report["results"] = _jsonable(HANDLERS[job.command](ws, flags))
    except (BudgetExceeded, WitnessError) as exc:
        flags.append(f"INCONCLUSIVE: {exc}")
        return report, EXIT_BUDGET
    except FgViolation as exc:
        flags.append(f"FALSIFICATION: {exc}")
        return report, EXIT_FALSIFIED
    if any(x.startswith("FALSIFICATION") for x in flags):
        return report, EXIT_FALSIFIED
    return report, EXIT_OK


# -- output --------------------------------------------------------------------


def emit(report, fmt="json"):
    if fmt == "json":
        return json.dumps(_jsonable(report), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if fmt == "csv":
        return _emit_csv(report)
    return _emit_human(report)


def _emit_csv(report):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    res = report.get("results", {})
    if "betti" in res:
        w.writerow(["degree", "b_n"])
        for n, b in enumerate(res["betti"]):
            w.writerow([n, b])
        return buf.getvalue()
    w.writerow(["key", "value"])
    for k, v in _flatten(res):
        w.writerow([k, v])
    return buf.getvalue()


def _flatten(x, prefix=""):
    if isinstance(x, dict):
        for k in sorted(x):
            yield from _flatten(x[k], f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(x, list) and any(isinstance(v, (dict, list)) for v in x):
        for i, v in enumerate(x):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, json.dumps(x, sort_keys=True) if isinstance(x, list) else x


def _emit_human(report):
    job = report["job"]
    alg = job["algebra"].get("fixture") or job["algebra"].get("name", "quiver algebra")
    caps = ", ".join(f"{k} {v}" for k, v in sorted(job["caps"].items()))
    lines = [f"{job['command']} on {alg} over {job['field']}  (seed {job['seed']}; caps: {caps})"]
    for k, v in _flatten(report.get("results", {})):
        lines.append(f"  {k:<40} {v}")
    for fl in report.get("flags", []):
        lines.append(f"  [{fl}]")
    return "\n".join(lines) + "\n"


# -- argument parsing -------------------------------------------------------------


def load_job_file(path):
    try:
        with open(path, encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        pos = f"line {mark.line + 1}, column {mark.column + 1}" if mark else "unknown position"
        raise JobError(f"{path} ({pos})", getattr(exc, "problem", None) or str(exc)) from None
    except OSError as exc:
        raise JobError(path, str(exc)) from None
    return data or {}


def build_parser():
    p = argparse.ArgumentParser(prog="suppvar", description=__doc__)
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input", help="YAML job file")
    p.add_argument("--output", help="write the report here instead of stdout")
    p.add_argument("--fixture", help="named algebra, e.g. A1, A2(3), A4(2)")
    p.add_argument("--field", help="GF(p) or QQ")
    p.add_argument("--cap-res", type=int)
    p.add_argument("--cap-cohom", type=int)
    p.add_argument("--cap-ideal", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--module", help="module name or shorthand such as 'simple 0'")
    p.add_argument("--format", choices=["human", "json", "csv"], default="human")
    return p


def job_from_args(ns):
    data = load_job_file(ns.input) if ns.input else {}
    data["command"] = ns.command
    if ns.fixture:
        data["algebra"] = {"fixture": ns.fixture}
    if ns.field:
        data["field"] = ns.field
    caps = dict(data.get("caps") or {})
    for key, val in (("resolution", ns.cap_res), ("cohomology", ns.cap_cohom), ("ideal", ns.cap_ideal)):
        if val is not None:
            caps[key] = val
    data["caps"] = caps
    if ns.seed is not None:
        data["seed"] = ns.seed
    if ns.module:
        data.setdefault("args", {})
        data["args"] = dict(data["args"] or {}, module=ns.module)
    return JobSpec.from_dict(data)


def main(argv=None):
    ns = build_parser().parse_args(argv)
    try:
        job = job_from_args(ns)
        report, code = run(job)
    except (JobError, ModuleError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    text = emit(report, ns.format)
    if ns.output:
        with open(ns.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
