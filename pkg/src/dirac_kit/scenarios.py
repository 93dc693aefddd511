"""Scenario files and the check registry.

A scenario is a JSON document with declarations (algebras, forms, subspaces),
a list of named checks referencing them, and settings (seed, samples, tol,
fd_step).  Reports are deterministic given scenario + seed: the timing field
is excluded from the determinism contract.
"""

from __future__ import annotations

import json
import time
from fractions import Fraction
from typing import Callable

from . import qlie
from .exactla import QForm, Subspace, lagrangian_class, orth_complement
from .courant import CourantChart, DiracFrame, gauge_conjugation_check, verify_dirac
from .polycal import MixedSection, PolyForm, PolyFun
from .grpnum.charts import DEFAULT_SEED, group_chart
from .grpnum.suites import Settings, amm_suite, arrow_suite, ca_suite, polwie_suite
from .grpnum.moment import g0_suite, gauss_cartan_suite, luwei_suite

SCHEMA = "dirac-kit/1"


class ScenarioError(ValueError):
    """Malformed scenario: parsing/validation problems (exit code 2)."""


def _settings_from(doc: dict, override: dict | None = None) -> Settings:
    raw = dict(doc.get("settings", {}))
    raw.update({k: v for k, v in (override or {}).items() if v is not None})
    st = Settings()
    if "seed" in raw:
        st.seed = int(raw["seed"])
    if "samples" in raw:
        st.samples = int(raw["samples"])
        if st.samples < 1 or st.samples > 10000:
            raise ScenarioError("samples out of range")
    if "tol" in raw:
        st.tol = float(raw["tol"])
        if not (0 < st.tol < 1):
            raise ScenarioError("tol out of range")
    if "fd_step" in raw:
        st.fd_step = float(raw["fd_step"])
        if not (1e-12 < st.fd_step < 1e-2):
            raise ScenarioError("fd_step out of range")
    if "fd_tol" in raw:
        st.fd_tol = float(raw["fd_tol"])
    if "exact_points" in raw:
        st.exact_points = int(raw["exact_points"])
    return st


class Context:
    def __init__(self, declarations: dict):
        self.algebras: dict = {}
        self.subspaces: dict[str, Subspace] = {}
        self.forms: dict[str, QForm] = {}
        self.charts: dict[str, CourantChart] = {}
        self.frames: dict[str, DiracFrame] = {}
        try:
            for name, spec in declarations.get("algebras", {}).items():
                if "catalog" in spec:
                    self.algebras[name] = qlie.catalog(spec["catalog"])
                else:
                    self.algebras[name] = qlie.QuadLieAlgebra.from_data(spec)
            for name, spec in declarations.get("subspaces", {}).items():
                self.subspaces[name] = Subspace.from_data(spec)
            for name, spec in declarations.get("forms", {}).items():
                self.forms[name] = QForm.from_data(spec)
            for name, spec in declarations.get("charts", {}).items():
                kalg = self.algebras[spec["algebra"]] if "algebra" in spec else None
                eta = PolyForm.from_data(spec["eta"]) if "eta" in spec else None
                self.charts[name] = CourantChart(int(spec["dim"]),
                                                 spec.get("flavor",
                                                          "twisted_standard"),
                                                 kalg=kalg, eta=eta)
            for name, spec in declarations.get("frames", {}).items():
                chart = self.charts[spec["chart"]]
                sections = [MixedSection.from_data(s) for s in spec["sections"]]
                self.frames[name] = DiracFrame(chart, sections, name=name)
        except ScenarioError:
            raise
        except Exception as exc:
            raise ScenarioError("bad declaration: %s" % exc) from exc

    def algebra(self, name: str):
        if name not in self.algebras:
            raise ScenarioError("unknown algebra %r" % name)
        return self.algebras[name]

    def subspace(self, name: str) -> Subspace:
        if name not in self.subspaces:
            raise ScenarioError("unknown subspace %r" % name)
        return self.subspaces[name]

    def form(self, name: str) -> QForm:
        if name not in self.forms:
            raise ScenarioError("unknown form %r" % name)
        return self.forms[name]

    def frame(self, name: str) -> DiracFrame:
        if name not in self.frames:
            raise ScenarioError("unknown frame %r" % name)
        return self.frames[name]


def _c_verify_quadratic(ctx: Context, spec: dict, st: Settings) -> dict:
    g = ctx.algebra(spec["algebra"])
    rep = qlie.verify_quadratic(g)
    out = {"status": "pass" if rep["pass"] else "fail",
           "signature": list(rep["signature"])}
    for key in ("jacobi_witness", "ad_invariance_witness"):
        if key in rep:
            out.setdefault("witnesses", {})[key] = rep[key]
    return out


def _c_jacobi(ctx: Context, spec: dict, st: Settings) -> dict:
    g = ctx.algebra(spec["algebra"])
    defect = g.jacobi_defect()
    if defect is None:
        return {"status": "pass"}
    return {"status": "fail",
            "witnesses": {"triple": list(defect[0]),
                          "defect": [str(x) for x in defect[1]]}}


def _c_lagrangian_class(ctx: Context, spec: dict, st: Settings) -> dict:
    w = ctx.subspace(spec["subspace"])
    q = ctx.form(spec["form"])
    got = lagrangian_class(w, q)
    want = spec.get("expect", "lagrangian")
    return {"status": "pass" if got == want else "fail",
            "classified": got, "expected": want}


def _c_orth_involution(ctx: Context, spec: dict, st: Settings) -> dict:
    w = ctx.subspace(spec["subspace"])
    q = ctx.form(spec["form"])
    ok = orth_complement(orth_complement(w, q), q) == w
    return {"status": "pass" if ok else "fail"}


def _c_drinfeld_roundtrip(ctx: Context, spec: dict, st: Settings) -> dict:
    name = spec.get("bialgebra", "standard_bialgebra_sl2")
    b = qlie.catalog(name)
    if not isinstance(b, qlie.LieQuasiBialgebra):
        raise ScenarioError("catalog entry %r is not a quasi-bialgebra" % name)
    t = qlie.double_triple(b)
    back = qlie.quasi_bialgebra_from_triple(t)
    ok = back.equal_data(b)
    defect = qlie.triple_isomorphism_defect(t)
    return {"status": "pass" if ok and defect is None else "fail",
            "roundtrip_exact": ok,
            "double_isomorphism": defect or "exact"}


def _c_gdelta_iso(ctx: Context, spec: dict, st: Settings) -> dict:
    g = ctx.algebra(spec["algebra"])
    rep = qlie.gdelta_iso(g)
    ok = rep["bracket_preserved"] and rep["pairing_preserved"]
    return {"status": "pass" if ok else "fail"}


def _c_courant_axioms(ctx: Context, spec: dict, st: Settings) -> dict:
    dim = int(spec.get("dim", 2))
    flavor = spec.get("flavor", "twisted_standard")
    kalg = qlie.catalog(spec["algebra"]) if "algebra" in spec else None
    eta = PolyForm.from_data(spec["eta"]) if "eta" in spec else None
    chart = CourantChart(dim, flavor, kalg=kalg, eta=eta)
    rep = chart.courant_axiom_suite(samples=min(4, st.samples), seed=st.seed)
    out = {"status": "pass" if rep["pass"] else "fail"}
    out["axioms"] = {k: v for k, v in rep.items() if k not in ("pass", "witnesses")}
    if "witnesses" in rep:
        out["witnesses"] = rep["witnesses"]
    return out


def _c_catalog_suite(ctx: Context, spec: dict, st: Settings) -> dict:
    suite = spec.get("suite")
    group = spec.get("group", "su2")
    rep = _run_group_suite(suite, group, st)
    return {"status": "pass" if rep["pass"] else "fail", "report": rep}


def _c_verify_dirac(ctx: Context, spec: dict, st: Settings) -> dict:
    frame = ctx.frame(spec["frame"])
    rep = verify_dirac(frame, spec.get("mode", "exact"),
                       samples=st.samples, seed=st.seed)
    out = {"status": "pass" if rep["pass"] else "fail", "report": rep}
    return out


CHECKS: dict[str, Callable] = {
    "verify_quadratic": _c_verify_quadratic,
    "jacobi": _c_jacobi,
    "lagrangian_class": _c_lagrangian_class,
    "orth_complement_involution": _c_orth_involution,
    "drinfeld_roundtrip": _c_drinfeld_roundtrip,
    "gdelta_iso": _c_gdelta_iso,
    "courant_axioms": _c_courant_axioms,
    "catalog_suite": _c_catalog_suite,
    "verify_dirac": _c_verify_dirac,
}


def _run_group_suite(suite: str, group: str, st: Settings) -> dict:
    chart = group_chart(group)
    if suite == "polwie":
        return polwie_suite(chart, st)
    if suite == "amm":
        return amm_suite(chart, st)
    if suite == "arrows":
        return arrow_suite(chart, st)
    if suite == "ca":
        return ca_suite(chart, st)
    if suite == "gauss_cartan":
        return gauss_cartan_suite(chart, st)
    if suite == "g0_moment":
        return g0_suite(chart, st)
    if suite == "luwei":
        return luwei_suite(chart, st)
    raise ScenarioError("unknown group suite %r" % suite)


def run_scenario(doc: dict, settings_override: dict | None = None) -> dict:
    if not isinstance(doc, dict):
        raise ScenarioError("scenario must be a JSON object")
    if doc.get("schema", SCHEMA) != SCHEMA:
        raise ScenarioError("unsupported schema %r" % doc.get("schema"))
    st = _settings_from(doc, settings_override)
    ctx = Context(doc.get("declarations", {}))
    checks = doc.get("checks", [])
    if not isinstance(checks, list):
        raise ScenarioError("checks must be a list")
    records = []
    for idx, spec in enumerate(checks):
        name = spec.get("name")
        if name not in CHECKS:
            raise ScenarioError("unknown check %r" % name)
        t0 = time.monotonic()
        try:
            rec = CHECKS[name](ctx, spec, st)
        except ScenarioError:
            raise
        except Exception as exc:
            rec = {"status": "error", "error": str(exc)}
        rec = {"name": spec.get("label", name), "index": idx} | rec
        rec["timing"] = round(time.monotonic() - t0, 6)
        records.append(rec)
    return {"schema": SCHEMA, "seed": st.seed, "checks": records,
            "pass": all(r["status"] == "pass" for r in records)}


def load_scenario(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ScenarioError("cannot parse scenario %s: %s" % (path, exc)) from exc


# -- the stable catalog command registry --------------------------------------

def _catalog_polwie(st: Settings) -> dict:
    reports = [polwie_suite(group_chart(g), st) for g in ("su2", "sl2r", "ab2")]
    return {"suite": "polwie", "reports": reports,
            "pass": all(r["pass"] for r in reports)}


def _catalog_amm(st: Settings) -> dict:
    return amm_suite(group_chart("su2"), st)


def _catalog_arrows(st: Settings) -> dict:
    reports = [arrow_suite(group_chart(g), st) for g in ("su2", "ab2")]
    return {"suite": "arrows", "reports": reports,
            "pass": all(r["pass"] for r in reports)}


def _catalog_gauss_cartan(st: Settings) -> dict:
    return gauss_cartan_suite(group_chart("sl2r"), st)


def _catalog_g0(st: Settings) -> dict:
    return g0_suite(group_chart("sl2r"), st)


def _catalog_luwei(st: Settings) -> dict:
    return luwei_suite(group_chart("sl2r"), st)


def _catalog_weil_sl2(st: Settings) -> dict:
    import random
    from .weil import WeilElement, dh_closed_iff_invariant, weil_dh, weil_dv
    rng = random.Random(st.seed)
    checks = []
    for alg_name in ("sl2_trace", "gl2_trace"):
        alg = qlie.catalog(alg_name)
        ok = True
        for _ in range(20):
            p = rng.randint(0, 3)
            q = rng.randint(0, p)
            comps = {}
            import itertools as it
            wedges = list(it.combinations(range(alg.dim), p - q))
            syms = list(it.combinations_with_replacement(range(alg.dim), q))
            for _ in range(3):
                comps[(rng.choice(wedges), rng.choice(syms))] = \
                    Fraction(rng.randint(-3, 3), rng.randint(1, 2))
            e = WeilElement(alg, p, q, comps)
            if not weil_dv(weil_dv(e)).is_zero or not weil_dh(weil_dh(e)).is_zero:
                ok = False
            anti = weil_dv(weil_dh(e)) + weil_dh(weil_dv(e))
            if not anti.is_zero:
                ok = False
        checks.append({"check": "weil.double_complex_%s" % alg_name,
                       "points": 20, "max_residual": 0 if ok else 1,
                       "tolerance": 0, "pass": ok})
        ok2 = True
        for _ in range(10):
            kappa = {}
            for i in range(alg.dim):
                for j in range(i, alg.dim):
                    if rng.random() < 0.5:
                        kappa[(i, j)] = Fraction(rng.randint(-2, 2))
            closed, invariant = dh_closed_iff_invariant(alg, kappa or {(0, 0): Fraction(1)})
            if closed != invariant:
                ok2 = False
        checks.append({"check": "weil.closed_iff_invariant_%s" % alg_name,
                       "points": 10, "max_residual": 0 if ok2 else 1,
                       "tolerance": 0, "pass": ok2})
    return {"suite": "weil_sl2", "checks": checks,
            "pass": all(c["pass"] for c in checks)}


def _catalog_doubles(st: Settings) -> dict:
    import random
    from .relations import random_isotropic_complement
    rng = random.Random(st.seed)
    checks = []
    g = qlie.sl2_trace()
    d = g.direct_sum(g.negated())
    diag = qlie.k_plus_kbar(g).lag
    anti = qlie.antidiagonal(g)
    from .exactla import invert, mat_vec
    ginv = invert(g.gram.gram)
    dual = [tuple(x / 2 for x in mat_vec(ginv, row)) + tuple(-x / 2 for x in mat_vec(ginv, row))
            for row in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
    ok = True
    for _ in range(5):
        comp = random_isotropic_complement(rng, diag.basis, dual)
        t = qlie.QuasiManinTriple(d, diag, comp)
        b = qlie.quasi_bialgebra_from_triple(t)
        back = qlie.quasi_bialgebra_from_triple(qlie.double_triple(b))
        if not back.equal_data(b):
            ok = False
    checks.append({"check": "doubles.roundtrip_random_complements", "points": 5,
                   "max_residual": 0 if ok else 1, "tolerance": 0, "pass": ok})
    b = qlie.standard_bialgebra_sl2()
    back = qlie.quasi_bialgebra_from_triple(qlie.double_triple(b))
    ok2 = back.equal_data(b)
    checks.append({"check": "doubles.roundtrip_standard_bialgebra", "points": 1,
                   "max_residual": 0 if ok2 else 1, "tolerance": 0, "pass": ok2})
    return {"suite": "doubles", "checks": checks,
            "pass": all(c["pass"] for c in checks)}


CATALOG_COMMANDS: dict[str, Callable[[Settings], dict]] = {
    "polwie": _catalog_polwie,
    "amm": _catalog_amm,
    "arrows": _catalog_arrows,
    "gauss_cartan": _catalog_gauss_cartan,
    "g0_moment": _catalog_g0,
    "luwei": _catalog_luwei,
    "weil_sl2": _catalog_weil_sl2,
    "doubles": _catalog_doubles,
}


def run_catalog(name: str, settings_override: dict | None = None) -> dict:
    if name not in CATALOG_COMMANDS:
        raise ScenarioError("unknown catalog command %r; known: %s"
                            % (name, ", ".join(sorted(CATALOG_COMMANDS))))
    st = _settings_from({}, settings_override)
    t0 = time.monotonic()
    rep = CATALOG_COMMANDS[name](st)
    rep = {"schema": SCHEMA, "catalog": name, "seed": st.seed} | rep
    rep["timing"] = round(time.monotonic() - t0, 6)
    return rep


def report_text(report: dict) -> str:
    lines = []
    if "catalog" in report:
        lines.append("catalog %s (seed %s)" % (report["catalog"], report["seed"]))
    checks = report.get("checks", [])
    if not checks and "reports" in report:
        for sub in report["reports"]:
            lines.append("suite %s [%s]" % (sub.get("suite"), sub.get("group", "")))
            checks = checks + sub.get("checks", [])
    for rec in checks:
        if "check" in rec:
            status = "PASS" if rec["pass"] else "FAIL"
            lines.append("[%s] %s  points=%s max_residual=%.3g tol=%.3g"
                         % (status, rec["check"], rec.get("points", "-"),
                            rec.get("max_residual", 0.0),
                            rec.get("tolerance", 0.0)))
        else:
            status = rec.get("status", "?").upper()
            lines.append("[%s] %s" % (status, rec.get("name")))
            if rec.get("status") == "fail" and "witnesses" in rec:
                lines.append("        witness: %s" % json.dumps(rec["witnesses"],
                                                                sort_keys=True))
            if rec.get("status") == "error":
                lines.append("        error: %s" % rec.get("error"))
    lines.append("overall: %s" % ("PASS" if report.get("pass") else "FAIL"))
    return "\n".join(lines)


def report_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, default=str)
