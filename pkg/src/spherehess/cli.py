"""Command-line front end: tables, verification reports, machine formats.

Subcommands
-----------
spectrum   normalized Hessian eigenvalue table, recursion vs closed form
signs      extremal classification of the four global functionals per dimension
traces     regularized operator traces as exact rational multiples of pi^2
greens     radial Green's function profiles with residual checks
qsymbol    leading-symbol identity of the curvature Hessian
verify     run a named property suite and aggregate PASS/FAIL

Every command fills a ReportEnvelope rendered as an aligned table (default),
CSV, or a single JSON document.  Exact rationals are serialized as "p/q"
strings with a separate pi-exponent field so exactness survives the round
trip.  Identical invocations produce byte-identical output; randomized
suites draw from an explicit ``--seed`` (default 0).  Exit status: 0 when
every check passes, 1 when any check fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import __version__
from .errors import ParityError, SphereHessError
from . import confgroup as cg
from . import greens
from . import qcurv
from . import symbols
from .ktypes import KType
from .spectrum import (
    spectrum_generate,
    spectrum_generate3,
    t0_eigenvalue,
)

__all__ = [
    "CheckResult",
    "ReportEnvelope",
    "ResultTable",
    "cmd_spectrum",
    "cmd_signs",
    "cmd_traces",
    "cmd_greens",
    "cmd_qsymbol",
    "cmd_verify",
    "render_report",
    "build_parser",
    "console_main",
]


# ---------------------------------------------------------------------------
# Report envelope.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    """One named verification with its residual and violated tolerance."""

    name: str
    status: str  # "PASS" | "FAIL"
    residual: float
    tolerance: float

    def __post_init__(self) -> None:
        if self.status not in ("PASS", "FAIL"):
            raise ValueError("status must be PASS or FAIL")


def check_against(name: str, residual: float, tolerance: float) -> CheckResult:
    status = "PASS" if residual <= tolerance else "FAIL"
    return CheckResult(name=name, status=status, residual=float(residual),
                       tolerance=float(tolerance))


@dataclass(frozen=True)
class ResultTable:
    columns: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]


@dataclass(frozen=True)
class ReportEnvelope:
    command: str
    parameters: dict[str, str]
    results: ResultTable | tuple[str, ...]
    checks: tuple[CheckResult, ...]
    version: str = __version__

    @property
    def all_pass(self) -> bool:
        return all(c.status == "PASS" for c in self.checks)


def frac_str(x: Fraction) -> str:
    """Canonical "p/q" (or integer "p") serialization of a rational."""
    return str(Fraction(x))


def _fmt_res(x: float) -> str:
    return f"{x:.3e}"


# ---------------------------------------------------------------------------
# Renderers.
# ---------------------------------------------------------------------------


def _render_table(env: ReportEnvelope) -> str:
    lines = [f"report: {env.command}", f"version: {env.version}", "parameters:"]
    for key, val in env.parameters.items():
        lines.append(f"  {key} = {val}")
    lines.append("results:")
    if isinstance(env.results, ResultTable):
        cols = env.results.columns
        rows = env.results.rows
        widths = [
            max(len(cols[i]), *(len(r[i]) for r in rows)) if rows else len(cols[i])
            for i in range(len(cols))
        ]
        lines.append("  " + "  ".join(c.ljust(w) for c, w in zip(cols, widths)))
        for r in rows:
            lines.append("  " + "  ".join(v.ljust(w) for v, w in zip(r, widths)))
    else:
        for note in env.results:
            lines.append(f"  {note}")
    lines.append("checks:")
    for c in env.checks:
        extra = f"  residual={_fmt_res(c.residual)}"
        if c.status == "FAIL":
            extra += f"  tolerance={_fmt_res(c.tolerance)}"
        lines.append(f"  [{c.status}] {c.name}{extra}")
    lines.append(f"status: {'PASS' if env.all_pass else 'FAIL'}")
    return "\n".join(lines) + "\n"


def _csv_quote(v: str) -> str:
    if any(ch in v for ch in ',"\n'):
        return '"' + v.replace('"', '""') + '"'
    return v


def _render_csv(env: ReportEnvelope) -> str:
    lines: list[str] = []
    if isinstance(env.results, ResultTable):
        lines.append(",".join(_csv_quote(c) for c in env.results.columns))
        for r in env.results.rows:
            lines.append(",".join(_csv_quote(v) for v in r))
    else:
        for note in env.results:
            lines.append(f"# note,{_csv_quote(note)}")
    for c in env.checks:
        tail = f",{_fmt_res(c.tolerance)}" if c.status == "FAIL" else ""
        lines.append(f"# check,{c.name},{c.status},{_fmt_res(c.residual)}{tail}")
    lines.append(f"# report,{env.command},version,{env.version}")
    return "\n".join(lines) + "\n"


def _render_json(env: ReportEnvelope) -> str:
    if isinstance(env.results, ResultTable):
        results = {
            "columns": list(env.results.columns),
            "rows": [list(r) for r in env.results.rows],
        }
    else:
        results = {"notes": list(env.results)}
    doc = {
        "command": env.command,
        "version": env.version,
        "parameters": env.parameters,
        "results": results,
        "checks": [
            {
                "name": c.name,
                "status": c.status,
                "residual": c.residual,
                "tolerance": c.tolerance,
            }
            for c in env.checks
        ],
        "status": "PASS" if env.all_pass else "FAIL",
    }
    return json.dumps(doc, indent=2) + "\n"


def render_report(env: ReportEnvelope, fmt: str) -> str:
    if fmt == "table":
        return _render_table(env)
    if fmt == "csv":
        return _render_csv(env)
    if fmt == "json":
        return _render_json(env)
    raise ValueError(f"unknown format {fmt!r}")


# ---------------------------------------------------------------------------
# spectrum
# ---------------------------------------------------------------------------


def cmd_spectrum(n: int, j_max: int) -> ReportEnvelope:
    params = {"dim": str(n), "jmax": str(j_max)}
    if n == 2:
        notes = (
            "dimension 2: the Hessian is universally zero "
            "(every direction is a gauge direction); no table.",
        )
        checks = (CheckResult("universally-zero-hessian", "PASS", 0.0, 0.0),)
        return ReportEnvelope("spectrum", params, notes, checks)

    if n == 3:
        base_plus = t0_eigenvalue(KType(3, 0, 2))
        base_minus = t0_eigenvalue(KType(3, 0, -2))
        table = spectrum_generate3(j_max, base_plus, base_minus)
        q_values = (-2, -1, 0, 1, 2)
    else:
        table = spectrum_generate(n, j_max, t0_eigenvalue(KType(n, 0, 2)))
        q_values = (0, 1, 2)

    rows: list[tuple[str, ...]] = []
    all_equal = True
    signs_ok = True
    for j in range(j_max + 1):
        for q in q_values:
            rec = table.value(j, q)
            closed = t0_eigenvalue(KType(n, j, q))
            equal = rec == closed
            all_equal = all_equal and equal
            branch = "T0" if n >= 4 else ("T0-" if q < 0 else "T0+")
            rows.append(
                (str(n), str(j), str(q), branch,
                 frac_str(rec), frac_str(closed),
                 "true" if equal else "false")
            )
        if n == 3:
            hi, lo = table.value(j, 2), table.value(j, -2)
            signs_ok = signs_ok and hi * lo < 0

    checks = [
        CheckResult("recursion-equals-closed-form",
                    "PASS" if all_equal else "FAIL", 0.0, 0.0),
    ]
    if n == 3:
        checks.append(
            CheckResult("opposite-signs-at-q-plus-minus-2",
                        "PASS" if signs_ok else "FAIL", 0.0, 0.0)
        )
    result = ResultTable(
        columns=("n", "j", "q", "branch", "recursion_value",
                 "closed_form_value", "equal"),
        rows=tuple(rows),
    )
    return ReportEnvelope("spectrum", params, result, tuple(checks))


# ---------------------------------------------------------------------------
# signs
# ---------------------------------------------------------------------------


_EXPECTED_PATTERN = {
    symbols.Functional.DET_L: "(-1)^(k+1) det L is a local maximum",
    symbols.Functional.ZETA0_L: "(-1)^(k+1) zeta_L(0) is a local maximum",
    symbols.Functional.DET_D2: "(-1)^(k) det D2 is a local maximum",
    symbols.Functional.ZETA0_D2: "(-1)^(k) zeta_D2(0) is a local maximum",
}


def cmd_signs(n_max: int) -> ReportEnvelope:
    params = {"nmax": str(n_max)}
    rows: list[tuple[str, ...]] = []
    all_agree = True
    applicable = 0
    for n in range(3, n_max + 1):
        for functional in symbols.Functional:
            try:
                st = symbols.extremal_classification(functional, n)
            except ParityError:
                rows.append((str(n), functional.name, "-", "-", "-", "-",
                             "NOT-APPLICABLE"))
                continue
            applicable += 1
            agree = st.pattern == _EXPECTED_PATTERN[functional]
            all_agree = all_agree and agree
            rows.append(
                (str(n), functional.name, str(st.k),
                 f"{st.c_sign:+d}", f"{st.max_sign:+d}", st.pattern,
                 "PASS" if agree else "FAIL")
            )
    params["applicable_rows"] = str(applicable)
    result = ResultTable(
        columns=("n", "functional", "k", "c_sign", "max_sign",
                 "pattern", "status"),
        rows=tuple(rows),
    )
    checks = (
        CheckResult("printed-pattern-agreement",
                    "PASS" if all_agree else "FAIL", 0.0, 0.0),
    )
    return ReportEnvelope("signs", params, result, checks)


# ---------------------------------------------------------------------------
# traces
# ---------------------------------------------------------------------------


_FROZEN_TRACES = {
    (greens.TraceKind.L2, 1): Fraction(3, 128),
    (greens.TraceKind.L2, 2): Fraction(-5, 2048),
    (greens.TraceKind.D2, 1): Fraction(-1, 4),
    (greens.TraceKind.D2, 2): Fraction(3, 16),
}


def cmd_traces(k_max: int) -> ReportEnvelope:
    params = {"kmax": str(k_max)}
    rows: list[tuple[str, ...]] = []
    signs_ok = True
    frozen_ok = True
    for kind, label, fn in (
        (greens.TraceKind.L2, "L^2", greens.kv_trace_L2),
        (greens.TraceKind.D2, "D^2", greens.kv_trace_D2),
    ):
        for k in range(1, k_max + 1):
            coeff, pi_exp = fn(k)
            n = 2 * k + 1
            signs_ok = signs_ok and (
                (1 if coeff > 0 else -1) == greens.trace_sign_expected(kind, k)
            )
            frozen = _FROZEN_TRACES.get((kind, k))
            if frozen is not None:
                frozen_ok = frozen_ok and coeff == frozen
            rows.append(
                (label, str(k), str(n), frac_str(coeff), str(pi_exp),
                 repr(float(coeff) * math.pi**pi_exp))
            )
    result = ResultTable(
        columns=("operator", "k", "dim", "coefficient", "pi_exponent",
                 "float_value"),
        rows=tuple(rows),
    )
    checks = (
        CheckResult("alternating-sign-pattern",
                    "PASS" if signs_ok else "FAIL", 0.0, 0.0),
        CheckResult("frozen-values-k-le-2",
                    "PASS" if frozen_ok else "FAIL", 0.0, 0.0),
    )
    return ReportEnvelope("traces", params, result, checks)


# ---------------------------------------------------------------------------
# greens
# ---------------------------------------------------------------------------


def _r_grid() -> list[float]:
    return [round(0.3 + 0.1 * i, 10) for i in range(28)]


def cmd_greens(n: int, profile: str, tol_ode: float, tol_quad: float) -> ReportEnvelope:
    params = {"dim": str(n), "profile": profile,
              "tol_ode": repr(tol_ode), "tol_quad": repr(tol_quad)}
    rows: list[tuple[str, ...]] = []
    checks: list[CheckResult] = []
    rs = _r_grid()
    if profile in ("L", "L2"):
        value_fn = greens.green_L if profile == "L" else greens.green_L2
        res_fn = greens.ode_residual_L if profile == "L" else greens.ode_residual_L2
        worst = 0.0
        for r in rs:
            val = value_fn(n, r)
            res = res_fn(n, [r])
            worst = max(worst, res)
            rows.append((f"{r:.2f}", repr(val), _fmt_res(res)))
        result = ResultTable(columns=("r", "value", "ode_residual"),
                             rows=tuple(rows))
        checks.append(check_against("ode-residual-max", worst, tol_ode))
        if profile == "L2":
            checks.append(_tau_check(n - 3, 2, tol_quad))
    elif profile == "D2":
        worst = 0.0
        for r in rs:
            x = greens.chart_radius(r)
            val = greens.green_D2(n, x)
            other = greens.green_D2_quadrature(n, x)
            res = abs(val - other) / abs(val)
            worst = max(worst, res)
            rows.append((f"{r:.2f}", repr(x), repr(val), _fmt_res(res)))
        result = ResultTable(columns=("r", "x", "value", "route_residual"),
                             rows=tuple(rows))
        checks.append(check_against("dual-route-max", worst, 1e-9))
        checks.append(_tau_check(n - 1, 1, tol_quad))
    else:
        raise ValueError(f"unknown profile {profile!r}")
    return ReportEnvelope("greens", params, result, tuple(checks))


def _tau_check(a: int, p: int, tol: float) -> CheckResult:
    exact = greens.tau_tail_exact(a, p)
    worst = 0.0
    for x in (0.25, 0.6, 1.0, 1.8, 3.0):
        closed = exact.value(x)
        quad = greens.tau_tail_quadrature(a, p, x)
        worst = max(worst, abs(closed - quad) / max(1.0, abs(closed)))
    return check_against("tau-quadrature-vs-closed-form", worst, tol)


# ---------------------------------------------------------------------------
# qsymbol
# ---------------------------------------------------------------------------


def _random_rational_tt(rng: np.random.Generator, n: int):
    """Rational covector and trace-free transverse symmetric matrix."""
    while True:
        xi = tuple(Fraction(int(v)) for v in rng.integers(-3, 4, size=n))
        if any(xi):
            break
    raw = rng.integers(-4, 5, size=(n, n))
    sym = [[Fraction(int(raw[i][j] + raw[j][i])) for j in range(n)]
           for i in range(n)]
    return xi, qcurv.project_tt(xi, tuple(tuple(row) for row in sym))


def cmd_qsymbol(n: int, seed: int) -> ReportEnvelope:
    params = {"dim": str(n), "seed": str(seed), "trials": "5"}
    rng = np.random.default_rng(seed)
    ok = True
    for _ in range(5):
        xi, k = _random_rational_tt(rng, n)
        got = qcurv.q_hessian_symbol(n, xi, k)
        want = qcurv.q_hessian_expected(n, xi, k)
        ok = ok and got == want
    status = "PASS" if ok else "FAIL"
    notes = (f"sigma_{n}(H) = -|xi|^{n}/4 * Id : {status} (exact)",)
    checks = (CheckResult("q-symbol-identity", status, 0.0, 0.0),)
    return ReportEnvelope("qsymbol", params, notes, checks)


# ---------------------------------------------------------------------------
# verify suites
# ---------------------------------------------------------------------------


def _suite_spectrum(seed: int, tols: dict[str, float]) -> list[CheckResult]:
    checks = []
    ok = all(
        spectrum_generate(n, 40, t0_eigenvalue(KType(n, 0, 2))).value(j, q)
        == t0_eigenvalue(KType(n, j, q))
        for n in range(4, 9) for j in range(41) for q in (0, 1, 2)
    )
    checks.append(CheckResult("recursion-equals-closed-form-n4-8",
                              "PASS" if ok else "FAIL", 0.0, 0.0))
    t3 = spectrum_generate3(40, t0_eigenvalue(KType(3, 0, 2)),
                            t0_eigenvalue(KType(3, 0, -2)))
    ok3 = all(t3.value(j, q) == t0_eigenvalue(KType(3, j, q))
              for j in range(41) for q in (-2, -1, 0, 1, 2))
    sign3 = all(t3.value(j, 2) * t3.value(j, -2) < 0 for j in range(41))
    checks.append(CheckResult("five-branch-recursion-n3",
                              "PASS" if ok3 else "FAIL", 0.0, 0.0))
    checks.append(CheckResult("opposite-signs-n3",
                              "PASS" if sign3 else "FAIL", 0.0, 0.0))
    return checks


def _suite_greens(seed: int, tols: dict[str, float]) -> list[CheckResult]:
    checks = []
    rs = _r_grid()
    for n in (3, 5, 7):
        checks.append(check_against(
            f"ode-residual-L-n{n}", greens.ode_residual_L(n, rs),
            tols["tol_ode"]))
        checks.append(check_against(
            f"ode-residual-L2-n{n}", greens.ode_residual_L2(n, rs),
            tols["tol_ode"]))
        worst = max(
            abs(greens.green_D2(n, greens.chart_radius(r))
                - greens.green_D2_quadrature(n, greens.chart_radius(r)))
            / abs(greens.green_D2(n, greens.chart_radius(r)))
            for r in rs
        )
        checks.append(check_against(f"dual-route-D2-n{n}", worst, 1e-9))
        tau = _tau_check(n - 3, 2, tols["tol_quad"])
        checks.append(CheckResult(f"tau-quad-L2-n{n}", tau.status,
                                  tau.residual, tau.tolerance))
    frozen_ok = all(
        fn(k)[0] == _FROZEN_TRACES[(kind, k)]
        for (kind, k), fn in (
            ((greens.TraceKind.L2, 1), greens.kv_trace_L2),
            ((greens.TraceKind.L2, 2), greens.kv_trace_L2),
            ((greens.TraceKind.D2, 1), greens.kv_trace_D2),
            ((greens.TraceKind.D2, 2), greens.kv_trace_D2),
        )
    )
    checks.append(CheckResult("frozen-trace-values",
                              "PASS" if frozen_ok else "FAIL", 0.0, 0.0))
    return checks


def _suite_symbols(seed: int, tols: dict[str, float]) -> list[CheckResult]:
    checks = []
    worst = 0.0
    for n in range(3, 14):
        for mode in symbols.PrefactorMode:
            try:
                got, _ = symbols.gamma_prefactor(n, mode)
            except ParityError:
                continue
            oracle = symbols.gamma_prefactor_oracle(n, mode)
            worst = max(worst, abs(got - oracle) / abs(oracle))
    checks.append(check_against("prefactor-vs-oracle", worst, 1e-12))
    rich = symbols.zeta0_prefactor_richardson(4)
    exact4 = symbols.gamma_prefactor(4, symbols.PrefactorMode.ZETA0_LIMIT_AT_ZERO)[0]
    checks.append(check_against("zeta0-richardson-n4",
                                abs(rich - exact4) / abs(exact4), 1e-6))
    semi_ok = True
    null_worst = 0.0
    for n in range(3, 14):
        lcof = symbols.bracket_L(n, 0)
        dcof = symbols.bracket_D2(n, 0)
        semi_ok = semi_ok and (
            symbols.bracket_definiteness(lcof, n - 1)
            is symbols.FormDefiniteness.POS_SEMIDEF
        )
        if n % 2 == 1:
            semi_ok = semi_ok and (
                symbols.bracket_definiteness(dcof, n - 1)
                is symbols.FormDefiniteness.NEG_SEMIDEF
            )
        xi = np.zeros(n)
        xi[0] = 1.0
        proj = symbols.point_projector(xi)
        p = symbols.PointData(n=n, k=proj, xi=xi)
        null_worst = max(null_worst,
                         abs(symbols.evaluate_form(lcof, 1.0, p, 0.0)))
    checks.append(CheckResult("semidefinite-at-s0",
                              "PASS" if semi_ok else "FAIL", 0.0, 0.0))
    checks.append(check_against("null-ray-value", null_worst, 1e-12))
    return checks


def _suite_qcurv(seed: int, tols: dict[str, float]) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    ok = True
    for n in (4, 6, 8):
        for _ in range(25):
            xi, k = _random_rational_tt(rng, n)
            ok = ok and (qcurv.q_hessian_symbol(n, xi, k)
                         == qcurv.q_hessian_expected(n, xi, k))
    return [CheckResult("q-symbol-identity-n468",
                        "PASS" if ok else "FAIL", 0.0, 0.0)]


def _suite_confgroup(n: int, seed: int, tols: dict[str, float]) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    tol_conf = tols["tol_conf"]
    elements = [cg.random_moebius(rng, n, 1.0) for _ in range(4)]
    points = rng.normal(size=(10, n + 1))
    points /= np.linalg.norm(points, axis=1, keepdims=True)

    lorentz = max(cg.lorentz_form_residual(a) for a in elements)
    conf = max(cg.conformality_residual(a, y) for a in elements for y in points)
    cocycle = max(
        cg.cocycle_residual(a, b, y)
        for a, b in zip(elements[:2], elements[2:]) for y in points
    )
    grid = cg.sphere_grid(n, 40)
    pair_worst = 0.0
    for _ in range(2):
        h = cg.random_band_limited_field(rng, n)
        k = cg.random_band_limited_field(rng, n)
        a = cg.random_moebius(rng, n, 1.0)
        base = cg.pairing(h, k, grid)
        res = cg.check_pairing_invariance(h, k, a, grid)
        pair_worst = max(pair_worst, res / (1.0 + abs(base)))
    cov_worst = 0.0
    for _ in range(2):
        const = rng.normal(size=n)
        lin = rng.normal(size=(n, n))

        def vec_field(x, const=const, lin=lin):
            return const + lin @ x + 0.3 * x * float(x @ x)

        phi = cg.random_chart_map(rng, n, max_log_scale=1.0)
        pts = rng.normal(size=(50, n)) * 0.7
        cov_worst = max(cov_worst, cg.check_ahlfors_covariance(vec_field, phi, pts))
    ker_worst = 0.0
    chart_pts = rng.normal(size=(10, n)) * 0.8
    for fld in cg.sphere_conformal_fields(n):
        for x in chart_pts:
            ker_worst = max(ker_worst,
                            float(np.max(np.abs(cg.ahlfors_chart(fld, x)))))
    return [
        check_against("lorentz-form", lorentz, 1e-12),
        check_against("conformality", conf, 1e-7),
        check_against("cocycle", cocycle, 1e-7),
        check_against("pairing-invariance", pair_worst, tol_conf),
        check_against("ahlfors-covariance", cov_worst, tol_conf),
        check_against("kernel-fields", ker_worst, 1e-8),
    ]


_SUITES = {
    "spectrum": _suite_spectrum,
    "greens": _suite_greens,
    "symbols": _suite_symbols,
    "qcurv": _suite_qcurv,
    "confgroup": None,  # needs dim; dispatched in cmd_verify
}


def cmd_verify(suite: str, dim: int, seed: int, tols: dict[str, float]) -> ReportEnvelope:
    params = {"suite": suite, "seed": str(seed)}
    if suite == "confgroup":
        params["dim"] = str(dim)
        checks = _suite_confgroup(dim, seed, tols)
    else:
        checks = _SUITES[suite](seed, tols)
    notes = tuple(
        f"{c.name}: {c.status} (residual {_fmt_res(c.residual)})" for c in checks
    )
    return ReportEnvelope("verify", params, notes, tuple(checks))


# ---------------------------------------------------------------------------
# Argument parsing and entry point.
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spherehess",
        description="Verification toolkit for conformal Hessians on round spheres.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("table", "csv", "json"),
                       default="table")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol-ode", type=float, default=1e-8)
        p.add_argument("--tol-quad", type=float, default=1e-10)
        p.add_argument("--tol-conf", type=float, default=1e-6)

    p = sub.add_parser("spectrum", help="Hessian eigenvalue table")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--jmax", type=int, default=10)
    add_common(p)

    p = sub.add_parser("signs", help="extremal classification per dimension")
    p.add_argument("--nmax", type=int, default=9)
    add_common(p)

    p = sub.add_parser("traces", help="regularized trace table")
    p.add_argument("--kmax", type=int, default=2)
    add_common(p)

    p = sub.add_parser("greens", help="radial Green's function profiles")
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--profile", choices=("L", "L2", "D2"), default="L")
    add_common(p)

    p = sub.add_parser("qsymbol", help="curvature Hessian symbol identity")
    p.add_argument("--dim", type=int, required=True)
    add_common(p)

    p = sub.add_parser("verify", help="run a named property suite")
    p.add_argument("--suite", choices=sorted(_SUITES), required=True)
    p.add_argument("--dim", type=int, default=2)
    add_common(p)

    return parser


def _dispatch(args: argparse.Namespace, parser: argparse.ArgumentParser) -> ReportEnvelope:
    tols = {"tol_ode": args.tol_ode, "tol_quad": args.tol_quad,
            "tol_conf": args.tol_conf}
    if args.command == "spectrum":
        if args.dim < 2:
            parser.error("--dim must be >= 2")
        if args.jmax < 0:
            parser.error("--jmax must be >= 0")
        return cmd_spectrum(args.dim, args.jmax)
    if args.command == "signs":
        if args.nmax < 3:
            parser.error("--nmax must be >= 3")
        return cmd_signs(args.nmax)
    if args.command == "traces":
        if args.kmax < 1:
            parser.error("--kmax must be >= 1")
        return cmd_traces(args.kmax)
    if args.command == "greens":
        if args.dim < 3 or args.dim % 2 == 0:
            parser.error("--dim must be odd and >= 3")
        return cmd_greens(args.dim, args.profile, args.tol_ode, args.tol_quad)
    if args.command == "qsymbol":
        if args.dim < 4 or args.dim % 2 == 1:
            parser.error("--dim must be even and >= 4")
        return cmd_qsymbol(args.dim, args.seed)
    if args.command == "verify":
        if args.suite == "confgroup" and args.dim not in (2, 3):
            parser.error("--dim must be 2 or 3 for the confgroup suite")
        return cmd_verify(args.suite, args.dim, args.seed, tols)
    parser.error(f"unknown command {args.command!r}")
    raise AssertionError("unreachable")


def console_main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        env = _dispatch(args, parser)
    except SphereHessError as exc:
        sys.stderr.write(f"spherehess: computation failed: {exc}\n")
        return 1
    sys.stdout.write(render_report(env, args.format))
    return 0 if env.all_pass else 1


if __name__ == "__main__":
    raise SystemExit(console_main())
