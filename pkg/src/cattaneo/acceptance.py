"""The acceptance suite: measurements plus pass/fail verdicts.

Each ``measure_*`` function returns a dict of metrics; ``CRITERIA`` pairs it
with the tolerance check.  ``run_all_acceptance`` runs everything and renders a
report (text or JSON).
"""

from __future__ import annotations

import io
import os
import tempfile
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import __version__
from .atlas import ParameterPoint, RegionLabel, decay_order, representative
from .catalog import mu_sequence, preset
from .quartic import QuarticCoeffs, companion_roots, match_roots, solve_quartic
from .resolvent import growth_exponent
from .semigroup import (ModalState, decay_fit, dissipation_residual, energy_trace,
                        norm_series)
from .spectrum import modal_eigenvalues, optimality_exponent
from .tables import p234_constants
from .verify import verify_tables

SEED = 20240611


# -- 1 ----------------------------------------------------------------------

RATE_GOLDEN = (
    ((0, 1, Fraction(1, 2), 1), Fraction(1, 6)),
    ((Fraction(1, 2), 0, Fraction(1, 2), 1), Fraction(1, 2)),
    ((1, 1, Fraction(1, 2), 1), Fraction(3, 2)),
    ((0, 1, None, 0), Fraction(1, 2)),
    ((Fraction(1, 2), 0, None, 0), Fraction(1, 2)),
    ((1, 1, None, 0), Fraction(1)),
)


def measure_rates() -> dict:
    got = []
    for (a, b, g, m), k in RATE_GOLDEN:
        v = decay_order(ParameterPoint.make(a, b, g, m=m))
        got.append({"point": [str(a), str(b), None if g is None else str(g), m],
                    "expected": str(k), "got": None if v.order is None else str(v.order),
                    "exact": v.order == k})
    return {"cases": got, "mismatches": sum(not c["exact"] for c in got)}


# -- 2, 3 -------------------------------------------------------------------

def measure_table(inertial: bool) -> dict:
    rep = verify_tables(inertial)
    return {"total": len(rep.rows), "passed": sum(r.passed for r in rep.rows), "tolerance": rep.tol,
            "failed": [r.label.value for r in rep.rows if not r.passed],
            "worst_at_1e8": max(r.errors[-1] for r in rep.rows)}


# -- 4 ----------------------------------------------------------------------

P234_PRINTED = (-24.0858, -5.52312, 0.608892)


def measure_p234() -> dict:
    j = p234_constants()
    return {"roots": list(j), "max_abs_dev": max(abs(a - b) for a, b in zip(j, P234_PRINTED))}


# -- 5 ----------------------------------------------------------------------

def random_wellposed_point(rng: np.random.Generator) -> ParameterPoint:
    while True:
        a, b = rng.uniform(0, 1, 2)
        if b >= 2 * a - 1:
            break
    g = 1.0 - rng.uniform(0, 1)  # in (0, 1]
    m = int(rng.integers(0, 2))
    return ParameterPoint.make(float(a), float(b), float(g), m=m,
                               sigma=float(rng.uniform(0.5, 4)), tau=float(rng.uniform(0.25, 4)))


def measure_strong_stability(n_points: int = 1000, n_mu: int = 20) -> dict:
    rng = np.random.default_rng(SEED)
    mus = np.geomspace(1.0, 1e10, n_mu)
    violations, worst = 0, -np.inf
    for _ in range(n_points):
        p = random_wellposed_point(rng)
        for mu in mus:
            re = max(z.real for z in modal_eigenvalues(p, mu).roots)
            worst = max(worst, re)
            violations += re >= 0
    return {"points": n_points, "mus": n_mu, "violations": int(violations), "max_real_part": float(worst)}


# -- 6 ----------------------------------------------------------------------

def measure_quartic_oracle(n_sets: int = 1000) -> dict:
    rng = np.random.default_rng(SEED + 6)
    dev = vieta = 0.0
    for kind in ("real", "complex"):
        for _ in range(n_sets):
            c = rng.standard_normal(5)
            if kind == "complex":
                c = c + 1j * rng.standard_normal(5)
            q = QuarticCoeffs(*c)
            roots = np.array(solve_quartic(q))
            for r, o in match_roots(roots, companion_roots(q)):
                dev = max(dev, abs(r - o) / abs(o))
            s_ref, p_ref = -c[1] / c[0], c[4] / c[0]
            vieta = max(vieta,
                        abs(roots.sum() - s_ref) / max(abs(s_ref), np.abs(roots).sum()),
                        abs(np.prod(roots) - p_ref) / abs(p_ref))
    return {"sets": 2 * n_sets, "max_rel_deviation": dev, "max_vieta_residual": vieta}


# -- 7 ----------------------------------------------------------------------

OPTIMALITY_CASES = (
    ("V1", "example2"), ("V2", RegionLabel.T2), ("V3", "example1"),
    ("V1*", "example3-m0"), ("V2*", "example1-m0"),
)


def _case_point(ref) -> ParameterPoint:
    return representative(ref) if isinstance(ref, RegionLabel) else preset(ref).point


def measure_optimality() -> dict:
    mus = np.geomspace(1e4, 1e10, 13)
    out = []
    for group, ref in OPTIMALITY_CASES:
        p = _case_point(ref)
        k = decay_order(p).order
        s = optimality_exponent(p, mus)
        target = -1 / float(k)
        out.append({"group": group, "case": ref.value if isinstance(ref, RegionLabel) else ref,
                    "slope": s, "target": target, "rel_err": abs(s - target) / abs(target)})
    return {"cases": out, "worst_rel_err": max(c["rel_err"] for c in out)}


# -- 8 ----------------------------------------------------------------------

RESOLVENT_CASES = (
    # name, point reference, lambda range, mode count
    ("example2", "example2", (1e1, 1e3, 25), 1000),
    ("example3-m0", "example3-m0", (1e2, 1e4, 25), 400),
    ("F13", RegionLabel.F13, (1e1, 1e3, 25), 1000),
)


def measure_resolvent() -> dict:
    out = []
    for name, ref, rng, count in RESOLVENT_CASES:
        p = _case_point(ref)
        fit = growth_exponent(p, rng, mu_sequence("power", p=4.0, count=count))
        v = decay_order(p)
        target = None if v.order is None else 1 / float(v.order)
        out.append({"case": name, "slope": fit.slope, "target": target, "samples": len(fit.samples),
                    "rel_err": None if target is None else abs(fit.slope - target) / target})
    return {"cases": out}


# -- 9 ----------------------------------------------------------------------

def unit_energy_modes(point: ParameterPoint, mus, rng: np.random.Generator) -> list:
    """Random complex data with total energy 1, spread over the given modes."""
    from .spectrum import modal_block

    x = rng.standard_normal((len(mus), 4)) + 1j * rng.standard_normal((len(mus), 4))
    x /= np.sqrt(0.5 * np.sum(np.abs(x) ** 2))
    return [(float(mu), ModalState.from_array(xi / np.sqrt(modal_block(point, mu).weights)))
            for mu, xi in zip(mus, x)]


def measure_semigroup() -> dict:
    pre = preset("example2", 400)
    times = np.geomspace(1.0, 1e6, 61)
    series = norm_series(pre.point, times, pre.sequence)
    window = (1e2, 1e4)
    inside = [s for s in series if window[0] <= s.t <= window[1]]
    n = len(pre.sequence)
    certified = all(2 <= s.argmax_mode <= n - 1 for s in inside)
    fit = decay_fit([s.t for s in series], [s.norm for s in series], window)

    rng = np.random.default_rng(SEED + 9)
    state = unit_energy_modes(pre.point, [16.0], rng)
    r1 = dissipation_residual(pre.point, state, 0.5, 1e-4)
    r2 = dissipation_residual(pre.point, state, 0.5, 1e-5)

    worst_rise = 0.0
    trace_times = np.concatenate([[0.0], np.geomspace(1e-3, 1e3, 80)])
    for name in ("example1", "example1-m0", "example2", "example2-m0", "example3", "example3-m0"):
        p = preset(name, 50)
        modes = unit_energy_modes(p.point, p.sequence.values(), rng)
        worst_rise = max(worst_rise, energy_trace(p.point, modes, trace_times).monotone_violation())
    return {"modes": n, "slope": fit.slope, "target": -0.5, "rel_err": abs(fit.slope + 0.5) / 0.5,
            "window": list(window), "argmax_modes": [s.argmax_mode for s in inside],
            "window_certified": certified, "dissipation_ratio": r1 / r2,
            "energy_max_rise": worst_rise}


# -- 10 ---------------------------------------------------------------------

def measure_determinism() -> dict:
    from .cli import main

    bodies = []
    with tempfile.TemporaryDirectory() as tmp:
        for i in range(2):
            path = os.path.join(tmp, f"report{i}.txt")
            code = main(["verify-tables", "--m", "1", "--out", path], stdout=io.StringIO())
            with open(path, "rb") as fh:
                bodies.append((code, fh.read()))
    return {"exit_codes": [b[0] for b in bodies], "identical": bodies[0][1] == bodies[1][1],
            "bytes": len(bodies[0][1])}


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Criterion:
    number: int
    title: str
    measure: Callable[[], dict]
    check: Callable[[dict], bool]
    time_limit: float | None = None


def _res_ok(m: dict) -> bool:
    ok = True
    for c in m["cases"]:
        if c["target"] is None:
            ok &= abs(c["slope"]) < 0.1
        else:
            ok &= c["rel_err"] <= 0.10
    return ok


CRITERIA = (
    Criterion(1, "rate golden tests (exact rationals)", measure_rates,
              lambda m: m["mismatches"] == 0, 1.0),
    Criterion(2, "inertial branch table (m=1)", lambda: measure_table(True),
              lambda m: not m["failed"], 10.0),
    Criterion(3, "non-inertial branch table (m=0)", lambda: measure_table(False),
              lambda m: not m["failed"], 5.0),
    Criterion(4, "P234 cubic constants", measure_p234, lambda m: m["max_abs_dev"] <= 1e-4),
    Criterion(5, "strong stability on random well-posed points", measure_strong_stability,
              lambda m: m["violations"] == 0),
    Criterion(6, "quartic solver vs companion oracle", measure_quartic_oracle,
              lambda m: m["max_rel_deviation"] < 1e-8 and m["max_vieta_residual"] < 1e-9),
    Criterion(7, "optimality exponent fits", measure_optimality,
              lambda m: m["worst_rel_err"] <= 0.03),
    Criterion(8, "resolvent growth exponents", measure_resolvent, _res_ok, 60.0),
    Criterion(9, "semigroup norm decay", measure_semigroup,
              lambda m: (m["rel_err"] <= 0.15 and m["window_certified"]
                         and abs(m["dissipation_ratio"] - 100) <= 20 and m["energy_max_rise"] <= 1e-9),
              120.0),
    Criterion(10, "verify-tables determinism", measure_determinism,
              lambda m: m["identical"] and m["exit_codes"] == [0, 0]),
)


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    seconds: float
    metrics: dict = field(default_factory=dict)
    error: str | None = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" ({self.error})" if self.error else ""
        return f"[{status}] {self.number:2d} {self.title} [{self.seconds:.2f}s]{extra}"


def run_criterion(c: Criterion) -> CriterionResult:
    t0 = time.perf_counter()
    try:
        metrics = c.measure()
        ok = bool(c.check(metrics))
        err = None
    except Exception as exc:  # a crash is a failed item, not a crashed suite
        metrics, ok, err = {}, False, f"{type(exc).__name__}: {exc}"
    dt = time.perf_counter() - t0
    if ok and c.time_limit is not None and dt > c.time_limit:
        ok, err = False, f"runtime {dt:.1f}s exceeds {c.time_limit:g}s"
    return CriterionResult(c.number, c.title, ok, dt, metrics, err)


@dataclass
class AcceptanceReport:
    results: list

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def as_dict(self) -> dict:
        return {"tool": "cattaneo", "version": __version__, "command": "acceptance",
                "criteria": [{"number": r.number, "title": r.title, "pass": r.passed,
                              "seconds": round(r.seconds, 3), "metrics": r.metrics, "error": r.error}
                             for r in self.results],
                "passed": sum(r.passed for r in self.results), "total": len(self.results)}

    def text(self) -> str:
        lines = [f"# cattaneo {__version__} acceptance"] + [r.line() for r in self.results]
        lines.append(f"summary: {sum(r.passed for r in self.results)}/{len(self.results)} criteria pass")
        return "\n".join(lines) + "\n"


def run_all_acceptance(only: set[int] | None = None, progress: Callable[[str], None] | None = None
                       ) -> AcceptanceReport:
    results = []
    for c in CRITERIA:
        if only and c.number not in only:
            continue
        r = run_criterion(c)
        if progress:
            progress(r.line())
        results.append(r)
    return AcceptanceReport(results)
