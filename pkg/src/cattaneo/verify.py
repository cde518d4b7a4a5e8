"""Table verification: computed roots against the tabulated branches."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from . import __version__, tables
from .atlas import INERTIAL_LABELS, NONINERTIAL_LABELS, RegionLabel, representative
from .config import fmt_real, thread_cap
from .spectrum import asymptotic_error, max_error_by_mu

TABLE_MUS = (1e4, 1e6, 1e8)
TABLE_TOL = 0.05
CONVERGED = 1e-9


@dataclass(frozen=True)
class RowResult:
    label: RegionLabel
    point: object
    errors: tuple  # worst relative branch error at each mu
    monotone: bool | None  # None: constant-only row, no trend check
    passed: bool

    def as_dict(self) -> dict:
        p = self.point
        return {
            "label": self.label.value,
            "alpha": str(p.alpha), "beta": str(p.beta),
            "gamma": None if p.gamma is None else str(p.gamma),
            "errors": [fmt_real(e) for e in self.errors],
            "monotone": self.monotone,
            "pass": self.passed,
        }


def non_increasing(errs) -> bool:
    return all(b <= a or b < CONVERGED for a, b in zip(errs, errs[1:]))


def verify_row(label: RegionLabel, mus=TABLE_MUS, tol: float = TABLE_TOL, errata: bool = True,
               overrides: dict | None = None) -> RowResult:
    point = representative(label)
    errs = max_error_by_mu(asymptotic_error(point, mus, region=label, errata=errata,
                                            overrides=overrides))
    seq = tuple(errs[float(m)] for m in mus)
    monotone = None if tables.constant_only(label) else non_increasing(seq)
    passed = seq[-1] <= tol and monotone is not False
    return RowResult(label, point, seq, monotone, passed)


@dataclass(frozen=True)
class TableReport:
    inertial: bool
    errata: bool
    mus: tuple
    tol: float
    rows: tuple

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def as_dict(self) -> dict:
        return {
            "tool": "cattaneo", "version": __version__, "command": "verify-tables",
            "table": "inertial" if self.inertial else "noninertial",
            "m": 1 if self.inertial else 0, "sigma": 2, "tau": 1,
            "errata": self.errata, "mu": [fmt_real(m) for m in self.mus],
            "tolerance": fmt_real(self.tol),
            "rows": [r.as_dict() for r in self.rows],
            "passed": sum(r.passed for r in self.rows), "total": len(self.rows),
        }

    def text(self) -> str:
        head = (f"# cattaneo {__version__} verify-tables\n"
                f"# table={'inertial' if self.inertial else 'noninertial'} m={1 if self.inertial else 0}"
                f" sigma=2 tau=1 errata={'on' if self.errata else 'off'}\n"
                f"# mu={','.join('%.0e' % m for m in self.mus)} tolerance={self.tol:g}"
                f" (worst relative branch error per mu)\n")
        cols = ["row", "alpha", "beta", "gamma"] + [f"err@{m:.0e}" for m in self.mus] + ["monotone", "status"]
        lines = ["  ".join(f"{c:>10}" for c in cols)]
        for r in self.rows:
            p = r.point
            cells = [r.label.value, str(p.alpha), str(p.beta), "-" if p.gamma is None else str(p.gamma)]
            cells += ["%.3e" % e for e in r.errors]
            cells += ["n/a" if r.monotone is None else ("yes" if r.monotone else "no"),
                      "PASS" if r.passed else "FAIL"]
            lines.append("  ".join(f"{c:>10}" for c in cells))
        n_ok = sum(r.passed for r in self.rows)
        return head + "\n".join(lines) + f"\nsummary: {n_ok}/{len(self.rows)} rows pass\n"


def verify_tables(inertial: bool = True, mus=TABLE_MUS, tol: float = TABLE_TOL, errata: bool = True,
                  overrides: dict | None = None) -> TableReport:
    """One representative per row (region centroid on a 1/8 lattice).

    ``overrides`` maps a label to ``{branch index: Branch}`` replacements.
    """
    labels = INERTIAL_LABELS if inertial else NONINERTIAL_LABELS
    overrides = overrides or {}

    def run(label):
        return verify_row(label, mus, tol, errata, overrides.get(label))

    with ThreadPoolExecutor(max_workers=thread_cap()) as pool:
        rows = tuple(pool.map(run, labels))
    return TableReport(inertial, errata, tuple(float(m) for m in mus), tol, rows)
