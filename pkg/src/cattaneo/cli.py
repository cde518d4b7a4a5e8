"""Command-line front end.

Exit codes: 0 success, 1 analysis failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

import numpy as np

from . import __version__, tables
from .atlas import (ATLAS_HEADER, DomainError, ParameterPoint, classify, decay_order,
                    sample_atlas, wellposed)
from .catalog import PRESET_NAMES, UnknownPreset, preset
from .config import (RunConfig, UsageError, csv_text, json_text, parse_modes, parse_range,
                     read_config_text, thread_cap, write_text)
from .linalg4 import NearSingularBlock
from .spectrum import (CrossCheckError, match_branches, modal_eigenvalues, predicted_roots)

SPECTRUM_HEADER = ("mu", "root_index", "re", "im", "branch", "pred_re", "pred_im", "err_re", "err_im")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _point_args(p: argparse.ArgumentParser, allow_preset: bool = True) -> None:
    g = p.add_argument_group("parameter point")
    g.add_argument("--alpha", type=str)
    g.add_argument("--beta", type=str)
    g.add_argument("--gamma", type=str)
    g.add_argument("--m", type=str, default="1")
    g.add_argument("--sigma", type=str, default="2")
    g.add_argument("--tau", type=str, default="1")
    g.add_argument("--point", type=str, help="shorthand alpha,beta[,gamma]")
    if allow_preset:
        g.add_argument("--preset", type=str, choices=PRESET_NAMES)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cattaneo", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"cattaneo {__version__}")
    parser.add_argument("--config", help="key = value file; command-line flags override it")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("classify", help="region label and predicted decay")
    _point_args(p, allow_preset=False)
    p.add_argument("--eps", type=str, default="0", help="boundary tolerance for float inputs")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("atlas-grid", help="label a regular grid of the exponent cube/square")
    p.add_argument("--resolution", type=int, default=9)
    p.add_argument("--gamma", type=str)
    p.add_argument("--noninertial", action="store_true", help="starred atlas (m = 0)")
    p.add_argument("--eps", type=str, default="0")
    p.add_argument("--out", "--csv", dest="out")

    p = sub.add_parser("spectrum", help="modal eigenvalues against the tabulated branches")
    _point_args(p)
    p.add_argument("--mu-range", default="1e2:1e10:log:25")
    p.add_argument("--no-errata", action="store_true")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", "--csv", dest="out")

    p = sub.add_parser("resolvent", help="sup over modes of the resolvent norm on the imaginary axis")
    _point_args(p)
    p.add_argument("--lambda-range", default="1e1:1e5:log:40")
    p.add_argument("--modes", default=None, help="n4:400 | c*n^p:count | list:v1,v2,...")
    p.add_argument("--envelope", choices=("continuous", "discrete"), default="continuous")
    p.add_argument("--sampling", choices=("critical", "grid"), default="critical",
                   help="critical: frequencies on the critical branch inside the range")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", "--csv", dest="out")

    p = sub.add_parser("semigroup", help="semigroup norm or energy time series")
    _point_args(p)
    p.add_argument("--t-range", default="1:1e3:log:30")
    p.add_argument("--modes", default=None)
    p.add_argument("--quantity", choices=("norm", "energy"), default="norm")
    p.add_argument("--seed", type=int, default=0, help="initial data for energy traces")
    p.add_argument("--window", default=None, help="fit window lo:hi (default: whole range)")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", "--csv", dest="out")

    p = sub.add_parser("preset", help="list or show the example presets")
    p.add_argument("action", choices=("list", "show"))
    p.add_argument("name", nargs="?")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("verify-tables", help="check the tabulated branches row by row")
    p.add_argument("--m", choices=("1", "0"), default="1")
    p.add_argument("--no-errata", action="store_true")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out")

    p = sub.add_parser("acceptance", help="run the acceptance suite")
    p.add_argument("--only", default=None, help="comma-separated criterion numbers")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out")
    return parser


def _subparser(parser: argparse.ArgumentParser, command: str) -> argparse.ArgumentParser:
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            if command not in action.choices:
                raise UsageError(f"unknown command {command!r}")
            return action.choices[command]
    raise AssertionError("parser has no subcommands")


def _bool(key: str, text: str) -> bool:
    low = text.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"config key {key!r}: expected a boolean, got {text!r}")


def parse_config(argv: Sequence[str], config_text: str | None = None) -> RunConfig:
    """Parse command-line arguments, optionally layered over a config file.

    The file may name the command (``command = spectrum``); every other key
    must be an option of that command.  Flags given on the command line win.
    """
    parser = build_parser()
    argv = list(argv)
    if config_text is None:
        for i, tok in enumerate(argv):
            if tok == "--config" and i + 1 < len(argv):
                path = argv[i + 1]
                del argv[i:i + 2]
                break
            if tok.startswith("--config="):
                path = tok.split("=", 1)[1]
                del argv[i]
                break
        else:
            path = None
        if path is not None:
            try:
                with open(path, encoding="utf-8") as fh:
                    config_text = fh.read()
            except OSError as exc:
                raise UsageError(f"config: cannot read {path!r}: {exc.strerror}") from None
    values = read_config_text(config_text) if config_text else {}

    commands = set(_subparser_names(parser))
    command = next((tok for tok in argv if tok in commands), None)
    file_command = values.pop("command", None)
    if command is None:
        if file_command is None:
            raise UsageError("no command given (one of: " + ", ".join(sorted(commands)) + ")")
        command = file_command
        argv = [command] + argv
    sub = _subparser(parser, command)
    by_dest = {a.dest: a for a in sub._actions if a.dest != "help"}
    defaults = {}
    for key, text in values.items():
        action = by_dest.get(key)
        if action is None or not action.option_strings:
            raise UsageError(f"config key {key!r} is not an option of {command!r}")
        if isinstance(action, argparse._StoreTrueAction):
            defaults[key] = _bool(key, text)
        else:
            try:
                defaults[key] = action.type(text) if action.type else text
            except ValueError:
                raise UsageError(f"config key {key!r}: invalid value {text!r}") from None
            if action.choices is not None and defaults[key] not in action.choices:
                raise UsageError(f"config key {key!r}: {text!r} not in {sorted(action.choices)}")
    sub.set_defaults(**defaults)
    ns = parser.parse_args(argv)
    return RunConfig(ns.command, {k: v for k, v in vars(ns).items() if k not in ("command", "config")})


def _subparser_names(parser) -> list[str]:
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return list(action.choices)
    return []


# ---------------------------------------------------------------------------

def resolve_point(opts: dict) -> tuple[ParameterPoint, object]:
    """Point from ``--preset``, ``--point`` or the individual flags."""
    name = opts.get("preset")
    if name:
        pre = preset(name)
        return pre.point, pre
    alpha, beta, gamma = opts.get("alpha"), opts.get("beta"), opts.get("gamma")
    if opts.get("point"):
        parts = [s.strip() for s in opts["point"].split(",")]
        if len(parts) not in (2, 3):
            raise UsageError("--point: expected alpha,beta[,gamma]")
        alpha, beta = parts[0], parts[1]
        gamma = parts[2] if len(parts) == 3 else gamma
    if alpha is None:
        raise UsageError("missing required option --alpha")
    if beta is None:
        raise UsageError("missing required option --beta")
    try:
        return ParameterPoint.make(alpha, beta, gamma, m=opts["m"], sigma=opts["sigma"],
                                   tau=opts["tau"]), None
    except (DomainError, ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from None


def _modes_for(opts: dict, pre) -> object:
    if opts.get("modes"):
        return parse_modes(opts["modes"])
    if pre is not None:
        return pre.sequence
    return parse_modes("n4:400")


def cmd_classify(opts, out, err) -> int:
    point, _ = resolve_point(opts)
    verdict = decay_order(point, opts["eps"])
    payload = {"point": point.as_dict(), "region": verdict.region.value,
               "verdict": verdict.as_dict(), "wellposed": wellposed(point)}
    if opts["json"]:
        out.write(json_text(payload))
    else:
        order = "" if verdict.order is None else f" order={verdict.order}"
        out.write(f"region={verdict.region.value} kind={verdict.kind.value}{order}"
                  f" wellposed={str(payload['wellposed']).lower()}\n")
    return 0


def cmd_atlas_grid(opts, out, err) -> int:
    if opts["resolution"] < 2:
        raise UsageError("--resolution must be >= 2")
    rows = list(sample_atlas(opts["resolution"], gamma=opts["gamma"], m_flag=not opts["noninertial"],
                             eps=opts["eps"]))
    write_text(opts["out"], csv_text(ATLAS_HEADER, (r.csv_fields() for r in rows)), out)
    unclassified = sum(r.label.value == "Unclassified" for r in rows)
    err.write(f"{len(rows)} grid points, {unclassified} unclassified\n")
    return 0


def _spectrum_rows(point, mu, region, errata) -> list:
    roots = modal_eigenvalues(point, mu).roots
    try:
        pred = predicted_roots(region, point, mu, errata=errata)
    except (tables.UnsupportedRegion, KeyError):
        return [(mu, i, z.real, z.imag, "", None, None, None, None) for i, z in enumerate(roots)]
    assign = match_branches(roots, pred.values)
    rows = [None] * len(roots)
    for j, i in enumerate(assign):
        z, p = roots[i], pred.values[j]
        err_re = None if p.real == 0 else abs(z.real - p.real) / abs(p.real)
        err_im = None if p.imag == 0 else abs(z.imag - p.imag) / abs(p.imag)
        rows[i] = (mu, i, z.real, z.imag, f"{region.value}:{pred.branch_of[j]}", p.real, p.imag,
                   err_re, err_im)
    return rows


def cmd_spectrum(opts, out, err) -> int:
    point, _ = resolve_point(opts)
    mus = parse_range(opts["mu_range"], "mu-range")
    region = classify(point)
    with ThreadPoolExecutor(max_workers=thread_cap()) as pool:
        chunks = list(pool.map(lambda mu: _spectrum_rows(point, float(mu), region,
                                                         not opts["no_errata"]), mus))
    rows = [r for c in chunks for r in c]
    if opts["json"]:
        payload = {"point": point.as_dict(), "region": region.value,
                   "rows": [dict(zip(SPECTRUM_HEADER, r)) for r in rows]}
        write_text(opts["out"], json_text(payload), out)
    else:
        write_text(opts["out"], csv_text(SPECTRUM_HEADER, rows), out)
    return 0


def cmd_resolvent(opts, out, err) -> int:
    from .resolvent import critical_frequencies, resolvent_sup
    from .spectrum import loglog_slope

    point, pre = resolve_point(opts)
    lams = parse_range(opts["lambda_range"], "lambda-range")
    modes = _modes_for(opts, pre)
    if opts["sampling"] == "critical":
        lams = critical_frequencies(point, float(lams[0]), float(lams[-1]), len(lams))
    with ThreadPoolExecutor(max_workers=thread_cap()) as pool:
        samples = list(pool.map(lambda lam: resolvent_sup(point, float(lam), modes, opts["envelope"]),
                                lams))
    rows = [(s.lam, s.norm, s.argmax_mu) for s in samples]
    mu_top = float(np.max(modes.values()))
    clipped = sum(s.argmax_mu >= mu_top for s in samples)
    if clipped:
        err.write(f"warning: {clipped} frequencies peak at the last mode (mu={mu_top:.3g});"
                  " the supremum is truncated, increase --modes\n")
    slope = loglog_slope([s.lam for s in samples], [s.norm for s in samples])[0] if len(samples) >= 3 else None
    if opts["json"]:
        payload = {"point": point.as_dict(), "envelope": opts["envelope"], "sampling": opts["sampling"],
                   "slope": slope, "rows": [dict(zip(("lambda", "norm", "argmax_mu"), r)) for r in rows]}
        write_text(opts["out"], json_text(payload), out)
    else:
        write_text(opts["out"], csv_text(("lambda", "norm", "argmax_mu"), rows), out)
    if slope is not None:
        err.write(f"log-log growth slope {slope:.6g} over {len(samples)} frequencies\n")
    return 0


def cmd_semigroup(opts, out, err) -> int:
    from .acceptance import unit_energy_modes
    from .semigroup import argmax_window, decay_fit, energy_trace, norm_series

    point, pre = resolve_point(opts)
    times = parse_range(opts["t_range"], "t-range")
    modes = _modes_for(opts, pre)
    window = None
    if opts["window"]:
        try:
            lo, hi = (float(x) for x in opts["window"].split(":"))
        except ValueError:
            raise UsageError("--window: expected lo:hi") from None
        window = (lo, hi)
    payload = {"point": point.as_dict(), "modes": modes.describe()}
    if opts["quantity"] == "norm":
        samples = norm_series(point, times, modes)
        header = ("t", "norm", "argmax_mode")
        rows = [(s.t, s.norm, s.argmax_mode) for s in samples]
        values = [s.norm for s in samples]
        interior = argmax_window(samples, len(modes))
        payload["certified_window"] = list(interior) if interior else None
    else:
        data = unit_energy_modes(point, modes.values(), np.random.default_rng(opts["seed"]))
        trace = energy_trace(point, data, times)
        header = ("t", "energy", "q_norm")
        rows = list(zip(trace.times, trace.energies, trace.q_norms))
        values = list(trace.energies)
        payload["energy_max_rise"] = trace.monotone_violation()
    try:
        fit = decay_fit(times, values, window)
        payload["fit"] = {"slope": fit.slope, "intercept": fit.intercept,
                          "prefers_exponential": fit.prefers_exponential}
        err.write(f"log-log slope {fit.slope:.6g}"
                  f"{' (exponential fit preferred)' if fit.prefers_exponential else ''}\n")
    except ValueError as exc:
        payload["fit"] = None
        err.write(f"no fit: {exc}\n")
    if opts["json"]:
        payload["rows"] = [dict(zip(header, r)) for r in rows]
        write_text(opts["out"], json_text(payload), out)
    else:
        write_text(opts["out"], csv_text(header, rows), out)
    return 0


def cmd_preset(opts, out, err) -> int:
    if opts["action"] == "list":
        if opts["json"]:
            out.write(json_text([preset(n).as_dict() for n in PRESET_NAMES]))
        else:
            for n in PRESET_NAMES:
                p = preset(n)
                out.write(f"{n:12s} {p.expected_verdict.region.value:5s} k={p.expected_verdict.order}"
                          f"  {p.description}\n")
        return 0
    if not opts["name"]:
        raise UsageError("preset show: missing preset name")
    try:
        p = preset(opts["name"])
    except UnknownPreset as exc:
        raise UsageError(str(exc.args[0])) from None
    if opts["json"]:
        out.write(json_text(p.as_dict()))
    else:
        d = p.as_dict()
        out.write(f"name: {d['name']}\ndescription: {d['description']}\n")
        out.write("point: " + ", ".join(f"{k}={v}" for k, v in d["point"].items() if v is not None) + "\n")
        out.write(f"modes: {d['sequence']}\nverdict: {d['verdict']['kind']} region={d['verdict']['region']}"
                  f" order={d['verdict']['order']}\n")
    return 0


def cmd_verify_tables(opts, out, err) -> int:
    from .verify import verify_tables

    rep = verify_tables(inertial=opts["m"] == "1", errata=not opts["no_errata"])
    write_text(opts["out"], json_text(rep.as_dict()) if opts["json"] else rep.text(), out)
    return 0 if rep.passed else 1


def cmd_acceptance(opts, out, err) -> int:
    from .acceptance import run_all_acceptance

    only = None
    if opts["only"]:
        try:
            only = {int(x) for x in opts["only"].split(",") if x.strip()}
        except ValueError:
            raise UsageError("--only: expected comma-separated integers") from None
    rep = run_all_acceptance(only, progress=lambda line: (err.write(line + "\n"), err.flush()))
    write_text(opts["out"], json_text(rep.as_dict()) if opts["json"] else rep.text(), out)
    return 0 if rep.passed else 1


COMMANDS = {
    "classify": cmd_classify, "atlas-grid": cmd_atlas_grid, "spectrum": cmd_spectrum,
    "resolvent": cmd_resolvent, "semigroup": cmd_semigroup, "preset": cmd_preset,
    "verify-tables": cmd_verify_tables, "acceptance": cmd_acceptance,
}


def main(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
        return COMMANDS[cfg.command](cfg.options, out, err)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return 2
    except DomainError as exc:
        err.write(f"usage error: {exc}\n")
        return 2
    except (NearSingularBlock, CrossCheckError, ArithmeticError, ValueError, RuntimeError) as exc:
        err.write(f"analysis failed: {type(exc).__name__}: {exc}\n")
        return 1
