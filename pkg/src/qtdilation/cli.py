"""Command-line interface: ``qtdilation {dilation,sweep,oracle,estimate}``.

Exit codes: 0 success, 1 runtime failure (or a failed oracle row), 2 usage or
validation error. Any flag may also be given in a ``--config`` file of
``key = value`` lines (key spelled like the flag without dashes); flags win.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from dataclasses import asdict

from . import comparison, experiment, sweep, units
from .dilation import Scenario, dilation_result
from .errors import (
    ConfigurationError,
    DomainError,
    NoOptimumError,
    NullConditionError,
)

REQUIRED = object()
FORMATS = ("human", "csv", "jsonl")

_ANGLE = re.compile(r"^\s*([-+]?(?:\d+(?:\.\d*)?|\.\d+)?)\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$")


class UsageError(Exception):
    pass


def angle(text: str) -> float:
    """Float, or a multiple of pi such as ``pi/4``, ``3pi/4``, ``-0.5*pi``."""
    m = _ANGLE.match(text)
    if m is None:
        return float(text)
    coef = m.group(1)
    if coef in ("", "+"):
        value = math.pi
    elif coef == "-":
        value = -math.pi
    else:
        value = float(coef) * math.pi
    if m.group(2):
        value /= float(m.group(2))
    return value


def float_list(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.split(",") if x.strip())


def boolean(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


# (flag, type, default, help); default REQUIRED marks a mandatory value
_SCENARIO_OPTS = [
    ("theta", angle, REQUIRED, "branch weight angle (radians, or e.g. pi/4)"),
    ("phi", angle, 0.0, "relative phase (radians)"),
    ("p-a", float, REQUIRED, "first packet centre"),
    ("p-a-prime", float, REQUIRED, "second packet centre"),
    ("p-b", float, REQUIRED, "clock B packet centre"),
    ("delta", float, REQUIRED, "packet width"),
]

OPTIONS = {
    "dilation": _SCENARIO_OPTS
    + [
        ("tau-b", float, 1.0, "clock B reading in seconds"),
        ("units", str, "natural", "natural (p/mc) or si (kg m/s, needs --mass)"),
        ("mass", float, units.M_RB87, "particle mass in kg for --units si"),
    ],
    "sweep": [
        ("beta", float_list, sweep.DEFAULT_BETAS, "comma-separated momentum sums"),
        ("diff-min", float, 0.0, "smallest momentum difference"),
        ("diff-max", float, None, "largest momentum difference (default 50 delta)"),
        ("diff-step", float, None, "difference step (default delta/100)"),
        ("delta", float, 0.01, "packet width"),
        ("theta", angle, math.pi / 4, "branch weight angle"),
        ("phi", angle, 0.0, "relative phase"),
        ("p-b", float, 0.0, "clock B packet centre (enters K_classical only)"),
        ("output-dir", str, REQUIRED, "directory for sweep.csv and optimal.csv"),
        ("plot-script", boolean, False, "also write kquantum.gp for gnuplot"),
    ],
    "oracle": [
        ("theta", angle, math.pi / 4, "branch weight angle"),
        ("phi", angle, 0.0, "relative phase"),
        ("p-a", float, 0.04, "first packet centre"),
        ("p-a-prime", float, 0.06, "second packet centre"),
        ("p-b", float, 0.04, "clock B packet centre"),
        ("delta", float, 0.01, "packet width"),
        ("dim-a", int, 64, "clock A dimension"),
        ("dim-b", int, 64, "clock B dimension"),
        ("grid-points", int, 256, "momentum grid points per particle"),
        ("epsilon", float, None, "clock level spacing in mc^2 (default: top level at 1e-3)"),
        ("clock-state", str, "gaussian", "initial clock state: gaussian or sharp"),
        ("tau-b-frac", float_list, (0.2, 0.35, 0.5), "clock B readings as fractions of its period"),
        ("mixture", boolean, False, "also run the classical mixture and compare shifts"),
    ],
    "estimate": [
        ("scenario", str, None, "built-in scenario name"),
        ("mass", float, units.M_RB87, "atom mass in kg"),
        ("v1", float, REQUIRED, "first branch velocity, m/s"),
        ("v2", float, REQUIRED, "second branch velocity, m/s"),
        ("theta", angle, math.pi / 4, "branch weight angle"),
        ("phi", angle, 0.0, "relative phase"),
        ("delta-v", float, REQUIRED, "velocity width, m/s"),
        ("tau-b", float, 10.0, "lab clock interval, s"),
        ("transition-freq", float, experiment.RB87_HYPERFINE_HZ, "transition frequency, Hz"),
        ("clock-resolution", float, 1e-14, "clock resolution, s"),
        ("coherence-time", float, 10.0, "coherence time of the superposition, s"),
    ],
}

_BOOLEAN_FLAGS = {"plot-script", "mixture"}


def _dest(flag: str) -> str:
    return flag.replace("-", "_")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qtdilation", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    parser.commands = {}
    for name, opts in OPTIONS.items():
        p = sub.add_parser(name)
        parser.commands[name] = p
        p.add_argument("--config", help="key = value file; flags override it")
        p.add_argument("--format", choices=FORMATS, default=None)
        p.add_argument("--output", help="output file (default stdout)")
        for flag, typ, default, help_text in opts:
            text = help_text if default is REQUIRED else f"{help_text} [default: {default}]"
            if flag in _BOOLEAN_FLAGS:
                p.add_argument(f"--{flag}", dest=_dest(flag), action="store_const", const=True, default=None, help=text)
            else:
                p.add_argument(f"--{flag}", dest=_dest(flag), type=typ, default=None, help=text)
    return parser


def read_config(path: str) -> dict[str, str]:
    out = {}
    try:
        fh = open(path)
    except OSError as exc:
        raise UsageError(f"cannot read config {path!r}: {exc.strerror}") from None
    with fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            out[key.lstrip("-").replace("_", "-")] = value
    return out


def resolve(command: str, ns: argparse.Namespace, base: dict | None = None) -> dict:
    """Merge flags over config over ``base`` over defaults; check required values."""
    opts = OPTIONS[command]
    known = {flag for flag, *_ in opts} | {"format", "output"}
    config = read_config(ns.config) if ns.config else {}
    unknown = sorted(set(config) - known)
    if unknown:
        raise UsageError(f"unknown config keys for {command}: {', '.join(unknown)}")
    values = {}
    for flag, typ, default, _ in opts:
        dest = _dest(flag)
        given = getattr(ns, dest)
        if given is not None:
            values[dest] = given
        elif flag in config:
            conv = boolean if flag in _BOOLEAN_FLAGS else typ
            try:
                values[dest] = conv(config[flag])
            except ValueError as exc:
                raise UsageError(f"config value for {flag}: {exc}") from None
        elif base is not None and dest in base:
            values[dest] = base[dest]
        elif default is REQUIRED:
            raise UsageError(f"missing required option --{flag}")
        else:
            values[dest] = default
    values["format"] = ns.format or config.get("format") or "human"
    if values["format"] not in FORMATS:
        raise UsageError(f"--format must be one of {', '.join(FORMATS)}")
    values["output"] = ns.output or config.get("output")
    return values


# ---------------------------------------------------------------- rendering


def _structured(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return ""
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _json_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None or (isinstance(v, float) and not math.isfinite(v)):
        return "null"
    if isinstance(v, (int, float)):
        return format(float(v), ".17g") if isinstance(v, float) else str(v)
    return json.dumps(v)


def _human(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if v is None:
        return "-"
    if isinstance(v, float):
        return format(v, ".6g")
    return str(v)


def render(rows: list[dict], fmt: str) -> str:
    if fmt == "jsonl":
        return "".join(
            "{" + ", ".join(f"{json.dumps(k)}: {_json_value(v)}" for k, v in r.items()) + "}\n"
            for r in rows
        )
    if not rows:
        return ""
    keys = list(rows[0])
    if fmt == "csv":
        lines = [",".join(keys)] + [",".join(_structured(r[k]) for k in keys) for r in rows]
        return "\n".join(lines) + "\n"
    if len(rows) == 1:
        width = max(len(k) for k in keys)
        return "".join(f"{k.ljust(width)}  {_human(v)}\n" for k, v in rows[0].items())
    cells = [[_human(r[k]) for k in keys] for r in rows]
    widths = [max(len(k), *(len(c[i]) for c in cells)) for i, k in enumerate(keys)]
    lines = ["  ".join(k.rjust(w) for k, w in zip(keys, widths))]
    lines += ["  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells]
    return "\n".join(lines) + "\n"


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    with open(output, "w", newline="") as fh:
        fh.write(text)


# ---------------------------------------------------------------- commands


def cmd_dilation(v: dict) -> int:
    if v["units"] not in ("natural", "si"):
        raise UsageError("--units must be natural or si")
    p = [v["p_a"], v["p_a_prime"], v["p_b"], v["delta"]]
    if v["units"] == "si":
        p = [units.momentum_si_to_natural(x, v["mass"]) for x in p]
    pa, pap, pb, delta = p
    sc = Scenario.build(v["theta"], v["phi"], pa, pap, pb, delta, v["tau_b"])
    res = dilation_result(sc)
    row = dict(
        theta=v["theta"], phi=v["phi"], p_a=pa, p_a_prime=pap, p_b=pb, delta=delta,
        tau_b=v["tau_b"], **asdict(res),
    )
    _emit(render([row], v["format"]), v["output"])
    return 0


def cmd_sweep(v: dict) -> int:
    delta = v["delta"]
    plan = sweep.SweepPlan(
        v["beta"],
        v["diff_min"],
        v["diff_max"] if v["diff_max"] is not None else 50 * delta,
        v["diff_step"] if v["diff_step"] is not None else delta / 100,
        delta,
        v["theta"],
        v["phi"],
        v["p_b"],
    )
    out_dir = v["output_dir"]
    paths = [os.path.join(out_dir, "sweep.csv"), os.path.join(out_dir, "optimal.csv")]
    if v["plot_script"]:
        paths.append(os.path.join(out_dir, "kquantum.gp"))
    rows = sweep.run_sweep(plan)
    optima = [
        (beta, *sweep.optimal_difference(beta, delta, plan.theta, plan.phi, (plan.diff_min, plan.diff_max)))
        for beta in plan.beta_values
    ]
    try:
        sweep.emit_csv(rows, paths[0])
        sweep.emit_optimal_csv(optima, paths[1])
        if v["plot_script"]:
            with open(paths[2], "w", newline="") as fh:
                fh.write(sweep.plot_script("sweep.csv", "optimal.csv", plan.beta_values, delta))
    except OSError:
        for path in paths:
            if os.path.exists(path):
                os.remove(path)
        raise
    summary = [dict(beta=b, diff_star=d, k_quantum_star=k) for b, d, k in optima]
    _emit(render(summary, v["format"]), v["output"])
    return 0


def cmd_oracle(v: dict) -> int:
    if v["clock_state"] not in ("gaussian", "sharp"):
        raise UsageError("--clock-state must be gaussian or sharp")
    sc = Scenario.build(v["theta"], v["phi"], v["p_a"], v["p_a_prime"], v["p_b"], v["delta"])
    rows = comparison.compare(
        sc,
        v["tau_b_frac"],
        mixture=v["mixture"],
        d_a=v["dim_a"],
        d_b=v["dim_b"],
        grid_points=v["grid_points"],
        epsilon=v["epsilon"],
        clock_state=v["clock_state"],
    )
    keys = ["tau_b", "analytic_mean", "oracle_mean", "abs_diff", "tolerance", "passed"]
    if v["mixture"]:
        keys += ["mixture_mean", "quantum_shift", "expected_shift", "shift_rel_err", "shift_passed"]
    out = [{k: getattr(r, k) for k in keys} for r in rows]
    _emit(render(out, v["format"]), v["output"])
    return 0 if all(r.ok for r in rows) else 1


def cmd_estimate(v: dict) -> int:
    report = experiment.estimate(_scenario_si(v))
    _emit(render([report.as_dict()], v["format"]), v["output"])
    return 0


def _scenario_si(v: dict) -> experiment.ScenarioSI:
    return experiment.ScenarioSI(
        mass=v["mass"], v1=v["v1"], v2=v["v2"], theta=v["theta"], phi=v["phi"],
        delta_v=v["delta_v"], tau_b=v["tau_b"], transition_freq=v["transition_freq"],
        clock_resolution=v["clock_resolution"], coherence_time=v["coherence_time"],
    )


COMMANDS = {
    "dilation": cmd_dilation,
    "sweep": cmd_sweep,
    "oracle": cmd_oracle,
    "estimate": cmd_estimate,
}


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    sub = parser.commands[ns.command]
    try:
        base = None
        if ns.command == "estimate":
            name = ns.scenario
            if name is None and ns.config:
                name = read_config(ns.config).get("scenario")
            if name is not None:
                base = asdict(experiment.builtin_scenario(name))
        values = resolve(ns.command, ns, base)
        return COMMANDS[ns.command](values)
    except (UsageError, DomainError, ConfigurationError) as exc:
        sub.print_usage(sys.stderr)
        print(f"qtdilation {ns.command}: error: {exc}", file=sys.stderr)
        return 2
    except (NullConditionError, NoOptimumError, OSError) as exc:
        print(f"qtdilation {ns.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
