"""Command-line interface: certify, report, scan, asymptotics, mollify.

Output is reproducible by construction: a fully resolved copy of the run
configuration (defaults included) is embedded in every document, floats are
printed with 17 significant digits, and identical configurations produce
byte-identical kv/CSV output.

Exit codes: 0 = success (certify/mollify: verdict pass), 1 = verdict fail,
2 = solver or evaluation failure, 3 = invalid configuration.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from dataclasses import asdict, dataclass, fields

from . import functionals, mollifier, scans, solvers
from .errors import ConfigError, ProfileError, VirialForgeError
from .profiles import AngularProfile, Piece, PiecewiseProfile, SeparableAnsatz
from .scans import format_float

__all__ = ["RunConfig", "main", "entrypoint", "build_parser"]

FAMILIES = ("uniform", "core-halo", "monotonic", "custom")
FORMATS = ("human", "kv", "csv")

_RESULT_KEYS = (
    "family", "R", "P", "n", "alpha", "a", "a_star",
    "norm_constant", "mass", "kinetic", "potential", "total_energy",
    "energy_residual", "energy_tol", "virial", "virial_margin",
    "l32_norm", "norm_margin", "critical_norm", "verdict",
)


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved run configuration; round-trips through to_dict."""

    command: str
    family: str = ""
    r1: float = None
    r2: float = None
    r3: float = None
    p: float = None
    n: float = None
    a: float = None
    alpha: float = None
    delta: float = None
    tol_energy: float = 1e-9
    format: str = "human"
    out: str = ""
    profiles: str = ""
    p_min: float = None
    p_max: float = None
    p_points: int = None
    a_points: int = None

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        return cls(**data)


class _Parser(argparse.ArgumentParser):
    """argparse that raises ConfigError instead of exiting with code 2."""

    def error(self, message):
        raise ConfigError(message)


def _add_family_options(sub):
    sub.add_argument("--family", choices=FAMILIES, required=True)
    sub.add_argument("--r1", type=float)
    sub.add_argument("--r2", type=float)
    sub.add_argument("--r3", type=float)
    sub.add_argument("--p", type=float)
    sub.add_argument("--n", type=float)
    sub.add_argument("--a", type=float)
    sub.add_argument("--alpha", type=float, help="override the solved halo level")
    sub.add_argument("--profiles", help="profile-literal JSON file (custom family)")


def _add_output_options(sub, formats=FORMATS):
    sub.add_argument("--format", choices=formats, default="human")
    sub.add_argument("--out", default="", help="output path (default stdout)")
    sub.add_argument("--tol-energy", type=float, default=1e-9, dest="tol_energy")


def build_parser():
    parser = _Parser(prog="virial-forge", description=__doc__)
    commands = parser.add_subparsers(dest="command", required=True)

    certify = commands.add_parser(
        "certify", help="solve the family's free parameter and certify the datum"
    )
    _add_family_options(certify)
    _add_output_options(certify, formats=("human", "kv"))

    report = commands.add_parser(
        "report", help="print every functional without pass/fail gating"
    )
    _add_family_options(report)
    _add_output_options(report, formats=("human", "kv"))

    scan = commands.add_parser("scan", help="uniform-ball virial floor sweep")
    scan.add_argument("--p-min", type=float, default=1e-2, dest="p_min")
    scan.add_argument("--p-max", type=float, default=1e4, dest="p_max")
    scan.add_argument("--p-points", type=int, default=200, dest="p_points")
    scan.add_argument("--a-points", type=int, default=40, dest="a_points")
    _add_output_options(scan)

    asym = commands.add_parser(
        "asymptotics", help="large-P halo-level and virial scaling fits"
    )
    asym.add_argument("--p-min", type=float, default=1e2, dest="p_min")
    asym.add_argument("--p-max", type=float, default=1e4, dest="p_max")
    asym.add_argument("--p-points", type=int, default=9, dest="p_points")
    asym.add_argument("--a", type=float, default=-0.9)
    _add_output_options(asym)

    moll = commands.add_parser(
        "mollify", help="smooth the steps, re-solve zero energy, certify"
    )
    _add_family_options(moll)
    moll.add_argument("--delta", type=float, help="ramp half-width (default 1e-3 * feature)")
    _add_output_options(moll, formats=("human", "kv"))
    return parser


def _config_from_args(args):
    data = {f.name: getattr(args, f.name, None) for f in fields(RunConfig)}
    data["command"] = args.command
    data["family"] = getattr(args, "family", "") or ""
    data["format"] = getattr(args, "format", "human")
    data["out"] = getattr(args, "out", "") or ""
    data["profiles"] = getattr(args, "profiles", "") or ""
    data["tol_energy"] = getattr(args, "tol_energy", 1e-9)
    return RunConfig(**data)


def _require(cfg, *names):
    missing = [n for n in names if getattr(cfg, n) is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise ConfigError(f"family {cfg.family!r} requires {flags}")


def _validate_family(cfg):
    if cfg.family not in FAMILIES:
        raise ConfigError(f"unknown family {cfg.family!r}")
    if cfg.tol_energy is None or cfg.tol_energy <= 0.0:
        raise ConfigError("--tol-energy must be positive")
    if cfg.family == "uniform":
        _require(cfg, "p", "a")
        if cfg.p <= 0.0:
            raise ConfigError("--p must be positive")
    elif cfg.family == "core-halo":
        _require(cfg, "r1", "r2", "r3", "p", "a")
        if not (0.0 < cfg.r1 <= cfg.r2 <= cfg.r3):
            raise ConfigError("core-halo radii must satisfy 0 < r1 <= r2 <= r3")
        if cfg.p <= 0.0:
            raise ConfigError("--p must be positive")
        if cfg.alpha is not None and cfg.alpha <= 0.0:
            raise ConfigError("--alpha override must be positive")
    elif cfg.family == "monotonic":
        _require(cfg, "r1", "r2", "r3", "n", "a")
        if not (0.0 < cfg.r1 <= cfg.r2 <= cfg.r3):
            raise ConfigError("radii must satisfy 0 < r1 <= r2 <= r3")
        if cfg.n <= 0.0:
            raise ConfigError("--n must be positive")
        if cfg.p is not None and cfg.p <= 0.0:
            raise ConfigError("--p override must be positive")
    else:
        if not cfg.profiles:
            raise ConfigError("custom family requires --profiles FILE")
    if cfg.a is not None and not (-1.0 < cfg.a <= 1.0):
        raise ConfigError("--a must lie in (-1, 1]")
    if cfg.delta is not None and cfg.delta < 0.0:
        raise ConfigError("--delta must be >= 0")


def _piece_from_dict(entry):
    try:
        kind = entry["kind"]
        lo, hi = float(entry["lo"]), float(entry["hi"])
        if kind == "constant":
            return Piece.constant(float(entry["value"]), lo, hi)
        if kind == "power":
            return Piece.power(float(entry["value"]), float(entry["exponent"]), lo, hi)
        if kind == "ramp":
            return Piece.ramp(float(entry["left"]), float(entry["right"]), lo, hi)
    except KeyError as exc:
        raise ConfigError(f"profile piece missing field {exc}")
    raise ConfigError(f"unknown piece kind {kind!r}")


def _load_custom_ansatz(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read profile file: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"profile file is not valid JSON: {exc}")
    try:
        spatial = PiecewiseProfile.from_segments(
            [_piece_from_dict(e) for e in doc["spatial"]["pieces"]]
        )
        momentum = PiecewiseProfile.from_segments(
            [_piece_from_dict(e) for e in doc["momentum"]["pieces"]],
            domain_label="radial-momentum",
        )
        ang = doc["angular"]
        if "cutoff" in ang:
            angular = AngularProfile.cutoff(float(ang["cutoff"]))
        else:
            angular = AngularProfile(tuple(_piece_from_dict(e) for e in ang["pieces"]))
    except KeyError as exc:
        raise ConfigError(f"profile file missing section {exc}")
    except ProfileError as exc:
        raise ConfigError(f"invalid profile literal: {exc}")
    return SeparableAnsatz(spatial, momentum, angular)


def _solve_family(cfg):
    """(params_or_None, ansatz, solved key/values for the output document)."""
    if cfg.family == "uniform":
        params = solvers.solve_uniform(cfg.p, cfg.a)
        return params, solvers.uniform_ansatz(params), {"R": params.r, "P": params.p}
    if cfg.family == "core-halo":
        alpha = cfg.alpha
        if alpha is None:
            alpha = solvers.solve_corehalo_alpha(cfg.r1, cfg.r2, cfg.r3, cfg.p)
        params = solvers.CoreHaloParams(
            r1=cfg.r1, r2=cfg.r2, r3=cfg.r3, p=cfg.p, alpha=alpha, a=cfg.a
        )
        return params, solvers.core_halo_ansatz(params), {"alpha": alpha, "P": cfg.p}
    if cfg.family == "monotonic":
        p = cfg.p
        if p is None:
            p = solvers.solve_monotonic_P(cfg.r1, cfg.r2, cfg.r3, cfg.n)
        params = solvers.MonotonicParams(
            r1=cfg.r1, r2=cfg.r2, r3=cfg.r3, n=cfg.n, p=p, a=cfg.a
        )
        return params, solvers.monotonic_ansatz(params), {"P": p, "n": cfg.n}
    ansatz = _load_custom_ansatz(cfg.profiles)
    return None, ansatz, {}


def _fmt_value(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def _config_pairs(cfg):
    return [("config." + key, _fmt_value(val)) for key, val in cfg.to_dict().items()]


def _render(pairs, fmt):
    if fmt == "kv":
        return "".join(f"{k}={v}\n" for k, v in pairs)
    width = max(len(k) for k, _ in pairs)
    return "".join(f"{k:<{width}}  {v}\n" for k, v in pairs)


def _certificate_pairs(cfg, cert, solved, a_star):
    values = {
        "family": cfg.family,
        "R": solved.get("R"),
        "P": solved.get("P"),
        "n": solved.get("n"),
        "alpha": solved.get("alpha"),
        "a": cfg.a,
        "a_star": a_star,
        "norm_constant": cert.report.norm_constant,
        "mass": cert.report.mass,
        "kinetic": cert.report.kinetic,
        "potential": cert.report.potential,
        "total_energy": cert.report.total_energy,
        "energy_residual": cert.energy_residual,
        "energy_tol": cert.energy_tol,
        "virial": cert.report.virial,
        "virial_margin": cert.virial_margin,
        "l32_norm": cert.report.l32_norm,
        "norm_margin": cert.norm_margin,
        "critical_norm": cert.critical_norm,
        "verdict": "pass" if cert.passed else "fail",
    }
    return [(k, _fmt_value(values[k])) for k in _RESULT_KEYS]


def _threshold_or_none(ansatz):
    try:
        return solvers.solve_threshold_a(ansatz)
    except VirialForgeError:
        return None


def _cmd_certify(cfg):
    _validate_family(cfg)
    params, ansatz, solved = _solve_family(cfg)
    cert = functionals.check_criteria(ansatz, energy_tol=cfg.tol_energy)
    a_star = _threshold_or_none(ansatz)
    pairs = _config_pairs(cfg) + _certificate_pairs(cfg, cert, solved, a_star)
    return (0 if cert.passed else 1), _render(pairs, cfg.format)


def _cmd_report(cfg):
    _validate_family(cfg)
    params, ansatz, solved = _solve_family(cfg)
    rep = functionals.evaluate(ansatz)
    a_star = _threshold_or_none(ansatz)
    pairs = _config_pairs(cfg)
    pairs += [
        ("family", cfg.family),
        ("R", _fmt_value(solved.get("R"))),
        ("P", _fmt_value(solved.get("P"))),
        ("n", _fmt_value(solved.get("n"))),
        ("alpha", _fmt_value(solved.get("alpha"))),
        ("a", _fmt_value(cfg.a)),
        ("a_star", _fmt_value(a_star)),
        ("method", rep.method),
        ("norm_constant", _fmt_value(rep.norm_constant)),
        ("mass", _fmt_value(rep.mass)),
        ("kinetic", _fmt_value(rep.kinetic)),
        ("potential", _fmt_value(rep.potential)),
        ("total_energy", _fmt_value(rep.total_energy)),
        ("virial", _fmt_value(rep.virial)),
        ("l32_norm", _fmt_value(rep.l32_norm)),
        ("critical_norm", _fmt_value(functionals.CRITICAL_L32_NORM)),
    ]
    return 0, _render(pairs, cfg.format)


def _csv_with_config(cfg, rows, summary_lines):
    buf = io.StringIO()
    for key, val in _config_pairs(cfg):
        buf.write(f"# {key}={val}\n")
    scans.rows_to_csv(rows, buf)
    for line in summary_lines:
        buf.write(line + "\n")
    return buf.getvalue()


def _cmd_scan(cfg):
    if cfg.p_points < 1 or cfg.a_points < 1:
        raise ConfigError("grid sizes must be >= 1")
    if not (0.0 < cfg.p_min <= cfg.p_max):
        raise ConfigError("need 0 < p-min <= p-max")
    import numpy as np

    grid = scans.ScanGrid(
        P_values=tuple(np.geomspace(cfg.p_min, cfg.p_max, cfg.p_points)),
        a_values=tuple(np.linspace(-1.0 + 1e-6, 0.9, cfg.a_points)),
        family="uniform",
    )
    result = scans.uniform_ball_floor(grid)
    floor_ok = result.min_virial > -0.45
    summary = [
        f"# min_virial > -0.45: {'OK' if floor_ok else 'VIOLATED'}",
        f"# min_virial={format_float(result.min_virial)} "
        f"at P={format_float(result.argmin_P)} a={format_float(result.argmin_a)}",
    ]
    if cfg.format == "csv":
        return 0, _csv_with_config(cfg, result.rows, summary)
    pairs = _config_pairs(cfg) + [
        ("min_virial", _fmt_value(result.min_virial)),
        ("argmin_P", _fmt_value(result.argmin_P)),
        ("argmin_a", _fmt_value(result.argmin_a)),
        ("floor_ok", _fmt_value(floor_ok)),
    ]
    return 0, _render(pairs, cfg.format)


def _cmd_asymptotics(cfg):
    if cfg.p_points < 5:
        raise ConfigError("asymptotics needs at least 5 grid points")
    if not (0.0 < cfg.p_min <= cfg.p_max):
        raise ConfigError("need 0 < p-min <= p-max")
    if cfg.a is None or not (-1.0 < cfg.a < 1.0):
        raise ConfigError("--a must lie in (-1, 1)")
    import numpy as np

    result = scans.asymptotic_scaling(
        tuple(np.geomspace(cfg.p_min, cfg.p_max, cfg.p_points)), a=cfg.a
    )
    summary = [
        f"# alpha_slope={format_float(result.alpha_fit.slope)}",
        f"# virial_slope={format_float(result.virial_fit.slope)}",
    ]
    if cfg.format == "csv":
        return 0, _csv_with_config(cfg, result.rows, summary)
    pairs = _config_pairs(cfg) + [
        ("alpha_slope", _fmt_value(result.alpha_fit.slope)),
        ("alpha_intercept", _fmt_value(result.alpha_fit.intercept)),
        ("alpha_max_residual", _fmt_value(result.alpha_fit.max_residual)),
        ("virial_slope", _fmt_value(result.virial_fit.slope)),
        ("virial_intercept", _fmt_value(result.virial_fit.intercept)),
        ("virial_max_residual", _fmt_value(result.virial_fit.max_residual)),
        ("n_points", str(result.alpha_fit.n_points)),
        ("n_failures", str(len(result.failures))),
    ]
    return 0, _render(pairs, cfg.format)


def _cmd_mollify(cfg):
    _validate_family(cfg)
    if cfg.family == "custom":
        raise ConfigError("mollify supports the uniform, core-halo and monotonic families")
    params, step_ansatz, solved = _solve_family(cfg)
    delta = cfg.delta
    if delta is None:
        delta = mollifier.default_delta(step_ansatz)
    spec = mollifier.MollifySpec(delta=delta)
    new_params, moll_ansatz = mollifier.rebalance(params, spec, energy_tol=cfg.tol_energy)
    cert = functionals.check_criteria(moll_ansatz, energy_tol=cfg.tol_energy)
    drift = mollifier.functional_drift(step_ansatz, moll_ansatz)

    solved = dict(solved)
    if cfg.family == "uniform":
        solved["R"] = new_params.r
    elif cfg.family == "core-halo":
        solved["alpha"] = new_params.alpha
    else:
        solved["P"] = new_params.p
    pairs = _config_pairs(cfg)
    pairs.append(("delta", _fmt_value(delta)))
    pairs.append(("seam_smoothness", _fmt_value(
        mollifier.seam_smoothness(moll_ansatz.spatial)
    )))
    pairs += _certificate_pairs(cfg, cert, solved, _threshold_or_none(moll_ansatz))
    for key, entry in drift.items():
        pairs.append((f"step.{key}", _fmt_value(entry["step"])))
        pairs.append((f"mollified.{key}", _fmt_value(entry["mollified"])))
        pairs.append((f"drift.{key}", _fmt_value(entry["drift"])))
    return (0 if cert.passed else 1), _render(pairs, cfg.format)


_COMMANDS = {
    "certify": _cmd_certify,
    "report": _cmd_report,
    "scan": _cmd_scan,
    "asymptotics": _cmd_asymptotics,
    "mollify": _cmd_mollify,
}


def main(argv=None):
    """Run the CLI; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _config_from_args(args)
        code, text = _COMMANDS[cfg.command](cfg)
    except ConfigError as exc:
        print(f"error: invalid configuration: {exc}", file=sys.stderr)
        return 3
    except ProfileError as exc:
        print(f"error: invalid parameters: {exc}", file=sys.stderr)
        return 3
    except VirialForgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
