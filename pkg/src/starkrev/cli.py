"""Batch command-line front end.

Subcommands: timescales, interferogram, packet, revival, verify.  Runs are
described by a flat sectioned config file (INI style), by command-line flags
(flags win), or by the JSON metadata sidecar of a previous run, which embeds
every resolved parameter so that re-running reproduces the output bytes.

Exit codes: 0 success, 1 domain/configuration error, 2 I/O error,
3 verification failure.
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import re
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__, core, dynamics, packet, revivals, units, verify
from .errors import DomainError, StarkRevError

_FIELD_RE = re.compile(r"^\s*([-+0-9.eE]+)\s*(V/cm|v/cm|au)\s*$")
_TIME_RE = re.compile(r"^\s*([-+0-9.eE]+)\s*(ps|au)\s*$")

DEFAULTS = {
    "run": {
        "nbar": "24",
        "field": None,
        "classical_ratio": None,
        "revival_ratio": None,
        "phase_model": "taylor2",
    },
    "packet": {
        "kbar": "0",
        "n_list": None,
        "n_weighting": "flat_top",
        "k_sigma": "6.0",
        "truncation": "half_manifold",
    },
    "grid": {"t_max": None, "dt": "auto"},
    "output": {"path": None, "format": "csv", "xrange_ps": None},
}


# ---------------------------------------------------------------------------
# parsing helpers


def parse_field_text(text: str) -> float:
    m = _FIELD_RE.match(text)
    if not m:
        raise DomainError(f"cannot parse field {text!r} (expected e.g. '794.8 V/cm' or '1.5e-7 au')")
    value, unit = float(m.group(1)), m.group(2)
    if unit == "au":
        if value <= 0 or not math.isfinite(value):
            raise DomainError(f"field must be positive and finite, got {text!r}")
        return value
    return units.field_from_volts_per_cm(value)


def parse_time_text(text: str) -> float:
    m = _TIME_RE.match(text)
    if not m:
        raise DomainError(f"cannot parse time {text!r} (expected e.g. '410 ps' or '1.6e7 au')")
    value, unit = float(m.group(1)), m.group(2)
    return units.time_from_ps(value) if unit == "ps" else value


def parse_fraction_text(text: str, require_reduced: bool = False) -> Fraction:
    parts = text.strip().split("/")
    if len(parts) != 2:
        raise DomainError(f"cannot parse fraction {text!r} (expected 'p/q')")
    try:
        num, den = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise DomainError(f"cannot parse fraction {text!r}") from exc
    if num < 1 or den < 1:
        raise DomainError(f"fraction must be positive, got {text!r}")
    if require_reduced and math.gcd(num, den) != 1:
        raise DomainError(f"fraction {text!r} is not reduced")
    return Fraction(num, den)


def parse_n_list_text(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.replace(" ", "").split(",") if tok)
    except ValueError as exc:
        raise DomainError(f"cannot parse n_list {text!r}") from exc


def parse_weighting_text(text: str) -> tuple[str, float | None]:
    if text == "flat_top":
        return "flat_top", None
    if text.startswith("gaussian:"):
        return "gaussian", float(text.split(":", 1)[1])
    raise DomainError(f"unknown n weighting {text!r} (flat_top or gaussian:<sigma>)")


def parse_truncation_text(text: str) -> tuple[str, float | None]:
    if text in ("half_manifold", "full"):
        return text, None
    if text.startswith("energy_window:"):
        return "energy_window", float(text.split(":", 1)[1])
    raise DomainError(
        f"unknown truncation {text!r} (half_manifold, full or energy_window:<au>)"
    )


# ---------------------------------------------------------------------------
# configuration loading & resolution


def load_config_file(path: Path) -> dict:
    """Read an INI config or the JSON sidecar of a previous run."""
    text = path.read_text()
    if path.suffix == ".json" or text.lstrip().startswith("{"):
        obj = json.loads(text)
        return obj.get("config", obj)
    cp = configparser.ConfigParser()
    cp.read_string(text)
    return {section: dict(cp.items(section)) for section in cp.sections()}


def _merge(base: dict, extra: dict) -> dict:
    out = {sec: dict(vals) for sec, vals in base.items()}
    for sec, vals in extra.items():
        if sec not in out:
            out[sec] = {}
        for key, val in vals.items():
            if val is not None:
                out[sec][key] = val
    return out


def gather_settings(args: argparse.Namespace) -> dict:
    settings = {sec: dict(vals) for sec, vals in DEFAULTS.items()}
    if getattr(args, "config", None):
        settings = _merge(settings, load_config_file(Path(args.config)))
    overrides = {
        "run": {
            "nbar": getattr(args, "nbar", None),
            "field": getattr(args, "field", None),
            "classical_ratio": getattr(args, "classical_ratio", None),
            "revival_ratio": getattr(args, "revival_ratio", None),
            "phase_model": getattr(args, "phase_model", None),
        },
        "packet": {
            "kbar": getattr(args, "kbar", None),
            "n_list": getattr(args, "n_list", None),
            "n_weighting": getattr(args, "n_weighting", None),
            "k_sigma": getattr(args, "k_sigma", None),
            "truncation": getattr(args, "truncation", None),
        },
        "grid": {
            "t_max": getattr(args, "t_max", None),
            "dt": getattr(args, "dt", None),
        },
        "output": {
            "path": getattr(args, "output", None),
            "format": getattr(args, "format", None),
            "xrange_ps": getattr(args, "xrange_ps", None),
        },
    }
    return _merge(settings, overrides)


def resolve_config(settings: dict) -> dict:
    """Turn raw settings into a fully concrete configuration dict.

    Accepts both raw text values and the already-resolved values of a
    previous run's sidecar (resolved keys win, making reruns exact).
    """
    run = settings.get("run", {})
    pk = settings.get("packet", {})
    grid = settings.get("grid", {})
    out = settings.get("output", {})

    nbar = int(run.get("nbar"))
    classical = run.get("classical_ratio")
    revival = run.get("revival_ratio")
    field = run.get("field")
    given = [x for x in (field, classical, revival) if x not in (None, "")]
    if "field_au" in run:
        field_au = float(run["field_au"])
    else:
        if len(given) != 1:
            raise DomainError(
                "exactly one of field, classical_ratio and revival_ratio must be given"
            )
        if field is not None:
            field_au = parse_field_text(str(field))
        elif classical is not None:
            field_au = core.solve_field_for_classical_ratio(
                nbar, parse_fraction_text(str(classical))
            )
        else:
            field_au = core.solve_field_for_revival_ratio(
                nbar, parse_fraction_text(str(revival))
            )
    f_c = core.ionization_threshold(nbar)
    if field_au >= f_c:
        raise DomainError(
            f"field {units.field_to_volts_per_cm(field_au):.1f} V/cm is at or above "
            f"the classical ionization threshold F_c = {f_c:.6e} au "
            f"({units.field_to_volts_per_cm(f_c):.1f} V/cm) for nbar = {nbar}"
        )

    phase_model = str(run.get("phase_model") or "taylor2")
    if phase_model not in dynamics.PHASE_KINDS:
        raise DomainError(f"unknown phase model {phase_model!r}")

    if "n_list" in pk and not isinstance(pk.get("n_list"), (str, type(None))):
        n_list = tuple(int(n) for n in pk["n_list"])
    elif pk.get("n_list"):
        n_list = parse_n_list_text(str(pk["n_list"]))
    else:
        n_list = (nbar - 1, nbar, nbar + 1)

    if "n_sigma" in pk:
        weighting = str(pk.get("n_weighting", "flat_top"))
        n_sigma = None if pk["n_sigma"] is None else float(pk["n_sigma"])
    else:
        weighting, n_sigma = parse_weighting_text(str(pk.get("n_weighting", "flat_top")))
    if "energy_window_au" in pk:
        truncation = str(pk.get("truncation", "half_manifold"))
        window = None if pk["energy_window_au"] is None else float(pk["energy_window_au"])
    else:
        truncation, window = parse_truncation_text(str(pk.get("truncation", "half_manifold")))

    ts = core.time_scales(nbar, field_au)
    if "t_max_au" in grid:
        t_max_au = None if grid["t_max_au"] is None else float(grid["t_max_au"])
    elif grid.get("t_max"):
        t_max_au = parse_time_text(str(grid["t_max"]))
    else:
        t_max_au = None
    if "dt_au" in grid:
        dt_au = float(grid["dt_au"])
    elif grid.get("dt") in (None, "", "auto"):
        dt_au = dynamics.default_dt(ts)
    else:
        dt_au = parse_time_text(str(grid["dt"]))

    xrange = out.get("xrange_ps")
    if isinstance(xrange, str):
        lo, hi = (float(tok) for tok in xrange.split(","))
        xrange = [lo, hi]

    kbar_raw = pk.get("kbar")
    k_sigma_raw = pk.get("k_sigma")
    return {
        "run": {
            "nbar": nbar,
            "field_au": field_au,
            "field_vcm": units.field_to_volts_per_cm(field_au),
            "classical_ratio": str(classical) if classical else None,
            "revival_ratio": str(revival) if revival else None,
            "phase_model": phase_model,
        },
        "packet": {
            "kbar": 0 if kbar_raw in (None, "") else int(kbar_raw),
            "n_list": list(n_list),
            "n_weighting": weighting,
            "n_sigma": n_sigma,
            "k_sigma": 6.0 if k_sigma_raw in (None, "") else float(k_sigma_raw),
            "truncation": truncation,
            "energy_window_au": window,
        },
        "grid": {"t_max_au": t_max_au, "dt_au": dt_au},
        "output": {
            "path": out.get("path"),
            "format": str(out.get("format") or "csv"),
            "xrange_ps": xrange,
        },
    }


def build_packet_from_config(cfg: dict) -> packet.WavePacket:
    run, pk = cfg["run"], cfg["packet"]
    spec = packet.PacketSpec(
        nbar=run["nbar"],
        field_au=run["field_au"],
        kbar=pk["kbar"],
        n_list=tuple(pk["n_list"]),
        n_weighting=pk["n_weighting"],
        n_sigma=pk["n_sigma"],
        k_sigma=pk["k_sigma"],
        truncation=pk["truncation"],
        energy_window_au=pk["energy_window_au"],
    )
    return packet.build_packet(spec)


def exact_revival_ratio(cfg: dict) -> Fraction:
    """Exact revival-time ratio implied by the configuration.

    Ratio-specified fields carry it exactly.  An explicit field is
    rationalized with the default denominator cap and accepted only when it
    realizes that commensurability to high precision; otherwise the run is
    refused with a pointer to the ratio flags.
    """
    run = cfg["run"]
    if run["revival_ratio"]:
        return parse_fraction_text(run["revival_ratio"])
    if run["classical_ratio"]:
        return Fraction(2, 3) * parse_fraction_text(run["classical_ratio"])
    ts = core.time_scales(run["nbar"], run["field_au"])
    measured = core.revival_ratio(ts)
    rs = core.rationalize(measured)
    if abs(float(rs) - measured) > 1e-9 * measured:
        raise DomainError(
            f"field {run['field_vcm']:.4f} V/cm gives revival ratio "
            f"{measured!r}, which is not an exact small rational "
            f"(nearest: {rs}); specify --revival-ratio or --classical-ratio "
            f"for fractional-revival analysis"
        )
    return rs


# ---------------------------------------------------------------------------
# output writers


def _json_dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def sidecar_for(cfg: dict) -> dict:
    return {"tool": "starkrev", "version": __version__, "config": cfg}


def _gnuplot_script(csv_name: str, xrange_ps) -> str:
    lines = [
        f"# gnuplot script for {csv_name}",
        "set datafile separator ','",
        "set xlabel 'time (ps)'",
        "set ylabel '|A(t)|^2'",
    ]
    if xrange_ps:
        lines.append(f"set xrange [{xrange_ps[0]}:{xrange_ps[1]}]")
    lines.append(f"plot '{csv_name}' using 1:4 with lines notitle")
    return "\n".join(lines) + "\n"


def write_interferogram_outputs(cfg: dict, ig: dynamics.Interferogram, path: Path) -> list[Path]:
    written = []
    if cfg["output"]["format"] == "json":
        payload = sidecar_for(cfg)
        payload["data"] = {
            "t_ps": [units.time_to_ps(float(t)) for t in ig.times],
            "re_A": [float(v.real) for v in ig.values],
            "im_A": [float(v.imag) for v in ig.values],
            "abs2": [float(a) for a in ig.abs2],
        }
        path.write_text(_json_dumps(payload))
        written.append(path)
        return written
    with open(path, "w") as fh:
        dynamics.write_csv(ig, fh)
    written.append(path)
    meta = path.with_suffix(".meta.json")
    meta.write_text(_json_dumps(sidecar_for(cfg)))
    written.append(meta)
    gp = path.with_suffix(".gp")
    gp.write_text(_gnuplot_script(path.name, cfg["output"]["xrange_ps"]))
    written.append(gp)
    return written


# ---------------------------------------------------------------------------
# subcommands


def cmd_timescales(args) -> int:
    cfg = resolve_config(gather_settings(args))
    run = cfg["run"]
    ts = core.time_scales(run["nbar"], run["field_au"])
    f_c = core.ionization_threshold(run["nbar"])
    a_b = core.classical_ratio(ts)
    r_s = core.revival_ratio(ts)
    report = {
        "nbar": run["nbar"],
        "field_au": run["field_au"],
        "field_vcm": run["field_vcm"],
        "ionization_threshold_au": f_c,
        "ionization_threshold_vcm": units.field_to_volts_per_cm(f_c),
        "t_cl_n_au": ts.t_cl_n,
        "t_cl_n_ps": units.time_to_ps(ts.t_cl_n),
        "t_cl_k_au": ts.t_cl_k,
        "t_cl_k_ps": units.time_to_ps(ts.t_cl_k),
        "t_rev_n_au": ts.t_rev_n,
        "t_rev_n_ps": units.time_to_ps(ts.t_rev_n),
        "t_rev_nk_au": ts.t_rev_nk,
        "t_rev_nk_ps": units.time_to_ps(ts.t_rev_nk),
        "classical_ratio": a_b,
        "classical_ratio_rational": str(core.rationalize(a_b)),
        "revival_ratio": r_s,
        "revival_ratio_rational": str(core.rationalize(r_s)),
    }
    if args.json:
        sys.stdout.write(_json_dumps(report))
        return 0
    print(f"nbar                 {report['nbar']}")
    print(f"field                {report['field_vcm']:.4f} V/cm = {report['field_au']:.9e} au")
    print(f"ionization threshold {report['ionization_threshold_vcm']:.4f} V/cm")
    print(f"T_cl^n               {report['t_cl_n_ps']:.6f} ps = {report['t_cl_n_au']:.9e} au")
    print(f"T_cl^k               {report['t_cl_k_ps']:.6f} ps = {report['t_cl_k_au']:.9e} au")
    print(f"t_rev^n              {report['t_rev_n_ps']:.6f} ps = {report['t_rev_n_au']:.9e} au")
    print(f"t_rev^nk             {report['t_rev_nk_ps']:.6f} ps = {report['t_rev_nk_au']:.9e} au")
    print(f"T_cl^n/T_cl^k        {a_b:.9f} ~ {report['classical_ratio_rational']}")
    print(f"t_rev^n/t_rev^nk     {r_s:.9f} ~ {report['revival_ratio_rational']}")
    return 0


def cmd_interferogram(args) -> int:
    cfg = resolve_config(gather_settings(args))
    if cfg["grid"]["t_max_au"] is None:
        raise DomainError("t_max is required (grid section or --t-max)")
    if not cfg["output"]["path"]:
        raise DomainError("an output path is required (output section or --output)")
    wp = build_packet_from_config(cfg)
    ts = core.time_scales(cfg["run"]["nbar"], cfg["run"]["field_au"])
    model = dynamics.PhaseModel(cfg["run"]["phase_model"], ts.nbar, 0, ts)
    ig = dynamics.interferogram(wp, model, cfg["grid"]["t_max_au"], cfg["grid"]["dt_au"])
    written = write_interferogram_outputs(cfg, ig, Path(cfg["output"]["path"]))
    for p in written:
        print(f"wrote {p}")
    return 0


def cmd_packet(args) -> int:
    cfg = resolve_config(gather_settings(args))
    wp = build_packet_from_config(cfg)
    rows = packet.coefficient_histogram(wp)
    lines = ["n,k,weight"]
    lines += [f"{n},{k},{dynamics.format_float(w)}" for n, k, w in rows]
    text = "\n".join(lines) + "\n"
    target = cfg["output"]["path"]
    if target in (None, "-"):
        sys.stdout.write(text)
    else:
        path = Path(target)
        path.write_text(text)
        path.with_suffix(".meta.json").write_text(_json_dumps(sidecar_for(cfg)))
        print(f"wrote {path}")
    return 0


def cmd_revival(args) -> int:
    cfg = resolve_config(gather_settings(args))
    frac = parse_fraction_text(args.frac, require_reduced=True)
    rs = exact_revival_ratio(cfg)
    run = cfg["run"]
    ts = core.time_scales(run["nbar"], run["field_au"])
    wp = build_packet_from_config(cfg)
    sp = revivals.split_odd_even(wp)
    ft = revivals.fractional_time(frac.numerator, frac.denominator, ts, rs)
    periods = revivals.minimal_periods(ft, rs)
    dec = revivals.expansion_coefficients(ft, rs, periods)
    err = revivals.max_reconstruction_error(sp, dec, ft, rs)
    report = revivals.decomposition_report(dec, err)
    report["revival_ratio"] = f"{rs.numerator}/{rs.denominator}"
    report["t_frac_au"] = ft.t_au
    report["t_frac_ps"] = units.time_to_ps(ft.t_au)
    report["config"] = cfg
    text = _json_dumps(report)
    target = cfg["output"]["path"]
    if target in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(target).write_text(text)
        print(f"wrote {target}")
    return 0


def cmd_verify(args) -> int:
    results = verify.run_all()
    width = max(len(name) for name, _, _ in results)
    failures = 0
    for name, ok, detail in results:
        status = "PASS" if ok else "FAIL"
        print(f"[{status}] {name:<{width}}  {detail}")
        failures += 0 if ok else 1
    print(f"[info] {verify.exact_phase_revival_info()}")
    if failures:
        print(f"{failures} of {len(results)} checks failed")
        return 3
    print(f"all {len(results)} checks passed")
    return 0


# ---------------------------------------------------------------------------
# argument parser


def _add_run_args(sp) -> None:
    sp.add_argument("--config", help="config file (INI) or sidecar JSON of a previous run")
    sp.add_argument("--nbar", type=int, help="central principal quantum number")
    group = sp.add_mutually_exclusive_group()
    group.add_argument("--field", help="field strength, e.g. '794.8 V/cm' or '1.5e-7 au'")
    group.add_argument("--classical-ratio", dest="classical_ratio",
                       help="target T_cl^n/T_cl^k as a fraction, e.g. 2/13")
    group.add_argument("--revival-ratio", dest="revival_ratio",
                       help="target t_rev^n/t_rev^nk as a fraction, e.g. 1/12")


def _add_packet_args(sp) -> None:
    sp.add_argument("--kbar", type=int, help="center of the k distribution")
    sp.add_argument("--n-list", dest="n_list", help="manifolds, e.g. 23,24,25")
    sp.add_argument("--n-weighting", dest="n_weighting",
                    help="flat_top or gaussian:<sigma>")
    sp.add_argument("--k-sigma", dest="k_sigma", type=float,
                    help="std dev of the |c|^2 distribution over k")
    sp.add_argument("--truncation",
                    help="half_manifold, full or energy_window:<width au>")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="starkrev",
        description="Stark wave-packet revival structure: time scales, "
        "interferograms and fractional-revival decompositions.",
    )
    p.add_argument("--version", action="version", version=f"starkrev {__version__}")
    sub = p.add_subparsers(dest="command")

    ts_p = sub.add_parser("timescales", help="the four characteristic times and ratios")
    _add_run_args(ts_p)
    ts_p.add_argument("--json", action="store_true", help="emit a JSON report")
    ts_p.set_defaults(fn=cmd_timescales)

    ig_p = sub.add_parser("interferogram", help="sample |A(t)|^2 and write data files")
    _add_run_args(ig_p)
    _add_packet_args(ig_p)
    ig_p.add_argument("--phase-model", dest="phase_model", choices=dynamics.PHASE_KINDS)
    ig_p.add_argument("--t-max", dest="t_max", help="grid end, e.g. '410 ps'")
    ig_p.add_argument("--dt", help="grid step, e.g. '0.05 ps' (default: auto)")
    ig_p.add_argument("--format", choices=("csv", "json"))
    ig_p.add_argument("--xrange-ps", dest="xrange_ps",
                      help="x range hint for the plot script, e.g. 168,236")
    ig_p.add_argument("--output", help="output data file path")
    ig_p.set_defaults(fn=cmd_interferogram)

    pk_p = sub.add_parser("packet", help="export the packet coefficient histogram")
    _add_run_args(pk_p)
    _add_packet_args(pk_p)
    pk_p.add_argument("--output", help="CSV path (default: stdout)")
    pk_p.set_defaults(fn=cmd_packet)

    rv_p = sub.add_parser("revival", help="fractional-revival decomposition report")
    _add_run_args(rv_p)
    _add_packet_args(rv_p)
    rv_p.add_argument("--frac", required=True,
                      help="fraction p1/q1 of the n-revival time, e.g. 6/1")
    rv_p.add_argument("--output", help="JSON path (default: stdout)")
    rv_p.set_defaults(fn=cmd_revival)

    vf_p = sub.add_parser("verify", help="run the built-in verification suite")
    vf_p.set_defaults(fn=cmd_verify)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "fn", None):
        parser.print_help()
        return 0
    try:
        return args.fn(args)
    except StarkRevError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
