"""Command-line driver.

Every run writes a one-line JSON provenance header (config echo, package
version, seed) ahead of its data. CSV outputs prefix it with ``#``; JSON-lines
outputs store it as the first record. Nothing time-dependent goes into the
output, so identical arguments give byte-identical files.

Exit status is 0 on success, 2 for bad configuration and 3 when an optimizer
fails to converge.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .channels import amplitude_damping, depolarizing, erasure_channel
from .coherent import (hashing_point_depolarizing, q1_amplitude_damping, q1_depolarizing,
                       q1_erasure, q1_md_closed_form, q1_platypus)
from .errors import ConvergenceFailure, NonadditivityError, SamplingExhausted
from .randscan import batch_stats, run_batch
from .witness import (delta_witness_ns, family_witness, lambda_max_analytic,
                      max_md_witness, max_mu, md_region_csv, md_witness_report, mu_report,
                      region_sweep_md, region_sweep_ns, u_bound)

EXIT_OK, EXIT_CONFIG, EXIT_CONVERGENCE = 0, 2, 3

PAIRS = {"ns-erasure": "erasure", "ns-ad": "ad", "ns-depolarizing": "depolarizing"}
FIG2_D = (3, 10, 50, 200, 1024)
FIG7_D = (10, 50)


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    options: dict = field(default_factory=dict)
    seed: int | None = None
    out: str | None = None
    fmt: str = "csv"

    def header(self) -> dict:
        opts = {k: v for k, v in sorted(self.options.items()) if v is not None}
        return {"command": self.command, "config": opts, "seed": self.seed,
                "version": __version__}


def parse_grid(text: str) -> np.ndarray:
    """``start:stop:count`` or a comma-separated list."""
    try:
        if ":" in text:
            a, b, n = text.split(":")
            n = int(n)
            if n < 1:
                raise ValueError
            return np.linspace(float(a), float(b), n)
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse grid {text!r}; use start:stop:count or a,b,c") from None
    if not vals:
        raise ConfigError("grid is empty")
    return np.array(vals)


def parse_ints(text: str) -> list[int]:
    try:
        vals = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"expected comma-separated integers, got {text!r}") from None
    if not vals:
        raise ConfigError("integer list is empty")
    return vals


def _num(v: float) -> float:
    return round(float(v), 12)


def _rows_csv(columns, rows, header: dict) -> str:
    buf = io.StringIO()
    buf.write("# " + json.dumps(header, sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([repr(_num(v)) if isinstance(v, (float, np.floating)) else v for v in r])
    return buf.getvalue()


def _json_doc(payload: dict, header: dict) -> str:
    return json.dumps({"provenance": header, **payload}, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# subcommands

def _require(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise ConfigError(f"--{n.replace('_', '-')} is required here")


def cmd_q1(args, cfg: RunConfig):
    ch = args.channel
    if args.param is not None:
        slot = {"platypus": "s", "md": "d", "erasure": "lam", "ad": "gamma", "depolarizing": "p"}[ch]
        if getattr(args, slot) is None:
            setattr(args, slot, int(args.param) if slot == "d" else args.param)
    if ch == "platypus":
        _require(args, "s")
        r = q1_platypus(args.s)
        out = {"channel": ch, "s": args.s, "q1": r.value, "argmax": list(r.argmax)}
    elif ch == "md":
        _require(args, "d")
        r = q1_md_closed_form(args.d)
        out = {"channel": ch, "d": args.d, "q1": r.value, "argmax": list(r.argmax)}
    elif ch == "erasure":
        _require(args, "lam")
        out = {"channel": ch, "lambda": args.lam, "d": args.d or 2,
               "q1": q1_erasure(args.lam, args.d or 2)}
    elif ch == "ad":
        _require(args, "gamma")
        r = q1_amplitude_damping(args.gamma)
        out = {"channel": ch, "gamma": args.gamma, "q1": r.value, "argmax": list(r.argmax)}
    else:
        _require(args, "p")
        out = {"channel": ch, "p": args.p, "q1": q1_depolarizing(args.p)}
    return _json_doc(out, cfg.header())


def cmd_witness(args, cfg: RunConfig):
    if args.pair == "md-erasure":
        _require(args, "d", "lam")
        if args.w is not None:
            rep = (mu_report if args.mode == "capacity" else md_witness_report)(args.w, args.d, args.lam)
        else:
            best = (max_mu if args.mode == "capacity" else max_md_witness)(args.d, args.lam)
            rep = (mu_report if args.mode == "capacity" else md_witness_report)(best.x, args.d, args.lam)
        return _json_doc({"report": rep.to_dict()}, cfg.header())
    _require(args, "s", "x")
    rep = family_witness(PAIRS[args.pair], args.s, args.x)
    return _json_doc({"report": rep.to_dict()}, cfg.header())


def _ns_columns(curve):
    return [[r.param, r.x_min if r.x_min is not None else "empty",
             r.x_max if r.x_max is not None else "empty", r.method_min, r.method_max]
            for r in curve.rows]


def cmd_region(args, cfg: RunConfig):
    if args.pair == "md-erasure":
        d_list = parse_ints(args.d_list) if args.d_list else list(FIG2_D)
        lams = parse_grid(args.x_grid) if args.x_grid else None
        q1c, capc = region_sweep_md(d_list, lams)
        return md_region_csv(q1c, capc, header=cfg.header())
    _require(args, "grid")
    xs = parse_grid(args.x_grid) if args.x_grid else None
    curve = region_sweep_ns(PAIRS[args.pair], parse_grid(args.grid), xs)
    return _rows_csv(["s", "x_min", "x_max", "method_min", "method_max"], _ns_columns(curve),
                     cfg.header())


def _fig1(args, header):
    s_grid = parse_grid(args.grid) if args.grid else np.linspace(0.0, 0.5, 26)
    p_star = hashing_point_depolarizing()
    partners = [erasure_channel(0.5), amplitude_damping(0.5), depolarizing(p_star)]
    q1k = [q1_erasure(0.5), q1_amplitude_damping(0.5).value, q1_depolarizing(p_star)]
    rows = []
    for s in s_grid:
        vals = [delta_witness_ns(s, K, q).witness_value + q for K, q in zip(partners, q1k)]
        rows.append([float(s), *vals])
    return _rows_csv(["s", "erasure_half", "ad_half", "depolarizing_pstar"], rows, header)


def _fig2(args, header):
    d_list = parse_ints(args.d_list) if args.d_list else list(FIG2_D)
    q1c, capc = region_sweep_md(d_list)
    return md_region_csv(q1c, capc, header=header)


def _fig3(args, header):
    lams = parse_grid(args.grid) if args.grid else np.linspace(0.0, 1.0, 51)
    rows = []
    for lam in lams:
        rep = family_witness("erasure", 0.5, float(lam))
        rows.append([float(lam), rep.witness_value])
    header = {**header, "lambda_max_analytic": lambda_max_analytic(0.5)}
    return _rows_csv(["lambda", "delta"], rows, header)


def _fig_region(family):
    def run(args, header):
        s_grid = parse_grid(args.grid) if args.grid else np.linspace(0.05, 0.5, 10)
        if family == "depolarizing" and not args.grid:
            s_grid = np.linspace(0.44, 0.5, 7)
        curve = region_sweep_ns(family, s_grid)
        return _rows_csv(["s", "x_min", "x_max", "method_min", "method_max"], _ns_columns(curve),
                         header)
    return run


def _fig7(args, header):
    d_list = parse_ints(args.d_list) if args.d_list else list(FIG7_D)
    lams = parse_grid(args.grid) if args.grid else np.linspace(0.3, 0.7, 81)
    rows = []
    for d in d_list:
        q1_md = q1_md_closed_form(d + 1).value
        for lam in lams:
            lam = float(lam)
            wit = max_md_witness(d, lam).value
            dstar = wit + q1_md + q1_erasure(lam, d)
            rows.append([d, lam, wit, dstar - u_bound(lam, d)])
    return _rows_csv(["d", "lambda", "delta", "delta_star_minus_u"], rows, header)


FIGURES = {1: _fig1, 2: _fig2, 3: _fig3, 4: _fig_region("erasure"), 5: _fig_region("ad"),
           6: _fig_region("depolarizing"), 7: _fig7}


def cmd_fig(args, cfg: RunConfig):
    return FIGURES[args.id](args, cfg.header())


def cmd_randscan(args, cfg: RunConfig):
    if args.count < 1:
        raise ConfigError("--count must be positive")
    records = run_batch(args.count, args.seed, interval=args.interval, general=args.general)
    header = {**cfg.header(), "stats": batch_stats(records)}
    buf = io.StringIO()
    buf.write(json.dumps({"provenance": header}, sort_keys=True) + "\n")
    for r in records:
        buf.write(r.to_json() + "\n")
    return buf.getvalue()


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nonadditivity",
                                description="Coherent-information amplification toolkit.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="output file (default: standard output)")
        return sp

    q = common(sub.add_parser("q1", help="single-letter coherent information of a channel"))
    q.add_argument("--channel", required=True, choices=["platypus", "md", "erasure", "ad", "depolarizing"])
    q.add_argument("--param", type=float, help="the channel's own noise parameter")
    q.add_argument("--s", type=float)
    q.add_argument("--d", type=int)
    q.add_argument("--lambda", dest="lam", type=float)
    q.add_argument("--gamma", type=float)
    q.add_argument("--p", type=float)

    w = common(sub.add_parser("witness", help="superadditivity witness at one parameter point"))
    w.add_argument("--pair", required=True, choices=[*PAIRS, "md-erasure"])
    w.add_argument("--s", type=float)
    w.add_argument("--x", type=float, help="partner noise parameter")
    w.add_argument("--d", type=int)
    w.add_argument("--lambda", dest="lam", type=float)
    w.add_argument("--w", type=float, help="fix the ansatz weight instead of maximizing")
    w.add_argument("--mode", choices=["coherent", "capacity"], default="coherent")

    r = common(sub.add_parser("region", help="region of positive witness, as CSV"))
    r.add_argument("--pair", required=True, choices=[*PAIRS, "md-erasure"])
    r.add_argument("--grid", help="s grid, start:stop:count or a,b,c")
    r.add_argument("--x-grid", help="coarse grid in the noise parameter")
    r.add_argument("--d-list", help="dimensions for md-erasure, e.g. 3,10,50")

    f = common(sub.add_parser("fig", help="regenerate the data behind a figure"))
    f.add_argument("--id", type=int, required=True, choices=sorted(FIGURES))
    f.add_argument("--grid", help="override the default sweep grid")
    f.add_argument("--d-list", help="override the dimensions (figures 2 and 7)")

    s = common(sub.add_parser("randscan", help="amplification test on random qubit channels"))
    s.add_argument("--count", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--interval", action="store_true", help="also bracket the superadditivity interval")
    s.add_argument("--general", action="store_true", help="sample full distortion matrices")
    return p


HANDLERS = {"q1": cmd_q1, "witness": cmd_witness, "region": cmd_region, "fig": cmd_fig,
            "randscan": cmd_randscan}


def execute(args) -> str:
    opts = {k: v for k, v in vars(args).items() if k not in ("command", "out", "seed")}
    cfg = RunConfig(args.command, opts, getattr(args, "seed", None), args.out)
    return HANDLERS[args.command](args, cfg)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = execute(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConvergenceFailure, SamplingExhausted) as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except NonadditivityError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
