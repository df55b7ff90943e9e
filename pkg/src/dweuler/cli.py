"""Command-line entry points.

Subcommands: ``run`` (one scheme), ``family`` (all six orders of one flux
family plus aggregates), ``diag`` (recompute family aggregates from saved
fields), ``info`` (print field-file headers). Exit codes: 0 success,
2 config error, 3 blow-up, 4 I/O error.
"""

import argparse
import json
import sys
from pathlib import Path

from . import runio
from .runio import (ConfigError, FieldFileError, RunConfig, config_from_mapping,
                    parse_config_file, read_field, EXIT_OK, EXIT_CONFIG,
                    EXIT_BLOWUP, EXIT_IO)


def _add_run_options(p, need_order):
    p.add_argument("--config", help="key=value config file; flags override it")
    p.add_argument("--problem", help="config2 | config3 | config4 | kh")
    p.add_argument("--flux", help="LCDCU | LDCU | VFV")
    if need_order:
        p.add_argument("--order", help="scheme order: 1 2 3 5 7 9")
    p.add_argument("--n", help="cells per direction")
    p.add_argument("--cfl", help="CFL number override")
    p.add_argument("--tfinal", dest="t_final", help="final time override")
    p.add_argument("--out", help="output directory")
    p.add_argument("--snapshots", help="comma-separated snapshot times")
    p.add_argument("--subdomain", action="append", default=None,
                   help="histogram rectangle x0,x1,y0,y1 (repeatable)")
    p.add_argument("--samples", help="sample-grid intervals for diagnostics")
    p.add_argument("--serial", action="store_true",
                   help="run family members sequentially")


def _build_config(args, need_order):
    kv = parse_config_file(args.config) if args.config else {}
    for key in ("problem", "flux", "n", "cfl", "t_final", "out", "snapshots",
                "samples") + (("order",) if need_order else ()):
        val = getattr(args, key, None)
        if val is not None:
            kv[key] = val
    if getattr(args, "subdomain", None):
        kv["subdomains"] = ";".join(args.subdomain)
    if not need_order:
        kv.setdefault("order", "1")  # placeholder; families run every order
    return config_from_mapping(kv)


def main(argv=None):
    parser = argparse.ArgumentParser(prog="dweuler", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="integrate one scheme")
    _add_run_options(p_run, need_order=True)

    p_fam = sub.add_parser("family", help="run all six orders of one family")
    _add_run_options(p_fam, need_order=False)

    p_diag = sub.add_parser("diag", help="recompute family aggregates")
    p_diag.add_argument("family_dir", help="directory written by 'family'")

    p_info = sub.add_parser("info", help="print field-file headers")
    p_info.add_argument("paths", nargs="+")

    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            cfg = _build_config(args, need_order=True)
            result = runio.run(cfg)
            print(f"{cfg.problem} {cfg.flux} r={cfg.order} n={cfg.n}: "
                  f"{result.status} at t={result.t_reached:.6g} -> {result.out}")
            return EXIT_OK if result.status == "ok" else EXIT_BLOWUP
        if args.command == "family":
            cfg = _build_config(args, need_order=False)
            report = runio.run_family(cfg, parallel=not args.serial)
            bad = [r for r, m in report["members"].items()
                   if m["status"] != "ok"]
            print(f"{cfg.problem} {cfg.flux} family n={cfg.n}: "
                  + ("ok" if not bad else f"failed members {bad}")
                  + f" -> {cfg.out}")
            return EXIT_OK if not bad else EXIT_BLOWUP
        if args.command == "diag":
            fam_dir = Path(args.family_dir)
            manifest = json.loads((fam_dir / "family_report.json").read_text())
            cfg = RunConfig(**{**manifest["config"], "out": fam_dir})
            report = {"config": cfg.to_dict(), "members": manifest["members"]}
            report.update(runio.aggregate_family(fam_dir, cfg))
            (fam_dir / "family_report.json").write_text(
                json.dumps(report, indent=2, sort_keys=True) + "\n")
            print(f"recomputed aggregates -> {fam_dir / 'family_report.json'}")
            return EXIT_OK
        if args.command == "info":
            for path in args.paths:
                _, meta = read_field(path)
                pairs = " ".join(f"{k}={meta[k]}" for k in
                                 ("problem", "family", "r", "nx", "ny",
                                  "gamma", "time", "kind") if k in meta)
                print(f"{path}: {pairs}")
            return EXIT_OK
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except (FieldFileError, OSError) as err:
        print(f"i/o error: {err}", file=sys.stderr)
        return EXIT_IO
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
