"""Command-line front end.

Subcommands: inspect, levelset, verdict, reproduce-examples.  Stdout carries
a human-readable summary (inspect prints its JSON document directly); files
under --out carry the machine-readable artifacts, each embedding the job
configuration and a content hash of the resolved inputs so reruns are
byte-identical.

Exit codes: 0 success, 2 input error, 3 numerical-quality failure,
4 reference-table failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import os
import sys

import numpy as np

from . import levelset as LS
from . import reference, rif
from . import verdict as V
from .errors import (BidiscError, InclusionViolated, InsufficientLadder,
                     InvalidInput, NoBranch, RefineResolution)

INPUT_ERRORS = (InvalidInput,)
QUALITY_ERRORS = (InsufficientLadder, RefineResolution, NoBranch,
                  InclusionViolated)


@dataclasses.dataclass
class JobConfig:
    command: str
    symbols: list
    beta: list
    resolution: int
    samples: int
    seed: int
    out: str
    alpha: str | None = None
    window: bool = True
    only: str | None = None

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def _content_hash(config: JobConfig, resolved_inputs) -> str:
    payload = config.to_dict()
    payload.pop("out", None)  # the destination is not an input
    blob = json.dumps({"config": payload, "inputs": resolved_inputs},
                      sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha1(blob).hexdigest()


def _write_json(path: str, payload: dict) -> None:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _load_symbol_spec(text: str):
    if text.strip().startswith("{"):
        return rif.parse_symbol(text)
    if os.path.exists(text):
        with open(text) as fh:
            return rif.parse_symbol(fh.read())
    return rif.parse_symbol(text)


def _parse_alpha(text: str) -> complex:
    cleaned = text.strip().replace(" ", "").replace("i", "j")
    try:
        val = complex(cleaned)
    except ValueError as exc:
        raise InvalidInput(f"cannot parse value {text!r}") from exc
    if abs(val) == 0:
        raise InvalidInput("level-set value must be unimodular, got 0")
    return val / abs(val) if abs(abs(val) - 1.0) > 1e-12 else val


def _slug(name: str) -> str:
    out = "".join(ch if ch.isalnum() else "_" for ch in name)
    return out.strip("_") or "symbol"


def cmd_inspect(args) -> int:
    sym = _load_symbol_spec(args.symbol)
    config = JobConfig(command="inspect", symbols=[args.symbol], beta=[],
                       resolution=args.resolution, samples=args.samples,
                       seed=args.seed, out=args.out)
    doc: dict = {"symbol": sym.to_dict(), "kind": sym.kind}
    if sym.kind == "rif":
        base = sym.base
        doc["bidegree"] = list(base.bidegree)
        doc["stability"] = base.stability.to_dict()
        doc["singularities"] = []
        for sg in base.singularities:
            entry = sg.to_dict()
            val = sym.prefactor * sg.nontangential_value
            entry["symbol_value"] = [val.real, val.imag]
            doc["singularities"].append(entry)
    else:
        doc["bidegree"] = list(sym.base.bidegree)
        doc["sup_modulus"] = sym.base.sup_modulus
    doc["lines"] = [f.to_dict() for f in LS.detect_lines(sym)]
    doc["job"] = config.to_dict()
    doc["input_hash"] = _content_hash(config, sym.to_dict())
    text = json.dumps(doc, indent=2, sort_keys=True)
    print(text)
    name = _slug(sym.name or "symbol")
    _write_json(os.path.join(args.out, f"inspect_{name}.json"), doc)
    return 0


def cmd_levelset(args) -> int:
    sym = _load_symbol_spec(args.symbol)
    alpha = _parse_alpha(args.alpha)
    config = JobConfig(command="levelset", symbols=[args.symbol], beta=[],
                       resolution=args.resolution, samples=args.samples,
                       seed=args.seed, out=args.out, alpha=args.alpha)
    ls = LS.trace_level_set(sym, alpha, args.resolution)
    name = _slug(sym.name or "symbol")
    aid = (f"re{alpha.real:.3f}_im{alpha.imag:.3f}"
           .replace("-", "m").replace(".", "p"))
    os.makedirs(args.out, exist_ok=True)
    csv_path = os.path.join(args.out, f"levelset_{name}_{aid}.csv")
    with open(csv_path, "w") as fh:
        fh.write(ls.to_csv())
    meta = {
        "alpha": [alpha.real, alpha.imag],
        "branches": len(ls.branches),
        "vertical_lines": [[t.real, t.imag] for t in ls.vertical_lines],
        "horizontal_lines": [[t.real, t.imag] for t in ls.horizontal_lines],
        "max_residual": max((b.max_residual for b in ls.branches), default=0.0),
        "resolution": ls.resolution,
        "csv": csv_path,
        "job": config.to_dict(),
        "input_hash": _content_hash(config, sym.to_dict()),
    }
    _write_json(os.path.join(args.out, f"levelset_{name}_{aid}.json"), meta)
    print(f"level set of {sym.name or 'symbol'} at {alpha:.6g}: "
          f"{len(ls.branches)} branch(es), "
          f"{len(ls.vertical_lines)} vertical / "
          f"{len(ls.horizontal_lines)} horizontal line(s)")
    print(f"branch CSV written to {csv_path}")
    return 0


def cmd_verdict(args) -> int:
    s1 = _load_symbol_spec(args.symbol1)
    s2 = _load_symbol_spec(args.symbol2)
    betas = [float(b) for b in (args.beta or [0.0])]
    pair = V.SymbolPair(s1, s2, betas)
    config = JobConfig(command="verdict", symbols=[args.symbol1, args.symbol2],
                       beta=betas, resolution=args.resolution,
                       samples=args.samples, seed=args.seed, out=args.out,
                       window=not args.no_window)
    alpha_pairs = None
    if args.alpha_pair:
        alpha_pairs = [( _parse_alpha(a), _parse_alpha(b))
                       for a, b in (p.split(",") for p in args.alpha_pair)]
    v = V.decide(pair, resolution=args.resolution, samples=args.samples,
                 seed=args.seed, alpha_pairs=alpha_pairs,
                 use_windows=not args.no_window, anisotropic=args.anisotropic)
    doc = v.to_dict()
    doc["job"] = config.to_dict()
    doc["input_hash"] = _content_hash(config, [s1.to_dict(), s2.to_dict()])
    os.makedirs(args.out, exist_ok=True)
    _write_json(os.path.join(args.out, "verdict.json"), doc)
    for b_key, fit in doc["crosscheck"].items():
        csv_path = os.path.join(args.out, f"ladder_beta{_slug(b_key)}.csv")
        with open(csv_path, "w") as fh:
            fh.write("delta,value,stderr,samples,zero_hits\n")
            for rung in fit["rungs"]:
                fh.write(f"{rung['delta']:.12g},{rung['value']:.12g},"
                         f"{rung['stderr']:.12g},{rung['samples']},"
                         f"{int(rung['zero_hits'])}\n")
    print(f"rule: {v.triggered_rule}")
    for b in betas:
        line = f"beta={b:g}: {v.conclusions[b]}"
        if b in v.crosschecks:
            line += (f"  (measured slope {v.crosschecks[b]['slope']:.3f} "
                     f"vs threshold {2 * b + 4:g})")
        print(line)
    if v.caveats:
        print("caveats:")
        for c in v.caveats:
            print(f"  - {c}")
    print(f"verdict JSON written to {os.path.join(args.out, 'verdict.json')}")
    return 0


def cmd_reproduce(args) -> int:
    config = JobConfig(command="reproduce-examples", symbols=[],
                       beta=[0.0, -0.5], resolution=args.resolution,
                       samples=args.samples, seed=args.seed, out=args.out,
                       only=args.only)
    rows = reference.run_reference_suite(only=args.only, samples=args.samples,
                                         seed=args.seed,
                                         resolution=args.resolution)
    if not rows:
        print(f"no reference rows match filter {args.only!r}", file=sys.stderr)
        return 2
    for row in rows:
        print(row.line())
    n_fail = sum(1 for r in rows if not r.passed)
    print(f"{len(rows) - n_fail}/{len(rows)} reference rows passed")
    payload = {
        "rows": [{**dataclasses.asdict(r)} for r in rows],
        "job": config.to_dict(),
        "input_hash": _content_hash(config, []),
    }
    _write_json(os.path.join(args.out, "reference_table.json"), payload)
    return 0 if n_fail == 0 else 4


def _add_common(parser, suppress=False):
    kw = {"default": argparse.SUPPRESS} if suppress else {}
    parser.add_argument("--out", help="output directory",
                        **(kw or {"default": "./out"}))
    parser.add_argument("--resolution", type=int,
                        help="level-set trace resolution",
                        **(kw or {"default": 4096}))
    parser.add_argument("--samples", type=int,
                        help="Monte Carlo samples per ladder rung",
                        **(kw or {"default": 1_000_000}))
    parser.add_argument("--seed", type=int, help="RNG seed",
                        **(kw or {"default": 42}))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bidisc",
        description="Level-set geometry and Carleson-box volume scaling for "
                    "self-maps of the bidisc")
    _add_common(parser)
    sub = parser.add_subparsers(dest="command", required=True)

    p_inspect = sub.add_parser("inspect", help="bidegree, stability, "
                               "singularities, exceptional lines")
    p_inspect.add_argument("symbol")
    _add_common(p_inspect, suppress=True)
    p_inspect.set_defaults(func=cmd_inspect)

    p_ls = sub.add_parser("levelset", help="trace a level set to CSV")
    p_ls.add_argument("symbol")
    p_ls.add_argument("--alpha", required=True,
                      help="unimodular value, e.g. -1 or 0.6+0.8i")
    _add_common(p_ls, suppress=True)
    p_ls.set_defaults(func=cmd_levelset)

    p_vd = sub.add_parser("verdict", help="full pipeline: features, probes, "
                          "scaling, verdict")
    p_vd.add_argument("symbol1")
    p_vd.add_argument("symbol2")
    p_vd.add_argument("--beta", action="append", type=float,
                      help="weight parameter, repeatable (default 0)")
    p_vd.add_argument("--alpha-pair", action="append", metavar="A1,A2",
                      help="extra level-set value pair to scan, repeatable")
    p_vd.add_argument("--no-window", action="store_true",
                      help="disable feature-derived sampling windows")
    p_vd.add_argument("--anisotropic", action="store_true",
                      help="add the anisotropic box spot-check")
    _add_common(p_vd, suppress=True)
    p_vd.set_defaults(func=cmd_verdict)

    p_rep = sub.add_parser("reproduce-examples",
                           help="run the reference experiments table")
    p_rep.add_argument("--only", help="substring filter on row names")
    _add_common(p_rep, suppress=True)
    p_rep.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except INPUT_ERRORS as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except QUALITY_ERRORS as exc:
        print(f"numerical-quality failure: {exc}", file=sys.stderr)
        return 3
    except BidiscError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
