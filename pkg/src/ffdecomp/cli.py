"""Batch command-line front end.

Every invocation writes one JSONL RunRecord per instance to stdout (or
--out) and a human summary to stderr.  Exit codes: 0 all assertions in
scope passed, 1 an assertable inequality failed, 2 usage error, 3 budget
exceeded without resolution.

Records under --stable zero the volatile fields (timestamp, elapsed, node
counts) so reruns and different worker counts are byte-comparable after
the canonical ordering the commands already emit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import experiments, fpcore
from .charsum import Character, karatsuba_ratio, vinogradov_check, weil_report
from .decomp import DecompQuery, run_query
from .errors import ConfigError, FFDecompError
from .experiments import (
    bourgain_report,
    gd_low_value,
    growth_exponent_report,
    interval_mult_report,
    interval_set,
    n_count_report,
    packing_bound_harness,
    primitive_root_max_part,
    primitive_root_min_part,
    sarkozy_max_part,
    sarkozy_min_part,
    shkvyu_report,
    subgroup_ratio_report,
    w_identity_report,
)
from .reports import json_ready
from .setalg import FpSet, parse_set

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

_VOLATILE_KEYS = {"elapsed", "nodes_explored", "nodes", "timestamp"}

_CSV_FIELDS = ["command", "experiment", "p", "d", "status", "lhs", "rhs", "ok", "hypothesis_ok"]


def _stabilize(obj):
    if isinstance(obj, dict):
        return {
            k: (0 if k in _VOLATILE_KEYS else _stabilize(v)) for k, v in obj.items()
        }
    if isinstance(obj, list):
        return [_stabilize(v) for v in obj]
    return obj


def make_record(command: str, seed: int, payload: dict, stable: bool = False) -> dict:
    record = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "timestamp": 0 if stable else int(time.time()),
        "seed": seed,
        "payload": _stabilize(payload) if stable else payload,
    }
    return record


def parse_target(text: str, p: int | None):
    """Resolve a named family or a p:{...} literal to a set.

    Families: qr, subgroup:d, primroots, interval:m,n (all need --prime).
    Returns (set, meta) where meta records the family and d when known.
    """
    text = text.strip()
    if ":" in text and text.split(":", 1)[0].isdigit():
        s = parse_set(text)
        if p is not None and s.p != p:
            raise ValueError(f"set literal modulus {s.p} disagrees with --prime {p}")
        return s, {"family": "literal"}
    if p is None:
        raise ValueError(f"family {text!r} needs --prime")
    fld = fpcore.make_field(p)
    if text == "qr":
        return fpcore.subgroup(fld, 2).elements, {"family": "qr", "d": 2}
    if text.startswith("subgroup:"):
        d = int(text.split(":", 1)[1])
        return fpcore.subgroup(fld, d).elements, {"family": "subgroup", "d": d}
    if text == "primroots":
        n = p - 1
        bits = 0
        for k in range(n):
            if math.gcd(k, n) == 1:
                bits |= 1 << fld.exp[k]
        return FpSet(p, bits), {"family": "primroots"}
    if text.startswith("interval:"):
        parts = text.split(":", 1)[1].split(",")
        if len(parts) != 2:
            raise ValueError("interval family is interval:m,n")
        m, n = int(parts[0]), int(parts[1])
        return interval_set(p, m, n), {"family": "interval", "m": m, "n": n}
    raise ValueError(f"unknown set family {text!r}")


def _emit(records, args) -> None:
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=_CSV_FIELDS, extrasaction="ignore")
        writer.writeheader()
        for rec in records:
            payload = rec["payload"]
            row = {
                "command": rec["command"],
                "experiment": payload.get("experiment", payload.get("type", "")),
                "p": payload.get("instance", {}).get("p", ""),
                "d": payload.get("instance", {}).get("d", ""),
                "status": payload.get("status", payload.get("extras", {}).get("status", "")),
                "lhs": payload.get("lhs", ""),
                "rhs": payload.get("rhs", ""),
                "ok": payload.get("ok", ""),
                "hypothesis_ok": payload.get("hypothesis_ok", ""),
            }
            writer.writerow(row)
        text = buf.getvalue()
    else:
        lines = [json.dumps(rec, sort_keys=True, separators=(",", ":")) for rec in records]
        text = "\n".join(lines) + ("\n" if lines else "")
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _exit_code(records, expectations_failed: int = 0) -> int:
    failed = expectations_failed
    budget = 0
    for rec in records:
        payload = rec["payload"]
        if payload.get("ok") is False:
            failed += 1
        status = payload.get("status") or payload.get("extras", {}).get("status")
        if status == "budget_exceeded":
            budget += 1
    if failed:
        return EXIT_FAIL
    if budget:
        return EXIT_BUDGET
    return EXIT_OK


def _summarize(records, code: int) -> None:
    oks = sum(1 for r in records if r["payload"].get("ok") is True)
    fails = sum(1 for r in records if r["payload"].get("ok") is False)
    print(
        f"records={len(records)} ok={oks} fail={fails} exit={code}",
        file=sys.stderr,
    )


# ---------------------------------------------------------------------------
# subcommand handlers

def _require(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise ValueError(f"--{name.replace('_', '-')} is required for this command")


def _cmd_search(args):
    _require(args, "prime", "set")
    target, meta = parse_target(args.set[0], args.prime)
    mode = "self_decomposition" if args.mode == "self" else "decomposition"
    subgroup_d = meta.get("d") if meta.get("family") in ("qr", "subgroup") else None
    query = DecompQuery(
        S=target,
        mode=mode,
        min_size=args.min_size,
        node_budget=args.node_budget,
        time_budget=args.time_budget,
        subgroup_d=subgroup_d,
    )
    report = run_query(query, workers=args.workers)
    payload = report.to_dict()
    payload["instance"] = json_ready({"p": target.p, "set": args.set[0], **meta})
    _attach_family_bounds(payload, meta, target.p, report)
    return [make_record("search", args.seed, payload, args.stable)]


def _attach_family_bounds(payload, meta, p, report):
    family = meta.get("family")
    extras = payload.setdefault("extras", {})
    if family == "qr":
        extras["min_part_floor"] = sarkozy_min_part(p)
        extras["max_part_ceiling"] = sarkozy_max_part(p)
    elif family == "subgroup":
        extras["min_part_floor"] = gd_low_value(p, meta["d"]) if meta["d"] >= 2 else None
    elif family == "primroots":
        extras["min_part_floor"] = primitive_root_min_part(p)
        extras["max_part_ceiling"] = primitive_root_max_part(p)
    floor = extras.get("min_part_floor")
    if floor and report.witnesses:
        min_part = min(min(len(a), len(b)) for a, b in report.witnesses)
        extras["needs_review"] = min_part < floor / 2
    return payload


def _cmd_packing(args):
    _require(args, "prime")
    if args.set:
        target, meta = parse_target(args.set[0], args.prime)
        query = DecompQuery(
            S=target,
            mode="packing",
            min_size=1,
            node_budget=args.node_budget,
            time_budget=args.time_budget,
            subgroup_d=meta.get("d") if meta.get("family") in ("qr", "subgroup") else None,
        )
        report = run_query(query, workers=args.workers)
        payload = report.to_dict()
        payload["instance"] = json_ready({"p": target.p, "set": args.set[0], **meta})
        return [make_record("packing", args.seed, payload, args.stable)]
    _require(args, "d")
    rep = packing_bound_harness(
        args.prime,
        args.d,
        node_budget=args.node_budget,
        time_budget=args.time_budget,
        workers=args.workers,
    )
    return [make_record("packing", args.seed, rep.to_dict(), args.stable)]


def _parse_poly(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",")]
    except ValueError:
        raise ValueError(f"bad polynomial literal {text!r}: expected c0,c1,...") from None


def _cmd_weil(args):
    _require(args, "prime", "d", "poly")
    fld = fpcore.make_field(args.prime)
    chi = Character(fld, args.d, args.j if args.j is not None else 1)
    rep = weil_report(chi, _parse_poly(args.poly))
    return [make_record("weil", args.seed, rep.to_dict(), args.stable)]


def _two_sets(args):
    if not args.set or len(args.set) != 2:
        raise ValueError("give --set twice: A then B")
    a, _ = parse_target(args.set[0], args.prime)
    b, _ = parse_target(args.set[1], args.prime)
    return a, b


def _cmd_vinogradov(args):
    _require(args, "prime", "d")
    fld = fpcore.make_field(args.prime)
    chi = Character(fld, args.d, args.j if args.j is not None else 1)
    a, b = _two_sets(args)
    rep = vinogradov_check(chi, a, b)
    return [make_record("vinogradov", args.seed, rep.to_dict(), args.stable)]


def _cmd_karatsuba(args):
    _require(args, "prime", "d")
    fld = fpcore.make_field(args.prime)
    chi = Character(fld, args.d, args.j if args.j is not None else 1)
    if args.set:
        a, b = _two_sets(args)
        rep = karatsuba_ratio(chi, a, b, args.nu or 1)
    else:
        rep = subgroup_ratio_report(args.prime, args.d)
    return [make_record("karatsuba", args.seed, rep.to_dict(), args.stable)]


def _cmd_wsum(args):
    _require(args, "prime", "d", "set")
    b, _ = parse_target(args.set[0], args.prime)
    rep = w_identity_report(args.prime, args.d, b)
    return [make_record("wsum", args.seed, rep.to_dict(), args.stable)]


def _cmd_nsum(args):
    _require(args, "prime", "d", "set")
    b, _ = parse_target(args.set[0], args.prime)
    rep = n_count_report(args.prime, args.d, b)
    return [make_record("nsum", args.seed, rep.to_dict(), args.stable)]


def _cmd_shkvyu(args):
    _require(args, "prime", "d", "shifts")
    shifts = [int(tok) for tok in args.shifts.split(",")]
    if args.m is not None and args.m != len(shifts):
        raise ValueError(f"--m {args.m} disagrees with {len(shifts)} shifts")
    rep = shkvyu_report(args.prime, args.d, shifts)
    return [make_record("shkvyu", args.seed, rep.to_dict(), args.stable)]


def _cmd_growth(args):
    _require(args, "prime", "d")
    rep = growth_exponent_report(args.prime, args.d)
    return [make_record("growth", args.seed, rep.to_dict(), args.stable)]


def _cmd_interval(args):
    _require(args, "prime")
    if not args.set or len(args.set) != 3:
        raise ValueError("give --set three times: interval:m,n then A then B")
    first, meta = parse_target(args.set[0], args.prime)
    if meta.get("family") != "interval":
        raise ValueError("first --set must be an interval:m,n family")
    a, _ = parse_target(args.set[1], args.prime)
    b, _ = parse_target(args.set[2], args.prime)
    rep = interval_mult_report(args.prime, meta["m"], meta["n"], a, b)
    return [make_record("interval", args.seed, rep.to_dict(), args.stable)]


def _cmd_bourgain(args):
    _require(args, "prime")
    a, b = _two_sets(args)
    rep = bourgain_report(args.prime, a, b)
    return [make_record("bourgain", args.seed, rep.to_dict(), args.stable)]


# ---------------------------------------------------------------------------
# sweep

_D_FILTERS = ("all", "proper", "order>=2")


def _d_options(p: int, d_filter) -> list[int]:
    divs = fpcore.divisors(p - 1)
    if d_filter is None or d_filter == "all":
        return [d for d in divs if d >= 2]
    if d_filter == "proper":
        return [d for d in divs if 2 <= d < p - 1]
    if d_filter == "order>=2":
        return [d for d in divs if d >= 2 and (p - 1) // d >= 2]
    try:
        d = int(d_filter)
    except (TypeError, ValueError):
        raise ConfigError(f"bad d_filter {d_filter!r}") from None
    return [d] if d in divs and d >= 1 else []


def _load_config(path: str) -> dict:
    try:
        raw = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    try:
        cfg = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: line {exc.lineno}") from None
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    if "experiment" not in cfg:
        raise ConfigError("config field 'experiment' is required")
    return cfg


def _config_primes(cfg: dict) -> list[int]:
    rng = cfg.get("p_range")
    if (
        not isinstance(rng, list)
        or len(rng) != 2
        or not all(isinstance(x, int) for x in rng)
    ):
        raise ConfigError("config field 'p_range' must be [lo, hi]")
    lo, hi = rng
    primes = [p for p in fpcore.primes_up_to(hi) if p >= max(3, lo)]
    if not primes:
        raise ConfigError(f"p_range {rng} contains no usable prime")
    return primes


def _sweep_tasks(cfg: dict, seed: int):
    """Expand a config into an ordered list of (experiment, instance) tasks."""
    name = cfg["experiment"]
    samples = cfg.get("samples", 100)
    if name == "search":
        primes = _config_primes(cfg)
        family = cfg.get("set", "qr")
        mode = cfg.get("mode", "decomposition")
        tasks = []
        for p in primes:
            if family == "qr":
                tasks.append((name, {"p": p, "set": "qr", "mode": mode, "cfg": cfg}))
            elif family == "subgroup":
                for d in _d_options(p, cfg.get("d_filter", "proper")):
                    tasks.append(
                        (name, {"p": p, "set": f"subgroup:{d}", "mode": mode, "cfg": cfg})
                    )
            else:
                raise ConfigError(f"search sweep does not support set family {family!r}")
        return tasks
    if name == "packing":
        primes = _config_primes(cfg)
        return [
            (name, {"p": p, "d": d, "cfg": cfg})
            for p in primes
            for d in _d_options(p, cfg.get("d_filter", "all"))
        ]
    if name in ("growth", "karatsuba"):
        primes = _config_primes(cfg)
        d_filter = cfg.get("d_filter", "order>=2" if name == "growth" else "all")
        return [
            (name, {"p": p, "d": d, "cfg": cfg})
            for p in primes
            for d in _d_options(p, d_filter)
        ]
    if name == "vinogradov":
        _config_primes(cfg)
        gen = experiments.vinogradov_instances(samples, seed, p_max=cfg["p_range"][1])
    elif name == "weil":
        _config_primes(cfg)
        gen = experiments.weil_instances(
            samples, seed, p_max=cfg["p_range"][1], deg_max=cfg.get("deg_max", 6)
        )
    elif name == "wsum":
        _config_primes(cfg)
        gen = experiments.wsum_instances(
            samples, seed, p_max=cfg["p_range"][1], b_max=cfg.get("b_max", 6)
        )
    elif name == "nsum":
        _config_primes(cfg)
        gen = experiments.nsum_instances(
            samples, seed, p_max=cfg["p_range"][1], b_max=cfg.get("b_max", 6)
        )
    elif name == "shkvyu":
        _config_primes(cfg)
        gen = experiments.shkvyu_instances(
            seed,
            p_max=cfg["p_range"][1],
            order_cap=cfg.get("g_max", 30),
            ms=tuple(cfg.get("m", [2, 3])),
            samples=samples,
        )
    elif name == "interval":
        _config_primes(cfg)
        gen = experiments.interval_instances(samples, seed, p_max=cfg["p_range"][1])
    elif name == "bourgain":
        _config_primes(cfg)
        gen = experiments.bourgain_instances(
            samples, seed, p_max=cfg["p_range"][1], size_max=cfg.get("size_max", 6)
        )
    else:
        raise ConfigError(f"unknown sweep experiment {name!r}")
    return [(name, inst) for inst in gen]


def _sweep_run_one(task) -> dict:
    name, inst = task
    if name == "search":
        cfg = inst["cfg"]
        p = inst["p"]
        target, meta = parse_target(inst["set"], p)
        mode = "self_decomposition" if inst["mode"] == "self" else "decomposition"
        query = DecompQuery(
            S=target,
            mode=mode,
            min_size=cfg.get("min_size", 2),
            node_budget=cfg.get("node_budget", 10**8),
            time_budget=cfg.get("time_budget", 300.0),
            subgroup_d=meta.get("d"),
        )
        report = run_query(query)
        payload = report.to_dict()
        payload["instance"] = json_ready({"p": p, "set": inst["set"], "mode": inst["mode"]})
        return payload
    if name == "packing":
        cfg = inst["cfg"]
        rep = packing_bound_harness(
            inst["p"],
            inst["d"],
            node_budget=cfg.get("node_budget", 10**8),
            time_budget=cfg.get("time_budget", 300.0),
        )
        return rep.to_dict()
    if name == "growth":
        return growth_exponent_report(inst["p"], inst["d"]).to_dict()
    if name == "karatsuba":
        return subgroup_ratio_report(inst["p"], inst["d"]).to_dict()
    if name == "vinogradov":
        fld = fpcore.make_field(inst["p"])
        chi = Character(fld, inst["d"], inst["j"])
        rep = vinogradov_check(chi, inst["A"], inst["B"])
    elif name == "weil":
        fld = fpcore.make_field(inst["p"])
        chi = Character(fld, inst["d"], inst["j"])
        rep = weil_report(chi, inst["poly"])
    elif name == "wsum":
        rep = w_identity_report(inst["p"], inst["d"], inst["B"])
    elif name == "nsum":
        rep = n_count_report(inst["p"], inst["d"], inst["B"])
    elif name == "shkvyu":
        rep = shkvyu_report(inst["p"], inst["d"], inst["shifts"])
    elif name == "interval":
        rep = interval_mult_report(inst["p"], inst["m"], inst["n"], inst["A"], inst["B"])
    elif name == "bourgain":
        rep = bourgain_report(inst["p"], inst["A"], inst["B"])
    else:  # pragma: no cover - guarded by _sweep_tasks
        raise ConfigError(f"unknown sweep experiment {name!r}")
    out = rep.to_dict()
    index = inst.get("index")
    if index is not None:
        out["instance"]["index"] = index
    return out


def _cmd_sweep(args):
    _require(args, "config")
    cfg = _load_config(args.config)
    seed = args.seed if args.seed is not None else cfg.get("seed", 0)
    tasks = _sweep_tasks(cfg, seed)
    if not tasks:
        raise ConfigError("sweep expanded to an empty grid")
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            chunk = max(1, len(tasks) // (args.workers * 8))
            payloads = list(pool.map(_sweep_run_one, tasks, chunksize=chunk))
    else:
        payloads = [_sweep_run_one(t) for t in tasks]
    expect = cfg.get("expect")
    expectations_failed = 0
    if expect:
        for payload in payloads:
            if payload.get("status", payload.get("extras", {}).get("status")) != expect:
                expectations_failed += 1
    records = [make_record("sweep", seed, payload, args.stable) for payload in payloads]
    return records, expectations_failed


# ---------------------------------------------------------------------------
# argument parsing and dispatch

_HANDLERS = {
    "search": _cmd_search,
    "packing": _cmd_packing,
    "weil": _cmd_weil,
    "vinogradov": _cmd_vinogradov,
    "karatsuba": _cmd_karatsuba,
    "wsum": _cmd_wsum,
    "nsum": _cmd_nsum,
    "shkvyu": _cmd_shkvyu,
    "growth": _cmd_growth,
    "interval": _cmd_interval,
    "bourgain": _cmd_bourgain,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prime", type=int, help="prime modulus p")
    common.add_argument("--d", type=int, help="subgroup / character order index d")
    common.add_argument("--j", type=int, help="character index within X_d (default 1)")
    common.add_argument(
        "--set",
        action="append",
        help="set family (qr, subgroup:d, primroots, interval:m,n) or literal p:{...};"
        " repeat for multi-set commands",
    )
    common.add_argument("--m", type=int, help="number of shifts (shkvyu)")
    common.add_argument("--shifts", help="comma-separated shift list")
    common.add_argument("--nu", type=int, help="envelope exponent parameter")
    common.add_argument("--poly", help="polynomial coefficients c0,c1,... low to high")
    common.add_argument("--min-size", type=int, default=2, dest="min_size")
    common.add_argument("--node-budget", type=int, default=10**8, dest="node_budget")
    common.add_argument("--time-budget", type=float, default=300.0, dest="time_budget")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="write records to this file instead of stdout")
    common.add_argument("--cache-dir", dest="cache_dir", help="field table cache directory")
    common.add_argument("--format", choices=["jsonl", "csv"], default="jsonl")
    common.add_argument(
        "--stable",
        action="store_true",
        help="zero volatile fields (timestamps, elapsed, node counts) in records",
    )
    common.add_argument("--mode", choices=["decomposition", "self"], default="decomposition")

    parser = argparse.ArgumentParser(
        prog="ffdecomp",
        description="additive decompositions of multiplicative structures mod p",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _HANDLERS:
        sub.add_parser(name, parents=[common])
    sweep = sub.add_parser("sweep", parents=[common])
    sweep.add_argument("--config", help="sweep configuration JSON file")
    return parser


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if args.cache_dir:
        os.environ["FFDECOMP_CACHE_DIR"] = args.cache_dir
    try:
        if args.command == "sweep":
            records, expectations_failed = _cmd_sweep(args)
        else:
            records = _HANDLERS[args.command](args)
            expectations_failed = 0
    except (FFDecompError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(records, args)
    code = _exit_code(records, expectations_failed)
    _summarize(records, code)
    return code


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
