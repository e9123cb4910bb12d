"""Command-line interface.

Subcommands wrap the library one-to-one: ambient/dim/bound/defect/certify for
single architectures, search for the frontier and exhaustive modes, and
reproduce for the built-in reference tables.  Results go to stdout (or
--out); the effective configuration is echoed to stderr so every run is
reproducible from its log.

Exit codes: 0 success, 1 computation error, 2 usage error, 3 reproduce
mismatch.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .algebra import Prime, is_prime
from .bounds import FactsRegistry, bound_with_derivation, certify_nonfilling, DimensionFact
from .certify import (
    TABLE_IDS,
    certify_mfa,
    defect_report,
    reproduce_table,
)
from .errors import NeurodimError
from .pnn import (
    ambient_dim,
    expected_dim,
    format_architecture,
    is_unimodal,
    param_bound,
    parse_architecture,
)
from .rank import generic_rank
from .search import (
    CSV_HEADER,
    SearchConfig,
    exhaustive_search,
    frontier_search,
    result_csv_rows,
)

DEFAULT_PRIME_VALUE = 2**31 - 1


def _add_common(sub, arch_required=True):
    if arch_required:
        sub.add_argument("--arch", required=True, help="hyphen-separated widths, e.g. 2-3-4-5-4-6-4-1")
        sub.add_argument("--r", type=int, required=True, help="activation exponent")
    sub.add_argument("--prime", type=int, default=DEFAULT_PRIME_VALUE, help="prime modulus")
    sub.add_argument("--trials", type=int, default=3, help="independent weight samples per rank")
    sub.add_argument("--seed", type=int, default=0, help="base seed for all randomness")
    sub.add_argument("--facts", help="JSON facts file to read and update")
    sub.add_argument("--out", help="write the result here instead of stdout")
    sub.add_argument("--format", choices=("text", "json", "csv"), default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="neurodim", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    _add_common(subs.add_parser("ambient", help="ambient (coefficient-space) dimension"))
    _add_common(subs.add_parser("dim", help="generic Jacobian rank: dimension lower bound"))
    bound = subs.add_parser("bound", help="certified upper bound via recursive splitting")
    _add_common(bound)
    bound.add_argument(
        "--no-fact-routing",
        action="store_true",
        help="fully minimizing recursion instead of routing through stored facts",
    )
    _add_common(subs.add_parser("certify", help="minimal-filling certification"))
    _add_common(subs.add_parser("defect", help="expected dimension, defect, codimension"))

    search = subs.add_parser("search", help="frontier or exhaustive hidden-width search")
    search.add_argument("--depth", type=int, required=True, help="number of weight layers L")
    search.add_argument("--d0", type=int, required=True, help="input width")
    search.add_argument("--dl", type=int, required=True, help="output width")
    search.add_argument("--r", type=int, required=True)
    search.add_argument("--wmin", type=int, default=1, help="smallest hidden width")
    search.add_argument("--wmax", type=int, required=True, help="largest hidden width")
    search.add_argument("--budget", type=int, default=1000)
    search.add_argument("--mode", choices=("frontier", "exhaustive"), default="frontier")
    search.add_argument(
        "--budget-mode",
        choices=("proposals", "tests"),
        default="proposals",
        help="count every proposal against the budget, or only rank computations",
    )
    _add_common(search, arch_required=False)

    rep = subs.add_parser("reproduce", help="recompute a built-in reference table")
    rep.add_argument("--table", choices=TABLE_IDS, required=True)
    rep.add_argument("--depth-limit", type=int, default=None, help="largest census depth to rerun")
    _add_common(rep, arch_required=False)

    return parser


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w") as handle:
            handle.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _echo_config(args, extra: dict | None = None) -> None:
    parts = {"command": args.command}
    for name in ("arch", "r", "prime", "trials", "seed", "facts", "format"):
        if hasattr(args, name) and getattr(args, name) is not None:
            parts[name] = getattr(args, name)
    if extra:
        parts.update(extra)
    print("config: " + " ".join(f"{k}={v}" for k, v in parts.items()), file=sys.stderr)


def _load_registry(args) -> FactsRegistry:
    if getattr(args, "facts", None):
        try:
            return FactsRegistry.load(args.facts)
        except FileNotFoundError:
            return FactsRegistry()
    return FactsRegistry()


def _save_registry(args, registry: FactsRegistry) -> None:
    if getattr(args, "facts", None):
        registry.save(args.facts)


def _prime(args) -> Prime:
    if not is_prime(args.prime):
        raise NeurodimError(f"--prime {args.prime} is not prime")
    return Prime(args.prime)


def _parse_arch(args):
    return parse_architecture(args.arch, args.r)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except NeurodimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _dispatch(args) -> int:
    command = args.command
    if command == "ambient":
        arch = _parse_arch(args)
        _echo_config(args)
        value = ambient_dim(arch)
        if args.format == "json":
            _emit(json.dumps({"arch": str(arch), "r": arch.r, "ambient": value}), args.out)
        else:
            _emit(str(value), args.out)
        return 0

    if command == "dim":
        arch = _parse_arch(args)
        prime = _prime(args)
        _echo_config(args)
        registry = _load_registry(args)
        est = generic_rank(arch, prime, args.trials, args.seed)
        registry.merge(DimensionFact.from_rank(est))
        _save_registry(args, registry)
        payload = {
            "arch": str(arch),
            "r": arch.r,
            "rank_lower": est.rank_lower,
            "status": est.status,
            "ambient": ambient_dim(arch),
            "prime": prime.p,
            "trials": est.trials,
            "seed": est.seed,
        }
        if args.format == "json":
            _emit(json.dumps(payload), args.out)
        else:
            _emit(f"rank_lower={est.rank_lower} status={est.status}", args.out)
        return 0

    if command == "bound":
        arch = _parse_arch(args)
        _echo_config(args)
        registry = _load_registry(args)
        value, derivation = bound_with_derivation(
            arch, registry, route_through_facts=not args.no_fact_routing
        )
        fact = certify_nonfilling(arch, registry)
        registry.merge(fact)
        _save_registry(args, registry)
        if args.format == "json":
            _emit(
                json.dumps(
                    {
                        "arch": str(arch),
                        "r": arch.r,
                        "upper_bound": value,
                        "ambient": ambient_dim(arch),
                        "param_bound": param_bound(arch),
                        "status": fact.status,
                        "derivation": derivation,
                    }
                ),
                args.out,
            )
        else:
            _emit(f"upper_bound={value} derivation={derivation}", args.out)
        return 0

    if command == "certify":
        arch = _parse_arch(args)
        prime = _prime(args)
        _echo_config(args)
        registry = _load_registry(args)
        cert = certify_mfa(arch, prime, args.trials, args.seed, registry)
        _save_registry(args, registry)
        if args.format == "json":
            _emit(json.dumps(cert.to_json_dict()), args.out)
        else:
            lines = [
                f"arch={cert.arch} r={cert.arch.r}",
                f"filling rank_lower={cert.filling_evidence.rank_lower} "
                f"certified={cert.filling_evidence.certified_filling} "
                f"ambient={ambient_dim(arch)}",
            ]
            for d in cert.decrement_results:
                lines.append(
                    f"  decrement d_{d.index} {format_architecture(d.widths)}: "
                    f"status={d.status} rank_lower={d.rank_lower} upper_bound={d.upper_bound}"
                )
            lines.append(f"overall={cert.overall} unimodal={cert.unimodal}")
            _emit("\n".join(lines), args.out)
        return 0

    if command == "defect":
        arch = _parse_arch(args)
        prime = _prime(args)
        _echo_config(args)
        rep = defect_report(arch, prime, args.trials, args.seed)
        if args.format == "json":
            _emit(json.dumps(rep.to_json_dict()), args.out)
        else:
            _emit(
                f"expected_dim={rep.expected_dim} dim={rep.dim} "
                f"defect={rep.defect} codim={rep.codim} status={rep.status}",
                args.out,
            )
        return 0

    if command == "search":
        prime = _prime(args)
        config = SearchConfig(
            depth=args.depth,
            d0=args.d0,
            d_last=args.dl,
            width_min=args.wmin,
            width_max=args.wmax,
            r=args.r,
            budget=args.budget,
            seed=args.seed,
            prime=prime,
            trials=args.trials,
            budget_mode=args.budget_mode,
        )
        _echo_config(args, {"mode": args.mode, "budget": args.budget})
        registry = _load_registry(args)
        if args.mode == "frontier":
            result = frontier_search(config, registry=registry)
        else:
            result = exhaustive_search(config, registry=registry)
        _save_registry(args, registry)
        rows = result_csv_rows(result)
        if args.format == "json":
            _emit(json.dumps(rows), args.out)
        else:
            buf = io.StringIO()
            writer = csv.DictWriter(buf, fieldnames=CSV_HEADER.split(","))
            writer.writeheader()
            writer.writerows(rows)
            _emit(buf.getvalue().rstrip("\n"), args.out)
        return 0

    if command == "reproduce":
        prime = _prime(args)
        _echo_config(args, {"table": args.table})
        report = reproduce_table(
            args.table, prime, args.trials, args.seed, depth_limit=args.depth_limit
        )
        if args.format == "json":
            _emit(
                json.dumps(
                    {
                        "table": report.table_id,
                        "ok": report.ok,
                        "cells": [
                            {
                                "label": c.label,
                                "expected": _json_safe(c.expected),
                                "actual": _json_safe(c.actual),
                                "ok": c.ok,
                            }
                            for c in report.cells
                        ],
                    }
                ),
                args.out,
            )
        else:
            lines = []
            for c in report.cells:
                mark = "ok" if c.ok else f"MISMATCH expected={c.expected} actual={c.actual}"
                lines.append(f"{c.label}: {mark}")
            lines.append(f"table={report.table_id} ok={report.ok}")
            _emit("\n".join(lines), args.out)
        return 0 if report.ok else 3

    raise NeurodimError(f"unhandled command {command}")


def _json_safe(value):
    if isinstance(value, tuple):
        return [_json_safe(v) for v in value]
    return value


if __name__ == "__main__":
    sys.exit(main())
