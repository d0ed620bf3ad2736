"""Command-line surface.

Subcommands: generate, check, score-partition, absorbers, profile, solve,
sweep.  Every report is JSON with sorted keys; file-emitting commands carry
a run manifest (command, input digest, seed, params, version, timestamp) so
that identical manifests reproduce byte-identical output.  Exit codes:
0 success, 1 negative verdict, 2 usage or parse error, 3 partial sweep
failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from dataclasses import asdict
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

from . import __version__
from .absorption import (connectivity_profile, enumerate_connectors,
                         enumerate_strong_absorbers, enumerate_weak_absorbers)
from .conditions import (HypothesisViolatedError, check_ghouila_houri,
                         check_nash_williams, check_ore,
                         check_semidegree_consequence, check_sparse_set_bound,
                         check_woodall)
from .extremal import (InfeasibleParamsError, find_sharp_pair,
                       generate_extremal, table_params, verify_partition)
from .fileio import EdgeListParseError, emit_edge_list, parse_edge_list
from .generators import random_min_semidegree, random_oriented
from .graph import GraphError, OrientedGraph, Partition4
from .hamilton import (TooLargeError, exact_brute, exact_dp,
                       find_hamilton_absorption)
from .seeds import derive_seed

SCHEMA = "oriham/1"

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_PARTIAL = 3


class UsageError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def _pair(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 'u,v', got {text!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers in {text!r}")


def _id_set(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated ids: {text!r}")


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _manifest(command: str, input_bytes: bytes, seed: int,
              params: dict, timestamp: str | None) -> dict:
    return {
        "command": command,
        "input_sha256": _digest(input_bytes),
        "seed": seed,
        "params": params,
        "version": __version__,
        "timestamp": timestamp if timestamp is not None else _now(),
    }


def _emit(obj, out: str | None) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _load_graph(path: str) -> OrientedGraph:
    try:
        return parse_edge_list(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}")
    except EdgeListParseError as exc:
        raise UsageError(f"{path}: {exc}")


def _load_partition(path: str, g: OrientedGraph) -> Partition4:
    try:
        payload = json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})")
    if isinstance(payload, dict) and "partition" in payload:
        payload = payload["partition"]
    if not isinstance(payload, dict) or set(payload) != {"A", "B", "C", "D"}:
        raise UsageError(f"{path}: expected an object with keys A, B, C, D")
    try:
        return Partition4.of(payload["A"], payload["B"], payload["C"], payload["D"])
    except (GraphError, ValueError, TypeError) as exc:
        raise UsageError(f"{path}: bad partition ({exc})")


def _partition_json(part: Partition4) -> dict:
    return {label: sorted(part.classes()[label]) for label in "ABCD"}


# -- subcommands --------------------------------------------------------------


def cmd_generate(args) -> int:
    try:
        params = table_params(args.n, args.a, ac_extra=args.ac_edges,
                              d_extra=args.d_edges, seed=args.seed)
    except InfeasibleParamsError as exc:
        raise UsageError(str(exc))
    g, part = generate_extremal(params)
    text = emit_edge_list(g)
    sidecar = {
        "schema": SCHEMA,
        "params": asdict(params),
        "partition": _partition_json(part),
        "sharp_bound": params.bound,
        "manifest": _manifest("generate", text.encode(), args.seed,
                              {"n": args.n, "a": args.a,
                               "ac_edges": args.ac_edges, "d_edges": args.d_edges},
                              args.timestamp),
    }
    if args.out is None:
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
        _emit(sidecar, args.out + ".json")
    return EXIT_OK


_CHECKS = {
    "ore": check_ore,
    "semideg": check_semidegree_consequence,
    "gh": check_ghouila_houri,
    "woodall": check_woodall,
    "nash-williams": check_nash_williams,
}


def cmd_check(args) -> int:
    g = _load_graph(args.input)
    try:
        if args.condition == "sparse-set":
            if args.set is None or args.sigma is None:
                raise UsageError("sparse-set requires --set and --sigma")
            report = check_sparse_set_bound(g, set(args.set), args.sigma)
        else:
            report = _CHECKS[args.condition](g)
    except HypothesisViolatedError as exc:
        raise UsageError(str(exc))
    _emit({"schema": SCHEMA, "report": report.to_json_dict()}, args.out)
    return EXIT_OK if report.satisfied else EXIT_NEGATIVE


def cmd_score_partition(args) -> int:
    g = _load_graph(args.input)
    part = _load_partition(args.partition, g)
    try:
        report = verify_partition(g, part, args.eta, args.ceta)
    except Exception as exc:
        raise UsageError(str(exc))
    _emit({"schema": SCHEMA, "report": report.to_json_dict()}, args.out)
    return EXIT_OK if report.verdict else EXIT_NEGATIVE


def cmd_absorbers(args) -> int:
    g = _load_graph(args.input)
    u, v = args.pair
    try:
        g.check_vertex(u)
        g.check_vertex(v)
        if args.kind == "connector":
            if args.k is None:
                raise UsageError("--kind connector requires --k")
            members = enumerate_connectors(g, u, v, args.k, cap=args.cap)
        elif args.kind == "strong":
            members = enumerate_strong_absorbers(g, u, v, cap=args.cap)
        else:
            members = enumerate_weak_absorbers(g, u, v, args.alpha1, cap=args.cap)
    except (GraphError, ValueError) as exc:
        raise UsageError(str(exc))
    _emit({
        "schema": SCHEMA,
        "kind": args.kind,
        "pair": [u, v],
        "count": len(members),
        "members": [list(m) for m in members],
    }, args.out)
    return EXIT_OK


def cmd_profile(args) -> int:
    g = _load_graph(args.input)
    prof = connectivity_profile(g)
    _emit({"schema": SCHEMA, "profile": prof.to_json_dict()}, args.out)
    return EXIT_OK


def cmd_solve(args) -> int:
    g = _load_graph(args.input)
    try:
        if args.method == "brute":
            result = exact_brute(g)
        elif args.method == "dp":
            result = exact_dp(g)
        else:
            result = find_hamilton_absorption(g, seed=args.seed)
    except TooLargeError as exc:
        raise UsageError(str(exc))
    _emit({"schema": SCHEMA, "method": args.method,
           "result": result.to_json_dict()}, args.out)
    return EXIT_OK if result.found else EXIT_NEGATIVE


# -- sweep --------------------------------------------------------------------


def _frac_json(x: Fraction) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


def _sweep_sharpness(entry: dict, seed: int) -> dict:
    n, a = int(entry["n"]), int(entry["a"])
    params = table_params(n, a, seed=seed)
    g, part = generate_extremal(params)
    pair = find_sharp_pair(g, params.bound)
    sizes_ok = tuple(len(part.classes()[lab]) for lab in "ABCD") == params.sizes
    verdict = exact_dp(g).verdict if n <= 24 else "skipped"
    ok = sizes_ok and pair is not None and verdict in ("none_exists", "skipped")
    return {"n": n, "a": a, "bound": params.bound,
            "sharp_pair": list(pair) if pair else None,
            "sizes_ok": sizes_ok, "hamilton_verdict": verdict, "ok": ok}


def _sweep_robustness(entry: dict, seed: int) -> dict:
    n, a = int(entry["n"]), int(entry["a"])
    ac_extra = int(entry.get("ac_extra", 0))
    d_extra = int(entry.get("d_extra", 0))
    rounds = int(entry.get("seeds", 20))
    found = 0
    for i in range(rounds):
        params = table_params(n, a, ac_extra=ac_extra, d_extra=d_extra,
                              seed=derive_seed(seed, "robustness", i))
        g, _ = generate_extremal(params)
        if exact_dp(g).verdict != "none_exists":
            found += 1
    return {"n": n, "a": a, "ac_extra": ac_extra, "d_extra": d_extra,
            "seeds": rounds, "hamiltonian_found": found, "ok": found == 0}


def _sweep_oracle(entry: dict, seed: int) -> dict:
    count = int(entry.get("count", 50))
    n_min = int(entry.get("n_min", 5))
    n_max = int(entry.get("n_max", 9))
    prob = float(Fraction(str(entry.get("arc_prob", "1/2"))))
    disagreements = 0
    for i in range(count):
        inst = derive_seed(seed, "oracle", i)
        n = n_min + inst % (n_max - n_min + 1)
        g = random_oriented(n, prob, inst)
        if exact_brute(g).verdict != exact_dp(g).verdict:
            disagreements += 1
    return {"instances": count, "disagreements": disagreements,
            "ok": disagreements == 0}


def _sweep_pipeline(entry: dict, seed: int) -> dict:
    count = int(entry.get("count", 20))
    n_min = int(entry.get("n_min", 24))
    n_max = int(entry.get("n_max", 64))
    min_rate = Fraction(str(entry.get("min_rate", "9/10")))
    successes = 0
    for i in range(count):
        inst = derive_seed(seed, "pipeline", i)
        n = n_min + inst % (n_max - n_min + 1)
        g = random_min_semidegree(n, math.ceil(3 * n / 8), inst)
        if find_hamilton_absorption(g, seed=inst).found:
            successes += 1
    rate = Fraction(successes, count) if count else Fraction(1)
    return {"instances": count, "successes": successes,
            "rate": _frac_json(rate), "min_rate": _frac_json(min_rate),
            "ok": rate >= min_rate}


_SWEEPS = {
    "sharpness": _sweep_sharpness,
    "robustness": _sweep_robustness,
    "oracle": _sweep_oracle,
    "pipeline": _sweep_pipeline,
}


def cmd_sweep(args) -> int:
    try:
        raw = Path(args.spec).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {args.spec}: {exc}")
    try:
        spec = json.loads(raw.decode())
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise UsageError(f"{args.spec}: invalid JSON ({exc})")
    entries = spec.get("entries", []) if isinstance(spec, dict) else spec
    if not isinstance(entries, list):
        raise UsageError(f"{args.spec}: expected a list of entries")

    rows = []
    failures = 0
    for idx, entry in enumerate(entries):
        kind = entry.get("kind") if isinstance(entry, dict) else None
        if kind not in _SWEEPS:
            raise UsageError(f"entry {idx}: unknown kind {kind!r}")
        try:
            result = _SWEEPS[kind](entry, derive_seed(args.seed, "sweep", idx))
        except (InfeasibleParamsError, TooLargeError, KeyError, ValueError) as exc:
            result = {"ok": False, "error": f"{type(exc).__name__}: {exc}"}
        if not result["ok"]:
            failures += 1
        rows.append({"index": idx, "kind": kind, **result})

    report = {
        "schema": SCHEMA,
        "manifest": _manifest("sweep", raw, args.seed,
                              {"entries": len(entries)}, args.timestamp),
        "rows": rows,
        "failures": failures,
    }
    _emit(report, args.out)
    return EXIT_PARTIAL if failures else EXIT_OK


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oriham",
        description="Oriented-graph Hamiltonicity toolkit: sharp extremal "
                    "generators, degree-condition checkers, absorber gadget "
                    "enumeration, and exact/heuristic cycle solvers.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="emit a sharp four-block instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--ac-edges", type=int, default=0)
    p.add_argument("--d-edges", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="edge-list path; JSON sidecar lands at <out>.json")
    p.add_argument("--timestamp", help="manifest timestamp override")
    p.set_defaults(fn=cmd_generate)

    p = sub.add_parser("check", help="run a degree-condition checker")
    p.add_argument("--condition", required=True,
                   choices=[*_CHECKS, "sparse-set"])
    p.add_argument("--input", required=True)
    p.add_argument("--sigma", type=_fraction)
    p.add_argument("--set", type=_id_set, metavar="IDS")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("score-partition",
                       help="score a labeled 4-partition against the "
                            "near-extremal template")
    p.add_argument("--input", required=True)
    p.add_argument("--partition", required=True, help="JSON with keys A,B,C,D")
    p.add_argument("--eta", type=_fraction, required=True)
    p.add_argument("--ceta", type=_fraction, default=Fraction(1))
    p.add_argument("--out")
    p.set_defaults(fn=cmd_score_partition)

    p = sub.add_parser("absorbers", help="enumerate gadgets for one pair")
    p.add_argument("--input", required=True)
    p.add_argument("--pair", type=_pair, required=True, metavar="U,V")
    p.add_argument("--kind", choices=["strong", "weak", "connector"],
                   default="strong")
    p.add_argument("--k", type=int, choices=[1, 2, 3])
    p.add_argument("--cap", type=int)
    p.add_argument("--alpha1", type=_fraction, default=Fraction(1, 4096))
    p.add_argument("--out")
    p.set_defaults(fn=cmd_absorbers)

    p = sub.add_parser("profile", help="connectivity profile of non-arc pairs")
    p.add_argument("--input", required=True)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_profile)

    p = sub.add_parser("solve", help="decide or search for a Hamilton cycle")
    p.add_argument("--input", required=True)
    p.add_argument("--method", choices=["brute", "dp", "absorb"], default="dp")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("sweep", help="run a seeded experiment sweep")
    p.add_argument("--spec", required=True, help="JSON sweep description")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--timestamp", help="manifest timestamp override")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_sweep)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
