"""Command-line front end.

Exit status: 0 on success, 2 on usage or input errors, 3 when an internal
invariant check fails.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import analysis, harness, kernel, mc, simple
from .graph import GraphFormatError, encode_graph, parse_graph
from .labeling import DEFAULT_WEIGHTS, Weights
from .oracle import domination_chain

EXIT_OK, EXIT_USAGE, EXIT_INVARIANT = 0, 2, 3
FORMATS = {"edge-list": "edgelist", "edgelist": "edgelist", "graph6": "graph6"}


class UsageError(Exception):
    pass


class InvariantError(Exception):
    pass


def _read_graph(args):
    path = args.input
    try:
        text = sys.stdin.read() if path in (None, "-") else open(path).read()
    except OSError as e:
        raise UsageError(str(e)) from e
    try:
        return parse_graph(text, FORMATS[args.format])
    except GraphFormatError as e:
        raise UsageError(f"bad input graph: {e}") from e


def _weights(args) -> Weights:
    if args.wl is None and args.wn is None:
        return DEFAULT_WEIGHTS
    wl = args.wl if args.wl is not None else DEFAULT_WEIGHTS.omega_l
    wn = args.wn if args.wn is not None else DEFAULT_WEIGHTS.omega_n
    try:
        return Weights.parse(wl, wn)
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(str(e)) from e


def _need_k(args) -> int:
    if args.k is None:
        raise UsageError("--k is required")
    if args.k < 0:
        raise UsageError("--k must be non-negative")
    return args.k


def _emit(args, payload: dict, text: str) -> None:
    payload = {"schemaVersion": harness.SCHEMA_VERSION, **payload}
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _ms(t0: float) -> float:
    return round((time.perf_counter() - t0) * 1000, 3)


# ---------------------------------------------------------------------------
# subcommands


def cmd_ir(args) -> int:
    g = _read_graph(args)
    t0 = time.perf_counter()
    info = harness.DriverInfo()
    v = harness.compute_ir(g, info=info)
    _emit(args, {"ir": v, **info.to_json(), "timeMs": _ms(t0)}, f"ir = {v}")
    return EXIT_OK


def cmd_upper_ir(args) -> int:
    g = _read_graph(args)
    t0 = time.perf_counter()
    info = harness.DriverInfo()
    v = harness.compute_upper_ir(g, threshold=args.threshold, algo=args.algo,
                                 weights=_weights(args), info=info)
    _emit(args, {"IR": v, **info.to_json(), "timeMs": _ms(t0)}, f"IR = {v}")
    return EXIT_OK


def cmd_decide(args) -> int:
    g = _read_graph(args)
    k = _need_k(args)
    t0 = time.perf_counter()
    if args.problem == "co-maxir":
        if args.algo == "mc":
            ans, st = mc.decide_comaxir_mc(g, k, _weights(args))
        else:
            ans, st = simple.decide_comaxir_simple(g, k)
    else:
        if args.algo == "mc":
            raise UsageError("exact-co-minmaxir is only available with --algo simple")
        ans, st = simple.decide_exact_cominmaxir(g, k)
    payload = {"answer": "YES" if ans else "NO", **st.to_json(), "timeMs": _ms(t0)}
    _emit(args, payload, f"{'YES' if ans else 'NO'} (nodes={st.nodes})")
    return EXIT_OK


def cmd_kernel(args) -> int:
    g = _read_graph(args)
    k = _need_k(args)
    if args.problem == "co-maxir":
        out = kernel.kernel_comaxir(g, k)
    else:
        out = kernel.kernel_cominmaxir(g, k)
    payload = out.to_json()
    if out.graph is not None and args.emit_graph:
        payload["graph"] = encode_graph(out.graph.induced(out.graph.vertices())[0], "graph6").strip()
    _emit(args, payload, f"{out.verdict.value}: n {out.n_before} -> {out.n_after}, k' = {out.k}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    g = _read_graph(args)
    try:
        c = domination_chain(g, args.limit)
    except ValueError as e:
        raise UsageError(str(e)) from e
    if not c.holds():
        raise InvariantError(f"domination chain violated: {c}")
    payload = {"ir": c.ir, "gamma": c.gamma, "alpha": c.alpha, "IR": c.IR}
    _emit(args, payload, f"ir={c.ir} gamma={c.gamma} alpha={c.alpha} IR={c.IR}")
    return EXIT_OK


def cmd_analyze(args) -> int:
    check = args.check
    if check == "alg1":
        rep = analysis.verify_alg1(args.alpha if args.alpha is not None else 3.841)
        _emit(args, rep.to_json(), rep.table())
    elif check == "alg2":
        rep = analysis.verify_alg2(_weights(args), args.target)
        _emit(args, rep.to_json(), rep.table())
    elif check == "winwin":
        alpha = args.alpha if args.alpha is not None else 3.841
        res = analysis.verify_winwin(alpha, args.claimed, args.tol)
        _emit(args, res.to_json(), f"alpha={alpha}: threshold={res.threshold:.6f} base={res.base:.6f}")
    elif check == "optimize":
        w, obj = analysis.optimize_weights(Fraction(args.step))
        payload = {"omega_l": str(w.omega_l), "omega_n": str(w.omega_n), "objective": obj}
        _emit(args, payload, f"omega_l={float(w.omega_l)} omega_n={float(w.omega_n)} objective={obj:.6f}")
    else:  # tilde
        res = analysis.optimize_tilde(float(Fraction(args.step)) if args.step else 0.005)
        _emit(args, res.to_json(),
              f"omega_l={res.omega_l:.3f} omega_n={res.omega_n:.3f} base={res.base:.6f}")
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.n is None:
        raise UsageError("--n is required")
    try:
        g = harness.gen_random_graph(args.n, float(Fraction(args.p)), args.seed)
    except ValueError as e:
        raise UsageError(str(e)) from e
    sys.stdout.write(encode_graph(g, FORMATS[args.format]))
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        rep = harness.verify_campaign(args.max_n, args.trials, args.seed, args.threads,
                                      exhaustive_n=args.exhaustive_n)
    except ValueError as e:
        raise UsageError(str(e)) from e
    payload = rep.to_json(timing=not args.no_timing)
    lines = [f"instances={rep.instances} decisions={rep.decisions} mismatches={len(rep.mismatches)}",
             f"invariant violations: {rep.invariant_violations or 'none'}"]
    _emit(args, payload, "\n".join(lines))
    if rep.mismatches:
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_bench(args) -> int:
    rows = []
    for seed in range(args.seed, args.seed + args.trials):
        g = harness.gen_random_graph(args.n, float(Fraction(args.p)), seed)
        t0 = time.perf_counter()
        info = harness.DriverInfo()
        if args.target == "ir":
            v = harness.compute_ir(g, info=info)
        else:
            v = harness.compute_upper_ir(g, algo=args.algo, weights=_weights(args), info=info)
        rows.append({"seed": seed, "value": v, "method": info.method, "nodes": info.stats.nodes,
                     "timeMs": _ms(t0)})
    text = "\n".join(f"seed={r['seed']} {args.target}={r['value']} method={r['method']} "
                     f"nodes={r['nodes']} ms={r['timeMs']}" for r in rows)
    _emit(args, {"n": args.n, "p": args.p, "target": args.target, "runs": rows}, text)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", default="-", help="graph file, '-' for stdin")
    common.add_argument("--format", choices=sorted(FORMATS), default="edge-list")
    common.add_argument("--json", action="store_true")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--algo", choices=("simple", "mc"), default="mc")
    common.add_argument("--k", type=int)
    common.add_argument("--wl", type=Fraction)
    common.add_argument("--wn", type=Fraction)
    common.add_argument("--threads", type=int, default=1)

    p = argparse.ArgumentParser(prog="irredundance", description="Exact irredundance numbers.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("ir", parents=[common], help="lower irredundance number")
    s.set_defaults(func=cmd_ir)
    s = sub.add_parser("upper-ir", parents=[common], help="upper irredundance number")
    s.add_argument("--threshold", type=float)
    s.set_defaults(func=cmd_upper_ir)
    s = sub.add_parser("decide", parents=[common], help="parameterized decision")
    s.add_argument("--problem", choices=("co-maxir", "exact-co-minmaxir"), default="co-maxir")
    s.set_defaults(func=cmd_decide)
    s = sub.add_parser("kernel", parents=[common], help="kernelize an instance")
    s.add_argument("--problem", choices=("co-maxir", "co-minmaxir"), default="co-maxir")
    s.add_argument("--emit-graph", action="store_true")
    s.set_defaults(func=cmd_kernel)
    s = sub.add_parser("oracle", parents=[common], help="brute-force ir, gamma, alpha, IR")
    s.add_argument("--limit", type=int, default=24)
    s.set_defaults(func=cmd_oracle)
    s = sub.add_parser("analyze", parents=[common], help="recurrence checks")
    s.add_argument("--check", choices=("alg1", "alg2", "winwin", "optimize", "tilde"), required=True)
    s.add_argument("--alpha", type=float)
    s.add_argument("--target", type=float, default=3.069)
    s.add_argument("--claimed", type=float)
    s.add_argument("--tol", type=float, default=1e-3)
    s.add_argument("--step", default="1/1000")
    s.set_defaults(func=cmd_analyze)
    s = sub.add_parser("gen", parents=[common], help="random G(n, p)")
    s.add_argument("--n", type=int)
    s.add_argument("--p", default="0.3")
    s.set_defaults(func=cmd_gen)
    s = sub.add_parser("verify", parents=[common], help="oracle comparison campaign")
    s.add_argument("--max-n", type=int, default=12)
    s.add_argument("--trials", type=int, default=0)
    s.add_argument("--exhaustive-n", type=int, default=6)
    s.add_argument("--no-timing", action="store_true", help="omit wall-clock fields")
    s.set_defaults(func=cmd_verify)
    s = sub.add_parser("bench", parents=[common], help="time the exact drivers")
    s.add_argument("--n", type=int, default=30)
    s.add_argument("--p", default="0.3")
    s.add_argument("--trials", type=int, default=5)
    s.add_argument("--target", choices=("ir", "upper-ir"), default="upper-ir")
    s.set_defaults(func=cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (InvariantError, AssertionError) as e:
        print(f"invariant violation: {e}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
