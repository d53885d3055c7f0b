"""Command-line entry point: ``coct solve | oracle | reduce | check-expr | selftest``."""

import argparse
import logging
import os
import sys
import time
from dataclasses import dataclass

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INTERNAL = 3


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    expr: str = None
    graph: str = None
    cnf: str = None
    out: str = None
    budget: int = None
    trials: int = 20
    seed: int = 0
    threads: int = 1
    t0: int = None
    max_k: int = 2
    verbosity: int = 0

    def validate(self):
        if self.trials < 1:
            raise InputError("--trials must be at least 1")
        if self.threads < 1:
            raise InputError("--threads must be at least 1")
        if self.budget is not None and self.budget < 0:
            raise InputError("--budget must be non-negative")
        if not -(1 << 63) <= self.seed < (1 << 64):
            raise InputError("--seed must fit in 64 bits")
        if self.t0 is not None and self.t0 < 1:
            raise InputError("--t0 must be at least 1")
        for path in (self.expr, self.graph, self.cnf):
            if path is not None and not os.path.isfile(path):
                raise InputError(f"no such file: {path}")
        return self


def _stats(**kv):
    for key, val in kv.items():
        print(f"{key}={val}", file=sys.stderr)


def cmd_solve(cfg):
    from .dp import solve
    from .expression import read_expression

    expr = read_expression(cfg.expr)
    t = time.perf_counter()
    res = solve(expr, cfg.budget, trials=cfg.trials, seed=cfg.seed, threads=cfg.threads)
    print("YES" if res.answer else "NO")
    _stats(answer="YES" if res.answer else "NO", reason=res.reason.replace(" ", "_"),
           trials_run=res.trials_run, roots_run=res.roots_run, seconds=f"{time.perf_counter() - t:.3f}",
           **res.stats)
    if res.witness:
        _stats(witness_trial=res.witness[0], witness_root=res.witness[1], witness_budget=res.witness[2])
    return EXIT_OK


def cmd_oracle(cfg):
    from .expression import evaluate, read_expression
    from .graph import read_graph
    from .oracle import brute_force_solve

    g = evaluate(read_expression(cfg.expr)) if cfg.expr else read_graph(cfg.graph)
    sol = brute_force_solve(g, cfg.budget)
    print("YES" if sol is not None else "NO")
    _stats(n=g.n, m=g.m)
    if sol is not None:
        _stats(size=len(sol), solution=",".join(map(str, sorted(sol))))
    return EXIT_OK


def cmd_reduce(cfg):
    from .expression import write_expression
    from .graph import write_graph
    from .reduction import build_instance, read_dimacs

    sat = read_dimacs(cfg.cnf)
    inst = build_instance(sat, cfg.t0)
    prefix = cfg.out
    write_graph(inst.graph, prefix + ".graph")
    write_expression(inst.expr, prefix + ".expr")
    with open(prefix + ".budget", "w") as f:
        f.write(f"{inst.budget}\n")
    meta = dict(n=sat.n, m=sat.m, d=sat.d, t0=inst.t0, t=inst.t, s=inst.s, nprime=inst.nprime,
                c=inst.c, k=inst.expr.width(), budget=inst.budget)
    with open(prefix + ".meta", "w") as f:
        f.writelines(f"{key}={val}\n" for key, val in meta.items())
    _stats(vertices=inst.graph.n, edges=inst.graph.m, **meta)
    return EXIT_OK


def cmd_check_expr(cfg):
    from .expression import evaluate, read_expression
    from .graph import read_graph

    got = evaluate(read_expression(cfg.expr))
    want = read_graph(cfg.graph)
    same = got.n == want.n and got.adj == want.adj
    print("OK" if same else "MISMATCH")
    _stats(n_expr=got.n, n_graph=want.n, m_expr=got.m, m_graph=want.m)
    return EXIT_OK


def cmd_selftest(cfg):
    from .selftest import run_all

    ok = run_all(cfg.max_k, log=lambda line: print(line, flush=True))
    print("OK" if ok else "FAILED")
    return EXIT_OK if ok else EXIT_INTERNAL


COMMANDS = {
    "solve": cmd_solve,
    "oracle": cmd_oracle,
    "reduce": cmd_reduce,
    "check-expr": cmd_check_expr,
    "selftest": cmd_selftest,
}


def build_parser():
    p = argparse.ArgumentParser(prog="coct", description="Connected odd cycle transversal toolkit.")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="subcommand", required=True)

    s = sub.add_parser("solve", help="randomized decision on a k-expression")
    s.add_argument("--expr", required=True)
    s.add_argument("--budget", type=int, required=True)
    s.add_argument("--trials", type=int, default=20)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--threads", type=int, default=1)

    o = sub.add_parser("oracle", help="brute-force decision")
    src = o.add_mutually_exclusive_group(required=True)
    src.add_argument("--expr")
    src.add_argument("--graph")
    o.add_argument("--budget", type=int, required=True)

    r = sub.add_parser("reduce", help="compile a CNF file into a COCT instance")
    r.add_argument("--cnf", required=True)
    r.add_argument("--t0", type=int, required=True)
    r.add_argument("--out", required=True)

    c = sub.add_parser("check-expr", help="compare an expression with a graph file")
    c.add_argument("--expr", required=True)
    c.add_argument("--graph", required=True)

    t = sub.add_parser("selftest", help="exhaustive invariant suites")
    t.add_argument("--max-k", type=int, default=2)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    fields = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__}
    try:
        cfg = RunConfig(verbosity=args.verbose, **fields).validate()
        return COMMANDS[cfg.subcommand](cfg)
    except (InputError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001 - anything else is a bug
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
