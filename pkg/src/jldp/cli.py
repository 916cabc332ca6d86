"""``jldp`` command-line entry point.

Every output starts with a ``# key=value ...`` provenance line and, when
written to a file, is accompanied by a ``.meta`` sidecar with the same
parameters one per line. Outputs depend only on the flags, so reruns are
byte-identical.
"""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .audit import covariance_audit, graph_audit, univariate_demo
from .baselines import laplace_cut, randomized_response_release
from .bench import MECHANISMS, BenchConfig, bench_sweep, rows_to_csv
from .covariance import (
    CovarianceReleaseParams,
    SanitizedCovariance,
    answer_direction_query,
    compute_params_cov,
    release_covariance,
    release_mean,
)
from .errors import (
    AllocationBudgetError,
    DimensionMismatchError,
    IngestionError,
    InvalidGraphError,
    InvalidMatrixError,
    InvalidQueryError,
    JLDPError,
    ParameterRangeError,
    UnsupportedShapeError,
)
from .graph import CutQuery, read_edge_list
from .jl import GENERATOR_ID, SEED_MASK, derive_seed, jl_dim
from .laplacian import (
    DEFAULT_MAX_BYTES,
    LaplacianReleaseParams,
    SanitizedLaplacian,
    answer_cut_queries,
    compute_params,
    derive_params,
    release_laplacian,
)
from .linalg import format_value, matrix_to_csv, parse_matrix_csv, read_matrix_csv

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INGEST = 3
EXIT_RANGE = 4
EXIT_ALLOC = 5
EXIT_CHECKS = 6

AUDIT_DEFAULTS = {"eps": 1.0, "delta": 0.1, "eta": 0.5, "nu": 2.0 * math.exp(-2.0)}

# command -> flags that must be present before any work starts
REQUIRED = {
    "release-laplacian": ("input", "eps", "delta", "eta", "nu", "seed"),
    "query-cut": ("input", "queries"),
    "release-covariance": ("input", "eps", "delta", "eta", "nu", "seed"),
    "query-variance": ("input", "queries"),
    "release-mean": ("input", "eps", "delta", "seed"),
    "rr-release": ("input", "eps", "seed"),
    "baseline-laplace": ("input", "queries", "eps", "seed"),
    "audit-graph": ("seed",),
    "audit-covariance": ("seed",),
    "demo-univariate": ("eps", "delta", "eta", "nu", "seed"),
    "bench": ("seed",),
}


class UsageError(Exception):
    pass


def _seed(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from exc
    if not (0 <= v <= SEED_MASK):
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated reals, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jldp", description="Sketch-based private Laplacian and covariance release.")
    parser.add_argument("--version", action="version", version=f"jldp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name in REQUIRED:
        p = sub.add_parser(name)
        p.add_argument("--eps", type=float)
        p.add_argument("--delta", type=float)
        p.add_argument("--eta", type=float)
        p.add_argument("--nu", type=float)
        p.add_argument("--seed", type=_seed)
        p.add_argument("--input")
        p.add_argument("--queries")
        p.add_argument("--output")
        p.add_argument("--trials", type=int, default=100_000)
        p.add_argument("--format", choices=("csv", "keyvalue"), default="csv")
        p.add_argument("--max-bytes", type=int, default=DEFAULT_MAX_BYTES)
        if name in ("audit-graph", "audit-covariance"):
            p.add_argument("--n", type=int, default=8)
            p.add_argument("--pairs", type=int, default=200)
            if name == "audit-covariance":
                p.add_argument("--d", type=int, default=4)
        if name == "demo-univariate":
            p.add_argument("--n", type=int, help="length of a generated bit vector (instead of --input)")
            p.add_argument("--ones", type=int, default=0, help="number of leading ones in the generated vector")
        if name == "bench":
            p.add_argument("--n", type=int, default=200)
            p.add_argument("--p", type=float, default=0.5)
            p.add_argument("--sizes", type=_int_list, default=(5, 10, 20, 50))
            p.add_argument("--eps-grid", type=_float_list, help="several eps values; overrides --eps")
            p.add_argument("--seeds", type=int, default=200)
            p.add_argument("--cuts", type=int, default=10, help="random cuts per seed and size")
            p.add_argument("--mechanisms", default=",".join(MECHANISMS))
    return parser


def _check_required(args) -> None:
    missing = [f for f in REQUIRED[args.command] if getattr(args, f) is None]
    if missing:
        raise UsageError(f"{args.command}: missing required flag(s): " + ", ".join("--" + m for m in missing))
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    if args.max_bytes < 1:
        raise UsageError("--max-bytes must be positive")


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def provenance(command: str, fields: dict) -> str:
    items = {"command": command, **fields, "generator": GENERATOR_ID, "version": __version__}
    return " ".join(f"{k}={_fmt(v)}" for k, v in items.items())


def parse_provenance(text: str) -> dict[str, str]:
    for line in text.splitlines():
        if line.startswith("#"):
            out = {}
            for tok in line[1:].split():
                k, sep, v = tok.partition("=")
                if sep:
                    out[k] = v
            return out
    raise IngestionError("input has no provenance line")


def emit(args, body: str, meta: dict, header: str | None = None) -> None:
    """Write ``body`` (which already carries its header) and the sidecar."""
    if args.output is None:
        sys.stdout.write(body)
        return
    out = Path(args.output)
    out.write_text(body)
    sidecar = out.with_name(out.name + ".meta")
    sidecar.write_text("".join(f"{k}={_fmt(v)}\n" for k, v in {"command": args.command, **meta}.items()))


def _read_text(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise IngestionError(f"cannot read {path}: {exc}") from exc


def read_cut_queries(path) -> list[CutQuery]:
    out = []
    for lineno, raw in enumerate(_read_text(path).splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            members = [int(t) for t in line.split()]
        except ValueError as exc:
            raise IngestionError(f"{path}:{lineno}: {exc}") from exc
        if len(set(members)) != len(members):
            raise IngestionError(f"{path}:{lineno}: repeated node id")
        out.append(CutQuery(members))
    return out


def read_directions(path) -> np.ndarray:
    return parse_matrix_csv(_read_text(path))


def _laplacian_params_from_header(h: dict[str, str]) -> LaplacianReleaseParams:
    try:
        return LaplacianReleaseParams(
            eps=float(h["eps"]), delta=float(h["delta"]), eta=float(h["eta"]), nu=float(h["nu"]),
            r=int(h["r"]), w=float(h["w"]),
        )
    except (KeyError, ValueError) as exc:
        raise IngestionError(f"release header lacks parameter {exc}") from exc


def _release_header_check(h: dict[str, str], kind: str) -> None:
    if h.get("kind") != kind:
        raise IngestionError(f"expected a {kind} release, got kind={h.get('kind')}")


# -- commands ----------------------------------------------------------------

def cmd_release_laplacian(args) -> int:
    g = read_edge_list(args.input)
    params = compute_params(args.eps, args.delta, args.eta, args.nu, g.n)
    sl = release_laplacian(g, params, args.seed, max_bytes=args.max_bytes)
    meta = sl.metadata()
    emit(args, matrix_to_csv(sl.l_tilde, header=provenance(args.command, meta)), meta)
    return EXIT_OK


def cmd_query_cut(args) -> int:
    text = _read_text(args.input)
    h = parse_provenance(text)
    _release_header_check(h, "laplacian")
    params = _laplacian_params_from_header(h)
    l_tilde = parse_matrix_csv(text)
    n = l_tilde.shape[0]
    if l_tilde.shape != (n, n) or int(h.get("n", n)) != n:
        raise IngestionError("release matrix is not n x n")
    queries = read_cut_queries(args.queries)
    for q in queries:
        q.validate(n)
    sl = SanitizedLaplacian(l_tilde=l_tilde, n=n, params=params, seed=None)
    answers = answer_cut_queries(sl, queries)
    meta = {**{k: v for k, v in h.items() if k not in ("command", "generator", "version")}, "queries": len(queries)}
    lines = [f"# {provenance(args.command, meta)}", "query,size,answer"]
    lines += [f"{i},{q.size},{format_value(float(a))}" for i, (q, a) in enumerate(zip(queries, answers))]
    emit(args, "\n".join(lines) + "\n", meta)
    return EXIT_OK


def cmd_release_covariance(args) -> int:
    a = read_matrix_csv(args.input)
    params = compute_params_cov(args.eps, args.delta, args.eta, args.nu)
    sc = release_covariance(a, params, args.seed, max_bytes=args.max_bytes)
    meta = sc.metadata()
    emit(args, matrix_to_csv(sc.c_tilde, header=provenance(args.command, meta)), meta)
    return EXIT_OK


def cmd_query_variance(args) -> int:
    text = _read_text(args.input)
    h = parse_provenance(text)
    _release_header_check(h, "covariance")
    try:
        params = CovarianceReleaseParams(
            eps=float(h["eps"]), delta=float(h["delta"]), eta=float(h["eta"]), nu=float(h["nu"]),
            r=int(h["r"]), w=float(h["w"]),
        )
    except (KeyError, ValueError) as exc:
        raise IngestionError(f"release header lacks parameter {exc}") from exc
    c = parse_matrix_csv(text)
    d = c.shape[0]
    if c.shape != (d, d):
        raise IngestionError("release matrix is not square")
    sc = SanitizedCovariance(c_tilde=c, d=d, params=params, seed=None)
    dirs = read_directions(args.queries)
    answers = [answer_direction_query(sc, x) for x in dirs]
    meta = {**{k: v for k, v in h.items() if k not in ("command", "generator", "version")}, "queries": len(answers)}
    lines = [f"# {provenance(args.command, meta)}", "query,answer"]
    lines += [f"{i},{format_value(a)}" for i, a in enumerate(answers)]
    emit(args, "\n".join(lines) + "\n", meta)
    return EXIT_OK


def cmd_release_mean(args) -> int:
    a = read_matrix_csv(args.input)
    mu = release_mean(a, args.eps, args.delta, args.seed)
    meta = {"kind": "mean", "eps": args.eps, "delta": args.delta, "n": a.shape[0], "d": a.shape[1], "seed": args.seed}
    emit(args, matrix_to_csv(mu.reshape(1, -1), header=provenance(args.command, meta)), meta)
    return EXIT_OK


def cmd_rr_release(args) -> int:
    g = read_edge_list(args.input)
    h = randomized_response_release(g, args.eps, args.seed)
    meta = {"kind": "randomized-response", "eps": args.eps, "n": g.n, "seed": args.seed}
    emit(args, h.to_edge_list(header=provenance(args.command, meta)), meta)
    return EXIT_OK


def cmd_baseline_laplace(args) -> int:
    g = read_edge_list(args.input)
    queries = read_cut_queries(args.queries)
    for q in queries:
        q.validate(g.n)
    answers = [laplace_cut(g, q, args.eps, derive_seed(args.seed, i)) for i, q in enumerate(queries)]
    meta = {"kind": "laplace", "eps": args.eps, "n": g.n, "seed": args.seed, "queries": len(queries)}
    lines = [f"# {provenance(args.command, meta)}", "query,size,answer"]
    lines += [f"{i},{q.size},{format_value(a)}" for i, (q, a) in enumerate(zip(queries, answers))]
    emit(args, "\n".join(lines) + "\n", meta)
    return EXIT_OK


def _audit_values(args) -> dict[str, float]:
    return {k: (getattr(args, k) if getattr(args, k) is not None else v) for k, v in AUDIT_DEFAULTS.items()}


def _emit_report(args, report, meta) -> int:
    if args.format == "keyvalue":
        body = f"# {provenance(args.command, meta)}\n" + report.to_keyvalue()
    else:
        body = f"# {provenance(args.command, meta)}\n{report.csv_header()}\n{report.to_csv_row()}\n"
    emit(args, body, {**meta, "passed": report.passed})
    return EXIT_OK if report.passed else EXIT_CHECKS


def cmd_audit_graph(args) -> int:
    v = _audit_values(args)
    params = derive_params(v["eps"], v["delta"], v["eta"], v["nu"])
    report = graph_audit(params, n=args.n, pairs=args.pairs, trials=args.trials, seed=args.seed)
    meta = {**v, "r": params.r, "w": params.w, "n": args.n, "pairs": args.pairs, "trials": args.trials, "seed": args.seed}
    return _emit_report(args, report, meta)


def cmd_audit_covariance(args) -> int:
    v = _audit_values(args)
    params = compute_params_cov(v["eps"], v["delta"], v["eta"], v["nu"])
    report = covariance_audit(params, n=args.n, d=args.d, pairs=args.pairs, trials=args.trials, seed=args.seed)
    meta = {**v, "r": params.r, "w": params.w, "n": args.n, "d": args.d, "pairs": args.pairs,
            "trials": args.trials, "seed": args.seed}
    return _emit_report(args, report, meta)


def cmd_demo_univariate(args) -> int:
    if args.input is not None:
        toks = _read_text(args.input).split()
        try:
            bits = np.array([int(t) for t in toks], dtype=np.int64)
        except ValueError as exc:
            raise IngestionError(f"bit vector: {exc}") from exc
        if not np.all((bits == 0) | (bits == 1)):
            raise IngestionError("bit vector must contain only 0 and 1")
    elif args.n is not None:
        if not (0 <= args.ones <= args.n):
            raise UsageError("--ones must be between 0 and --n")
        bits = np.zeros(args.n, dtype=np.int64)
        bits[: args.ones] = 1
    else:
        raise UsageError("demo-univariate needs --input or --n")
    estimate, count = univariate_demo(bits, args.eps, args.delta, args.eta, args.nu, args.seed)
    meta = {"kind": "univariate", "eps": args.eps, "delta": args.delta, "eta": args.eta, "nu": args.nu,
            "r": jl_dim(args.eta, args.nu, allow_half=True).r, "n": int(bits.size), "seed": args.seed}
    body = f"# {provenance(args.command, meta)}\nestimate,true_count\n{format_value(estimate)},{count}\n"
    emit(args, body, meta)
    return EXIT_OK


def cmd_bench(args) -> int:
    eps = args.eps_grid if args.eps_grid else ((args.eps,) if args.eps is not None else (1.0,))
    mechs = tuple(m.strip() for m in args.mechanisms.split(",") if m.strip())
    cfg = BenchConfig(
        n=args.n, p=args.p, sizes=tuple(args.sizes), eps=tuple(eps),
        delta=args.delta if args.delta is not None else 0.1,
        eta=args.eta if args.eta is not None else 0.5,
        nu=args.nu if args.nu is not None else 0.1,
        seeds=args.seeds, queries=args.cuts, seed=args.seed, mechanisms=mechs, max_bytes=args.max_bytes,
    )
    rows = bench_sweep(cfg)
    meta = {"kind": "bench", "n": cfg.n, "p": cfg.p, "sizes": "/".join(map(str, cfg.sizes)),
            "eps": "/".join(format_value(e) for e in cfg.eps), "delta": cfg.delta, "eta": cfg.eta, "nu": cfg.nu,
            "seeds": cfg.seeds, "cuts": cfg.queries, "mechanisms": "/".join(cfg.mechanisms), "seed": cfg.seed}
    emit(args, rows_to_csv(rows, header=provenance(args.command, meta)), meta)
    return EXIT_OK


COMMANDS = {
    "release-laplacian": cmd_release_laplacian,
    "query-cut": cmd_query_cut,
    "release-covariance": cmd_release_covariance,
    "query-variance": cmd_query_variance,
    "release-mean": cmd_release_mean,
    "rr-release": cmd_rr_release,
    "baseline-laplace": cmd_baseline_laplace,
    "audit-graph": cmd_audit_graph,
    "audit-covariance": cmd_audit_covariance,
    "demo-univariate": cmd_demo_univariate,
    "bench": cmd_bench,
}


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, AllocationBudgetError):
        return EXIT_ALLOC
    if isinstance(exc, (IngestionError, InvalidGraphError, InvalidMatrixError)):
        return EXIT_INGEST
    if isinstance(exc, (ParameterRangeError, UnsupportedShapeError)):
        return EXIT_RANGE
    if isinstance(exc, (InvalidQueryError, DimensionMismatchError)):
        return EXIT_INGEST
    return 1


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        _check_required(args)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"jldp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except JLDPError as exc:
        print(f"jldp: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exit_code_for(exc)


if __name__ == "__main__":
    sys.exit(main())
