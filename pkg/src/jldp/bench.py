"""Error sweeps comparing the sketch release against the baselines on G(n, p)."""
from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from .baselines import laplace_cut, randomized_response_release, rr_cut_estimate
from .errors import GraphTooSmallError, ParameterRangeError
from .graph import CutQuery, WeightedGraph, cut_value, erdos_renyi, random_cut
from .jl import derive_seed, make_rng
from .laplacian import DEFAULT_MAX_BYTES, answer_cut_queries, compute_params, release_laplacian
from .linalg import format_value

MECHANISMS = ("jl", "laplace", "rr")

# append-only: tooling keys on column positions
COLUMNS = (
    "mechanism", "n", "p", "s", "eps", "eps_effective", "delta", "eta", "nu", "seeds", "queries",
    "status", "mean_abs", "median_abs", "p95_abs", "mean_rel", "median_rel", "p95_rel",
)


@dataclass(frozen=True)
class BenchConfig:
    n: int = 200
    p: float = 0.5
    sizes: tuple[int, ...] = (5, 10, 20, 50)
    eps: tuple[float, ...] = (1.0,)
    delta: float = 0.1
    eta: float = 0.5
    nu: float = 0.1
    seeds: int = 200
    queries: int = 10
    seed: int = 0
    mechanisms: tuple[str, ...] = MECHANISMS
    max_bytes: int = DEFAULT_MAX_BYTES

    def __post_init__(self):
        bad = set(self.mechanisms) - set(MECHANISMS)
        if bad:
            raise ParameterRangeError(f"unknown mechanism(s): {sorted(bad)}")
        if self.seeds < 1 or self.queries < 1:
            raise ParameterRangeError("seeds and queries must be positive")
        for s in self.sizes:
            if not (0 < s < self.n):
                raise ParameterRangeError(f"cut size {s} must be in 1..{self.n - 1}")


@dataclass
class BenchRow:
    mechanism: str
    n: int
    p: float
    s: int
    eps: float
    eps_effective: float
    delta: float
    eta: float
    nu: float
    seeds: int
    queries: int
    status: str
    abs_errors: np.ndarray = field(repr=False)
    rel_errors: np.ndarray = field(repr=False)

    def stats(self) -> dict[str, float]:
        if self.abs_errors.size == 0:
            nan = float("nan")
            return dict.fromkeys(("mean_abs", "median_abs", "p95_abs", "mean_rel", "median_rel", "p95_rel"), nan)
        a, r = self.abs_errors, self.rel_errors
        return {
            "mean_abs": float(np.mean(a)),
            "median_abs": float(np.median(a)),
            "p95_abs": float(np.percentile(a, 95)),
            "mean_rel": float(np.mean(r)),
            "median_rel": float(np.median(r)),
            "p95_rel": float(np.percentile(r, 95)),
        }

    @property
    def mean_abs(self) -> float:
        return self.stats()["mean_abs"]

    def sort_key(self):
        return (self.mechanism, self.n, self.p, self.s, self.eps)

    def values(self) -> list:
        st = self.stats()
        base = [self.mechanism, self.n, self.p, self.s, self.eps, self.eps_effective, self.delta,
                self.eta, self.nu, self.seeds, self.queries, self.status]
        return base + [st[c] for c in COLUMNS[len(base):]]


def bench_graph(cfg: BenchConfig) -> WeightedGraph:
    return erdos_renyi(cfg.n, cfg.p, make_rng(derive_seed(cfg.seed, 0)))


def bench_cuts(cfg: BenchConfig, s: int, t: int) -> list[CutQuery]:
    """Cuts for seed index ``t``; shared by every mechanism so errors are paired."""
    rng = make_rng(derive_seed(derive_seed(cfg.seed, 1 + s), t))
    return [random_cut(cfg.n, s, rng) for _ in range(cfg.queries)]


def _rel(err: np.ndarray, truth: np.ndarray) -> np.ndarray:
    return err / np.maximum(truth, 1.0)


def _row(cfg, mech, s, eps, eps_eff, status, errs, truths) -> BenchRow:
    a = np.abs(np.asarray(errs, dtype=np.float64))
    return BenchRow(mech, cfg.n, cfg.p, s, eps, eps_eff, cfg.delta, cfg.eta, cfg.nu, cfg.seeds, cfg.queries,
                    status, a, _rel(a, np.asarray(truths, dtype=np.float64)))


def _jl_rows(cfg: BenchConfig, g: WeightedGraph, eps: float, cuts, truths) -> list[BenchRow]:
    try:
        params = compute_params(eps, cfg.delta, cfg.eta, cfg.nu, cfg.n)
    except GraphTooSmallError as exc:
        return [_row(cfg, "jl", s, eps, eps, f"infeasible:min_n={exc.min_n}", [], []) for s in cfg.sizes]
    errs = {s: [] for s in cfg.sizes}
    for t in range(cfg.seeds):
        sl = release_laplacian(g, params, derive_seed(derive_seed(cfg.seed, 100), t), max_bytes=cfg.max_bytes)
        for s in cfg.sizes:
            errs[s].append(answer_cut_queries(sl, cuts[s][t]) - truths[s][t])
    return [_row(cfg, "jl", s, eps, eps, "ok", np.concatenate(errs[s]), np.concatenate(truths[s])) for s in cfg.sizes]


def _rr_rows(cfg: BenchConfig, g: WeightedGraph, eps: float, cuts, truths) -> list[BenchRow]:
    # randomized response is only defined for eps <= 1
    eff = min(eps, 1.0)
    errs = {s: [] for s in cfg.sizes}
    for t in range(cfg.seeds):
        h = randomized_response_release(g, eff, derive_seed(derive_seed(cfg.seed, 200), t))
        for s in cfg.sizes:
            est = np.array([rr_cut_estimate(h, q) for q in cuts[s][t]])
            errs[s].append(est - truths[s][t])
    return [_row(cfg, "rr", s, eps, eff, "ok", np.concatenate(errs[s]), np.concatenate(truths[s])) for s in cfg.sizes]


def _laplace_rows(cfg: BenchConfig, g: WeightedGraph, eps: float, cuts, truths) -> list[BenchRow]:
    rows = []
    for s in cfg.sizes:
        errs = []
        for t in range(cfg.seeds):
            base = derive_seed(derive_seed(cfg.seed, 300 + s), t)
            for k, q in enumerate(cuts[s][t]):
                errs.append(laplace_cut(g, q, eps, derive_seed(base, k)) - truths[s][t][k])
        rows.append(_row(cfg, "laplace", s, eps, eps, "ok", errs, np.concatenate(truths[s])))
    return rows


def bench_sweep(cfg: BenchConfig) -> list[BenchRow]:
    """One row per (mechanism, eps, s); rows are sorted before returning."""
    g = bench_graph(cfg)
    cuts = {s: [bench_cuts(cfg, s, t) for t in range(cfg.seeds)] for s in cfg.sizes}
    truths = {s: [np.array([cut_value(g, q) for q in qs]) for qs in cuts[s]] for s in cfg.sizes}
    runners = {"jl": _jl_rows, "rr": _rr_rows, "laplace": _laplace_rows}
    rows: list[BenchRow] = []
    for eps in cfg.eps:
        for mech in cfg.mechanisms:
            rows.extend(runners[mech](cfg, g, eps, cuts, truths))
    rows.sort(key=BenchRow.sort_key)
    return rows


def _cell(v) -> str:
    if isinstance(v, float):
        return format_value(v)
    return str(v)


def rows_to_csv(rows: list[BenchRow], header: str | None = None) -> str:
    buf = io.StringIO()
    if header is not None:
        buf.write(f"# {header}\n")
    buf.write(",".join(COLUMNS) + "\n")
    for row in rows:
        buf.write(",".join(_cell(v) for v in row.values()) + "\n")
    return buf.getvalue()


def fit_loglog_slope(xs, ys) -> float:
    """Least-squares slope of log y against log x."""
    return float(np.polyfit(np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float)), 1)[0])


def fit_linear_slope(xs, ys) -> float:
    """Least-squares slope of y against x through the origin."""
    x = np.asarray(xs, float)
    y = np.asarray(ys, float)
    return float(x @ y / (x @ x))
