"""Numerical audits of the privacy argument on small instances.

Graph audits compare the (degenerate) Gaussians N(0, L_G) and N(0, L_G') that a
single sketch row induces on neighboring graphs; covariance audits compare
N(0, B^T B) and N(0, B'^T B') after the spectral shift. All density work is
done in log space.

Desk-scale graphs (n = 8) cannot satisfy w/n < 1/2 at realistic privacy
levels, so :func:`lifted_pair_weights` switches to an additive lift
``w/n + x`` there. Both forms dominate (w/n) K_n, which is all the privacy
argument uses.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .covariance import CovarianceReleaseParams, center_rows, spectral_shift
from .errors import AuditPreconditionError, OutOfSupportError, ParameterRangeError, UnsupportedShapeError
from .graph import (
    NeighborPair,
    WeightedGraph,
    edge_matrix_from_pairs,
    extreme_neighbor_pair,
    laplacian_from_adjacency,
    pair_arrays,
    random_neighbor_pair,
    random_weighted_graph,
)
from .jl import derive_seed, jl_dim, make_rng
from .laplacian import LaplacianReleaseParams, laplacian_noise_floor
from .linalg import as_matrix, rank_tolerance

SUPPORT_RTOL = 1e-6
FACT_TOL = 1e-8
LOG_2PI = math.log(2.0 * math.pi)


# -- degenerate Gaussians ----------------------------------------------------

@dataclass(frozen=True)
class DegenerateGaussian:
    """Zero-mean Gaussian with a possibly rank-deficient covariance."""

    covariance: np.ndarray = field(repr=False)
    rank: int
    log_pseudo_det: float
    pseudo_inv: np.ndarray = field(repr=False)
    support_basis: np.ndarray = field(repr=False)

    @property
    def pseudo_det(self) -> float:
        return math.exp(self.log_pseudo_det)

    @classmethod
    def from_covariance(cls, cov) -> "DegenerateGaussian":
        c = as_matrix(cov, "covariance")
        if c.shape[0] != c.shape[1]:
            raise ValueError("covariance must be square")
        c = 0.5 * (c + c.T)
        evals, evecs = np.linalg.eigh(c)
        order = np.argsort(-evals, kind="stable")
        evals, evecs = evals[order], evecs[:, order]
        if evals[-1] < -1e-8 * max(1.0, evals[0]):
            raise ValueError("covariance is not positive semidefinite")
        tol = rank_tolerance(np.abs(evals))
        k = int(np.count_nonzero(evals > tol))
        if k == 0:
            raise ValueError("covariance is zero")
        basis = evecs[:, :k]
        lam = evals[:k]
        return cls(
            covariance=c,
            rank=k,
            log_pseudo_det=float(np.sum(np.log(lam))),
            pseudo_inv=(basis / lam) @ basis.T,
            support_basis=basis,
        )

    def support_residual(self, x: np.ndarray) -> np.ndarray:
        """Norm of the component of each row of ``x`` outside the support."""
        proj = (x @ self.support_basis) @ self.support_basis.T
        return np.linalg.norm(x - proj, axis=-1)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        lam = np.maximum(np.linalg.eigvalsh(self.covariance)[::-1][: self.rank], 0.0)
        z = rng.standard_normal((size, self.rank))
        return (z * np.sqrt(lam)) @ self.support_basis.T


def log_pdf(dg: DegenerateGaussian, x) -> float | np.ndarray:
    """-1/2 [rank ln(2 pi) + ln pdet + x^T pinv x], restricted to the support.

    Accepts one point or a batch (rows). Points off the support raise
    :class:`OutOfSupportError` rather than being projected.
    """
    pts = np.asarray(x, dtype=np.float64)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    resid = dg.support_residual(pts)
    scale = np.linalg.norm(pts, axis=-1)
    bad = resid > SUPPORT_RTOL * scale
    if np.any(bad):
        raise OutOfSupportError(f"{int(np.count_nonzero(bad))} point(s) lie outside the covariance support")
    quad = np.einsum("ij,jk,ik->i", pts, dg.pseudo_inv, pts)
    out = -0.5 * (dg.rank * LOG_2PI + dg.log_pseudo_det + quad)
    return float(out[0]) if single else out


# -- graph side --------------------------------------------------------------

def lifted_pair_weights(g: WeightedGraph, w: float) -> np.ndarray:
    """Pair weights after the noise-floor lift, in lexicographic order.

    Uses the release's translation ``w/n + (1 - w/n) x`` whenever w/n < 1/2,
    and the additive lift ``w/n + x`` otherwise.
    """
    f = w / g.n
    x = g.pair_weights()
    if f < 0.5:
        return np.clip(f + (1.0 - f) * x, f, 1.0)
    return f + x


def lifted_laplacian(g: WeightedGraph, w: float) -> np.ndarray:
    n = g.n
    h = np.zeros((n, n))
    us, vs = pair_arrays(n)
    vals = lifted_pair_weights(g, w)
    h[us, vs] = vals
    h[vs, us] = vals
    return laplacian_from_adjacency(h)


def _graph_gaussian(l: np.ndarray) -> DegenerateGaussian:
    dg = DegenerateGaussian.from_covariance(l)
    n = l.shape[0]
    if dg.rank != n - 1:
        raise AuditPreconditionError(f"kernel dimension is {n - dg.rank}, expected 1")
    return dg


def _pair_gaussians(pair: NeighborPair, w: float) -> tuple[DegenerateGaussian, DegenerateGaussian]:
    return _graph_gaussian(lifted_laplacian(pair.g, w)), _graph_gaussian(lifted_laplacian(pair.g_prime, w))


def pdf_ratio_upper_check(pair: NeighborPair, params: LaplacianReleaseParams) -> tuple[float, bool]:
    """sqrt(pdet L_G' / pdet L_G), and whether it is <= e^{1/w}.

    ``pair`` must have g' >= g on the differing edge (the generators ensure this).
    """
    dg, dg_prime = _pair_gaussians(pair, params.w)
    log_ratio = 0.5 * (dg_prime.log_pseudo_det - dg.log_pseudo_det)
    ratio = math.exp(log_ratio)
    return ratio, ratio <= math.exp(1.0 / params.w) + 1e-9


def binomial_threshold(p: float, trials: int) -> float:
    """p plus three binomial standard errors."""
    return p + 3.0 * math.sqrt(p * (1.0 - p) / trials)


@dataclass(frozen=True)
class McResult:
    empirical_delta: float
    violations: int
    trials: int
    threshold: float

    @property
    def passed(self) -> bool:
        return self.empirical_delta <= self.threshold


def pdf_ratio_lower_mc(
    pair: NeighborPair,
    params: LaplacianReleaseParams,
    trials: int,
    seed: int,
    *,
    side: str = "g",
    batch: int = 20000,
) -> McResult:
    """Fraction of x = E^T y where the sampled side's density drops below e^{-eps0} times the other's."""
    if trials < 1:
        raise ParameterRangeError("trials must be positive")
    if side not in ("g", "g_prime"):
        raise ValueError("side must be 'g' or 'g_prime'")
    dg, dg_prime = _pair_gaussians(pair, params.w)
    src_graph = pair.g if side == "g" else pair.g_prime
    own, other = (dg, dg_prime) if side == "g" else (dg_prime, dg)
    e = edge_matrix_from_pairs(src_graph.n, lifted_pair_weights(src_graph, params.w))
    rng = make_rng(seed)
    violations = 0
    done = 0
    while done < trials:
        k = min(batch, trials - done)
        x = rng.standard_normal((k, e.shape[0])) @ e
        lr = log_pdf(own, x) - log_pdf(other, x)
        violations += int(np.count_nonzero(lr < -params.eps0))
        done += k
    frac = violations / trials
    return McResult(frac, violations, trials, binomial_threshold(params.delta0, trials))


@dataclass(frozen=True)
class FactResult:
    name: str
    passed: bool
    worst_margin: float


def _fact(name: str, margin: float, tol: float = FACT_TOL) -> FactResult:
    return FactResult(name, bool(margin >= -tol), float(margin))


def spectral_facts_check(
    pair: NeighborPair, params: LaplacianReleaseParams, *, samples: int = 100, seed: int = 0
) -> list[FactResult]:
    """Evaluate the spectral facts the privacy argument relies on.

    Margins are signed: negative means the inequality is violated by that much.
    """
    w = params.w
    n = pair.g.n
    l = lifted_laplacian(pair.g, w)
    lp = lifted_laplacian(pair.g_prime, w)
    sig = np.linalg.eigvalsh(l)  # ascending, sig[0] ~ 0
    lam = np.linalg.eigvalsh(lp)
    facts = []

    facts.append(_fact("loewner_order", float(np.linalg.eigvalsh(lp - l)[0])))
    facts.append(_fact("weyl", float(np.min(lam - sig))))
    facts.append(_fact("trace_gap", 2.0 - (float(np.trace(lp)) - float(np.trace(l)))))

    ones = np.ones(n) / math.sqrt(n)
    kernel_resid = max(float(np.linalg.norm(l @ ones)), float(np.linalg.norm(lp @ ones)))
    dg, dg_prime = DegenerateGaussian.from_covariance(l), DegenerateGaussian.from_covariance(lp)
    rank_ok = dg.rank == n - 1 and dg_prime.rank == n - 1
    facts.append(_fact("kernel_is_ones", -kernel_resid if rank_ok else -math.inf))
    facts.append(_fact("kernel_floor", (min(float(sig[1]), float(lam[1])) - w) / w))

    rng = make_rng(seed)
    x = rng.standard_normal((samples, n))
    x -= x.mean(axis=1, keepdims=True)
    q_g = np.einsum("ij,jk,ik->i", x, dg.pseudo_inv, x)
    q_gp = np.einsum("ij,jk,ik->i", x, dg_prime.pseudo_inv, x)
    facts.append(_fact("inverse_order", float(np.min(q_g - q_gp))))

    a, b = pair.edge
    e_ab = np.zeros(n)
    e_ab[a], e_ab[b] = 1.0, -1.0
    facts.append(_fact("cross_term", 2.0 / w - float(e_ab @ dg_prime.pseudo_inv @ e_ab)))
    return facts


# -- covariance side ---------------------------------------------------------

def check_neighbors(a, a_prime) -> tuple[np.ndarray, np.ndarray, int]:
    m = as_matrix(a, "a")
    mp = as_matrix(a_prime, "a_prime")
    if m.shape != mp.shape:
        raise AuditPreconditionError("neighbor matrices must share a shape")
    diff = mp - m
    rows = np.flatnonzero(np.any(diff != 0, axis=1))
    if len(rows) > 1:
        raise AuditPreconditionError(f"matrices differ on {len(rows)} rows")
    if len(rows) == 1 and np.linalg.norm(diff[rows[0]]) > 1.0 + 1e-12:
        raise AuditPreconditionError("row difference has norm > 1")
    return m, mp, int(rows[0]) if len(rows) else -1


def lindskii_sums(m: np.ndarray, mp: np.ndarray) -> tuple[float, float]:
    sig = np.linalg.svd(m, compute_uv=False)
    lam = np.linalg.svd(mp, compute_uv=False)
    big = lam > sig
    return float(np.sum(lam[big] - sig[big])), float(np.sum(sig[~big] - lam[~big]))


def lindskii_check(a, a_prime) -> tuple[float, float, bool]:
    """Directed singular-value gap sums over Big = {i: lambda_i > sigma_i} and its complement."""
    m, mp, _ = check_neighbors(a, a_prime)
    big_sum, small_sum = lindskii_sums(m, mp)
    return big_sum, small_sum, big_sum <= 1.0 + FACT_TOL and small_sum <= 1.0 + FACT_TOL


def random_neighbor_matrix(a, rng: np.random.Generator) -> np.ndarray:
    """Perturb one uniformly chosen row by a random direction with uniform radius in [0, 1]."""
    m = as_matrix(a, "a")
    n, d = m.shape
    i = int(rng.integers(n))
    v = rng.standard_normal(d)
    v *= rng.random() / np.linalg.norm(v)
    out = m.copy()
    out[i] += v
    return out


def _full_gaussian_logpdf(gram: np.ndarray, x: np.ndarray) -> np.ndarray:
    d = gram.shape[0]
    sign, logdet = np.linalg.slogdet(gram)
    if sign <= 0:
        raise AuditPreconditionError("shifted Gram matrix is not positive definite")
    inv = np.linalg.inv(gram)
    quad = np.einsum("ij,jk,ik->i", x, inv, x)
    return -0.5 * (d * LOG_2PI + logdet + quad)


@dataclass
class AuditReport:
    epsilon0: float
    delta0: float
    det_ratio: float
    upper_bound_ok: bool
    empirical_delta: float
    trials: int
    spectral_facts: list[FactResult] = field(default_factory=list)
    delta_threshold: float = float("nan")
    kind: str = "graph"
    pairs: int = 1

    @property
    def lower_bound_ok(self) -> bool:
        return self.empirical_delta <= self.delta_threshold

    @property
    def facts_ok(self) -> bool:
        return all(f.passed for f in self.spectral_facts)

    @property
    def passed(self) -> bool:
        return self.upper_bound_ok and self.lower_bound_ok and self.facts_ok

    def to_keyvalue(self) -> str:
        items = [
            ("kind", self.kind),
            ("epsilon0", self.epsilon0),
            ("delta0", self.delta0),
            ("det_ratio", self.det_ratio),
            ("upper_bound_ok", self.upper_bound_ok),
            ("empirical_delta", self.empirical_delta),
            ("delta_threshold", self.delta_threshold),
            ("lower_bound_ok", self.lower_bound_ok),
            ("trials", self.trials),
            ("pairs", self.pairs),
        ]
        for f in self.spectral_facts:
            items.append((f"fact.{f.name}.pass", f.passed))
            items.append((f"fact.{f.name}.margin", f.worst_margin))
        items.append(("passed", self.passed))
        return "".join(f"{k}={_fmt(v)}\n" for k, v in items)

    def csv_header(self) -> str:
        base = ["kind", "epsilon0", "delta0", "det_ratio", "upper_bound_ok", "empirical_delta",
                "delta_threshold", "lower_bound_ok", "trials", "pairs"]
        for f in self.spectral_facts:
            base += [f"{f.name}_pass", f"{f.name}_margin"]
        return ",".join(base + ["passed"])

    def to_csv_row(self) -> str:
        vals = [self.kind, self.epsilon0, self.delta0, self.det_ratio, self.upper_bound_ok,
                self.empirical_delta, self.delta_threshold, self.lower_bound_ok, self.trials, self.pairs]
        for f in self.spectral_facts:
            vals += [f.passed, f.worst_margin]
        return ",".join(_fmt(v) for v in vals + [self.passed])


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def merge_facts(groups: list[list[FactResult]]) -> list[FactResult]:
    """Combine per-pair fact lists into one worst-case entry per fact name."""
    merged: dict[str, FactResult] = {}
    for facts in groups:
        for f in facts:
            prev = merged.get(f.name)
            if prev is None:
                merged[f.name] = f
            else:
                merged[f.name] = FactResult(f.name, prev.passed and f.passed, min(prev.worst_margin, f.worst_margin))
    return list(merged.values())


def covariance_pair_facts(a, a_prime, w: float, *, samples: int = 100, seed: int = 0) -> list[FactResult]:
    m, mp, row = check_neighbors(a, a_prime)
    facts = []
    raw_e = mp - m
    sv_e = np.linalg.svd(raw_e, compute_uv=False)
    top = float(np.linalg.norm(raw_e[row])) if row >= 0 else 0.0
    facts.append(_fact("perturbation_rank_one", -max(abs(sv_e[0] - top), float(np.max(sv_e[1:], initial=0.0)))))

    # centering keeps the difference rank one with norm <= 1, so the corollary applies to both
    c, cp = center_rows(m), center_rows(mp)
    sums = lindskii_sums(m, mp) + lindskii_sums(c, cp)
    facts.append(_fact("lindskii_big", 1.0 - max(sums[0], sums[2])))
    facts.append(_fact("lindskii_small", 1.0 - max(sums[1], sums[3])))

    b, bp = spectral_shift(c, w), spectral_shift(cp, w)
    e = cp - c
    gap = bp.T @ bp - b.T @ b
    expected = cp.T @ e + e.T @ c
    scale = max(1.0, float(np.max(np.abs(b.T @ b))))
    facts.append(_fact("gram_gap", -float(np.max(np.abs(gap - expected))) / scale))

    z = make_rng(seed).standard_normal((samples, m.shape[1]))
    nb = np.linalg.norm(z @ b.T, axis=1)
    nbp = np.linalg.norm(z @ bp.T, axis=1)
    k = 1.0 + 1.0 / w
    margin = min(float(np.min(k * nbp - nb)), float(np.min(k * nb - nbp)))
    facts.append(_fact("norm_comparability", margin / max(1.0, float(np.max(nb)))))
    return facts


def covariance_ratio_audit(
    a, a_prime, params: CovarianceReleaseParams, trials: int, seed: int, *, batch: int = 20000
) -> AuditReport:
    """Check the determinant bound exactly and the density-ratio event by Monte Carlo from both sides."""
    m, mp, _ = check_neighbors(a, a_prime)
    n, d = m.shape
    if n < d:
        raise UnsupportedShapeError(f"need n >= d, got {n} x {d}")
    if trials < 1:
        raise ParameterRangeError("trials must be positive")
    b = spectral_shift(center_rows(m), params.w)
    bp = spectral_shift(center_rows(mp), params.w)
    gram, gram_p = b.T @ b, bp.T @ bp
    _, logdet = np.linalg.slogdet(gram)
    _, logdet_p = np.linalg.slogdet(gram_p)
    log_ratio = 0.5 * (logdet_p - logdet)
    half = params.eps0 / 2.0
    upper_ok = -half - 1e-12 <= log_ratio <= half + 1e-12

    rng = make_rng(seed)
    worst = 0
    for src, own, other in ((b, gram, gram_p), (bp, gram_p, gram)):
        violations = 0
        done = 0
        while done < trials:
            k = min(batch, trials - done)
            x = rng.standard_normal((k, n)) @ src
            lr = _full_gaussian_logpdf(own, x) - _full_gaussian_logpdf(other, x)
            violations += int(np.count_nonzero(np.abs(lr) > params.eps0))
            done += k
        worst = max(worst, violations)

    facts = covariance_pair_facts(m, mp, params.w, seed=derive_seed(seed, 1))
    facts.append(_fact("det_bound", half - abs(log_ratio)))
    return AuditReport(
        epsilon0=params.eps0,
        delta0=params.delta0,
        det_ratio=math.exp(log_ratio),
        upper_bound_ok=bool(upper_ok),
        empirical_delta=worst / trials,
        trials=trials,
        spectral_facts=facts,
        delta_threshold=binomial_threshold(params.delta0, trials),
        kind="covariance",
    )


# -- whole-suite drivers -----------------------------------------------------

def graph_audit(
    params: LaplacianReleaseParams,
    *,
    n: int = 8,
    pairs: int = 200,
    trials: int = 100_000,
    seed: int = 0,
    fact_samples: int = 100,
) -> AuditReport:
    """Upper bound and spectral facts over random pairs; Monte Carlo on the extreme pair."""
    ratios = []
    upper_ok = True
    fact_groups = []
    for k in range(pairs):
        rng = make_rng(derive_seed(seed, k))
        pair = random_neighbor_pair(random_weighted_graph(n, rng), rng)
        ratio, ok = pdf_ratio_upper_check(pair, params)
        ratios.append(ratio)
        upper_ok &= ok
        fact_groups.append(spectral_facts_check(pair, params, samples=fact_samples, seed=derive_seed(seed, pairs + k)))
    base = random_weighted_graph(n, make_rng(derive_seed(seed, 2 * pairs)))
    extreme = extreme_neighbor_pair(base, 0, 1)
    ratio, ok = pdf_ratio_upper_check(extreme, params)
    ratios.append(ratio)
    upper_ok &= ok
    fact_groups.append(spectral_facts_check(extreme, params, samples=fact_samples, seed=derive_seed(seed, 2 * pairs + 1)))
    mc = pdf_ratio_lower_mc(extreme, params, trials, derive_seed(seed, 2 * pairs + 2))
    return AuditReport(
        epsilon0=params.eps0,
        delta0=params.delta0,
        det_ratio=max(ratios),
        upper_bound_ok=bool(upper_ok),
        empirical_delta=mc.empirical_delta,
        trials=trials,
        spectral_facts=merge_facts(fact_groups),
        delta_threshold=mc.threshold,
        kind="graph",
        pairs=pairs + 1,
    )


def covariance_audit(
    params: CovarianceReleaseParams,
    *,
    n: int = 8,
    d: int = 4,
    pairs: int = 200,
    trials: int = 100_000,
    seed: int = 0,
) -> AuditReport:
    """Monte Carlo on one random neighbor pair, deterministic checks on ``pairs`` more."""
    rng = make_rng(derive_seed(seed, 0))
    a = rng.standard_normal((n, d))
    report = covariance_ratio_audit(a, random_neighbor_matrix(a, rng), params, trials, derive_seed(seed, 1))
    groups = [report.spectral_facts]
    ratios = [report.det_ratio]
    upper_ok = report.upper_bound_ok
    half = params.eps0 / 2.0
    for k in range(pairs):
        r = make_rng(derive_seed(seed, 2 + k))
        a = r.standard_normal((n, d))
        ap = random_neighbor_matrix(a, r)
        b = spectral_shift(center_rows(a), params.w)
        bp = spectral_shift(center_rows(ap), params.w)
        log_ratio = 0.5 * (np.linalg.slogdet(bp.T @ bp)[1] - np.linalg.slogdet(b.T @ b)[1])
        ratios.append(math.exp(log_ratio))
        upper_ok &= abs(log_ratio) <= half + 1e-12
        facts = covariance_pair_facts(a, ap, params.w, seed=derive_seed(seed, 2 + pairs + k))
        facts.append(_fact("det_bound", half - abs(log_ratio)))
        groups.append(facts)
    report.det_ratio = max(ratios, key=lambda x: abs(math.log(x)))
    report.upper_bound_ok = bool(upper_ok)
    report.spectral_facts = merge_facts(groups)
    report.pairs = pairs + 1
    return report


# -- univariate toy scheme ---------------------------------------------------

def univariate_norm_inversion(norm_sq: float, n: int, w: float) -> float:
    """Invert |D_t|^2 = w + (1 - w/n) * count for the number of ones."""
    return (norm_sq - n * (w / n)) / (1.0 - w / n)


def univariate_demo(d, eps: float, delta: float, eta: float, nu: float, seed: int) -> tuple[float, int]:
    """Estimate the number of ones in a bit vector from r private Gaussian projections.

    The vector is first translated to entries in {sqrt(w/n), 1}; the public
    estimate then inverts the affine relation between count and squared norm.
    """
    bits = np.asarray(d)
    if bits.ndim != 1 or not np.all((bits == 0) | (bits == 1)):
        raise ValueError("d must be a 0/1 vector")
    n = bits.shape[0]
    r = jl_dim(eta, nu, allow_half=True).r
    w = laplacian_noise_floor(eps, delta, r)
    if n <= 2 * w:
        raise ParameterRangeError(f"need n > 2w = {2 * w:.1f}, got n={n}")
    f = w / n
    translated = np.sqrt(f + (1.0 - f) * bits.astype(np.float64))
    y = make_rng(seed).standard_normal((r, n))
    x = y @ translated
    norm_est = float(x @ x) / r
    return univariate_norm_inversion(norm_est, n, w), int(bits.sum())


# -- covariance corollary (audit-only) ---------------------------------------

@dataclass(frozen=True)
class CorollaryOutcome:
    released: bool
    noisy_sigma_min: float
    threshold: float
    projection: np.ndarray | None = field(default=None, repr=False)


def corollary_experiment(a, params: CovarianceReleaseParams, seed: int, factor: float = 10.0) -> CorollaryOutcome:
    """Release sigma_min + Lap(1/eps); if it clears ``factor * w``, publish O = M A unshifted.

    The combined privacy accounting of this two-step path is informal, so it
    lives here as an experiment and is not exposed as a release command.
    """
    m = center_rows(a)
    n, d = m.shape
    if n < d:
        raise UnsupportedShapeError(f"need n >= d, got {n} x {d}")
    rng = make_rng(seed)
    sigma_min = float(np.linalg.svd(m, compute_uv=False)[-1])
    noisy = sigma_min + float(rng.laplace(0.0, 1.0 / params.eps))
    threshold = factor * params.w
    if noisy < threshold:
        return CorollaryOutcome(False, noisy, threshold)
    o = rng.standard_normal((params.r, n)) @ m
    return CorollaryOutcome(True, noisy, threshold, o)
