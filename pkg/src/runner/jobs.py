"""
서브커맨드 작업 정의
각 작업은 (CSV 용 DataFrame, JSON 리포트) 를 만들고 run() 이 `<out>/<sub>.csv|json` 으로 기록한다.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np
import pandas as pd

from ..common.errors import CuspLabError, PreconditionError
from ..common.output import write_csv, write_report
from ..common.utils import derive_seed, make_rng
from ..config import settings
from ..ergodic import (
    bernoulli_itinerary,
    bernoulli_sampler,
    binary_entropy,
    birkhoff_lyapunov,
    compare_exact,
    density_histogram,
    entropy_word_count,
    exact_bin_masses,
    geometric_radii,
    infinite_exponent_series,
    initial_condition,
    local_dimension,
    singular_integral_classify,
    word_count_rates,
)
from ..extension import backward_orbit, pullback_interval
from ..family import BaseFamily, FamilyParams, get_registry, register_builtin_families
from ..inducing import build_induced, spread_measure, transfer_density, transfer_invariance_error
from ..maps import ConjugacyKernel, InvariantDensity, OpenInterval, PiecewiseMap, make_f_alpha, make_g_alpha
from .run_config import RunConfig

logger = logging.getLogger(__name__)

LOG2 = math.log(2.0)
SLOPE_BAND = 0.05
DIMENSION_RADII = (1e-7, 1e-1, 13)
DEFAULT_RADIUS = 0.01


@dataclass(frozen=True)
class JobResult:
    frame: pd.DataFrame
    report: Dict[str, Any]


@dataclass(frozen=True)
class JobContext:
    config: RunConfig
    family: BaseFamily
    params: FamilyParams

    @property
    def fmap(self) -> PiecewiseMap:
        return self.family.build(self.params)

    @property
    def density(self) -> Optional[InvariantDensity]:
        return self.family.density(self.params)


def _context(cfg: RunConfig, alpha: Optional[float] = None) -> JobContext:
    register_builtin_families()
    family = get_registry().require(cfg.family)
    params = FamilyParams(alpha=cfg.alpha if alpha is None else alpha, b=cfg.b)
    return JobContext(cfg, family, params)


def _start_point(ctx: JobContext, fmap: PiecewiseMap, density: Optional[InvariantDensity]) -> float:
    if ctx.config.x0 is not None:
        return float(ctx.config.x0)
    return initial_condition(fmap, derive_seed(ctx.config.seed, "x0"), density)


def _exact_column(frame: pd.DataFrame, density: Optional[InvariantDensity], interval: OpenInterval, bins: int):
    if density is not None:
        frame["exact_mass"] = exact_bin_masses(density, interval, bins)
    return frame


# ─── 서브커맨드 ───

def eval_grid_job(ctx: JobContext) -> JobResult:
    """h_α, g_α, f_α 와 log|Dg|, log|Df| 표 (그림용)"""
    cfg = ctx.config
    alpha = float(cfg.alpha)
    x = np.linspace(0.0, 1.0, cfg.n + 2)[1:-1]
    kernel = ConjugacyKernel(alpha)
    g_vals, g_logd = make_g_alpha(alpha).eval_array(x)
    f_vals, f_logd = make_f_alpha(alpha).eval_array(x)
    frame = pd.DataFrame({
        "x": x,
        "h": kernel.eval(x),
        "log_dh": kernel.log_deriv(x),
        "g_alpha": g_vals,
        "f_alpha": f_vals,
        "log_abs_dg": g_logd,
        "log_abs_df": f_logd,
    })
    return JobResult(frame, {"alpha": alpha, "points": int(x.size)})


def lyapunov_job(ctx: JobContext) -> JobResult:
    cfg = ctx.config
    fmap, density = ctx.fmap, ctx.density
    x0 = _start_point(ctx, fmap, density)
    est = birkhoff_lyapunov(fmap, x0, cfg.n, burn_in=cfg.burn_in, seed=cfg.seed)
    frame = pd.DataFrame(est.running, columns=["step", "running_chi"])
    report = {"chi": est.chi, "n": est.n, "burn_in": est.burn_in, "x0": est.x0}
    return JobResult(frame, report)


def _weight_for(ctx: JobContext) -> str:
    if ctx.config.weight is not None:
        return ctx.config.weight
    return "exact" if ctx.density is not None else "lebesgue"


def classify_job(ctx: JobContext) -> JobResult:
    cfg = ctx.config
    weight = _weight_for(ctx)
    verdict = singular_integral_classify(
        ctx.fmap,
        ctx.family.singular_point,
        side=ctx.family.singular_side,
        weight=weight,
        k_range=(cfg.k_lo, cfg.k_hi),
        density=ctx.density if weight == "exact" else None,
    )
    frame = pd.DataFrame([{
        "family": cfg.family,
        "alpha": cfg.alpha,
        "weight": weight,
        "verdict": verdict.verdict.value,
        "fitted_exponent": verdict.fitted_exponent,
        "far_exponent": verdict.far_exponent,
        "fitted_ratio": verdict.fitted_ratio,
        "total": verdict.total,
    }])
    report = {
        "verdict": verdict.verdict.value,
        "weight": weight,
        "k_range": list(verdict.k_range),
        "annulus_sums": list(verdict.annulus_sums),
        "local_exponents": list(verdict.local_exponents),
        "fitted_exponent": verdict.fitted_exponent,
        "fitted_ratio": verdict.fitted_ratio,
    }
    return JobResult(frame, report)


def entropy_job(ctx: JobContext) -> JobResult:
    cfg = ctx.config
    report: Dict[str, Any] = {"source": cfg.source}
    if cfg.source == "bernoulli":
        symbols = bernoulli_itinerary(cfg.p, cfg.n, seed=cfg.seed)
        result = word_count_rates(symbols, cfg.word_lengths, alphabet=2)
        report["expected"] = binary_entropy(cfg.p)
    else:
        fmap, density = ctx.fmap, ctx.density
        partition = [b.domain for b in fmap.branches]
        x0 = _start_point(ctx, fmap, density)
        result = entropy_word_count(fmap, partition, cfg.n, cfg.word_lengths, x0, seed=cfg.seed)
    counts = dict(result.word_counts)
    frame = pd.DataFrame(
        [{"word_length": n, "word_count": counts[n], "rate": rate} for n, rate in result.rates]
    )
    report.update({
        "rates": {str(n): r for n, r in result.rates},
        "perturbations": result.perturbations,
        "orbit_length": result.orbit_length,
    })
    return JobResult(frame, report)


def _dimension_sampler(ctx: JobContext):
    cfg = ctx.config
    if cfg.measure == "acip":
        density = ctx.density
        if density is None:
            raise PreconditionError(f"{cfg.family}: acip 표본에는 닫힌꼴 불변밀도가 필요함")
        return density.sample, 1.0
    base = bernoulli_sampler(cfg.p)
    chart = ctx.fmap.chart
    expected = binary_entropy(cfg.p) / LOG2
    if chart is None:
        raise PreconditionError(f"{cfg.family}: Bernoulli 측도는 텐트 켤레 사상에서만 정의됨")
    if chart.is_identity:
        return base, expected

    def pushed(count: int, rng: np.random.Generator) -> np.ndarray:
        return np.asarray(chart.to_ambient(base(count, rng)), dtype=float)

    return pushed, expected


def dimension_job(ctx: JobContext) -> JobResult:
    cfg = ctx.config
    sampler, expected = _dimension_sampler(ctx)
    anchors = sampler(cfg.points, make_rng(derive_seed(cfg.seed, "anchors")))
    radii = geometric_radii(*DIMENSION_RADII)
    est = local_dimension(anchors, sampler, radii, sample_count=cfg.samples, seed=cfg.seed)
    frame = pd.DataFrame({"point": anchors, "slope": est.slopes})
    report = {
        "measure": cfg.measure,
        "pooled": est.pooled,
        "expected": expected,
        "gap": abs(est.pooled - expected),
        "dropped": est.dropped,
        "sample_count": est.sample_count,
    }
    return JobResult(frame, report)


def density_job(ctx: JobContext) -> JobResult:
    cfg = ctx.config
    fmap, density = ctx.fmap, ctx.density
    x0 = _start_point(ctx, fmap, density)
    est = density_histogram(fmap, x0, cfg.n, cfg.bins, seed=cfg.seed)
    frame = _exact_column(est.to_frame(), density, est.interval, est.bin_count)
    report = {
        "samples": est.samples,
        "broken_at": est.broken_at,
        "l1_exact": compare_exact(est, density) if density is not None else None,
    }
    return JobResult(frame, report)


def _nice_interval(ctx: JobContext) -> OpenInterval:
    cfg = ctx.config
    if cfg.u_lo is not None:
        return OpenInterval(cfg.u_lo, cfg.u_hi)
    return ctx.family.nice_interval(ctx.params)


def induce_job(ctx: JobContext) -> JobResult:
    cfg = ctx.config
    imm = build_induced(ctx.fmap, _nice_interval(ctx), max_depth=cfg.depth, return_order=cfg.return_order)
    frame = pd.DataFrame([
        {
            "lo": b.domain.lo,
            "hi": b.domain.hi,
            "return_time": b.return_time,
            "word": "".join(str(s) for s in b.word),
        }
        for b in imm.branches
    ])
    report = {
        "U": list(imm.U.as_tuple()),
        "branch_count": imm.branch_count,
        "kac_sum": imm.kac_sum,
        "residual_measure": imm.residual_measure,
        "lambda_min": imm.lambda_min,
        "return_order": imm.return_order,
        "levels": [
            {"depth": s.depth, "branches": s.branch_count, "kac_sum": s.kac_sum, "residual": s.residual}
            for s in imm.levels
        ],
    }
    return JobResult(frame, report)


def spread_job(ctx: JobContext) -> JobResult:
    cfg = ctx.config
    fmap, density = ctx.fmap, ctx.density
    imm = build_induced(fmap, _nice_interval(ctx), max_depth=cfg.depth, return_order=cfg.return_order)
    transfer = transfer_density(imm)
    est = spread_measure(imm, transfer.estimate, bins=cfg.bins)
    frame = _exact_column(est.to_frame(), density, est.interval, est.bin_count)
    report = {
        "branch_count": imm.branch_count,
        "transfer_converged": transfer.converged,
        "transfer_iterations": transfer.iterations,
        "l1_exact": compare_exact(est, density) if density is not None else None,
        "invariance_error": transfer_invariance_error(fmap, est),
        "flagged_bins": list(est.flagged_bins),
    }
    return JobResult(frame, report)


def _pullback_row(ctx: JobContext, fmap: PiecewiseMap, density, index: int) -> Dict[str, Any]:
    cfg = ctx.config
    seed = derive_seed(cfg.seed, "pullback", index)
    rng = make_rng(seed)
    if density is not None:
        y0 = float(density.sample(1, rng)[0])
    else:
        y0 = float(rng.uniform(*fmap.ambient.as_tuple()))
    edge = min(y0 - fmap.ambient.lo, fmap.ambient.hi - y0)
    radius = min(cfg.radius or DEFAULT_RADIUS, 0.5 * edge)
    row: Dict[str, Any] = {"orbit": index, "y0": y0, "status": "ok", "error": ""}
    try:
        orbit = backward_orbit(fmap, y0, cfg.n, policy=cfg.policy, seed=seed, density=density)
        trace = pullback_interval(fmap, orbit, radius=radius, distortion_budget=cfg.distortion_budget)
    except CuspLabError as e:
        logger.warning(f"pullback orbit {index}: {type(e).__name__}: {e.message}")
        row.update({"status": "failed", "error": type(e).__name__})
        row.update({
            "radius": math.nan, "slope": math.nan, "final_distortion": math.nan,
            "shrink_events": -1, "overrun_at": -1,
        })
        return row
    row.update({
        "radius": trace.radius,
        "slope": trace.slope,
        "final_distortion": float(trace.distortion_partial_sums[-1]),
        "shrink_events": trace.shrink_events,
        "overrun_at": -1 if trace.budget_overrun_at is None else trace.budget_overrun_at,
    })
    return row


def pullback_job(ctx: JobContext) -> JobResult:
    cfg = ctx.config
    fmap, density = ctx.fmap, ctx.density
    rows = [_pullback_row(ctx, fmap, density, i) for i in range(cfg.orbits)]
    frame = pd.DataFrame(rows, columns=[
        "orbit", "y0", "radius", "slope", "final_distortion", "shrink_events", "overrun_at", "status", "error",
    ])
    ok = frame[frame["status"] == "ok"]
    within = int(((ok["slope"] + LOG2).abs() <= SLOPE_BAND).sum())
    report = {
        "orbits": cfg.orbits,
        "steps": cfg.n,
        "failed": int((frame["status"] != "ok").sum()),
        "slope_within_band": within,
        "max_final_distortion": float(ok["final_distortion"].max()) if len(ok) else None,
        "distortion_budget": cfg.distortion_budget,
        "within_log2": int((ok["overrun_at"] < 0).sum()),
    }
    return JobResult(frame, report)


def series_job(ctx: JobContext) -> JobResult:
    cfg = ctx.config
    result = infinite_exponent_series(cfg.alpha, cfg.p, N=cfg.N, terms=cfg.terms)
    frame = pd.DataFrame({
        "i": np.arange(result.lower.size),
        "lower_partial": result.lower,
        "upper_partial": result.upper,
    })
    report = {
        "verdict": result.verdict.value,
        "ratio": result.ratio,
        "lower_limit": result.lower_limit,
        "upper_limit": result.upper_limit,
    }
    return JobResult(frame, report)


# ─── sweep ───

def _sweep_task(cfg: RunConfig, alpha: float) -> Dict[str, Any]:
    seed = derive_seed(cfg.seed, cfg.task, alpha)
    row: Dict[str, Any] = {"alpha": alpha, "seed": seed, "status": "ok", "verdict": "", "value": math.nan, "error": ""}
    try:
        task_cfg = cfg.model_copy(update={"alpha": alpha, "seed": seed})
        if cfg.task == "series":
            result = series_job(_context(task_cfg.require_for("series"), alpha))
            row.update({"verdict": result.report["verdict"], "value": result.report["ratio"]})
        elif cfg.task == "lyapunov":
            result = lyapunov_job(_context(task_cfg.require_for("lyapunov"), alpha))
            row["value"] = result.report["chi"]
        else:
            result = classify_job(_context(task_cfg.require_for("classify"), alpha))
            row.update({"verdict": result.report["verdict"], "value": result.report["fitted_exponent"]})
    except CuspLabError as e:
        logger.warning(f"sweep alpha={alpha}: {type(e).__name__}: {e.message}")
        row.update({"status": "failed", "error": type(e).__name__})
    return row


def sweep_job(ctx: JobContext) -> JobResult:
    cfg = ctx.config
    alphas = sorted(float(a) for a in cfg.alphas)
    with ThreadPoolExecutor(max_workers=settings.threads) as pool:
        rows = list(pool.map(lambda a: _sweep_task(cfg, a), alphas))
    frame = pd.DataFrame(rows, columns=["alpha", "seed", "status", "verdict", "value", "error"])
    report = {
        "task": cfg.task,
        "alphas": alphas,
        "failed": int((frame["status"] != "ok").sum()),
        "verdicts": {str(r["alpha"]): r["verdict"] for r in rows},
    }
    return JobResult(frame, report)


JOBS: Dict[str, Callable[[JobContext], JobResult]] = {
    "eval-grid": eval_grid_job,
    "lyapunov": lyapunov_job,
    "classify": classify_job,
    "entropy": entropy_job,
    "dimension": dimension_job,
    "density": density_job,
    "induce": induce_job,
    "spread": spread_job,
    "pullback": pullback_job,
    "series": series_job,
    "sweep": sweep_job,
}


def run(subcommand: str, config: RunConfig) -> Tuple[Path, Path]:
    """설정 검증 → 작업 실행 → `<out>/<sub>.csv`, `<out>/<sub>.json` 기록"""
    cfg = config.require_for(subcommand)
    config_hash = cfg.config_hash()
    ctx_fields = {"subcommand": subcommand, "family": cfg.family, "alpha": cfg.alpha, "seed": cfg.seed}
    ctx = _context(cfg)
    logger.info(
        f"{subcommand} 시작: {ctx.family.display_name} (config_hash={config_hash[:12]})",
        extra={"ctx": ctx_fields},
    )
    result = JOBS[subcommand](ctx)

    out_dir = Path(cfg.out)
    csv_path = write_csv(result.frame, out_dir / f"{subcommand}.csv", config_hash)
    report = {
        "subcommand": subcommand,
        "config_hash": config_hash,
        "family_name": ctx.family.display_name,
        "config": cfg.model_dump(mode="json", exclude={"out"}),
        **result.report,
    }
    json_path = write_report(report, out_dir / f"{subcommand}.json")
    logger.info(f"{subcommand} 완료 → {csv_path}", extra={"ctx": ctx_fields})
    return csv_path, json_path
