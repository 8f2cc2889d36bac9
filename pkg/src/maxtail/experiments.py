"""Monte-Carlo harness for coverage tables and the j1-selection study.

Replicate ``i`` of the cell with AR coefficient ``phi`` always draws from the
stream keyed by ``(seed, phi_key, i)``, so adding replicates or changing the
number of workers never changes existing replicates. Per-cell counts are
integers summed across workers, so the reduction is order independent.
"""
from __future__ import annotations

import csv
import io
import json
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .autoselect import AutoSelectConfig, range_slope, select_j1
from .covariance import default_sigma1
from .errors import ConfigError, DegenerateEstimateError
from .estimator import METHODS, ScaleRange, asymptotic_ci, estimate, montecarlo_cis
from .generators import ModelConfig, gen_series
from .rng import child_seed, make_rng
from .spectrum import compute_spectrum_batch

__all__ = [
    "CoverageSpec",
    "CoverageCell",
    "CoverageResult",
    "run_coverage",
    "SelectionStudy",
    "run_selection_study",
    "load_coverage_spec",
]

CI_KINDS = ("asymptotic", "montecarlo")


def _phi_key(phi: float) -> int:
    return int(round(phi * 1_000_000))


@dataclass(frozen=True)
class CoverageSpec:
    model: ModelConfig
    phis: tuple = (0.1, 0.3, 0.5, 0.7, 0.9)
    j1_values: tuple = (3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13)
    j2: int | None = None
    ci: str = "asymptotic"
    levels: tuple = (0.90, 0.95, 0.99)
    reps: int = 500
    seed: int = 0
    method: str = "gls"
    inner_reps: int = 1000
    true_alpha: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "phis", tuple(float(p) for p in self.phis))
        object.__setattr__(self, "j1_values", tuple(int(j) for j in self.j1_values))
        object.__setattr__(self, "levels", tuple(float(v) for v in self.levels))
        if self.reps < 100:
            raise ConfigError("coverage studies need reps >= 100")
        if any(not (0 < v < 1) for v in self.levels):
            raise ConfigError("levels must lie in (0, 1)")
        if self.ci not in CI_KINDS:
            raise ConfigError(f"ci must be one of {CI_KINDS}")
        if self.method not in METHODS:
            raise ConfigError(f"method must be one of {METHODS}")
        j2 = self.top_scale
        for j1 in self.j1_values:
            if not (1 <= j1 < j2):
                raise ConfigError(f"j1 = {j1} must satisfy 1 <= j1 < j2 = {j2}")
        for phi in self.phis:
            ModelConfig(self.model.variant, self.model.alpha, self.model.n, phi, self.model.coefficients)

    @property
    def top_scale(self) -> int:
        return int(self.model.n).bit_length() - 1 if self.j2 is None else int(self.j2)

    @property
    def alpha(self) -> float:
        return self.model.alpha if self.true_alpha is None else self.true_alpha

    def as_dict(self):
        d = asdict(self)
        d["model"] = self.model.as_dict()
        for k in ("phis", "j1_values", "levels"):
            d[k] = list(d[k])
        return d


def load_coverage_spec(path_or_dict) -> CoverageSpec:
    """Parse a coverage config (JSON file or dict).

    Keys: ``model`` (ModelConfig fields, ``phi`` ignored), ``phis``, ``j1``,
    ``j2``, ``ci``, ``levels``, ``reps``, ``seed``, ``method``,
    ``inner_reps``, ``true_alpha``.
    """
    if isinstance(path_or_dict, dict):
        d = dict(path_or_dict)
    else:
        try:
            d = json.loads(Path(path_or_dict).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read coverage config: {exc}") from None
    if "model" not in d:
        raise ConfigError("coverage config needs a 'model' section")
    model = dict(d.pop("model"))
    model.pop("phi", None)
    model.pop("seed", None)
    if "j1" in d:
        d["j1_values"] = d.pop("j1")
    known = set(CoverageSpec.__dataclass_fields__) - {"model"}
    extra = set(d) - known
    if extra:
        raise ConfigError(f"unknown coverage config keys: {sorted(extra)}")
    return CoverageSpec(model=ModelConfig.from_dict(model), **d)


@dataclass(frozen=True)
class CoverageCell:
    phi: float
    j1: int
    level: float
    hits: int
    valid: int
    degenerate: int

    @property
    def coverage(self) -> float:
        return self.hits / self.valid if self.valid else math.nan

    @property
    def se(self) -> float:
        c = self.coverage
        return math.sqrt(c * (1.0 - c) / self.valid) if self.valid else math.nan


@dataclass(frozen=True, eq=False)
class CoverageResult:
    spec: CoverageSpec
    cells: list

    def cell(self, phi, j1, level) -> CoverageCell:
        for c in self.cells:
            if math.isclose(c.phi, phi) and c.j1 == j1 and math.isclose(c.level, level):
                return c
        raise KeyError((phi, j1, level))

    def _table(self, value) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["level", "phi"] + [f"j1={j}" for j in self.spec.j1_values])
        for level in self.spec.levels:
            for phi in self.spec.phis:
                w.writerow([f"{level:g}", f"{phi:g}"] + [value(self.cell(phi, j, level)) for j in self.spec.j1_values])
        return buf.getvalue()

    def coverage_csv(self) -> str:
        return self._table(lambda c: f"{c.coverage:.3f}")

    def se_csv(self) -> str:
        return self._table(lambda c: f"{c.se:.4f}")

    def long_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["phi", "j1", "level", "coverage", "se", "valid", "degenerate"])
        for c in self.cells:
            w.writerow([f"{c.phi:g}", c.j1, f"{c.level:g}", f"{c.coverage:.4f}", f"{c.se:.4f}", c.valid, c.degenerate])
        return buf.getvalue()


def _coverage_chunk(spec: CoverageSpec, phi: float, start: int, stop: int):
    """Integer counts (hits, valid, degenerate) for replicates start..stop-1."""
    j2 = spec.top_scale
    cov = default_sigma1(j2)
    key = _phi_key(phi)
    model = ModelConfig(spec.model.variant, spec.model.alpha, spec.model.n, phi, spec.model.coefficients, spec.model.innovations)
    nj, nl = len(spec.j1_values), len(spec.levels)
    hits = np.zeros((nj, nl), dtype=np.int64)
    valid = np.zeros((nj, nl), dtype=np.int64)
    degenerate = np.zeros(nj, dtype=np.int64)
    alpha = spec.alpha
    for i in range(start, stop):
        sp = compute_spectrum_batch(gen_series(model, make_rng(spec.seed, key, i)))
        for a, j1 in enumerate(spec.j1_values):
            try:
                est = estimate(sp, ScaleRange(j1, j2), spec.method, cov)
            except DegenerateEstimateError:
                degenerate[a] += 1
                continue
            if spec.ci == "asymptotic":
                cis = [asymptotic_ci(est, lv) for lv in spec.levels]
            else:
                cis = montecarlo_cis(est, spec.levels, reps=spec.inner_reps, seed=child_seed(spec.seed, key, i, 1, j1))
            for b, ci in enumerate(cis):
                valid[a, b] += 1
                hits[a, b] += alpha in ci
    return hits, valid, degenerate


def _chunks(reps, size):
    return [(s, min(s + size, reps)) for s in range(0, reps, size)]


def run_coverage(spec: CoverageSpec, workers: int = 1, chunk: int = 50) -> CoverageResult:
    cells = []
    for phi in spec.phis:
        jobs = _chunks(spec.reps, chunk)
        if workers > 1:
            with ProcessPoolExecutor(workers) as ex:
                parts = list(ex.map(_coverage_chunk, *zip(*[(spec, phi, a, b) for a, b in jobs])))
        else:
            parts = [_coverage_chunk(spec, phi, a, b) for a, b in jobs]
        hits = sum(p[0] for p in parts)
        valid = sum(p[1] for p in parts)
        degenerate = sum(p[2] for p in parts)
        for a, j1 in enumerate(spec.j1_values):
            for b, level in enumerate(spec.levels):
                cells.append(CoverageCell(phi, j1, level, int(hits[a, b]), int(valid[a, b]), int(degenerate[a])))
    return CoverageResult(spec, cells)


@dataclass(frozen=True, eq=False)
class SelectionStudy:
    j1_counts: Counter
    alpha_hats: np.ndarray
    rmse_j1: np.ndarray
    rmse: np.ndarray
    degenerate: int = 0
    reps: int = 0
    extras: dict = field(default_factory=dict)

    @property
    def modal_j1(self) -> int:
        return self.j1_counts.most_common(1)[0][0]

    @property
    def modal_share(self) -> float:
        return self.j1_counts[self.modal_j1] / sum(self.j1_counts.values())

    @property
    def rmse_argmin(self) -> int:
        return int(self.rmse_j1[int(np.argmin(self.rmse))])

    def j1_histogram_csv(self) -> str:
        lines = ["j1,count"]
        lines += [f"{j},{self.j1_counts[j]}" for j in sorted(self.j1_counts)]
        return "\n".join(lines) + "\n"

    def alpha_histogram_csv(self, bins=20) -> str:
        counts, edges = np.histogram(self.alpha_hats, bins=bins)
        lines = ["bin_lower,bin_upper,count"]
        lines += [f"{edges[k]:.6g},{edges[k + 1]:.6g},{counts[k]}" for k in range(len(counts))]
        return "\n".join(lines) + "\n"

    def rmse_csv(self) -> str:
        lines = ["j1,rmse_h"]
        lines += [f"{j},{r:.6g}" for j, r in zip(self.rmse_j1.tolist(), self.rmse.tolist())]
        return "\n".join(lines) + "\n"


def run_selection_study(model: ModelConfig, cfg: AutoSelectConfig = AutoSelectConfig(), reps: int = 500, seed=0) -> SelectionStudy:
    """Histogram of selected j1, the resulting alpha estimates, and RMSE of H(j1, j2) per j1.

    All three panels come from the same simulated series.
    """
    if reps < 100:
        raise ConfigError("selection studies need reps >= 100")
    J = int(model.n).bit_length() - 1
    j2 = J if cfg.j2 is None else cfg.j2
    cov = default_sigma1(j2)
    true_h = 1.0 / model.alpha
    j1_grid = np.arange(1, j2)
    sq = np.zeros(j1_grid.shape[0])
    counts = Counter()
    alphas = []
    degenerate = 0
    for i in range(reps):
        sp = compute_spectrum_batch(gen_series(model, make_rng(seed, i)))
        try:
            sel = select_j1(sp, cfg, cov)
            counts[sel.j1] += 1
            alphas.append(sel.estimate.alpha)
        except DegenerateEstimateError:
            degenerate += 1
        for a, j1 in enumerate(j1_grid):
            sq[a] += (range_slope(sp, int(j1), j2, cfg.method, cov) - true_h) ** 2
    return SelectionStudy(counts, np.array(alphas), j1_grid, np.sqrt(sq / reps), degenerate, reps)
