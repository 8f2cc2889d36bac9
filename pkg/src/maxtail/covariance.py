"""Asymptotic covariance of the max-spectrum over relative scale offsets.

Entry (i', i'') of the ell x ell matrix is

    Sigma1(i', i'') = 2^max(i', i'') * Cov(log2 Z1, log2(Z1 v (2^|i'-i''| - 1) Z2))

with Z1, Z2 independent standard 1-Fréchet, so that for i.i.d. Fréchet data
n_{j0} * Cov(Y_{j0+i'}, Y_{j0+i''}) -> Sigma1(i', i''). The diagonal is
2^i * pi^2 / (6 ln^2 2).

Off-diagonal entries are computed by one-dimensional quadrature. Writing
G = ln Z1 (standard Gumbel) and T = exp(-G) ~ Exp(1),

    Cov(G, max(G, ln c + ln Z2)) = Var(G) + E[(-ln T - gamma) Ein(c T)],

where Ein(x) = int_0^x (1 - e^-u)/u du.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np
from scipy import integrate, special

from .errors import CovarianceError, NumericalError, ParameterError
from .frechet import EULER_GAMMA, LN2, log2_standard_frechet
from .rng import fresh_seed, make_rng

__all__ = [
    "CovarianceModel",
    "sigma1_matrix",
    "offset_covariance",
    "offset_covariance_montecarlo",
    "default_sigma1",
    "read_table",
    "write_table",
    "ein",
]

VAR_LOG2_FRECHET = math.pi ** 2 / (6.0 * LN2 ** 2)
TABLE_FORMAT = "maxtail-sigma1"
TABLE_VERSION = 1
SHIPPED_ELL = 15


@dataclass(frozen=True, eq=False)
class CovarianceModel:
    sigma1: np.ndarray
    mode: str = "quadrature"
    samples: int = 0
    seed: int | None = None
    stderr: np.ndarray | None = field(default=None, repr=False)

    @property
    def ell(self) -> int:
        return int(self.sigma1.shape[0])

    def sub(self, ell: int) -> "CovarianceModel":
        """Leading ell x ell block (entries depend only on the offsets)."""
        if ell > self.ell:
            raise CovarianceError(f"table holds ell <= {self.ell}, requested {ell}")
        se = None if self.stderr is None else self.stderr[:ell, :ell].copy()
        return CovarianceModel(self.sigma1[:ell, :ell].copy(), self.mode, self.samples, self.seed, se)

    def check(self, tol=1e-8):
        s = self.sigma1
        if s.ndim != 2 or s.shape[0] != s.shape[1]:
            raise CovarianceError("Sigma1 must be square")
        if not np.allclose(s, s.T, rtol=0, atol=1e-12 * np.abs(s).max()):
            raise CovarianceError("Sigma1 is not symmetric")
        ev = np.linalg.eigvalsh(s)
        if ev[0] < -tol * ev[-1]:
            raise CovarianceError(f"Sigma1 is not positive semidefinite (min eigenvalue {ev[0]:.3e})")
        return self


def ein(x):
    """Entire exponential integral Ein(x) = E1(x) + ln x + gamma, x >= 0."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    small = x <= 1.0
    xs = x[small]
    # alternating series, 20 terms give full precision on [0, 1]
    term = xs.copy()
    acc = xs.copy()
    for k in range(2, 22):
        term = -term * xs / k
        acc = acc + term / k
    out[small] = acc
    xl = x[~small]
    out[~small] = special.exp1(xl) + np.log(xl) + EULER_GAMMA
    return out[()] if out.ndim == 0 else out


def offset_covariance(d: int) -> float:
    """Cov(log2 Z1, log2(Z1 v (2^d - 1) Z2)) by quadrature."""
    if d < 0:
        raise ParameterError("offset must be >= 0")
    if d == 0:
        return VAR_LOG2_FRECHET
    c = 2.0 ** d - 1.0

    def f(t):
        return (-math.log(t) - EULER_GAMMA) * float(ein(c * t)) * math.exp(-t)

    total = 0.0
    err_total = 0.0
    for a, b in ((0.0, 1.0 / c), (1.0 / c, 1.0), (1.0, 40.0)):
        if b <= a:
            continue
        val, err, info = integrate.quad(f, a, b, limit=200, epsabs=1e-13, epsrel=1e-12, full_output=1)[:3]
        if err > 1e-8:
            raise NumericalError(
                f"quadrature for offset {d} did not converge on [{a}, {b}]: "
                f"value={val!r} abserr={err!r} evaluations={info.get('neval')}"
            )
        total += val
        err_total += err
    return (math.pi ** 2 / 6.0 + total) / LN2 ** 2


def offset_covariance_montecarlo(max_offset: int, samples: int, seed, chunk=1_000_000):
    """Monte-Carlo estimates and standard errors of the offset covariances.

    Returns two arrays indexed by d = 0..max_offset. All offsets share the
    same paired draws.
    """
    D = max_offset + 1
    # running sums for the sample covariance of (G1, M_d)
    n_tot = 0
    sx = 0.0
    sm = np.zeros(D)
    sxm = np.zeros(D)
    sq = np.zeros(D)  # sum of squared cross products, for the standard error
    shift = EULER_GAMMA / LN2
    log2c = np.array([-np.inf] + [math.log2(2.0 ** d - 1.0) for d in range(1, D)])
    for idx in range(-(-samples // chunk)):
        m = min(chunk, samples - idx * chunk)
        rng = make_rng(seed, idx)
        g1 = log2_standard_frechet(rng, m) - shift
        g2 = log2_standard_frechet(rng, m) - shift
        n_tot += m
        sx += g1.sum()
        for d in range(D):
            md = np.maximum(g1, g2 + log2c[d]) if d else g1
            sm[d] += md.sum()
            p = g1 * md
            sxm[d] += p.sum()
            sq[d] += (p * p).sum()
    mx = sx / n_tot
    mm = sm / n_tot
    cov = (sxm - n_tot * mx * mm) / (n_tot - 1)
    # delta-method SE, ignoring the (O(1/N)) uncertainty of the means
    var_p = sq / n_tot - (sxm / n_tot) ** 2
    se = np.sqrt(np.maximum(var_p, 0.0) / n_tot)
    return cov, se


def _assemble(offset_values, ell):
    i = np.arange(1, ell + 1)
    d = np.abs(i[:, None] - i[None, :])
    scale = 2.0 ** np.maximum(i[:, None], i[None, :])
    return scale * np.asarray(offset_values)[d]


def sigma1_matrix(ell: int, mode: str = "quadrature", mc_samples: int = 10_000_000, seed=None) -> CovarianceModel:
    if ell < 2:
        raise ParameterError("ell must be >= 2")
    if mode == "quadrature":
        vals = [offset_covariance(d) for d in range(ell)]
        return CovarianceModel(_assemble(vals, ell), "quadrature").check()
    if mode == "montecarlo":
        if mc_samples < 10 ** 6:
            raise ParameterError("Monte-Carlo Sigma1 needs at least 10^6 samples")
        if seed is None:
            seed = fresh_seed()
        cov, se = offset_covariance_montecarlo(ell - 1, mc_samples, seed)
        cov = cov.copy()
        cov[0] = VAR_LOG2_FRECHET
        se = se.copy()
        se[0] = 0.0
        model = CovarianceModel(_assemble(cov, ell), "montecarlo", int(mc_samples), seed, _assemble(se, ell))
        return model.check()
    raise ParameterError(f"unknown mode {mode!r}")


# -- table file ---------------------------------------------------------------

def write_table(model: CovarianceModel, path) -> None:
    lines = [
        f"# {TABLE_FORMAT} table: Sigma1(i,j) = 2^max(i,j) Cov(log2 Z1, log2(Z1 v (2^|i-j|-1) Z2))",
        f"format: {TABLE_FORMAT}",
        f"version: {TABLE_VERSION}",
        f"ell: {model.ell}",
        f"mode: {model.mode}",
        f"samples: {model.samples}",
        f"seed: {'none' if model.seed is None else model.seed}",
        "entries:",
    ]
    for row in model.sigma1:
        lines.append(" ".join(repr(float(v)) for v in row))
    if model.stderr is not None:
        lines.append("stderr:")
        for row in model.stderr:
            lines.append(" ".join(repr(float(v)) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def _parse_table(text: str) -> CovarianceModel:
    meta = {}
    blocks = {"entries": [], "stderr": []}
    current = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line in ("entries:", "stderr:"):
            current = line[:-1]
            continue
        if current is None:
            key, _, value = line.partition(":")
            meta[key.strip()] = value.strip()
        else:
            blocks[current].append([float(v) for v in line.split()])
    if meta.get("format") != TABLE_FORMAT:
        raise CovarianceError(f"not a {TABLE_FORMAT} file")
    if int(meta.get("version", -1)) != TABLE_VERSION:
        raise CovarianceError(f"unsupported table version {meta.get('version')}")
    ell = int(meta["ell"])
    s = np.array(blocks["entries"], dtype=np.float64)
    if s.shape != (ell, ell):
        raise CovarianceError(f"expected {ell}x{ell} entries, got {s.shape}")
    se = np.array(blocks["stderr"], dtype=np.float64) if blocks["stderr"] else None
    seed = None if meta.get("seed", "none") == "none" else int(meta["seed"])
    return CovarianceModel(s, meta.get("mode", "quadrature"), int(meta.get("samples", 0)), seed, se)


def read_table(path) -> CovarianceModel:
    return _parse_table(Path(path).read_text()).check()


@functools.lru_cache(maxsize=1)
def _shipped() -> CovarianceModel:
    text = resources.files("maxtail").joinpath("data/sigma1.txt").read_text()
    return _parse_table(text)


def default_sigma1(ell: int) -> CovarianceModel:
    """Sigma1 for ell scales, from the shipped table when ell <= 15."""
    if ell <= SHIPPED_ELL:
        return _shipped().sub(ell)
    return sigma1_matrix(ell, "quadrature")
