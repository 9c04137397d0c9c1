"""Multinomial bootstrap confidence sets for differences and ranks.

Resampling counts from the fitted multinomial gives a bootstrap
distribution of max-type statistics over a family of category pairs.
The quantile of that distribution calibrates simultaneous confidence
intervals for the pairwise probability differences; whether an
interval excludes zero then drives directional claims about the
sign of each difference, which assemble into rank confidence sets
exactly as in :mod:`ranksets.core`.

Zero counts need conventions: a bootstrap ratio evaluates ``0/0`` as 0
and ``c/0`` as ``sign(c) * inf``.  Infinities are kept and propagate
— an infinite critical value legitimately produces full-width
intervals, which is observable behavior on sparse data, not an error.

Difference confidence sets scale each pair by its own standard
deviation.  The rank readout instead holds every comparison in the
family to one common threshold — the critical value times the largest
per-pair scale — so a claim is made only when a difference clears the
band that covers all pairs simultaneously.  The band contains each
per-pair interval, so its simultaneous coverage is at least as high.

The naive alternative resamples the ranks themselves and reads off
their empirical quantiles; it is included as a comparison baseline and
is known to under-cover when categories are (nearly) tied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .core import (
    MultinomialSample,
    PairwiseRejections,
    RankSet,
    _theta_array,
    build_index_family,
    rankset_from_rejections,
)

__all__ = [
    "SHAPES",
    "BootstrapConfig",
    "DifferenceCS",
    "resample",
    "studentized_max_stat",
    "bootstrap_quantile",
    "difference_cs",
    "boot_rank_cs",
    "naive_rank_cs",
]

#: Interval shapes for difference confidence sets.
SHAPES = ("lower", "upper", "symm", "equi")

_VARIANTS = ("lower", "upper", "symm")


@dataclass(frozen=True)
class BootstrapConfig:
    """Knobs of a bootstrap run.

    Parameters
    ----------
    B : int
        Number of bootstrap resamples, at least 1.
    seed : int, optional
        Seed for the resampling stream; ``None`` draws fresh entropy
        (not reproducible).
    studentize : bool
        Scale each pairwise ratio by its resample standard deviation.
    shape : {'lower', 'upper', 'symm', 'equi'}
        Interval shape for difference confidence sets.
    """

    B: int = 2000
    seed: int | None = 0
    studentize: bool = True
    shape: str = "symm"

    def __post_init__(self) -> None:
        if self.B < 1:
            raise ValueError("B must be at least 1")
        if self.shape not in SHAPES:
            raise ValueError(f"shape must be one of {SHAPES}, got {self.shape!r}")


def resample(theta_hat, n: int, rng: np.random.Generator) -> MultinomialSample:
    """Draw one bootstrap sample of counts from Multinomial(n, theta_hat)."""
    arr = _theta_array(theta_hat)
    counts = rng.multinomial(int(n), arr)
    return MultinomialSample(counts=tuple(int(c) for c in counts))


@lru_cache(maxsize=8)
def _theta_star_cached(
    counts: tuple[int, ...], n: int, B: int, seed: int
) -> np.ndarray:
    """(B, p) matrix of resampled frequency vectors; cached and frozen.

    The matrix depends only on ``(counts, n, B, seed)``, so every
    method asking for the same configuration shares one set of
    resamples — bootstrap variants stay paired and repeated calls are
    bit-identical.
    """
    rng = np.random.default_rng(seed)
    theta_hat = np.asarray(counts, dtype=float) / n
    star = rng.multinomial(n, theta_hat, size=B) / n
    star.flags.writeable = False
    return star


def _theta_star_matrix(sample: MultinomialSample, config: BootstrapConfig) -> np.ndarray:
    if config.seed is None:
        seed = int(np.random.SeedSequence().entropy % (2**63))
        return _theta_star_cached.__wrapped__(
            sample.counts, sample.n, config.B, seed
        )
    return _theta_star_cached(sample.counts, sample.n, config.B, int(config.seed))


def _safe_ratios(num: np.ndarray, denom: np.ndarray) -> np.ndarray:
    """Divide with the conventions 0/0 = 0 and c/0 = sign(c) * inf."""
    with np.errstate(divide="ignore", invalid="ignore"):
        out = num / denom
    return np.where((num == 0.0) & (denom == 0.0), 0.0, out)


def _pair_stats(
    theta_star: np.ndarray,
    theta_hat: np.ndarray,
    n: int,
    pairs: Sequence[tuple[int, int]],
    studentize: bool,
    variant: str,
) -> np.ndarray:
    """(B,) bootstrap max statistics over the pairs for one variant."""
    if variant not in _VARIANTS:
        raise ValueError(f"variant must be one of {_VARIANTS}, got {variant!r}")
    jj = np.asarray([j for j, _ in pairs])
    kk = np.asarray([k for _, k in pairs])
    num = (theta_star[:, jj] - theta_star[:, kk]) - (theta_hat[jj] - theta_hat[kk])
    if variant == "upper":
        num = -num
    elif variant == "symm":
        num = np.abs(num)
    if studentize:
        tj, tk = theta_star[:, jj], theta_star[:, kk]
        sig2 = tj * (1.0 - tj) + tk * (1.0 - tk) + 2.0 * tj * tk
        denom = np.sqrt(sig2) / math.sqrt(n)
        ratios = _safe_ratios(num, denom)
    else:
        ratios = num * math.sqrt(n)
    return ratios.max(axis=1)


def studentized_max_stat(
    sample_boot: MultinomialSample,
    theta_hat,
    pairs: Sequence[tuple[int, int]],
    studentize: bool = True,
    variant: str = "lower",
) -> float:
    """Max-over-pairs bootstrap statistic for a single resample.

    Parameters
    ----------
    sample_boot : MultinomialSample
        One bootstrap draw of counts.
    theta_hat : array-like or ProbabilityVector
        Frequencies of the original data the draw recenters on.
    pairs : sequence of (j, k)
        Category pairs entering the max.
    studentize : bool
        Divide each ratio by its resample standard deviation over
        ``sqrt(n)``; without it the scale is exactly ``sqrt(n)``.
    variant : {'lower', 'upper', 'symm'}
        Signed, sign-flipped, or absolute-value numerator.

    Returns
    -------
    float
        ``max_{(j,k)} (theta*_j - theta*_k - (theta^_j - theta^_k)) /
        (sigma*_{j,k} / sqrt(n))`` under the conventions ``0/0 = 0``
        and ``c/0 = sign(c) * inf``; may be ``+-inf``.
    """
    star = np.asarray(sample_boot.counts, dtype=float)[None, :] / sample_boot.n
    theta = _theta_array(theta_hat)
    return float(
        _pair_stats(star, theta, sample_boot.n, list(pairs), studentize, variant)[0]
    )


def bootstrap_quantile(values, level: float) -> float:
    """Empirical quantile under the left-continuous-inverse convention.

    Parameters
    ----------
    values : array-like of float
        Bootstrap draws; ``+-inf`` entries are legal and ordered
        normally.
    level : float
        Quantile level in (0, 1].

    Returns
    -------
    float
        The smallest value ``x`` with ``F_B(x) >= level``, i.e. the
        ``ceil(level * B)``-th order statistic (1-indexed).  ``+inf``
        is a legal return.
    """
    arr = np.sort(np.asarray(values, dtype=float))
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("values must be a non-empty 1-d collection")
    if np.isnan(arr).any():
        raise ValueError("values must not contain NaN")
    if not (0.0 < level <= 1.0):
        raise ValueError("level must lie in (0, 1]")
    # Round before ceil so that an exactly-integer level * B is not
    # bumped up by floating-point fuzz.
    k = math.ceil(round(level * arr.size, 9))
    return float(arr[max(k, 1) - 1])


@dataclass(frozen=True)
class DifferenceCS:
    """Simultaneous confidence intervals for pairwise differences.

    ``lo`` and ``hi`` map each pair ``(j, k)`` to interval endpoints
    for ``theta_j - theta_k``; one-sided shapes carry an infinite
    endpoint.  ``crit`` holds the bootstrap critical value(s): one
    entry for ``lower``/``upper``/``symm``, the pair of half-level
    values for ``equi``.  ``sigma`` is the per-pair scale of the
    original data (1 for every pair when not studentized).
    """

    pairs: tuple[tuple[int, int], ...]
    shape: str
    studentize: bool
    alpha: float
    crit: tuple[float, ...]
    lo: Mapping[tuple[int, int], float]
    hi: Mapping[tuple[int, int], float]
    sigma: Mapping[tuple[int, int], float]

    def interval(self, pair: tuple[int, int]) -> tuple[float, float]:
        return self.lo[pair], self.hi[pair]

    def contains(self, pair: tuple[int, int], delta: float) -> bool:
        return self.lo[pair] <= delta <= self.hi[pair]

    def covers(self, deltas: Mapping[tuple[int, int], float]) -> bool:
        """Whether every pair's interval contains its true difference."""
        return all(self.contains(pair, deltas[pair]) for pair in self.pairs)


def _sigma_hat(theta_hat: np.ndarray, jj: np.ndarray, kk: np.ndarray) -> np.ndarray:
    tj, tk = theta_hat[jj], theta_hat[kk]
    return np.sqrt(tj * (1.0 - tj) + tk * (1.0 - tk) + 2.0 * tj * tk)


def difference_cs(
    sample: MultinomialSample,
    config: BootstrapConfig,
    alpha: float = 0.05,
    pairs: Sequence[tuple[int, int]] | None = None,
) -> DifferenceCS:
    """Bootstrap confidence set for all pairwise differences at once.

    Parameters
    ----------
    sample : MultinomialSample
        Observed counts.
    config : BootstrapConfig
        Resampling knobs; ``config.shape`` picks the interval shape.
    alpha : float
        One minus the simultaneous coverage level over the pairs.
    pairs : sequence of (j, k), optional
        Pairs to cover; all ordered pairs by default.

    Returns
    -------
    DifferenceCS
        Per-pair intervals ``[d - c * scale, inf)``, ``(-inf, d + c *
        scale]``, ``d +- c * scale``, or the intersection of the two
        one-sided shapes at level ``1 - alpha/2`` (``equi``), where
        ``d`` is the estimated difference and ``scale`` is
        ``sigma_hat / sqrt(n)`` (``1 / sqrt(n)`` unstudentized).
    """
    if not (0.0 < alpha < 1.0):
        raise ValueError("alpha must lie strictly between 0 and 1")
    if pairs is None:
        p = sample.p
        pairs = [(j, k) for j in range(p) for k in range(p) if j != k]
    pairs = [(int(j), int(k)) for j, k in pairs]
    theta_hat = sample.theta_hat
    n = sample.n
    jj = np.asarray([j for j, _ in pairs])
    kk = np.asarray([k for _, k in pairs])
    d_hat = theta_hat[jj] - theta_hat[kk]
    if config.studentize:
        sigma = _sigma_hat(theta_hat, jj, kk)
    else:
        sigma = np.ones(len(pairs))
    scale = sigma / math.sqrt(n)

    star = _theta_star_matrix(sample, config)

    def crit(variant: str, level: float) -> float:
        stats = _pair_stats(star, theta_hat, n, pairs, config.studentize, variant)
        return bootstrap_quantile(stats, level)

    if config.shape == "lower":
        c = crit("lower", 1.0 - alpha)
        lo_arr = d_hat - _scaled(c, scale)
        hi_arr = np.full(len(pairs), np.inf)
        crits = (c,)
    elif config.shape == "upper":
        c = crit("upper", 1.0 - alpha)
        lo_arr = np.full(len(pairs), -np.inf)
        hi_arr = d_hat + _scaled(c, scale)
        crits = (c,)
    elif config.shape == "symm":
        c = crit("symm", 1.0 - alpha)
        lo_arr = d_hat - _scaled(c, scale)
        hi_arr = d_hat + _scaled(c, scale)
        crits = (c,)
    else:  # equi: both one-sided shapes at half level
        c_lo = crit("lower", 1.0 - alpha / 2)
        c_up = crit("upper", 1.0 - alpha / 2)
        lo_arr = d_hat - _scaled(c_lo, scale)
        hi_arr = d_hat + _scaled(c_up, scale)
        crits = (c_lo, c_up)

    pair_tuple = tuple(pairs)
    return DifferenceCS(
        pairs=pair_tuple,
        shape=config.shape,
        studentize=config.studentize,
        alpha=alpha,
        crit=crits,
        lo=dict(zip(pair_tuple, lo_arr.tolist())),
        hi=dict(zip(pair_tuple, hi_arr.tolist())),
        sigma=dict(zip(pair_tuple, sigma.tolist())),
    )


def _scaled(c: float, scale: np.ndarray) -> np.ndarray:
    """``c * scale`` treating an infinite ``c`` times zero scale as zero.

    A zero scale only happens for a pair with both observed
    frequencies zero, whose interval degenerates to the point estimate
    regardless of the critical value.
    """
    with np.errstate(invalid="ignore"):
        out = c * scale
    return np.where(scale == 0.0, 0.0, out)


def _band_half_width(dcs: DifferenceCS, n: int) -> float:
    """Common claim threshold for the rank readout of a difference CS.

    Every comparison in the family is held to the same half-width:
    the bootstrap critical value times the largest per-pair scale,
    ``c * max_sigma / sqrt(n)``.  The resulting band contains each
    per-pair interval, so simultaneous coverage carries over, and all
    pairs face an equal hurdle when claims are counted into rank
    bounds.  Without studentization every scale is 1 and the band
    coincides with the per-pair intervals.
    """
    c = dcs.crit[0]
    scale = max(dcs.sigma.values()) / math.sqrt(n)
    if scale == 0.0:
        return 0.0
    return c * scale


def boot_rank_cs(
    sample: MultinomialSample,
    J0: Iterable[int] | None = None,
    kind: str = "two_sided",
    alpha: float = 0.05,
    config: BootstrapConfig | None = None,
) -> RankSet:
    """Rank confidence set driven by a bootstrap difference band.

    One-sided kinds calibrate the lower-variant max statistic over the
    matching family; the two-sided kind calibrates the symmetric
    variant over the pairs anchored at each category of interest.
    Either way the claims use a constant-width band: a comparison is
    rejected only when its estimated difference clears the critical
    value times the largest per-pair scale in the family (over
    ``sqrt(n)``), so every pair faces the same threshold.  Without
    studentization all scales equal 1 and the band reduces to the
    per-pair intervals of :func:`difference_cs`.

    Parameters
    ----------
    sample : MultinomialSample
        Observed counts.
    J0 : iterable of int, optional
        0-based categories of interest; all categories by default.
    kind : {'lower', 'upper', 'two_sided'}
        Sidedness of the rank bounds.
    alpha : float
        One minus the simultaneous coverage level over ``J0``.
    config : BootstrapConfig, optional
        Resampling knobs; the shape is chosen by ``kind`` and any
        shape set on the config is ignored.

    Returns
    -------
    RankSet
        Method is ``"bootStud"`` or ``"boot"`` per
        ``config.studentize``.
    """
    if config is None:
        config = BootstrapConfig()
    j0 = tuple(range(sample.p)) if J0 is None else J0
    family = build_index_family(kind, j0, sample.p)
    method = "bootStud" if config.studentize else "boot"

    theta_hat = sample.theta_hat
    if kind in ("lower", "upper"):
        shaped = BootstrapConfig(
            B=config.B, seed=config.seed,
            studentize=config.studentize, shape="lower",
        )
        dcs = difference_cs(sample, shaped, alpha, family.pairs)
        half = _band_half_width(dcs, sample.n)
        rejected = [
            (j, k) for j, k in family.pairs
            if theta_hat[j] - theta_hat[k] > half
        ]
        rej = PairwiseRejections.from_claims(family, rejected)
    else:
        anchored = build_index_family("upper", family.J0, sample.p)
        shaped = BootstrapConfig(
            B=config.B, seed=config.seed,
            studentize=config.studentize, shape="symm",
        )
        dcs = difference_cs(sample, shaped, alpha, anchored.pairs)
        half = _band_half_width(dcs, sample.n)
        minus = {
            j: frozenset(
                k for k in range(sample.p)
                if k != j and theta_hat[j] - theta_hat[k] < -half
            )
            for j in family.J0
        }
        plus = {
            j: frozenset(
                k for k in range(sample.p)
                if k != j and theta_hat[j] - theta_hat[k] > half
            )
            for j in family.J0
        }
        rej = PairwiseRejections(J0=family.J0, rej_minus=minus, rej_plus=plus)

    return rankset_from_rejections(
        rej, sample.p, method=method, alpha=alpha, kind=kind
    )


def _rank_matrix(theta_star: np.ndarray) -> np.ndarray:
    """(B, p) best ranks of each resampled frequency vector."""
    greater = theta_star[:, None, :] > theta_star[:, :, None]
    return 1 + greater.sum(axis=2)


def naive_rank_cs(
    sample: MultinomialSample,
    J0: Iterable[int] | None = None,
    alpha: float = 0.05,
    config: BootstrapConfig | None = None,
) -> RankSet:
    """Rank interval from empirical quantiles of resampled ranks.

    Each resample is re-ranked and category ``j``'s interval runs from
    the ``floor(alpha/2 * B) + 1``-th to the ``ceil((1 - alpha/2) *
    B)``-th order statistic of its ``B`` resampled ranks.  Kept as a
    baseline: with (near-)tied categories the resampled ranks
    concentrate away from the admissible-rank interval and the
    procedure under-covers badly.
    """
    if config is None:
        config = BootstrapConfig()
    if not (0.0 < alpha < 1.0):
        raise ValueError("alpha must lie strictly between 0 and 1")
    j0 = tuple(range(sample.p)) if J0 is None else tuple(sorted({int(j) for j in J0}))
    star = _theta_star_matrix(sample, config)
    ranks = np.sort(_rank_matrix(star), axis=0)
    B = config.B
    lo_idx = min(math.floor(round(alpha / 2 * B, 9)) + 1, B)
    hi_idx = max(math.ceil(round((1.0 - alpha / 2) * B, 9)), 1)
    lo = {j: int(ranks[lo_idx - 1, j]) for j in j0}
    hi = {j: int(ranks[hi_idx - 1, j]) for j in j0}
    return RankSet(
        p=sample.p, J0=j0, lo=lo, hi=hi,
        method="naive", alpha=alpha, kind="two_sided",
    )
