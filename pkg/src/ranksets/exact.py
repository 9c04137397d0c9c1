"""Exact conditional pairwise tests and finite-sample rank confidence sets.

The comparison of two multinomial categories reduces, conditional on
the sum of their counts ``s = X_j + X_k``, to a binomial problem:
under the boundary of ``H: theta_j <= theta_k`` the first count is
Binomial(s, 1/2).  The one-sided p-value is therefore an exact
binomial tail, computable in integer arithmetic, and any familywise
error correction over a family of such tests yields rank confidence
sets with finite-sample coverage via the rejection-counting
construction in :mod:`ranksets.core`.

Inference always uses the non-randomized rule "reject iff p-value <=
threshold".  The randomized-test constants ``C(s), gamma(s)`` are
computed for completeness and testing only, never to randomize actual
rejections.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from .core import (
    IndexFamily,
    MultinomialSample,
    PairwiseRejections,
    RankSet,
    build_index_family,
    rankset_from_rejections,
)

__all__ = [
    "PairwisePValueTable",
    "TestConstants",
    "conditional_pvalue",
    "test_constants",
    "pairwise_pvalues",
    "bonferroni_reject",
    "holm_reject",
    "exact_rank_cs",
]

CORRECTIONS = ("bonferroni", "holm")


@lru_cache(maxsize=None)
def _tail_numerator(x: int, s: int) -> int:
    """Integer numerator of P{Bin(s, 1/2) >= x}, i.e. sum_{i=x}^{s} C(s, i)."""
    return sum(math.comb(s, i) for i in range(x, s + 1))


@lru_cache(maxsize=None)
def conditional_pvalue(x_j: int, x_k: int) -> float:
    """Exact one-sided p-value for ``theta_j <= theta_k`` given the counts.

    Parameters
    ----------
    x_j, x_k : int
        Non-negative counts of the two categories.

    Returns
    -------
    float
        ``2**-s * sum_{i=x_j}^{s} C(s, i)`` with ``s = x_j + x_k``,
        evaluated in exact integer arithmetic (the final division is
        correctly rounded).  Always in ``(0, 1]``; a pair with
        ``s = 0`` carries no evidence and returns 1.
    """
    x_j, x_k = int(x_j), int(x_k)
    if x_j < 0 or x_k < 0:
        raise ValueError("counts must be non-negative")
    s = x_j + x_k
    return _tail_numerator(x_j, s) / (1 << s)


@dataclass(frozen=True)
class TestConstants:
    """Cutoff and randomization weight of the level-beta conditional test.

    The randomized test rejects outright when the first count exceeds
    ``C``, rejects with probability ``gamma`` at ``C`` exactly, and
    accepts below; ``tail(C + 1) <= beta < tail(C)`` with ``gamma``
    absorbing the remaining level.  The equivalent non-randomized rule
    is "reject iff the p-value is <= beta", i.e. iff ``x_j > C``.
    """

    s: int
    beta: float
    C: int
    gamma: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.gamma < 1.0):
            raise ValueError(f"gamma={self.gamma} outside [0, 1)")


def test_constants(s: int, beta: float) -> TestConstants:
    """Solve for the randomized-test constants at conditioning sum ``s``.

    Parameters
    ----------
    s : int
        Conditioning sum of the two counts, ``s >= 0``.
    beta : float
        Test level, ``0 < beta < 1``.

    Returns
    -------
    TestConstants
        The smallest cutoff ``C`` with ``tail(C + 1) <= beta`` and the
        weight ``gamma`` solving ``tail(C + 1) + gamma * C(s, C) *
        2**-s = beta`` exactly, where ``tail(c) = 2**-s *
        sum_{i=c}^{s} C(s, i)``.
    """
    s = int(s)
    if s < 0:
        raise ValueError("s must be non-negative")
    if not (0.0 < beta < 1.0):
        raise ValueError("beta must lie strictly between 0 and 1")
    beta_exact = Fraction(beta)
    denom = 1 << s
    # Walk the cutoff down from the full tail until it fits under beta.
    cutoff = 0
    while Fraction(_tail_numerator(cutoff + 1, s), denom) > beta_exact:
        cutoff += 1
    overshoot = beta_exact - Fraction(_tail_numerator(cutoff + 1, s), denom)
    gamma = overshoot / Fraction(math.comb(s, cutoff), denom)
    return TestConstants(s=s, beta=beta, C=cutoff, gamma=float(gamma))


@dataclass(frozen=True)
class PairwisePValueTable:
    """Exact p-values for every comparison in an index family."""

    family: IndexFamily
    pvalues: Mapping[tuple[int, int], float]
    s: Mapping[tuple[int, int], int]

    def __post_init__(self) -> None:
        missing = set(self.family.pairs) - set(self.pvalues)
        if missing:
            raise ValueError(f"missing p-values for pairs {sorted(missing)}")


def pairwise_pvalues(
    sample: MultinomialSample, family: IndexFamily
) -> PairwisePValueTable:
    """Evaluate the conditional test p-value for every family pair."""
    counts = sample.counts
    pvals = {
        (j, k): conditional_pvalue(counts[j], counts[k])
        for j, k in family.pairs
    }
    sums = {(j, k): counts[j] + counts[k] for j, k in family.pairs}
    return PairwisePValueTable(family=family, pvalues=pvals, s=sums)


def bonferroni_reject(
    table: PairwisePValueTable, alpha: float
) -> PairwiseRejections:
    """Reject every pair whose p-value is at most ``alpha / |I|``."""
    _check_alpha(alpha)
    m = len(table.family)
    threshold = alpha / m
    rejected = [
        pair for pair in table.family.pairs
        if table.pvalues[pair] <= threshold
    ]
    return PairwiseRejections.from_claims(table.family, rejected)


def holm_reject(
    table: PairwisePValueTable, alpha: float
) -> PairwiseRejections:
    """Step-down rejection: strictly more powerful than Bonferroni.

    P-values are visited in increasing order (ties broken by pair
    index for determinism; the outcome is unaffected because equal
    p-values meet or miss the binding threshold together) and the
    ``l``-th smallest is rejected iff every earlier one passed its own
    threshold ``alpha / (|I| + 1 - l)``.
    """
    _check_alpha(alpha)
    m = len(table.family)
    ordered = sorted(table.family.pairs, key=lambda pair: (table.pvalues[pair], pair))
    rejected = []
    for idx, pair in enumerate(ordered):
        if table.pvalues[pair] <= alpha / (m - idx):
            rejected.append(pair)
        else:
            break
    return PairwiseRejections.from_claims(table.family, rejected)


def _check_alpha(alpha: float) -> None:
    if not (0.0 < alpha < 1.0):
        raise ValueError("alpha must lie strictly between 0 and 1")


def exact_rank_cs(
    sample: MultinomialSample,
    J0: Iterable[int] | None = None,
    kind: str = "two_sided",
    alpha: float = 0.05,
    correction: str = "holm",
) -> RankSet:
    """Finite-sample confidence set for the ranks of selected categories.

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
    correction : {'bonferroni', 'holm'}
        Familywise error correction for the pairwise tests.

    Returns
    -------
    RankSet
        Rank intervals with simultaneous finite-sample coverage at
        least ``1 - alpha``.
    """
    if correction not in CORRECTIONS:
        raise ValueError(
            f"correction must be one of {CORRECTIONS}, got {correction!r}"
        )
    j0 = tuple(range(sample.p)) if J0 is None else J0
    family = build_index_family(kind, j0, sample.p)
    table = pairwise_pvalues(sample, family)
    if correction == "bonferroni":
        rej = bonferroni_reject(table, alpha)
        method = "exactBonf"
    else:
        rej = holm_reject(table, alpha)
        method = "exactHolm"
    return rankset_from_rejections(
        rej, sample.p, method=method, alpha=alpha, kind=kind
    )
