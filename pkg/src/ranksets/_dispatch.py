"""Name-based dispatch over the rank confidence-set procedures.

Public method names follow the reporting convention (``exactBonf``,
``exactHolm``, ``cp``, ``boot``, ``bootStud``, ``naive``); snake_case
aliases are accepted for API ergonomics.
"""

from __future__ import annotations

from typing import Iterable

from .boot import BootstrapConfig, boot_rank_cs, naive_rank_cs
from .core import MultinomialSample, RankSet
from .cp import cp_rank_cs
from .exact import exact_rank_cs

__all__ = ["METHOD_NAMES", "normalize_method", "rank_cs"]

METHOD_NAMES = ("exactBonf", "exactHolm", "cp", "boot", "bootStud", "naive")

_ALIASES = {
    "exactbonf": "exactBonf",
    "exact_bonf": "exactBonf",
    "exactholm": "exactHolm",
    "exact_holm": "exactHolm",
    "cp": "cp",
    "boot": "boot",
    "bootstud": "bootStud",
    "boot_stud": "bootStud",
    "naive": "naive",
}


def normalize_method(name: str) -> str:
    """Map a method name or alias to its canonical reporting name."""
    try:
        return _ALIASES[name.strip().lower()]
    except KeyError:
        raise ValueError(
            f"unknown method {name!r}; expected one of {METHOD_NAMES}"
        ) from None


def rank_cs(
    method: str,
    sample: MultinomialSample,
    J0: Iterable[int] | None = None,
    kind: str = "two_sided",
    alpha: float = 0.05,
    config: BootstrapConfig | None = None,
) -> RankSet:
    """Run one named procedure and return its rank confidence set."""
    canonical = normalize_method(method)
    if canonical == "exactBonf":
        return exact_rank_cs(sample, J0, kind, alpha, correction="bonferroni")
    if canonical == "exactHolm":
        return exact_rank_cs(sample, J0, kind, alpha, correction="holm")
    if canonical == "cp":
        return cp_rank_cs(sample, J0, kind, alpha)
    if config is None:
        config = BootstrapConfig()
    if canonical == "boot":
        cfg = BootstrapConfig(B=config.B, seed=config.seed,
                              studentize=False, shape=config.shape)
        return boot_rank_cs(sample, J0, kind, alpha, cfg)
    if canonical == "bootStud":
        cfg = BootstrapConfig(B=config.B, seed=config.seed,
                              studentize=True, shape=config.shape)
        return boot_rank_cs(sample, J0, kind, alpha, cfg)
    # naive
    if kind != "two_sided":
        raise ValueError("the naive bootstrap only supports two-sided sets")
    return naive_rank_cs(sample, J0, alpha, config)
