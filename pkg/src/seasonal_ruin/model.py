"""The N-seasonal discrete-time risk model and its net-profit classification.

Surplus evolves as ``W_u(n) = u + n - (Z_1 + ... + Z_n)`` with claim laws
repeating every ``N`` steps; one unit of premium arrives per step.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidArgument, InvalidModel
from .pmf import IntegerPMF, convolve_all

MAX_SEASONS = 16
EPS_NPC = 1e-9


@dataclass(frozen=True)
class SeasonalModel:
    claims: tuple
    s_n: IntegerPMF

    @property
    def n_seasons(self) -> int:
        return len(self.claims)

    @property
    def mean_s_n(self) -> float:
        """E S_N as the sum of seasonal means."""
        return float(sum(c.mean for c in self.claims))

    @property
    def z0(self) -> np.ndarray:
        return np.array([c.z0 for c in self.claims])

    @property
    def tail_mass(self) -> float:
        return self.s_n.tail_mass


def build_model(claims: Sequence[IntegerPMF], max_seasons: int = MAX_SEASONS) -> SeasonalModel:
    claims = tuple(claims)
    if not claims:
        raise InvalidModel("a model needs at least one season")
    if len(claims) > max_seasons:
        raise InvalidModel(f"{len(claims)} seasons exceeds the configured maximum {max_seasons}")
    for c in claims:
        if not isinstance(c, IntegerPMF):
            raise InvalidModel("claims must be IntegerPMF instances")
    return SeasonalModel(claims=claims, s_n=convolve_all(claims))


class Regime(enum.Enum):
    NET_PROFIT = "NetProfit"
    SUPERCRITICAL = "Supercritical"
    CRITICAL_NONDEGENERATE = "CriticalNondegenerate"
    CRITICAL_DEGENERATE = "CriticalDegenerate"


@dataclass(frozen=True)
class ModelClass:
    """Regime of a model.

    ``t_star``/``min_drift`` are filled whenever every claim is a point mass
    (the walk is deterministic), not only in the critical degenerate regime.
    """

    tag: Regime
    mean_s_n: float
    n_seasons: int
    t_star: Optional[int] = None
    min_drift: Optional[int] = None


def classify(model: SeasonalModel, eps_npc: float = EPS_NPC) -> ModelClass:
    """Place the model in exactly one regime.

    The all-point-mass case with ``S_N == N`` is detected structurally, so a
    truncated infinite-support law can never land there.
    """
    n = model.n_seasons
    mean = model.mean_s_n
    t_star = min_drift = None
    if all(c.is_point_mass() for c in model.claims):
        values = np.array([c.min_support for c in model.claims])
        drift = np.arange(1, n + 1) - np.cumsum(values)
        t_star = int(np.argmin(drift)) + 1
        min_drift = int(drift[t_star - 1])
        if values.sum() == n:
            return ModelClass(Regime.CRITICAL_DEGENERATE, mean, n, t_star, min_drift)
    if mean < n - eps_npc:
        tag = Regime.NET_PROFIT
    elif mean > n + eps_npc:
        tag = Regime.SUPERCRITICAL
    else:
        tag = Regime.CRITICAL_NONDEGENERATE
    return ModelClass(tag, mean, n, t_star, min_drift)


def degenerate_survival(cls: ModelClass, u: int) -> int:
    """Survival (0 or 1) of the deterministic critical walk from surplus ``u``."""
    if cls.tag is not Regime.CRITICAL_DEGENERATE:
        raise InvalidArgument(f"expected a CriticalDegenerate model, got {cls.tag.value}")
    return 0 if u + cls.min_drift <= 0 else 1
